#pragma once

// Slow, independent reference computations used to check the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;

inline Q q(long num, long den = 1) {
    Q x(num, den);
    x.canonicalize();
    return x;
}

inline Q frac(const Q& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return x - Q(f);
}

/// Euclid on a/b, 0 < a < b.
inline std::vector<long> euclid(long a, long b) {
    std::vector<long> out;
    while (a != 0) {
        out.push_back(b / a);
        const long r = b % a;
        b = a;
        a = r;
    }
    return out;
}

/// [0; a_1, ..., a_k] evaluated from the tail.
inline Q cf_value(const std::vector<long>& a) {
    Q x = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) x = 1 / (Q(*it) + x);
    return x;
}

/// First `depth` quotients of golden [0;(1)], silver [0;(2)], [0;1,2,(3)], ...
inline std::vector<long> expand(const std::vector<long>& prefix, const std::vector<long>& period, std::size_t depth) {
    std::vector<long> out;
    for (std::size_t i = 0; i < depth; ++i)
        out.push_back(i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()]);
    return out;
}

/// Gap multiset of {j t mod 1 : j = 0..n} by sorting.
inline std::map<Q, long> sorted_gaps(const Q& t, long n) {
    std::vector<Q> pts;
    for (long j = 0; j <= n; ++j) pts.push_back(frac(Q(j) * t));
    std::sort(pts.begin(), pts.end());
    std::map<Q, long> gaps;
    for (std::size_t i = 1; i < pts.size(); ++i) ++gaps[pts[i] - pts[i - 1]];
    ++gaps[Q(1) - pts.back()];
    return gaps;
}

/// Fewest elements with sum > threshold, by enumerating how many of each
/// distinct value are taken.
inline long exhaustive_cover(const std::vector<std::pair<Q, long>>& values, const Q& threshold) {
    long best = -1;
    std::vector<long> take(values.size(), 0);
    for (;;) {
        Q sum = 0;
        long cnt = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum += values[i].first * take[i];
            cnt += take[i];
        }
        if (sum > threshold && (best < 0 || cnt < best)) best = cnt;
        std::size_t i = 0;
        while (i < values.size() && take[i] == values[i].second) take[i++] = 0;
        if (i == values.size()) break;
        ++take[i];
    }
    return best;
}

/// Distinct length-n windows by brute force.
inline long distinct_windows(const std::vector<std::uint8_t>& w, std::size_t n) {
    std::vector<std::vector<std::uint8_t>> seen;
    for (std::size_t i = 0; i + n <= w.size(); ++i) seen.emplace_back(w.begin() + i, w.begin() + i + n);
    std::sort(seen.begin(), seen.end());
    return std::unique(seen.begin(), seen.end()) - seen.begin();
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
