#include "slowent/rotation_gaps.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "lattice.hpp"
#include "slowent/errors.hpp"

namespace slowent {

void GapStructure::check() const {
    if (small.count + middle.count + large.count != n + 1) throw std::logic_error("gap counts do not sum to n+1");
    if (small.length * small.count + middle.length * middle.count + large.length * large.count != 1)
        throw std::logic_error("gap lengths do not sum to 1");
    if (large.length != small.length + middle.length) throw std::logic_error("large gap is not small + middle");
    if (small.length <= 0 || middle.length <= 0) throw std::logic_error("nonpositive gap length");
    if (small.count < 0 || middle.count < 1 || large.count < 0) throw std::logic_error("bad gap multiplicity");
}

MeasureMultiset GapStructure::multiset() const {
    MeasureMultiset out;
    out.add(small.length, small.count);
    out.add(middle.length, middle.count);
    out.add(large.length, large.count);
    return out;
}

namespace {

std::int64_t positive_n(std::int64_t n) {
    if (n < 1) throw DomainError("horizon n must be >= 1");
    return n;
}

// Orbit numerators j * step mod den for j = 0..n, sorted, with separation certified.
std::vector<std::int64_t> sorted_orbit(const IrrationalParam& t, std::int64_t n, std::int64_t& den) {
    positive_n(n);
    const auto lat = detail::make_rotation_lattice(t, {});
    den = lat.den;
    if (t.is_exact() && n >= den)
        throw DomainError("rational rotation " + to_pq(t.proxy()) + " repeats before " + std::to_string(n + 1) +
                          " points");
    std::vector<std::int64_t> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    std::int64_t x = 0;
    for (std::int64_t j = 0; j <= n; ++j) {
        pts.push_back(x);
        x = lat.advance(x);
    }
    std::sort(pts.begin(), pts.end());
    std::int64_t min_gap = den - pts.back();
    for (std::size_t i = 1; i < pts.size(); ++i) min_gap = std::min(min_gap, pts[i] - pts[i - 1]);
    if (min_gap == 0) throw PrecisionError("orbit points coincide at depth " + std::to_string(t.depth()));
    // each point moves by at most n * err, so gaps keep their order while 2 n err < min gap
    const Rational drift = 2 * Rational(Integer(static_cast<long>(n))) * t.error_bound();
    if (!(Rational(Integer(static_cast<long>(min_gap)), Integer(static_cast<long>(den))) > drift))
        throw PrecisionError("gap order not certified at depth " + std::to_string(t.depth()) + "; deepen");
    return pts;
}

}  // namespace

std::vector<Rational> partition_endpoints(const IrrationalParam& theta_prime, std::int64_t n) {
    std::int64_t den = 1;
    const auto pts = sorted_orbit(theta_prime, n, den);
    std::vector<Rational> out;
    out.reserve(pts.size());
    for (auto p : pts) out.push_back(make_rational(p, den));
    return out;
}

MeasureMultiset sorted_gap_multiset(const IrrationalParam& theta_prime, std::int64_t n) {
    std::int64_t den = 1;
    const auto pts = sorted_orbit(theta_prime, n, den);
    std::vector<std::int64_t> diffs;
    diffs.reserve(pts.size());
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(pts[i] - pts[i - 1]);
    diffs.push_back(den - pts.back());
    std::sort(diffs.begin(), diffs.end());
    MeasureMultiset out;
    for (std::size_t i = 0; i < diffs.size();) {
        std::size_t j = i;
        while (j < diffs.size() && diffs[j] == diffs[i]) ++j;
        out.add(make_rational(diffs[i], den), static_cast<std::int64_t>(j - i));
        i = j;
    }
    return out;
}

GapStructure gap_structure(const IrrationalParam& theta_prime, std::int64_t n) {
    positive_n(n);
    const ConvergentTable t = theta_prime.table();
    const Integer N{static_cast<long>(n)};
    std::ptrdiff_t k = 0;
    for (;;) {
        if (static_cast<std::size_t>(k + 1) > t.depth())
            throw PrecisionError("continued fraction too shallow for horizon " + std::to_string(n));
        if (N <= t.q(k + 1) + t.q(k) - 1) break;
        ++k;
    }
    const std::int64_t qk = to_int64(t.q(k));
    const std::int64_t qk_1 = to_int64(t.q(k - 1));
    const CertifiedRational ek = eta(theta_prime, k);
    const CertifiedRational ek_1 = eta(theta_prime, k - 1);

    GapStructure g;
    g.n = n;
    g.k = k;
    g.m = (n - qk_1) / qk;
    g.r = (n - qk_1) % qk;
    g.small = {ek.value, n + 1 - qk};
    g.middle = {ek_1.value - g.m * ek.value, g.r + 1};
    g.large = {ek_1.value - (g.m - 1) * ek.value, qk - g.r - 1};
    g.check();
    return g;
}

MeasureMultiset cylinder_measures(const IrrationalParam& theta, std::int64_t n) {
    return gap_structure(theta.complement(), n).multiset();
}

std::int64_t cover_count(const IrrationalParam& theta, std::int64_t n, const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1) throw DomainError("epsilon must lie in (0,1)");
    return greedy_cover_count(cylinder_measures(theta, n), 1 - epsilon);
}

std::vector<SubsequencePoint> semitop_subsequence(const IrrationalParam& theta, const Rational& epsilon,
                                                  std::size_t k_max) {
    const IrrationalParam tp = theta.complement();
    const ConvergentTable t = tp.table();
    std::vector<SubsequencePoint> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k + 1 > t.depth()) throw PrecisionError("continued fraction too shallow for k = " + std::to_string(k));
        const auto kk = static_cast<std::ptrdiff_t>(k);
        const std::int64_t n = to_int64(t.q(kk + 1) + t.q(kk) - 1);
        SubsequencePoint p;
        p.k = k;
        p.n = n;
        p.cover = greedy_cover_count(gap_structure(tp, n).multiset(), 1 - epsilon);
        p.ratio = static_cast<double>(p.cover) / static_cast<double>(n);
        out.push_back(p);
    }
    return out;
}

MeasureMultiset product_cylinder_measures(const std::vector<IrrationalParam>& thetas, std::int64_t n) {
    if (thetas.empty()) throw DomainError("product of zero rotations");
    MeasureMultiset acc;
    acc.add(Rational{1}, 1);
    for (const auto& th : thetas) {
        const MeasureMultiset factor = cylinder_measures(th, n);
        MeasureMultiset next;
        for (const auto& a : acc.entries())
            for (const auto& b : factor.entries()) next.add(a.value * b.value, a.count * b.count);
        acc = std::move(next);
    }
    return acc;
}

std::int64_t product_cover_count(const std::vector<IrrationalParam>& thetas, std::int64_t n,
                                 const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1) throw DomainError("epsilon must lie in (0,1)");
    return greedy_cover_count(product_cylinder_measures(thetas, n), 1 - epsilon);
}

std::string gap_csv_header() {
    return "n,k,m,r,gap_small,count_small,gap_mid,count_mid,gap_large,count_large";
}

std::string gap_csv_row(const GapStructure& g) {
    std::ostringstream os;
    os << g.n << ',' << g.k << ',' << g.m << ',' << g.r << ',' << to_pq(g.small.length) << ',' << g.small.count
       << ',' << to_pq(g.middle.length) << ',' << g.middle.count << ',' << to_pq(g.large.length) << ','
       << g.large.count;
    return os.str();
}

}  // namespace slowent
