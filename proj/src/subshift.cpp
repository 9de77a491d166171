#include "slowent/subshift.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "lattice.hpp"
#include "slowent/errors.hpp"
#include "slowent/rotation_gaps.hpp"

namespace slowent {

void Word::validate() const {
    if (alphabet_size < 1 || alphabet_size > 256) throw DomainError("alphabet size must be in 1..256");
    for (auto s : symbols)
        if (s >= alphabet_size) throw DomainError("symbol outside the alphabet");
}

std::string to_digits(const Word& w) {
    if (w.alphabet_size > 10) throw DomainError("digit serialization needs alphabet <= 10");
    std::string out(w.symbols.size(), '0');
    for (std::size_t i = 0; i < w.symbols.size(); ++i) out[i] = static_cast<char>('0' + w.symbols[i]);
    return out;
}

Word parse_digits(std::string_view digits, int alphabet_size) {
    Word w;
    w.alphabet_size = alphabet_size;
    w.symbols.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9') throw ConstructionError("word must consist of digits");
        w.symbols.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    w.validate();
    return w;
}

std::string_view to_string(ComplexityMethod method) {
    switch (method) {
        case ComplexityMethod::windowed: return "windowed";
        case ComplexityMethod::partition_exact: return "partition-exact";
        case ComplexityMethod::product_formula: return "product-formula";
    }
    return "unknown";
}

CodedWord sturmian_word(const IrrationalParam& theta, const Rational& beta, std::int64_t length) {
    if (length < 1) throw DomainError("word length must be >= 1");
    if (beta < 0 || beta >= 1) throw DomainError("start point must lie in [0,1)");
    const auto lat = detail::make_rotation_lattice(theta, {beta});
    const std::int64_t cut = lat.den - lat.step;
    const detail::DriftGuard guard(theta.error_bound(), lat.den, length + 1);

    CodedWord out;
    out.rational_rotation = theta.is_exact();
    out.word.alphabet_size = 2;
    out.word.symbols.resize(static_cast<std::size_t>(length));
    std::int64_t x = lat.coord(beta);
    for (std::int64_t i = 0; i < length; ++i) {
        // the cut 1 - theta carries one proxy error, the orbit point i more
        if (guard.check(detail::circle_dist(x, cut, lat.den), i + 1)) ++out.endpoint_hits;
        if (i > 0 && guard.check(std::min(x, lat.den - x), i)) ++out.endpoint_hits;
        out.word.symbols[static_cast<std::size_t>(i)] = x >= cut ? 1 : 0;
        x = lat.advance(x);
    }
    return out;
}

namespace {

// Distinct fixed-length windows, hashed by a rolling polynomial and confirmed
// by comparing the symbols themselves.
class WindowSet {
public:
    WindowSet(const std::vector<std::uint8_t>& s, std::size_t n) : s_(s), n_(n) {}

    void insert(std::size_t pos, std::uint64_t hash) {
        auto [it, fresh] = head_.try_emplace(hash, static_cast<std::int64_t>(reps_.size()));
        if (!fresh) {
            for (std::int64_t r = it->second; r >= 0; r = next_[static_cast<std::size_t>(r)])
                if (std::memcmp(&s_[reps_[static_cast<std::size_t>(r)]], &s_[pos], n_) == 0) return;
            next_.push_back(it->second);
            it->second = static_cast<std::int64_t>(reps_.size());
        } else {
            next_.push_back(-1);
        }
        reps_.push_back(pos);
    }
    std::int64_t size() const { return static_cast<std::int64_t>(reps_.size()); }

private:
    const std::vector<std::uint8_t>& s_;
    std::size_t n_;
    std::unordered_map<std::uint64_t, std::int64_t> head_;
    std::vector<std::size_t> reps_;
    std::vector<std::int64_t> next_;
};

}  // namespace

FactorCount complexity_windowed(const Word& word, std::int64_t n) {
    if (n < 1) throw DomainError("window length must be >= 1");
    if (static_cast<std::size_t>(n) > word.size()) throw DomainError("window longer than the word");
    const auto& s = word.symbols;
    const auto un = static_cast<std::size_t>(n);
    constexpr std::uint64_t base = 0x9E3779B97F4A7C15ULL;
    std::uint64_t top = 1;  // base^(n-1)
    for (std::size_t i = 1; i < un; ++i) top *= base;

    WindowSet set(s, un);
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < un; ++i) h = h * base + (s[i] + 1u);
    set.insert(0, h);
    for (std::size_t i = un; i < s.size(); ++i) {
        h = (h - (s[i - un] + 1u) * top) * base + (s[i] + 1u);
        set.insert(i - un + 1, h);
    }
    return {n, set.size(), ComplexityMethod::windowed};
}

std::vector<FactorCount> complexity_profile_windowed(const Word& word, std::int64_t n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (static_cast<std::size_t>(n_max) > word.size()) throw DomainError("window longer than the word");
    word.validate();
    const auto& s = word.symbols;
    const std::size_t L = s.size();
    const auto A = static_cast<std::size_t>(word.alphabet_size);

    // ids[i] is the class of the window of the current length starting at i;
    // extending by one symbol refines classes by (class, next symbol).
    std::vector<std::int32_t> ids(L);
    std::vector<std::int32_t> first(A, -1);
    std::int32_t classes = 0;
    for (std::size_t i = 0; i < L; ++i) {
        if (first[s[i]] < 0) first[s[i]] = classes++;
        ids[i] = first[s[i]];
    }
    std::vector<FactorCount> out;
    out.push_back({1, classes, ComplexityMethod::windowed});

    std::vector<std::int32_t> relabel;
    std::unordered_map<std::uint64_t, std::int32_t> sparse;
    constexpr std::size_t dense_limit = std::size_t{1} << 26;
    for (std::int64_t n = 1; n < n_max; ++n) {
        const std::size_t windows = L - static_cast<std::size_t>(n);
        if (static_cast<std::size_t>(classes) == windows + 1) {
            // every window already distinct; longer ones stay distinct
            out.push_back({n + 1, static_cast<std::int64_t>(windows), ComplexityMethod::windowed});
            classes = static_cast<std::int32_t>(windows);
            continue;
        }
        const std::size_t keys = static_cast<std::size_t>(classes) * A;
        std::int32_t next = 0;
        if (keys <= dense_limit) {
            relabel.assign(keys, -1);
            for (std::size_t i = 0; i < windows; ++i) {
                auto& slot = relabel[static_cast<std::size_t>(ids[i]) * A + s[i + static_cast<std::size_t>(n)]];
                if (slot < 0) slot = next++;
                ids[i] = slot;
            }
        } else {
            sparse.clear();
            for (std::size_t i = 0; i < windows; ++i) {
                const std::uint64_t key = static_cast<std::uint64_t>(ids[i]) * A + s[i + static_cast<std::size_t>(n)];
                auto [it, fresh] = sparse.try_emplace(key, next);
                if (fresh) ++next;
                ids[i] = it->second;
            }
        }
        classes = next;
        out.push_back({n + 1, classes, ComplexityMethod::windowed});
    }
    return out;
}

FactorCount complexity_exact_rotation(const IrrationalParam& theta, std::int64_t n) {
    if (n < 1) throw DomainError("n must be >= 1");
    const IrrationalParam tp = theta.complement();
    if (tp.is_exact()) {
        // the cuts {j theta' : j = 0..n} repeat with period equal to the denominator
        const std::int64_t den = denominator_int64(tp.proxy());
        return {n, std::min(n + 1, den), ComplexityMethod::partition_exact};
    }
    const auto cuts = partition_endpoints(tp, n);
    const auto count = static_cast<std::int64_t>(cuts.size());
    if (cylinder_measures(theta, n).total_count() != count)
        throw std::logic_error("cylinder count disagrees with the partition count");
    return {n, count, ComplexityMethod::partition_exact};
}

FactorCount product_complexity(const std::vector<IrrationalParam>& thetas, std::int64_t n) {
    if (thetas.empty()) throw DomainError("product of zero rotations");
    if (n < 1) throw DomainError("n must be >= 1");
    for (std::size_t i = 0; i < thetas.size(); ++i)
        for (std::size_t j = i + 1; j < thetas.size(); ++j)
            if (thetas[i].cf() == thetas[j].cf() || thetas[i].proxy() == thetas[j].proxy())
                throw DomainError("product rotation numbers must be pairwise distinct");
    std::int64_t count = 1;
    for (std::size_t i = 0; i < thetas.size(); ++i)
        if (__builtin_mul_overflow(count, n + 1, &count)) throw ResourceError("(n+1)^m overflows int64");
    return {n, count, ComplexityMethod::product_formula};
}

CodedWord product_word(const std::vector<IrrationalParam>& thetas, const std::vector<Rational>& betas,
                       std::int64_t length) {
    if (thetas.empty() || thetas.size() > 8) throw DomainError("product needs 1..8 rotations");
    if (betas.size() != thetas.size()) throw DomainError("one start point per rotation");
    CodedWord out;
    out.word.alphabet_size = 1 << thetas.size();
    out.word.symbols.assign(static_cast<std::size_t>(length), 0);
    for (std::size_t c = 0; c < thetas.size(); ++c) {
        const CodedWord part = sturmian_word(thetas[c], betas[c], length);
        out.endpoint_hits += part.endpoint_hits;
        out.rational_rotation = out.rational_rotation || part.rational_rotation;
        for (std::size_t i = 0; i < part.word.symbols.size(); ++i)
            out.word.symbols[i] = static_cast<std::uint8_t>(out.word.symbols[i] | (part.word.symbols[i] << c));
    }
    return out;
}

Word de_bruijn_word(int alphabet, int order) {
    if (alphabet < 1 || alphabet > 256 || order < 1) throw DomainError("bad de Bruijn parameters");
    // concatenation of Lyndon words whose length divides `order`
    std::vector<int> a(static_cast<std::size_t>(order) + 1, 0);
    std::vector<std::uint8_t> seq;
    const auto k = alphabet;
    const auto n = order;
    std::function<void(int, int)> gen = [&](int t, int p) {
        if (t > n) {
            if (n % p == 0)
                for (int j = 1; j <= p; ++j) seq.push_back(static_cast<std::uint8_t>(a[static_cast<std::size_t>(j)]));
            return;
        }
        a[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t - p)];
        gen(t + 1, p);
        for (int j = a[static_cast<std::size_t>(t - p)] + 1; j < k; ++j) {
            a[static_cast<std::size_t>(t)] = j;
            gen(t + 1, t);
        }
    };
    gen(1, 1);
    Word w;
    w.alphabet_size = alphabet;
    w.symbols = seq;
    for (int i = 0; i < order - 1; ++i) w.symbols.push_back(seq[static_cast<std::size_t>(i) % seq.size()]);
    return w;
}

std::int64_t bowen_count_from_complexity(const std::function<std::int64_t(std::int64_t)>& complexity, std::int64_t k,
                                         std::int64_t n) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (n < 0) throw DomainError("n must be >= 0");
    return complexity(2 * k + 1 + n);
}

EntropyEstimate top_slow_entropy(std::span<const CountPoint> complexity, ScaleFamily family) {
    return exponent_fit(complexity, family);
}

std::string complexity_csv_header() { return "n,p_n,method"; }

std::string complexity_csv_row(const FactorCount& c) {
    std::ostringstream os;
    os << c.n << ',' << c.count << ',' << to_string(c.method);
    return os.str();
}

}  // namespace slowent
