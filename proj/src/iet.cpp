#include "slowent/iet.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lattice.hpp"
#include "slowent/errors.hpp"

namespace slowent {

namespace {

std::vector<int> check_permutation(const std::vector<int>& pi, std::size_t d, const char* which) {
    if (pi.size() != d) throw ConstructionError(std::string(which) + " permutation has the wrong size");
    std::vector<int> by_pos(d, -1);
    for (std::size_t a = 0; a < d; ++a) {
        const int p = pi[a];
        if (p < 1 || static_cast<std::size_t>(p) > d || by_pos[static_cast<std::size_t>(p - 1)] >= 0)
            throw ConstructionError(std::string(which) + " permutation is not a bijection onto 1..d");
        by_pos[static_cast<std::size_t>(p - 1)] = static_cast<int>(a);
    }
    return by_pos;
}

// The map on the lattice (1/den)Z: cuts[p] is the left end of the p-th top
// interval (cuts[d] = total), shift[p] its translation.
struct LatticeMap {
    std::int64_t den = 1;
    std::int64_t total = 0;
    std::vector<std::int64_t> cuts;
    std::vector<std::int64_t> shift;
    std::vector<int> symbol;

    std::size_t position_of(std::int64_t x) const {
        std::size_t p = 0;
        while (x >= cuts[p + 1]) ++p;
        return p;
    }
    std::int64_t apply(std::int64_t x) const { return x + shift[position_of(x)]; }
    std::int64_t coord(const Rational& x) const { return to_lattice(x, den); }
};

LatticeMap lattice_of(const IntervalExchange& g, std::int64_t refine = 1) {
    LatticeMap m;
    m.den = refine;
    for (const auto& l : g.lengths()) m.den = checked_lcm(m.den, denominator_int64(l));
    const auto order = g.top_order();
    m.cuts.push_back(0);
    for (int a : order) {
        m.cuts.push_back(to_lattice(g.top_start(a) + g.lengths()[static_cast<std::size_t>(a)], m.den));
        m.shift.push_back(to_lattice(g.translation(a), m.den));
        m.symbol.push_back(a);
    }
    m.total = m.cuts.back();
    return m;
}

IntervalExchange relabel_top_order(const std::vector<Rational>& lengths, const std::vector<int>& pi_top,
                                   const std::vector<int>& pi_bottom, const Rational& err) {
    const std::size_t d = lengths.size();
    std::vector<Rational> l2(d);
    std::vector<int> top(d), bottom(d);
    for (std::size_t a = 0; a < d; ++a) {
        const auto p = static_cast<std::size_t>(pi_top[a] - 1);
        l2[p] = lengths[a];
        top[p] = static_cast<int>(p + 1);
        bottom[p] = pi_bottom[a];
    }
    return IntervalExchange(std::move(l2), std::move(top), std::move(bottom), err);
}

}  // namespace

IntervalExchange::IntervalExchange(std::vector<Rational> lengths, std::vector<int> pi_top, std::vector<int> pi_bottom,
                                   Rational length_error)
    : lengths_(std::move(lengths)),
      pi_top_(std::move(pi_top)),
      pi_bottom_(std::move(pi_bottom)),
      length_error_(std::move(length_error)) {
    const std::size_t d = lengths_.size();
    if (d < 2) throw ConstructionError("an interval exchange needs at least 2 intervals");
    for (const auto& l : lengths_)
        if (l <= 0) throw ConstructionError("interval lengths must be positive");
    if (length_error_ < 0) throw ConstructionError("length error bound must be nonnegative");
    const auto top_by_pos = check_permutation(pi_top_, d, "top");
    const auto bottom_by_pos = check_permutation(pi_bottom_, d, "bottom");

    top_start_.assign(d, 0);
    bottom_start_.assign(d, 0);
    Rational acc = 0;
    for (int a : top_by_pos) {
        top_start_[static_cast<std::size_t>(a)] = acc;
        acc += lengths_[static_cast<std::size_t>(a)];
    }
    total_ = acc;
    acc = 0;
    for (int a : bottom_by_pos) {
        bottom_start_[static_cast<std::size_t>(a)] = acc;
        acc += lengths_[static_cast<std::size_t>(a)];
    }

    // images tile [0, |I|): sorted by start they must abut exactly
    std::vector<std::pair<Rational, Rational>> images;
    for (std::size_t a = 0; a < d; ++a) images.emplace_back(bottom_start_[a], bottom_start_[a] + lengths_[a]);
    std::sort(images.begin(), images.end());
    Rational edge = 0;
    for (const auto& [lo, hi] : images) {
        if (lo != edge) throw std::logic_error("interval images do not tile the domain");
        edge = hi;
    }
    if (edge != total_) throw std::logic_error("interval images do not cover the domain");

    // reducible iff some proper prefix of the top order is also a prefix of the bottom order
    std::size_t max_bottom = 0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const int a = top_by_pos[k];
        max_bottom = std::max(max_bottom, static_cast<std::size_t>(pi_bottom_[static_cast<std::size_t>(a)]));
        if (max_bottom == k + 1) irreducible_ = false;
    }
}

IntervalExchange IntervalExchange::symmetric(std::vector<Rational> lengths, Rational length_error) {
    const std::size_t d = lengths.size();
    std::vector<int> top(d), bottom(d);
    for (std::size_t a = 0; a < d; ++a) {
        top[a] = static_cast<int>(a + 1);
        bottom[a] = static_cast<int>(d - a);
    }
    return IntervalExchange(std::move(lengths), std::move(top), std::move(bottom), std::move(length_error));
}

std::vector<int> IntervalExchange::top_order() const {
    std::vector<int> order(size());
    for (std::size_t a = 0; a < size(); ++a) order[static_cast<std::size_t>(pi_top_[a] - 1)] = static_cast<int>(a);
    return order;
}

std::vector<Rational> IntervalExchange::top_lengths() const {
    std::vector<Rational> out;
    for (int a : top_order()) out.push_back(lengths_[static_cast<std::size_t>(a)]);
    return out;
}

std::vector<Rational> IntervalExchange::discontinuities() const {
    std::vector<Rational> out;
    Rational acc = 0;
    const auto order = top_order();
    for (std::size_t p = 0; p + 1 < order.size(); ++p) {
        acc += lengths_[static_cast<std::size_t>(order[p])];
        out.push_back(acc);
    }
    return out;
}

int IntervalExchange::symbol_at(const Rational& x) const {
    if (x < 0 || x >= total_) throw DomainError("point outside [0, |I|)");
    for (std::size_t a = 0; a < size(); ++a)
        if (x >= top_start_[a] && x < top_start_[a] + lengths_[a]) return static_cast<int>(a);
    throw std::logic_error("top intervals do not cover the domain");
}

Rational IntervalExchange::apply(const Rational& x) const {
    const int a = symbol_at(x);
    return x + translation(a);
}

Rational iet_apply(const IntervalExchange& g, const Rational& x) { return g.apply(x); }

IntervalExchange iet_inverse(const IntervalExchange& g) {
    return relabel_top_order(g.lengths(), g.pi_bottom(), g.pi_top(), g.length_error());
}

IntervalExchange involution_conjugate(const IntervalExchange& g) {
    const int d = static_cast<int>(g.size());
    std::vector<int> top(g.size()), bottom(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
        top[a] = d + 1 - g.pi_top()[a];
        bottom[a] = d + 1 - g.pi_bottom()[a];
    }
    return relabel_top_order(g.lengths(), top, bottom, g.length_error());
}

IntervalExchange scale_conjugate(const IntervalExchange& g, const Rational& c) {
    if (c <= 0) throw DomainError("scale factor must be positive");
    std::vector<Rational> l;
    for (const auto& x : g.lengths()) l.push_back(x * c);
    return IntervalExchange(std::move(l), g.pi_top(), g.pi_bottom(), g.length_error() * c);
}

IntervalExchange rotation_iet(const IrrationalParam& theta) {
    return IntervalExchange::symmetric({1 - theta.proxy(), theta.proxy()}, theta.error_bound());
}

IdocReport idoc_check(const IntervalExchange& g, std::int64_t depth) {
    if (depth < 1) throw DomainError("idoc depth must be >= 1");
    const LatticeMap inv = lattice_of(iet_inverse(g), lattice_of(g).den);
    std::vector<std::int64_t> cuts;
    for (const auto& b : g.discontinuities()) cuts.push_back(inv.coord(b));
    IdocReport rep;
    rep.depth = depth;
    std::vector<std::int64_t> cur = cuts;
    for (std::int64_t n = 1; n <= depth && !rep.first_collision; ++n) {
        for (auto& x : cur) {
            x = inv.apply(x);
            if (std::find(cuts.begin(), cuts.end(), x) != cuts.end()) {
                rep.first_collision = std::make_pair(n, make_rational(x, inv.den));
                break;
            }
        }
    }
    rep.idoc_up_to_depth = !rep.first_collision.has_value();
    return rep;
}

MeasureMultiset RefinedPartition::multiset() const {
    MeasureMultiset m;
    for (const auto& l : atom_lengths) m.add(l);
    return m;
}

RefinedPartition refine(const IntervalExchange& g, std::int64_t n) {
    if (n < 1) throw DomainError("refinement depth must be >= 1");
    const LatticeMap inv = lattice_of(iet_inverse(g), lattice_of(g).den);
    std::vector<std::int64_t> pts{0};
    for (const auto& b : g.discontinuities()) {
        std::int64_t x = inv.coord(b);
        for (std::int64_t i = 0; i < n; ++i) {
            pts.push_back(x);
            x = inv.apply(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    RefinedPartition out;
    out.n = n;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::int64_t right = i + 1 < pts.size() ? pts[i + 1] : inv.total;
        out.endpoints.push_back(make_rational(pts[i], inv.den));
        out.atom_lengths.push_back(make_rational(right - pts[i], inv.den));
    }
    out.min_atom = *std::min_element(out.atom_lengths.begin(), out.atom_lengths.end());
    out.max_atom = *std::max_element(out.atom_lengths.begin(), out.atom_lengths.end());
    return out;
}

std::vector<RecurrencePoint> linear_recurrence_profile(const IntervalExchange& g, std::int64_t depth) {
    if (depth < 1) throw DomainError("profile depth must be >= 1");
    const LatticeMap inv = lattice_of(iet_inverse(g), lattice_of(g).den);
    std::set<std::int64_t> pts{0};
    std::multiset<std::int64_t> lens;
    auto insert = [&](std::int64_t x) {
        auto [it, fresh] = pts.insert(x);
        if (!fresh) return;
        const std::int64_t left = *std::prev(it);
        const auto nx = std::next(it);
        const std::int64_t right = nx == pts.end() ? inv.total : *nx;
        lens.erase(lens.find(right - left));
        lens.insert(x - left);
        lens.insert(right - x);
    };
    lens.insert(inv.total);
    std::vector<std::int64_t> cur;
    for (const auto& b : g.discontinuities()) cur.push_back(inv.coord(b));

    std::vector<RecurrencePoint> out;
    for (std::int64_t n = 1; n <= depth; ++n) {
        for (auto& x : cur) {
            insert(x);
            x = inv.apply(x);
        }
        RecurrencePoint p;
        p.n = n;
        p.atoms = static_cast<std::int64_t>(lens.size());
        p.min_atom = make_rational(*lens.begin(), inv.den);
        p.scaled_min = p.min_atom * Rational(Integer(static_cast<long>(n)));
        p.max_min_ratio = make_rational(*lens.rbegin(), *lens.begin());
        out.push_back(std::move(p));
    }
    return out;
}

ThreeIetLengths from_alpha_xi(const IrrationalParam& alpha, const IrrationalParam& xi) {
    const Rational& a = alpha.proxy();
    const Rational& x = xi.proxy();
    const Rational slack = alpha.error_bound() + xi.error_bound();
    if (a <= 0 || a >= 1 || x <= 0 || x >= 1) throw DomainError("alpha and xi must lie in (0,1)");
    const Rational s = a + x;
    if (abs_of(s - 1) <= slack) throw DomainError("alpha + xi = 1 (within precision) gives a degenerate exchange");
    ThreeIetLengths out;
    out.wrapped = s > 1;
    out.raw = out.wrapped ? std::array<Rational, 3>{x, 2 - s, s - 1} : std::array<Rational, 3>{x, 1 - s, s};
    for (std::size_t i = 0; i < 3; ++i) out.normalized[i] = out.raw[i] / (1 + x);
    // |a/b - a'/b'| <= |a - a'| / b' + a |b - b'| / (b b') with a <= 2, b, b' >= 1
    out.error_bound = alpha.error_bound() + 3 * xi.error_bound();
    return out;
}

IntervalExchange three_iet(const ThreeIetLengths& lengths) {
    return IntervalExchange::symmetric({lengths.normalized[0], lengths.normalized[1], lengths.normalized[2]},
                                       lengths.error_bound);
}

Rational alpha_of_3iet(const std::array<Rational, 3>& raw, const Rational& xi) {
    const Rational& c = raw[2];
    return c > xi ? Rational(c - xi) : Rational(1 + c - xi);
}

std::vector<int> iet_coding(const IntervalExchange& g, const Rational& x, std::int64_t n) {
    if (n < 0) throw DomainError("coding length must be >= 0");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    Rational y = x;
    for (std::int64_t i = 0; i < n; ++i) {
        const int a = g.symbol_at(y);
        out.push_back(a);
        y += g.translation(a);
    }
    return out;
}

Rational hamming_distance_coded(const IntervalExchange& g, const Rational& x, const Rational& y, std::int64_t n) {
    if (n < 1) throw DomainError("Hamming horizon must be >= 1");
    const auto cx = iet_coding(g, x, n);
    const auto cy = iet_coding(g, y, n);
    std::int64_t diff = 0;
    for (std::size_t i = 0; i < cx.size(); ++i) diff += cx[i] != cy[i];
    return make_rational(diff, n);
}

CoveringEstimate metric_slow_entropy_estimate(const IntervalExchange& g, const Rational& epsilon,
                                              std::span<const std::int64_t> n_grid, std::int64_t samples,
                                              std::uint64_t seed) {
    return product_metric_slow_entropy_estimate(std::span<const IntervalExchange>(&g, 1), epsilon, n_grid, samples,
                                                seed);
}

CoveringEstimate product_metric_slow_entropy_estimate(std::span<const IntervalExchange> factors,
                                                      const Rational& epsilon, std::span<const std::int64_t> n_grid,
                                                      std::int64_t samples, std::uint64_t seed) {
    if (factors.empty()) throw DomainError("at least one factor is required");
    check_sample_budget(samples, epsilon);
    check_grid(n_grid);
    const std::int64_t horizon = n_grid.back();

    // samples sit at odd multiples of 1/(2 den); cuts and translations are even,
    // so no orbit point ever lands on a cut
    std::vector<LatticeMap> maps;
    std::vector<detail::DriftGuard> guards;
    int alphabet = 1;
    for (const auto& g : factors) {
        maps.push_back(lattice_of(g, 2));
        guards.emplace_back(g.length_error() * static_cast<long>(g.size()), maps.back().den, horizon + 1);
        alphabet *= static_cast<int>(g.size());
        if (alphabet > 256) throw DomainError("product alphabet exceeds 256 symbols");
    }

    CodingBank bank(alphabet, horizon, samples);
    std::vector<std::int64_t> x(maps.size());
    for (std::int64_t s = 0; s < samples; ++s) {
        auto rng = sample_stream(seed, static_cast<std::uint64_t>(s));
        for (std::size_t f = 0; f < maps.size(); ++f)
            x[f] = 2 * static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(maps[f].total / 2))) + 1;
        for (std::int64_t j = 0; j < horizon; ++j) {
            int symbol = 0;
            for (std::size_t f = 0; f < maps.size(); ++f) {
                const LatticeMap& map = maps[f];
                const std::size_t p = map.position_of(x[f]);
                guards[f].check(std::min(x[f] - map.cuts[p], map.cuts[p + 1] - x[f]), j + 1);
                symbol = symbol * static_cast<int>(factors[f].size()) + static_cast<int>(p);
                x[f] += map.shift[p];
            }
            bank.set(s, j, symbol);
        }
    }

    CoveringEstimate out;
    out.epsilon = epsilon;
    out.samples = samples;
    out.seed = seed;
    for (const std::int64_t n : n_grid) {
        const std::int64_t limit = mismatch_limit(epsilon, n);
        const auto count = greedy_cover(samples, epsilon, [&](std::int64_t c, std::int64_t s) {
            return bank.mismatches(c, s, n, limit) < limit;
        });
        out.counts.push_back({n, static_cast<double>(count)});
    }
    fit_resolved(out);
    return out;
}

AtomCover semitop_covering_via_atoms(const IntervalExchange& g, const Rational& epsilon, std::int64_t n) {
    if (epsilon <= 0 || epsilon >= 1) throw DomainError("epsilon must lie in (0,1)");
    AtomCover out;
    out.count = greedy_cover_count(refine(g, n).multiset(), (1 - epsilon) * g.total_length());
    out.idoc_warning = !idoc_check(g, n).idoc_up_to_depth;
    return out;
}

}  // namespace slowent
