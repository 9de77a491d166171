#include "slowent/suspension.hpp"

#include <algorithm>
#include <limits>

#include "lattice.hpp"
#include "slowent/errors.hpp"

namespace slowent {

namespace {

constexpr std::int64_t kMaxEvents = 100'000'000;

void check_base_point(const Rational& x) {
    if (x < 0 || x >= 1) throw DomainError("base coordinate must lie in [0,1)");
}

void check_point(const StepRoof& roof, const SuspensionPoint& p) {
    check_base_point(p.x);
    if (p.s < 0 || p.s >= roof.value(p.x)) throw DomainError("height must lie in [0, f(x))");
}

// Orbit points of a proxy rotation compared against fixed cuts: an exact
// lattice coincidence after a proxy step cannot be resolved either way.
void certify(const detail::DriftGuard& guard, bool exact, std::int64_t dist, std::int64_t steps) {
    if (dist == 0 && steps > 0 && !exact)
        throw PrecisionError("proxy orbit lands on a boundary; deepen the continued fraction");
    guard.check(dist, steps);
}

std::int64_t nearest_cut_dist(std::int64_t x, const std::vector<std::int64_t>& cuts, std::int64_t den) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (auto c : cuts) best = std::min(best, detail::circle_dist(x, c, den));
    return best;
}

// Flow on integer lattices: base coordinates in units of 1/base_den, heights
// and times in units of 1/ticks.
struct FlowLattice {
    std::int64_t base_den = 1;
    std::int64_t step = 0;
    std::int64_t xi = 0;
    std::int64_t k = 1;
    std::int64_t ticks = 1;
    std::int64_t d1 = 0, d2 = 0;
    std::int64_t rows = 1;  // height cells per column
    std::vector<std::int64_t> cuts;
    bool exact = true;
    detail::DriftGuard guard{0, 1, 0};

    std::int64_t roof(std::int64_t x) const { return x < xi ? d1 : d2; }
    std::int64_t column(std::int64_t x) const { return x / (base_den / k); }
    std::int32_t atom(std::int64_t x, std::int64_t s) const {
        return static_cast<std::int32_t>(column(x) * rows + s / (ticks / k));
    }
};

FlowLattice make_flow_lattice(const IrrationalParam& alpha, const StepRoof& roof, std::int64_t k, std::int64_t base_den,
                              std::int64_t ticks, std::int64_t horizon_ticks) {
    FlowLattice lat;
    lat.k = k;
    lat.base_den = checked_lcm(checked_lcm(checked_lcm(base_den, k), denominator_int64(alpha.proxy())),
                               denominator_int64(roof.xi));
    lat.step = to_lattice(alpha.proxy(), lat.base_den);
    lat.xi = to_lattice(roof.xi, lat.base_den);
    lat.ticks = checked_lcm(checked_lcm(checked_lcm(ticks, k), denominator_int64(roof.d1)), denominator_int64(roof.d2));
    lat.d1 = to_lattice(roof.d1, lat.ticks);
    lat.d2 = to_lattice(roof.d2, lat.ticks);
    lat.rows = (std::max(lat.d1, lat.d2) + lat.ticks / k - 1) / (lat.ticks / k);
    if (k * lat.rows > std::numeric_limits<std::int32_t>::max()) throw ResourceError("too many flow atoms");
    lat.cuts.push_back(0);
    lat.cuts.push_back(lat.xi);
    for (std::int64_t j = 1; j < k; ++j) lat.cuts.push_back(j * (lat.base_den / k));
    lat.exact = alpha.is_exact();
    const std::int64_t max_hits = horizon_ticks / std::min(lat.d1, lat.d2) + 2;
    lat.guard = detail::DriftGuard(alpha.error_bound(), lat.base_den, max_hits);
    return lat;
}

// Atom changes of the orbit of (x, s) on [0, horizon): times[i] is when
// atoms[i] starts. Returns the number of events.
std::int64_t itinerary(const FlowLattice& lat, std::int64_t x, std::int64_t s, std::int64_t horizon,
                       std::vector<std::int64_t>& times, std::vector<std::int32_t>& atoms) {
    const std::int64_t cell = lat.ticks / lat.k;
    std::int64_t t = 0, hits = 0, events = 0;
    certify(lat.guard, lat.exact, nearest_cut_dist(x, lat.cuts, lat.base_den), 0);
    times.push_back(0);
    atoms.push_back(lat.atom(x, s));
    for (;;) {
        const std::int64_t roof = lat.roof(x);
        const std::int64_t next_line = (s / cell + 1) * cell;
        if (next_line < roof) {
            t += next_line - s;
            s = next_line;
        } else {
            t += roof - s;
            s = 0;
            x += lat.step;
            if (x >= lat.base_den) x -= lat.base_den;
            ++hits;
            certify(lat.guard, lat.exact, nearest_cut_dist(x, lat.cuts, lat.base_den), hits);
        }
        if (t >= horizon) break;
        if (++events > kMaxEvents) throw ResourceError("matching computation exceeds 1e8 events");
        const std::int32_t a = lat.atom(x, s);
        if (a == atoms.back()) continue;
        times.push_back(t);
        atoms.push_back(a);
    }
    return events;
}

// Time in [0, horizon) where the two itineraries sit in different atoms,
// stopping once `limit` is reached.
std::int64_t mismatch_time(std::span<const std::int64_t> ta, std::span<const std::int32_t> aa,
                           std::span<const std::int64_t> tb, std::span<const std::int32_t> ab, std::int64_t horizon,
                           std::int64_t limit) {
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    std::size_t i = 0, j = 0;
    std::int64_t t = 0, miss = 0;
    while (t < horizon) {
        const std::int64_t na = i + 1 < ta.size() ? ta[i + 1] : inf;
        const std::int64_t nb = j + 1 < tb.size() ? tb[j + 1] : inf;
        const std::int64_t next = std::min({na, nb, horizon});
        if (aa[i] != ab[j]) {
            miss += next - t;
            if (miss >= limit) return miss;
        }
        t = next;
        if (na == next) ++i;
        if (nb == next) ++j;
    }
    return miss;
}

}  // namespace

void StepRoof::validate() const {
    if (xi <= 0 || xi >= 1) throw DomainError("roof breakpoint xi must lie in (0,1)");
    if (d1 <= 0 || d2 <= 0) throw DomainError("roof values must be positive");
}

SuspensionPoint make_suspension_point(const IrrationalParam& alpha, const StepRoof& roof, const Rational& x,
                                      const Rational& s) {
    if (s < 0) throw DomainError("height must be nonnegative");
    return flow_step(alpha, roof, {x, 0}, s);
}

Rational birkhoff_sum(const StepRoof& roof, const IrrationalParam& alpha, const Rational& x, std::int64_t n) {
    roof.validate();
    check_base_point(x);
    if (n < 0) throw DomainError("Birkhoff sum length must be >= 0");
    const auto lat = detail::make_rotation_lattice(alpha, {x, roof.xi});
    const detail::DriftGuard guard(alpha.error_bound(), lat.den, n);
    const std::vector<std::int64_t> cuts{0, lat.coord(roof.xi)};
    std::int64_t pos = lat.coord(x), low = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        certify(guard, alpha.is_exact(), nearest_cut_dist(pos, cuts, lat.den), i);
        low += pos < cuts[1];
        pos = lat.advance(pos);
    }
    return roof.d1 * Rational(Integer(static_cast<long>(low))) + roof.d2 * Rational(Integer(static_cast<long>(n - low)));
}

Rational birkhoff_diff_crossing(const StepRoof& roof, const IrrationalParam& alpha, const Rational& x,
                                const Rational& y, std::int64_t n) {
    roof.validate();
    check_base_point(x);
    check_base_point(y);
    if (n < 0) throw DomainError("Birkhoff sum length must be >= 0");
    if (x == y) return 0;
    if (x > y) return -birkhoff_diff_crossing(roof, alpha, y, x, n);

    const auto lat = detail::make_rotation_lattice(alpha, {x, y, roof.xi});
    const detail::DriftGuard guard(alpha.error_bound(), lat.den, n);
    const std::int64_t lo = lat.coord(x), hi = lat.coord(y);
    const std::vector<std::int64_t> ends{lo, hi};
    // backward orbits of xi and 0 against the arc (x, y]
    std::int64_t u = lat.coord(roof.xi), v = 0, cross_xi = 0, cross_zero = 0;
    for (std::int64_t j = 0; j < n; ++j) {
        certify(guard, alpha.is_exact(), nearest_cut_dist(u, ends, lat.den), j);
        certify(guard, alpha.is_exact(), nearest_cut_dist(v, ends, lat.den), j);
        cross_xi += u > lo && u <= hi;
        cross_zero += v > lo && v <= hi;
        u = lat.retreat(u);
        v = lat.retreat(v);
    }
    return (roof.d1 - roof.d2) * Rational(Integer(static_cast<long>(cross_xi - cross_zero)));
}

SuspensionPoint flow_step(const IrrationalParam& alpha, const StepRoof& roof, const SuspensionPoint& p,
                          const Rational& t) {
    roof.validate();
    check_point(roof, p);
    if (t < 0) throw DomainError("flow time must be nonnegative");
    const Rational& err = alpha.error_bound();
    const Rational bound = floor_of((p.s + t) / std::min(roof.d1, roof.d2)) + 1;
    if (bound > kMaxEvents) throw ResourceError("flow time implies more than 1e8 roof hits");

    Rational x = p.x, left = p.s + t;
    std::int64_t hits = 0;
    for (;;) {
        const Rational& f = roof.value(x);
        if (left < f) return {x, left};
        left -= f;
        x = frac(x + alpha.proxy());
        ++hits;
        if (err != 0) {
            const Rational drift = err * Rational(Integer(static_cast<long>(hits)));
            const Rational dist = std::min({Rational(abs_of(x - roof.xi)), x, Rational(1 - x)});
            if (dist <= drift) throw PrecisionError("flow orbit within proxy error of a roof break");
        }
    }
}

MatchingResult matching_measure(const IrrationalParam& alpha, const StepRoof& roof, const SuspensionPoint& p,
                                const SuspensionPoint& q, const Rational& horizon, std::int64_t grid_k) {
    roof.validate();
    check_point(roof, p);
    check_point(roof, q);
    if (horizon <= 0) throw DomainError("horizon must be positive");
    if (grid_k < 1) throw DomainError("grid size must be >= 1");

    const std::int64_t base_den = checked_lcm(denominator_int64(p.x), denominator_int64(q.x));
    const std::int64_t ticks = checked_lcm(checked_lcm(denominator_int64(p.s), denominator_int64(q.s)),
                                           denominator_int64(horizon));
    // probe lattice for the tick count, then the real one with the horizon bound
    const std::int64_t probe = make_flow_lattice(alpha, roof, grid_k, base_den, ticks, 0).ticks;
    const std::int64_t horizon_ticks = to_lattice(horizon, probe);
    const FlowLattice lat = make_flow_lattice(alpha, roof, grid_k, base_den, ticks, horizon_ticks);

    std::vector<std::int64_t> ta, tb;
    std::vector<std::int32_t> aa, ab;
    std::int64_t events = itinerary(lat, to_lattice(p.x, lat.base_den), to_lattice(p.s, lat.ticks), horizon_ticks, ta, aa);
    events += itinerary(lat, to_lattice(q.x, lat.base_den), to_lattice(q.s, lat.ticks), horizon_ticks, tb, ab);
    const std::int64_t miss = mismatch_time(ta, aa, tb, ab, horizon_ticks, std::numeric_limits<std::int64_t>::max());

    MatchingResult out;
    out.mismatch = make_rational(miss, lat.ticks);
    out.matched = horizon - out.mismatch;
    out.events = events;
    return out;
}

std::int64_t default_grid_k(const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1) throw DomainError("epsilon must lie in (0,1)");
    Integer k;
    const Rational r = 20 / epsilon;
    mpz_cdiv_q(k.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return to_int64(k);
}

RoofSample sample_under_roof(const StepRoof& roof, std::int64_t count, std::uint64_t seed, std::int64_t base_den,
                             std::int64_t height_den) {
    roof.validate();
    if (count < 0 || base_den < 1 || height_den < 1) throw DomainError("bad sampler arguments");
    const Rational top = std::max(roof.d1, roof.d2);
    const Rational slots = top * Rational(Integer(static_cast<long>(height_den)));
    if (slots.get_den() != 1) throw DomainError("height lattice must resolve the roof values");
    const auto height_slots = static_cast<std::uint64_t>(to_int64(slots.get_num()));

    RoofSample out;
    out.points.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        auto rng = sample_stream(seed, static_cast<std::uint64_t>(i));
        for (;;) {
            ++out.proposals;
            const auto a = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(base_den)));
            const auto b = static_cast<std::int64_t>(uniform_below(rng, height_slots));
            Rational x = make_rational(2 * a + 1, 2 * base_den);
            Rational s = make_rational(2 * b + 1, 2 * height_den);
            if (s < roof.value(x)) {
                out.points.push_back({std::move(x), std::move(s)});
                break;
            }
        }
    }
    return out;
}

FlowCovering flow_hamming_covering(const IrrationalParam& alpha, const StepRoof& roof, const Rational& epsilon,
                                   std::span<const std::int64_t> r_grid, std::int64_t samples, std::uint64_t seed,
                                   std::int64_t grid_k) {
    roof.validate();
    check_sample_budget(samples, epsilon);
    check_grid(r_grid);
    if (grid_k < 1) throw DomainError("grid size must be >= 1");

    // samples sit at odd offsets of half-lattices, so neither base points nor
    // heights ever land on a cut, a gridline or the roof
    const FlowLattice shape = make_flow_lattice(alpha, roof, grid_k, 1, 1, 0);
    const std::int64_t horizon = r_grid.back();
    const FlowLattice lat = make_flow_lattice(alpha, roof, grid_k, 2 * shape.base_den, 2 * shape.ticks,
                                              horizon * 2 * shape.ticks);
    const RoofSample draw = sample_under_roof(roof, samples, seed, shape.base_den, shape.ticks);

    std::vector<std::vector<std::int64_t>> times(static_cast<std::size_t>(samples));
    std::vector<std::vector<std::int32_t>> atoms(static_cast<std::size_t>(samples));
    for (std::size_t i = 0; i < draw.points.size(); ++i)
        itinerary(lat, to_lattice(draw.points[i].x, lat.base_den), to_lattice(draw.points[i].s, lat.ticks),
                  horizon * lat.ticks, times[i], atoms[i]);

    FlowCovering out;
    out.grid_k = grid_k;
    out.proposals = draw.proposals;
    out.covering.epsilon = epsilon;
    out.covering.samples = samples;
    out.covering.seed = seed;
    for (const std::int64_t r : r_grid) {
        const std::int64_t span_ticks = r * lat.ticks;
        const std::int64_t limit = mismatch_limit(epsilon, span_ticks);
        const auto count = greedy_cover(samples, epsilon, [&](std::int64_t c, std::int64_t s) {
            const auto ci = static_cast<std::size_t>(c), si = static_cast<std::size_t>(s);
            return mismatch_time(times[ci], atoms[ci], times[si], atoms[si], span_ticks, limit) < limit;
        });
        out.covering.counts.push_back({r, static_cast<double>(count)});
    }
    fit_resolved(out.covering);
    return out;
}

std::vector<int> skew_shift_coding(const Rational& x, const Rational& y, std::int64_t n, std::int64_t grid_k) {
    check_base_point(x);
    check_base_point(y);
    if (n < 0 || grid_k < 1) throw DomainError("bad skew-shift coding arguments");
    std::vector<int> out;
    const Rational kx = x * Rational(Integer(static_cast<long>(grid_k)));
    const auto row = to_int64(floor_of(kx));
    Rational yy = y;
    for (std::int64_t j = 0; j < n; ++j) {
        const auto col = to_int64(floor_of(yy * Rational(Integer(static_cast<long>(grid_k)))));
        out.push_back(static_cast<int>(grid_k * row + col));
        yy = frac(yy + x);
    }
    return out;
}

CoveringEstimate skew_shift_covering(const Rational& epsilon, std::span<const std::int64_t> n_grid,
                                     std::int64_t samples, std::uint64_t seed, std::int64_t grid_k) {
    check_sample_budget(samples, epsilon);
    check_grid(n_grid);
    if (grid_k < 1 || grid_k > 256) throw DomainError("skew-shift grid size must lie in [1, 256]");
    const std::int64_t horizon = n_grid.back();
    // coordinates are odd multiples of 1/den with den = 2^25 k
    const std::int64_t half = grid_k << 24, den = 2 * half, cell = den / grid_k;

    CodingBank bank(static_cast<int>(grid_k * grid_k), horizon, samples);
    for (std::int64_t s = 0; s < samples; ++s) {
        auto rng = sample_stream(seed, static_cast<std::uint64_t>(s));
        const auto x = 2 * static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(half))) + 1;
        auto y = 2 * static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(half))) + 1;
        const std::int64_t row = x / cell;
        for (std::int64_t j = 0; j < horizon; ++j) {
            bank.set(s, j, static_cast<int>(grid_k * row + y / cell));
            y += x;
            if (y >= den) y -= den;
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

}  // namespace slowent
