#include <doctest.h>

#include "oracles.hpp"
#include "slowent/errors.hpp"
#include "slowent/iet.hpp"
#include "slowent/rotation_gaps.hpp"

using namespace slowent;
using oracle::q;

namespace {

const ContinuedFraction golden = ContinuedFraction::periodic({}, {1});
const ContinuedFraction silver = ContinuedFraction::periodic({}, {2});

// Straight from the definition: walk the top order to find x, then place the
// same symbol in the bottom order.
Rational naive_apply(const std::vector<Rational>& lengths, const std::vector<int>& top, const std::vector<int>& bottom,
                     const Rational& x) {
    const std::size_t d = lengths.size();
    Rational left = 0;
    for (int pos = 1; pos <= static_cast<int>(d); ++pos) {
        std::size_t a = 0;
        while (top[a] != pos) ++a;
        if (x < left + lengths[a]) {
            Rational image = 0;
            for (std::size_t b = 0; b < d; ++b)
                if (bottom[b] < bottom[a]) image += lengths[b];
            return image + (x - left);
        }
        left += lengths[a];
    }
    throw std::logic_error("outside");
}

Rational random_point(std::mt19937_64& g, const Rational& total) {
    return total * q(static_cast<long>(g() % 1000003), 1000003);
}

std::vector<int> coding(const IntervalExchange& g, Rational x, std::int64_t n) { return iet_coding(g, x, n); }

}  // namespace

TEST_CASE("construction and application") {
    const IntervalExchange g = IntervalExchange::symmetric({q(1, 4), q(1, 4), q(1, 2)});
    CHECK(g.apply(0) == q(3, 4));
    CHECK(g.apply(q(1, 4)) == q(1, 2));
    CHECK(g.apply(q(1, 2)) == 0);
    CHECK(g.irreducible());
    CHECK(g.discontinuities() == std::vector<Rational>{q(1, 4), q(1, 2)});

    const auto inv = iet_inverse(g);
    CHECK(inv.top_lengths() == std::vector<Rational>{q(1, 2), q(1, 4), q(1, 4)});
    for (const auto& x : {q(0), q(1, 3), q(2, 3), q(99, 100)}) CHECK(inv.apply(g.apply(x)) == x);

    CHECK_THROWS_AS(IntervalExchange({q(1, 2), q(0)}, {1, 2}, {2, 1}), ConstructionError);
    CHECK_THROWS_AS(IntervalExchange({q(1, 2), q(1, 2)}, {1, 1}, {2, 1}), ConstructionError);
    CHECK_THROWS_AS(IntervalExchange({q(1, 2), q(1, 2)}, {1, 2}, {2, 3}), ConstructionError);
    CHECK_FALSE(IntervalExchange({q(1, 2), q(1, 4), q(1, 4)}, {1, 2, 3}, {1, 3, 2}).irreducible());
    CHECK_THROWS_AS(g.apply(1), DomainError);
}

TEST_CASE("random exchanges agree with the naive map") {
    auto r = oracle::rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 2 + r() % 5;
        std::vector<Rational> lengths;
        for (std::size_t i = 0; i < d; ++i) lengths.push_back(q(1 + static_cast<long>(r() % 97), 97));
        std::vector<int> top(d), bottom(d);
        for (std::size_t i = 0; i < d; ++i) top[i] = bottom[i] = static_cast<int>(i + 1);
        std::shuffle(top.begin(), top.end(), r);
        std::shuffle(bottom.begin(), bottom.end(), r);
        const IntervalExchange g(lengths, top, bottom);
        const auto inv = iet_inverse(g);
        const auto flip = involution_conjugate(g);
        const auto scaled = scale_conjugate(g, q(3, 7));
        const Rational total = g.total_length();
        for (int k = 0; k < 50; ++k) {
            const Rational x = random_point(r, total);
            const Rational y = g.apply(x);
            CHECK(y == naive_apply(lengths, top, bottom, x));
            CHECK(inv.apply(y) == x);
            CHECK(scaled.apply(x * q(3, 7)) == y * q(3, 7));
            // flip(|I| - x) = |I| - g(x) away from the cuts, where the
            // half-open convention changes sides
            const Rational fx = total - x;
            bool on_cut = x == 0;
            for (const auto& b : g.discontinuities()) on_cut = on_cut || b == x;
            if (!on_cut) CHECK(flip.apply(fx) == total - y);
        }
    }
}

TEST_CASE("idoc") {
    const auto rational = IntervalExchange::symmetric({q(1, 3), q(2, 3)});
    const auto rep = idoc_check(rational, 10);
    CHECK_FALSE(rep.idoc_up_to_depth);
    REQUIRE(rep.first_collision.has_value());
    CHECK(rep.first_collision->first == 3);
    CHECK(rep.first_collision->second == q(1, 3));

    const auto rot = rotation_iet(param_for_horizon(golden, 5000));
    CHECK(idoc_check(rot, 1000).idoc_up_to_depth);
    CHECK_THROWS_AS(idoc_check(rot, 0), DomainError);
}

TEST_CASE("refined partitions are the coding partitions") {
    const std::vector<IntervalExchange> maps{
        IntervalExchange::symmetric({q(1, 4), q(1, 4), q(1, 2)}),
        three_iet(from_alpha_xi(param_for_horizon(golden, 400), param_for_horizon(silver, 400))),
        IntervalExchange({q(2, 11), q(3, 11), q(1, 11), q(5, 11)}, {1, 2, 3, 4}, {3, 1, 4, 2}),
    };
    for (const auto& g : maps) {
        for (std::int64_t n : {1, 2, 5, 17}) {
            const auto part = refine(g, n);
            CHECK(part.endpoints.front() == 0);
            Rational sum = 0;
            for (const auto& l : part.atom_lengths) sum += l;
            CHECK(sum == g.total_length());
            for (std::size_t i = 0; i < part.endpoints.size(); ++i) {
                const Rational& left = part.endpoints[i];
                const Rational& len = part.atom_lengths[i];
                const auto c = coding(g, left, n);
                CHECK(coding(g, left + len / 2, n) == c);
                CHECK(coding(g, left + len * q(999, 1000), n) == c);
                if (i > 0) CHECK(coding(g, part.endpoints[i - 1], n) != c);
            }
            const auto prof = linear_recurrence_profile(g, n);
            CHECK(prof.back().atoms == part.atom_count());
            CHECK(prof.back().min_atom == part.min_atom);
        }
    }

    // idoc maps have exactly (d - 1) n + 1 atoms
    const auto g3 = three_iet(from_alpha_xi(param_for_horizon(golden, 5000), param_for_horizon(silver, 5000)));
    REQUIRE(idoc_check(g3, 300).idoc_up_to_depth);
    for (const auto& p : linear_recurrence_profile(g3, 300)) CHECK(p.atoms == 2 * p.n + 1);
}

TEST_CASE("three-interval exchanges from (alpha, xi)") {
    const auto a = from_alpha_xi(IrrationalParam::exact(q(3, 10)), IrrationalParam::exact(q(1, 5)));
    CHECK(a.raw == std::array<Rational, 3>{q(1, 5), q(1, 2), q(1, 2)});
    CHECK_FALSE(a.wrapped);
    CHECK(a.normalized[0] + a.normalized[1] + a.normalized[2] == 1);
    CHECK(a.normalized[0] == q(1, 6));

    const auto b = from_alpha_xi(IrrationalParam::exact(q(9, 10)), IrrationalParam::exact(q(1, 5)));
    CHECK(b.raw == std::array<Rational, 3>{q(1, 5), q(9, 10), q(1, 10)});
    CHECK(b.wrapped);

    auto r = oracle::rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Rational alpha = q(1 + static_cast<long>(r() % 999), 1000);
        const Rational xi = q(1 + static_cast<long>(r() % 999), 1000);
        if (alpha + xi == 1) {
            CHECK_THROWS_AS(from_alpha_xi(IrrationalParam::exact(alpha), IrrationalParam::exact(xi)), DomainError);
            continue;
        }
        const auto l = from_alpha_xi(IrrationalParam::exact(alpha), IrrationalParam::exact(xi));
        CHECK(alpha_of_3iet(l.raw, xi) == alpha);
        CHECK(l.raw[0] + l.raw[1] + l.raw[2] == 1 + xi);
    }
    const auto g = param_for_horizon(golden, 100);
    CHECK_THROWS_AS(from_alpha_xi(g, g.complement()), DomainError);

    // proxy error: compare against a much deeper proxy
    const auto shallow = from_alpha_xi(param_for_horizon(golden, 100), param_for_horizon(silver, 100));
    const auto deep = from_alpha_xi(IrrationalParam::from_cf(golden, 60), IrrationalParam::from_cf(silver, 60));
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(abs_of(shallow.normalized[i] - deep.normalized[i]) <= shallow.error_bound);
}

TEST_CASE("Hamming distance on codings") {
    const auto g = three_iet(from_alpha_xi(param_for_horizon(golden, 1000), param_for_horizon(silver, 1000)));
    auto r = oracle::rng(3);
    for (int k = 0; k < 30; ++k) {
        const Rational x = random_point(r, 1), y = random_point(r, 1);
        const Rational d = hamming_distance_coded(g, x, y, 50);
        CHECK(d == hamming_distance_coded(g, y, x, 50));
        CHECK(d >= 0);
        CHECK(d <= 1);
        CHECK(hamming_distance_coded(g, x, x, 50) == 0);
    }
    CHECK_THROWS_AS(hamming_distance_coded(g, 0, 0, 0), DomainError);
}

TEST_CASE("semitop covering via atoms matches the rotation gaps") {
    const auto theta = param_for_horizon(golden, 5000);
    const auto rot = rotation_iet(theta);
    for (std::int64_t n : {1, 4, 10, 33, 200, 1000}) {
        for (const auto& eps : {q(1, 10), q(1, 3)}) {
            const auto via_atoms = semitop_covering_via_atoms(rot, eps, n);
            CHECK_FALSE(via_atoms.idoc_warning);
            CHECK(via_atoms.count == cover_count(theta, n, eps));
            CHECK(refine(rot, n).multiset() == cylinder_measures(theta, n));
        }
    }
}

TEST_CASE("Monte-Carlo covering") {
    const auto g = three_iet(from_alpha_xi(param_for_horizon(golden, 100000), param_for_horizon(silver, 100000)));
    const auto grid = geometric_grid(2, 1000, 1.25);
    const auto a = metric_slow_entropy_estimate(g, q(1, 10), grid, 3000, 42);
    const auto b = metric_slow_entropy_estimate(g, q(1, 10), grid, 3000, 42);
    REQUIRE(a.counts.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.counts[i].count == b.counts[i].count);
        CHECK(a.counts[i].count >= 1);
        CHECK(a.counts[i].count <= 3000);
    }
    CHECK(a.estimate.exponent == b.estimate.exponent);
    CHECK(a.resolved >= 8);
    for (std::size_t i = 0; i < a.resolved; ++i) CHECK(a.counts[i].count <= 300);
    // a different seed draws different points
    const auto c = metric_slow_entropy_estimate(g, q(1, 10), grid, 3000, 43);
    bool same = true;
    for (std::size_t i = 0; i < grid.size(); ++i) same = same && c.counts[i].count == a.counts[i].count;
    CHECK_FALSE(same);

    const std::vector<std::int64_t> coarse{10, 20, 40, 80, 160, 320, 640, 1280};

    // the covering count of a periodic exchange stays bounded
    const auto periodic = IntervalExchange::symmetric({q(1, 4), q(1, 4), q(1, 2)});
    const auto flat = metric_slow_entropy_estimate(periodic, q(1, 10), coarse, 300, 1);
    for (const auto& p : flat.counts) CHECK(p.count <= 4);
    CHECK(flat.estimate.exponent == 0.0);

    // too few samples to resolve 8 horizons
    CHECK_THROWS_AS(metric_slow_entropy_estimate(g, q(1, 10), coarse, 200, 1), InsufficientDataError);
    CHECK_THROWS_AS(metric_slow_entropy_estimate(g, q(1, 10), coarse, 50, 1), InsufficientDataError);
    CHECK_THROWS_AS(metric_slow_entropy_estimate(g, q(1, 200), coarse, 1000, 1), InsufficientDataError);
    const std::vector<std::int64_t> bad{10, 5};
    CHECK_THROWS_AS(metric_slow_entropy_estimate(g, q(1, 10), bad, 300, 1), DomainError);
    // a shallow proxy cannot certify long codings
    const auto shallow =
        three_iet(from_alpha_xi(IrrationalParam::from_cf(golden, 6), IrrationalParam::from_cf(silver, 4)));
    CHECK_THROWS_AS(metric_slow_entropy_estimate(shallow, q(1, 10), coarse, 300, 1), PrecisionError);
}

TEST_CASE("Monte-Carlo covering of products") {
    const auto rot = rotation_iet(param_for_horizon(golden, 100000));
    const std::vector<std::int64_t> coarse{10, 20, 40, 80, 160, 320, 640, 1280};

    // one factor is the plain estimator
    const auto single = metric_slow_entropy_estimate(rot, q(1, 5), coarse, 400, 9);
    const auto wrapped = product_metric_slow_entropy_estimate(std::span<const IntervalExchange>(&rot, 1), q(1, 5),
                                                              coarse, 400, 9);
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(single.counts[i].count == wrapped.counts[i].count);

    // periodic factors keep the product bounded
    const auto periodic = IntervalExchange::symmetric({q(1, 4), q(1, 4), q(1, 2)});
    const std::vector<IntervalExchange> pair{periodic, IntervalExchange::symmetric({q(1, 3), q(2, 3)})};
    const auto flat = product_metric_slow_entropy_estimate(pair, q(1, 10), coarse, 400, 2);
    for (const auto& p : flat.counts) CHECK(p.count <= 12);
    CHECK(flat.estimate.exponent == 0.0);
    const auto again = product_metric_slow_entropy_estimate(pair, q(1, 10), coarse, 400, 2);
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(flat.counts[i].count == again.counts[i].count);

    CHECK_THROWS_AS(product_metric_slow_entropy_estimate({}, q(1, 10), coarse, 400, 2), DomainError);
    const std::vector<IntervalExchange> many(6, periodic);  // 3^6 symbols
    CHECK_THROWS_AS(product_metric_slow_entropy_estimate(many, q(1, 10), coarse, 400, 2), DomainError);
}
