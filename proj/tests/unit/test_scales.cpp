#include <doctest.h>

#include <cmath>
#include <vector>

#include "slowent/errors.hpp"
#include "slowent/scales.hpp"

using namespace slowent;

namespace {

std::vector<CountPoint> sample(ScaleFamily fam, double chi, std::int64_t lo, std::int64_t hi, double ratio = 1.1) {
    std::vector<CountPoint> out;
    double x = static_cast<double>(lo);
    std::int64_t last = 0;
    while (static_cast<std::int64_t>(std::ceil(x)) <= hi) {
        const auto n = static_cast<std::int64_t>(std::ceil(x));
        if (n != last) out.push_back({n, scale_eval(fam, chi, n)});
        last = n;
        x *= ratio;
    }
    return out;
}

}  // namespace

TEST_CASE("scale_eval formulas") {
    CHECK(scale_eval(ScaleFamily::polynomial, 2.0, 3) == doctest::Approx(9.0));
    CHECK(scale_eval(ScaleFamily::exponential, 0.0, 100) == doctest::Approx(1.0));
    CHECK(scale_eval(ScaleFamily::stretched_exponential, 1.0, 5) == doctest::Approx(std::exp(5.0)));
    CHECK(scale_eval(ScaleFamily::log_polynomial, 1.0, 8) == doctest::Approx(8 * std::log(8.0)));
    CHECK_THROWS_AS(scale_eval(ScaleFamily::log_polynomial, 1.0, 1), DomainError);
    CHECK_THROWS_AS(scale_eval(ScaleFamily::polynomial, 1.0, 0), DomainError);
    CHECK_THROWS_AS(scale_eval(ScaleFamily::polynomial, -1.0, 3), DomainError);
}

TEST_CASE("scale family names round trip") {
    for (auto f : {ScaleFamily::polynomial, ScaleFamily::exponential, ScaleFamily::stretched_exponential,
                   ScaleFamily::log_polynomial})
        CHECK(parse_scale_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_scale_family("cubic"), ConstructionError);
}

TEST_CASE("scales increase in n and separate in chi") {
    for (auto f : {ScaleFamily::polynomial, ScaleFamily::exponential, ScaleFamily::stretched_exponential,
                   ScaleFamily::log_polynomial}) {
        const std::int64_t lo = f == ScaleFamily::log_polynomial ? 2 : 1;
        const std::int64_t hi = f == ScaleFamily::stretched_exponential ? 20 : 300;
        for (double chi : {0.5, 1.0, 2.0})
            for (std::int64_t n = lo; n < hi; ++n) CHECK(scale_eval(f, chi, n) < scale_eval(f, chi, n + 1));
        // ratio a_chi / a_chi' below 1 and decreasing past a threshold
        const double chi = 0.5, chi2 = 1.0;
        const std::int64_t start = 3;
        double prev = 2.0;
        for (std::int64_t n = start; n < hi; ++n) {
            const double r = scale_eval(f, chi, n) / scale_eval(f, chi2, n);
            CHECK(r < 1.0);
            CHECK(r <= prev);
            prev = r;
        }
    }
}

TEST_CASE("exponent_fit on exact sequences") {
    std::vector<CountPoint> lin, quad, flat;
    for (std::int64_t n = 10; n <= 10000; n = n * 11 / 10 + 1) {
        lin.push_back({n, static_cast<double>(n + 1)});
        quad.push_back({n, static_cast<double>(n) * static_cast<double>(n)});
        flat.push_back({n, 7.0});
    }
    const auto e1 = exponent_fit(lin, ScaleFamily::polynomial);
    CHECK(e1.exponent >= 0.95);
    CHECK(e1.exponent <= 1.05);
    const auto e2 = exponent_fit(quad, ScaleFamily::polynomial);
    CHECK(e2.exponent >= 1.95);
    CHECK(e2.exponent <= 2.05);
    CHECK(exponent_fit(flat, ScaleFamily::polynomial).exponent == 0.0);
}

TEST_CASE("exponent_fit recovers chi of the scale itself") {
    for (double chi : {0.5, 1.0, 2.0}) {
        CHECK(exponent_fit(sample(ScaleFamily::polynomial, chi, 1, 10000), ScaleFamily::polynomial).exponent ==
              doctest::Approx(chi).epsilon(0.05));
        CHECK(exponent_fit(sample(ScaleFamily::log_polynomial, chi, 2, 10000), ScaleFamily::log_polynomial)
                  .exponent == doctest::Approx(chi).epsilon(0.05));
        // doubles overflow past e^709, which bounds the range for the fast families
        CHECK(exponent_fit(sample(ScaleFamily::exponential, chi, 1, static_cast<std::int64_t>(700 / chi), 1.2),
                           ScaleFamily::exponential)
                  .exponent == doctest::Approx(chi).epsilon(0.05));
        const auto hi = static_cast<std::int64_t>(std::pow(700.0, 1.0 / chi));
        CHECK(exponent_fit(sample(ScaleFamily::stretched_exponential, chi, 2, hi, 1.05),
                           ScaleFamily::stretched_exponential)
                  .exponent == doctest::Approx(chi).epsilon(0.05));
    }
}

TEST_CASE("exponent_fit record subsequence is strictly increasing") {
    std::vector<CountPoint> noisy;
    for (std::int64_t n = 5; n <= 5000; n = n * 9 / 8 + 1)
        noisy.push_back({n, static_cast<double>(n) * (1.3 + std::sin(static_cast<double>(n)))});
    const auto est = exponent_fit(noisy, ScaleFamily::polynomial);
    const auto& rec = est.record_subsequence;
    REQUIRE(!rec.empty());
    for (std::size_t i = 1; i < rec.size(); ++i) {
        CHECK(rec[i].n > rec[i - 1].n);
        CHECK(rec[i].count > rec[i - 1].count);
    }
    CHECK(est.exponent >= 0.0);
    CHECK(est.iterations <= 5);

    // a constant factor moves the exponent by less than the fit residual
    std::vector<CountPoint> scaled = noisy;
    for (auto& p : scaled) p.count *= 17.0;
    const auto est2 = exponent_fit(scaled, ScaleFamily::polynomial);
    CHECK(std::abs(est2.exponent - est.exponent) <= est.fit_residual + 1e-12);
}

TEST_CASE("exponent_fit input validation") {
    std::vector<CountPoint> few{{1, 1}, {2, 2}, {3, 3}};
    CHECK_THROWS_AS(exponent_fit(few, ScaleFamily::polynomial), InsufficientDataError);
    std::vector<CountPoint> bad;
    for (std::int64_t n = 1; n <= 10; ++n) bad.push_back({n, n == 5 ? 0.0 : 1.0 * n});
    CHECK_THROWS_AS(exponent_fit(bad, ScaleFamily::polynomial), DomainError);
    std::vector<CountPoint> unordered;
    for (std::int64_t n = 10; n >= 1; --n) unordered.push_back({n, 1.0 * n});
    CHECK_THROWS_AS(exponent_fit(unordered, ScaleFamily::polynomial), DomainError);
}
