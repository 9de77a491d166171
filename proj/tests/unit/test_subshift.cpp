#include <doctest.h>

#include "oracles.hpp"
#include "slowent/errors.hpp"
#include "slowent/subshift.hpp"

using namespace slowent;

namespace {

const ContinuedFraction golden = ContinuedFraction::periodic({}, {1});
const ContinuedFraction silver = ContinuedFraction::periodic({}, {2});
const ContinuedFraction bronze = ContinuedFraction::periodic({}, {3});
const ContinuedFraction mixed = ContinuedFraction::periodic({1, 2}, {3});

bool balanced(const Word& w, std::size_t window) {
    long lo = 1 << 30, hi = -1;
    long ones = 0;
    for (std::size_t i = 0; i < window; ++i) ones += w.symbols[i];
    for (std::size_t i = window;; ++i) {
        lo = std::min(lo, ones);
        hi = std::max(hi, ones);
        if (i == w.size()) break;
        ones += w.symbols[i] - w.symbols[i - window];
    }
    return hi - lo <= 1;
}

}  // namespace

TEST_CASE("sturmian words") {
    const auto theta = param_for_horizon(golden, 10000);
    const auto w8 = sturmian_word(theta, 0, 8);
    CHECK(w8.word.size() == 8);
    CHECK(w8.endpoint_hits == 0);
    CHECK_FALSE(w8.rational_rotation);
    CHECK(balanced(w8.word, 3));

    const auto long_word = sturmian_word(theta, 0, 5000);
    CHECK(oracle::distinct_windows(long_word.word.symbols, 3) == 4);
    for (std::size_t len : {2u, 5u, 17u, 100u}) CHECK(balanced(long_word.word, len));

    // frequency of 1s tracks theta
    long ones = 0;
    for (auto s : long_word.word.symbols) ones += s;
    CHECK(std::abs(ones - 5000 * to_double(theta.proxy())) <= 2.0);

    // start at the cut itself: first symbol is 1; the orbit sits on the cut,
    // then on 0 one step later, and both hits are reported
    const auto at_cut = sturmian_word(theta, 1 - theta.proxy(), 10);
    CHECK(at_cut.word.symbols[0] == 1);
    CHECK(at_cut.word.symbols[1] == 0);
    CHECK(at_cut.endpoint_hits == 2);

    const auto periodic = sturmian_word(IrrationalParam::exact(oracle::q(2, 5)), 0, 5);
    CHECK(periodic.rational_rotation);
    CHECK(to_digits(periodic.word) == "00101");
    CHECK(periodic.endpoint_hits > 0);

    CHECK_THROWS_AS(sturmian_word(IrrationalParam::from_cf(golden, 5), 0, 1000), PrecisionError);
}

TEST_CASE("windowed complexity") {
    CHECK(complexity_windowed(parse_digits("0101010", 2), 2).count == 2);
    CHECK(complexity_windowed(parse_digits("0000", 2), 3).count == 1);
    CHECK_THROWS_AS(complexity_windowed(parse_digits("0101", 2), 5), DomainError);

    const auto theta = param_for_horizon(golden, 10000);
    const auto w = sturmian_word(theta, 0, 5000).word;
    CHECK(complexity_windowed(w, 100).count == 101);

    auto g = oracle::rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        Word r;
        r.alphabet_size = 1 + static_cast<int>(g() % 4);
        const auto len = 50 + g() % 300;
        for (std::size_t i = 0; i < len; ++i) r.symbols.push_back(static_cast<std::uint8_t>(g() % r.alphabet_size));
        const auto profile = complexity_profile_windowed(r, 40);
        for (std::int64_t n = 1; n <= 40; ++n) {
            const auto ref = oracle::distinct_windows(r.symbols, static_cast<std::size_t>(n));
            CHECK(complexity_windowed(r, n).count == ref);
            CHECK(profile[static_cast<std::size_t>(n - 1)].count == ref);
            if (n > 1) {
                CHECK(profile[static_cast<std::size_t>(n - 1)].count >=
                      profile[static_cast<std::size_t>(n - 2)].count - 1);
                CHECK(profile[static_cast<std::size_t>(n - 1)].count <=
                      r.alphabet_size * profile[static_cast<std::size_t>(n - 2)].count);
            }
        }
    }
}

TEST_CASE("exact rotation complexity") {
    for (const auto& cf : {golden, silver, mixed}) {
        const auto theta = param_for_horizon(cf, 2000);
        CHECK(complexity_exact_rotation(theta, 1).count == 2);
        for (std::int64_t n : {7, 100, 999}) CHECK(complexity_exact_rotation(theta, n).count == n + 1);
        const auto w = sturmian_word(theta, 0, 10 * 200 + 10 * 377).word;
        const auto prof = complexity_profile_windowed(w, 200);
        for (std::int64_t n = 1; n <= 200; ++n) CHECK(prof[static_cast<std::size_t>(n - 1)].count == n + 1);
    }
    CHECK(complexity_exact_rotation(IrrationalParam::exact(oracle::q(2, 5)), 10).count == 5);
}

TEST_CASE("product complexity") {
    const auto a = param_for_horizon(golden, 100000);
    const auto b = param_for_horizon(silver, 100000);
    const auto c = param_for_horizon(bronze, 100000);
    CHECK(product_complexity({a}, 9).count == 10);
    CHECK(product_complexity({a, b}, 3).count == 16);
    CHECK(product_complexity({a, b, c}, 10).count == 1331);
    CHECK_THROWS_AS(product_complexity({a, a}, 3), DomainError);

    // 5000 symbols still miss some of the rarest product cylinders
    CHECK(complexity_windowed(product_word({a, b, c}, {0, 0, 0}, 5000).word, 10).count <= 1331);
    const auto w = product_word({a, b, c}, {0, 0, 0}, 20000).word;
    CHECK(w.alphabet_size == 8);
    CHECK(complexity_windowed(w, 10).count == 1331);
    // coordinates of the product word are the factor words
    const auto wa = sturmian_word(a, 0, 20000).word;
    for (std::size_t i = 0; i < w.size(); ++i) CHECK((w.symbols[i] & 1) == wa.symbols[i]);
}

TEST_CASE("de Bruijn words contain every block once") {
    const auto w = de_bruijn_word(2, 4);
    CHECK(w.size() == 16 + 3);
    CHECK(complexity_windowed(w, 4).count == 16);
    CHECK(complexity_windowed(de_bruijn_word(3, 3), 3).count == 27);
}

TEST_CASE("Bowen counts from complexity") {
    const auto theta = param_for_horizon(golden, 100000);
    const auto w = sturmian_word(theta, 0, 20000).word;
    auto p = [&](std::int64_t n) { return complexity_windowed(w, n).count; };
    CHECK(bowen_count_from_complexity(p, 1, 2) == 6);
    CHECK(bowen_count_from_complexity(p, 1, 0) == 4);
    const auto db = de_bruijn_word(2, 4);
    CHECK(bowen_count_from_complexity([&](std::int64_t n) { return complexity_windowed(db, n).count; }, 1, 1) ==
          16);
    CHECK_THROWS_AS(bowen_count_from_complexity(p, 0, 1), DomainError);
}

TEST_CASE("topological slow entropy from complexity") {
    std::vector<CountPoint> sturm, prod, flat;
    for (std::int64_t n = 1; n <= 5000; n = n * 5 / 4 + 1) {
        sturm.push_back({n, static_cast<double>(n + 1)});
        prod.push_back({n, static_cast<double>((n + 1) * (n + 1))});
        flat.push_back({n, 3.0});
    }
    CHECK(top_slow_entropy(sturm, ScaleFamily::polynomial).exponent == doctest::Approx(1.0).epsilon(0.05));
    CHECK(top_slow_entropy(prod, ScaleFamily::polynomial).exponent == doctest::Approx(2.0).epsilon(0.05));
    CHECK(top_slow_entropy(flat, ScaleFamily::polynomial).exponent == 0.0);
}

TEST_CASE("serialization") {
    const auto w = parse_digits("0110", 2);
    CHECK(to_digits(w) == "0110");
    CHECK_THROWS_AS(parse_digits("012", 2), DomainError);
    CHECK(complexity_csv_row({5, 6, ComplexityMethod::partition_exact}) == "5,6,partition-exact");
}
