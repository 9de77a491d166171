#pragma once

/*
 * Exact rational arithmetic for the toolkit.
 *
 * Public values are GMP rationals (always canonical: reduced, positive
 * denominator). Inner loops that iterate a map millions of times do not use
 * them directly; they move to an integer lattice: every value involved is a
 * multiple of 1/D for one common denominator D, and the loop runs on the
 * int64 numerators. `to_lattice` performs that move and refuses (rather than
 * rounds) anything that does not sit on the lattice.
 */

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace slowent {

using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Accepts "p/q", "p", or a finite decimal such as "0.05" (parsed exactly).
Rational parse_rational(std::string_view text);

/// Always "p/q", including integers ("3/1").
std::string to_pq(const Rational& x);

Integer floor_of(const Rational& x);
Rational frac(const Rational& x);  // x - floor(x), in [0,1)
Rational abs_of(const Rational& x);
double to_double(const Rational& x);

std::int64_t to_int64(const Integer& z);
bool fits_int64(const Integer& z);

std::int64_t checked_lcm(std::int64_t a, std::int64_t b);
std::int64_t denominator_int64(const Rational& x);

/// Numerator of x over denominator `den`; throws ResourceError unless
/// x * den is an integer that fits in int64.
std::int64_t to_lattice(const Rational& x, std::int64_t den);

/// Floor of a/b for b > 0 (C++ division truncates toward zero).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const std::int64_t q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t b) {
    const std::int64_t r = a % b;
    return r < 0 ? r + b : r;
}

}  // namespace slowent
