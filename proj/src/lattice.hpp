#pragma once

// Internal helpers for running rotations on an integer lattice.

#include <cstdint>
#include <initializer_list>

#include "slowent/arithmetic.hpp"
#include "slowent/errors.hpp"
#include "slowent/rational.hpp"

namespace slowent::detail {

/// x -> x + alpha mod 1 with every coordinate an int64 multiple of 1/den.
struct RotationLattice {
    std::int64_t den = 1;
    std::int64_t step = 0;

    std::int64_t coord(const Rational& x) const { return to_lattice(frac(x), den); }
    std::int64_t advance(std::int64_t x) const {
        x += step;
        return x >= den ? x - den : x;
    }
    std::int64_t retreat(std::int64_t x) const {
        x -= step;
        return x < 0 ? x + den : x;
    }
};

/// Lattice holding the proxy of alpha, the given points, and multiples of 1/extra.
inline RotationLattice make_rotation_lattice(const IrrationalParam& alpha, std::initializer_list<Rational> points,
                                             std::int64_t extra = 1) {
    std::int64_t den = checked_lcm(denominator_int64(alpha.proxy()), extra);
    for (const auto& p : points) den = checked_lcm(den, denominator_int64(p));
    RotationLattice lat;
    lat.den = den;
    lat.step = to_lattice(alpha.proxy(), den);
    return lat;
}

/// Lattice distance between points of the circle Z/den.
inline std::int64_t circle_dist(std::int64_t a, std::int64_t b, std::int64_t den) {
    std::int64_t d = a > b ? a - b : b - a;
    return d < den - d ? d : den - d;
}

/// After j steps with a proxy, an orbit point may sit up to j * err away from
/// the true one. A boundary test on the proxy orbit is trusted only when the
/// lattice distance to the boundary exceeds that drift. A distance of exactly
/// zero is a coincidence on the lattice (the start point lies on the backward
/// orbit of a cut); it is resolved by the half-open rule and reported.
class DriftGuard {
public:
    DriftGuard(const Rational& err, std::int64_t den, std::int64_t max_steps)
        : exact_(err == 0), scaled_err_(err * den) {
        if (!exact_) {
            Rational worst = scaled_err_ * Rational(Integer(static_cast<long>(max_steps)));
            fast_bound_ = fits_int64(floor_of(worst)) ? to_int64(floor_of(worst)) + 1 : INT64_MAX;
        }
    }

    /// True on an exact hit; throws PrecisionError when the call is ambiguous.
    bool check(std::int64_t dist, std::int64_t steps) const {
        if (dist == 0) return true;
        if (exact_ || steps == 0 || dist > fast_bound_) return false;
        if (Rational(Integer(static_cast<long>(dist))) > scaled_err_ * Rational(Integer(static_cast<long>(steps))))
            return false;
        throw PrecisionError("orbit point within proxy error of a boundary; deepen the continued fraction");
    }

private:
    bool exact_;
    Rational scaled_err_;
    std::int64_t fast_bound_ = 0;
};

}  // namespace slowent::detail
