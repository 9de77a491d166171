#pragma once

/*
 * Special flows over the rotation x -> x + alpha mod 1 under the step roof
 * f = d1 on [0, xi), d2 on [xi, 1), and the skew shift (x, y) -> (x, x + y).
 *
 * A point (x, s) moves up at unit speed; on reaching the roof it jumps to
 * (x + alpha, 0). Flow atoms are the cells of the 1/k grid on base x height,
 * clipped to the region under the roof.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "slowent/arithmetic.hpp"
#include "slowent/covering.hpp"
#include "slowent/rational.hpp"

namespace slowent {

struct StepRoof {
    Rational xi;
    Rational d1;
    Rational d2;

    void validate() const;
    const Rational& value(const Rational& x) const { return x < xi ? d1 : d2; }
    /// Area under the roof, d1 xi + d2 (1 - xi).
    Rational area() const { return d1 * xi + d2 * (1 - xi); }
};

struct SuspensionPoint {
    Rational x;
    Rational s;

    bool operator==(const SuspensionPoint&) const = default;
};

/// (x, s) with s possibly at or above the roof, flowed into normal form.
SuspensionPoint make_suspension_point(const IrrationalParam& alpha, const StepRoof& roof, const Rational& x,
                                      const Rational& s);

/// f(x) + f(x + alpha) + ... + f(x + (n-1) alpha).
Rational birkhoff_sum(const StepRoof& roof, const IrrationalParam& alpha, const Rational& x, std::int64_t n);

/// f^(n)(x) - f^(n)(y) from the counts of j < n with xi - j alpha and -j alpha
/// in (x, y], times d1 - d2. Arguments in either order.
Rational birkhoff_diff_crossing(const StepRoof& roof, const IrrationalParam& alpha, const Rational& x,
                                const Rational& y, std::int64_t n);

/// Time-t map of the special flow.
SuspensionPoint flow_step(const IrrationalParam& alpha, const StepRoof& roof, const SuspensionPoint& p,
                          const Rational& t);

struct MatchingResult {
    Rational mismatch;    // time in [0, R] with different atoms
    Rational matched;     // R - mismatch
    std::int64_t events;  // roof hits and gridline crossings of both orbits
};

/// Event-driven comparison of the atoms of T_t p and T_t q for t in [0, R].
MatchingResult matching_measure(const IrrationalParam& alpha, const StepRoof& roof, const SuspensionPoint& p,
                                const SuspensionPoint& q, const Rational& horizon, std::int64_t grid_k);

/// ceil(20 / epsilon).
std::int64_t default_grid_k(const Rational& epsilon);

struct RoofSample {
    std::vector<SuspensionPoint> points;
    std::int64_t proposals = 0;  // rejection-sampler draws, points.size() of them accepted
};

/// Uniform points under the roof by rejection from [0,1) x [0, max(d1, d2)).
/// Base coordinates are odd multiples of 1/(2 base_den), heights odd
/// multiples of 1/(2 height_den).
RoofSample sample_under_roof(const StepRoof& roof, std::int64_t count, std::uint64_t seed, std::int64_t base_den,
                             std::int64_t height_den);

struct FlowCovering {
    CoveringEstimate covering;  // horizons are the flow times R
    std::int64_t grid_k = 0;
    std::int64_t proposals = 0;
};

/// Greedy covering of m sampled suspension points, with (1/R) times the
/// mismatch time as the Hamming distance.
FlowCovering flow_hamming_covering(const IrrationalParam& alpha, const StepRoof& roof, const Rational& epsilon,
                                   std::span<const std::int64_t> r_grid, std::int64_t samples, std::uint64_t seed,
                                   std::int64_t grid_k);

/// Cells (floor(k x), floor(k (y + j x))) for j = 0..n-1, as k * row + column.
std::vector<int> skew_shift_coding(const Rational& x, const Rational& y, std::int64_t n, std::int64_t grid_k);

/// Greedy Hamming covering for (x, y) -> (x, x + y) on the torus with the
/// k x k grid partition.
CoveringEstimate skew_shift_covering(const Rational& epsilon, std::span<const std::int64_t> n_grid,
                                     std::int64_t samples, std::uint64_t seed, std::int64_t grid_k);

}  // namespace slowent
