#pragma once

/*
 * Gaps of a rotation orbit {0, t, 2t, ..., nt} mod 1 and the cylinder
 * measures of the two-interval rotation coding they determine.
 *
 * The orbit of n+1 points cuts the circle into gaps of at most three
 * lengths. Writing n = m q_k + q_{k-1} + r with q_k + q_{k-1} <= n <= q_{k+1} + q_k - 1:
 *
 *   small   eta_k                  n + 1 - q_k times
 *   middle  eta_{k-1} - m eta_k    r + 1 times
 *   large   eta_{k-1} - (m-1) eta_k  q_k - r - 1 times
 *
 * with eta_k = |q_k t - p_k|. The large length is small + middle.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "slowent/arithmetic.hpp"
#include "slowent/measure.hpp"
#include "slowent/rational.hpp"

namespace slowent {

struct Gap {
    Rational length;
    std::int64_t count = 0;
};

struct GapStructure {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::int64_t m = 0;
    std::int64_t r = 0;
    Gap small;
    Gap middle;
    Gap large;

    /// Throws std::logic_error if a structural invariant fails.
    void check() const;
    MeasureMultiset multiset() const;
};

/// {j t mod 1 : j = 0..n}, sorted, for the rotation number t = theta_prime.
std::vector<Rational> partition_endpoints(const IrrationalParam& theta_prime, std::int64_t n);

/// Sorted circular differences of partition_endpoints (the brute-force route).
MeasureMultiset sorted_gap_multiset(const IrrationalParam& theta_prime, std::int64_t n);

/// Closed-form gap structure from convergent data.
GapStructure gap_structure(const IrrationalParam& theta_prime, std::int64_t n);

/// Measures of the length-n cylinders of the coding by [0, 1-theta), [1-theta, 1).
MeasureMultiset cylinder_measures(const IrrationalParam& theta, std::int64_t n);

/// Fewest length-n cylinders with total measure > 1 - epsilon.
std::int64_t cover_count(const IrrationalParam& theta, std::int64_t n, const Rational& epsilon);

struct SubsequencePoint {
    std::size_t k = 0;
    std::int64_t n = 0;
    std::int64_t cover = 0;
    double ratio = 0.0;
};

/// cover_count along n_k = q_{k+1} + q_k - 1 (convergents of 1 - theta),
/// where only two gap lengths occur.
std::vector<SubsequencePoint> semitop_subsequence(const IrrationalParam& theta, const Rational& epsilon,
                                                  std::size_t k_max);

/// Cylinder measures of the coordinatewise product of several rotation codings.
MeasureMultiset product_cylinder_measures(const std::vector<IrrationalParam>& thetas, std::int64_t n);
std::int64_t product_cover_count(const std::vector<IrrationalParam>& thetas, std::int64_t n,
                                 const Rational& epsilon);

std::string gap_csv_header();
std::string gap_csv_row(const GapStructure& g);

}  // namespace slowent
