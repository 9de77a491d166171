#pragma once

/*
 * Interval exchange transformations with exact rational data.
 *
 * Symbols are 0..d-1. pi_top[a] and pi_bottom[a] give the 1-based position of
 * symbol a in the top (domain) and bottom (image) orders. The top interval of
 * a is [sum of lengths before it on top, + lambda_a), and it is translated to
 * the matching slot in the bottom order. Intervals are half-open.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowent/arithmetic.hpp"
#include "slowent/covering.hpp"
#include "slowent/measure.hpp"
#include "slowent/rational.hpp"

namespace slowent {

class IntervalExchange {
public:
    /// `length_error` bounds |lambda_true - lambda| per symbol when the
    /// lengths are proxies of irrational data (0 for exact maps).
    IntervalExchange(std::vector<Rational> lengths, std::vector<int> pi_top, std::vector<int> pi_bottom,
                     Rational length_error = 0);

    /// Top order a_1..a_d, bottom order reversed.
    static IntervalExchange symmetric(std::vector<Rational> lengths, Rational length_error = 0);

    std::size_t size() const { return lengths_.size(); }
    const std::vector<Rational>& lengths() const { return lengths_; }
    const std::vector<int>& pi_top() const { return pi_top_; }
    const std::vector<int>& pi_bottom() const { return pi_bottom_; }
    const Rational& total_length() const { return total_; }
    const Rational& length_error() const { return length_error_; }
    bool irreducible() const { return irreducible_; }

    /// beta_1 < ... < beta_{d-1}: interior cuts of the top partition.
    std::vector<Rational> discontinuities() const;
    /// Symbols listed in top order.
    std::vector<int> top_order() const;
    /// Lengths listed in top order.
    std::vector<Rational> top_lengths() const;

    const Rational& top_start(int symbol) const { return top_start_[static_cast<std::size_t>(symbol)]; }
    const Rational& bottom_start(int symbol) const { return bottom_start_[static_cast<std::size_t>(symbol)]; }
    Rational translation(int symbol) const { return bottom_start(symbol) - top_start(symbol); }

    /// Symbol whose top interval contains x.
    int symbol_at(const Rational& x) const;
    Rational apply(const Rational& x) const;

private:
    std::vector<Rational> lengths_;
    std::vector<int> pi_top_;
    std::vector<int> pi_bottom_;
    Rational length_error_;
    Rational total_;
    std::vector<Rational> top_start_;
    std::vector<Rational> bottom_start_;
    bool irreducible_ = true;
};

Rational iet_apply(const IntervalExchange& g, const Rational& x);
/// Inverse map, with symbols renumbered in its own top order.
IntervalExchange iet_inverse(const IntervalExchange& g);
/// x -> |I| - x conjugate of g (both orders reversed), renumbered in top order.
IntervalExchange involution_conjugate(const IntervalExchange& g);
/// x -> c x conjugate of g.
IntervalExchange scale_conjugate(const IntervalExchange& g, const Rational& c);

/// Two-interval exchange (1 - theta, theta): the rotation by theta.
IntervalExchange rotation_iet(const IrrationalParam& theta);

struct IdocReport {
    std::int64_t depth = 0;
    bool idoc_up_to_depth = true;
    // first n with g^{-n}(D) meeting D, and the discontinuity hit
    std::optional<std::pair<std::int64_t, Rational>> first_collision;
};

/// Backward orbits of the discontinuities for n = 1..depth.
IdocReport idoc_check(const IntervalExchange& g, std::int64_t depth);

struct RefinedPartition {
    std::int64_t n = 0;
    std::vector<Rational> endpoints;     // left endpoints of the atoms, sorted, starting at 0
    std::vector<Rational> atom_lengths;  // left to right
    Rational min_atom;
    Rational max_atom;

    std::int64_t atom_count() const { return static_cast<std::int64_t>(atom_lengths.size()); }
    MeasureMultiset multiset() const;
};

/// Atoms of the join of g^{-i}(P) for i = 0..n-1, P the top partition.
RefinedPartition refine(const IntervalExchange& g, std::int64_t n);

struct RecurrencePoint {
    std::int64_t n = 0;
    std::int64_t atoms = 0;
    Rational min_atom;       // epsilon_n
    Rational scaled_min;     // n * epsilon_n
    Rational max_min_ratio;  // homogeneity diagnostic
};

/// Incremental refine() for n = 1..depth.
std::vector<RecurrencePoint> linear_recurrence_profile(const IntervalExchange& g, std::int64_t depth);

struct ThreeIetLengths {
    std::array<Rational, 3> raw;         // sums to 1 + xi
    std::array<Rational, 3> normalized;  // sums to 1
    Rational error_bound;                // per-entry bound for normalized
    bool wrapped = false;                // alpha + xi > 1 branch
};

/// (xi, 1-alpha-xi, alpha+xi) or (xi, 2-alpha-xi, alpha+xi-1), scaled by 1/(1+xi).
ThreeIetLengths from_alpha_xi(const IrrationalParam& alpha, const IrrationalParam& xi);
/// Symmetric 3-IET on the normalized lengths.
IntervalExchange three_iet(const ThreeIetLengths& lengths);
/// Inverse of from_alpha_xi on the raw lengths.
Rational alpha_of_3iet(const std::array<Rational, 3>& raw, const Rational& xi);

/// Symbols of x, g x, ..., g^{n-1} x.
std::vector<int> iet_coding(const IntervalExchange& g, const Rational& x, std::int64_t n);
/// Fraction of the first n positions where the codings of x and y differ.
Rational hamming_distance_coded(const IntervalExchange& g, const Rational& x, const Rational& y, std::int64_t n);

/// Greedy Hamming covering of m random points at each horizon of n_grid.
CoveringEstimate metric_slow_entropy_estimate(const IntervalExchange& g, const Rational& epsilon,
                                              std::span<const std::int64_t> n_grid, std::int64_t samples,
                                              std::uint64_t seed);

/// The same for the product of several maps acting coordinatewise, coded by
/// the product partition. Each sample draws its coordinates in factor order.
CoveringEstimate product_metric_slow_entropy_estimate(std::span<const IntervalExchange> factors,
                                                      const Rational& epsilon, std::span<const std::int64_t> n_grid,
                                                      std::int64_t samples, std::uint64_t seed);

struct AtomCover {
    std::int64_t count = 0;
    bool idoc_warning = false;  // idoc not certified up to n
};

/// Fewest atoms of refine(g, n) with total length > (1 - epsilon) |I|.
AtomCover semitop_covering_via_atoms(const IntervalExchange& g, const Rational& epsilon, std::int64_t n);

}  // namespace slowent
