#pragma once

#include <cstdint>
#include <vector>

#include "slowent/rational.hpp"

namespace slowent {

struct WeightedValue {
    Rational value;
    std::int64_t count = 0;
};

/// A finite multiset of exact rationals stored as (value, multiplicity),
/// sorted by value descending with equal values merged.
class MeasureMultiset {
public:
    MeasureMultiset() = default;

    void add(const Rational& value, std::int64_t count = 1);

    const std::vector<WeightedValue>& entries() const { return entries_; }
    std::int64_t total_count() const;
    Rational total_mass() const;
    Rational max_value() const;
    Rational min_value() const;
    /// Every element listed individually, descending.
    std::vector<Rational> expanded() const;

    friend bool operator==(const MeasureMultiset& a, const MeasureMultiset& b);

private:
    std::vector<WeightedValue> entries_;
};

/// Minimal number of elements whose sum strictly exceeds `threshold`.
///
/// Taking elements in descending order is optimal for a pure cardinality
/// objective: given any family F with sum > threshold, swap each chosen
/// element for a larger unchosen one; the sum never decreases and the size is
/// unchanged, so after finitely many swaps F consists of the |F| largest
/// elements. Hence the greedy prefix reaches the threshold no later than F.
/// Returns total_count() + 1 if even the whole multiset does not exceed it.
std::int64_t greedy_cover_count(const MeasureMultiset& measures, const Rational& threshold);

}  // namespace slowent
