#include "slowent/measure.hpp"

#include <algorithm>

#include "slowent/errors.hpp"

namespace slowent {

void MeasureMultiset::add(const Rational& value, std::int64_t count) {
    if (count < 0) throw DomainError("negative multiplicity");
    if (count == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                               [](const WeightedValue& e, const Rational& v) { return e.value > v; });
    if (it != entries_.end() && it->value == value) {
        it->count += count;
        return;
    }
    entries_.insert(it, WeightedValue{value, count});
}

std::int64_t MeasureMultiset::total_count() const {
    std::int64_t n = 0;
    for (const auto& e : entries_) n += e.count;
    return n;
}

Rational MeasureMultiset::total_mass() const {
    Rational s = 0;
    for (const auto& e : entries_) s += e.value * e.count;
    return s;
}

Rational MeasureMultiset::max_value() const {
    if (entries_.empty()) throw DomainError("empty multiset");
    return entries_.front().value;
}

Rational MeasureMultiset::min_value() const {
    if (entries_.empty()) throw DomainError("empty multiset");
    return entries_.back().value;
}

std::vector<Rational> MeasureMultiset::expanded() const {
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(total_count()));
    for (const auto& e : entries_)
        for (std::int64_t i = 0; i < e.count; ++i) out.push_back(e.value);
    return out;
}

bool operator==(const MeasureMultiset& a, const MeasureMultiset& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
        if (a.entries_[i].value != b.entries_[i].value || a.entries_[i].count != b.entries_[i].count) return false;
    return true;
}

std::int64_t greedy_cover_count(const MeasureMultiset& measures, const Rational& threshold) {
    if (threshold < 0) return 0;
    Rational covered = 0;
    std::int64_t taken = 0;
    for (const auto& e : measures.entries()) {
        if (e.value <= 0) break;
        // smallest t with covered + t * value > threshold
        const Rational gap = threshold - covered;
        const std::int64_t need = to_int64(floor_of(gap / e.value)) + 1;
        if (need <= e.count) return taken + need;
        taken += e.count;
        covered += e.value * e.count;
    }
    return taken + 1;
}

}  // namespace slowent
