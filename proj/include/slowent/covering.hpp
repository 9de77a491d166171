#pragma once

/*
 * Monte-Carlo Hamming coverings shared by the map and flow estimators.
 *
 * m sample points are coded up to the largest horizon. For each horizon the
 * greedy pass walks the samples in index order: the first uncovered sample
 * becomes a center and removes every uncovered sample within Hamming distance
 * < epsilon, until the covered fraction exceeds 1 - epsilon. The number of
 * centers upper-bounds the sampled covering number (true minimum cover is
 * NP-hard), which is enough for exponent fitting.
 *
 * A count estimates the covering number only while it is small against m;
 * near m it mostly reflects the sample size. The fit uses the leading
 * horizons with count <= m / 10 (the resolved range).
 *
 * Every sample draws from its own substream seeded by (seed, index), so the
 * output depends only on (seed, m), never on evaluation order.
 */

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "slowent/errors.hpp"
#include "slowent/rational.hpp"
#include "slowent/scales.hpp"

namespace slowent {

struct CoveringEstimate {
    Rational epsilon;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<CountPoint> counts;  // (horizon, number of centers)
    std::size_t resolved = 0;        // leading entries of counts used by the fit
    EntropyEstimate estimate;        // polynomial-scale fit of the resolved counts
};

/// Independent generator for sample `index`.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);
/// Uniform integer in [0, bound) (bound > 0), from one 64-bit draw.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Rejects sample budgets too small to resolve epsilon (m < 100 or eps*m < 10).
void check_sample_budget(std::int64_t samples, const Rational& epsilon);

/// Rejects empty, non-positive or non-increasing horizon grids.
void check_grid(std::span<const std::int64_t> grid);

/// Horizons ceil(ratio^j) in [lo, hi], deduplicated.
std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi, double ratio = 1.3);

/// Symbol sequences stored as bit planes for fast mismatch counts.
class CodingBank {
public:
    CodingBank(int alphabet_size, std::int64_t length, std::int64_t samples);

    std::int64_t length() const { return length_; }
    std::int64_t samples() const { return samples_; }

    void set(std::int64_t sample, std::int64_t position, int symbol);
    int get(std::int64_t sample, std::int64_t position) const;

    /// Mismatches between samples a and b over the first n positions; stops
    /// counting once `limit` is reached.
    std::int64_t mismatches(std::int64_t a, std::int64_t b, std::int64_t n, std::int64_t limit) const;

private:
    const std::uint64_t* plane(std::int64_t sample, int bit) const;
    std::uint64_t* plane(std::int64_t sample, int bit);

    int bits_;
    std::int64_t length_;
    std::int64_t samples_;
    std::size_t words_;
    std::vector<std::uint64_t> data_;
};

/// Smallest integer L with L * den >= num * n: a pair is within distance
/// < eps = num/den at horizon n iff its mismatch count is below L.
std::int64_t mismatch_limit(const Rational& epsilon, std::int64_t n);

/// Fills `resolved` and `estimate` from the counts; InsufficientDataError
/// when fewer than 8 horizons are resolved.
void fit_resolved(CoveringEstimate& est);

/// Greedy covering count over samples 0..m-1; `within(center, other)` decides
/// membership in the center's ball.
template <class Within>
std::int64_t greedy_cover(std::int64_t samples, const Rational& epsilon, Within&& within) {
    // covered / m > 1 - eps  <=>  covered * den > (den - num) * m
    const Integer num = epsilon.get_num(), den = epsilon.get_den();
    const Integer need = (den - num) * Integer(static_cast<long>(samples));
    std::vector<std::int64_t> open(static_cast<std::size_t>(samples));
    for (std::int64_t i = 0; i < samples; ++i) open[static_cast<std::size_t>(i)] = i;
    std::int64_t covered = 0, centers = 0;
    while (!open.empty() && !(Integer(static_cast<long>(covered)) * den > need)) {
        const std::int64_t c = open.front();
        ++centers;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < open.size(); ++i) {
            const std::int64_t s = open[i];
            if (s == c || within(c, s))
                ++covered;
            else
                open[keep++] = s;
        }
        open.resize(keep);
    }
    return centers;
}

}  // namespace slowent
