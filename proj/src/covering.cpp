#include "slowent/covering.hpp"

#include <bit>
#include <cmath>

namespace slowent {

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw DomainError("empty sampling range");
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

void check_sample_budget(std::int64_t samples, const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1) throw DomainError("epsilon must lie in (0,1)");
    if (samples < 100) throw InsufficientDataError("at least 100 samples are required");
    if (epsilon * Rational(Integer(static_cast<long>(samples))) < 10)
        throw InsufficientDataError("epsilon * samples must be at least 10");
}

void check_grid(std::span<const std::int64_t> grid) {
    if (grid.empty()) throw DomainError("empty horizon grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) throw DomainError("horizons must be positive");
        if (i > 0 && grid[i] <= grid[i - 1]) throw DomainError("horizons must be strictly increasing");
    }
}

std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi, double ratio) {
    if (lo < 1 || hi < lo || !(ratio > 1.0)) throw DomainError("bad geometric grid");
    std::vector<std::int64_t> out;
    for (int j = 0;; ++j) {
        const auto v = static_cast<std::int64_t>(std::ceil(std::pow(ratio, j) - 1e-9));
        if (v > hi) break;
        if (v >= lo && (out.empty() || v > out.back())) out.push_back(v);
    }
    return out;
}

CodingBank::CodingBank(int alphabet_size, std::int64_t length, std::int64_t samples)
    : bits_(alphabet_size <= 1 ? 1 : std::bit_width(static_cast<unsigned>(alphabet_size - 1))),
      length_(length),
      samples_(samples),
      words_(static_cast<std::size_t>((length + 63) / 64)) {
    if (alphabet_size < 1 || alphabet_size > 1 << 16) throw DomainError("alphabet size out of range");
    if (length < 1 || samples < 1) throw DomainError("empty coding bank");
    data_.assign(static_cast<std::size_t>(samples) * static_cast<std::size_t>(bits_) * words_, 0);
}

const std::uint64_t* CodingBank::plane(std::int64_t sample, int bit) const {
    return data_.data() + (static_cast<std::size_t>(sample) * static_cast<std::size_t>(bits_) +
                           static_cast<std::size_t>(bit)) * words_;
}

std::uint64_t* CodingBank::plane(std::int64_t sample, int bit) {
    return data_.data() + (static_cast<std::size_t>(sample) * static_cast<std::size_t>(bits_) +
                           static_cast<std::size_t>(bit)) * words_;
}

void CodingBank::set(std::int64_t sample, std::int64_t position, int symbol) {
    const auto w = static_cast<std::size_t>(position >> 6);
    const std::uint64_t mask = std::uint64_t{1} << (position & 63);
    for (int b = 0; b < bits_; ++b) {
        std::uint64_t& word = plane(sample, b)[w];
        if ((symbol >> b) & 1)
            word |= mask;
        else
            word &= ~mask;
    }
}

int CodingBank::get(std::int64_t sample, std::int64_t position) const {
    const auto w = static_cast<std::size_t>(position >> 6);
    int s = 0;
    for (int b = 0; b < bits_; ++b) s |= static_cast<int>((plane(sample, b)[w] >> (position & 63)) & 1) << b;
    return s;
}

std::int64_t CodingBank::mismatches(std::int64_t a, std::int64_t b, std::int64_t n, std::int64_t limit) const {
    const auto full = static_cast<std::size_t>(n >> 6);
    const int rest = static_cast<int>(n & 63);
    std::int64_t count = 0;
    auto word_diff = [&](std::size_t w) {
        std::uint64_t d = 0;
        for (int bit = 0; bit < bits_; ++bit) d |= plane(a, bit)[w] ^ plane(b, bit)[w];
        return d;
    };
    for (std::size_t w = 0; w < full; ++w) {
        count += std::popcount(word_diff(w));
        if (count >= limit) return count;
    }
    if (rest > 0) count += std::popcount(word_diff(full) & ((std::uint64_t{1} << rest) - 1));
    return count;
}

std::int64_t mismatch_limit(const Rational& epsilon, std::int64_t n) {
    // ceil(num * n / den)
    const Integer num = epsilon.get_num() * Integer(static_cast<long>(n));
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), epsilon.get_den_mpz_t());
    return to_int64(q);
}

void fit_resolved(CoveringEstimate& est) {
    est.resolved = 0;
    while (est.resolved < est.counts.size() &&
           est.counts[est.resolved].count * 10 <= static_cast<double>(est.samples))
        ++est.resolved;
    if (est.resolved < 8)
        throw InsufficientDataError("fewer than 8 horizons with count <= samples / 10; raise the sample count");
    est.estimate = exponent_fit(std::span(est.counts).first(est.resolved), ScaleFamily::polynomial);
}

}  // namespace slowent
