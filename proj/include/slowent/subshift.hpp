#pragma once

/*
 * Rotation codings (Sturmian words), factor complexity, and products.
 *
 * Coding convention: R(x) = x + theta mod 1 is coded by I_0 = [0, 1 - theta)
 * and I_1 = [1 - theta, 1), half-open, so a Sturmian word has n + 1 factors of
 * each length n.
 */

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slowent/arithmetic.hpp"
#include "slowent/rational.hpp"
#include "slowent/scales.hpp"

namespace slowent {

struct Word {
    std::vector<std::uint8_t> symbols;
    int alphabet_size = 2;

    std::size_t size() const { return symbols.size(); }
    /// Throws DomainError if a symbol is outside the alphabet.
    void validate() const;
};

std::string to_digits(const Word& w);
Word parse_digits(std::string_view digits, int alphabet_size = 10);

enum class ComplexityMethod { windowed, partition_exact, product_formula };
std::string_view to_string(ComplexityMethod method);

struct FactorCount {
    std::int64_t n = 0;
    std::int64_t count = 0;
    ComplexityMethod method = ComplexityMethod::windowed;
};

struct CodedWord {
    Word word;
    std::int64_t endpoint_hits = 0;  // orbit points exactly on a cut, resolved half-open
    bool rational_rotation = false;  // exact rational theta: periodic, not Sturmian
};

/// v_i = 1 iff R^i(beta) lies in [1 - theta, 1), for i = 0..length-1.
CodedWord sturmian_word(const IrrationalParam& theta, const Rational& beta, std::int64_t length);

/// Number of distinct length-n windows of the word.
FactorCount complexity_windowed(const Word& word, std::int64_t n);
/// Windowed counts for every n = 1..n_max in one pass.
std::vector<FactorCount> complexity_profile_windowed(const Word& word, std::int64_t n_max);
/// Factors of length n counted as atoms of the n-step refined coding partition.
FactorCount complexity_exact_rotation(const IrrationalParam& theta, std::int64_t n);

/// (n + 1)^m for m pairwise distinct rotation numbers. Assumes the numbers are
/// rationally independent, which finite proxies cannot certify; the windowed
/// count on product_word is the empirical check.
FactorCount product_complexity(const std::vector<IrrationalParam>& thetas, std::int64_t n);

/// Coordinatewise coding of the product rotation; symbol sum_i 2^i v_i.
CodedWord product_word(const std::vector<IrrationalParam>& thetas, const std::vector<Rational>& betas,
                       std::int64_t length);

/// de Bruijn word over `alphabet` of order `order`, extended cyclically so that
/// every word of length `order` appears as a window.
Word de_bruijn_word(int alphabet, int order);

/// Number of (2^{-(k-1)}, n) Bowen balls needed for the shift, as p_{2k+1+n}.
std::int64_t bowen_count_from_complexity(const std::function<std::int64_t(std::int64_t)>& complexity, std::int64_t k,
                                         std::int64_t n);

EntropyEstimate top_slow_entropy(std::span<const CountPoint> complexity, ScaleFamily family);

std::string complexity_csv_header();
std::string complexity_csv_row(const FactorCount& c);

}  // namespace slowent
