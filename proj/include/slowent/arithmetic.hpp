#pragma once

/*
 * Continued fractions and Diophantine bookkeeping.
 *
 * An irrational parameter in (0,1) is never a float here. It is given by its
 * partial quotients [0; a_1, a_2, ...] (a finite list, or a pre-period plus a
 * repeating block), and every downstream computation runs on the depth-K
 * convergent p_K/q_K, an exact rational, together with a certified bound on
 * |theta - p_K/q_K|. Operations that cannot certify their answer from that
 * bound throw PrecisionError; the caller deepens the proxy and retries.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slowent/rational.hpp"

namespace slowent {

/// Partial quotients a_1, a_2, ... of a number in (0,1) (a_0 = 0 implied).
class ContinuedFraction {
public:
    /// Finite expansion; trailing 1s are folded so the last quotient is >= 2.
    static ContinuedFraction finite(std::vector<std::int64_t> quotients);
    /// Eventually periodic expansion: prefix, then `period` repeated forever.
    static ContinuedFraction periodic(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period);
    /// "[0;1,2,2]", "[0;(1)]", "[0;2,(1,2)]".
    static ContinuedFraction parse(std::string_view spec);

    bool is_finite() const { return period_.empty(); }
    /// Number of quotients of a finite expansion.
    std::size_t finite_length() const { return prefix_.size(); }
    bool materializable(std::size_t depth) const { return !is_finite() || depth <= prefix_.size(); }

    /// a_i, 1-based.
    std::int64_t quotient(std::size_t i) const;
    /// a_1..a_depth (fewer if the expansion is finite and shorter).
    std::vector<std::int64_t> quotients(std::size_t depth) const;

    /// Expansion of 1 - x.
    ContinuedFraction complement() const;
    /// Value of a finite expansion.
    Rational value() const;

    std::string to_string() const;

    const std::vector<std::int64_t>& prefix() const { return prefix_; }
    const std::vector<std::int64_t>& period() const { return period_; }

    friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;

private:
    ContinuedFraction drop_front(std::size_t count) const;

    std::vector<std::int64_t> prefix_;
    std::vector<std::int64_t> period_;
};

struct Convergent {
    Integer p;
    Integer q;
};

/// Convergents p_k/q_k for k = -1..K from the recurrence
/// p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2},
/// seeded with (p_{-1}, q_{-1}) = (1, 0), (p_0, q_0) = (0, 1).
class ConvergentTable {
public:
    ConvergentTable(const ContinuedFraction& cf, std::size_t depth);

    std::size_t depth() const { return quotients_.size(); }
    const Integer& p(std::ptrdiff_t k) const { return p_.at(static_cast<std::size_t>(k + 1)); }
    const Integer& q(std::ptrdiff_t k) const { return q_.at(static_cast<std::size_t>(k + 1)); }
    /// a_k, k >= 1.
    std::int64_t a(std::size_t k) const { return quotients_.at(k - 1); }

private:
    std::vector<std::int64_t> quotients_;
    std::vector<Integer> p_;
    std::vector<Integer> q_;
};

struct ConvergentList {
    std::vector<Convergent> items;  // k = 1..K
    bool truncated = false;         // requested K ran past a finite expansion
};

/// (p_k, q_k) for k = 1..K; stops early (flagging truncation) on finite expansions.
ConvergentList convergents(const ContinuedFraction& cf, std::size_t K);

/// Continued fraction of num/den in (0,1), via the Euclidean algorithm.
ContinuedFraction cf_of_rational(std::int64_t numerator, std::int64_t denominator);
ContinuedFraction cf_of_rational(const Rational& x);

/// A number in (0,1) known through a continued fraction, carried as its
/// depth-K convergent plus an upper bound on the approximation error.
/// Exact rationals are the special case with error bound 0.
class IrrationalParam {
public:
    /// Depth-K proxy. For infinite expansions the bound is
    /// 1 / (q_K (q_{K+1} + q_K / (a_{K+2} + 1))), strictly below 1/(q_K q_{K+1});
    /// for finite expansions it is the exact distance to the full value.
    static IrrationalParam from_cf(const ContinuedFraction& cf, std::size_t depth);
    static IrrationalParam exact(const Rational& value);
    /// CF spec ("[0;(1)]") at the given depth, or a rational ("2/5") taken exactly.
    static IrrationalParam parse(std::string_view spec, std::size_t depth);

    const ContinuedFraction& cf() const { return cf_; }
    std::size_t depth() const { return depth_; }
    const Rational& proxy() const { return proxy_; }
    const Rational& error_bound() const { return error_bound_; }
    bool is_exact() const { return error_bound_ == 0; }

    /// The same number at a larger depth.
    IrrationalParam deepened(std::size_t extra) const;
    /// 1 - x, with the matching depth so that the proxy is again a convergent.
    IrrationalParam complement() const;
    /// Convergent table of the expansion up to depth() (+1 when available).
    ConvergentTable table() const;

    std::string describe() const;

private:
    ContinuedFraction cf_;
    std::size_t depth_ = 0;
    Rational proxy_;
    Rational error_bound_;
};

/// Proxy depth for an operation that needs convergent index `needed`:
/// needed + 10, limited so that q_K stays within `max_q`, and never below
/// needed + 4. Throws PrecisionError if even needed + 4 exceeds `max_q`.
std::size_t default_depth(const ContinuedFraction& cf, std::size_t needed, const Integer& max_q);
/// Smallest index k with q_k > n (the first convergent past a horizon n).
std::size_t index_past(const ContinuedFraction& cf, std::int64_t n);
/// Parameter at a depth suited to orbit horizons up to n (64-bit lattice safe).
IrrationalParam param_for_horizon(const ContinuedFraction& cf, std::int64_t n);

struct CertifiedRational {
    Rational value;
    Rational error_bound;
};

/// eta_k = |q_k theta - p_k| for the rotation number theta (eta_{-1} = 1).
/// Needs proxy depth >= k + 4 (exact parameters: k below the expansion length).
CertifiedRational eta(const IrrationalParam& theta, std::ptrdiff_t k);

/// ||x|| = min over integers n of |x - n|.
Rational dist_nearest_int(const Rational& x);

struct BadlyApproxCertificate {
    std::int64_t max_quotient = 0;
    Rational ratio_bound;          // max over 1 <= m < depth of q_{m+1}/q_m
    Rational last_ratio;           // q_depth / q_{depth-1}
    bool quotients_growing = false;  // second-half max exceeds first-half max
};

/// Finite-depth evidence (never proof) of bounded partial quotients.
BadlyApproxCertificate badly_approx_certificate(const ContinuedFraction& cf, std::size_t depth);

struct SAlphaEntry {
    std::size_t n = 0;
    Integer q;
    Rational value;        // c_n = q_n * min_{-q_n<j<q_n} ||xi - j alpha||
    Rational error_bound;  // bound on |c_n(true) - c_n(proxy)|
    std::int64_t argmin_j = 0;
};

struct SAlphaProfile {
    std::vector<SAlphaEntry> entries;
    Rational min_value;  // empirical C_xi over the examined range
};

/// Exhaustive scan of ||xi - j alpha|| over |j| < q_n for n = 1..depth.
/// The alpha proxy must have depth >= depth + 4. Throws PrecisionError when a
/// nonzero c_n is not at least twice its error bound.
SAlphaProfile s_alpha_profile(const IrrationalParam& xi, const IrrationalParam& alpha, std::size_t depth);

}  // namespace slowent
