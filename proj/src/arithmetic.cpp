#include "slowent/arithmetic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "slowent/errors.hpp"

namespace slowent {

// ---- ContinuedFraction ----------------------------------------------------

namespace {

void require_positive(const std::vector<std::int64_t>& v) {
    for (auto a : v)
        if (a < 1) throw ConstructionError("partial quotients must be >= 1");
}

std::vector<std::int64_t> parse_list(std::string_view s) {
    std::vector<std::int64_t> out;
    std::string item;
    std::stringstream ss{std::string(s)};
    while (std::getline(ss, item, ',')) {
        std::string t;
        for (char c : item)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) throw ConstructionError("empty partial quotient in '" + std::string(s) + "'");
        for (char c : t)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ConstructionError("bad partial quotient '" + t + "'");
        out.push_back(std::stoll(t));
    }
    return out;
}

}  // namespace

ContinuedFraction ContinuedFraction::finite(std::vector<std::int64_t> quotients) {
    require_positive(quotients);
    while (quotients.size() >= 2 && quotients.back() == 1) {
        quotients.pop_back();
        quotients.back() += 1;
    }
    if (quotients.empty() || (quotients.size() == 1 && quotients[0] == 1))
        throw ConstructionError("finite continued fraction must denote a value in (0,1)");
    ContinuedFraction cf;
    cf.prefix_ = std::move(quotients);
    return cf;
}

ContinuedFraction ContinuedFraction::periodic(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period) {
    if (period.empty()) return finite(std::move(prefix));
    require_positive(prefix);
    require_positive(period);
    // canonical form: primitive period, shortest pre-period
    for (std::size_t len = 1; len < period.size(); ++len) {
        if (period.size() % len != 0) continue;
        bool repeats = true;
        for (std::size_t i = len; i < period.size() && repeats; ++i) repeats = period[i] == period[i - len];
        if (repeats) {
            period.resize(len);
            break;
        }
    }
    while (!prefix.empty() && prefix.back() == period.back()) {
        prefix.pop_back();
        std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
    }
    ContinuedFraction cf;
    cf.prefix_ = std::move(prefix);
    cf.period_ = std::move(period);
    return cf;
}

ContinuedFraction ContinuedFraction::parse(std::string_view spec) {
    std::string s;
    for (char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ConstructionError("continued fraction spec must look like [0;a1,a2,...]: '" + std::string(spec) + "'");
    std::string body = s.substr(1, s.size() - 2);
    if (const auto semi = body.find(';'); semi != std::string::npos) {
        if (body.substr(0, semi) != "0")
            throw ConstructionError("only values in (0,1) are supported (integer part must be 0)");
        body = body.substr(semi + 1);
    }
    std::vector<std::int64_t> prefix, period;
    if (const auto open = body.find('('); open != std::string::npos) {
        const auto close = body.find(')', open);
        if (close == std::string::npos || close != body.size() - 1)
            throw ConstructionError("periodic block must close the spec: '" + std::string(spec) + "'");
        std::string head = body.substr(0, open);
        if (!head.empty()) {
            if (head.back() != ',') throw ConstructionError("expected ',' before '('");
            head.pop_back();
            prefix = parse_list(head);
        }
        period = parse_list(body.substr(open + 1, close - open - 1));
        if (period.empty()) throw ConstructionError("empty periodic block");
        return periodic(std::move(prefix), std::move(period));
    }
    return finite(parse_list(body));
}

std::int64_t ContinuedFraction::quotient(std::size_t i) const {
    if (i == 0) throw DomainError("partial quotients are 1-based");
    if (i <= prefix_.size()) return prefix_[i - 1];
    if (period_.empty()) throw DomainError("index past the end of a finite continued fraction");
    return period_[(i - prefix_.size() - 1) % period_.size()];
}

std::vector<std::int64_t> ContinuedFraction::quotients(std::size_t depth) const {
    const std::size_t n = is_finite() ? std::min(depth, prefix_.size()) : depth;
    std::vector<std::int64_t> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(quotient(i));
    return out;
}

ContinuedFraction ContinuedFraction::drop_front(std::size_t count) const {
    ContinuedFraction out;
    if (count <= prefix_.size()) {
        out.prefix_.assign(prefix_.begin() + static_cast<std::ptrdiff_t>(count), prefix_.end());
        out.period_ = period_;
        return out;
    }
    if (period_.empty()) return out;
    const std::size_t shift = (count - prefix_.size()) % period_.size();
    out.period_.assign(period_.begin() + static_cast<std::ptrdiff_t>(shift), period_.end());
    out.period_.insert(out.period_.end(), period_.begin(), period_.begin() + static_cast<std::ptrdiff_t>(shift));
    return out;
}

ContinuedFraction ContinuedFraction::complement() const {
    const std::int64_t a1 = quotient(1);
    std::vector<std::int64_t> front;
    ContinuedFraction rest;
    if (a1 == 1) {
        front = {quotient(2) + 1};
        rest = drop_front(2);
    } else {
        front = {1, a1 - 1};
        rest = drop_front(1);
    }
    front.insert(front.end(), rest.prefix_.begin(), rest.prefix_.end());
    return periodic(std::move(front), rest.period_);
}

Rational ContinuedFraction::value() const {
    if (!is_finite()) throw DomainError("value() of an infinite continued fraction");
    ConvergentTable t(*this, prefix_.size());
    const auto k = static_cast<std::ptrdiff_t>(prefix_.size());
    Rational r{t.p(k), t.q(k)};
    r.canonicalize();
    return r;
}

std::string ContinuedFraction::to_string() const {
    std::string s = "[0;";
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(prefix_[i]);
    }
    if (!period_.empty()) {
        if (!prefix_.empty()) s += ",";
        s += "(";
        for (std::size_t i = 0; i < period_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(period_[i]);
        }
        s += ")";
    }
    return s + "]";
}

// ---- convergents -----------------------------------------------------------

ConvergentTable::ConvergentTable(const ContinuedFraction& cf, std::size_t depth) : quotients_(cf.quotients(depth)) {
    p_.reserve(quotients_.size() + 2);
    q_.reserve(quotients_.size() + 2);
    p_.emplace_back(1);
    q_.emplace_back(0);
    p_.emplace_back(0);
    q_.emplace_back(1);
    for (std::size_t k = 0; k < quotients_.size(); ++k) {
        const Integer a{static_cast<long>(quotients_[k])};
        p_.push_back(a * p_[k + 1] + p_[k]);
        q_.push_back(a * q_[k + 1] + q_[k]);
    }
}

ConvergentList convergents(const ContinuedFraction& cf, std::size_t K) {
    ConvergentTable t(cf, K);
    ConvergentList out;
    out.truncated = t.depth() < K;
    for (std::size_t k = 1; k <= t.depth(); ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        out.items.push_back({t.p(i), t.q(i)});
    }
    return out;
}

ContinuedFraction cf_of_rational(const Rational& x) {
    if (x <= 0 || x >= 1) throw DomainError("continued fraction input must lie in (0,1)");
    Integer num = x.get_num();
    Integer den = x.get_den();
    std::vector<std::int64_t> out;
    while (num != 0) {
        Integer a = den / num;
        Integer r = den % num;
        out.push_back(to_int64(a));
        den = num;
        num = r;
    }
    return ContinuedFraction::finite(std::move(out));
}

ContinuedFraction cf_of_rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator <= 0) throw DomainError("denominator must be positive");
    return cf_of_rational(make_rational(numerator, denominator));
}

// ---- IrrationalParam -------------------------------------------------------

IrrationalParam IrrationalParam::from_cf(const ContinuedFraction& cf, std::size_t depth) {
    if (depth == 0) throw DomainError("proxy depth must be >= 1");
    if (cf.is_finite() && depth >= cf.finite_length()) return exact(cf.value());

    ConvergentTable t(cf, depth + 2);
    const auto K = static_cast<std::ptrdiff_t>(depth);
    IrrationalParam out;
    out.cf_ = cf;
    out.depth_ = depth;
    out.proxy_ = Rational{t.p(K), t.q(K)};
    out.proxy_.canonicalize();
    if (out.proxy_ <= 0 || out.proxy_ >= 1)
        throw PrecisionError("depth " + std::to_string(depth) + " proxy of " + cf.to_string() +
                             " is not inside (0,1); deepen");
    if (cf.is_finite()) {
        out.error_bound_ = abs_of(cf.value() - out.proxy_);
    } else {
        // complete quotient alpha_{K+1} > a_{K+1} + 1/(a_{K+2} + 1)
        const Integer& qK = t.q(K);
        const Integer& qK1 = t.q(K + 1);
        const Integer a2{static_cast<long>(t.a(depth + 2))};
        Rational denom = Rational{qK} * (Rational{qK1} + Rational{qK, a2 + 1});
        out.error_bound_ = 1 / denom;
    }
    return out;
}

IrrationalParam IrrationalParam::exact(const Rational& value) {
    IrrationalParam out;
    out.cf_ = cf_of_rational(value);
    out.depth_ = out.cf_.finite_length();
    out.proxy_ = value;
    out.error_bound_ = 0;
    return out;
}

IrrationalParam IrrationalParam::parse(std::string_view spec, std::size_t depth) {
    std::size_t i = 0;
    while (i < spec.size() && std::isspace(static_cast<unsigned char>(spec[i]))) ++i;
    if (i < spec.size() && spec[i] == '[') return from_cf(ContinuedFraction::parse(spec), depth);
    return exact(parse_rational(spec));
}

IrrationalParam IrrationalParam::deepened(std::size_t extra) const {
    if (is_exact()) return *this;
    return from_cf(cf_, depth_ + extra);
}

IrrationalParam IrrationalParam::complement() const {
    if (is_exact()) return exact(1 - proxy_);
    const std::size_t new_depth = cf_.quotient(1) == 1 ? depth_ - 1 : depth_ + 1;
    IrrationalParam out = from_cf(cf_.complement(), new_depth);
    if (out.proxy_ != 1 - proxy_) throw std::logic_error("complement proxy is not a convergent of 1 - x");
    return out;
}

ConvergentTable IrrationalParam::table() const { return ConvergentTable(cf_, depth_ + 2); }

std::string IrrationalParam::describe() const {
    return cf_.to_string() + "@" + std::to_string(depth_) + " ~ " + to_pq(proxy_);
}

std::size_t index_past(const ContinuedFraction& cf, std::int64_t n) {
    const Integer bound{static_cast<long>(n)};
    Integer q_prev = 0, q = 1;
    std::size_t k = 0;
    while (q <= bound) {
        if (!cf.materializable(k + 1)) return k;
        const Integer a{static_cast<long>(cf.quotient(k + 1))};
        Integer next = a * q + q_prev;
        q_prev = q;
        q = next;
        ++k;
    }
    return k;
}

std::size_t default_depth(const ContinuedFraction& cf, std::size_t needed, const Integer& max_q) {
    std::size_t K = needed + 10;
    if (cf.is_finite()) K = std::min(K, cf.finite_length());
    ConvergentTable t(cf, K);
    while (K > needed + 4 && t.q(static_cast<std::ptrdiff_t>(K)) > max_q) --K;
    if (t.q(static_cast<std::ptrdiff_t>(K)) > max_q && !(cf.is_finite() && K == cf.finite_length()))
        throw PrecisionError("proxy for index " + std::to_string(needed) + " of " + cf.to_string() +
                             " does not fit the 64-bit lattice");
    return std::max<std::size_t>(K, 1);
}

IrrationalParam param_for_horizon(const ContinuedFraction& cf, std::int64_t n) {
    const std::size_t needed = index_past(cf, n);
    const Integer max_q = Integer{1} << 40;
    std::size_t depth = default_depth(cf, needed, max_q);
    if (!cf.is_finite() && cf.quotient(1) == 1 && depth < 2) depth = 2;
    return IrrationalParam::from_cf(cf, depth);
}

// ---- Diophantine quantities ------------------------------------------------

CertifiedRational eta(const IrrationalParam& theta, std::ptrdiff_t k) {
    if (k < -1) throw DomainError("eta index must be >= -1");
    if (k == -1) return {Rational{1}, Rational{0}};
    const auto uk = static_cast<std::size_t>(k);
    if (theta.is_exact()) {
        if (uk >= theta.cf().finite_length())
            throw PrecisionError("eta_" + std::to_string(k) + " vanishes for the rational " + to_pq(theta.proxy()));
    } else if (theta.depth() < uk + 4) {
        throw PrecisionError("eta_" + std::to_string(k) + " needs proxy depth >= " + std::to_string(uk + 4) +
                             ", have " + std::to_string(theta.depth()));
    }
    ConvergentTable t(theta.cf(), uk);
    const Rational value = abs_of(Rational{t.q(k)} * theta.proxy() - Rational{t.p(k)});
    return {value, Rational{t.q(k)} * theta.error_bound()};
}

Rational dist_nearest_int(const Rational& x) {
    const Rational f = frac(x);
    return f <= Rational{1, 2} ? f : Rational{1 - f};
}

BadlyApproxCertificate badly_approx_certificate(const ContinuedFraction& cf, std::size_t depth) {
    if (depth < 2) throw DomainError("certificate depth must be >= 2");
    ConvergentTable t(cf, depth);
    const std::size_t d = t.depth();
    BadlyApproxCertificate out;
    std::int64_t first_half = 0, second_half = 0;
    for (std::size_t k = 1; k <= d; ++k) {
        out.max_quotient = std::max(out.max_quotient, t.a(k));
        std::int64_t& half = 2 * k <= d ? first_half : second_half;
        half = std::max(half, t.a(k));
    }
    out.ratio_bound = 0;
    for (std::size_t m = 1; m < d; ++m) {
        const auto i = static_cast<std::ptrdiff_t>(m);
        Rational r{t.q(i + 1), t.q(i)};
        r.canonicalize();
        out.ratio_bound = std::max(out.ratio_bound, r);
    }
    const auto last = static_cast<std::ptrdiff_t>(d);
    out.last_ratio = Rational{t.q(last), t.q(last - 1)};
    out.last_ratio.canonicalize();
    out.quotients_growing = second_half > first_half;
    return out;
}

SAlphaProfile s_alpha_profile(const IrrationalParam& xi, const IrrationalParam& alpha, std::size_t depth) {
    if (depth == 0) throw DomainError("profile depth must be >= 1");
    if (!alpha.is_exact() && alpha.depth() < depth + 4)
        throw PrecisionError("alpha proxy depth must be >= depth + 4");
    ConvergentTable t(alpha.cf(), depth);
    if (t.depth() < depth) throw PrecisionError("alpha expansion is shorter than the requested depth");

    const std::int64_t D = checked_lcm(denominator_int64(xi.proxy()), denominator_int64(alpha.proxy()));
    const std::int64_t base = mod_floor(to_lattice(xi.proxy(), D), D);
    const std::int64_t step = mod_floor(to_lattice(alpha.proxy(), D), D);
    auto dist = [D](std::int64_t v) { return std::min(v, D - v); };

    SAlphaProfile out;
    std::int64_t best = dist(base);
    std::int64_t best_j = 0;
    std::int64_t scanned = 1;  // |j| < scanned already examined
    std::int64_t up = base;    // value at j = scanned - 1
    std::int64_t down = base;  // value at j = -(scanned - 1)
    for (std::size_t n = 1; n <= depth; ++n) {
        const std::int64_t qn = to_int64(t.q(static_cast<std::ptrdiff_t>(n)));
        for (; scanned < qn; ++scanned) {
            up = mod_floor(up - step, D);
            down = mod_floor(down + step, D);
            if (dist(up) < best) {
                best = dist(up);
                best_j = scanned;
            }
            if (dist(down) < best) {
                best = dist(down);
                best_j = -scanned;
            }
        }
        SAlphaEntry e;
        e.n = n;
        e.q = Integer{static_cast<long>(qn)};
        e.value = Rational{Integer{static_cast<long>(qn)} * Integer{static_cast<long>(best)},
                           Integer{static_cast<long>(D)}};
        e.value.canonicalize();
        e.error_bound = Rational{e.q} * (Rational{e.q - 1} * alpha.error_bound() + xi.error_bound());
        e.argmin_j = best_j;
        if (e.value != 0 && e.error_bound * 2 >= e.value)
            throw PrecisionError("s_alpha profile entry n=" + std::to_string(n) +
                                 " is not certified by the proxies; deepen alpha/xi");
        if (n == 1 || e.value < out.min_value) out.min_value = e.value;
        out.entries.push_back(std::move(e));
    }
    return out;
}

}  // namespace slowent
