#include "slowent/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>

#include "slowent/errors.hpp"

namespace slowent {

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rational r{Integer{static_cast<long>(num)}, Integer{static_cast<long>(den)}};
    r.canonicalize();
    return r;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer parse_integer(std::string_view s) {
    std::string_view body = s;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
    if (!all_digits(body)) throw ConstructionError("not an integer: '" + std::string(s) + "'");
    std::string owned(s.front() == '+' ? s.substr(1) : s);
    return Integer{owned};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw ConstructionError("empty rational");
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(trim(s.substr(0, slash)));
        Integer den = parse_integer(trim(s.substr(slash + 1)));
        if (den == 0) throw ConstructionError("zero denominator in '" + std::string(s) + "'");
        Rational r{num, den};
        r.canonicalize();
        return r;
    }
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const bool negative = s.front() == '-';
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+'))
            int_part.remove_prefix(1);
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
            (int_part.empty() && frac_part.empty()))
            throw ConstructionError("not a decimal: '" + std::string(s) + "'");
        Integer whole = int_part.empty() ? Integer{0} : Integer{std::string(int_part)};
        Integer scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        Integer digits = frac_part.empty() ? Integer{0} : Integer{std::string(frac_part)};
        Rational r{whole * scale + digits, scale};
        r.canonicalize();
        return negative ? Rational{-r} : r;
    }
    return Rational{parse_integer(s)};
}

std::string to_pq(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Integer floor_of(const Rational& x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Rational frac(const Rational& x) { return x - Rational{floor_of(x)}; }

Rational abs_of(const Rational& x) { return x < 0 ? Rational{-x} : x; }

double to_double(const Rational& x) { return x.get_d(); }

bool fits_int64(const Integer& z) { return z.fits_slong_p() != 0; }

std::int64_t to_int64(const Integer& z) {
    static_assert(sizeof(long) == sizeof(std::int64_t));
    if (!fits_int64(z)) throw ResourceError("integer " + z.get_str() + " exceeds the 64-bit lattice");
    return z.get_si();
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    if (a <= 0 || b <= 0) throw DomainError("lcm of nonpositive values");
    const std::int64_t g = std::gcd(a, b);
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a / g, b, &out)) throw ResourceError("common denominator exceeds the 64-bit lattice");
    return out;
}

std::int64_t denominator_int64(const Rational& x) { return to_int64(x.get_den()); }

std::int64_t to_lattice(const Rational& x, std::int64_t den) {
    Integer scaled = x.get_num() * Integer{static_cast<long>(den)};
    Integer q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
    if (r != 0) throw ResourceError(to_pq(x) + " is not on the lattice 1/" + std::to_string(den));
    return to_int64(q);
}

}  // namespace slowent
