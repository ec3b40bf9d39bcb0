#ifndef AQIR_DYADIC_HPP
#define AQIR_DYADIC_HPP

// Exact dyadic numbers k * 2^e over GMP integers, and outward-rounded
// fixed-point interval arithmetic at a working precision rho (bits after
// the binary point).

#include <aqir/errors.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace aqir {

using Integer = mpz_class;
using Rational = mpq_class;

/// Working precision: number of bits after the binary point.
class Precision {
public:
    constexpr explicit Precision(std::int64_t bits) : bits_(bits) {}

    constexpr std::int64_t bits() const noexcept { return bits_; }
    constexpr Precision doubled() const noexcept { return Precision(2 * bits_); }
    constexpr Precision plus(std::int64_t extra) const noexcept { return Precision(bits_ + extra); }

    constexpr auto operator<=>(const Precision&) const = default;

private:
    std::int64_t bits_;
};

/// Exact binary fixed-point number mantissa * 2^exponent.
///
/// Canonical form: the mantissa is odd, or zero with exponent 0. All
/// arithmetic is exact; rounding only happens through round_down/round_up.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long value) : mantissa_(value) { canonicalize(); } // NOLINT(google-explicit-constructor)
    explicit Dyadic(Integer mantissa, std::int64_t exponent = 0)
        : mantissa_(std::move(mantissa)), exponent_(exponent) {
        canonicalize();
    }

    static Dyadic pow2(std::int64_t exponent) { return Dyadic(Integer(1), exponent); }

    const Integer& mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }

    int sign() const noexcept { return sgn(mantissa_); }
    bool is_zero() const noexcept { return sign() == 0; }
    bool is_integer() const noexcept { return exponent_ >= 0; }

    /// Multiplication by 2^k, exact.
    Dyadic scaled(std::int64_t k) const {
        Dyadic r = *this;
        if (!r.is_zero()) {
            r.exponent_ += k;
        }
        return r;
    }

    Dyadic half() const { return scaled(-1); }
    Dyadic abs() const { return Dyadic(::abs(mantissa_), exponent_); }

    /// Mantissa aligned to the grid 2^e, i.e. value * 2^-e. Requires e <= exponent().
    Integer scaled_mantissa(std::int64_t e) const {
        Integer r;
        mpz_mul_2exp(r.get_mpz_t(), mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent_ - e));
        return r;
    }

    Rational to_rational() const {
        Rational r;
        if (exponent_ >= 0) {
            mpz_mul_2exp(r.get_num_mpz_t(), mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent_));
        } else {
            r.get_num() = mantissa_;
            mpz_set_ui(r.get_den_mpz_t(), 1);
            mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-exponent_));
        }
        return r;
    }

    /// Floor(log2 |x|) for x != 0.
    std::int64_t floor_log2() const {
        return exponent_ + static_cast<std::int64_t>(mpz_sizeinbase(mantissa_.get_mpz_t(), 2)) - 1;
    }

    double to_double() const {
        long e2 = 0;
        const double m = mpz_get_d_2exp(&e2, mantissa_.get_mpz_t());
        return std::ldexp(m, static_cast<int>(std::clamp<std::int64_t>(e2 + exponent_, -100000, 100000)));
    }

    friend Dyadic operator-(const Dyadic& x) { return Dyadic(-x.mantissa_, x.exponent_); }

    friend Dyadic operator+(const Dyadic& x, const Dyadic& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        const std::int64_t e = std::min(x.exponent_, y.exponent_);
        return Dyadic(x.scaled_mantissa(e) + y.scaled_mantissa(e), e);
    }
    friend Dyadic operator-(const Dyadic& x, const Dyadic& y) { return x + (-y); }
    friend Dyadic operator*(const Dyadic& x, const Dyadic& y) {
        return Dyadic(x.mantissa_ * y.mantissa_, x.exponent_ + y.exponent_);
    }
    Dyadic& operator+=(const Dyadic& y) { return *this = *this + y; }
    Dyadic& operator-=(const Dyadic& y) { return *this = *this - y; }
    Dyadic& operator*=(const Dyadic& y) { return *this = *this * y; }

    friend bool operator==(const Dyadic& x, const Dyadic& y) {
        return x.exponent_ == y.exponent_ && x.mantissa_ == y.mantissa_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
        if (x.sign() != y.sign() || x.is_zero()) {
            return x.sign() <=> y.sign();
        }
        const std::int64_t e = std::min(x.exponent_, y.exponent_);
        const int c = cmp(x.scaled_mantissa(e), y.scaled_mantissa(e));
        return c <=> 0;
    }

    friend Dyadic midpoint(const Dyadic& x, const Dyadic& y) { return (x + y).half(); }

private:
    void canonicalize() {
        if (mantissa_ == 0) {
            exponent_ = 0;
            return;
        }
        const mp_bitcnt_t tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
        if (tz > 0) {
            mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), tz);
            exponent_ += static_cast<std::int64_t>(tz);
        }
    }

    Integer mantissa_{0};
    std::int64_t exponent_{0};
};

// ---------------------------------------------------------------------------
// Rounding onto the grid {k / 2^rho}.

/// Largest k/2^rho <= x.
inline Dyadic round_down(const Dyadic& x, Precision rho) {
    if (x.exponent() >= -rho.bits()) {
        return x;
    }
    Integer k;
    mpz_fdiv_q_2exp(k.get_mpz_t(), x.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(-rho.bits() - x.exponent()));
    return Dyadic(std::move(k), -rho.bits());
}

/// Smallest k/2^rho >= x.
inline Dyadic round_up(const Dyadic& x, Precision rho) {
    if (x.exponent() >= -rho.bits()) {
        return x;
    }
    Integer k;
    mpz_cdiv_q_2exp(k.get_mpz_t(), x.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(-rho.bits() - x.exponent()));
    return Dyadic(std::move(k), -rho.bits());
}

namespace detail {

// floor or ceil of q * 2^rho as an integer
inline Integer scaled_quotient(const Rational& q, Precision rho, bool ceil) {
    Integer num = q.get_num();
    Integer den = q.get_den();
    if (rho.bits() >= 0) {
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(rho.bits()));
    } else {
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-rho.bits()));
    }
    Integer k;
    if (ceil) {
        mpz_cdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else {
        mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    return k;
}

inline bool is_power_of_two(const Integer& n) {
    return n > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

} // namespace detail

inline Dyadic round_down(const Rational& x, Precision rho) {
    return Dyadic(detail::scaled_quotient(x, rho, false), -rho.bits());
}

inline Dyadic round_up(const Rational& x, Precision rho) {
    return Dyadic(detail::scaled_quotient(x, rho, true), -rho.bits());
}

/// The dyadic equal to q, if q's reduced denominator is a power of two.
inline bool to_dyadic(const Rational& q, Dyadic& out) {
    if (!detail::is_power_of_two(q.get_den())) {
        return false;
    }
    const auto e = static_cast<std::int64_t>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) - 1;
    out = Dyadic(q.get_num(), -e);
    return true;
}

/// Nearest integer, ties away from zero.
inline Integer round_to_integer(const Dyadic& x) {
    if (x.is_integer()) {
        return x.scaled_mantissa(0);
    }
    // |x| + 1/2, floored, with the sign restored
    const Dyadic shifted = x.abs() + Dyadic::pow2(-1);
    Integer k;
    mpz_fdiv_q_2exp(k.get_mpz_t(), shifted.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(-shifted.exponent()));
    return x.sign() < 0 ? Integer(-k) : k;
}

/// Nearest integer to an exact rational, ties away from zero.
inline Integer round_to_integer(const Rational& q) {
    Integer num = ::abs(q.get_num());
    num = 2 * num + q.get_den();
    Integer den = 2 * q.get_den();
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return sgn(q) < 0 ? Integer(-k) : k;
}

// ---------------------------------------------------------------------------
// Intervals.

/// Closed interval [lo, hi] with dyadic endpoints, lo <= hi.
struct DyadicInterval {
    Dyadic lo;
    Dyadic hi;

    DyadicInterval() = default;
    explicit DyadicInterval(const Dyadic& point) : lo(point), hi(point) {}
    DyadicInterval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {}

    Dyadic width() const { return hi - lo; }
    Dyadic mid() const { return midpoint(lo, hi); }
    bool contains(const Dyadic& x) const { return lo <= x && x <= hi; }
    bool contains(const Rational& x) const { return lo.to_rational() <= x && x <= hi.to_rational(); }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    bool is_point() const { return lo == hi; }

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Outward rounding of an exact interval onto the rho-grid.
inline DyadicInterval round_out(const DyadicInterval& a, Precision rho) {
    return {round_down(a.lo, rho), round_up(a.hi, rho)};
}

inline DyadicInterval interval_add(const DyadicInterval& a, const DyadicInterval& b, Precision rho) {
    return {round_down(a.lo, rho) + round_down(b.lo, rho), round_up(a.hi, rho) + round_up(b.hi, rho)};
}

inline DyadicInterval interval_neg(const DyadicInterval& a) { return {-a.hi, -a.lo}; }

inline DyadicInterval interval_sub(const DyadicInterval& a, const DyadicInterval& b, Precision rho) {
    return interval_add(a, interval_neg(b), rho);
}

inline DyadicInterval interval_mul(const DyadicInterval& a, const DyadicInterval& b, Precision rho) {
    const Dyadic al = round_down(a.lo, rho);
    const Dyadic ah = round_up(a.hi, rho);
    const Dyadic bl = round_down(b.lo, rho);
    const Dyadic bh = round_up(b.hi, rho);
    const Dyadic p[4] = {al * bl, al * bh, ah * bl, ah * bh};
    const auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
    return {round_down(*mn, rho), round_up(*mx, rho)};
}

inline DyadicInterval interval_inv(const DyadicInterval& a, Precision rho) {
    if (a.contains_zero()) {
        throw DivisionByIntervalContainingZero();
    }
    const Dyadic al = round_down(a.lo, rho);
    const Dyadic ah = round_up(a.hi, rho);
    // rounding may have moved an endpoint onto zero
    if (al.sign() <= 0 && ah.sign() >= 0) {
        throw DivisionByIntervalContainingZero();
    }
    const Rational one(1);
    return {round_down(one / ah.to_rational(), rho), round_up(one / al.to_rational(), rho)};
}

/// +1 if the interval is positive, -1 if negative, 0 when it touches zero.
inline int interval_sign(const DyadicInterval& a) {
    if (a.lo.sign() > 0) return 1;
    if (a.hi.sign() < 0) return -1;
    return 0;
}

// ---------------------------------------------------------------------------
// Text forms.

/// "<mantissa>*2^<exponent>", e.g. "-181*2^-7". Zero is "0*2^0".
inline std::string to_string(const Dyadic& x) {
    return x.mantissa().get_str() + "*2^" + std::to_string(x.exponent());
}

inline std::ostream& operator<<(std::ostream& os, const Dyadic& x) { return os << to_string(x); }

inline std::ostream& operator<<(std::ostream& os, const DyadicInterval& a) {
    return os << '[' << a.lo << ", " << a.hi << ']';
}

enum class DecimalRounding { down, up, nearest };

/// Decimal rendering of q with exactly `digits` digits after the point.
inline std::string to_decimal(const Rational& q, unsigned digits, DecimalRounding mode = DecimalRounding::nearest) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    const Rational scaled = q * Rational(scale);
    Integer k;
    switch (mode) {
    case DecimalRounding::down:
        mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        break;
    case DecimalRounding::up:
        mpz_cdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        break;
    case DecimalRounding::nearest:
        k = round_to_integer(scaled);
        break;
    }
    const bool negative = k < 0;
    std::string s = Integer(::abs(k)).get_str();
    if (s.size() <= digits) {
        s.insert(0, digits + 1 - s.size(), '0');
    }
    if (digits > 0) {
        s.insert(s.size() - digits, ".");
    }
    return negative ? "-" + s : s;
}

/// Exact decimal expansion; always finite for a dyadic.
inline std::string to_decimal_exact(const Dyadic& x) {
    const auto digits = x.exponent() < 0 ? static_cast<unsigned>(-x.exponent()) : 0U;
    return to_decimal(x.to_rational(), digits, DecimalRounding::down);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline Integer parse_integer(std::string_view s) {
    s = trim(s);
    std::string text(s);
    if (!text.empty() && text.front() == '+') {
        text.erase(0, 1);
    }
    const bool ok = !text.empty() && std::all_of(text.begin() + (text.front() == '-' ? 1 : 0), text.end(),
                                                [](unsigned char c) { return std::isdigit(c) != 0; }) &&
                    text != "-";
    if (!ok) {
        throw ParseError("not an integer: '" + std::string(s) + "'");
    }
    return Integer(text, 10);
}

inline std::int64_t parse_int64(std::string_view s) {
    const Integer v = parse_integer(s);
    if (!v.fits_slong_p()) {
        throw ParseError("integer out of range: '" + std::string(s) + "'");
    }
    return v.get_si();
}

} // namespace detail

/// Parses an exact decimal literal ("-12.375", "3", "1e-3", "2.5E4") as a rational.
inline Rational parse_decimal(std::string_view text) {
    std::string_view s = detail::trim(text);
    std::int64_t exp10 = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        exp10 = detail::parse_int64(s.substr(e + 1));
        if (exp10 > 100000 || exp10 < -100000) {
            throw ParseError("decimal exponent out of range: '" + std::string(text) + "'");
        }
        s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    std::int64_t frac = 0;
    bool seen_point = false;
    for (char c : s) {
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            digits.push_back(c);
            if (seen_point) ++frac;
        } else {
            throw ParseError("not a decimal number: '" + std::string(text) + "'");
        }
    }
    if (digits.empty()) {
        throw ParseError("not a decimal number: '" + std::string(text) + "'");
    }
    Rational q(Integer(digits, 10));
    const std::int64_t shift = exp10 - frac;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift < 0) {
        q /= Rational(p);
    } else {
        q *= Rational(p);
    }
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

/// Parses "p/q" or a plain integer as a rational.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = detail::trim(text);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        return Rational(detail::parse_integer(s));
    }
    const Integer num = detail::parse_integer(s.substr(0, slash));
    const Integer den = detail::parse_integer(s.substr(slash + 1));
    if (den == 0) {
        throw ParseError("zero denominator: '" + std::string(text) + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "m*2^e", or any integer/rational/decimal literal whose value is dyadic.
inline Dyadic parse_dyadic(std::string_view text) {
    std::string_view s = detail::trim(text);
    if (const auto star = s.find("*2^"); star != std::string_view::npos) {
        return Dyadic(detail::parse_integer(s.substr(0, star)), detail::parse_int64(s.substr(star + 3)));
    }
    const Rational q = s.find('/') != std::string_view::npos ? parse_rational(s) : parse_decimal(s);
    Dyadic d;
    if (!to_dyadic(q, d)) {
        throw ParseError("value is not dyadic: '" + std::string(text) + "'");
    }
    return d;
}

} // namespace aqir

#endif // AQIR_DYADIC_HPP
