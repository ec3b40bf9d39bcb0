#ifndef AQIR_POLYNOMIAL_HPP
#define AQIR_POLYNOMIAL_HPP

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/oracle.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace aqir {

/// Default upper limit on the working precision of adaptive loops.
inline constexpr Precision default_rho_cap{std::int64_t{1} << 24};

/// Interval [lo, hi] * 2^-rho stored as scaled integers.
struct ScaledInterval {
    Integer lo;
    Integer hi;
};

/// ceil(log2 max_i |a_i|), at least 1, from coefficient enclosures at rho = 4.
inline std::int64_t tau_bound(const CoefficientOracle& oracle);

/// A real polynomial known through a coefficient oracle.
///
/// Immutable after construction. Coefficient enclosures are cached per
/// precision; the cache is shared between copies and guarded by a mutex.
class Polynomial {
public:
    explicit Polynomial(std::shared_ptr<const CoefficientOracle> oracle, std::optional<std::int64_t> tau = {})
        : oracle_(std::move(oracle)), cache_(std::make_shared<Cache>()) {
        if (!oracle_) {
            throw PreconditionViolation("null coefficient oracle");
        }
        tau_ = tau ? *tau : tau_bound(*oracle_);
        if (tau_ < 1) {
            throw PreconditionViolation("tau must be >= 1");
        }
        if (const auto* exact = oracle_->exact_view()) {
            build_integer_form(*exact);
        }
    }

    /// Exact polynomial from rational coefficients a_0..a_d.
    static Polynomial from_rationals(std::vector<Rational> coefficients) {
        std::vector<Coefficient> cs(coefficients.begin(), coefficients.end());
        return Polynomial(std::make_shared<ListOracle>(std::move(cs)));
    }

    static Polynomial from_integers(const std::vector<long>& coefficients) {
        std::vector<Rational> cs(coefficients.begin(), coefficients.end());
        return from_rationals(std::move(cs));
    }

    static Polynomial from_coefficients(std::vector<Coefficient> coefficients) {
        return Polynomial(std::make_shared<ListOracle>(std::move(coefficients)));
    }

    std::size_t degree() const noexcept { return oracle_->degree(); }
    std::int64_t tau() const noexcept { return tau_; }
    const CoefficientOracle& oracle() const noexcept { return *oracle_; }
    std::shared_ptr<const CoefficientOracle> oracle_ptr() const noexcept { return oracle_; }

    bool has_exact_view() const noexcept { return oracle_->exact_view() != nullptr; }

    const std::vector<Rational>& exact_coefficients() const {
        const auto* exact = oracle_->exact_view();
        if (exact == nullptr) {
            throw ExactViewUnavailable();
        }
        return *exact;
    }

    /// Integer coefficients A_i = D * a_i with D > 0 the common denominator.
    const std::vector<Integer>& integer_coefficients() const {
        if (!integer_form_) {
            throw ExactViewUnavailable();
        }
        return integer_form_->coefficients;
    }
    const Integer& common_denominator() const {
        if (!integer_form_) {
            throw ExactViewUnavailable();
        }
        return integer_form_->denominator;
    }

    /// Enclosures of every coefficient on the rho-grid, scaled by 2^rho.
    ///
    /// Exact coefficients give [down(a_i), up(a_i)]. Oracle coefficients are
    /// requested at rho + 2 and widened by 2^-(rho+2) before rounding outward.
    std::shared_ptr<const std::vector<ScaledInterval>> coefficient_intervals(Precision rho) const {
        {
            std::lock_guard lock(cache_->mutex);
            if (auto it = cache_->intervals.find(rho.bits()); it != cache_->intervals.end()) {
                return it->second;
            }
        }
        auto computed = std::make_shared<std::vector<ScaledInterval>>();
        computed->reserve(degree() + 1);
        if (const auto* exact = oracle_->exact_view()) {
            for (const auto& a : *exact) {
                computed->push_back({detail::scaled_quotient(a, rho, false), detail::scaled_quotient(a, rho, true)});
            }
        } else {
            const Dyadic slack = Dyadic::pow2(-(rho.bits() + 2));
            for (std::size_t i = 0; i <= degree(); ++i) {
                const Dyadic approx = oracle_->approx(i, rho.plus(2));
                const Dyadic lo = round_down(approx - slack, rho);
                const Dyadic hi = round_up(approx + slack, rho);
                computed->push_back({lo.scaled_mantissa(-rho.bits()), hi.scaled_mantissa(-rho.bits())});
            }
        }
        std::lock_guard lock(cache_->mutex);
        if (cache_->intervals.size() > 64) {
            cache_->intervals.clear();
        }
        auto [it, inserted] = cache_->intervals.emplace(rho.bits(), std::move(computed));
        return it->second;
    }

    /// Enclosure of a_i on the rho-grid.
    DyadicInterval coefficient_interval(std::size_t i, Precision rho) const {
        const auto all = coefficient_intervals(rho);
        return {Dyadic((*all)[i].lo, -rho.bits()), Dyadic((*all)[i].hi, -rho.bits())};
    }

private:
    struct IntegerForm {
        std::vector<Integer> coefficients;
        Integer denominator;
    };
    struct Cache {
        std::mutex mutex;
        std::map<std::int64_t, std::shared_ptr<const std::vector<ScaledInterval>>> intervals;
    };

    void build_integer_form(const std::vector<Rational>& exact) {
        IntegerForm form;
        form.denominator = 1;
        for (const auto& a : exact) {
            mpz_lcm(form.denominator.get_mpz_t(), form.denominator.get_mpz_t(), a.get_den_mpz_t());
        }
        for (const auto& a : exact) {
            form.coefficients.push_back(a.get_num() * (form.denominator / a.get_den()));
        }
        integer_form_ = std::move(form);
    }

    std::shared_ptr<const CoefficientOracle> oracle_;
    std::int64_t tau_ = 1;
    std::optional<IntegerForm> integer_form_;
    std::shared_ptr<Cache> cache_;
};

namespace detail {

inline std::int64_t ceil_log2(const Dyadic& x) {
    const std::int64_t fl = x.floor_log2();
    return x.mantissa() == 1 || x.mantissa() == -1 ? fl : fl + 1;
}

} // namespace detail

inline std::int64_t tau_bound(const CoefficientOracle& oracle) {
    const Precision rho(4);
    const Dyadic slack = Dyadic::pow2(-(rho.bits() + 2));
    const auto* exact = oracle.exact_view();
    Dyadic magnitude;
    for (std::size_t i = 0; i <= oracle.degree(); ++i) {
        DyadicInterval enclosure;
        if (exact != nullptr) {
            enclosure = {round_down((*exact)[i], rho), round_up((*exact)[i], rho)};
        } else {
            const Dyadic approx = oracle.approx(i, rho.plus(2));
            enclosure = {round_down(approx - slack, rho), round_up(approx + slack, rho)};
        }
        magnitude = std::max({magnitude, enclosure.lo.abs(), enclosure.hi.abs()});
    }
    if (magnitude <= Dyadic(1)) {
        return 1;
    }
    return std::max<std::int64_t>(1, detail::ceil_log2(magnitude));
}

/// Interval Horner evaluation B(f(c), rho) with outward rounding at every node.
inline DyadicInterval eval_interval(const Polynomial& f, const Dyadic& c, Precision rho) {
    const auto coeffs_ptr = f.coefficient_intervals(rho);
    const auto& coeffs = *coeffs_ptr;
    const auto shift = static_cast<mp_bitcnt_t>(rho.bits());

    Integer c_lo;
    Integer c_hi;
    if (c.exponent() >= -rho.bits()) {
        c_lo = c.scaled_mantissa(-rho.bits());
        c_hi = c_lo;
    } else {
        const auto drop = static_cast<mp_bitcnt_t>(-rho.bits() - c.exponent());
        mpz_fdiv_q_2exp(c_lo.get_mpz_t(), c.mantissa().get_mpz_t(), drop);
        mpz_cdiv_q_2exp(c_hi.get_mpz_t(), c.mantissa().get_mpz_t(), drop);
    }
    const bool point = c_lo == c_hi;
    const bool nonnegative = sgn(c_lo) >= 0;

    const std::size_t d = f.degree();
    Integer lo = coeffs[d].lo;
    Integer hi = coeffs[d].hi;
    Integer p[4];
    for (std::size_t k = d; k-- > 0;) {
        if (point) {
            mpz_mul(p[0].get_mpz_t(), lo.get_mpz_t(), c_lo.get_mpz_t());
            mpz_mul(p[1].get_mpz_t(), hi.get_mpz_t(), c_lo.get_mpz_t());
            if (nonnegative) {
                mpz_fdiv_q_2exp(lo.get_mpz_t(), p[0].get_mpz_t(), shift);
                mpz_cdiv_q_2exp(hi.get_mpz_t(), p[1].get_mpz_t(), shift);
            } else {
                mpz_fdiv_q_2exp(lo.get_mpz_t(), p[1].get_mpz_t(), shift);
                mpz_cdiv_q_2exp(hi.get_mpz_t(), p[0].get_mpz_t(), shift);
            }
        } else {
            mpz_mul(p[0].get_mpz_t(), lo.get_mpz_t(), c_lo.get_mpz_t());
            mpz_mul(p[1].get_mpz_t(), lo.get_mpz_t(), c_hi.get_mpz_t());
            mpz_mul(p[2].get_mpz_t(), hi.get_mpz_t(), c_lo.get_mpz_t());
            mpz_mul(p[3].get_mpz_t(), hi.get_mpz_t(), c_hi.get_mpz_t());
            const auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
            mpz_fdiv_q_2exp(lo.get_mpz_t(), mn->get_mpz_t(), shift);
            mpz_cdiv_q_2exp(hi.get_mpz_t(), mx->get_mpz_t(), shift);
        }
        lo += coeffs[k].lo;
        hi += coeffs[k].hi;
    }
    return {Dyadic(std::move(lo), -rho.bits()), Dyadic(std::move(hi), -rho.bits())};
}

/// Exact value f(c) for a polynomial with an exact view.
inline Rational eval_exact(const Polynomial& f, const Rational& c) {
    const auto& a = f.exact_coefficients();
    Rational acc = a.back();
    for (std::size_t k = a.size() - 1; k-- > 0;) {
        acc = acc * c + a[k];
    }
    return acc;
}

namespace detail {

/// D * 2^(k*d) * f(m * 2^-k) as an integer, for k >= 0.
inline Integer scaled_value_at(const Polynomial& f, const Integer& m, std::int64_t k) {
    const auto& coeffs = f.integer_coefficients();
    const std::size_t d = coeffs.size() - 1;
    Integer acc = coeffs[d];
    Integer term;
    for (std::size_t i = d; i-- > 0;) {
        acc *= m;
        mpz_mul_2exp(term.get_mpz_t(), coeffs[i].get_mpz_t(), static_cast<mp_bitcnt_t>(k * static_cast<std::int64_t>(d - i)));
        acc += term;
    }
    return acc;
}

/// Scaled exact values of f at two dyadics on a common grid 2^-k.
/// The returned integers share the positive factor D * 2^(k*d).
inline std::pair<Integer, Integer> scaled_values_at(const Polynomial& f, const Dyadic& x, const Dyadic& y) {
    const std::int64_t k = std::max<std::int64_t>({0, -x.exponent(), -y.exponent()});
    return {scaled_value_at(f, x.scaled_mantissa(-k), k), scaled_value_at(f, y.scaled_mantissa(-k), k)};
}

} // namespace detail

/// Exact sign of f at a dyadic point, via integer Horner.
inline int exact_sign(const Polynomial& f, const Dyadic& c) {
    const std::int64_t k = std::max<std::int64_t>(0, -c.exponent());
    return sgn(detail::scaled_value_at(f, c.scaled_mantissa(-k), k));
}

struct SignResult {
    int sign = 0;
    Precision rho{2};
};

/// Evaluates B(f(c), rho) with rho doubling from `start` until the sign is
/// certified or rho would exceed `cap`. A zero sign means unresolved at the cap.
inline SignResult certified_sign(const Polynomial& f, const Dyadic& c, Precision start = Precision(2),
                                 Precision cap = default_rho_cap) {
    Precision rho = start;
    for (;;) {
        const int s = interval_sign(eval_interval(f, c, rho));
        if (s != 0 || rho.doubled() > cap) {
            return {s, rho};
        }
        rho = rho.doubled();
    }
}

} // namespace aqir

#endif // AQIR_POLYNOMIAL_HPP
