#ifndef AQIR_ORACLE_HPP
#define AQIR_ORACLE_HPP

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace aqir {

/// Source of coefficient approximations for f(x) = sum a_i x^i.
///
/// approx(i, rho) must return a dyadic within distance < 2^-rho of a_i.
/// Implementations have to be callable concurrently.
class CoefficientOracle {
public:
    virtual ~CoefficientOracle() = default;

    virtual std::size_t degree() const = 0;
    virtual Dyadic approx(std::size_t i, Precision rho) const = 0;

    /// Exact rational coefficients a_0..a_d, when the oracle has them.
    virtual const std::vector<Rational>* exact_view() const { return nullptr; }
};

/// Produces an approximation of one real number to absolute error < 2^-rho.
using Approximator = std::function<Dyadic(Precision)>;

/// sqrt(q) for q >= 0, truncated to the rho-grid.
inline Dyadic sqrt_approx(const Rational& q, Precision rho) {
    if (sgn(q) < 0) {
        throw OracleFailure("sqrt of a negative number");
    }
    // floor(sqrt(floor(t))) == floor(sqrt(t)), so one integer square root is exact enough
    Integer t = detail::scaled_quotient(q, Precision(2 * rho.bits()), false);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
    return Dyadic(std::move(s), -rho.bits());
}

/// One coefficient: either an exact rational or an approximation-only real.
class Coefficient {
public:
    Coefficient(Rational exact) : value_(std::move(exact)) {} // NOLINT(google-explicit-constructor)
    Coefficient(long exact) : value_(Rational(exact)) {}      // NOLINT(google-explicit-constructor)
    explicit Coefficient(Approximator approx) : value_(std::move(approx)) {}

    /// +-sqrt(q), available only through approximations.
    static Coefficient sqrt(Rational q, int sign = 1) {
        return Coefficient(Approximator([q = std::move(q), sign](Precision rho) {
            const Dyadic r = sqrt_approx(q, rho);
            return sign < 0 ? -r : r;
        }));
    }

    bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }
    const Rational& exact() const { return std::get<Rational>(value_); }

    Dyadic approx(Precision rho) const {
        if (is_exact()) {
            return round_down(exact(), rho);
        }
        return std::get<Approximator>(value_)(rho);
    }

private:
    std::variant<Rational, Approximator> value_;
};

/// Oracle over an explicit coefficient list a_0..a_d.
class ListOracle final : public CoefficientOracle {
public:
    explicit ListOracle(std::vector<Coefficient> coefficients) : coefficients_(std::move(coefficients)) {
        if (coefficients_.size() < 2) {
            throw PreconditionViolation("polynomial must have degree >= 1");
        }
        bool all_exact = true;
        for (const auto& c : coefficients_) {
            all_exact = all_exact && c.is_exact();
        }
        if (all_exact) {
            std::vector<Rational> exact;
            exact.reserve(coefficients_.size());
            for (const auto& c : coefficients_) {
                exact.push_back(c.exact());
            }
            if (exact.back() == 0) {
                throw PreconditionViolation("leading coefficient is zero");
            }
            exact_ = std::move(exact);
        }
    }

    std::size_t degree() const override { return coefficients_.size() - 1; }

    Dyadic approx(std::size_t i, Precision rho) const override { return coefficients_.at(i).approx(rho); }

    const std::vector<Rational>* exact_view() const override { return exact_ ? &*exact_ : nullptr; }

private:
    std::vector<Coefficient> coefficients_;
    std::optional<std::vector<Rational>> exact_;
};

/// Approximation-only view of another oracle: hides the exact coefficients.
/// Used to run the bitstream code path on polynomials whose roots are known.
class BitstreamView final : public CoefficientOracle {
public:
    explicit BitstreamView(std::shared_ptr<const CoefficientOracle> inner) : inner_(std::move(inner)) {}

    std::size_t degree() const override { return inner_->degree(); }
    Dyadic approx(std::size_t i, Precision rho) const override { return inner_->approx(i, rho); }

private:
    std::shared_ptr<const CoefficientOracle> inner_;
};

} // namespace aqir

#endif // AQIR_ORACLE_HPP
