#ifndef AQIR_STEPS_HPP
#define AQIR_STEPS_HPP

// Single refinement steps on an isolating interval: exact QIR, approximate
// bisection, and approximate QIR.

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/polynomial.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace aqir {

/// Refinement factor N = 2^(2^level). Level 0 (N = 2) means "bisect next".
class QirFactor {
public:
    constexpr QirFactor() = default;
    constexpr explicit QirFactor(unsigned level) : level_(level) {}

    static constexpr QirFactor bisection() { return QirFactor(0); }
    /// N = 4, the starting factor of every refinement sequence.
    static constexpr QirFactor initial() { return QirFactor(1); }

    constexpr unsigned level() const noexcept { return level_; }
    constexpr bool is_bisection() const noexcept { return level_ == 0; }

    /// log2 N = 2^level.
    std::int64_t log2() const noexcept { return std::int64_t{1} << level_; }
    Dyadic value() const { return Dyadic::pow2(log2()); }
    Integer integer() const {
        Integer n;
        mpz_setbit(n.get_mpz_t(), static_cast<mp_bitcnt_t>(log2()));
        return n;
    }

    constexpr QirFactor squared() const noexcept { return QirFactor(level_ + 1); }
    constexpr QirFactor root() const noexcept { return QirFactor(level_ == 0 ? 0 : level_ - 1); }

    constexpr auto operator<=>(const QirFactor&) const = default;

private:
    unsigned level_ = 1;
};

/// Isolating interval (a, b) for one real root, plus the refinement state.
struct RootInterval {
    Dyadic a;
    Dyadic b;
    int sign_left = 0; ///< sign f(a); sign f(b) is its negation
    QirFactor n = QirFactor::initial();
    bool exact = false; ///< degenerate [a, a] holding an exact root

    Dyadic width() const { return b - a; }
    bool contains(const Rational& x) const {
        return exact ? a.to_rational() == x : (a.to_rational() < x && x < b.to_rational());
    }
};

enum class StepStatus { success, fail, bisected, exact_root };

inline std::string to_string(StepStatus s) {
    switch (s) {
    case StepStatus::success: return "success";
    case StepStatus::fail: return "fail";
    case StepStatus::bisected: return "bisected";
    case StepStatus::exact_root: return "exact_root";
    }
    return "?";
}

struct StepOutcome {
    RootInterval interval; ///< carries the next N
    StepStatus status = StepStatus::fail;
    Precision max_rho{0};
    std::size_t evaluations = 0;

    QirFactor next_n() const { return interval.n; }
};

struct StepOptions {
    Precision rho_cap = default_rho_cap;
    /// Starting precision of every adaptive loop; the default 2 restarts every loop from scratch.
    Precision start_rho{2};
};

namespace detail {

inline std::size_t count_zeros(const std::vector<int>& signs) {
    return static_cast<std::size_t>(std::count(signs.begin(), signs.end(), 0));
}

/// Resolves signs of f at `points` where `signs` is still 0, doubling rho until
/// at most one zero remains. Returns the last precision used.
inline Precision resolve_signs(const Polynomial& f, const std::vector<Dyadic>& points, std::vector<int>& signs,
                               const StepOptions& options, std::size_t& evaluations) {
    Precision rho = options.start_rho;
    Precision used = rho;
    while (count_zeros(signs) > 1) {
        if (rho > options.rho_cap) {
            throw UnresolvedSigns("precision cap of " + std::to_string(options.rho_cap.bits()) +
                                  " bits reached with unresolved signs");
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (signs[i] == 0) {
                signs[i] = interval_sign(eval_interval(f, points[i], rho));
                ++evaluations;
            }
        }
        used = rho;
        rho = rho.doubled();
    }
    return used;
}

/// Indices (v, w) with S[v] * S[w] = -1 and either w = v + 1, or w = v + 2 with S[v+1] = 0.
inline bool find_sign_change(const std::vector<int>& signs, std::size_t& v, std::size_t& w) {
    for (std::size_t i = 0; i + 1 < signs.size(); ++i) {
        if (signs[i] * signs[i + 1] == -1) {
            v = i;
            w = i + 1;
            return true;
        }
        if (i + 2 < signs.size() && signs[i + 1] == 0 && signs[i] * signs[i + 2] == -1) {
            v = i;
            w = i + 2;
            return true;
        }
    }
    return false;
}

inline void check_interval(const RootInterval& interval) {
    if (!(interval.a < interval.b)) {
        throw PreconditionViolation("isolating interval must satisfy a < b");
    }
    if (interval.sign_left != 1 && interval.sign_left != -1) {
        throw PreconditionViolation("sign at the left endpoint must be +1 or -1");
    }
}

} // namespace detail

/// Quarter-point bisection with adaptive precision; returns a half-width (or
/// smaller) isolating subinterval. The next N is reset to 4.
inline StepOutcome approximate_bisection(const Polynomial& f, const RootInterval& interval,
                                         const StepOptions& options = {}) {
    detail::check_interval(interval);
    const Dyadic quarter = interval.width().scaled(-2);
    std::vector<Dyadic> points;
    points.reserve(5);
    for (long j = 0; j < 5; ++j) {
        points.push_back(interval.a + quarter * Dyadic(j));
    }
    std::vector<int> signs{interval.sign_left, 0, 0, 0, -interval.sign_left};

    StepOutcome out;
    out.max_rho = detail::resolve_signs(f, points, signs, options, out.evaluations);
    std::size_t v = 0;
    std::size_t w = 0;
    if (!detail::find_sign_change(signs, v, w)) {
        throw PreconditionViolation("no sign change found while bisecting; input is not isolating");
    }
    out.interval = RootInterval{points[v], points[w], signs[v], QirFactor::initial(), false};
    out.status = StepStatus::bisected;
    return out;
}

struct GridPoint {
    Dyadic m_star;
    Integer ell;           ///< m* = a + ell * omega, 0 <= ell <= N
    DyadicInterval lambda; ///< enclosure of N f(a) / (f(a) - f(b)) of width <= 1/4
    Precision max_rho{0};
    std::size_t evaluations = 0;
};

/// Chooses the N-grid point m* nearest to the secant intersection, computing
/// N f(a) / (f(a) - f(b)) with interval arithmetic until its width is <= 1/4.
inline GridPoint select_grid_point(const Polynomial& f, const RootInterval& interval,
                                   const StepOptions& options = {}) {
    detail::check_interval(interval);
    const DyadicInterval n_point(interval.n.value());
    const Dyadic quarter = Dyadic::pow2(-2);
    GridPoint out;
    Precision rho = options.start_rho;
    for (;;) {
        if (rho > options.rho_cap) {
            throw UnresolvedSigns("precision cap reached while locating the secant point");
        }
        const DyadicInterval fa = eval_interval(f, interval.a, rho);
        const DyadicInterval fb = eval_interval(f, interval.b, rho);
        out.evaluations += 2;
        out.max_rho = rho;
        const DyadicInterval denominator = interval_sub(fa, fb, rho);
        if (!denominator.contains_zero()) {
            const DyadicInterval numerator = interval_mul(n_point, fa, rho);
            const DyadicInterval lambda = interval_mul(numerator, interval_inv(denominator, rho), rho);
            if (lambda.width() <= quarter) {
                out.lambda = lambda;
                break;
            }
        }
        rho = rho.doubled();
    }
    out.ell = std::clamp(round_to_integer(out.lambda.mid()), Integer(0), interval.n.integer());
    const Dyadic omega = interval.width().scaled(-interval.n.log2());
    out.m_star = interval.a + Dyadic(out.ell) * omega;
    return out;
}

/// Evaluation points around m*: seven in the interior case, four one-sided
/// points when m* coincides with an endpoint.
inline std::vector<Dyadic> subdivision_points(const Dyadic& m_star, const Dyadic& omega, const Dyadic& a,
                                              const Dyadic& b) {
    const Dyadic half = omega.half();
    const Dyadic seven_eighths = omega * Dyadic(Integer(7), -3);
    if (m_star == a) {
        return {m_star, m_star + half, m_star + seven_eighths, m_star + omega};
    }
    if (m_star == b) {
        return {m_star - omega, m_star - seven_eighths, m_star - half, m_star};
    }
    return {m_star - omega, m_star - seven_eighths, m_star - half, m_star,
            m_star + half,  m_star + seven_eighths, m_star + omega};
}

/// One approximate QIR step. N = 2 delegates to approximate bisection.
inline StepOutcome aqir_step(const Polynomial& f, const RootInterval& interval, const StepOptions& options = {}) {
    detail::check_interval(interval);
    if (interval.n.is_bisection()) {
        return approximate_bisection(f, interval, options);
    }
    const GridPoint grid = select_grid_point(f, interval, options);
    const Dyadic omega = interval.width().scaled(-interval.n.log2());
    const std::vector<Dyadic> points = subdivision_points(grid.m_star, omega, interval.a, interval.b);

    std::vector<int> signs(points.size(), 0);
    if (grid.m_star == interval.a) {
        signs.front() = interval.sign_left;
    } else if (grid.m_star == interval.b) {
        signs.back() = -interval.sign_left;
    }

    StepOutcome out;
    out.evaluations = grid.evaluations;
    const Precision rho = detail::resolve_signs(f, points, signs, options, out.evaluations);
    out.max_rho = std::max(grid.max_rho, rho);

    std::size_t v = 0;
    std::size_t w = 0;
    if (detail::find_sign_change(signs, v, w)) {
        out.interval = RootInterval{points[v], points[w], signs[v], interval.n.squared(), false};
        out.status = StepStatus::success;
    } else {
        out.interval = interval;
        out.interval.n = interval.n.root();
        out.status = StepStatus::fail;
    }
    return out;
}

/// One exact QIR step with rational arithmetic. Needs an exact view.
inline StepOutcome eqir_step(const Polynomial& f, const RootInterval& interval) {
    detail::check_interval(interval);
    if (!f.has_exact_view()) {
        throw ExactViewUnavailable();
    }
    StepOutcome out;
    const auto exact_root_at = [&](const Dyadic& x) {
        out.interval = RootInterval{x, x, interval.sign_left, interval.n, true};
        out.status = StepStatus::exact_root;
        return out;
    };

    if (interval.n.is_bisection()) {
        const Dyadic mid = midpoint(interval.a, interval.b);
        const int s = exact_sign(f, mid);
        out.evaluations = 1;
        if (s == 0) {
            return exact_root_at(mid);
        }
        out.interval = s == interval.sign_left
                           ? RootInterval{mid, interval.b, s, QirFactor::initial(), false}
                           : RootInterval{interval.a, mid, interval.sign_left, QirFactor::initial(), false};
        out.status = StepStatus::bisected;
        return out;
    }

    const Dyadic omega = interval.width().scaled(-interval.n.log2());
    // f(a) and f(b) share a positive scale factor, so the quotient is exact
    const auto [fa, fb] = detail::scaled_values_at(f, interval.a, interval.b);
    Rational lambda(interval.n.integer() * fa, fa - fb);
    lambda.canonicalize();
    const Dyadic m = interval.a + Dyadic(round_to_integer(lambda)) * omega;
    out.evaluations = 2;

    const int s = exact_sign(f, m);
    ++out.evaluations;
    if (s == 0) {
        return exact_root_at(m);
    }
    const int sa = interval.sign_left;
    const int sb = -interval.sign_left;
    if (s == sa) {
        ++out.evaluations;
        if (exact_sign(f, m + omega) == sb) {
            out.interval = RootInterval{m, m + omega, sa, interval.n.squared(), false};
            out.status = StepStatus::success;
            return out;
        }
    } else {
        ++out.evaluations;
        if (exact_sign(f, m - omega) == sa) {
            out.interval = RootInterval{m - omega, m, sa, interval.n.squared(), false};
            out.status = StepStatus::success;
            return out;
        }
    }
    out.interval = interval;
    out.interval.n = interval.n.root();
    out.status = StepStatus::fail;
    return out;
}

} // namespace aqir

#endif // AQIR_STEPS_HPP
