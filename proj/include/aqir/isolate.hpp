#ifndef AQIR_ISOLATE_HPP
#define AQIR_ISOLATE_HPP

// Descartes root isolation for exact-rational polynomials.

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/pipeline.hpp>
#include <aqir/polynomial.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace aqir {

struct SignVariationCount {
    std::size_t v = 0;
};

namespace detail {

using IntPoly = std::vector<Integer>; // ascending coefficients

/// In place p(x) -> p(x + c).
inline void taylor_shift(IntPoly& p, const Integer& c) {
    const std::size_t n = p.size();
    if (n < 2 || c == 0) {
        return;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = n - 2; j + 1 > i; --j) {
            if (c == 1) {
                p[j] += p[j + 1];
            } else {
                p[j] += c * p[j + 1];
            }
        }
    }
}

inline std::size_t sign_variations(const IntPoly& p) {
    std::size_t v = 0;
    int last = 0;
    for (const auto& c : p) {
        const int s = sgn(c);
        if (s != 0) {
            if (last != 0 && s != last) {
                ++v;
            }
            last = s;
        }
    }
    return v;
}

/// Integer polynomial whose roots in (0, 1) correspond to the roots of f in
/// (alpha/q, beta/q), via x -> (alpha + (beta - alpha) x) / q.
inline IntPoly unit_interval_poly(const std::vector<Integer>& coeffs, const Integer& alpha, const Integer& beta,
                                  const Integer& q) {
    const std::size_t d = coeffs.size() - 1;
    IntPoly p(d + 1);
    Integer qpow = 1;
    for (std::size_t k = 0; k <= d; ++k) {
        p[d - k] = coeffs[d - k] * qpow;
        qpow *= q;
    }
    taylor_shift(p, alpha);
    const Integer delta = beta - alpha;
    Integer dpow = 1;
    for (auto& c : p) {
        c *= dpow;
        dpow *= delta;
    }
    return p;
}

/// Descartes count on (0, 1): reverse, then shift by one.
inline std::size_t unit_variations(IntPoly p) {
    std::reverse(p.begin(), p.end());
    taylor_shift(p, Integer(1));
    return sign_variations(p);
}

inline void require_exact(const Polynomial& f) {
    if (!f.has_exact_view()) {
        throw ExactViewUnavailable();
    }
}

} // namespace detail

/// Sign variations of (x+1)^d f((a x + b)/(x + 1)).
inline SignVariationCount var_count(const Polynomial& f, const Rational& a, const Rational& b) {
    detail::require_exact(f);
    if (!(a < b)) {
        throw PreconditionViolation("var_count needs a < b");
    }
    Integer q;
    mpz_lcm(q.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    const Integer alpha = a.get_num() * (q / a.get_den());
    const Integer beta = b.get_num() * (q / b.get_den());
    return {detail::unit_variations(detail::unit_interval_poly(f.integer_coefficients(), alpha, beta, q))};
}

inline SignVariationCount var_count(const Polynomial& f, const DyadicInterval& interval) {
    return var_count(f, interval.lo.to_rational(), interval.hi.to_rational());
}

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    while (e != 0) {
        if ((e & 1U) != 0) r = mul_mod(r, a, p);
        a = mul_mod(a, a, p);
        e >>= 1U;
    }
    return r;
}

using ModPoly = std::vector<std::uint64_t>;

inline void trim_mod(ModPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Degree of gcd(a, b) over Z/p; both inputs nonzero.
inline std::size_t gcd_degree_mod(ModPoly a, ModPoly b, std::uint64_t p) {
    trim_mod(a);
    trim_mod(b);
    while (!b.empty()) {
        const std::uint64_t inv = pow_mod(b.back(), p - 2, p);
        while (a.size() >= b.size()) {
            const std::uint64_t factor = mul_mod(a.back(), inv, p);
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                const std::uint64_t t = mul_mod(factor, b[i], p);
                a[i + shift] = a[i + shift] >= t ? a[i + shift] - t : a[i + shift] + (p - t);
            }
            trim_mod(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.size() - 1;
}

inline Integer content(const IntPoly& p) {
    Integer g = 0;
    for (const auto& c : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    return g;
}

/// Degree of gcd(a, b) over Q by primitive pseudo-remainder sequences.
inline std::size_t gcd_degree_prs(IntPoly a, IntPoly b) {
    const auto trim = [](IntPoly& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    const auto make_primitive = [](IntPoly& p) {
        const Integer g = content(p);
        if (g > 1) {
            for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        }
    };
    trim(a);
    trim(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        // pseudo-remainder of a by b
        const Integer lead = b.back();
        while (a.size() >= b.size()) {
            const Integer top = a.back();
            const std::size_t shift = a.size() - b.size();
            for (auto& c : a) c *= lead;
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= top * b[i];
            trim(a);
            if (a.empty()) break;
        }
        make_primitive(a);
        std::swap(a, b);
    }
    return a.size() - 1;
}

} // namespace detail

/// True iff gcd(f, f') is constant.
inline bool is_square_free(const Polynomial& f) {
    detail::require_exact(f);
    const auto& coeffs = f.integer_coefficients();
    const std::size_t d = coeffs.size() - 1;
    if (d <= 1) {
        return true;
    }
    detail::IntPoly derivative(d);
    for (std::size_t i = 1; i <= d; ++i) {
        derivative[i - 1] = coeffs[i] * static_cast<unsigned long>(i);
    }
    // A prime not dividing the leading coefficients can only overestimate the gcd degree.
    Integer prime = Integer(1) << 61;
    for (int attempt = 0; attempt < 4; ++attempt) {
        mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
        const std::uint64_t p = prime.get_ui();
        if (mpz_fdiv_ui(derivative.back().get_mpz_t(), p) == 0) {
            continue;
        }
        detail::ModPoly fp(d + 1);
        detail::ModPoly gp(d);
        for (std::size_t i = 0; i <= d; ++i) fp[i] = mpz_fdiv_ui(coeffs[i].get_mpz_t(), p);
        for (std::size_t i = 0; i < d; ++i) gp[i] = mpz_fdiv_ui(derivative[i].get_mpz_t(), p);
        if (detail::gcd_degree_mod(fp, gp, p) == 0) {
            return true;
        }
    }
    return detail::gcd_degree_prs(coeffs, derivative) == 0;
}

/// Ascending isolating intervals with dyadic non-root endpoints for all real
/// roots of a square-free exact polynomial, inside (-2^(gamma+1), 2^(gamma+1)).
inline std::vector<DyadicInterval> isolate_roots(const Polynomial& f, std::optional<std::int64_t> gamma = {}) {
    detail::require_exact(f);
    if (!is_square_free(f)) {
        throw NotSquareFree();
    }
    const std::int64_t g = gamma ? *gamma : estimate_gamma(f);
    const auto& coeffs = f.integer_coefficients();
    const auto variations = [&](const DyadicInterval& iv) {
        const std::int64_t e = std::min(iv.lo.exponent(), iv.hi.exponent());
        Integer q;
        mpz_setbit(q.get_mpz_t(), 0);
        if (e < 0) mpz_mul_2exp(q.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        const std::int64_t k = std::max<std::int64_t>(0, -e);
        return detail::unit_variations(
            detail::unit_interval_poly(coeffs, iv.lo.scaled_mantissa(-k), iv.hi.scaled_mantissa(-k), q));
    };

    std::vector<DyadicInterval> out;
    const Dyadic r = Dyadic::pow2(g + 1);
    std::vector<DyadicInterval> stack{{-r, r}};
    while (!stack.empty()) {
        const DyadicInterval iv = stack.back();
        stack.pop_back();
        const std::size_t v = variations(iv);
        if (v == 0) {
            continue;
        }
        if (v == 1) {
            out.push_back(iv);
            continue;
        }
        Dyadic split = iv.mid();
        const Dyadic w = iv.width();
        for (std::int64_t j = 3; exact_sign(f, split) == 0; ++j) {
            // move off the root: mid +- w/2^j alternately
            const Dyadic offset = w.scaled(-(j / 2 + 2));
            split = iv.mid() + (j % 2 == 0 ? offset : -offset);
        }
        stack.push_back({split, iv.hi});
        stack.push_back({iv.lo, split});
    }
    return out;
}

} // namespace aqir

#endif // AQIR_ISOLATE_HPP
