#ifndef AQIR_TESTS_SUPPORT_HPP
#define AQIR_TESTS_SUPPORT_HPP

// Independent reference computations for the tests. Nothing here calls the
// library's evaluation or rounding code: values are computed with plain
// rational arithmetic on mpq_class.

#include <aqir/aqir.hpp>
#include <aqir/bench.hpp>

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using aqir::Dyadic;
using aqir::DyadicInterval;
using aqir::Polynomial;
using Q = mpq_class;
using Z = mpz_class;

/// sum c_i x^i by explicit powers.
inline Q eval_q(const std::vector<Q>& c, const Q& x) {
    Q sum = 0;
    Q power = 1;
    for (const auto& ci : c) {
        sum += ci * power;
        power *= x;
    }
    return sum;
}

inline int sign_q(const std::vector<Q>& c, const Q& x) { return sgn(eval_q(c, x)); }

/// Value of a dyadic computed from its parts.
inline Q q_of(const Dyadic& x) {
    Q v(x.mantissa());
    Z p = 1;
    if (x.exponent() >= 0) {
        p <<= static_cast<mp_bitcnt_t>(x.exponent());
        v *= Q(p);
    } else {
        p <<= static_cast<mp_bitcnt_t>(-x.exponent());
        v /= Q(p);
    }
    v.canonicalize();
    return v;
}

/// 2^e as a rational.
inline Q pow2_q(std::int64_t e) {
    Z p = 1;
    p <<= static_cast<mp_bitcnt_t>(e < 0 ? -e : e);
    Q r = e < 0 ? Q(Z(1), p) : Q(p);
    r.canonicalize();
    return r;
}

/// prod (x - r_k) times lead, ascending coefficients.
inline std::vector<Q> from_roots(const std::vector<Q>& roots, const Q& lead = 1) {
    std::vector<Q> c{lead};
    for (const auto& r : roots) {
        std::vector<Q> next(c.size() + 1, Q(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = next;
    }
    return c;
}

inline std::vector<Q> wilkinson(int k) {
    std::vector<Q> roots;
    for (int j = 1; j <= k; ++j) roots.emplace_back(j);
    return from_roots(roots);
}

/// Chebyshev polynomial of the first kind T_n.
inline std::vector<Q> chebyshev(int n) {
    std::vector<Q> prev{1};
    std::vector<Q> cur{0, 1};
    for (int k = 1; k < n; ++k) {
        std::vector<Q> next(cur.size() + 1, Q(0));
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = cur;
        cur = next;
    }
    return n == 0 ? prev : cur;
}

/// x^d - 2 (a x - 1)^2: two real roots very close to 1/a.
inline std::vector<Q> mignotte(int d, int a) {
    std::vector<Q> c(static_cast<std::size_t>(d) + 1, Q(0));
    c[static_cast<std::size_t>(d)] += 1;
    c[2] -= 2 * a * a;
    c[1] += 4 * a;
    c[0] -= 2;
    return c;
}

inline Polynomial poly(const std::vector<Q>& c) { return Polynomial::from_rationals(c); }

/// Does (a, b) contain the root isolated by `iso`? Decided by refining the
/// reference interval until it is inside or outside [a, b].
inline bool contains_root(const Polynomial& f, const DyadicInterval& iso, const Dyadic& a, const Dyadic& b,
                          std::int64_t L) {
    for (std::int64_t bits = L + 4; bits <= L + 512; bits += 64) {
        const DyadicInterval r = aqir::oracle_refine(f, iso, bits);
        if (r.is_point()) {
            return a < r.lo && r.lo < b;
        }
        if (a <= r.lo && r.hi <= b) {
            // a or b could still be the root itself; exact sign check settles it
            const auto& c = f.exact_coefficients();
            std::vector<Q> cq(c.begin(), c.end());
            return sign_q(cq, q_of(a)) != 0 && sign_q(cq, q_of(b)) != 0 &&
                   sign_q(cq, q_of(a)) != sign_q(cq, q_of(b));
        }
        if (r.hi <= a || b <= r.lo) {
            return false;
        }
    }
    return false;
}

/// Rational as an MPFR number at the current default precision.
inline aqir::Real real_of(const Q& x) {
    return aqir::Real(x.get_num().get_str()) / aqir::Real(x.get_den().get_str());
}

/// Outcome of checking one interval J for root k (ascending real-root index)
/// against the normality conditions, with roots from the diagnostics.
struct NormalCheck {
    bool inside = false;          ///< J a subset of (-2^(Gamma+2), 2^(Gamma+2))
    bool separated = false;       ///< |p - z_i| > sigma_i / 4 for p in J, z_i other roots
    bool endpoint_values = false; ///< min |f(a)|, |f(b)| above the threshold
    bool wide = false;            ///< w(J) > sigma_k / 4
    bool ok() const { return inside && separated && endpoint_values && wide; }
};

inline NormalCheck check_normal(const std::vector<Q>& c, std::int64_t tau, const aqir::Diagnostics& diag,
                                const Dyadic& a, const Dyadic& b, std::size_t k, std::int64_t gamma) {
    using aqir::Real;
    NormalCheck out;
    const Q qa = q_of(a);
    const Q qb = q_of(b);
    const Q bound = pow2_q(gamma + 2);
    out.inside = -bound <= qa && qb <= bound;

    const std::size_t own = diag.real_roots[k];
    const Real ra = real_of(qa);
    const Real rb = real_of(qb);
    out.separated = true;
    for (std::size_t i = 0; i < diag.roots.size(); ++i) {
        if (i == own) continue;
        const auto& z = diag.roots[i];
        Real dx = 0;
        if (z.re < ra) dx = ra - z.re;
        if (z.re > rb) dx = z.re - rb;
        const Real dist = boost::multiprecision::sqrt(dx * dx + z.im * z.im);
        if (!(dist > diag.sigma[i] / 4)) out.separated = false;
    }

    const std::size_t d = c.size() - 1;
    const Q fa = abs(eval_q(c, qa));
    const Q fb = abs(eval_q(c, qb));
    const Q fmin = fa < fb ? fa : fb;
    const Real width_log = boost::multiprecision::log2(rb - ra);
    const Real exponent = -(Real(28) + Real(2 * tau) + Real(17 * static_cast<std::int64_t>(d) * gamma) +
                            2 * diag.Sigma_f - 5 * width_log);
    out.endpoint_values = fmin > 0 && boost::multiprecision::log2(real_of(fmin)) >= exponent;
    out.wide = rb - ra > diag.real_sigma(k) / 4;
    return out;
}

/// Named test polynomial.
struct Instance {
    std::string name;
    std::vector<Q> coeffs;
};

/// Exact-rational square-free instances: random, Wilkinson, Chebyshev, Mignotte.
inline std::vector<Instance> correctness_suite(std::uint64_t seed = 7) {
    std::vector<Instance> out;
    aqir::SplitMix64 rng(seed);
    for (int i = 0; i < 24; ++i) {
        const std::size_t d = 4 + static_cast<std::size_t>(rng.next() % 61);
        const unsigned bits = 4 + static_cast<unsigned>(rng.next() % 21);
        for (;;) {
            std::vector<Q> c(d + 1);
            for (auto& x : c) x = Q(rng.signed_bits(bits));
            if (c.back() == 0) continue;
            const Polynomial f = poly(c);
            if (!aqir::is_square_free(f) || aqir::isolate_roots(f).empty()) continue;
            out.push_back({"random d=" + std::to_string(d) + " bits=" + std::to_string(bits), c});
            break;
        }
    }
    for (int k = 2; k <= 10; ++k) out.push_back({"wilkinson " + std::to_string(k), wilkinson(k)});
    for (int n = 2; n <= 16; n += 2) out.push_back({"chebyshev " + std::to_string(n), chebyshev(n)});
    for (int n = 3; n <= 15; n += 4) out.push_back({"chebyshev " + std::to_string(n), chebyshev(n)});
    for (const int d : {3, 4, 5, 6, 7, 8, 10, 12}) {
        const int a = 2 + d % 3;
        out.push_back({"mignotte d=" + std::to_string(d) + " a=" + std::to_string(a), mignotte(d, a)});
    }
    out.push_back({"x^2-2", {Q(-2), Q(0), Q(1)}});
    out.push_back({"x^3-2x", {Q(0), Q(-2), Q(0), Q(1)}});
    out.push_back({"rational roots", from_roots({Q(-7, 3), Q(1, 5), Q(2, 7), Q(9, 4)}, Q(3))});
    return out;
}

/// Smaller instances whose complex roots the diagnostics can certify quickly.
inline std::vector<Instance> known_root_suite() {
    std::vector<Instance> out;
    for (int k = 2; k <= 8; ++k) out.push_back({"wilkinson " + std::to_string(k), wilkinson(k)});
    for (int n = 3; n <= 9; n += 2) out.push_back({"chebyshev " + std::to_string(n), chebyshev(n)});
    out.push_back({"x^2-2", {Q(-2), Q(0), Q(1)}});
    out.push_back({"x^3-2x", {Q(0), Q(-2), Q(0), Q(1)}});
    out.push_back({"mignotte d=5 a=3", mignotte(5, 3)});
    out.push_back({"mignotte d=7 a=2", mignotte(7, 2)});
    out.push_back({"rational roots", from_roots({Q(-7, 3), Q(1, 5), Q(2, 7), Q(9, 4)}, Q(3))});
    out.push_back({"x^5-3x+1", {Q(1), Q(-3), Q(0), Q(0), Q(0), Q(1)}});
    return out;
}

/// Random isolating interval inside a suite member's Descartes interval, with a
/// random refinement factor; the suite must hold small exact instances.
struct RandomCase {
    Polynomial f;
    DyadicInterval iso; // isolating interval of the root from Descartes
    aqir::RootInterval interval;
};

/// Random isolating subinterval around a root of a random suite member.
inline RandomCase random_case(std::mt19937_64& gen, const std::vector<Instance>& suite) {
    for (;;) {
        const Instance& inst = suite[gen() % suite.size()];
        const Polynomial f = poly(inst.coeffs);
        const auto isolating = aqir::isolate_roots(f);
        if (isolating.empty()) continue;
        const DyadicInterval iso = isolating[gen() % isolating.size()];
        const DyadicInterval r = aqir::oracle_refine(f, iso, 60);
        if (r.is_point()) continue;
        // widen the tiny root interval by random dyadic amounts, staying inside iso
        const std::int64_t e = iso.width().floor_log2() - static_cast<std::int64_t>(gen() % 40) - 1;
        const Dyadic left = Dyadic(aqir::Integer(static_cast<unsigned long>(gen() % 1024)), e - 10);
        const Dyadic right = Dyadic(aqir::Integer(static_cast<unsigned long>(gen() % 1024)), e - 10);
        const Dyadic a = std::max(iso.lo, r.lo - left);
        const Dyadic b = std::min(iso.hi, r.hi + right);
        const int s = sign_q(std::vector<Q>(inst.coeffs), q_of(a));
        if (s == 0 || sign_q(inst.coeffs, q_of(b)) != -s) continue;
        return {f, iso, aqir::RootInterval{a, b, s, aqir::QirFactor(static_cast<unsigned>(gen() % 6)), false}};
    }
}

inline std::vector<Instance> small_suite() {
    std::vector<Instance> out;
    for (const auto& inst : correctness_suite(3)) {
        if (inst.coeffs.size() <= 24) out.push_back(inst);
    }
    return out;
}

} // namespace testing_support

#endif // AQIR_TESTS_SUPPORT_HPP
