#ifndef AQIR_PIPELINE_HPP
#define AQIR_PIPELINE_HPP

// Full refinement driver: sign assignment, normalization of the isolating
// intervals, and the per-root AQIR (or EQIR) sequence down to width 2^-L.

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/polynomial.hpp>
#include <aqir/steps.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace aqir {

enum class Algorithm { aqir, eqir };

struct RunConfig {
    std::int64_t L = 64;                  ///< target width 2^-L
    std::optional<std::int64_t> gamma;    ///< root bound exponent; estimated when absent
    Algorithm algorithm = Algorithm::aqir;
    Precision rho_cap = default_rho_cap;
    Precision endpoint_rho_cap{4096};     ///< cap for the up-front endpoint sign checks
    bool collect_stats = true;
    bool warm_start = false;              ///< start each loop at a quarter of the previous step's precision
    unsigned jobs = 1;
};

/// One step of a refinement sequence.
struct StepTrace {
    Dyadic width_before;
    QirFactor n_before;
    StepStatus status = StepStatus::fail;
    Precision max_rho{0};
    Dyadic width_after;
};

struct RootStats {
    std::size_t steps = 0;
    std::size_t successes = 0;
    std::size_t fails = 0;
    std::size_t bisections = 0;
    std::size_t exact_roots = 0;
    std::size_t norm_bisections = 0;
    std::size_t evaluations = 0;
    Precision max_rho{0};
    RootInterval start; ///< interval the sequence started from (after normalization)
    std::vector<StepTrace> trace;
};

struct RefinementStats {
    std::int64_t gamma = 1;
    std::vector<RootStats> roots;

    std::size_t total_bisections() const {
        std::size_t n = 0;
        for (const auto& r : roots) n += r.bisections;
        return n;
    }
    std::size_t total_norm_bisections() const {
        std::size_t n = 0;
        for (const auto& r : roots) n += r.norm_bisections;
        return n;
    }
};

struct RefinementResult {
    std::vector<RootInterval> intervals;
    RefinementStats stats;
};

/// -log2 of a positive width, as a double (for traces and reports).
inline double neg_log2(const Dyadic& width) {
    long e2 = 0;
    const double m = mpz_get_d_2exp(&e2, width.mantissa().get_mpz_t());
    return -(std::log2(m) + static_cast<double>(e2 + width.exponent()));
}

namespace detail {

/// Smallest integer k with 2^k >= x, for x > 0.
inline std::int64_t ceil_log2(const Rational& x) {
    const auto num_bits = static_cast<std::int64_t>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
    const auto den_bits = static_cast<std::int64_t>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
    std::int64_t k = num_bits - den_bits - 1;
    const auto pow2 = [](std::int64_t e) {
        Rational p(1);
        if (e >= 0) {
            mpz_mul_2exp(p.get_num_mpz_t(), p.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
        } else {
            mpz_mul_2exp(p.get_den_mpz_t(), p.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        }
        return p;
    };
    while (pow2(k) < x) {
        ++k;
    }
    return k;
}

inline StepOptions step_options(const RunConfig& config) {
    StepOptions options;
    options.rho_cap = config.rho_cap;
    return options;
}

} // namespace detail

/// Integer Gamma >= log2 of every root magnitude, from the Cauchy bound
/// 1 + max_{i<d} |a_i| / |a_d| on coefficient enclosures at rho = 8.
inline std::int64_t estimate_gamma(const Polynomial& f) {
    const Precision rho(8);
    const std::size_t d = f.degree();
    const DyadicInterval lead = f.coefficient_interval(d, rho);
    Dyadic lead_lower;
    if (lead.lo.sign() > 0) {
        lead_lower = lead.lo;
    } else if (lead.hi.sign() < 0) {
        lead_lower = -lead.hi;
    }
    if (lead_lower < Dyadic::pow2(-1)) {
        throw LeadingCoefficientTooSmall();
    }
    Dyadic upper;
    for (std::size_t i = 0; i < d; ++i) {
        const DyadicInterval a = f.coefficient_interval(i, rho);
        upper = std::max({upper, a.lo.abs(), a.hi.abs()});
    }
    const Rational bound = Rational(1) + upper.to_rational() / lead_lower.to_rational();
    return std::max<std::int64_t>(1, detail::ceil_log2(bound));
}

/// Sign of f at the left endpoint of each of the m isolating intervals,
/// from the sign of the leading coefficient alone.
inline std::vector<int> assign_signs(const Polynomial& f, std::size_t m) {
    const DyadicInterval lead = f.coefficient_interval(f.degree(), Precision(8));
    const int lead_sign = interval_sign(lead);
    if (lead_sign == 0) {
        throw LeadingCoefficientTooSmall();
    }
    std::vector<int> signs(m);
    for (std::size_t k = 1; k <= m; ++k) {
        // sign(a_d) * (-1)^(m - k + 1)
        signs[k - 1] = ((m - k + 1) % 2 == 0) ? lead_sign : -lead_sign;
    }
    return signs;
}

inline std::vector<int> assign_signs(const Polynomial& f, const std::vector<DyadicInterval>& intervals) {
    return assign_signs(f, intervals.size());
}

struct NormalizationResult {
    std::vector<RootInterval> intervals;
    std::vector<std::size_t> bisections; ///< per root
};

/// Turns disjoint ascending isolating intervals into normal ones: bisect the
/// larger neighbour until consecutive gaps are at least three times the
/// larger width, then enlarge every interval by a quarter of its gaps.
inline NormalizationResult normalize(const Polynomial& f, const std::vector<DyadicInterval>& intervals,
                                     const std::vector<int>& signs, std::int64_t gamma,
                                     const StepOptions& options = {}) {
    const std::size_t m = intervals.size();
    if (signs.size() != m) {
        throw PreconditionViolation("one sign per interval is required");
    }
    NormalizationResult out;
    out.bisections.assign(m, 0);
    if (m == 0) {
        return out;
    }
    if (m == 1) {
        const Dyadic r = Dyadic::pow2(gamma + 2);
        out.intervals.push_back(RootInterval{-r, r, signs[0], QirFactor::initial(), false});
        return out;
    }

    std::vector<RootInterval> iv;
    iv.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        iv.push_back(RootInterval{intervals[k].lo, intervals[k].hi, signs[k], QirFactor::initial(), false});
        detail::check_interval(iv.back());
        if (k > 0 && iv[k].a < iv[k - 1].b) {
            throw PreconditionViolation("isolating intervals must be ascending and disjoint", k);
        }
    }
    // every root lies in (-2^(Gamma+1), 2^(Gamma+1)); no sign changes are lost by clipping
    const Dyadic clip = Dyadic::pow2(gamma + 1);
    iv.front().a = std::max(iv.front().a, -clip);
    iv.back().b = std::min(iv.back().b, clip);
    for (const auto& r : iv) {
        detail::check_interval(r);
    }

    std::vector<Dyadic> gaps(m + 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        for (;;) {
            const Dyadic gap = iv[k + 1].a - iv[k].b;
            const Dyadic wk = iv[k].width();
            const Dyadic wn = iv[k + 1].width();
            if (gap >= Dyadic(3) * std::max(wk, wn)) {
                break;
            }
            const std::size_t target = wk > wn ? k : k + 1;
            try {
                iv[target] = approximate_bisection(f, iv[target], options).interval;
            } catch (const UnresolvedSigns& e) {
                throw UnresolvedSigns(e.what(), target);
            }
            ++out.bisections[target];
        }
        gaps[k + 1] = iv[k + 1].a - iv[k].b;
    }
    gaps[0] = gaps[1];
    gaps[m] = gaps[m - 1];
    for (std::size_t k = 0; k < m; ++k) {
        iv[k].a -= gaps[k].scaled(-2);
        iv[k].b += gaps[k + 1].scaled(-2);
    }
    out.intervals = std::move(iv);
    return out;
}

namespace detail {

/// Certified sign of f at x: exact when possible, otherwise adaptive interval evaluation.
inline int endpoint_sign(const Polynomial& f, const Dyadic& x, Precision cap) {
    if (f.has_exact_view()) {
        return exact_sign(f, x);
    }
    return certified_sign(f, x, Precision(2), cap).sign;
}

/// Checks that f has certified, opposite signs at the endpoints. An endpoint
/// whose sign cannot be resolved is moved inward by a quarter of the current
/// width, up to three times. `expected_left` = 0 accepts either orientation.
inline DyadicInterval certify_endpoints(const Polynomial& f, DyadicInterval interval, int expected_left,
                                        Precision cap, std::size_t index) {
    if (!(interval.lo < interval.hi)) {
        throw PreconditionViolation("isolating interval must satisfy a < b", index);
    }
    int left = endpoint_sign(f, interval.lo, cap);
    for (int tries = 0; left == 0 && tries < 3; ++tries) {
        interval.lo += interval.width().scaled(-2);
        left = endpoint_sign(f, interval.lo, cap);
    }
    int right = endpoint_sign(f, interval.hi, cap);
    for (int tries = 0; right == 0 && tries < 3; ++tries) {
        interval.hi -= interval.width().scaled(-2);
        right = endpoint_sign(f, interval.hi, cap);
    }
    if (left == 0 || right == 0) {
        throw PreconditionViolation("interval endpoint is (numerically) a root", index);
    }
    if (left != -right || (expected_left != 0 && left != expected_left)) {
        throw PreconditionViolation("interval endpoints do not show the expected sign change", index);
    }
    return interval;
}

inline void record(RootStats& stats, const RootInterval& before, const StepOutcome& out, bool keep_trace) {
    ++stats.steps;
    stats.evaluations += out.evaluations;
    stats.max_rho = std::max(stats.max_rho, out.max_rho);
    switch (out.status) {
    case StepStatus::success: ++stats.successes; break;
    case StepStatus::fail: ++stats.fails; break;
    case StepStatus::bisected: ++stats.bisections; break;
    case StepStatus::exact_root: ++stats.exact_roots; break;
    }
    if (keep_trace) {
        stats.trace.push_back(StepTrace{before.width(), before.n, out.status, out.max_rho, out.interval.width()});
    }
}

/// Runs the refinement sequence on one interval until its width is <= 2^-L.
inline RootInterval refine_sequence(const Polynomial& f, RootInterval interval, const RunConfig& config,
                                    RootStats& stats, std::size_t index) {
    const Dyadic target = Dyadic::pow2(-config.L);
    StepOptions options = step_options(config);
    interval.n = QirFactor::initial();
    stats.start = interval;
    try {
        while (!interval.exact && interval.width() > target) {
            const StepOutcome out =
                config.algorithm == Algorithm::eqir ? eqir_step(f, interval) : aqir_step(f, interval, options);
            record(stats, interval, out, config.collect_stats);
            interval = out.interval;
            if (config.warm_start && config.algorithm == Algorithm::aqir) {
                options.start_rho = Precision(std::max<std::int64_t>(2, out.max_rho.bits() / 4));
            }
        }
    } catch (const UnresolvedSigns& e) {
        throw UnresolvedSigns(e.what(), index);
    } catch (const PreconditionViolation& e) {
        throw PreconditionViolation(e.what(), index);
    }
    return interval;
}

/// Applies `work(k)` to k = 0..count-1 on up to `jobs` threads; rethrows the
/// first failure in index order.
template <class Work>
void for_each_root(std::size_t count, unsigned jobs, Work&& work) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            work(k);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(count));
    workers.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        workers.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    work(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace detail

/// Refines isolating intervals for all real roots of f (ascending, disjoint)
/// to width <= 2^-L.
inline RefinementResult refine_all(const Polynomial& f, const std::vector<DyadicInterval>& intervals,
                                   const RunConfig& config) {
    if (config.L < 0) {
        throw PreconditionViolation("L must be non-negative");
    }
    if (config.algorithm == Algorithm::eqir && !f.has_exact_view()) {
        throw ExactViewUnavailable();
    }
    RefinementResult result;
    const std::size_t m = intervals.size();
    result.stats.gamma = config.gamma ? *config.gamma : estimate_gamma(f);
    result.stats.roots.resize(m);
    if (m == 0) {
        return result;
    }

    const std::vector<int> signs = assign_signs(f, m);
    std::vector<DyadicInterval> checked(m);
    for (std::size_t k = 0; k < m; ++k) {
        checked[k] = detail::certify_endpoints(f, intervals[k], signs[k], config.endpoint_rho_cap, k);
    }

    std::vector<RootInterval> start;
    if (config.algorithm == Algorithm::eqir) {
        for (std::size_t k = 0; k < m; ++k) {
            start.push_back(RootInterval{checked[k].lo, checked[k].hi, signs[k], QirFactor::initial(), false});
        }
    } else {
        NormalizationResult normalized = normalize(f, checked, signs, result.stats.gamma, detail::step_options(config));
        start = std::move(normalized.intervals);
        for (std::size_t k = 0; k < m; ++k) {
            result.stats.roots[k].norm_bisections = normalized.bisections[k];
        }
    }

    result.intervals.resize(m);
    detail::for_each_root(m, config.jobs, [&](std::size_t k) {
        result.intervals[k] = detail::refine_sequence(f, start[k], config, result.stats.roots[k], k);
    });
    return result;
}

/// Refines one isolating interval without knowledge of the other roots. The
/// interval is clipped to (-2^(Gamma+1), 2^(Gamma+1)) and its endpoint signs
/// are certified; there are no neighbours to separate from.
inline RefinementResult refine_single(const Polynomial& f, const DyadicInterval& interval, const RunConfig& config) {
    if (config.algorithm == Algorithm::eqir && !f.has_exact_view()) {
        throw ExactViewUnavailable();
    }
    RefinementResult result;
    result.stats.gamma = config.gamma ? *config.gamma : estimate_gamma(f);
    result.stats.roots.resize(1);
    const Dyadic clip = Dyadic::pow2(result.stats.gamma + 1);
    DyadicInterval clipped{std::max(interval.lo, -clip), std::min(interval.hi, clip)};
    clipped = detail::certify_endpoints(f, clipped, 0, config.endpoint_rho_cap, 0);
    const int left = detail::endpoint_sign(f, clipped.lo, config.endpoint_rho_cap);
    const RootInterval start{clipped.lo, clipped.hi, left, QirFactor::initial(), false};
    result.intervals.push_back(detail::refine_sequence(f, start, config, result.stats.roots[0], 0));
    return result;
}

} // namespace aqir

#endif // AQIR_PIPELINE_HPP
