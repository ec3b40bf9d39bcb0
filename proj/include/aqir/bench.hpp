#ifndef AQIR_BENCH_HPP
#define AQIR_BENCH_HPP

// Benchmark harness (random instances, EQIR vs AQIR timing sweeps) plus the
// brute-force reference refiner and root diagnostics used by the tests.
// Needs MPFR (link aqir_bench).

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/isolate.hpp>
#include <aqir/pipeline.hpp>
#include <aqir/polynomial.hpp>

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace aqir {

// ---------------------------------------------------------------------------
// reference refiner

namespace detail {

/// sign f(m / 2^k) from D * 2^(k d) * f(m / 2^k) = sum A_i m^i 2^(k (d - i)).
inline int reference_sign(const std::vector<Integer>& coeffs, const Dyadic& x) {
    const std::int64_t k = std::max<std::int64_t>(0, -x.exponent());
    const Integer m = x.scaled_mantissa(-k);
    const std::size_t d = coeffs.size() - 1;
    Integer acc = coeffs[d];
    Integer term;
    for (std::size_t i = d; i-- > 0;) {
        acc *= m;
        mpz_mul_2exp(term.get_mpz_t(), coeffs[i].get_mpz_t(), static_cast<mp_bitcnt_t>(k * static_cast<std::int64_t>(d - i)));
        acc += term;
    }
    return sgn(acc);
}

} // namespace detail

/// Plain exact bisection down to width <= 2^-L. Returns [x, x] if a midpoint
/// hits the root.
inline DyadicInterval oracle_refine(const Polynomial& f, DyadicInterval interval, std::int64_t L) {
    if (!f.has_exact_view()) {
        throw ExactViewUnavailable();
    }
    const auto& coeffs = f.integer_coefficients();
    const int left = detail::reference_sign(coeffs, interval.lo);
    if (left == 0 || left != -detail::reference_sign(coeffs, interval.hi)) {
        throw PreconditionViolation("reference refinement needs a sign change at the endpoints");
    }
    const Dyadic target = Dyadic::pow2(-L);
    while (interval.width() > target) {
        const Dyadic mid = interval.mid();
        const int s = detail::reference_sign(coeffs, mid);
        if (s == 0) {
            return {mid, mid};
        }
        (s == left ? interval.lo : interval.hi) = mid;
    }
    return interval;
}

// ---------------------------------------------------------------------------
// diagnostics

using Real = boost::multiprecision::mpfr_float;

struct Complex {
    Real re;
    Real im;
};

inline Complex operator+(const Complex& x, const Complex& y) { return {x.re + y.re, x.im + y.im}; }
inline Complex operator-(const Complex& x, const Complex& y) { return {x.re - y.re, x.im - y.im}; }
inline Complex operator*(const Complex& x, const Complex& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}
inline Complex operator/(const Complex& x, const Complex& y) {
    const Real n = y.re * y.re + y.im * y.im;
    return {(x.re * y.re + x.im * y.im) / n, (x.im * y.re - x.re * y.im) / n};
}
inline Real abs(const Complex& x) { return boost::multiprecision::hypot(x.re, x.im); }

struct Diagnostics {
    unsigned precision_bits = 0;
    std::vector<Complex> roots;  ///< all complex roots
    std::vector<Real> radii;     ///< certified inclusion radius per root
    std::vector<Real> sigma;     ///< separation per root
    Real Sigma_f;                ///< sum of log2(1/sigma_i)
    Real Sigma_f_product;        ///< log2 of prod(1/sigma_i), same value by a second route
    Real Gamma_f;                ///< max(1, log2 max |z_i|)
    std::vector<std::size_t> real_roots; ///< indices into roots, ascending
    std::vector<Real> C_xi;             ///< per real root, ascending

    const Real& real_root(std::size_t k) const { return roots[real_roots[k]].re; }
    const Real& real_sigma(std::size_t k) const { return sigma[real_roots[k]]; }
};

namespace detail {

struct Evaluation {
    Complex value;
    Complex derivative;
};

inline Evaluation horner(const std::vector<Real>& c, const Complex& z) {
    Complex p{c.back(), Real(0)};
    Complex dp{Real(0), Real(0)};
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + Complex{c[i], Real(0)};
    }
    return {p, dp};
}

/// Double-precision Aberth iteration for starting points.
inline std::vector<std::complex<double>> aberth_seed(const std::vector<Integer>& coeffs) {
    const std::size_t d = coeffs.size() - 1;
    std::vector<double> c(d + 1);
    for (std::size_t i = 0; i <= d; ++i) c[i] = coeffs[i].get_d() / coeffs[d].get_d();
    double radius = 0;
    for (std::size_t i = 0; i < d; ++i) radius = std::max(radius, std::pow(std::abs(c[i]), 1.0 / static_cast<double>(d - i)));
    radius = std::max(radius, 0.5);
    std::vector<std::complex<double>> z(d);
    for (std::size_t k = 0; k < d; ++k) {
        z[k] = std::polar(radius, 2.0 * 3.141592653589793 * static_cast<double>(k) / static_cast<double>(d) + 0.4);
    }
    for (int it = 0; it < 500; ++it) {
        double largest = 0;
        for (std::size_t k = 0; k < d; ++k) {
            std::complex<double> p = c[d];
            std::complex<double> dp = 0;
            for (std::size_t i = d; i-- > 0;) {
                dp = dp * z[k] + p;
                p = p * z[k] + c[i];
            }
            if (p == 0.0) continue;
            const std::complex<double> ratio = p / dp;
            std::complex<double> sum = 0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            }
            const std::complex<double> step = ratio / (1.0 - ratio * sum);
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
                z[k] -= step;
                largest = std::max(largest, std::abs(step) / std::max(1.0, std::abs(z[k])));
            }
        }
        if (largest < 1e-14) break;
    }
    return z;
}

} // namespace detail

/// All complex roots with inclusion disks of radius <= 2^-130, separations,
/// and the derived root quantities.
inline Diagnostics compute_diagnostics(const Polynomial& f) {
    if (!f.has_exact_view()) {
        throw ExactViewUnavailable();
    }
    if (!is_square_free(f)) {
        throw NotSquareFree();
    }
    const auto& coeffs = f.integer_coefficients();
    const std::size_t d = coeffs.size() - 1;
    const std::size_t real_count = isolate_roots(f).size();
    const auto seed = detail::aberth_seed(coeffs);

    Diagnostics out;
    unsigned bits = 320;
    std::vector<Complex> z;
    for (;; bits *= 2) {
        if (bits > (1U << 16)) {
            throw OracleFailure("root diagnostics did not converge");
        }
        const auto digits = static_cast<unsigned>(static_cast<double>(bits) * 0.30103) + 2;
        Real::default_precision(digits);
        std::vector<Real> c(d + 1);
        for (std::size_t i = 0; i <= d; ++i) c[i] = Real(coeffs[i].get_str());
        if (z.empty()) {
            for (const auto& s : seed) z.push_back({Real(s.real()), Real(s.imag())});
        } else {
            for (auto& v : z) {
                v.re.precision(digits);
                v.im.precision(digits);
            }
        }
        const Real tolerance = boost::multiprecision::ldexp(Real(1), -static_cast<int>(bits) + 16);
        for (int it = 0; it < 400; ++it) {
            Real largest = 0;
            for (std::size_t k = 0; k < d; ++k) {
                const auto e = detail::horner(c, z[k]);
                if (e.value.re == 0 && e.value.im == 0) continue;
                const Complex ratio = e.value / e.derivative;
                Complex sum{Real(0), Real(0)};
                for (std::size_t j = 0; j < d; ++j) {
                    if (j != k) sum = sum + Complex{Real(1), Real(0)} / (z[k] - z[j]);
                }
                const Complex step = ratio / (Complex{Real(1), Real(0)} - ratio * sum);
                z[k] = z[k] - step;
                largest = std::max(largest, Real(abs(step) / std::max(Real(1), abs(z[k]))));
            }
            if (largest < tolerance) break;
        }

        // inclusion disks: radius d * |f(z_k) / (a_d prod_{j != k} (z_k - z_j))|
        std::vector<Real> radii(d);
        bool certified = true;
        const Real limit = boost::multiprecision::ldexp(Real(1), -130);
        for (std::size_t k = 0; k < d && certified; ++k) {
            Complex denom{c[d], Real(0)};
            for (std::size_t j = 0; j < d; ++j) {
                if (j != k) denom = denom * (z[k] - z[j]);
            }
            radii[k] = Real(static_cast<unsigned long>(d)) * abs(detail::horner(c, z[k]).value / denom);
            certified = radii[k] <= limit;
        }
        for (std::size_t k = 0; k < d && certified; ++k) {
            for (std::size_t j = k + 1; j < d && certified; ++j) {
                certified = abs(z[k] - z[j]) > radii[k] + radii[j];
            }
        }
        if (!certified) continue;

        out.precision_bits = bits;
        out.radii = radii;
        // real roots: the real_count roots closest to the axis
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return boost::multiprecision::abs(z[x].im) < boost::multiprecision::abs(z[y].im);
        });
        order.resize(real_count);
        for (const std::size_t k : order) {
            if (boost::multiprecision::abs(z[k].im) > radii[k]) {
                throw OracleFailure("real root disk does not meet the real axis");
            }
            z[k].im = 0;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return z[x].re < z[y].re; });
        out.real_roots = order;

        out.sigma.assign(d, Real(0));
        for (std::size_t k = 0; k < d; ++k) {
            Real best = -1;
            for (std::size_t j = 0; j < d; ++j) {
                if (j == k) continue;
                const Real dist = abs(z[k] - z[j]);
                if (best < 0 || dist < best) best = dist;
            }
            out.sigma[k] = d == 1 ? Real(std::numeric_limits<double>::infinity()) : best;
        }
        Real sum = 0;
        Real product = 1;
        Real largest = 0;
        for (std::size_t k = 0; k < d; ++k) {
            sum -= boost::multiprecision::log2(out.sigma[k]);
            product /= out.sigma[k];
            largest = std::max(largest, Real(abs(z[k])));
        }
        out.Sigma_f = sum;
        out.Sigma_f_product = boost::multiprecision::log2(product);
        out.Gamma_f = std::max(Real(1), Real(boost::multiprecision::log2(largest)));

        // C_xi from the Taylor expansion at each real root
        const Real d2 = Real(static_cast<unsigned long>(d * d));
        for (const std::size_t k : out.real_roots) {
            const Real xi = z[k].re;
            std::vector<Real> t(c); // Taylor coefficients f^(i)(xi) / i!
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = d - 1; j + 1 > i; --j) t[j] += xi * t[j + 1];
            }
            const Real sigma = out.sigma[k];
            const Real df = boost::multiprecision::abs(t[1]);
            Real denominator = d2 / sigma * df;
            Real factorial = 1;
            Real power = 1;
            for (std::size_t i = 2; i <= d; ++i) {
                factorial *= static_cast<unsigned long>(i);
                denominator += power * factorial * boost::multiprecision::abs(t[i]);
                power *= sigma / d2;
            }
            out.C_xi.push_back(df / (8 * denominator));
        }
        out.roots = z;
        return out;
    }
}

// ---------------------------------------------------------------------------
// benchmark harness

/// SplitMix64 generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31U);
    }

    /// Uniform signed integer with |x| < 2^bits.
    Integer signed_bits(unsigned bits) {
        Integer x;
        for (unsigned done = 0; done < bits; done += 64) {
            x <<= 64;
            x += Integer(std::to_string(next()));
        }
        const unsigned extra = ((bits + 63) / 64) * 64 - bits;
        x >>= extra;
        return (next() & 1U) != 0 ? Integer(-x) : x;
    }

private:
    std::uint64_t state_;
};

/// Random square-free degree-d polynomial with uniform signed `bits`-bit
/// integer coefficients and at least one real root.
inline Polynomial random_polynomial(std::size_t d, unsigned bits, SplitMix64& rng) {
    for (;;) {
        std::vector<Rational> c(d + 1);
        for (auto& x : c) x = Rational(rng.signed_bits(bits));
        if (c.back() == 0) continue;
        Polynomial f = Polynomial::from_rationals(std::move(c));
        if (is_square_free(f) && !isolate_roots(f).empty()) {
            return f;
        }
    }
}

enum class SweepVariable { degree, L, bitsize };

struct BenchSpec {
    SweepVariable sweep = SweepVariable::degree;
    std::vector<std::int64_t> values;
    std::int64_t tau = 20;
    std::int64_t L = 2048;
    std::int64_t degree = 64; ///< fixed degree for the L and bitsize sweeps
    std::size_t trials = 3;
    std::uint64_t seed = 1;
};

inline BenchSpec parse_bench_spec(std::istream& in) {
    BenchSpec spec;
    bool have_sweep = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string key;
        if (!(words >> key)) continue;
        const auto fail = [&](const std::string& why) {
            throw ParseError("bench spec line " + std::to_string(line_no) + ": " + why);
        };
        std::vector<std::string> args;
        for (std::string w; words >> w;) args.push_back(w);
        const auto single = [&]() -> std::int64_t {
            if (args.size() != 1) fail("'" + key + "' takes one value");
            return detail::parse_int64(args[0]);
        };
        if (key == "sweep") {
            if (args.size() != 1) fail("'sweep' takes one value");
            if (args[0] == "degree") spec.sweep = SweepVariable::degree;
            else if (args[0] == "L") spec.sweep = SweepVariable::L;
            else if (args[0] == "bitsize") spec.sweep = SweepVariable::bitsize;
            else fail("unknown sweep variable '" + args[0] + "'");
            have_sweep = true;
        } else if (key == "values") {
            if (args.empty()) fail("'values' needs at least one value");
            spec.values.clear();
            for (const auto& a : args) spec.values.push_back(detail::parse_int64(a));
        } else if (key == "tau") {
            spec.tau = single();
        } else if (key == "L") {
            spec.L = single();
        } else if (key == "degree") {
            spec.degree = single();
        } else if (key == "trials") {
            spec.trials = static_cast<std::size_t>(single());
        } else if (key == "seed") {
            if (args.size() != 1) fail("'seed' takes one value");
            spec.seed = std::stoull(args[0]);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_sweep) throw ParseError("bench spec: missing 'sweep'");
    if (spec.values.empty()) throw ParseError("bench spec: missing 'values'");
    if (spec.trials == 0) throw ParseError("bench spec: trials must be positive");
    for (const auto v : spec.values) {
        if (v < 1) throw ParseError("bench spec: values must be positive");
    }
    if (spec.tau < 1 || spec.L < 1 || spec.degree < 2) throw ParseError("bench spec: tau, L >= 1 and degree >= 2 required");
    return spec;
}

struct InstanceResult {
    std::size_t degree = 0;
    std::int64_t tau = 0;
    std::int64_t L = 0;
    std::size_t roots = 0;
    std::size_t eqir_bisections = 0;
    std::size_t aqir_norm_bisections = 0;
    std::size_t aqir_refine_bisections = 0;
    double eqir_seconds = 0;
    double aqir_seconds = 0;
    std::string status = "ok";

    double ratio() const { return aqir_seconds > 0 ? eqir_seconds / aqir_seconds : 0.0; }
};

/// Times EQIR and AQIR on one polynomial (isolation excluded; AQIR includes normalization).
inline InstanceResult run_instance(const Polynomial& f, std::int64_t L, const RunConfig& base = {}) {
    using clock = std::chrono::steady_clock;
    InstanceResult r;
    r.degree = f.degree();
    r.tau = f.tau();
    r.L = L;
    try {
        const auto intervals = isolate_roots(f);
        r.roots = intervals.size();
        RunConfig config = base;
        config.L = L;
        config.gamma = estimate_gamma(f);
        config.jobs = 1;

        config.algorithm = Algorithm::eqir;
        auto start = clock::now();
        const RefinementResult eqir = refine_all(f, intervals, config);
        r.eqir_seconds = std::chrono::duration<double>(clock::now() - start).count();
        r.eqir_bisections = eqir.stats.total_bisections();

        config.algorithm = Algorithm::aqir;
        start = clock::now();
        const RefinementResult aqir = refine_all(f, intervals, config);
        r.aqir_seconds = std::chrono::duration<double>(clock::now() - start).count();
        r.aqir_norm_bisections = aqir.stats.total_norm_bisections();
        r.aqir_refine_bisections = aqir.stats.total_bisections();
    } catch (const std::exception& e) {
        r.status = std::string("error: ") + e.what();
    }
    return r;
}

struct BenchRow {
    std::int64_t value = 0; ///< the swept variable
    InstanceResult median;  ///< instance whose time ratio is the median over the trials
    std::size_t trials = 0;
};

/// Generates `trials` instances per configuration and keeps the median-ratio one.
inline std::vector<BenchRow> run_experiment(const BenchSpec& spec, unsigned jobs = 1) {
    std::vector<BenchRow> rows;
    SplitMix64 seeder(spec.seed);
    for (const std::int64_t value : spec.values) {
        std::size_t d = static_cast<std::size_t>(spec.degree);
        std::int64_t tau = spec.tau;
        std::int64_t L = spec.L;
        switch (spec.sweep) {
        case SweepVariable::degree: d = static_cast<std::size_t>(value); break;
        case SweepVariable::L: L = value; break;
        case SweepVariable::bitsize: tau = value; break;
        }
        std::vector<std::uint64_t> seeds(spec.trials);
        for (auto& s : seeds) s = seeder.next();
        std::vector<InstanceResult> results(spec.trials);
        detail::for_each_root(spec.trials, jobs, [&](std::size_t t) {
            SplitMix64 rng(seeds[t]);
            const Polynomial f = random_polynomial(d, static_cast<unsigned>(tau), rng);
            results[t] = run_instance(f, L);
            results[t].tau = tau;
        });

        std::vector<std::size_t> ok;
        for (std::size_t t = 0; t < results.size(); ++t) {
            if (results[t].status == "ok") ok.push_back(t);
        }
        BenchRow row;
        row.value = value;
        row.trials = spec.trials;
        if (ok.empty()) {
            row.median = results.front();
        } else {
            std::sort(ok.begin(), ok.end(),
                      [&](std::size_t x, std::size_t y) { return results[x].ratio() < results[y].ratio(); });
            row.median = results[ok[(ok.size() - 1) / 2]];
        }
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (const char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

inline std::string fixed(double x, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

} // namespace detail

inline void write_csv(std::ostream& os, SweepVariable sweep, const std::vector<BenchRow>& rows) {
    switch (sweep) {
    case SweepVariable::degree:
        os << "d,tau,roots,eqir_bis_per_root,eqir_time_per_root,aqir_norm_bis_per_root,"
              "aqir_refine_bis_per_root,aqir_time_per_root,ratio,status\r\n";
        break;
    case SweepVariable::L: os << "L,t_eqir_per_root,t_aqir_per_root,ratio,status\r\n"; break;
    case SweepVariable::bitsize: os << "tau,t_eqir_per_root,t_aqir_per_root,ratio,status\r\n"; break;
    }
    for (const auto& row : rows) {
        const InstanceResult& r = row.median;
        const double m = r.roots == 0 ? 1.0 : static_cast<double>(r.roots);
        const std::string t_eqir = detail::fixed(r.eqir_seconds / m, 6);
        const std::string t_aqir = detail::fixed(r.aqir_seconds / m, 6);
        const std::string ratio = detail::fixed(r.ratio(), 3);
        switch (sweep) {
        case SweepVariable::degree:
            os << r.degree << ',' << r.tau << ',' << r.roots << ',' << detail::fixed(static_cast<double>(r.eqir_bisections) / m, 2)
               << ',' << t_eqir << ',' << detail::fixed(static_cast<double>(r.aqir_norm_bisections) / m, 2) << ','
               << detail::fixed(static_cast<double>(r.aqir_refine_bisections) / m, 2) << ',' << t_aqir << ',' << ratio;
            break;
        case SweepVariable::L: os << row.value << ',' << t_eqir << ',' << t_aqir << ',' << ratio; break;
        case SweepVariable::bitsize: os << row.value << ',' << t_eqir << ',' << t_aqir << ',' << ratio; break;
        }
        os << ',' << detail::csv_field(r.status) << "\r\n";
    }
}

} // namespace aqir

#endif // AQIR_BENCH_HPP
