#ifndef AQIR_PROBLEM_HPP
#define AQIR_PROBLEM_HPP

// Line-oriented problem files:
//
//   deg 2
//   c 0 int -2
//   c 2 int 1
//   iv -2 -1
//   iv 1 2
//   L 64
//
// Coefficient kinds: int, rat (p/q), dec (exact decimal), dyadic (m*2^e or a
// finite binary literal), sqrt / -sqrt (square root of a rational, only
// available through approximations). Missing coefficients are zero.

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/oracle.hpp>
#include <aqir/pipeline.hpp>
#include <aqir/polynomial.hpp>

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace aqir {

enum class CoefficientKind { integer, rational, decimal, dyadic, sqrt, neg_sqrt };

inline std::string to_string(CoefficientKind kind) {
    switch (kind) {
    case CoefficientKind::integer: return "int";
    case CoefficientKind::rational: return "rat";
    case CoefficientKind::decimal: return "dec";
    case CoefficientKind::dyadic: return "dyadic";
    case CoefficientKind::sqrt: return "sqrt";
    case CoefficientKind::neg_sqrt: return "-sqrt";
    }
    return "?";
}

struct CoefficientEntry {
    CoefficientKind kind = CoefficientKind::integer;
    std::string text = "0";
    Rational value; ///< exact value, or the radicand for sqrt kinds

    Coefficient coefficient() const {
        switch (kind) {
        case CoefficientKind::sqrt: return Coefficient::sqrt(value, 1);
        case CoefficientKind::neg_sqrt: return Coefficient::sqrt(value, -1);
        default: return Coefficient(value);
        }
    }
};

struct ProblemFile {
    std::vector<CoefficientEntry> coefficients; ///< a_0..a_d
    std::vector<DyadicInterval> intervals;
    std::optional<std::int64_t> L;
    std::optional<std::int64_t> gamma;
    std::optional<Algorithm> algorithm;

    std::size_t degree() const { return coefficients.size() - 1; }
    Polynomial polynomial() const {
        std::vector<Coefficient> c;
        c.reserve(coefficients.size());
        for (const auto& e : coefficients) c.push_back(e.coefficient());
        return Polynomial::from_coefficients(std::move(c));
    }
};

inline std::string to_string(Algorithm a) { return a == Algorithm::eqir ? "eqir" : "aqir"; }

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "aqir") return Algorithm::aqir;
    if (s == "eqir") return Algorithm::eqir;
    throw ParseError("unknown algorithm '" + s + "' (expected aqir or eqir)");
}

inline CoefficientEntry parse_coefficient(const std::string& kind, const std::string& text) {
    CoefficientEntry e;
    e.text = text;
    if (kind == "int") {
        e.kind = CoefficientKind::integer;
        e.value = Rational(detail::parse_integer(text));
    } else if (kind == "rat") {
        e.kind = CoefficientKind::rational;
        e.value = parse_rational(text);
    } else if (kind == "dec") {
        e.kind = CoefficientKind::decimal;
        e.value = parse_decimal(text);
    } else if (kind == "dyadic") {
        e.kind = CoefficientKind::dyadic;
        e.value = parse_dyadic(text).to_rational();
    } else if (kind == "sqrt" || kind == "-sqrt") {
        e.kind = kind == "sqrt" ? CoefficientKind::sqrt : CoefficientKind::neg_sqrt;
        e.value = parse_rational(text);
        if (sgn(e.value) < 0) throw ParseError("sqrt of a negative number: " + text);
    } else {
        throw ParseError("unknown coefficient kind '" + kind + "'");
    }
    return e;
}

inline ProblemFile parse_problem(std::istream& in) {
    ProblemFile p;
    std::optional<std::size_t> degree;
    std::vector<std::optional<CoefficientEntry>> coeffs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string s; words >> s;) w.push_back(s);
        if (w.empty()) continue;
        const auto where = "line " + std::to_string(line_no) + ": ";
        const auto expect = [&](std::size_t n) {
            if (w.size() != n) throw ParseError(where + "'" + w[0] + "' expects " + std::to_string(n - 1) + " fields");
        };
        try {
            if (w[0] == "deg") {
                expect(2);
                if (degree) throw ParseError("duplicate 'deg'");
                const std::int64_t d = detail::parse_int64(w[1]);
                if (d < 2) throw ParseError("degree must be at least 2");
                degree = static_cast<std::size_t>(d);
                coeffs.assign(*degree + 1, std::nullopt);
            } else if (w[0] == "c") {
                expect(4);
                if (!degree) throw ParseError("'c' before 'deg'");
                const std::int64_t i = detail::parse_int64(w[1]);
                if (i < 0 || static_cast<std::size_t>(i) > *degree) throw ParseError("coefficient index out of range");
                if (coeffs[static_cast<std::size_t>(i)]) throw ParseError("duplicate coefficient " + w[1]);
                coeffs[static_cast<std::size_t>(i)] = parse_coefficient(w[2], w[3]);
            } else if (w[0] == "iv") {
                expect(3);
                const DyadicInterval iv{parse_dyadic(w[1]), parse_dyadic(w[2])};
                if (!(iv.lo < iv.hi)) throw ParseError("interval needs lo < hi");
                if (!p.intervals.empty() && iv.lo < p.intervals.back().hi) {
                    throw ParseError("intervals must be ascending and disjoint");
                }
                p.intervals.push_back(iv);
            } else if (w[0] == "L") {
                expect(2);
                p.L = detail::parse_int64(w[1]);
                if (*p.L < 1) throw ParseError("L must be at least 1");
            } else if (w[0] == "gamma") {
                expect(2);
                p.gamma = detail::parse_int64(w[1]);
                if (*p.gamma < 1) throw ParseError("gamma must be at least 1");
            } else if (w[0] == "algorithm") {
                expect(2);
                p.algorithm = parse_algorithm(w[1]);
            } else {
                throw ParseError("unknown directive '" + w[0] + "'");
            }
        } catch (const ParseError& e) {
            const std::string what = e.what();
            throw ParseError(what.rfind("line ", 0) == 0 ? what : where + what);
        }
    }
    if (!degree) throw ParseError("missing 'deg'");
    const auto& lead = coeffs.back();
    if (!lead || sgn(lead->value) == 0) throw ParseError("leading coefficient must be given and nonzero");
    for (auto& c : coeffs) {
        p.coefficients.push_back(c ? *c : CoefficientEntry{});
    }
    return p;
}

inline ProblemFile parse_problem(const std::string& text) {
    std::istringstream in(text);
    return parse_problem(in);
}

inline void write_intervals(std::ostream& os, const std::vector<DyadicInterval>& intervals) {
    for (const auto& iv : intervals) {
        os << "iv " << iv.lo << ' ' << iv.hi << '\n';
    }
}

inline void write_problem(std::ostream& os, const ProblemFile& p) {
    os << "deg " << p.degree() << '\n';
    for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        const auto& c = p.coefficients[i];
        if (sgn(c.value) == 0 && c.kind != CoefficientKind::sqrt && c.kind != CoefficientKind::neg_sqrt) continue;
        os << "c " << i << ' ' << to_string(c.kind) << ' ' << c.text << '\n';
    }
    if (p.L) os << "L " << *p.L << '\n';
    if (p.gamma) os << "gamma " << *p.gamma << '\n';
    if (p.algorithm) os << "algorithm " << to_string(*p.algorithm) << '\n';
    write_intervals(os, p.intervals);
}

} // namespace aqir

#endif // AQIR_PROBLEM_HPP
