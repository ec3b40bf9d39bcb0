#ifndef AQIR_TOOLS_CLI_HPP
#define AQIR_TOOLS_CLI_HPP

// Command implementations for the `aqir` executable. Each command writes to
// the given streams and returns the process exit code, so tests can drive
// them without spawning processes.

#include <aqir/aqir.hpp>
#include <aqir/bench.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace aqir::cli {

enum ExitCode : int { ok = 0, failure = 1, parse_error = 2, precondition = 3 };

struct Flags {
    std::optional<std::int64_t> L;
    std::optional<std::string> algorithm;
    std::optional<std::int64_t> gamma;
    std::optional<std::int64_t> rho_cap;
    std::optional<std::uint64_t> seed;
    bool stats = false;
    unsigned jobs = 1;
};

inline std::string root_label(std::size_t index) {
    return index == UnresolvedSigns::npos ? std::string() : "root " + std::to_string(index + 1) + ": ";
}

/// Maps library exceptions to exit codes; anything else propagates.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return parse_error;
    } catch (const UnresolvedSigns& e) {
        err << "error: " << root_label(e.root_index()) << e.what() << '\n';
        return precondition;
    } catch (const PreconditionViolation& e) {
        err << "error: " << root_label(e.root_index()) << e.what() << '\n';
        return precondition;
    } catch (const NotSquareFree& e) {
        err << "error: " << e.what() << '\n';
        return precondition;
    } catch (const LeadingCoefficientTooSmall& e) {
        err << "error: " << e.what() << '\n';
        return precondition;
    } catch (const ExactViewUnavailable& e) {
        err << "error: " << e.what() << '\n';
        return precondition;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

inline RunConfig run_config(const ProblemFile& problem, const Flags& flags) {
    RunConfig config;
    config.L = flags.L ? *flags.L : problem.L.value_or(config.L);
    config.gamma = flags.gamma ? flags.gamma : problem.gamma;
    config.algorithm = flags.algorithm ? parse_algorithm(*flags.algorithm) : problem.algorithm.value_or(Algorithm::aqir);
    if (flags.rho_cap) {
        if (*flags.rho_cap < 2) throw ParseError("--rho-cap must be at least 2");
        config.rho_cap = Precision(*flags.rho_cap);
    }
    if (config.L < 1) throw ParseError("L must be at least 1");
    if (config.gamma && *config.gamma < 1) throw ParseError("gamma must be at least 1");
    config.jobs = flags.jobs == 0 ? 1 : flags.jobs;
    config.collect_stats = flags.stats;
    return config;
}

/// Decimal digits shown next to the exact endpoints: ceil(L log10 2) + 2.
inline unsigned decimal_digits(std::int64_t L) {
    return static_cast<unsigned>(std::ceil(static_cast<double>(L) * std::log10(2.0))) + 2;
}

inline int cmd_refine(const ProblemFile& problem, const Flags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig config = run_config(problem, flags);
        const Polynomial f = problem.polynomial();
        std::vector<DyadicInterval> intervals = problem.intervals;
        if (intervals.empty()) {
            if (!f.has_exact_view()) {
                throw PreconditionViolation("no intervals given and the polynomial is not exact-rational");
            }
            intervals = isolate_roots(f, config.gamma);
        }
        const RefinementResult result = refine_all(f, intervals, config);
        const unsigned digits = decimal_digits(config.L);
        out << result.intervals.size() << " real roots\n";
        for (std::size_t k = 0; k < result.intervals.size(); ++k) {
            const RootInterval& r = result.intervals[k];
            out << "iv " << r.a << ' ' << r.b << " # [" << to_decimal(r.a.to_rational(), digits, DecimalRounding::down)
                << ", " << to_decimal(r.b.to_rational(), digits, DecimalRounding::up) << ']';
            if (r.exact) out << " exact";
            out << '\n';
        }
        if (flags.stats) {
            out << "stats gamma=" << result.stats.gamma << " L=" << config.L << " algorithm=" << to_string(config.algorithm)
                << '\n';
            for (std::size_t k = 0; k < result.stats.roots.size(); ++k) {
                const RootStats& s = result.stats.roots[k];
                out << "stats root=" << k + 1 << " steps=" << s.steps << " success=" << s.successes
                    << " fail=" << s.fails << " bisect=" << s.bisections << " exact=" << s.exact_roots
                    << " norm_bisect=" << s.norm_bisections << " max_rho=" << s.max_rho.bits() << '\n';
            }
        }
        return int{ok};
    });
}

inline int cmd_isolate(const ProblemFile& problem, const Flags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Polynomial f = problem.polynomial();
        const std::optional<std::int64_t> gamma = flags.gamma ? flags.gamma : problem.gamma;
        ProblemFile result = problem;
        result.intervals = isolate_roots(f, gamma);
        out << "# " << result.intervals.size() << " isolating intervals\n";
        write_problem(out, result);
        return int{ok};
    });
}

inline int cmd_bench(const BenchSpec& spec_in, const Flags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        BenchSpec spec = spec_in;
        if (flags.seed) spec.seed = *flags.seed;
        if (flags.L) spec.L = *flags.L;
        write_csv(out, spec.sweep, run_experiment(spec, flags.jobs == 0 ? 1 : flags.jobs));
        return int{ok};
    });
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Full command line entry point.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified real root refinement by approximate quadratic interval refinement"};
    app.require_subcommand(1);
    Flags flags;
    std::string path;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", path, "Problem file")->required();
        cmd->add_option("--gamma", flags.gamma, "Root bound exponent (default: estimated)");
        cmd->add_option("--jobs", flags.jobs, "Worker threads");
    };
    CLI::App* refine = app.add_subcommand("refine", "Refine isolating intervals to width 2^-L");
    add_common(refine);
    refine->add_option("--L", flags.L, "Target precision in bits after the binary point");
    refine->add_option("--algorithm", flags.algorithm, "aqir or eqir")->check(CLI::IsMember({"aqir", "eqir"}));
    refine->add_option("--rho-cap", flags.rho_cap, "Maximal working precision");
    refine->add_flag("--stats", flags.stats, "Print per-root statistics");

    CLI::App* isolate = app.add_subcommand("isolate", "Isolate the real roots of an exact polynomial");
    add_common(isolate);

    CLI::App* bench = app.add_subcommand("bench", "Run a benchmark sweep and print CSV");
    bench->add_option("spec", path, "Bench spec file")->required();
    bench->add_option("--seed", flags.seed, "Override the seed in the bench file");
    bench->add_option("--L", flags.L, "Override L from the bench file");
    bench->add_option("--jobs", flags.jobs, "Instances run in parallel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return parse_error;
    }

    return guarded(err, [&] {
        const std::string text = read_file(path);
        if (bench->parsed()) {
            std::istringstream in(text);
            return cmd_bench(parse_bench_spec(in), flags, out, err);
        }
        const ProblemFile problem = parse_problem(text);
        if (isolate->parsed()) {
            return cmd_isolate(problem, flags, out, err);
        }
        return cmd_refine(problem, flags, out, err);
    });
}

} // namespace aqir::cli

#endif // AQIR_TOOLS_CLI_HPP
