#pragma once

// Command-line front end: estimate, tsd, congruence, verify.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robmom/distributions.hpp"
#include "robmom/error.hpp"
#include "robmom/estimators.hpp"
#include "robmom/report.hpp"
#include "robmom/verify.hpp"

namespace robmom::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kCapacity = 4, kPropertyFailed = 5 };

/// Reals separated by commas and/or newlines. Blank lines are skipped; a
/// single leading line that does not parse as numbers is treated as a header.
inline std::vector<double> parse_csv_reals(std::istream& in)
{
    std::vector<double> out;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t,") == std::string::npos) continue;
        std::vector<double> row;
        bool ok = true;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            const auto e = cell.find_last_not_of(" \t");
            const std::string tok = cell.substr(b, e - b + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
            if (used != tok.size()) {
                ok = false;
                break;
            }
            row.push_back(v);
        }
        if (!ok) {
            if (first) {
                first = false;
                continue;
            }
            throw ParseError("line " + std::to_string(lineno) + ": not a list of real numbers");
        }
        first = false;
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

inline std::vector<double> read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file '" + path + "'");
    return parse_csv_reals(in);
}

struct RunConfig {
    std::string command;
    std::string input;
    std::string family;
    std::uint64_t n = 100;
    std::uint64_t sample_seed = 0;
    int k = 2;
    double eps0 = 0.0;
    double gamma = 1.0;
    std::string estimator = "trimmed-mean";
    bool standardized = false;
    std::optional<double> den_eps0;
    std::optional<double> den_gamma;
    std::string plan = "exact";
    std::uint64_t budget = kDefaultExactBudget;
    std::uint64_t draws = 1'000'000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string output;
    std::string format = "json";
    // tsd
    std::string form = "eq2";
    // congruence
    std::string param;
    std::size_t grid = kDefaultGridSize;
    // verify
    std::string experiment;
    std::uint64_t N = 1'000'000;
    std::size_t bins = 0;
    std::vector<std::uint64_t> n_list{20, 50, 100};
    double eps = 0.1;
    std::uint64_t replications = 1000;
    int resolution = 100;
    std::uint64_t trials = 10000;
};

namespace detail {

inline PseudoPlan make_plan(const RunConfig& c)
{
    PseudoPlan p;
    if (c.plan == "exact")
        p = PseudoPlan::exact(c.budget);
    else if (c.plan == "monte-carlo")
        p = PseudoPlan::monte_carlo(c.draws, c.seed);
    else
        throw ParseError("unknown plan '" + c.plan + "' (expected exact or monte-carlo)");
    p.workers = c.workers;
    return p;
}

inline LEstimatorSpec make_lest(const std::string& s)
{
    if (s == "trimmed-mean") return LEstimatorSpec::trimmed_mean();
    if (s == "median") return LEstimatorSpec::median();
    throw ParseError("unknown estimator '" + s + "' (expected trimmed-mean or median)");
}

inline std::vector<double> load_data(const RunConfig& c)
{
    const bool has_input = !c.input.empty(), has_family = !c.family.empty();
    if (has_input == has_family) throw ParseError("give exactly one of --input or --family");
    if (has_input) return read_csv_file(c.input);
    return sample(parse_family(c.family), c.n, c.sample_seed);
}

template <class R>
void emit(const RunConfig& c, const R& rec, std::ostream& out)
{
    const ReportFormat fmt = parse_format(c.format);
    if (c.output.empty()) {
        write_report(out, rec, fmt);
        return;
    }
    std::ofstream f(c.output);
    if (!f) throw ParseError("cannot open output file '" + c.output + "'");
    write_report(f, rec, fmt);
}

} // namespace detail

inline int cmd_estimate(const RunConfig& c, std::ostream& out)
{
    const std::vector<double> x = detail::load_data(c);
    const PseudoPlan plan = detail::make_plan(c);
    const LEstimatorSpec lest = detail::make_lest(c.estimator);
    const KernelOrder k(c.k);
    const TrimSpec trim{c.eps0, c.gamma};
    MomentEstimate est;
    if (c.standardized) {
        std::optional<TrimSpec> den;
        if (c.den_eps0 || c.den_gamma) den = TrimSpec{c.den_eps0.value_or(c.eps0), c.den_gamma.value_or(c.gamma)};
        est = whl_standardized_moment(x, k, trim, den, lest, plan);
    } else {
        est = whl_central_moment(x, k, trim, lest, plan);
    }
    detail::emit(c, est, out);
    return kOk;
}

inline int cmd_tsd(const RunConfig& c, std::ostream& out)
{
    const std::vector<double> x = detail::load_data(c);
    MomentEstimate est;
    if (c.form == "eq1")
        est = trimmed_sd_eq1(x, c.eps0);
    else if (c.form == "eq2")
        est = trimmed_sd_eq2(x, c.eps0, c.gamma, detail::make_plan(c));
    else
        throw ParseError("unknown form '" + c.form + "' (expected eq1 or eq2)");
    detail::emit(c, est, out);
    return kOk;
}

inline int cmd_congruence(const RunConfig& c, std::ostream& out)
{
    if (c.family.empty()) throw ParseError("congruence needs --family");
    const Family f = parse_family(c.family);
    const std::string param = c.param.empty() ? std::string(f.param_names().front()) : c.param;
    (void)f.param(param);  // unknown names raise ParseError
    const CongruenceVerdict v = congruence_check(f, param, c.gamma, c.grid);
    detail::emit(c, v, out);
    return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const auto family_or = [&](const char* fallback) { return parse_family(c.family.empty() ? fallback : c.family); };
    bool pass = true;
    if (c.experiment == "pairwise-diff") {
        const ShapeProbe p = pairwise_diff_shape(family_or("normal"), c.N, c.seed, c.bins == 0 ? 50 : c.bins);
        pass = monotonicity_statistic(p) >= 0.9;
        detail::emit(c, p, out);
    } else if (c.experiment == "kernel-dist") {
        if (c.k != 3 && c.k != 4) throw ArgumentError("kernel-dist needs --k 3 or --k 4");
        const ShapeProbe p = kernel_dist_probe(family_or("normal"), c.k, c.N, c.seed, c.bins);
        pass = p.median_over_sigma() <= 0.1 && p.mode_near_zero();
        detail::emit(c, p, out);
    } else if (c.experiment == "variance-dominance") {
        const VarianceComparison v =
            variance_comparison(family_or("normal"), c.n_list, c.eps, c.replications, c.seed, c.workers);
        pass = v.dominates() && v.ratio_non_decreasing();
        detail::emit(c, v, out);
    } else if (c.experiment == "support-bounds") {
        if (c.k < 3 || c.k > 5) throw ArgumentError("support-bounds needs --k in 3..5");
        if (c.resolution < 20) throw ArgumentError("support-bounds needs --resolution >= 20");
        const SupportProbe p = support_bound_probe(c.k, c.resolution);
        pass = p.max_error() <= 1e-2;
        detail::emit(c, p, out);
    } else if (c.experiment == "equivariance") {
        const EquivarianceReport r = equivariance_suite(c.trials, c.seed);
        pass = r.max_dev() <= 1e-9 && r.odd_reflection_exact;
        detail::emit(c, r, out);
    } else {
        throw ParseError("unknown experiment '" + c.experiment
                         + "' (expected pairwise-diff, kernel-dist, variance-dominance, support-bounds, equivariance)");
    }
    if (!pass) {
        err << "verify " << c.experiment << ": property check failed\n";
        return kPropertyFailed;
    }
    return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    RunConfig c;
    CLI::App app{"Robust central and standardized moments from U-statistic pseudo-samples"};
    app.require_subcommand(1);

    const auto add_data = [&](CLI::App* s) {
        s->add_option("--input", c.input, "CSV file of reals");
        s->add_option("--family", c.family, "generate data from a family, e.g. weibull:alpha=1.5");
        s->add_option("--n", c.n, "sample size for --family")->check(CLI::PositiveNumber);
        s->add_option("--sample-seed", c.sample_seed, "seed for --family data");
    };
    const auto add_plan = [&](CLI::App* s) {
        s->add_option("--plan", c.plan, "exact | monte-carlo");
        s->add_option("--budget", c.budget, "exact-mode cap on C(n,k)")->envname("ROBMOM_BUDGET");
        s->add_option("--draws", c.draws, "Monte Carlo draws")->check(CLI::PositiveNumber);
        s->add_option("--seed", c.seed, "Monte Carlo seed");
        s->add_option("--workers", c.workers, "threads (0: all cores)");
    };
    const auto add_output = [&](CLI::App* s) {
        s->add_option("--output", c.output, "write the report here instead of stdout");
        s->add_option("--format", c.format, "json | csv");
    };

    auto* est = app.add_subcommand("estimate", "WHL central or standardized moment");
    add_data(est);
    est->add_option("--k", c.k, "moment order");
    est->add_option("--eps0", c.eps0, "pseudo-sample trimming");
    est->add_option("--gamma", c.gamma, "lower/upper trimming ratio");
    est->add_option("--estimator", c.estimator, "trimmed-mean | median");
    est->add_flag("--standardized", c.standardized, "divide by the WHL variance to the power k/2");
    est->add_option("--den-eps0", c.den_eps0, "denominator trimming");
    est->add_option("--den-gamma", c.den_gamma, "denominator trimming ratio");
    add_plan(est);
    add_output(est);

    auto* tsd = app.add_subcommand("tsd", "trimmed standard deviation");
    add_data(tsd);
    tsd->add_option("--form", c.form, "eq1 (order statistics) | eq2 (pairwise)");
    tsd->add_option("--eps0,--eps", c.eps0, "trimming");
    tsd->add_option("--gamma", c.gamma, "trimming ratio (eq2)");
    add_plan(tsd);
    add_output(tsd);

    auto* con = app.add_subcommand("congruence", "sign analysis of quantile-average derivatives");
    con->add_option("--family", c.family, "family spec")->required();
    con->add_option("--param", c.param, "parameter name (default: the first)");
    con->add_option("--gamma", c.gamma, "trimming ratio");
    con->add_option("--grid", c.grid, "number of eps points");
    add_output(con);

    auto* ver = app.add_subcommand("verify", "Monte Carlo property checks");
    ver->add_option("experiment", c.experiment,
                    "pairwise-diff | kernel-dist | variance-dominance | support-bounds | equivariance")
        ->required();
    ver->add_option("--family", c.family, "family spec");
    ver->add_option("--k", c.k, "kernel order");
    ver->add_option("--N", c.N, "Monte Carlo draws")->check(CLI::PositiveNumber);
    ver->add_option("--seed", c.seed, "seed");
    ver->add_option("--bins", c.bins, "histogram bins (0: default)");
    ver->add_option("--n-list", c.n_list, "sample sizes")->delimiter(',');
    ver->add_option("--eps", c.eps, "trimming for variance-dominance");
    ver->add_option("--replications", c.replications, "replications for variance-dominance");
    ver->add_option("--resolution", c.resolution, "grid resolution for support-bounds");
    ver->add_option("--trials", c.trials, "trials for equivariance");
    ver->add_option("--workers", c.workers, "threads (0: all cores)");
    add_output(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (est->parsed()) return cmd_estimate(c, out);
        if (tsd->parsed()) return cmd_tsd(c, out);
        if (con->parsed()) return cmd_congruence(c, out);
        return cmd_verify(c, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kCapacity;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    }
}

} // namespace robmom::cli
