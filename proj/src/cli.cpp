// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "basisrisk/csv.hpp"
#include "basisrisk/engine.hpp"
#include "basisrisk/experiments.hpp"
#include "basisrisk/kernels.hpp"
#include "basisrisk/stats.hpp"

namespace fs = std::filesystem;

namespace basisrisk {

namespace {

// Writes tables under one directory and records their checksums.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() +
                                         "': " + ec.message());
    }

    void write(const std::string& name, const CsvTable& table) {
        table.write(dir_ / name);
        checksums_[name] = sha256_hex(table.str());
    }

    const std::map<std::string, std::string>& checksums() const { return checksums_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::map<std::string, std::string> checksums_;
};

std::string arg(const std::map<std::string, std::string>& args, const std::string& key) {
    const auto it = args.find(key);
    if (it == args.end() || it->second.empty())
        throw ConfigError(key, "required argument is missing");
    return it->second;
}

double to_double(const std::string& key, std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw ConfigError(key, "cannot parse '" + std::string(s) + "' as a number");
    return v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& s, std::size_t count) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(to_double(key, std::string_view(s).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != count)
        throw ConfigError(key, "expected " + std::to_string(count) + " comma-separated numbers");
    return out;
}

Point to_point(const std::string& key, const std::string& s) {
    const auto v = to_doubles(key, s, 2);
    if (v[0] < 0.0 || v[0] > 1.0 || v[1] < 0.0 || v[1] > 1.0)
        throw ConfigError(key, "coordinates must lie in the unit square");
    return {v[0], v[1]};
}

CsvTable bins_table(const std::vector<stats::BinSummary>& bins) {
    CsvTable t({"bin_low", "bin_high", "mean", "std", "min", "max", "count"});
    for (const auto& b : bins)
        t.add_row({b.bin_low, b.bin_high, b.mean, b.std, b.min, b.max, cell(b.count)});
    return t;
}

const std::vector<std::string> kFitHeader = {"series", "model", "a", "b", "c",
                                             "r_squared", "ssr", "iterations", "converged"};

void add_fit_row(CsvTable& t, const std::string& series, const stats::FitResult& f) {
    t.add_row({series, std::string(stats::to_string(f.model)), f.a, f.b, f.c, f.r_squared, f.ssr,
               cell(f.iterations), std::int64_t{f.converged ? 1 : 0}});
}

const std::vector<std::string> kThresholdHeader = {
    "target", "tau", "low_slope", "low_intercept", "high_slope", "high_intercept", "r2_low",
    "r2_high", "p_value", "sup_f", "n_low", "n_high", "candidates"};

void add_threshold_row(CsvTable& t, const std::string& target, const stats::ThresholdFit& f) {
    t.add_row({target, f.tau, f.low_slope, f.low_intercept, f.high_slope, f.high_intercept,
               f.r2_low, f.r2_high, f.p_value, f.sup_f, cell(f.n_low), cell(f.n_high),
               cell(f.candidates)});
}

CsvCell opt(const std::optional<double>& v) {
    return v ? CsvCell{*v} : CsvCell{std::string("nan")};
}

void run_portfolio_cmd(const RunConfig& cfg, OutputSet& outs, std::ostream& out) {
    const PortfolioRun run = run_portfolio(cfg.sim);
    CsvTable contracts({"contract_id", "exposure_x", "exposure_y", "station_x", "station_y", "d",
                        "threshold", "aabrp", "sigma"});
    for (std::size_t i = 0; i < run.contracts.size(); ++i) {
        const Contract& c = run.contracts[i];
        contracts.add_row({cell(i), c.exposure.x, c.exposure.y, c.station.x, c.station.y,
                           distance(c.exposure, c.station), c.threshold,
                           run.contract_stats[i].aabrp, run.contract_stats[i].sigma});
    }
    CsvTable years({"year", "br_prime"});
    for (std::size_t j = 0; j < run.portfolio.br_prime.size(); ++j)
        years.add_row({cell(j), std::int64_t{run.portfolio.br_prime[j]}});
    CsvTable summary({"statistic", "value"});
    summary.add_row({std::string("m"), cell(cfg.sim.m)});
    summary.add_row({std::string("n"), cell(cfg.sim.n)});
    summary.add_row({std::string("total_premium"), run.portfolio.total_premium});
    summary.add_row({std::string("aabrp_prime"), run.portfolio.aabrp_prime});
    summary.add_row({std::string("sigma_prime"), run.portfolio.sigma_prime});
    outs.write("portfolio_contracts.csv", contracts);
    outs.write("portfolio_years.csv", years);
    outs.write("portfolio_summary.csv", summary);
    out << "aabrp_prime " << format_number(run.portfolio.aabrp_prime) << "\n"
        << "sigma_prime " << format_number(run.portfolio.sigma_prime) << "\n";
}

void run_sweep_cmd(const RunConfig& cfg, OutputSet& outs, std::ostream& out) {
    DiversificationOptions o;
    o.m_max = cfg.m_max;
    o.bin_width = cfg.sweep_bin_width;
    o.fit.model = cfg.fit_model;
    const DiversificationResult r = experiment_diversification(cfg.sim, o);
    CsvTable sweep({"m", "aabrp_prime", "sigma_prime", "variance_prime"});
    for (const SweepRow& row : r.rows)
        sweep.add_row({cell(row.m), row.aabrp_prime, row.sigma_prime, row.variance_prime});
    CsvTable fits(kFitHeader);
    if (r.fit_sigma) add_fit_row(fits, "sigma_prime", *r.fit_sigma);
    if (r.fit_bin_std) add_fit_row(fits, "bin_std_aabrp_prime", *r.fit_bin_std);
    CsvTable summary({"statistic", "value"});
    summary.add_row({std::string("pearson_m_variance_prime"), opt(r.pearson_variance)});
    summary.add_row({std::string("pearson_m_sigma_prime"), opt(r.pearson_sigma)});
    outs.write("sweep.csv", sweep);
    outs.write("sweep_bins.csv", bins_table(r.bins));
    outs.write("sweep_fits.csv", fits);
    outs.write("sweep_summary.csv", summary);
    out << "portfolios " << r.rows.size() << "\n";
    if (r.pearson_variance) out << "pearson_m_variance_prime " << format_number(*r.pearson_variance) << "\n";
    if (r.fit_sigma) out << "fit_sigma_prime_r_squared " << format_number(r.fit_sigma->r_squared) << "\n";
}

void run_spatial_cmd(const RunConfig& cfg, OutputSet& outs, std::ostream& out) {
    SpatialOptions o;
    o.tests = cfg.tests;
    o.ratio_bin_width = cfg.ratio_bin_width;
    o.fixed_threshold = cfg.spatial_threshold;
    o.regression_max_ratio = cfg.regression_max_ratio;
    o.threshold.trim = cfg.trim;
    o.threshold.bootstrap_reps = cfg.bootstrap_reps;
    const SpatialResult r = experiment_spatial(cfg.sim, o);
    CsvTable tests({"test_id", "d", "r", "ratio", "threshold", "aabrp", "sigma"});
    for (const SpatialTestRecord& t : r.records)
        tests.add_row({cell(t.test_id), t.d, t.r, t.ratio, t.threshold, t.aabrp, t.sigma});
    CsvTable thr(kThresholdHeader);
    if (r.threshold_abs_aabrp) add_threshold_row(thr, "abs_aabrp", *r.threshold_abs_aabrp);
    if (r.threshold_aabrp) add_threshold_row(thr, "aabrp", *r.threshold_aabrp);
    if (r.threshold_sigma) add_threshold_row(thr, "sigma", *r.threshold_sigma);
    outs.write("spatial.csv", tests);
    outs.write("spatial_bins_aabrp.csv", bins_table(r.bins_aabrp));
    outs.write("spatial_bins_sigma.csv", bins_table(r.bins_sigma));
    outs.write("spatial_threshold.csv", thr);
    out << "tests " << r.records.size() << "\n";
    if (r.threshold_sigma) out << "tau_sigma " << format_number(r.threshold_sigma->tau) << "\n";
    if (r.threshold_abs_aabrp) out << "tau_abs_aabrp " << format_number(r.threshold_abs_aabrp->tau) << "\n";
}

void run_severity_cmd(const RunConfig& cfg, OutputSet& outs, std::ostream& out) {
    SeverityOptions o;
    o.bin_width = cfg.severity_bin_width;
    o.pooled_configs = cfg.severity_configs;
    const SeverityResult r = experiment_severity(cfg.sim, o);
    auto sev_table = [](const std::vector<stats::BinSummary>& bins) {
        CsvTable t({"bin_low", "bin_high", "mean_br", "std_br", "count"});
        for (const auto& b : bins) t.add_row({b.bin_low, b.bin_high, b.mean, b.std, cell(b.count)});
        return t;
    };
    CsvTable years({"year", "severity", "br"});
    for (std::size_t j = 0; j < r.br.size(); ++j)
        years.add_row({cell(j), r.severity[j], std::int64_t{r.br[j]}});
    CsvTable summary({"statistic", "value"});
    summary.add_row({std::string("threshold"), r.contract.threshold});
    summary.add_row({std::string("pearson_triggered"), opt(r.pearson_triggered)});
    summary.add_row({std::string("pooled_pearson_triggered"), opt(r.pooled_pearson_triggered)});
    summary.add_row({std::string("pooled_years"), cell(r.pooled_years)});
    summary.add_row({std::string("pooled_triggered_years"), cell(r.pooled_triggered_years)});
    summary.add_row({std::string("untriggered_nonzero"), cell(r.untriggered_nonzero)});
    outs.write("severity.csv", sev_table(r.bins));
    outs.write("severity_pooled.csv", sev_table(r.pooled_bins));
    outs.write("severity_years.csv", years);
    outs.write("severity_summary.csv", summary);
    if (r.pooled_pearson_triggered)
        out << "pooled_pearson_triggered " << format_number(*r.pooled_pearson_triggered) << "\n";
}

void run_oracle_cmd(const RunConfig& cfg, const std::map<std::string, std::string>& args,
                    OutputSet& outs, std::ostream& out) {
    Contract c;
    c.exposure = to_point("exposure", arg(args, "exposure"));
    c.station = to_point("station", arg(args, "station"));
    const double r = to_double("r", arg(args, "r"));
    c.threshold = to_double("t", arg(args, "t"));
    if (!(r > 0.0)) throw ConfigError("r", "footprint radius must be > 0");
    if (!(c.threshold > 0.0)) throw ConfigError("t", "threshold must be > 0");
    const OracleResult o = quadrature_oracle(c, r, cfg.sim);
    const std::pair<const char*, double> rows[] = {
        {"ratio", spatial_ratio(c, r)},      {"p_trigger", o.p_trigger},
        {"p_both", o.p_both},                {"p_station_only", o.p_station_only},
        {"p_exposure_only", o.p_exposure_only}, {"p_neither", o.p_neither},
        {"expected_br", o.expected_br},      {"var_br", o.var_br},
    };
    CsvTable t({"statistic", "value"});
    for (const auto& [k, v] : rows) {
        t.add_row({std::string(k), v});
        out << k << " " << format_number(v) << "\n";
    }
    outs.write("oracle.csv", t);
}

void run_fit_cmd(const RunConfig& cfg, const std::map<std::string, std::string>& args,
                 OutputSet& outs, std::ostream& out) {
    const CsvData data = read_csv(arg(args, "input"));
    const std::string xs = arg(args, "x"), ys = arg(args, "y");
    const auto x = data.column(xs), y = data.column(ys);
    std::optional<stats::Params> init;
    if (const auto it = args.find("init"); it != args.end() && !it->second.empty()) {
        const auto v = to_doubles("init", it->second, 3);
        init = stats::Params{v[0], v[1], v[2]};
    }
    stats::FitOptions fo;
    fo.model = cfg.fit_model;
    stats::FitResult f;
    try {
        f = stats::fit_decay(x, y, init, fo);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("input", e.what());
    }
    CsvTable t(kFitHeader);
    add_fit_row(t, ys, f);
    outs.write("fit.csv", t);
    out << "a " << format_number(f.a) << "\nb " << format_number(f.b) << "\nc "
        << format_number(f.c) << "\nr_squared " << format_number(f.r_squared) << "\n";
}

void run_threshold_cmd(const RunConfig& cfg, const std::map<std::string, std::string>& args,
                       OutputSet& outs, std::ostream& out) {
    const CsvData data = read_csv(arg(args, "input"));
    const std::string xs = arg(args, "x"), ys = arg(args, "y");
    const auto x = data.column(xs), y = data.column(ys);
    stats::ThresholdOptions o;
    o.trim = cfg.trim;
    o.bootstrap_reps = cfg.bootstrap_reps;
    o.seed = cfg.sim.seed;
    o.threads = cfg.sim.threads;
    stats::ThresholdFit f;
    try {
        f = stats::threshold_regression(x, y, o);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("input", e.what());
    }
    CsvTable t(kThresholdHeader);
    add_threshold_row(t, ys, f);
    outs.write("threshold.csv", t);
    out << "tau " << format_number(f.tau) << "\np_value " << format_number(f.p_value) << "\n";
}

}  // namespace

RunManifest execute_command(const std::string& command, const RunConfig& cfg,
                            const std::map<std::string, std::string>& arguments,
                            std::ostream& out) {
    if (cfg.kernel != "auto") kernels::select(*kernels::parse_isa(cfg.kernel));
    OutputSet outs(cfg.output_dir);
    RunManifest m;
    m.command = command;
    m.seed = cfg.sim.seed;
    m.config = config_echo(cfg);
    m.arguments = arguments;
    if (command == "portfolio") run_portfolio_cmd(cfg, outs, out);
    else if (command == "sweep") run_sweep_cmd(cfg, outs, out);
    else if (command == "spatial") run_spatial_cmd(cfg, outs, out);
    else if (command == "severity") run_severity_cmd(cfg, outs, out);
    else if (command == "oracle") run_oracle_cmd(cfg, arguments, outs, out);
    else if (command == "fit") run_fit_cmd(cfg, arguments, outs, out);
    else if (command == "threshold") run_threshold_cmd(cfg, arguments, outs, out);
    else throw ConfigError("command", "unknown command '" + command + "'");
    if (const auto it = arguments.find("input"); it != arguments.end())
        m.arguments["input_sha256"] = sha256_file(it->second);
    m.outputs = outs.checksums();
    write_manifest(outs.dir() / "manifest.json", m);
    return m;
}

namespace {

struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    std::optional<std::string> kernel;
    std::optional<std::size_t> m, n;
    std::vector<std::string> set;
};

void add_common(CLI::App* sub, CommonFlags& f, bool simulation) {
    sub->add_option("--config", f.config, "key=value configuration file");
    sub->add_option("--seed", f.seed, "master seed (overrides config and BASISRISK_SEED)");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--set", f.set, "override any config key, as key=value");
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    sub->add_option("--kernel", f.kernel, "batch kernel variant: auto, scalar or avx2");
    if (simulation) {
        sub->add_option("--m", f.m, "contracts per portfolio");
        sub->add_option("--n", f.n, "simulation years");
    }
}

RunConfig resolve(const CommonFlags& f, std::vector<std::string> extra) {
    std::vector<std::string> ov = f.set;
    ov.insert(ov.end(), extra.begin(), extra.end());
    if (f.m) ov.push_back("m=" + std::to_string(*f.m));
    if (f.n) ov.push_back("n=" + std::to_string(*f.n));
    if (f.threads) ov.push_back("threads=" + std::to_string(*f.threads));
    if (f.kernel) ov.push_back("kernel=" + *f.kernel);
    if (f.seed) ov.push_back("seed=" + std::to_string(*f.seed));
    if (f.out) ov.push_back("output_dir=" + *f.out);
    std::optional<fs::path> path;
    if (f.config) path = *f.config;
    return parse_config(path, ov);
}

int replay(const std::string& manifest_path, const std::optional<std::string>& out_dir,
           std::ostream& out, std::ostream& err) {
    const RunManifest m = read_manifest(manifest_path);
    RunConfig cfg;
    for (const auto& [k, v] : m.config) apply_setting(cfg, k, v);
    if (out_dir) cfg.output_dir = *out_dir;
    validate(cfg);
    auto args = m.arguments;
    args.erase("input_sha256");
    if (const auto it = m.arguments.find("input_sha256"); it != m.arguments.end()) {
        if (sha256_file(args.at("input")) != it->second) {
            err << "replay: input '" << args.at("input") << "' differs from the recorded one\n";
            return kExitRuntime;
        }
    }
    std::ostringstream sink;
    const RunManifest again = execute_command(m.command, cfg, args, sink);
    bool same = again.outputs == m.outputs;
    for (const auto& [name, sum] : m.outputs) {
        const auto it = again.outputs.find(name);
        const bool ok = it != again.outputs.end() && it->second == sum;
        out << (ok ? "match    " : "MISMATCH ") << name << "\n";
        same = same && ok;
    }
    if (!same) {
        err << "replay: outputs differ from the manifest\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo basis-risk simulator for parametric insurance portfolios",
                 std::string(kToolName)};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CommonFlags flags;
    std::map<std::string, std::string> cmd_args;
    std::optional<std::size_t> m_max, tests, configs;
    std::string exposure, station, r, t, input, xcol, ycol, init, manifest;
    std::optional<std::string> replay_out;

    auto* run = app.add_subcommand("run", "run the experiment named by the 'experiment' key");
    add_common(run, flags, true);
    auto* portfolio = app.add_subcommand("portfolio", "baseline portfolio of m contracts over n years");
    add_common(portfolio, flags, true);
    auto* sweep = app.add_subcommand("sweep", "diversification sweep over portfolio sizes 1..m_max");
    add_common(sweep, flags, true);
    sweep->add_option("--m-max", m_max, "largest portfolio size");
    auto* spatial = app.add_subcommand("spatial", "spatial-ratio study over independent tests");
    add_common(spatial, flags, true);
    spatial->add_option("--tests", tests, "number of tests");
    auto* severity = app.add_subcommand("severity", "severity versus basis risk study");
    add_common(severity, flags, true);
    severity->add_option("--configs", configs, "pooled contract configurations");
    auto* oracle = app.add_subcommand("oracle", "exact coverage quadrature for one configuration");
    add_common(oracle, flags, false);
    oracle->add_option("--exposure", exposure, "exposure point x,y")->required();
    oracle->add_option("--station", station, "station point x,y")->required();
    oracle->add_option("--r", r, "footprint radius")->required();
    oracle->add_option("--t", t, "trigger threshold")->required();
    auto* fit = app.add_subcommand("fit", "inverse-proportional fit of two CSV columns");
    add_common(fit, flags, false);
    fit->add_option("--input", input, "input CSV")->required();
    fit->add_option("--x", xcol, "x column")->required();
    fit->add_option("--y", ycol, "y column")->required();
    fit->add_option("--init", init, "initial a,b,c");
    auto* thr = app.add_subcommand("threshold", "two-regime threshold regression of two CSV columns");
    add_common(thr, flags, false);
    thr->add_option("--input", input, "input CSV")->required();
    thr->add_option("--x", xcol, "x column")->required();
    thr->add_option("--y", ycol, "y column")->required();
    auto* rep = app.add_subcommand("replay", "rerun a manifest and verify output checksums");
    rep->add_option("--manifest", manifest, "manifest.json to replay")->required();
    rep->add_option("--out", replay_out, "output directory for the rerun");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << kToolName << ": " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "replay") return replay(manifest, replay_out, out, err);

        std::vector<std::string> extra;
        if (m_max) extra.push_back("m_max=" + std::to_string(*m_max));
        if (tests) extra.push_back("tests=" + std::to_string(*tests));
        if (configs) extra.push_back("severity_configs=" + std::to_string(*configs));
        const RunConfig cfg = resolve(flags, extra);
        std::string command = name == "run" ? cfg.experiment : name;
        if (name == "oracle")
            cmd_args = {{"exposure", exposure}, {"station", station}, {"r", r}, {"t", t}};
        if (name == "fit" || name == "threshold") {
            cmd_args = {{"input", input}, {"x", xcol}, {"y", ycol}};
            if (!init.empty()) cmd_args["init"] = init;
        }
        execute_command(command, cfg, cmd_args, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << kToolName << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << kToolName << ": " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace basisrisk
