// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <system_error>

#include "basisrisk/kernels.hpp"

namespace basisrisk {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty())
        throw ConfigError(key, "cannot parse '" + v + "' as a number");
    return out;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& v) {
    T out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty())
        throw ConfigError(key, "cannot parse '" + v + "' as a non-negative integer");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto real = [&t](const char* key, auto member) {
            t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
                std::invoke(member, c) = parse_double(k, v);
            };
        };
        auto count = [&t](const char* key, auto member) {
            t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
                std::invoke(member, c) = parse_unsigned<std::size_t>(k, v);
            };
        };
        real("rmax", [](RunConfig& c) -> double& { return c.sim.rmax; });
        real("smax", [](RunConfig& c) -> double& { return c.sim.smax; });
        real("tmax", [](RunConfig& c) -> double& { return c.sim.tmax; });
        real("rmin", [](RunConfig& c) -> double& { return c.sim.rmin; });
        real("sweep_bin_width", [](RunConfig& c) -> double& { return c.sweep_bin_width; });
        real("ratio_bin_width", [](RunConfig& c) -> double& { return c.ratio_bin_width; });
        real("severity_bin_width", [](RunConfig& c) -> double& { return c.severity_bin_width; });
        real("trim", [](RunConfig& c) -> double& { return c.trim; });
        real("regression_max_ratio", [](RunConfig& c) -> double& { return c.regression_max_ratio; });
        count("m", [](RunConfig& c) -> std::size_t& { return c.sim.m; });
        count("n", [](RunConfig& c) -> std::size_t& { return c.sim.n; });
        count("grid_n", [](RunConfig& c) -> std::size_t& { return c.sim.grid_n; });
        count("tests", [](RunConfig& c) -> std::size_t& { return c.tests; });
        count("m_max", [](RunConfig& c) -> std::size_t& { return c.m_max; });
        count("severity_configs", [](RunConfig& c) -> std::size_t& { return c.severity_configs; });
        count("bootstrap_reps", [](RunConfig& c) -> std::size_t& { return c.bootstrap_reps; });
        t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sim.seed = parse_unsigned<std::uint64_t>(k, v);
        };
        t["threads"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sim.threads = parse_unsigned<unsigned>(k, v);
        };
        t["stdev"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "sample") c.sim.divisor = StdevDivisor::sample;
            else if (v == "population") c.sim.divisor = StdevDivisor::population;
            else throw ConfigError(k, "expected 'sample' or 'population', got '" + v + "'");
        };
        t["spatial_threshold"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "redraw") c.spatial_threshold.reset();
            else c.spatial_threshold = parse_double(k, v);
        };
        t["fit_model"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const auto m = stats::parse_decay_model(v);
            if (!m) throw ConfigError(k, "expected shifted_inverse, scaled_inverse or power");
            c.fit_model = *m;
        };
        t["kernel"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v != "auto" && !kernels::parse_isa(v))
                throw ConfigError(k, "expected auto, scalar or avx2");
            c.kernel = v;
        };
        t["experiment"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            static const char* known[] = {"portfolio", "sweep", "spatial", "severity"};
            for (const char* e : known)
                if (v == e) {
                    c.experiment = v;
                    return;
                }
            throw ConfigError(k, "expected portfolio, sweep, spatial or severity");
        };
        t["output_dir"] = [](RunConfig& c, const std::string&, const std::string& v) {
            c.output_dir = v;
        };
        return t;
    }();
    return table;
}

void apply_line(RunConfig& cfg, const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
        throw ConfigError(trim(line), "expected key=value");
    apply_setting(cfg, trim(std::string_view(line).substr(0, eq)),
                  trim(std::string_view(line).substr(eq + 1)));
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    it->second(cfg, key, value);
}

void validate(const RunConfig& cfg) {
    try {
        cfg.sim.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ConfigError(msg.substr(0, colon), trim(msg.substr(colon + 1)));
    }
    if (cfg.tests < 1) throw ConfigError("tests", "must satisfy tests >= 1");
    if (cfg.m_max < 1) throw ConfigError("m_max", "must satisfy m_max >= 1");
    if (!(cfg.sweep_bin_width > 0.0)) throw ConfigError("sweep_bin_width", "must be > 0");
    if (!(cfg.ratio_bin_width > 0.0)) throw ConfigError("ratio_bin_width", "must be > 0");
    if (!(cfg.severity_bin_width > 0.0)) throw ConfigError("severity_bin_width", "must be > 0");
    if (!(cfg.trim > 0.0 && cfg.trim <= 0.25)) throw ConfigError("trim", "must lie in (0, 0.25]");
    if (cfg.bootstrap_reps < 1) throw ConfigError("bootstrap_reps", "must be >= 1");
    if (cfg.spatial_threshold && !(*cfg.spatial_threshold > 0.0))
        throw ConfigError("spatial_threshold", "must be > 0 (or 'redraw')");
    if (!(cfg.regression_max_ratio > 0.0))
        throw ConfigError("regression_max_ratio", "must be > 0");
}

RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                       std::span<const std::string> overrides) {
    RunConfig cfg;
    if (const char* env = std::getenv("BASISRISK_SEED"); env != nullptr && *env != '\0')
        cfg.sim.seed = parse_unsigned<std::uint64_t>("BASISRISK_SEED", env);
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("config", "cannot read file '" + path->string() + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (trim(line).empty()) continue;
            apply_line(cfg, line);
        }
    }
    for (const std::string& o : overrides) apply_line(cfg, o);
    validate(cfg);
    return cfg;
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
    const SimulationConfig& s = cfg.sim;
    return {
        {"rmax", format_number(s.rmax)},
        {"smax", format_number(s.smax)},
        {"tmax", format_number(s.tmax)},
        {"rmin", format_number(s.rmin)},
        {"m", std::to_string(s.m)},
        {"n", std::to_string(s.n)},
        {"seed", std::to_string(s.seed)},
        {"grid_n", std::to_string(s.grid_n)},
        {"stdev", s.divisor == StdevDivisor::sample ? "sample" : "population"},
        {"threads", std::to_string(s.threads)},
        {"experiment", cfg.experiment},
        {"tests", std::to_string(cfg.tests)},
        {"m_max", std::to_string(cfg.m_max)},
        {"severity_configs", std::to_string(cfg.severity_configs)},
        {"sweep_bin_width", format_number(cfg.sweep_bin_width)},
        {"ratio_bin_width", format_number(cfg.ratio_bin_width)},
        {"severity_bin_width", format_number(cfg.severity_bin_width)},
        {"trim", format_number(cfg.trim)},
        {"bootstrap_reps", std::to_string(cfg.bootstrap_reps)},
        {"spatial_threshold",
         cfg.spatial_threshold ? format_number(*cfg.spatial_threshold) : "redraw"},
        {"regression_max_ratio", format_number(cfg.regression_max_ratio)},
        {"fit_model", std::string(stats::to_string(cfg.fit_model))},
        {"kernel", cfg.kernel},
        {"output_dir", cfg.output_dir},
    };
}

}  // namespace basisrisk
