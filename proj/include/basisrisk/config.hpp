// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "basisrisk/model.hpp"
#include "basisrisk/stats.hpp"

namespace basisrisk {

/// Bad key, unparsable value or violated constraint. The message names
/// the key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error("config error: key '" + key + "': " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Everything a run needs. Every field is a scalar settable as key=value.
struct RunConfig {
    SimulationConfig sim;
    std::string experiment = "portfolio";
    std::size_t tests = 500;
    std::size_t m_max = 500;
    std::size_t severity_configs = 200;
    double sweep_bin_width = 20.0;
    double ratio_bin_width = 0.05;
    double severity_bin_width = 0.5;
    double trim = 0.1;
    std::size_t bootstrap_reps = 500;
    /// Empty: redraw the threshold per spatial test.
    std::optional<double> spatial_threshold;
    double regression_max_ratio = std::numeric_limits<double>::infinity();
    stats::DecayModel fit_model = stats::DecayModel::shifted_inverse;
    std::string kernel = "auto";
    std::string output_dir = ".";
};

/// Applies one key=value pair. Throws ConfigError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Checks cross-key constraints. Throws ConfigError.
void validate(const RunConfig& cfg);

/// Resolution order, lowest first: built-in defaults, BASISRISK_SEED from the
/// environment, the config file (if given), then overrides ("key=value").
/// The file is line oriented: key=value, '#' starts a comment, blank lines
/// are ignored. Throws ConfigError; an unreadable file is reported under
/// the key "config".
RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                       std::span<const std::string> overrides = {});

/// Every key with its resolved value, formatted so that feeding the pairs
/// back through apply_setting reproduces the configuration exactly.
std::map<std::string, std::string> config_echo(const RunConfig& cfg);

std::string format_number(double v);

}  // namespace basisrisk
