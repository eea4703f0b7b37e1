// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace basisrisk {

inline constexpr std::string_view kToolName = "basisrisk";
inline constexpr std::string_view kToolVersion = "1.0.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Everything needed to rerun a command and check it reproduced its outputs.
/// Contains no timestamps or host details, so reruns write identical bytes.
struct RunManifest {
    std::string tool{kToolName};
    std::string version{kToolVersion};
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;
    /// Subcommand-specific flags, e.g. oracle geometry or fit input.
    std::map<std::string, std::string> arguments;
    /// Output file name -> SHA-256.
    std::map<std::string, std::string> outputs;
};

std::string to_json(const RunManifest& m);
/// Throws std::runtime_error for malformed input.
RunManifest manifest_from_json(std::string_view text);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace basisrisk
