// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace basisrisk {

/// One CSV cell. Reals use shortest round-trip formatting with '.' decimal.
using CsvCell = std::variant<std::int64_t, double, std::string>;

/// Buffers a table and writes it in one go; row order is the insertion order.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<CsvCell> row);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    /// Throws std::runtime_error on I/O failure.
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<CsvCell>> rows_;
};

inline CsvCell cell(std::size_t v) { return static_cast<std::int64_t>(v); }

/// Minimal reader for the tables this tool writes (no quoted separators).
struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Numeric column by name. Throws std::runtime_error for a missing
    /// column or a non-numeric cell.
    std::vector<double> column(const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path);

}  // namespace basisrisk
