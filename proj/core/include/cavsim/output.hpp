#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cavsim/config.hpp"

namespace cavsim {

/// Table cell: numeric or short string (verdicts, error notes).
using Cell = std::variant<double, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Run result: named numeric tables plus a metadata document that echoes
/// the exact resolved configuration.
struct ResultBundle {
    std::string metadata_json;
    std::vector<Table> tables;
};

/// 17-significant-digit formatting, round-trippable and locale-free.
std::string format_double(double value);

/// Serialize one table as CSV (header row + %.17g numerics). Tables carry
/// no timestamps, so identical configs produce byte-identical files.
std::string to_csv(const Table& table);

/// Serialize the whole bundle (tables + metadata) as JSON.
std::string to_json(const ResultBundle& bundle);

/// Write the bundle to `path` atomically (temp file + rename). CSV format
/// writes the first table to `path` and the metadata next to it at
/// `path.meta.json`; JSON format writes a single document.
void write_bundle(const ResultBundle& bundle, const std::string& path, OutputFormat format);

/// Atomic small-file write helper.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cavsim
