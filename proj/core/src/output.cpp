#include "cavsim/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cavsim/errors.hpp"

namespace cavsim {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            if (std::holds_alternative<double>(row[c])) {
                out += format_double(std::get<double>(row[c]));
            } else {
                out += std::get<std::string>(row[c]);
            }
        }
        out += '\n';
    }
    return out;
}

namespace {

nlohmann::json table_to_json(const Table& table) {
    nlohmann::json t;
    t["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell)) {
                r.push_back(std::get<double>(cell));
            } else {
                r.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(r));
    }
    t["rows"] = std::move(rows);
    return t;
}

}  // namespace

std::string to_json(const ResultBundle& bundle) {
    nlohmann::json root;
    root["metadata"] = nlohmann::json::parse(bundle.metadata_json);
    nlohmann::json tables;
    for (const auto& table : bundle.tables) {
        tables[table.name] = table_to_json(table);
    }
    root["tables"] = std::move(tables);
    return root.dump(2);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path temp = target.string() + ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot open output file for writing", temp.string());
        }
        out << content;
        if (!out) {
            throw Error(ErrorCode::Io, "failed while writing output file", temp.string());
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot move output file into place: " + ec.message(),
                    target.string());
    }
}

void write_bundle(const ResultBundle& bundle, const std::string& path, OutputFormat format) {
    if (format == OutputFormat::Json) {
        write_file_atomic(path, to_json(bundle));
        return;
    }
    if (bundle.tables.empty()) {
        throw Error(ErrorCode::Internal, "bundle has no table to write");
    }
    write_file_atomic(path, to_csv(bundle.tables.front()));
    write_file_atomic(path + ".meta.json", bundle.metadata_json);
}

}  // namespace cavsim
