#pragma once

// Output plumbing shared by the CLI: locale-independent CSV emission with
// 17-significant-digit numbers, and the run manifest written alongside every
// output file.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace interference::report {

inline constexpr const char* tool_version = "1.0.0";

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size())
            throw std::logic_error("CsvTable: row width does not match header");
        rows.push_back(std::move(row));
    }

    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            os << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
};

struct RunManifest {
    std::string command_line;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<std::string> methods; // per-point method tags

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool_version"] = tool_version;
        j["command_line"] = command_line;
        j["config"] = config;
        j["seed"] = seed;
        j["timestamp"] = timestamp;
        j["methods"] = methods;
        return j;
    }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << content;
}

inline void write_output_with_manifest(const std::string& path, const CsvTable& table,
                                       const RunManifest& manifest) {
    {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + path);
        table.write(os);
    }
    write_file(path + ".manifest.json", manifest.to_json().dump(2) + "\n");
}

} // namespace interference::report
