#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fqcorr {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Rectangular result table with pre-rendered cells. Rendering at insertion
// time keeps CSV output bit-identical for identical configurations.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json metadata;

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != columns.size())
            throw std::logic_error("row width does not match column count");
        rows.push_back(std::move(cells));
    }

    void write_csv(std::ostream& os) const {
        for (size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << csv_escape(columns[i]);
        os << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
            os << "\n";
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["metadata"] = metadata;
        j["columns"] = columns;
        nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json obj;
            for (size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
            jrows.push_back(std::move(obj));
        }
        j["rows"] = std::move(jrows);
        return j;
    }

    void save_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        write_csv(out);
    }

    void save_json(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out << to_json().dump(2) << "\n";
    }
};

}  // namespace fqcorr
