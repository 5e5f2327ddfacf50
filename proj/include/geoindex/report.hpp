#pragma once

#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoindex/errors.hpp"

namespace geoindex {

inline constexpr const char* kToolVersion = "geoindex 1.0.0";

// A rectangular block of results plus free-form note lines.
struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// One command's output: provenance header data, tables, and notes. Renders
// deterministically in all formats.
struct RunArtifact {
    std::string command;                                       // e.g. "classify"
    std::vector<std::pair<std::string, std::string>> params;   // ordered key/value
    std::string config_digest;                                 // empty when no config
    std::vector<Table> tables;
    std::vector<std::string> notes;

    void note(std::string s) { notes.push_back(std::move(s)); }
};

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

inline std::string render(const RunArtifact& a, const std::string& format) {
    std::string out;
    auto header_lines = [&](const std::string& prefix) {
        out += prefix + kToolVersion + " | command=" + a.command;
        if (!a.config_digest.empty()) out += " | config=" + a.config_digest;
        out += "\n";
        if (!a.params.empty()) {
            out += prefix + "params:";
            for (const auto& [k, v] : a.params) out += " " + k + "=" + v;
            out += "\n";
        }
    };
    if (format == "json") {
        nlohmann::json j;
        j["tool"] = kToolVersion;
        j["command"] = a.command;
        if (!a.config_digest.empty()) j["config"] = a.config_digest;
        for (const auto& [k, v] : a.params) j["params"][k] = v;
        for (const auto& t : a.tables) {
            nlohmann::json tj;
            tj["title"] = t.title;
            tj["columns"] = t.columns;
            tj["rows"] = t.rows;
            j["tables"].push_back(tj);
        }
        j["notes"] = a.notes;
        return j.dump(2) + "\n";
    }
    if (format == "csv") {
        header_lines("# ");
        for (const auto& t : a.tables) {
            out += "# " + t.title + "\n";
            for (size_t i = 0; i < t.columns.size(); ++i)
                out += (i ? "," : "") + detail::csv_escape(t.columns[i]);
            out += "\n";
            for (const auto& row : t.rows) {
                for (size_t i = 0; i < row.size(); ++i)
                    out += (i ? "," : "") + detail::csv_escape(row[i]);
                out += "\n";
            }
        }
        for (const auto& n : a.notes) out += "# " + n + "\n";
        return out;
    }
    if (format == "md") {
        header_lines("> ");
        for (const auto& t : a.tables) {
            out += "\n### " + t.title + "\n\n|";
            for (const auto& c : t.columns) out += " " + c + " |";
            out += "\n|";
            for (size_t i = 0; i < t.columns.size(); ++i) out += " --- |";
            out += "\n";
            for (const auto& row : t.rows) {
                out += "|";
                for (const auto& c : row) out += " " + c + " |";
                out += "\n";
            }
        }
        if (!a.notes.empty()) out += "\n";
        for (const auto& n : a.notes) out += "- " + n + "\n";
        return out;
    }
    if (format == "text") {
        header_lines("# ");
        for (const auto& t : a.tables) {
            out += "\n" + t.title + "\n";
            std::vector<size_t> w(t.columns.size());
            for (size_t i = 0; i < t.columns.size(); ++i) w[i] = t.columns[i].size();
            for (const auto& row : t.rows)
                for (size_t i = 0; i < row.size() && i < w.size(); ++i)
                    w[i] = std::max(w[i], row[i].size());
            auto line = [&](const std::vector<std::string>& cells) {
                for (size_t i = 0; i < cells.size(); ++i) {
                    out += "  " + cells[i];
                    if (i + 1 < cells.size()) out += std::string(w[i] - cells[i].size() + 1, ' ');
                }
                out += "\n";
            };
            line(t.columns);
            for (const auto& row : t.rows) line(row);
        }
        if (!a.notes.empty()) out += "\n";
        for (const auto& n : a.notes) out += n + "\n";
        return out;
    }
    throw ValidationError("unknown output format \"" + format + "\" (text, json, csv, md)");
}

}  // namespace geoindex
