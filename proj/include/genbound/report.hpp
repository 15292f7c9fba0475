#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "genbound/errors.hpp"

namespace genbound {

using CellValue = std::variant<long long, double, std::string>;

/// One result row: ordered key -> value pairs. All rows of a report share
/// the same key schema.
struct ReportRow {
    std::vector<std::pair<std::string, CellValue>> cells;

    ReportRow& add(const std::string& key, long long v) {
        cells.emplace_back(key, v);
        return *this;
    }
    ReportRow& add(const std::string& key, int v) { return add(key, static_cast<long long>(v)); }
    ReportRow& add(const std::string& key, long v) { return add(key, static_cast<long long>(v)); }
    ReportRow& add(const std::string& key, double v) {
        cells.emplace_back(key, v);
        return *this;
    }
    ReportRow& add(const std::string& key, const std::string& v) {
        cells.emplace_back(key, CellValue(v));
        return *this;
    }
    ReportRow& add(const std::string& key, const char* v) { return add(key, std::string(v)); }
};

struct ExperimentReport {
    std::vector<std::string> header;
    std::vector<ReportRow> rows;

    void append(ReportRow row) {
        if (header.empty() && rows.empty()) {
            for (const auto& [k, v] : row.cells) header.push_back(k);
        } else {
            if (row.cells.size() != header.size())
                throw DomainError("report: row does not match header schema");
            for (std::size_t i = 0; i < header.size(); ++i)
                if (row.cells[i].first != header[i])
                    throw DomainError("report: row key '" + row.cells[i].first +
                                      "' does not match header '" + header[i] + "'");
        }
        rows.push_back(std::move(row));
    }
};

enum class ReportFormat { csv, json };

namespace detail {

// 17 significant digits round-trips doubles exactly; force a decimal marker
// so the value re-parses as a real rather than an integer.
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos && s.find_first_of("ni") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_to_string(const CellValue& v) {
    if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) return format_real(*d);
    return csv_escape(std::get<std::string>(v));
}

}  // namespace detail

inline std::string to_csv(const ExperimentReport& report) {
    std::string out;
    for (std::size_t i = 0; i < report.header.size(); ++i) {
        if (i) out += ',';
        out += detail::csv_escape(report.header[i]);
    }
    out += '\n';
    for (const ReportRow& row : report.rows) {
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            if (i) out += ',';
            out += detail::cell_to_string(row.cells[i].second);
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const ExperimentReport& report) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ReportRow& row : report.rows) {
        nlohmann::ordered_json obj;
        for (const auto& [k, v] : row.cells) {
            if (const auto* i = std::get_if<long long>(&v))
                obj[k] = *i;
            else if (const auto* d = std::get_if<double>(&v))
                obj[k] = *d;
            else
                obj[k] = std::get<std::string>(v);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

/// Write the report to path ("-" for stdout) in the requested format.
inline void emit(const ExperimentReport& report, ReportFormat format, const std::string& path) {
    std::string body = format == ReportFormat::csv ? to_csv(report) : to_json(report);
    if (path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw IoError("failed writing '" + path + "'");
}

// ---- Parsing, used for round-trip checks ----

namespace detail {

inline CellValue parse_cell(const std::string& s) {
    if (!s.empty() && s.find_first_not_of("+-0123456789") == std::string::npos) {
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (errno == 0 && end == s.c_str() + s.size()) return v;
    }
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && !s.empty()) return d;
    return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace detail

inline ExperimentReport parse_csv(const std::string& text) {
    ExperimentReport report;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        std::vector<std::string> fields = detail::split_csv_line(line);
        if (first) {
            report.header = fields;
            first = false;
            continue;
        }
        ReportRow row;
        if (fields.size() != report.header.size()) throw IoError("csv row width mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i)
            row.cells.emplace_back(report.header[i], detail::parse_cell(fields[i]));
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline ExperimentReport parse_json(const std::string& text) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::parse(text);
    ExperimentReport report;
    for (const auto& obj : arr) {
        ReportRow row;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (it->is_number_integer())
                row.add(it.key(), it->template get<long long>());
            else if (it->is_number_float())
                row.add(it.key(), it->template get<double>());
            else
                row.add(it.key(), it->template get<std::string>());
        }
        report.append(std::move(row));
    }
    return report;
}

}  // namespace genbound
