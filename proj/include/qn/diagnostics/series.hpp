#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qn/core/errors.hpp"

namespace qn {

// Column-labelled time series. Kept deliberately dumb: a header and rows of
// doubles, so files round-trip byte for byte.
class DiagnosticSeries {
public:
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return int(i);
        return -1;
    }

    std::vector<double> column(const std::string& name) const {
        const int ci = column_index(name);
        if (ci < 0) throw config_error("DiagnosticSeries: no column '" + name + "'");
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[ci]);
        return out;
    }

    std::string to_csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        char buf[32];
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", r[i]);
                os << buf << (i + 1 < r.size() ? "," : "\n");
            }
        }
        return os.str();
    }

    static DiagnosticSeries from_csv(const std::string& text) {
        DiagnosticSeries s;
        std::istringstream is(text);
        std::string line;
        if (!std::getline(is, line)) throw config_error("empty CSV");
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) s.columns.push_back(cell);
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::istringstream rs(line);
            std::vector<double> row;
            while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
            if (row.size() != s.columns.size())
                throw config_error("CSV row width does not match the header");
            s.rows.push_back(std::move(row));
        }
        return s;
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw config_error("cannot open '" + path + "' for writing");
        f << to_csv();
    }

    static DiagnosticSeries load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw config_error("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return from_csv(ss.str());
    }
};

} // namespace qn
