#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hirota/errors.hpp"

namespace hirota {

// Numeric CSV with a fixed header. Values are written with max_digits10 so
// re-runs produce byte-identical files.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InputError("csv: missing column '" + name + "'");
    }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv(const std::string& path, const CsvTable& t) {
    std::ofstream out(path);
    if (!out) throw InputError("csv: cannot open for writing: " + path);
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << (i ? "," : "") << t.header[i];
    out << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << format_double(r[i]);
        out << "\n";
    }
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("csv: cannot open: " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) t.header.push_back(tok);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InputError("csv: " + path + ":" + std::to_string(lineno) +
                                 ": not a number: '" + tok + "'");
            }
        }
        if (row.size() != t.header.size())
            throw InputError("csv: " + path + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(row.size()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace hirota
