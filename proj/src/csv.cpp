#include "spde/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spde/errors.hpp"

namespace spde::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot open " + path + " for writing");
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw ConfigError("out", "write failed for " + path);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

Table read_numeric(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("traj", "cannot open " + path);

    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        if (cells.size() != table.header.size())
            throw ConfigError("traj", path + ": line " + std::to_string(line_no) + " has " +
                                          std::to_string(cells.size()) + " columns, expected " +
                                          std::to_string(table.header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const char* begin = cells[i].c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0' || !std::isfinite(v))
                throw ConfigError("traj", path + ": non-numeric cell '" + cells[i] +
                                              "' at line " + std::to_string(line_no));
            row[i] = v;
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw ConfigError("traj", path + ": empty file");
    return table;
}

}  // namespace spde::csv
