#pragma once

#include <string>
#include <vector>

namespace spde::csv {

// 17 significant digits: doubles survive a write/read round trip.
std::string format(double v);

void write_file(const std::string& path, const std::string& header,
                const std::vector<std::vector<std::string>>& rows);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t n_cols() const { return header.size(); }
};

// Strict numeric CSV: one header row, comma separation, every body cell a
// finite decimal, all rows equally long.  Violations raise ConfigError.
Table read_numeric(const std::string& path);

}  // namespace spde::csv
