#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace heatgraph::csv {

/// Fixed float formatting, 17 significant digits: identical inputs give
/// byte-identical output.
std::string format(double value);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

/// Gnuplot-compatible two-column data.
void write_two_column(const std::string& path, const std::vector<double>& x,
                      const std::vector<double>& y);

/// Dense matrix dump, one row per line; debugging aid for operators.
void write_matrix(std::ostream& out, const std::vector<std::vector<double>>& rows);

}  // namespace heatgraph::csv
