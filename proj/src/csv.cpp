#include "heatgraph/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace heatgraph::csv {

std::string format(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_row(out, header);
    for (const auto& row : rows) write_row(out, row);
}

void write_two_column(const std::string& path, const std::vector<double>& x,
                      const std::vector<double>& y) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        out << format(x[i]) << ' ' << format(y[i]) << '\n';
    }
}

void write_matrix(std::ostream& out, const std::vector<std::vector<double>>& rows) {
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << format(row[j]);
        }
        out << '\n';
    }
}

}  // namespace heatgraph::csv
