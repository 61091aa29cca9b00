#pragma once

// CSV import/export for fields and tabulated kernels.
//
// Field files: header "cell,value", one row per cell in cell-id order
// (row-major: id = x for n=1, id = y*N + x for n=2).
// Kernel files: header "x_cell,y_cell,value", one row per ordered pair;
// missing pairs default to zero and the diagonal is ignored on application.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/kernel.hpp"

namespace dyadnum {

inline void write_field_csv(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "cell,value\n";
    for (std::int64_t i = 0; i < f.size(); ++i)
        out << i << ',' << format_double(f[i]) << '\n';
}

inline ScalarField read_field_csv(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> values(static_cast<std::size_t>(g.cell_count()), 0.0);
    std::vector<bool> seen(values.size(), false);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("field csv: malformed row '" + line + "'");
        const std::int64_t cell = std::stoll(line.substr(0, comma));
        if (cell < 0 || cell >= g.cell_count())
            throw std::runtime_error("field csv: cell index out of range");
        values[static_cast<std::size_t>(cell)] = std::stod(line.substr(comma + 1));
        seen[static_cast<std::size_t>(cell)] = true;
    }
    for (bool s : seen)
        if (!s) throw std::runtime_error("field csv: missing cells");
    return ScalarField(g, std::move(values));
}

inline void write_kernel_csv(const std::string& path, const Kernel& k, const Grid& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x_cell,y_cell,value\n";
    for (std::int64_t x = 0; x < g.cell_count(); ++x)
        for (std::int64_t y = 0; y < g.cell_count(); ++y) {
            if (x == y) continue;
            out << x << ',' << y << ','
                << format_double(k(g.cell_center(x), g.cell_center(y))) << '\n';
        }
}

inline Kernel read_kernel_csv(const Grid& g, const std::string& path, double size_constant) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    const std::int64_t n = g.cell_count();
    std::vector<double> matrix(static_cast<std::size_t>(n * n), 0.0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string item;
        std::int64_t xy[2];
        for (int i = 0; i < 2; ++i) {
            if (!std::getline(row, item, ','))
                throw std::runtime_error("kernel csv: malformed row '" + line + "'");
            xy[i] = std::stoll(item);
            if (xy[i] < 0 || xy[i] >= n)
                throw std::runtime_error("kernel csv: cell index out of range");
        }
        if (!std::getline(row, item))
            throw std::runtime_error("kernel csv: malformed row '" + line + "'");
        matrix[static_cast<std::size_t>(xy[0] * n + xy[1])] = std::stod(item);
    }
    return tabulated_kernel(g, std::move(matrix), size_constant);
}

}  // namespace dyadnum
