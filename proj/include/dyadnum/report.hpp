#pragma once

// Outcome record for one inequality verification, serializable to CSV.

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/common.hpp"

namespace dyadnum {

struct Sample {
    double param = 0.0;  // swept parameter (lambda, epsilon, p, trial index)
    double lhs = 0.0;
    double rhs = 0.0;
};

struct CheckReport {
    std::string name;
    std::vector<Sample> samples;
    double empirical_constant = 0.0;  // max LHS/RHS (or fitted constant)
    double declared_bound = std::numeric_limits<double>::quiet_NaN();  // NaN: finite-only check
    bool pass = false;
    bool hard = false;  // hard checks force a nonzero exit on failure
    std::string witness;

    CheckReport() = default;
    explicit CheckReport(std::string n) : name(std::move(n)) {}

    void finish() {
        pass = std::isfinite(empirical_constant) &&
               (std::isnan(declared_bound) || empirical_constant <= declared_bound);
    }
};

// Ratio with the conventions of the verification harness: 0/0 counts as
// satisfied (0), positive/0 is infinite.
inline double checked_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

// Scans (param, lhs, rhs) samples into the report and tracks the witness of
// the maximal ratio.
inline void absorb_sample(CheckReport& r, double param, double lhs, double rhs) {
    r.samples.push_back({param, lhs, rhs});
    const double ratio = checked_ratio(lhs, rhs);
    if (ratio > r.empirical_constant) {
        r.empirical_constant = ratio;
        r.witness = "param=" + format_double(param);
    }
}

inline void write_report_csv(const std::string& path, const CheckReport& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "check,param,lhs,rhs,ratio\n";
    for (const auto& s : r.samples)
        out << r.name << ',' << format_double(s.param) << ',' << format_double(s.lhs) << ','
            << format_double(s.rhs) << ',' << format_double(checked_ratio(s.lhs, s.rhs)) << '\n';
}

inline void write_summary_csv(const std::string& path, const std::vector<CheckReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "check,empirical_constant,declared_bound,pass,hard,witness\n";
    for (const auto& r : reports)
        out << r.name << ',' << format_double(r.empirical_constant) << ','
            << format_double(r.declared_bound) << ',' << (r.pass ? 1 : 0) << ','
            << (r.hard ? 1 : 0) << ',' << r.witness << '\n';
}

inline std::string summary_line(const CheckReport& r) {
    std::string line = r.pass ? "[PASS] " : "[FAIL] ";
    line += r.name + "  constant=" + format_double(r.empirical_constant);
    if (!std::isnan(r.declared_bound)) line += "  bound=" + format_double(r.declared_bound);
    if (!r.witness.empty()) line += "  (" + r.witness + ")";
    return line;
}

}  // namespace dyadnum
