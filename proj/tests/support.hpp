#pragma once

#include <cmath>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mkgauss/csv.hpp"

namespace test_support {

inline std::string data_path(const std::string& name) { return std::string(MKGAUSS_TEST_DATA_DIR) + "/" + name; }

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

/// Sample autocorrelation at lag d with the usual 1/n normalization.
inline double sample_corr(std::span<const double> x, std::size_t d) {
    const double m = mean(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) den += (x[i] - m) * (x[i] - m);
    for (std::size_t i = 0; i + d < x.size(); ++i) num += (x[i] - m) * (x[i + d] - m);
    return num / den;
}

/// Rows of a CSV file as string fields, header excluded.
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(mkg::csv::split_line(line));
    }
    return rows;
}

struct ShapiroReference {
    std::string id;
    double w = 0.0;
    double p = 0.0;
    std::vector<double> values;
};

inline std::vector<ShapiroReference> shapiro_reference() {
    std::vector<ShapiroReference> out;
    for (const auto& row : read_csv(data_path("shapiro_reference.csv"))) {
        ShapiroReference r{row.at(0), std::stod(row.at(2)), std::stod(row.at(3)), {}};
        std::istringstream values(row.at(4));
        for (double v; values >> v;) r.values.push_back(v);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace test_support
