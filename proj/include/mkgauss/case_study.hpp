#pragma once

/** @file
 * Station-series screening: Theil-Sen detrending, lag-1 autocorrelation,
 * one-sided upper confidence bound, and the k_tot verdict per series.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mkgauss/csv.hpp"
#include "mkgauss/errors.hpp"
#include "mkgauss/gaussian_criteria.hpp"
#include "mkgauss/normal.hpp"
#include "mkgauss/process_models.hpp"

namespace mkg {

struct StationRecord {
    std::string station_id;
    std::string river;
    TimeSeries series;
};

struct CaseStudyRow {
    std::string station_id;
    std::string river;
    std::size_t n = 0;
    double k_hat = 0.0;
    double u_k_hat = 0.0;
    double u_k_tot = 0.0;
    bool gaussian_ok = false;
};

struct CaseStudyIssue {
    std::string station_id;
    std::string message;
};

struct CaseStudyResult {
    std::vector<CaseStudyRow> rows;
    std::vector<CaseStudyIssue> excluded;  ///< u(k_hat) <= 0: not a positively correlated series
    std::vector<CaseStudyIssue> errors;
};

inline constexpr double kUpperBoundCap = 1.0 - 1e-12;

/// Median of (x_j - x_i) / (j - i) over i < j, unit time spacing.
[[nodiscard]] inline double theil_sen_slope(std::span<const double> x) {
    if (x.size() < 2) throw SizeError("theil_sen_slope: need at least 2 values");
    std::vector<double> slopes;
    slopes.reserve(x.size() * (x.size() - 1) / 2);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            slopes.push_back((x[j] - x[i]) / static_cast<double>(j - i));
    const std::size_t mid = slopes.size() / 2;
    std::nth_element(slopes.begin(), slopes.begin() + mid, slopes.end());
    const double upper = slopes[mid];
    if (slopes.size() % 2 == 1) return upper;
    const double lower = *std::max_element(slopes.begin(), slopes.begin() + mid);
    return 0.5 * (lower + upper);
}

[[nodiscard]] inline double theil_sen_slope(const TimeSeries& s) { return theil_sen_slope(s.view()); }

/// x_i - slope * i.
[[nodiscard]] inline TimeSeries detrend(const TimeSeries& series) {
    const double slope = theil_sen_slope(series);
    TimeSeries out = series;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= slope * static_cast<double>(i);
    out.model = series.model.empty() ? "detrended" : series.model + ",detrended";
    return out;
}

/**
 * Lag-1 autocorrelation with a 1/(n-1) normalizer on the lagged products and
 * 1/n on the variance. The ratio can leave [-1, 1] for very short series; it
 * is returned unmodified.
 */
[[nodiscard]] inline double lag1_autocorr(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw SizeError("lag1_autocorr: need at least 3 values");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double lagged = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        var += (x[i] - mean) * (x[i] - mean);
        if (i + 1 < n) lagged += (x[i] - mean) * (x[i + 1] - mean);
    }
    if (!(var > 0.0)) throw DegeneracyError("lag1_autocorr: zero sample variance");
    return (lagged / static_cast<double>(n - 1)) / (var / static_cast<double>(n));
}

[[nodiscard]] inline double lag1_autocorr(const TimeSeries& s) { return lag1_autocorr(s.view()); }

/**
 * One-sided upper confidence bound k_hat + z_level / sqrt(n), capped just
 * below 1. 1/sqrt(n) is the large-sample standard error of the lag-1
 * autocorrelation estimate.
 */
[[nodiscard]] inline double ci_upper(double k_hat, std::size_t n, double one_sided_level = 0.95) {
    if (!(std::abs(k_hat) < 1.0)) throw ParameterError("ci_upper: |k_hat| must be < 1");
    if (n < 3) throw ParameterError("ci_upper: n must be at least 3");
    if (!(one_sided_level > 0.0 && one_sided_level < 1.0)) {
        throw ParameterError("ci_upper: level must lie in (0, 1)");
    }
    const double z = normal_quantile(one_sided_level);
    return std::min(k_hat + z / std::sqrt(static_cast<double>(n)), kUpperBoundCap);
}

/// Row from an already-estimated k_hat. Requires ci_upper(k_hat, n) > 0.
[[nodiscard]] inline CaseStudyRow case_study_row(std::string station_id, std::string river, std::size_t n,
                                                 double k_hat, double threshold = kDefaultKTotThreshold) {
    const double u = ci_upper(k_hat, n);
    if (!(u > 0.0)) throw DomainError("case_study_row: upper bound is not positive");
    const auto decision = decide_ar1(u, n, threshold);
    return {std::move(station_id), std::move(river), n, k_hat, u, decision.scaling_value,
            decision.verdict == Verdict::gaussian_ok};
}

/// Per-record failures are collected in the result; they never abort the batch.
[[nodiscard]] inline CaseStudyResult run_case_study(const std::vector<StationRecord>& records,
                                                    double threshold = kDefaultKTotThreshold) {
    CaseStudyResult result;
    for (const auto& rec : records) {
        try {
            if (rec.series.size() < 3) throw SizeError("series shorter than 3 values");
            const double k_hat = lag1_autocorr(detrend(rec.series));
            const double u = ci_upper(k_hat, rec.series.size());
            if (!(u > 0.0)) {
                result.excluded.push_back({rec.station_id, "upper bound of k_hat is not positive"});
                continue;
            }
            result.rows.push_back(case_study_row(rec.station_id, rec.river, rec.series.size(), k_hat, threshold));
        } catch (const std::exception& e) {
            result.errors.push_back({rec.station_id, e.what()});
        }
    }
    return result;
}

/**
 * Read `station_id,river,t,value` rows. Records keep the order in which each
 * station first appears; observations are ordered by t within a station.
 */
[[nodiscard]] inline std::vector<StationRecord> read_station_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParameterError("station csv: empty input");
    const auto header = csv::split_line(line);
    if (header != std::vector<std::string>{"station_id", "river", "t", "value"}) {
        throw ParameterError("station csv: expected header station_id,river,t,value");
    }
    struct Pending {
        std::string river;
        std::vector<std::pair<double, double>> obs;
    };
    std::vector<std::string> order;
    std::map<std::string, Pending> by_station;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split_line(line);
        if (f.size() != 4) {
            throw ParameterError("station csv: line " + std::to_string(line_no) + " does not have 4 fields");
        }
        auto [it, inserted] = by_station.try_emplace(f[0]);
        if (inserted) {
            order.push_back(f[0]);
            it->second.river = f[1];
        }
        try {
            it->second.obs.emplace_back(std::stod(f[2]), std::stod(f[3]));
        } catch (const std::logic_error&) {
            throw ParameterError("station csv: line " + std::to_string(line_no) + " has a non-numeric t or value");
        }
    }
    std::vector<StationRecord> records;
    for (const auto& id : order) {
        auto& p = by_station[id];
        std::stable_sort(p.obs.begin(), p.obs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        StationRecord rec{id, p.river, {}};
        for (const auto& o : p.obs) rec.series.values.push_back(o.second);
        rec.series.model = "station:" + id;
        records.push_back(std::move(rec));
    }
    return records;
}

/// k_hat and u(k_hat) at 4 decimals, u(k_tot) with two significant digits.
inline void write_case_study_csv(std::ostream& out, const std::vector<CaseStudyRow>& rows) {
    out << "station_id,river,n,k_hat,u_k_hat,u_k_tot,gaussian_ok\n";
    char buf[64];
    for (const auto& r : rows) {
        out << csv::escape(r.station_id) << ',' << csv::escape(r.river) << ',' << r.n << ',';
        std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.1e,", r.k_hat, r.u_k_hat, r.u_k_tot);
        out << buf << (r.gaussian_ok ? "true" : "false") << '\n';
    }
}

}  // namespace mkg
