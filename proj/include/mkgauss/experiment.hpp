#pragma once

/** @file
 * Monte-Carlo harness: empirical tau samples, Shapiro-Wilk rejection-rate
 * grids, isolines of constant k_tot / alpha and normalized-tau histograms.
 *
 * Seed fan-out (all through mix_seed):
 *   cell seed      = mix(mix(master, row), column)
 *   replicate seed = mix(cell seed, replicate)
 *   series seed    = mix(replicate seed, tau index)
 * Every p-value is computed from its own seed path, so results are identical
 * for any number of workers.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "mkgauss/csv.hpp"
#include "mkgauss/errors.hpp"
#include "mkgauss/gaussian_criteria.hpp"
#include "mkgauss/mann_kendall.hpp"
#include "mkgauss/process_models.hpp"
#include "mkgauss/random.hpp"
#include "mkgauss/shapiro_wilk.hpp"

namespace mkg {

using ProcessSpec = std::variant<Ar1Params, SmaParams, ArmaParams>;

[[nodiscard]] inline TimeSeries generate(const ProcessSpec& process, std::uint64_t seed) {
    return std::visit(
        [seed](const auto& p) -> TimeSeries {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Ar1Params>) return gen_ar1(p, seed);
            else if constexpr (std::is_same_v<P, SmaParams>) return gen_sma(p, seed);
            else return gen_arma(p, seed);
        },
        process);
}

[[nodiscard]] inline AcfSpec acf_of(const ProcessSpec& process) {
    return std::visit(
        [](const auto& p) -> AcfSpec {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Ar1Params>) return AcfSpec::ar1(p.k);
            else if constexpr (std::is_same_v<P, SmaParams>) return AcfSpec::sma(p.q);
            else return AcfSpec::arma(p.k, p.q);
        },
        process);
}

[[nodiscard]] inline std::size_t length_of(const ProcessSpec& process) {
    return std::visit([](const auto& p) { return p.n; }, process);
}

namespace detail {

/// Run body(0..count-1) on `workers` threads, handing out indices dynamically.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    }
}

}  // namespace detail

/// `count` tau values; value t comes from the series seeded mix_seed(seed, t).
[[nodiscard]] inline std::vector<double> empirical_tau_sample(const ProcessSpec& process, std::size_t count,
                                                              std::uint64_t seed, unsigned workers = 1) {
    if (count < 1) throw ParameterError("empirical_tau_sample: count must be at least 1");
    if (length_of(process) < 2) throw ParameterError("empirical_tau_sample: series length must be at least 2");
    std::vector<double> taus(count);
    detail::parallel_for(count, workers, [&](std::size_t t) {
        taus[t] = tau_fast(generate(process, mix_seed(seed, t))).tau;
    });
    return taus;
}

enum class GridKind { ar1, sma };

[[nodiscard]] inline std::string to_string(GridKind k) { return k == GridKind::ar1 ? "ar1" : "sma"; }

struct GridConfig {
    std::vector<std::size_t> lengths;  ///< series lengths n
    std::vector<double> params;        ///< k (ar1) or q (sma), or scalings when params_are_scalings
    bool params_are_scalings = false;  ///< treat params as k_tot / alpha and solve for k / q per n
    std::size_t taus_per_test = 100;
    std::size_t pvalues_per_cell = 200;
    double level = 0.05;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
};

struct GridCell {
    std::size_t n = 0;
    double param = 0.0;  ///< k or q
    std::uint64_t cell_seed = 0;
    std::string error;   ///< set when the cell cannot be run
};

struct GridRow {
    GridKind kind = GridKind::ar1;
    std::size_t n = 0;
    double param = 0.0;
    double scaling = 0.0;
    double rejection_rate = 0.0;
    std::size_t taus = 0;
    std::size_t pvals = 0;
    std::uint64_t cell_seed = 0;
    std::string error;
};

struct GridResult {
    GridKind kind = GridKind::ar1;
    std::vector<GridRow> rows;
};

inline void validate(const GridConfig& cfg) {
    if (cfg.lengths.empty() || cfg.params.empty()) throw ParameterError("grid: both axes must be nonempty");
    if (cfg.taus_per_test < 3) throw ParameterError("grid: taus_per_test must be at least 3");
    if (cfg.pvalues_per_cell < 1) throw ParameterError("grid: pvalues_per_cell must be at least 1");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ParameterError("grid: level must lie in (0, 1)");
}

/// k with k^(n-1) = k_tot.
[[nodiscard]] inline double ar1_param_for(double k_tot_value, std::size_t n) {
    if (!(k_tot_value > 0.0 && k_tot_value < 1.0)) throw ParameterError("isoline: k_tot must lie in (0, 1)");
    if (n < 2) throw DomainError("isoline: k_tot is undefined for n < 2");
    return std::exp(std::log(k_tot_value) / static_cast<double>(n - 1));
}

/// Nearest integer q with q / (n + q - 1) = alpha.
[[nodiscard]] inline std::size_t sma_param_for(double alpha_value, std::size_t n) {
    if (!(alpha_value > 0.0 && alpha_value < 1.0)) throw ParameterError("isoline: alpha must lie in (0, 1)");
    if (n < 1) throw DomainError("isoline: n must be at least 1");
    const double q = std::round(alpha_value * static_cast<double>(n - 1) / (1.0 - alpha_value));
    if (q < 1.0) throw DomainError("isoline: alpha is unreachable at this n (q < 1)");
    return static_cast<std::size_t>(q);
}

[[nodiscard]] inline double scaling_of(GridKind kind, double param, std::size_t n) {
    return kind == GridKind::ar1 ? k_tot(param, n) : alpha(static_cast<std::size_t>(param), n);
}

[[nodiscard]] inline ProcessSpec process_for(GridKind kind, double param, std::size_t n) {
    if (kind == GridKind::ar1) return Ar1Params{param, n};
    if (!(param >= 1.0) || param != std::floor(param)) throw ParameterError("sma grid: q must be a positive integer");
    return SmaParams{static_cast<std::size_t>(param), n};
}

/// One Shapiro-Wilk p-value on `taus` fresh tau values.
[[nodiscard]] inline double tau_normality_pvalue(const ProcessSpec& process, std::size_t taus,
                                                 std::uint64_t replicate_seed) {
    const auto sample = empirical_tau_sample(process, taus, replicate_seed);
    return shapiro_wilk(sample).p_value;
}

/**
 * Rejection rate for explicit cells. Errors (invalid parameters, degenerate
 * tau samples) are reported per cell and never abort the batch.
 */
[[nodiscard]] inline GridResult run_cells(GridKind kind, const std::vector<GridCell>& cells, const GridConfig& cfg) {
    if (cfg.taus_per_test < 3) throw ParameterError("grid: taus_per_test must be at least 3");
    if (cfg.pvalues_per_cell < 1) throw ParameterError("grid: pvalues_per_cell must be at least 1");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ParameterError("grid: level must lie in (0, 1)");

    const std::size_t reps = cfg.pvalues_per_cell;
    std::vector<std::optional<ProcessSpec>> processes(cells.size());
    std::vector<std::string> errors(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        errors[c] = cells[c].error;
        if (!errors[c].empty()) continue;
        try {
            auto p = process_for(kind, cells[c].param, cells[c].n);
            std::visit([](const auto& v) { validate(v); }, p);
            if (cells[c].n < 2) throw ParameterError("series length must be at least 2");
            processes[c] = p;
        } catch (const std::exception& e) {
            errors[c] = e.what();
        }
    }

    std::vector<double> pvalues(cells.size() * reps, 1.0);
    std::vector<std::string> job_errors(cells.size() * reps);
    detail::parallel_for(cells.size() * reps, cfg.workers, [&](std::size_t job) {
        const std::size_t c = job / reps;
        if (!processes[c]) return;
        try {
            pvalues[job] = tau_normality_pvalue(*processes[c], cfg.taus_per_test, mix_seed(cells[c].cell_seed, job % reps));
        } catch (const std::exception& e) {
            job_errors[job] = e.what();
        }
    });

    GridResult result{kind, {}};
    for (std::size_t c = 0; c < cells.size(); ++c) {
        GridRow row{kind, cells[c].n, cells[c].param, std::nan(""), std::nan(""), cfg.taus_per_test, reps,
                    cells[c].cell_seed, errors[c]};
        if (row.error.empty()) {
            for (std::size_t r = 0; r < reps && row.error.empty(); ++r) {
                if (!job_errors[c * reps + r].empty()) {
                    row.error = "replicate " + std::to_string(r) + ": " + job_errors[c * reps + r];
                }
            }
        }
        if (row.error.empty()) {
            row.scaling = scaling_of(kind, cells[c].param, cells[c].n);
            row.rejection_rate = rejection_rate(std::span(pvalues).subspan(c * reps, reps), cfg.level);
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

/// Cartesian grid lengths x params, rows in (length, param) order.
[[nodiscard]] inline GridResult run_grid(GridKind kind, const GridConfig& cfg) {
    validate(cfg);
    std::vector<GridCell> cells;
    for (std::size_t r = 0; r < cfg.lengths.size(); ++r) {
        for (std::size_t c = 0; c < cfg.params.size(); ++c) {
            GridCell cell{cfg.lengths[r], cfg.params[c], mix_seed(mix_seed(cfg.master_seed, r), c), {}};
            if (cfg.params_are_scalings) {
                try {
                    cell.param = kind == GridKind::ar1 ? ar1_param_for(cfg.params[c], cell.n)
                                                       : static_cast<double>(sma_param_for(cfg.params[c], cell.n));
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            }
            cells.push_back(std::move(cell));
        }
    }
    return run_cells(kind, cells, cfg);
}

inline void write_grid_csv(std::ostream& out, const GridResult& grid) {
    out << "kind,n,param,scaling,rejection_rate,taus,pvals,cell_seed,error\n";
    for (const auto& r : grid.rows) {
        out << to_string(r.kind) << ',' << r.n << ',' << csv::real(r.param) << ',';
        if (r.error.empty()) out << csv::real(r.scaling) << ',' << csv::real(r.rejection_rate);
        else out << ',';
        out << ',' << r.taus << ',' << r.pvals << ',' << r.cell_seed << ',' << csv::escape(r.error) << '\n';
    }
}

struct IsolinePoint {
    double scaling = 0.0;
    std::size_t n = 0;
    double param = 0.0;  ///< k, or integer q
    std::string error;   ///< unsatisfiable cell marker
};

/// Points (n, param) along curves of constant k_tot (ar1) or alpha (sma).
[[nodiscard]] inline std::vector<IsolinePoint> isoline_data(GridKind kind, const std::vector<double>& scalings,
                                                            const std::vector<std::size_t>& lengths) {
    std::vector<IsolinePoint> out;
    for (double s : scalings) {
        for (std::size_t n : lengths) {
            IsolinePoint p{s, n, std::nan(""), {}};
            try {
                p.param = kind == GridKind::ar1 ? ar1_param_for(s, n) : static_cast<double>(sma_param_for(s, n));
            } catch (const std::exception& e) {
                p.error = e.what();
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

inline void write_isoline_csv(std::ostream& out, GridKind kind, const std::vector<IsolinePoint>& points) {
    out << "kind,scaling,n,param,error\n";
    for (const auto& p : points) {
        out << to_string(kind) << ',' << csv::real(p.scaling) << ',' << p.n << ',';
        if (p.error.empty()) out << csv::real(p.param);
        out << ',' << csv::escape(p.error) << '\n';
    }
}

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    std::size_t count = 0;
};

struct Histogram {
    std::vector<HistogramBin> bins;
    std::size_t total = 0;  ///< number of samples, including any outside the binned range
};

/**
 * Histogram of tau / sqrt(Var(tau)) with the exact variance of the process,
 * 60 uniform bins over [-4, 4] by default.
 */
[[nodiscard]] inline Histogram tau_histogram(const ProcessSpec& process, std::size_t count, std::uint64_t seed,
                                             std::size_t bins = 60, double lo = -4.0, double hi = 4.0,
                                             unsigned workers = 1) {
    if (bins < 1 || !(hi > lo)) throw ParameterError("histogram: need at least one bin and hi > lo");
    const double sd = std::sqrt(var_tau_exact(acf_of(process), length_of(process), VarianceMethod::stationary_n3,
                                              workers).variance);
    const auto taus = empirical_tau_sample(process, count, seed, workers);
    Histogram h;
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        h.bins.push_back({lo + width * static_cast<double>(b), lo + width * static_cast<double>(b + 1), 0});
    }
    for (double t : taus) {
        const double z = t / sd;
        if (z >= lo && z <= hi) {
            auto b = static_cast<std::size_t>((z - lo) / width);
            h.bins[std::min(b, bins - 1)].count++;
        }
    }
    h.total = taus.size();
    return h;
}

inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "bin_left,bin_right,count,total\n";
    for (const auto& b : h.bins) {
        out << csv::real(b.left) << ',' << csv::real(b.right) << ',' << b.count << ',' << h.total << '\n';
    }
}

}  // namespace mkg
