#pragma once

/** @file
 * Mann-Kendall tau and its exact variance for stationary Gaussian series.
 *
 * For jointly Gaussian differences, E[sgn(U) sgn(V)] = (2/pi) asin(corr(U, V)),
 * so the variance of tau is a finite sum of arcsines of correlations between
 * pairwise differences. Those correlations only depend on the ACF.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mkgauss/errors.hpp"
#include "mkgauss/process_models.hpp"

namespace mkg {

struct TauResult {
    double tau = 0.0;
    std::int64_t s = 0;  ///< sum of sgn(x_j - x_i) over i < j
    std::size_t n = 0;
    std::int64_t n_pairs = 0;
};

enum class VarianceMethod { naive_n4, stationary_n3 };

struct VarianceResult {
    double variance = 0.0;
    std::size_t n = 0;
    AcfSpec acf = AcfSpec::iid();
    VarianceMethod method = VarianceMethod::stationary_n3;
};

/// Tolerance beyond which a correlation outside [-1, 1] is an error, not rounding.
inline constexpr double kCorrelationClampTolerance = 1e-9;

[[nodiscard]] inline std::string to_string(VarianceMethod m) {
    return m == VarianceMethod::naive_n4 ? "naive_n4" : "stationary_n3";
}

namespace detail {

inline TauResult make_tau_result(std::int64_t s, std::size_t n) {
    const auto pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    return {static_cast<double>(s) / static_cast<double>(pairs), s, n, pairs};
}

inline void check_tau_size(std::size_t n) {
    if (n < 2) throw SizeError("tau: series must have at least 2 values");
}

/// Clamp a correlation into [-1, 1], failing loudly past the tolerance.
inline double clamp_correlation(double c) {
    if (!std::isfinite(c) || std::abs(c) > 1.0 + kCorrelationClampTolerance) {
        throw NumericError("correlation " + std::to_string(c) + " outside [-1, 1]");
    }
    return std::clamp(c, -1.0, 1.0);
}

// corr(X_j - X_i, X_l - X_k) from a precomputed lag table; i < j and k < l.
inline double diff_corr(std::span<const double> rho, std::size_t i, std::size_t j, std::size_t k,
                        std::size_t l) {
    const auto lag = [&](std::size_t a, std::size_t b) { return rho[a > b ? a - b : b - a]; };
    const double num = lag(l, j) - lag(l, i) - lag(k, j) + lag(k, i);
    const double den = 2.0 * std::sqrt(1.0 - lag(j, i)) * std::sqrt(1.0 - lag(l, k));
    return clamp_correlation(num / den);
}

inline std::vector<double> checked_lag_table(const AcfSpec& acf, std::size_t n) {
    auto rho = acf.lags(n);
    for (std::size_t d = 1; d < rho.size(); ++d) {
        if (!(rho[d] < 1.0)) {
            throw DegeneracyError("acf equals 1 at positive lag " + std::to_string(d) +
                                  "; pairwise differences are degenerate");
        }
    }
    return rho;
}

}  // namespace detail

/// O(n^2) definition. Throws SizeError for n < 2 and TieError on exact ties.
[[nodiscard]] inline TauResult tau(std::span<const double> x) {
    detail::check_tau_size(x.size());
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (x[j] > x[i]) {
                ++s;
            } else if (x[j] < x[i]) {
                --s;
            } else {
                throw TieError("tau: tied values at positions " + std::to_string(i) + " and " +
                               std::to_string(j));
            }
        }
    }
    return detail::make_tau_result(s, x.size());
}

[[nodiscard]] inline TauResult tau(const TimeSeries& series) { return tau(series.view()); }

/**
 * O(n log n) tau: s = C(n,2) - 2 * (number of inversions), with inversions
 * counted during a bottom-up merge sort. Same contract as tau().
 */
[[nodiscard]] inline TauResult tau_fast(std::span<const double> x) {
    detail::check_tau_size(x.size());
    const std::size_t n = x.size();
    std::vector<double> a(x.begin(), x.end());
    std::vector<double> buf(n);
    std::int64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, out = lo;
            while (i < mid && j < hi) {
                if (a[j] < a[i]) {
                    inversions += static_cast<std::int64_t>(mid - i);
                    buf[out++] = a[j++];
                } else {
                    buf[out++] = a[i++];
                }
            }
            while (i < mid) buf[out++] = a[i++];
            while (j < hi) buf[out++] = a[j++];
        }
        a.swap(buf);
    }
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) {
        throw TieError("tau: series contains tied values");
    }
    const auto pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    return detail::make_tau_result(pairs - 2 * inversions, n);
}

[[nodiscard]] inline TauResult tau_fast(const TimeSeries& series) { return tau_fast(series.view()); }

/// corr(X_j - X_i, X_l - X_k) for a stationary process with the given ACF.
[[nodiscard]] inline double pair_diff_corr(const AcfSpec& acf, std::size_t i, std::size_t j,
                                           std::size_t k, std::size_t l) {
    if (!(i < j && k < l)) throw ParameterError("pair_diff_corr: requires i < j and k < l");
    const std::size_t span_end = std::max({i, j, k, l});
    const auto rho = detail::checked_lag_table(acf, span_end + 1);
    return detail::diff_corr(rho, i, j, k, l);
}

namespace detail {

inline double var_sum_naive(std::span<const double> rho, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l)
                    total += std::asin(diff_corr(rho, i, j, k, l));
    return total;
}

// Contribution of outer index `outer` to the stationary sum. Every quadruple
// (i, j, k, l) is shifted so that min(i, k) = 0; the shift can take
// n - max(j, l) values, which becomes the multiplicity weight.
//   outer < n:       i = 0, j = outer (1..n-1), k and l free.
//   outer - n + 1:   k = 0, i = outer - n + 1 (1..n-2), j and l free.
inline double var_sum_outer(std::span<const double> rho, std::size_t n, std::size_t outer) {
    double partial = 0.0;
    if (outer < n) {
        const std::size_t j = outer;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = k + 1; l < n; ++l) {
                const auto weight = static_cast<double>(n - std::max(j, l));
                partial += weight * std::asin(diff_corr(rho, 0, j, k, l));
            }
        }
    } else {
        const std::size_t i = outer - n + 1;
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t l = 1; l < n; ++l) {
                const auto weight = static_cast<double>(n - std::max(j, l));
                partial += weight * std::asin(diff_corr(rho, i, j, 0, l));
            }
        }
    }
    return partial;
}

inline double var_sum_stationary(std::span<const double> rho, std::size_t n, unsigned workers) {
    // outer indices: 1..n-1 (i = 0 family) then n..2n-3 (k = 0 family)
    const std::size_t first = 1;
    const std::size_t last = n >= 3 ? 2 * n - 3 : n - 1;
    std::vector<double> partials(last + 1, 0.0);
    const auto run = [&](unsigned w, unsigned stride) {
        for (std::size_t o = first + w; o <= last; o += stride) partials[o] = var_sum_outer(rho, n, o);
    };
    workers = std::max(1u, workers);
    if (workers == 1) {
        run(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    }
    double total = 0.0;
    for (std::size_t o = first; o <= last; ++o) total += partials[o];
    return total;
}

}  // namespace detail

/**
 * Exact finite-n variance of tau for a stationary Gaussian process.
 *
 * Sums (2/pi) asin(corr) over all ordered pairs-of-pairs, including the
 * diagonal and pairs sharing an index. stationary_n3 groups quadruples by
 * their index differences; its result does not depend on `workers`.
 */
[[nodiscard]] inline VarianceResult var_tau_exact(const AcfSpec& acf, std::size_t n,
                                                  VarianceMethod method = VarianceMethod::stationary_n3,
                                                  unsigned workers = 1) {
    if (n < 2) throw SizeError("var_tau_exact: n must be at least 2");
    const auto rho = detail::checked_lag_table(acf, n);
    const double sum = method == VarianceMethod::naive_n4 ? detail::var_sum_naive(rho, n)
                                                          : detail::var_sum_stationary(rho, n, workers);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    double variance = (2.0 / std::numbers::pi) * sum / (pairs * pairs);
    if (variance > 1.0 && variance < 1.0 + 1e-12) variance = 1.0;
    if (!(variance > 0.0 && variance <= 1.0)) {
        throw NumericError("var_tau_exact: variance " + std::to_string(variance) + " outside (0, 1]");
    }
    return {variance, n, acf, method};
}

/// tau / sqrt(Var(tau)) with the variance implied by `acf`.
[[nodiscard]] inline double normalized_tau(std::span<const double> x, const AcfSpec& acf) {
    const auto t = tau_fast(x);
    return t.tau / std::sqrt(var_tau_exact(acf, x.size()).variance);
}

[[nodiscard]] inline double normalized_tau(const TimeSeries& series, const AcfSpec& acf) {
    return normalized_tau(series.view(), acf);
}

}  // namespace mkg
