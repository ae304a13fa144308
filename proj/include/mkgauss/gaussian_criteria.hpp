#pragma once

/** @file
 * Practical rule for when the normalized Mann-Kendall tau may be treated as
 * Gaussian. AR(1) series are scored by k_tot = k^(n-1), moving averages by
 * the relative window size alpha = q / (n + q - 1). At the 5% level the
 * Shapiro-Wilk rejection rate of tau reaches the nominal level around
 * k_tot = 1e-8 and alpha = 0.10; those are the default thresholds.
 */

#include <cmath>
#include <cstddef>
#include <string>

#include "mkgauss/errors.hpp"

namespace mkg {

inline constexpr double kDefaultKTotThreshold = 1e-8;
inline constexpr double kDefaultAlphaThreshold = 0.10;

enum class Scaling { k_tot, alpha };
enum class Verdict { gaussian_ok, not_gaussian };

[[nodiscard]] inline std::string to_string(Scaling s) { return s == Scaling::k_tot ? "k_tot" : "alpha"; }
[[nodiscard]] inline std::string to_string(Verdict v) {
    return v == Verdict::gaussian_ok ? "gaussian_ok" : "not_gaussian";
}

struct DecisionReport {
    Scaling scaling = Scaling::k_tot;
    double scaling_value = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::not_gaussian;
    double param = 0.0;           ///< k (AR) or q (SMA)
    std::size_t n = 0;            ///< series length
    std::size_t source_length = 0;  ///< N = n + q - 1 for SMA, n for AR
};

/// k^(n-1). std::pow degrades gracefully through the subnormal range to 0.
[[nodiscard]] inline double k_tot(double k, std::size_t n) {
    if (!(k > 0.0 && k < 1.0)) throw ParameterError("k_tot: k must lie in (0, 1)");
    if (n < 2) throw ParameterError("k_tot: n must be at least 2");
    return std::pow(k, static_cast<double>(n - 1));
}

/// Relative window size q / (n + q - 1) of an SMA(q) series of length n.
[[nodiscard]] inline double alpha(std::size_t q, std::size_t n) {
    if (q < 1 || n < 1) throw ParameterError("alpha: q and n must be at least 1");
    return static_cast<double>(q) / static_cast<double>(n + q - 1);
}

/// Series length n = N - q + 1 left after averaging N points over windows of q.
[[nodiscard]] inline std::size_t sma_length(std::size_t q, std::size_t source_length) {
    if (q < 1 || source_length < q) throw ParameterError("sma_length: need 1 <= q <= N");
    return source_length - q + 1;
}

/// A value exactly at the threshold counts as Gaussian.
[[nodiscard]] inline DecisionReport decide_ar1(double k, std::size_t n, double threshold = kDefaultKTotThreshold) {
    if (!(threshold > 0.0)) throw ParameterError("decide_ar1: threshold must be positive");
    const double value = k_tot(k, n);
    return {Scaling::k_tot, value, threshold, value <= threshold ? Verdict::gaussian_ok : Verdict::not_gaussian,
            k, n, n};
}

[[nodiscard]] inline DecisionReport decide_sma(std::size_t q, std::size_t n,
                                               double threshold = kDefaultAlphaThreshold) {
    if (!(threshold > 0.0)) throw ParameterError("decide_sma: threshold must be positive");
    const double value = alpha(q, n);
    return {Scaling::alpha, value, threshold, value <= threshold ? Verdict::gaussian_ok : Verdict::not_gaussian,
            static_cast<double>(q), n, n + q - 1};
}

}  // namespace mkg
