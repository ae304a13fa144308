#pragma once

/** @file
 * Shapiro-Wilk W test following Royston's AS R94 algorithm: approximate
 * coefficients from normal scores plus polynomial corrections for the two
 * extreme ones, and a log-normal (n > 11) or log-log-normal (4 <= n <= 11)
 * approximation to the null distribution of W.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "mkgauss/errors.hpp"
#include "mkgauss/normal.hpp"

namespace mkg {

struct SwResult {
    double w = 1.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

namespace detail::swilk {

// c[0] + c[1] x + ... + c[N-1] x^(N-1)
template <std::size_t N>
double poly(const double (&c)[N], double x) {
    double r = 0.0;
    for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
    return r;
}

inline constexpr double kSmall = 1e-19;

inline constexpr double g[] = {-2.273, 0.459};
inline constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
inline constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
inline constexpr double c3[] = {0.5440, -0.39978, 0.025054, -6.714e-4};
inline constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
inline constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
inline constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

/// Coefficients a_1..a_{n/2} for the largest-minus-smallest order statistics.
inline std::vector<double> coefficients(std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::numbers::sqrt2 / 2.0;
        return a;
    }
    const double an = static_cast<double>(n);
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;

    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
        first_scaled = 2;
        const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                        (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
    } else {
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
    return a;
}

}  // namespace detail::swilk

/**
 * Shapiro-Wilk test of normality, 3 <= n <= 5000.
 *
 * Throws SizeError for n < 3, RangeError for n > 5000 and DegeneracyError
 * when every value is equal.
 */
[[nodiscard]] inline SwResult shapiro_wilk(std::span<const double> sample) {
    using namespace detail::swilk;
    const std::size_t n = sample.size();
    if (n < 3) throw SizeError("shapiro_wilk: need at least 3 values");
    if (n > 5000) throw RangeError("shapiro_wilk: at most 5000 values are supported");

    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range >= kSmall)) throw DegeneracyError("shapiro_wilk: sample has zero range");

    const auto a = coefficients(n);

    // W is the squared correlation between the ordered, range-scaled sample
    // and the antisymmetric coefficient vector.
    std::vector<double> coef(n, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        coef[i] = -a[i];
        coef[n - 1 - i] = a[i];
    }
    double sa = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += coef[i];
        sx += x[i] / range;
    }
    sa /= static_cast<double>(n);
    sx /= static_cast<double>(n);
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double asa = coef[i] - sa;
        const double xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    SwResult result{w, 1.0, n};
    if (n == 3) {
        constexpr double pi6 = 6.0 / std::numbers::pi;
        constexpr double stqr = std::numbers::pi / 3.0;
        result.p_value = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
        return result;
    }

    double y = std::log(w1);
    const double an = static_cast<double>(n);
    double mean = 0.0, sd = 1.0;
    if (n <= 11) {
        const double gamma = poly(g, an);
        if (y >= gamma) {
            result.p_value = kSmall;
            return result;
        }
        y = -std::log(gamma - y);
        mean = poly(c3, an);
        sd = std::exp(poly(c4, an));
    } else {
        const double log_n = std::log(an);
        mean = poly(c5, log_n);
        sd = std::exp(poly(c6, log_n));
    }
    result.p_value = normal_upper_tail((y - mean) / sd);
    return result;
}

/// Fraction of p-values strictly below `level`.
[[nodiscard]] inline double rejection_rate(std::span<const double> p_values, double level) {
    if (p_values.empty()) throw SizeError("rejection_rate: no p-values");
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("rejection_rate: level must lie in (0, 1)");
    const auto rejected = std::count_if(p_values.begin(), p_values.end(), [&](double p) { return p < level; });
    return static_cast<double>(rejected) / static_cast<double>(p_values.size());
}

}  // namespace mkg
