#pragma once

/** @file
 * Large-n variance of tau for upsampled processes.
 *
 * With rho the renormalized limit correlation, the variance of tau converges
 * to (16/pi) * Int_0^1 (1-z) Int_0^z Int_0^y f(x,y,z) dx dy dz, where f sums
 * the arcsines of the three ways of pairing four ordered time points. The
 * triple integral is evaluated by an open tensor rule on the unit cube mapped
 * onto the ordered simplex, (x, y, z) = (z v u, z v, z), Jacobian z^2 v.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mkgauss/errors.hpp"
#include "mkgauss/mann_kendall.hpp"
#include "mkgauss/process_models.hpp"

namespace mkg {

enum class QuadratureRule { midpoint_tensor, adaptive };

struct QuadratureConfig {
    std::size_t subdivisions = 64;  ///< nodes per axis
    QuadratureRule rule = QuadratureRule::midpoint_tensor;
    double abs_tol = 1e-3;
    unsigned workers = 1;
    std::size_t max_subdivisions = 256;  ///< adaptive refinement stops here
};

struct AsymptoticVariance {
    double value = 0.0;
    bool is_lower_bound = false;
    LimitRhoSpec spec = LimitRhoSpec::sma_limit(1.0);
    double estimated_error = 0.0;
};

inline void validate(const QuadratureConfig& cfg) {
    if (cfg.subdivisions < 8) throw ParameterError("quadrature: at least 8 subdivisions per axis");
    if (!(cfg.abs_tol > 0.0)) throw ParameterError("quadrature: abs_tol must be positive");
}

/**
 * Limit correlation of the differences (X_x - X_w, X_z - X_y).
 * Throws DegeneracyError when rho(|x-w|) or rho(|z-y|) equals 1.
 */
[[nodiscard]] inline double r_kernel(const LimitRhoSpec& spec, double w, double x, double y, double z) {
    const double gap1 = spec.one_minus(std::abs(x - w));
    const double gap2 = spec.one_minus(std::abs(z - y));
    if (!(gap1 > 0.0 && gap2 > 0.0)) {
        throw DegeneracyError("r_kernel: singular denominator (rho = 1 at a pair gap)");
    }
    // rho(a) - rho(b) written as (1 - rho(b)) - (1 - rho(a)) keeps small gaps accurate
    const double num = spec.one_minus(std::abs(z - w)) + spec.one_minus(std::abs(y - x)) -
                       spec.one_minus(std::abs(z - x)) - spec.one_minus(std::abs(y - w));
    return detail::clamp_correlation(num / (2.0 * std::sqrt(gap1) * std::sqrt(gap2)));
}

namespace detail {

/// Pairwise summation for order-independent rounding behaviour.
inline double pairwise_sum(const double* v, std::size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += v[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

/**
 * Midpoint rule for Int_0^1 (1-z) Int_0^z Int_0^y g(x,y,z) over m^3 nodes.
 * Slices in z are independent and may run on several threads; the result
 * does not depend on the thread count.
 */
inline double simplex_midpoint(const std::function<double(double, double, double)>& g, std::size_t m,
                               unsigned workers) {
    std::vector<double> slices(m, 0.0);
    const double h = 1.0 / static_cast<double>(m);
    const auto slice = [&](std::size_t iz) {
        const double z = (static_cast<double>(iz) + 0.5) * h;
        std::vector<double> row(m);
        std::vector<double> plane(m);
        for (std::size_t iv = 0; iv < m; ++iv) {
            const double v = (static_cast<double>(iv) + 0.5) * h;
            const double y = z * v;
            for (std::size_t iu = 0; iu < m; ++iu) {
                const double x = y * (static_cast<double>(iu) + 0.5) * h;
                row[iu] = g(x, y, z);
            }
            plane[iv] = v * pairwise_sum(row.data(), m);
        }
        slices[iz] = (1.0 - z) * z * z * pairwise_sum(plane.data(), m);
    };
    workers = std::max(1u, workers);
    if (workers == 1) {
        for (std::size_t iz = 0; iz < m; ++iz) slice(iz);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t iz = w; iz < m; iz += workers) slice(iz);
            });
        }
    }
    return pairwise_sum(slices.data(), m) * h * h * h;
}

inline AsymptoticVariance integrate(const std::function<double(double, double, double)>& g, double factor,
                                    const LimitRhoSpec& spec, bool lower_bound, const QuadratureConfig& cfg) {
    validate(cfg);
    std::size_t m = cfg.subdivisions;
    double coarse = factor * simplex_midpoint(g, m, cfg.workers);
    double fine = factor * simplex_midpoint(g, 2 * m, cfg.workers);
    if (cfg.rule == QuadratureRule::adaptive) {
        while (std::abs(fine - coarse) >= cfg.abs_tol && 4 * m <= cfg.max_subdivisions) {
            m *= 2;
            coarse = fine;
            fine = factor * simplex_midpoint(g, 2 * m, cfg.workers);
        }
    }
    const double error = std::abs(fine - coarse);
    if (!(error < cfg.abs_tol)) {
        throw QuadratureError("quadrature did not reach abs_tol " + std::to_string(cfg.abs_tol) +
                              " (last change " + std::to_string(error) + ")");
    }
    const double value = cfg.rule == QuadratureRule::adaptive ? fine : coarse;
    return {std::max(value, 0.0), lower_bound, spec, error};
}

}  // namespace detail

/**
 * Limit variance of tau by quadrature. For the midpoint rule the value is
 * taken at cfg.subdivisions nodes per axis and estimated_error is its
 * distance to the doubled-resolution result.
 */
[[nodiscard]] inline AsymptoticVariance var_limit_quadrature(const LimitRhoSpec& spec,
                                                             const QuadratureConfig& cfg = {}) {
    const auto f = [&spec](double x, double y, double z) {
        return std::asin(r_kernel(spec, 0.0, x, y, z)) + std::asin(r_kernel(spec, 0.0, y, x, z)) +
               std::asin(r_kernel(spec, 0.0, z, x, y));
    };
    return detail::integrate(f, 16.0 / std::numbers::pi, spec, false, cfg);
}

/// Positive lower bound on the AR(1) limit variance (pairs of kernels merged).
[[nodiscard]] inline AsymptoticVariance ar1_lower_bound(double k_tot, const QuadratureConfig& cfg = {}) {
    const auto spec = LimitRhoSpec::ar1_limit(k_tot);
    const double L = std::log(k_tot);
    const auto g = [L](double x, double y, double z) {
        const double kx = std::exp(x * L);
        const double kzy = std::exp((z - y) * L);
        const double one_minus_kx = -std::expm1(x * L);
        const double one_minus_kz = -std::expm1(z * L);
        const double one_minus_kyx = -std::expm1((y - x) * L);
        const double arg = std::sqrt(one_minus_kyx) *
                           (kzy * (1.0 - std::sqrt(one_minus_kx) * std::sqrt(one_minus_kz)) + kx) /
                           (4.0 * std::sqrt(one_minus_kz));
        return std::asin(detail::clamp_correlation(arg));
    };
    return detail::integrate(g, 32.0 / std::numbers::pi, spec, true, cfg);
}

/// 17/72 exactly for a >= 1; the lower bound (17/72) a^3 (4 - 3a) for 0 < a < 1.
[[nodiscard]] inline AsymptoticVariance sma_limit_value(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("sma_limit_value: a must be positive");
    constexpr double limit = 17.0 / 72.0;
    const auto spec = LimitRhoSpec::sma_limit(a);
    if (a >= 1.0) return {limit, false, spec, 0.0};
    return {limit * a * a * a * (4.0 - 3.0 * a), true, spec, 0.0};
}

/**
 * C(n+1,4)^-1 * sum over 0 <= i < j < k < l <= n of asin((k-j) / sqrt((k-i)(l-j))).
 * Evaluated through the shift reduction sum_l (n+1-l) sum_{0<j<k<l}, O(n^3).
 * Equals pi/6 for every n >= 3.
 */
[[nodiscard]] inline double prop1_sum(std::size_t n) {
    if (n < 3) throw DomainError("prop1_sum: n must be at least 3");
    double total = 0.0;
    for (std::size_t l = 3; l <= n; ++l) {
        double inner = 0.0;
        for (std::size_t j = 1; j < l; ++j) {
            for (std::size_t k = j + 1; k < l; ++k) {
                inner += std::asin(static_cast<double>(k - j) /
                                   (std::sqrt(static_cast<double>(k)) * std::sqrt(static_cast<double>(l - j))));
            }
        }
        total += static_cast<double>(n + 1 - l) * inner;
    }
    const double N = static_cast<double>(n + 1);
    const double choose4 = N * (N - 1) * (N - 2) * (N - 3) / 24.0;
    return total / choose4;
}

struct IdentityCheck {
    std::string name;
    std::size_t evaluated = 0;
    std::size_t violations = 0;
    double max_error = 0.0;
    std::vector<std::string> witnesses;  ///< first few failing inputs
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;

    [[nodiscard]] bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.violations == 0; });
    }
};

namespace detail {

inline void record(IdentityCheck& check, double error, double tol, const std::string& witness) {
    ++check.evaluated;
    check.max_error = std::max(check.max_error, error);
    if (!(error <= tol)) {
        ++check.violations;
        if (check.witnesses.size() < 10) check.witnesses.push_back(witness);
    }
}

}  // namespace detail

/// L^n(j, k) = asin((k - j) / (sqrt(k) sqrt(n - j))).
[[nodiscard]] inline double l_kernel(std::size_t n, std::size_t j, std::size_t k) {
    return std::asin(static_cast<double>(k - j) /
                     (std::sqrt(static_cast<double>(k)) * std::sqrt(static_cast<double>(n - j))));
}

/// Left-hand side of the AR positivity inequality.
[[nodiscard]] inline double positivity_expression(double x, double y, double rho) {
    const auto p = [rho](double e) { return std::pow(rho, e); };
    return std::sqrt(1.0 - p(1.0 - y + x)) * (p(1.0 - y) - rho - p(y - x) + p(x)) +
           std::sqrt(1.0 - p(y)) * (-p(1.0 - y) - rho + p(y - x) + p(x));
}

/**
 * Numerical scan of the three auxiliary identities behind the limit results:
 *  - asin a + asin b + asin c = pi/2  <=>  a^2 + b^2 + c^2 + 2abc = 1 on [0,1]^3
 *    (10^4 constrained samples each way);
 *  - L^n(j,k) + L^n(j,n-k+j) + L^n(n-k,n-k+j) = pi/2 for 0 < j < k < n <= 50;
 *  - the AR positivity expression >= -1e-12 on a 100 x 100 x 9 (x, y, rho) grid.
 */
[[nodiscard]] inline IdentityReport lemma_identity_checks(std::uint64_t seed = 20240101) {
    IdentityReport report;
    constexpr double half_pi = std::numbers::pi / 2.0;
    char buf[160];

    {
        IdentityCheck forward; forward.name = "arcsin_triple: constraint implies pi/2";
        IdentityCheck backward; backward.name = "arcsin_triple: pi/2 implies constraint";
        std::mt19937_64 engine(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        while (forward.evaluated < 10000) {
            const double b = unit(engine), c = unit(engine);
            const double a = std::sqrt(1.0 - b * b) * std::sqrt(1.0 - c * c) - b * c;
            if (a < 0.0) continue;
            std::snprintf(buf, sizeof buf, "a=%.17g b=%.17g c=%.17g", a, b, c);
            detail::record(forward, std::abs(std::asin(a) + std::asin(b) + std::asin(c) - half_pi), 1e-12, buf);
        }
        while (backward.evaluated < 10000) {
            const double b = unit(engine), c = unit(engine);
            const double rest = half_pi - std::asin(b) - std::asin(c);
            if (rest < 0.0) continue;
            const double a = std::sin(rest);
            std::snprintf(buf, sizeof buf, "a=%.17g b=%.17g c=%.17g", a, b, c);
            detail::record(backward, std::abs(a * a + b * b + c * c + 2.0 * a * b * c - 1.0), 1e-12, buf);
        }
        report.checks.push_back(std::move(forward));
        report.checks.push_back(std::move(backward));
    }

    {
        IdentityCheck combi; combi.name = "L^n combinatorial identity";
        for (std::size_t n = 3; n <= 50; ++n) {
            for (std::size_t j = 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    const double sum = l_kernel(n, j, k) + l_kernel(n, j, n - k + j) + l_kernel(n, n - k, n - k + j);
                    std::snprintf(buf, sizeof buf, "n=%zu j=%zu k=%zu", n, j, k);
                    detail::record(combi, std::abs(sum - half_pi), 1e-12, buf);
                }
            }
        }
        report.checks.push_back(std::move(combi));
    }

    {
        IdentityCheck positivity; positivity.name = "AR positivity expression";
        for (int ir = 1; ir <= 9; ++ir) {
            const double rho = 0.1 * ir;
            for (int ix = 0; ix < 100; ++ix) {
                for (int iy = 0; iy < 100; ++iy) {
                    const double x = ix / 99.0;
                    const double y = x + (1.0 - x) * iy / 99.0;
                    const double value = positivity_expression(x, y, rho);
                    std::snprintf(buf, sizeof buf, "x=%.17g y=%.17g rho=%.17g value=%.3g", x, y, rho, value);
                    detail::record(positivity, std::max(0.0, -value), 1e-12, buf);
                }
            }
        }
        report.checks.push_back(std::move(positivity));
    }
    return report;
}

}  // namespace mkg
