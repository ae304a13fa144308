#pragma once

/** @file
 * Gaussian AR(1), SMA(q) and ARMA(1, q-1) generators and their exact
 * autocorrelation functions, both at integer lags and in the renormalized
 * (upsampled) limit on [0, 1].
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mkgauss/errors.hpp"
#include "mkgauss/random.hpp"

namespace mkg {

struct Ar1Params {
    double k = 0.0;     ///< lag-1 autocorrelation, in (0, 1)
    std::size_t n = 0;  ///< series length
};

struct SmaParams {
    std::size_t q = 1;  ///< window order
    std::size_t n = 0;
};

/// ARMA(1, q-1) with every MA coefficient equal to one.
struct ArmaParams {
    double k = 0.0;  ///< AR coefficient, in [0, 1)
    std::size_t q = 1;
    std::size_t n = 0;
};

struct TimeSeries {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string model;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::span<const double> view() const noexcept { return values; }
};

inline void validate(const Ar1Params& p) {
    if (!(p.k > 0.0 && p.k < 1.0)) throw ParameterError("AR(1): k must lie in (0, 1)");
    if (p.n < 1) throw ParameterError("AR(1): n must be at least 1");
}

inline void validate(const SmaParams& p) {
    if (p.q < 1) throw ParameterError("SMA: q must be at least 1");
    if (p.n < 1) throw ParameterError("SMA: n must be at least 1");
}

inline void validate(const ArmaParams& p) {
    if (!(p.k >= 0.0 && p.k < 1.0)) throw ParameterError("ARMA: k must lie in [0, 1)");
    if (p.q < 1) throw ParameterError("ARMA: q must be at least 1");
    if (p.n < 1) throw ParameterError("ARMA: n must be at least 1");
}

namespace detail {

/// Stationary AR(1) path: x_0 ~ N(0,1), x_i = k x_{i-1} + sqrt(1-k^2) e_i.
inline std::vector<double> stationary_ar1(double k, std::size_t length, NormalSource& normal) {
    std::vector<double> x(length);
    if (length == 0) return x;
    const double innovation_sd = std::sqrt(1.0 - k * k);
    x[0] = normal();
    for (std::size_t i = 1; i < length; ++i) {
        x[i] = k * x[i - 1] + innovation_sd * normal();
    }
    return x;
}

/// Sums over every window of `window` consecutive values.
inline std::vector<double> window_sums(std::span<const double> x, std::size_t window) {
    std::vector<double> out(x.size() - window + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < window; ++j) s += x[i + j];
        out[i] = s;
    }
    return out;
}

}  // namespace detail

[[nodiscard]] inline TimeSeries gen_ar1(const Ar1Params& params, std::uint64_t seed) {
    validate(params);
    NormalSource normal(seed);
    return {detail::stationary_ar1(params.k, params.n, normal), seed,
            "ar1(k=" + std::to_string(params.k) + ",n=" + std::to_string(params.n) + ")"};
}

/// Unnormalized: each value is the sum of q unit-variance innovations.
[[nodiscard]] inline TimeSeries gen_sma(const SmaParams& params, std::uint64_t seed) {
    validate(params);
    NormalSource normal(seed);
    std::vector<double> eps(params.n + params.q - 1);
    for (auto& e : eps) e = normal();
    return {detail::window_sums(eps, params.q), seed,
            "sma(q=" + std::to_string(params.q) + ",n=" + std::to_string(params.n) + ")"};
}

/**
 * ARMA(1, q-1) realized as q-window sums of a stationary AR(1) of length
 * n + q - 1, so the output is stationary from its first value.
 *
 * With q = 1 the output is bitwise identical to gen_ar1, and with k = 0 it is
 * bitwise identical to gen_sma, for the same seed.
 */
[[nodiscard]] inline TimeSeries gen_arma(const ArmaParams& params, std::uint64_t seed) {
    validate(params);
    NormalSource normal(seed);
    const auto base = detail::stationary_ar1(params.k, params.n + params.q - 1, normal);
    return {detail::window_sums(base, params.q), seed,
            "arma(k=" + std::to_string(params.k) + ",q=" + std::to_string(params.q) +
                ",n=" + std::to_string(params.n) + ")"};
}

/// Finite-lag autocorrelation function of a stationary process.
class AcfSpec {
public:
    enum class Kind { iid, ar1, sma, arma, tabulated };

    static AcfSpec iid() { return AcfSpec(Kind::iid); }

    static AcfSpec ar1(double k) {
        if (!(k > -1.0 && k < 1.0)) throw ParameterError("ar1 acf: k must lie in (-1, 1)");
        AcfSpec s(Kind::ar1);
        s.k_ = k;
        return s;
    }

    static AcfSpec sma(std::size_t q) {
        if (q < 1) throw ParameterError("sma acf: q must be at least 1");
        AcfSpec s(Kind::sma);
        s.q_ = q;
        return s;
    }

    static AcfSpec arma(double k, std::size_t q) {
        validate(ArmaParams{k, q, 1});
        AcfSpec s(Kind::arma);
        s.k_ = k;
        s.q_ = q;
        return s;
    }

    static AcfSpec tabulated(std::vector<double> values) {
        if (values.empty() || values.front() != 1.0) {
            throw ParameterError("tabulated acf: first value must be exactly 1");
        }
        for (double v : values) {
            if (!(std::abs(v) <= 1.0)) throw ParameterError("tabulated acf: |value| must be <= 1");
        }
        AcfSpec s(Kind::tabulated);
        s.table_ = std::move(values);
        return s;
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] std::size_t q() const noexcept { return q_; }
    [[nodiscard]] const std::vector<double>& table() const noexcept { return table_; }

    /// rho(d); throws RangeError for a tabulated ACF queried past its end.
    [[nodiscard]] double operator()(std::size_t d) const {
        if (d == 0) {
            if (kind_ == Kind::tabulated) return table_.front();
            return 1.0;
        }
        switch (kind_) {
            case Kind::iid:
                return 0.0;
            case Kind::ar1:
                return std::pow(k_, static_cast<double>(d));
            case Kind::sma:
                return d >= q_ ? 0.0 : 1.0 - static_cast<double>(d) / static_cast<double>(q_);
            case Kind::arma:
                return arma_corr(d);
            case Kind::tabulated:
                if (d >= table_.size()) {
                    throw RangeError("tabulated acf: lag " + std::to_string(d) +
                                     " beyond table of size " + std::to_string(table_.size()));
                }
                return table_[d];
        }
        return 0.0;
    }

    /// rho(0), ..., rho(count - 1).
    [[nodiscard]] std::vector<double> lags(std::size_t count) const {
        std::vector<double> out(count);
        for (std::size_t d = 0; d < count; ++d) out[d] = (*this)(d);
        return out;
    }

    [[nodiscard]] std::string describe() const {
        switch (kind_) {
            case Kind::iid: return "iid";
            case Kind::ar1: return "ar1:" + format_real(k_);
            case Kind::sma: return "sma:" + std::to_string(q_);
            case Kind::arma: return "arma:" + format_real(k_) + "," + std::to_string(q_);
            case Kind::tabulated: return "tabulated:" + std::to_string(table_.size());
        }
        return {};
    }

private:
    explicit AcfSpec(Kind kind) : kind_(kind) {}

    static std::string format_real(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    // Closed-form ARMA(1, q-1) correlation, split at d = q - 1.
    [[nodiscard]] double arma_corr(std::size_t d) const {
        const double q = static_cast<double>(q_);
        const double dd = static_cast<double>(d);
        if (k_ == 0.0) {
            // 0^0 = 1 at d = q - 1 gives 1/q, which max(1 - d/q, 0) also yields.
            return std::max(1.0 - dd / q, 0.0);
        }
        const double k = k_;
        const double kq = std::pow(k, q);
        const double denom = q * (1.0 - k * k) - 2.0 * k * (1.0 - kq);
        if (d + 1 < q_) {
            return ((q - dd) * (1.0 - k * k) +
                    k * (std::pow(k, q + dd) + std::pow(k, q - dd) - 2.0 * std::pow(k, dd))) /
                   denom;
        }
        return (1.0 - kq) * (1.0 - kq) * std::pow(k, dd + 1.0 - q) / denom;
    }

    Kind kind_;
    double k_ = 0.0;
    std::size_t q_ = 1;
    std::vector<double> table_;
};

[[nodiscard]] inline double acf_eval(const AcfSpec& spec, std::size_t d) { return spec(d); }

/// Renormalized limit correlation rho(x), x in [0, 1].
class LimitRhoSpec {
public:
    enum class Kind { ar1_limit, sma_limit, arma_limit };

    static LimitRhoSpec ar1_limit(double k_tot) {
        check_k_tot(k_tot);
        LimitRhoSpec s(Kind::ar1_limit);
        s.k_tot_ = k_tot;
        s.log_k_tot_ = std::log(k_tot);
        return s;
    }

    static LimitRhoSpec sma_limit(double a) {
        check_a(a);
        LimitRhoSpec s(Kind::sma_limit);
        s.a_ = a;
        return s;
    }

    static LimitRhoSpec arma_limit(double k_tot, double a) {
        check_k_tot(k_tot);
        check_a(a);
        LimitRhoSpec s(Kind::arma_limit);
        s.k_tot_ = k_tot;
        s.log_k_tot_ = std::log(k_tot);
        s.a_ = a;
        return s;
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double k_tot() const noexcept { return k_tot_; }
    [[nodiscard]] double a() const noexcept { return a_; }

    [[nodiscard]] double operator()(double x) const {
        check_x(x);
        switch (kind_) {
            case Kind::ar1_limit:
                return std::exp(x * log_k_tot_);
            case Kind::sma_limit:
                return std::max(1.0 - x / a_, 0.0);
            case Kind::arma_limit:
                return x <= std::min(a_, 1.0) ? arma_near_branch(x) : arma_far_branch(x);
        }
        return 0.0;
    }

    /// 1 - rho(x), without cancellation for small x.
    [[nodiscard]] double one_minus(double x) const {
        check_x(x);
        switch (kind_) {
            case Kind::ar1_limit:
                return -std::expm1(x * log_k_tot_);
            case Kind::sma_limit:
                return std::min(x / a_, 1.0);
            case Kind::arma_limit:
                if (x <= std::min(a_, 1.0)) {
                    const double half = std::sinh(0.5 * x * log_k_tot_);
                    const double ka = std::exp(a_ * log_k_tot_);
                    return (exp_rem(x, log_k_tot_) - 2.0 * ka * half * half) / exp_rem(a_, log_k_tot_);
                }
                return 1.0 - arma_far_branch(x);
        }
        return 1.0;
    }

    /// ARMA branch valid for 0 <= x <= min(a, 1).
    [[nodiscard]] double arma_near_branch(double x) const {
        const double L = log_k_tot_;
        const double num = 0.5 * exp_rem(a_ + x, L) + 0.5 * exp_rem(a_ - x, L) - exp_rem(x, L);
        return num / exp_rem(a_, L);
    }

    /// ARMA branch valid for a <= x <= 1.
    [[nodiscard]] double arma_far_branch(double x) const {
        const double one_minus_ka = std::expm1(a_ * log_k_tot_);
        return one_minus_ka * one_minus_ka * std::exp((x - a_) * log_k_tot_) / (2.0 * exp_rem(a_, log_k_tot_));
    }

    [[nodiscard]] std::string describe() const {
        char buf[96];
        switch (kind_) {
            case Kind::ar1_limit: std::snprintf(buf, sizeof buf, "ar1:%.17g", k_tot_); break;
            case Kind::sma_limit: std::snprintf(buf, sizeof buf, "sma:%.17g", a_); break;
            case Kind::arma_limit: std::snprintf(buf, sizeof buf, "arma:%.17g,%.17g", k_tot_, a_); break;
        }
        return buf;
    }

private:
    explicit LimitRhoSpec(Kind kind) : kind_(kind) {}

    /// e^(tL) - 1 - tL, by series where the direct form cancels.
    static double exp_rem(double t, double L) {
        const double u = t * L;
        if (std::abs(u) > 0.5) return std::expm1(u) - u;
        double term = u * u / 2.0, sum = term;
        for (int m = 3; m < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++m) {
            term *= u / m;
            sum += term;
        }
        return sum;
    }

    static void check_k_tot(double k_tot) {
        if (!(k_tot > 0.0 && k_tot < 1.0)) throw ParameterError("k_tot must lie in (0, 1)");
    }
    static void check_a(double a) {
        if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("a must be positive and finite");
    }
    static void check_x(double x) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("limit rho: x must lie in [0, 1]");
    }

    Kind kind_;
    double k_tot_ = 0.0;
    double log_k_tot_ = 0.0;
    double a_ = 0.0;
};

[[nodiscard]] inline double limit_rho_eval(const LimitRhoSpec& spec, double x) { return spec(x); }

}  // namespace mkg
