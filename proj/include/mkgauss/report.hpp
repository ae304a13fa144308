#pragma once

/** @file
 * JSON views of results, and the bundled asymptotic report.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkgauss/asymptotics.hpp"
#include "mkgauss/csv.hpp"
#include "mkgauss/gaussian_criteria.hpp"
#include "mkgauss/mann_kendall.hpp"

namespace mkg {

inline nlohmann::json to_json(const TauResult& t) {
    return {{"tau", t.tau}, {"s", t.s}, {"n", t.n}, {"n_pairs", t.n_pairs}};
}

inline nlohmann::json to_json(const VarianceResult& v) {
    return {{"variance", v.variance}, {"n", v.n}, {"acf", v.acf.describe()}, {"method", to_string(v.method)}};
}

inline nlohmann::json to_json(const DecisionReport& d) {
    nlohmann::json j{{"scaling_name", to_string(d.scaling)},
                     {"scaling_value", d.scaling_value},
                     {"threshold", d.threshold},
                     {"verdict", to_string(d.verdict)},
                     {"n", d.n}};
    if (d.scaling == Scaling::k_tot) {
        j["k"] = d.param;
    } else {
        j["q"] = static_cast<std::size_t>(d.param);
        j["N"] = d.source_length;
    }
    return j;
}

inline nlohmann::json to_json(const AsymptoticVariance& a) {
    return {{"value", a.value},
            {"is_lower_bound", a.is_lower_bound},
            {"spec", a.spec.describe()},
            {"estimated_error", a.estimated_error}};
}

inline nlohmann::json to_json(const IdentityReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"evaluated", c.evaluated},
                          {"violations", c.violations},
                          {"max_error", c.max_error},
                          {"witnesses", c.witnesses}});
    }
    return {{"ok", r.ok()}, {"checks", checks}};
}

struct AsymptoticRequest {
    enum class Kind { ar1, sma, prop1 };
    Kind kind = Kind::sma;
    double value = 1.0;  ///< k_tot (ar1) or a (sma)
    std::size_t n = 3;   ///< prop1 size
};

/// "ar1:<k_tot>", "sma:<a>" or "prop1:<n>".
[[nodiscard]] inline AsymptoticRequest parse_asymptotic_request(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParameterError("malformed asymptotic spec '" + text + "'");
    const auto kind = text.substr(0, colon);
    const auto arg = text.substr(colon + 1);
    try {
        if (kind == "ar1") return {AsymptoticRequest::Kind::ar1, std::stod(arg), 0};
        if (kind == "sma") return {AsymptoticRequest::Kind::sma, std::stod(arg), 0};
        if (kind == "prop1") return {AsymptoticRequest::Kind::prop1, 0.0, static_cast<std::size_t>(std::stoul(arg))};
    } catch (const std::logic_error&) {
        throw ParameterError("malformed asymptotic spec '" + text + "'");
    }
    throw ParameterError("unknown asymptotic spec '" + text + "'");
}

/**
 * One entry per request. AR(1) entries carry both the full limit integral and
 * the merged-kernel lower bound; SMA entries carry the quadrature value and
 * the closed form. A failing entry holds an "error" field instead.
 */
[[nodiscard]] inline nlohmann::json report_asymptotics(const std::vector<AsymptoticRequest>& requests,
                                                       const QuadratureConfig& cfg = {}) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& req : requests) {
        nlohmann::json entry;
        try {
            switch (req.kind) {
                case AsymptoticRequest::Kind::ar1: {
                    entry["spec"] = "ar1:" + csv::real(req.value);
                    entry["k_tot"] = req.value;
                    entry["limit_variance"] = to_json(var_limit_quadrature(LimitRhoSpec::ar1_limit(req.value), cfg));
                    entry["lower_bound"] = to_json(ar1_lower_bound(req.value, cfg));
                    break;
                }
                case AsymptoticRequest::Kind::sma: {
                    entry["spec"] = "sma:" + csv::real(req.value);
                    entry["a"] = req.value;
                    entry["limit_variance"] = to_json(var_limit_quadrature(LimitRhoSpec::sma_limit(req.value), cfg));
                    entry["closed_form"] = to_json(sma_limit_value(req.value));
                    break;
                }
                case AsymptoticRequest::Kind::prop1: {
                    entry["spec"] = "prop1:" + std::to_string(req.n);
                    const double v = prop1_sum(req.n);
                    entry["n"] = req.n;
                    entry["value"] = v;
                    entry["pi_over_6"] = std::numbers::pi / 6.0;
                    entry["abs_error"] = std::abs(v - std::numbers::pi / 6.0);
                    break;
                }
            }
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace mkg
