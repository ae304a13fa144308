#pragma once

/** @file
 * Text forms used on the command line:
 *   acf      iid | ar1:<k> | sma:<q> | arma:<k>,<q>
 *   process  ar1:<k>,<n> | sma:<q>,<n> | arma:<k>,<q>,<n>
 *   limit    ar1:<k_tot> | sma:<a> | arma:<k_tot>,<a>
 *   lists    comma separated values, or start:stop:step for integers
 */

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mkgauss/errors.hpp"
#include "mkgauss/experiment.hpp"
#include "mkgauss/process_models.hpp"

namespace mkg {

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline double parse_real(std::string_view s) {
    try {
        std::size_t used = 0;
        const std::string str(s);
        const double v = std::stod(str, &used);
        if (used != str.size()) throw ParameterError("");
        return v;
    } catch (const std::exception&) {
        throw ParameterError("not a number: '" + std::string(s) + "'");
    }
}

inline std::size_t parse_count(std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParameterError("not a non-negative integer: '" + std::string(s) + "'");
    }
    return v;
}

inline std::pair<std::string_view, std::vector<std::string_view>> split_kind(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return {text, {}};
    return {text.substr(0, colon), split(text.substr(colon + 1), ',')};
}

inline void expect_args(std::string_view text, const std::vector<std::string_view>& args, std::size_t count) {
    if (args.size() != count) throw ParameterError("malformed spec '" + std::string(text) + "'");
}

}  // namespace detail

[[nodiscard]] inline AcfSpec parse_acf_spec(std::string_view text) {
    const auto [kind, args] = detail::split_kind(text);
    if (kind == "iid" && args.empty()) return AcfSpec::iid();
    if (kind == "ar1") {
        detail::expect_args(text, args, 1);
        return AcfSpec::ar1(detail::parse_real(args[0]));
    }
    if (kind == "sma") {
        detail::expect_args(text, args, 1);
        return AcfSpec::sma(detail::parse_count(args[0]));
    }
    if (kind == "arma") {
        detail::expect_args(text, args, 2);
        return AcfSpec::arma(detail::parse_real(args[0]), detail::parse_count(args[1]));
    }
    throw ParameterError("unknown acf spec '" + std::string(text) + "'");
}

[[nodiscard]] inline ProcessSpec parse_process_spec(std::string_view text) {
    const auto [kind, args] = detail::split_kind(text);
    if (kind == "ar1") {
        detail::expect_args(text, args, 2);
        Ar1Params p{detail::parse_real(args[0]), detail::parse_count(args[1])};
        validate(p);
        return p;
    }
    if (kind == "sma") {
        detail::expect_args(text, args, 2);
        SmaParams p{detail::parse_count(args[0]), detail::parse_count(args[1])};
        validate(p);
        return p;
    }
    if (kind == "arma") {
        detail::expect_args(text, args, 3);
        ArmaParams p{detail::parse_real(args[0]), detail::parse_count(args[1]), detail::parse_count(args[2])};
        validate(p);
        return p;
    }
    throw ParameterError("unknown process spec '" + std::string(text) + "'");
}

[[nodiscard]] inline LimitRhoSpec parse_limit_spec(std::string_view text) {
    const auto [kind, args] = detail::split_kind(text);
    if (kind == "ar1") {
        detail::expect_args(text, args, 1);
        return LimitRhoSpec::ar1_limit(detail::parse_real(args[0]));
    }
    if (kind == "sma") {
        detail::expect_args(text, args, 1);
        return LimitRhoSpec::sma_limit(detail::parse_real(args[0]));
    }
    if (kind == "arma") {
        detail::expect_args(text, args, 2);
        return LimitRhoSpec::arma_limit(detail::parse_real(args[0]), detail::parse_real(args[1]));
    }
    throw ParameterError("unknown limit spec '" + std::string(text) + "'");
}

[[nodiscard]] inline std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    for (auto part : detail::split(text, ',')) out.push_back(detail::parse_real(part));
    return out;
}

/// "5,10,20" or "5:100:5" (inclusive stop).
[[nodiscard]] inline std::vector<std::size_t> parse_count_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (auto part : detail::split(text, ',')) {
        const auto range = detail::split(part, ':');
        if (range.size() == 1) {
            out.push_back(detail::parse_count(part));
        } else if (range.size() == 3) {
            const auto start = detail::parse_count(range[0]);
            const auto stop = detail::parse_count(range[1]);
            const auto step = detail::parse_count(range[2]);
            if (step == 0) throw ParameterError("range step must be positive");
            for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
        } else {
            throw ParameterError("malformed range '" + std::string(part) + "'");
        }
    }
    return out;
}

}  // namespace mkg
