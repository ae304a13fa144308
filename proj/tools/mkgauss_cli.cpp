// mkgauss: Mann-Kendall tau, its exact variance and Gaussian-approximation
// screening from the command line. JSON goes to stdout, CSV to --out files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mkgauss/mkgauss.hpp"

namespace {

using nlohmann::json;

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

/// Values from a CSV with a `value` column, or from a single unnamed column.
std::vector<double> read_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw mkg::SizeError("empty input " + path);
    auto header = mkg::csv::split_line(line);
    std::size_t column = 0;
    bool has_header = true;
    if (auto it = std::find(header.begin(), header.end(), "value"); it != header.end()) {
        column = static_cast<std::size_t>(it - header.begin());
    } else if (header.size() == 1) {
        try {
            std::stod(header[0]);
            has_header = false;
        } catch (const std::exception&) {
        }
    } else {
        throw mkg::ParameterError("input has several columns but none named 'value'");
    }
    std::vector<double> values;
    const auto take = [&](const std::string& l) {
        if (l.empty() || l == "\r") return;
        const auto fields = mkg::csv::split_line(l);
        if (column >= fields.size()) throw mkg::ParameterError("short row: " + l);
        values.push_back(std::stod(fields[column]));
    };
    if (!has_header) take(line);
    while (std::getline(in, line)) take(line);
    return values;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mann-Kendall tau under autocorrelation: exact variance, limits and Gaussianity screening"};
    app.require_subcommand(1);

    // tau
    auto* tau_cmd = app.add_subcommand("tau", "tau, exact variance and normalized tau of a series");
    std::string tau_input, tau_acf = "iid";
    tau_cmd->add_option("--input", tau_input, "CSV with a 'value' column (or one bare column)")->required();
    tau_cmd->add_option("--acf", tau_acf, "iid | ar1:<k> | sma:<q> | arma:<k>,<q>");

    // variance
    auto* var_cmd = app.add_subcommand("variance", "exact finite-n variance of tau");
    std::string var_acf, var_method = "n3";
    std::size_t var_n = 0;
    unsigned var_workers = default_workers();
    var_cmd->add_option("--acf", var_acf, "iid | ar1:<k> | sma:<q> | arma:<k>,<q>")->required();
    var_cmd->add_option("--n", var_n, "series length")->required();
    var_cmd->add_option("--method", var_method, "n3 (stationary) or n4 (naive)")
        ->check(CLI::IsMember({"n3", "n4"}));
    var_cmd->add_option("--workers", var_workers, "threads for the n3 sum");

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "Shapiro-Wilk rejection-rate grid over (n, parameter)");
    std::string grid_kind, grid_n, grid_param, grid_out;
    std::size_t grid_taus = 100, grid_pvals = 200;
    double grid_level = 0.05;
    std::uint64_t grid_seed = 0;
    bool grid_scaling = false;
    unsigned grid_workers = default_workers();
    grid_cmd->add_option("--kind", grid_kind, "ar1 | sma")->required()->check(CLI::IsMember({"ar1", "sma"}));
    grid_cmd->add_option("--n", grid_n, "series lengths, e.g. 5:100:5")->required();
    grid_cmd->add_option("--param", grid_param, "k values (ar1) or q values (sma)")->required();
    grid_cmd->add_option("--taus", grid_taus, "tau values per Shapiro-Wilk test");
    grid_cmd->add_option("--pvals", grid_pvals, "p-values per cell (10000 for full scale)");
    grid_cmd->add_option("--level", grid_level, "significance level");
    grid_cmd->add_option("--seed", grid_seed, "master seed");
    grid_cmd->add_option("--out", grid_out, "output CSV")->required();
    grid_cmd->add_flag("--scaling", grid_scaling, "--param lists k_tot (ar1) or alpha (sma) values");
    grid_cmd->add_option("--workers", grid_workers, "worker threads");

    // hist
    auto* hist_cmd = app.add_subcommand("hist", "histogram of normalized tau");
    std::string hist_process, hist_out;
    std::size_t hist_count = 10000, hist_bins = 60;
    std::uint64_t hist_seed = 0;
    unsigned hist_workers = default_workers();
    hist_cmd->add_option("--process", hist_process, "ar1:<k>,<n> | sma:<q>,<n> | arma:<k>,<q>,<n>")->required();
    hist_cmd->add_option("--count", hist_count, "number of simulated series");
    hist_cmd->add_option("--seed", hist_seed, "seed");
    hist_cmd->add_option("--bins", hist_bins, "bins over [-4, 4]");
    hist_cmd->add_option("--out", hist_out, "output CSV")->required();
    hist_cmd->add_option("--workers", hist_workers, "worker threads");

    // asymptotic
    auto* asym_cmd = app.add_subcommand("asymptotic", "limit variance of tau for upsampled processes");
    std::vector<std::string> asym_specs;
    std::size_t asym_nodes = 64;
    unsigned asym_workers = default_workers();
    asym_cmd->add_option("--spec", asym_specs, "ar1:<k_tot> | sma:<a> | prop1:<n> (repeatable)")->required();
    asym_cmd->add_option("--nodes", asym_nodes, "quadrature nodes per axis");
    asym_cmd->add_option("--workers", asym_workers, "worker threads");

    // prop1
    auto* prop_cmd = app.add_subcommand("prop1", "normalized arcsine sum that equals pi/6");
    std::size_t prop_n = 3;
    prop_cmd->add_option("--n", prop_n, "n >= 3")->required();

    // criterion
    auto* crit_cmd = app.add_subcommand("criterion", "Gaussian-approximation verdict from k_tot or alpha");
    std::string crit_kind;
    double crit_k = 0.0;
    std::size_t crit_n = 0, crit_q = 0, crit_N = 0;
    double crit_threshold = -1.0;
    crit_cmd->add_option("--kind", crit_kind, "ar1 | sma")->required()->check(CLI::IsMember({"ar1", "sma"}));
    crit_cmd->add_option("--k", crit_k, "lag-1 autocorrelation (ar1)");
    crit_cmd->add_option("--n", crit_n, "series length (ar1)");
    crit_cmd->add_option("--q", crit_q, "window size (sma)");
    crit_cmd->add_option("--N", crit_N, "length before averaging (sma)");
    crit_cmd->add_option("--threshold", crit_threshold, "override 1e-8 (ar1) / 0.10 (sma)");

    // casestudy
    auto* case_cmd = app.add_subcommand("casestudy", "screen station series (station_id,river,t,value)");
    std::string case_in, case_out;
    case_cmd->add_option("--input", case_in, "input CSV")->required();
    case_cmd->add_option("--out", case_out, "output CSV")->required();

    // isolines
    auto* iso_cmd = app.add_subcommand("isolines", "(n, parameter) points of constant k_tot or alpha");
    std::string iso_kind, iso_values, iso_n, iso_out;
    iso_cmd->add_option("--kind", iso_kind, "ar1 | sma")->required()->check(CLI::IsMember({"ar1", "sma"}));
    iso_cmd->add_option("--values", iso_values, "k_tot or alpha values")->required();
    iso_cmd->add_option("--n", iso_n, "series lengths")->required();
    iso_cmd->add_option("--out", iso_out, "output CSV")->required();

    auto* ident_cmd = app.add_subcommand("identities", "scan the auxiliary arcsine identities");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tau_cmd) {
            const auto values = read_values(tau_input);
            const auto acf = mkg::parse_acf_spec(tau_acf);
            const auto t = mkg::tau_fast(values);
            const auto v = mkg::var_tau_exact(acf, values.size(), mkg::VarianceMethod::stationary_n3, default_workers());
            auto j = mkg::to_json(t);
            j["variance"] = v.variance;
            j["acf"] = acf.describe();
            j["normalized_tau"] = t.tau / std::sqrt(v.variance);
            print(j);
        } else if (*var_cmd) {
            const auto method = var_method == "n4" ? mkg::VarianceMethod::naive_n4 : mkg::VarianceMethod::stationary_n3;
            print(mkg::to_json(mkg::var_tau_exact(mkg::parse_acf_spec(var_acf), var_n, method, var_workers)));
        } else if (*grid_cmd) {
            mkg::GridConfig cfg;
            cfg.lengths = mkg::parse_count_list(grid_n);
            cfg.params = mkg::parse_real_list(grid_param);
            cfg.params_are_scalings = grid_scaling;
            cfg.taus_per_test = grid_taus;
            cfg.pvalues_per_cell = grid_pvals;
            cfg.level = grid_level;
            cfg.master_seed = grid_seed;
            cfg.workers = grid_workers;
            const auto kind = grid_kind == "ar1" ? mkg::GridKind::ar1 : mkg::GridKind::sma;
            auto out = open_out(grid_out);
            mkg::write_grid_csv(out, mkg::run_grid(kind, cfg));
        } else if (*hist_cmd) {
            const auto h = mkg::tau_histogram(mkg::parse_process_spec(hist_process), hist_count, hist_seed, hist_bins,
                                              -4.0, 4.0, hist_workers);
            auto out = open_out(hist_out);
            mkg::write_histogram_csv(out, h);
        } else if (*asym_cmd) {
            std::vector<mkg::AsymptoticRequest> requests;
            for (const auto& s : asym_specs) requests.push_back(mkg::parse_asymptotic_request(s));
            mkg::QuadratureConfig cfg;
            cfg.subdivisions = asym_nodes;
            cfg.workers = asym_workers;
            print(mkg::report_asymptotics(requests, cfg));
        } else if (*prop_cmd) {
            print(mkg::report_asymptotics({{mkg::AsymptoticRequest::Kind::prop1, 0.0, prop_n}}).at(0));
        } else if (*crit_cmd) {
            mkg::DecisionReport report;
            if (crit_kind == "ar1") {
                if (crit_n == 0) throw mkg::ParameterError("criterion --kind ar1 needs --k and --n");
                report = crit_threshold > 0 ? mkg::decide_ar1(crit_k, crit_n, crit_threshold)
                                            : mkg::decide_ar1(crit_k, crit_n);
            } else {
                if (crit_q == 0 || crit_N == 0) throw mkg::ParameterError("criterion --kind sma needs --q and --N");
                const auto n = mkg::sma_length(crit_q, crit_N);
                report = crit_threshold > 0 ? mkg::decide_sma(crit_q, n, crit_threshold) : mkg::decide_sma(crit_q, n);
            }
            print(mkg::to_json(report));
        } else if (*case_cmd) {
            std::ifstream in(case_in);
            if (!in) throw std::runtime_error("cannot open " + case_in);
            const auto result = mkg::run_case_study(mkg::read_station_csv(in));
            auto out = open_out(case_out);
            mkg::write_case_study_csv(out, result.rows);
            for (const auto& e : result.excluded) std::cerr << "excluded " << e.station_id << ": " << e.message << '\n';
            for (const auto& e : result.errors) std::cerr << "error " << e.station_id << ": " << e.message << '\n';
        } else if (*iso_cmd) {
            const auto kind = iso_kind == "ar1" ? mkg::GridKind::ar1 : mkg::GridKind::sma;
            auto out = open_out(iso_out);
            mkg::write_isoline_csv(out, kind,
                                   mkg::isoline_data(kind, mkg::parse_real_list(iso_values), mkg::parse_count_list(iso_n)));
        } else if (*ident_cmd) {
            const auto report = mkg::lemma_identity_checks();
            print(mkg::to_json(report));
            return report.ok() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
