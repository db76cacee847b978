#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "semirv/asym.hpp"
#include "semirv/errors.hpp"
#include "semirv/json_io.hpp"
#include "semirv/numeric.hpp"
#include "semirv/risk.hpp"
#include "semirv/study.hpp"
#include "semirv/version.hpp"

namespace {

using nlohmann::json;

std::optional<std::uint64_t> env_seed_override() {
    const char* env = std::getenv("SEMIRV_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    return std::strtoull(env, nullptr, 10);
}

// "a:b:n" -> n geometrically spaced points from a to b inclusive.
std::vector<double> parse_grid_spec(const std::string& spec) {
    double a = 0.0, b = 0.0;
    int n = 0;
    std::istringstream ss(spec);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) {
        throw semirv::DomainError("--x-grid expects a:b:n");
    }
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
    if (!(a > 0.0) || !(b > a) || n < 2) {
        throw semirv::DomainError("--x-grid expects 0 < a < b and n >= 2");
    }
    std::vector<double> grid(n);
    const double factor = std::pow(b / a, 1.0 / (n - 1));
    double x = a;
    for (int i = 0; i < n; ++i) {
        grid[i] = x;
        x *= factor;
    }
    grid.back() = b;
    return grid;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw semirv::DomainError("cannot open file: " + path);
    return json::parse(in);
}

int cmd_predict(const std::string& dists_path, const std::string& grid_spec,
                std::ostream& out) {
    const json j = load_json_file(dists_path);
    const json& arr = j.is_array() ? j : j.at("dists");
    std::vector<semirv::SemiRVDistribution> ds;
    for (const auto& item : arr) ds.push_back(semirv::dist_from_json(item));
    auto pred = semirv::classify_and_predict(ds);
    const auto grid = parse_grid_spec(grid_spec);

    out << "x,predicted,case_tag,a_constant\r\n";
    for (double x : grid) {
        out << semirv::format_double(x) << ','
            << semirv::format_double(std::exp(pred.log_eval(x))) << ','
            << semirv::predictor_case_name(pred.case_tag) << ','
            << semirv::format_double(pred.a_constant) << "\r\n";
    }
    return 0;
}

int cmd_ruin(const std::string& config_path, const std::string& grid_spec,
             std::uint64_t samples, std::uint64_t seed, int horizon,
             std::ostream& out) {
    const auto cfg = semirv::risk_config_from_json(load_json_file(config_path));
    if (horizon <= 0) horizon = cfg.n;
    const auto grid = parse_grid_spec(grid_spec);

    auto cell = [](double v) { return semirv::format_double(v); };
    out << "x,horizon,psi_mc,ci_low,ci_high,sn_mc,predict_thm31,predict_thm32,"
           "predict_theoremA,ratio_sn_thm31,ratio_sn_thm32,ratio_sn_theoremA\r\n";
    for (double x : grid) {
        const auto est = semirv::ruin_mc(cfg, x, horizon, samples, seed);
        std::string thm31, thm32, thma, r31, r32, ra;
        try {
            const double p = std::exp(semirv::predict_thm31(cfg, x).value.log_value);
            thm31 = cell(p);
            if (p > 0.0) r31 = cell(est.sn_point / p);
        } catch (const std::exception&) {
        }
        for (auto which : {semirv::Thm32Case::I, semirv::Thm32Case::II,
                           semirv::Thm32Case::III, semirv::Thm32Case::IV}) {
            try {
                const double p = std::exp(semirv::predict_thm32(cfg, x, which).log_value);
                thm32 = cell(p);
                if (p > 0.0) r32 = cell(est.sn_point / p);
                break;
            } catch (const std::exception&) {
            }
        }
        try {
            const double p = std::exp(semirv::predict_theoremA(cfg, x).log_value);
            thma = cell(p);
            if (p > 0.0) ra = cell(est.sn_point / p);
        } catch (const std::exception&) {
        }
        out << cell(x) << ',' << horizon << ',' << cell(est.point) << ','
            << cell(est.ci_low) << ',' << cell(est.ci_high) << ','
            << cell(est.sn_point) << ',' << thm31 << ',' << thm32 << ',' << thma
            << ',' << r31 << ',' << r32 << ',' << ra << "\r\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-regular-variation convolution toolkit"};
    app.set_version_flag("--version", semirv::version_string);
    app.require_subcommand(1);

    // study
    std::string study_config;
    std::string study_out = ".";
    bool study_parallel = false;
    std::uint64_t study_seed = 0;
    bool study_seed_set = false;
    auto* study = app.add_subcommand("study", "run the studies in a JSON config");
    study->add_option("config", study_config, "config file")->required();
    study->add_option("--out", study_out, "output directory for CSVs + manifest");
    study->add_flag("--parallel", study_parallel, "run studies in parallel");
    study->add_option("--seed", study_seed, "override the config seed")
        ->each([&](const std::string&) { study_seed_set = true; });

    // predict
    std::string predict_dists;
    std::string predict_grid;
    auto* predict = app.add_subcommand("predict", "evaluate the dispatched predictor");
    predict->add_option("--dists", predict_dists, "JSON file with a distribution list")
        ->required();
    predict->add_option("--x-grid", predict_grid, "a:b:n geometric grid")->required();

    // ruin
    std::string ruin_config;
    std::string ruin_grid;
    std::uint64_t ruin_samples = 100000;
    std::uint64_t ruin_seed = 1;
    int ruin_horizon = 0;
    std::string ruin_out;
    auto* ruin = app.add_subcommand("ruin", "Monte Carlo ruin study with predictors");
    ruin->add_option("--config", ruin_config, "risk model JSON file")->required();
    ruin->add_option("--x-grid", ruin_grid, "a:b:n geometric grid")->required();
    ruin->add_option("--samples", ruin_samples, "Monte Carlo paths per point");
    ruin->add_option("--seed", ruin_seed, "RNG seed");
    ruin->add_option("--horizon", ruin_horizon, "horizon (default: config n)");
    ruin->add_option("--out", ruin_out, "write CSV here instead of stdout");

    auto* selfcheck = app.add_subcommand("selfcheck", "run the identity suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (study->parsed()) {
            semirv::ConfigRunOptions opts;
            opts.out_dir = study_out;
            opts.parallel = study_parallel;
            if (study_seed_set) {
                opts.seed_override = study_seed;
            } else if (auto env = env_seed_override()) {
                opts.seed_override = env;
            }
            return semirv::run_config_file(study_config, opts, std::cerr);
        }
        if (predict->parsed()) {
            return cmd_predict(predict_dists, predict_grid, std::cout);
        }
        if (ruin->parsed()) {
            if (auto env = env_seed_override()) ruin_seed = *env;
            if (!ruin_out.empty()) {
                std::ofstream out(ruin_out, std::ios::binary);
                return cmd_ruin(ruin_config, ruin_grid, ruin_samples, ruin_seed,
                                ruin_horizon, out);
            }
            return cmd_ruin(ruin_config, ruin_grid, ruin_samples, ruin_seed,
                            ruin_horizon, std::cout);
        }
        if (selfcheck->parsed()) {
            return semirv::run_selfcheck(std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
