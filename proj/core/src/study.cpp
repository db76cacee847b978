#include "semirv/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "semirv/asym.hpp"
#include "semirv/errors.hpp"
#include "semirv/json_io.hpp"
#include "semirv/risk.hpp"
#include "semirv/special.hpp"
#include "semirv/version.hpp"

namespace semirv {

using nlohmann::json;

std::string trend_name(TrendVerdict t) {
    switch (t) {
        case TrendVerdict::ConvergingTo1: return "converging_to_1";
        case TrendVerdict::Inconclusive: return "inconclusive";
        case TrendVerdict::Diverging: return "diverging";
    }
    return "unknown";
}

std::vector<double> geometric_grid(double start, double factor, std::size_t count) {
    if (!(start > 0.0) || !(factor > 1.0) || count == 0) {
        throw DomainError("geometric_grid: need start > 0, factor > 1, count >= 1");
    }
    std::vector<double> grid(count);
    double x = start;
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = x;
        x *= factor;
    }
    return grid;
}

TrendVerdict compute_trend(const std::vector<RatioStudyRow>& rows,
                           bool* ci_shrinking) {
    std::vector<const RatioStudyRow*> valid;
    for (const auto& r : rows) {
        if (!r.flagged) valid.push_back(&r);
    }
    if (ci_shrinking) {
        *ci_shrinking = false;
        if (valid.size() >= 2) {
            const auto rel = [](const RatioStudyRow* r) {
                const double v = r->oracle_value();
                return v > 0.0 ? r->oracle_error_bound / v : kInf;
            };
            bool shrink = true;
            for (std::size_t i = valid.size() / 2; i + 1 < valid.size(); ++i) {
                if (rel(valid[i + 1]) > rel(valid[i]) * (1.0 + 1e-9)) shrink = false;
            }
            *ci_shrinking = shrink && rel(valid.back()) < rel(valid.front());
        }
    }
    if (valid.size() < 2) return TrendVerdict::Inconclusive;

    std::vector<double> dev;
    dev.reserve(valid.size());
    for (const auto* r : valid) dev.push_back(std::abs(r->ratio - 1.0));

    const std::size_t window =
        std::min(dev.size(), std::max<std::size_t>(3, dev.size() / 2));
    const std::size_t begin = dev.size() - window;
    bool nonincreasing = true;
    bool nondecreasing = true;
    for (std::size_t i = begin; i + 1 < dev.size(); ++i) {
        if (dev[i + 1] > dev[i] * (1.0 + 1e-12) + 1e-15) nonincreasing = false;
        if (dev[i + 1] < dev[i] * (1.0 - 1e-12) - 1e-15) nondecreasing = false;
    }
    if (nonincreasing && dev.back() < 0.5 * dev.front()) {
        return TrendVerdict::ConvergingTo1;
    }
    if (nondecreasing && dev.back() > 2.0 * dev.front()) {
        return TrendVerdict::Diverging;
    }
    return TrendVerdict::Inconclusive;
}

RatioStudyReport run_ratio_study(const std::string& name, const OracleFn& oracle,
                                 const PredictorFn& predictor,
                                 const std::vector<double>& x_grid) {
    if (x_grid.size() < 5) {
        throw DomainError("run_ratio_study: grid must have at least 5 points");
    }
    for (std::size_t i = 0; i + 1 < x_grid.size(); ++i) {
        if (!(x_grid[i + 1] > x_grid[i])) {
            throw DomainError("run_ratio_study: grid must be strictly ascending");
        }
    }
    RatioStudyReport report;
    report.name = name;
    report.tool_version = version_string;
    for (double x : x_grid) {
        RatioStudyRow row;
        row.x = x;
        const OraclePoint op = oracle(x);
        row.oracle_log = op.log_value;
        row.oracle_error_bound = op.abs_error;
        row.predicted_log = predictor(x);
        row.ratio = std::exp(row.oracle_log - row.predicted_log);
        row.flagged = !(op.abs_error <= 0.25 * row.oracle_value());
        report.rows.push_back(row);
    }
    report.trend = compute_trend(report.rows, &report.ci_shrinking);
    return report;
}

void RatioStudyReport::write_csv(std::ostream& out) const {
    out << "x,oracle_value,oracle_error_bound,predicted_value,ratio\r\n";
    for (const auto& r : rows) {
        out << format_double(r.x) << ',' << format_double(r.oracle_value()) << ','
            << format_double(r.oracle_error_bound) << ','
            << format_double(r.predicted_value()) << ',' << format_double(r.ratio)
            << "\r\n";
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Config-file runner
// ---------------------------------------------------------------------------

namespace {

struct SchemaViolation {
    std::string path;
    std::string message;
};

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw SchemaViolation{path, msg};
}

const json& require_field(const json& j, const char* field, const std::string& path) {
    if (!j.is_object() || !j.contains(field)) {
        schema_error(path + "." + field, "missing required field");
    }
    return j.at(field);
}

struct BuiltStudy {
    std::string name;
    std::vector<double> grid;
    OracleFn oracle;
    PredictorFn predictor;
    std::string case_tag;
    double a_constant = 0.0;
    std::uint64_t seed = 0;
    json assertions;
    // envelope predictors also carry the upper bound (log domain)
    std::function<double(double)> envelope_upper;
};

std::vector<double> parse_grid(const json& jg, const std::string& path) {
    if (jg.is_object() && jg.contains("points")) {
        std::vector<double> pts;
        for (const auto& p : jg.at("points")) pts.push_back(p.get<double>());
        if (pts.size() < 5) schema_error(path + ".points", "need at least 5 points");
        return pts;
    }
    if (!jg.is_object() || !jg.contains("start") || !jg.contains("count")) {
        schema_error(path, "x_grid needs {start, factor, count} or {points}");
    }
    return geometric_grid(jg.at("start").get<double>(), jg.value("factor", 2.0),
                          jg.at("count").get<std::size_t>());
}

std::vector<SemiRVDistribution> parse_dists(const json& js, const std::string& path) {
    const json& jd = require_field(js, "dists", path);
    if (!jd.is_array() || jd.empty()) schema_error(path + ".dists", "nonempty array expected");
    std::vector<SemiRVDistribution> ds;
    for (std::size_t i = 0; i < jd.size(); ++i) {
        try {
            ds.push_back(dist_from_json(jd[i]));
        } catch (const std::exception& e) {
            schema_error(path + ".dists[" + std::to_string(i) + "]", e.what());
        }
    }
    return ds;
}

std::vector<TailFunctionSpec> parse_funcs(const json& js, const std::string& path) {
    const json& jf = require_field(js, "funcs", path);
    if (!jf.is_array() || jf.empty()) schema_error(path + ".funcs", "nonempty array expected");
    std::vector<TailFunctionSpec> fs;
    for (std::size_t i = 0; i < jf.size(); ++i) {
        try {
            fs.push_back(tailfn_from_json(jf[i]));
        } catch (const std::exception& e) {
            schema_error(path + ".funcs[" + std::to_string(i) + "]", e.what());
        }
    }
    return fs;
}

RiskModelConfig parse_risk(const json& js, const std::string& path) {
    try {
        return risk_config_from_json(require_field(js, "risk", path));
    } catch (const SchemaViolation&) {
        throw;
    } catch (const std::exception& e) {
        schema_error(path + ".risk", e.what());
    }
}

OracleFn make_grid_oracle(std::vector<SemiRVDistribution> ds, const json& params,
                          const std::vector<double>& grid, const std::string& path) {
    GridConvolutionPlan plan;
    plan.step = params.value("step", 1.0 / 1024.0);
    plan.x_max = params.value("x_max", 0.0);
    if (plan.x_max <= 0.0) {
        double x0_sum = 0.0;
        for (const auto& d : ds) x0_sum += d.head_cutoff();
        plan.x_max = grid.back() * 1.05 + x0_sum + 1.0;
    }
    std::vector<TailBracket> brackets;
    try {
        brackets = conv_tail_n_grid_bracket(ds, plan, grid);
    } catch (const std::exception& e) {
        schema_error(path + ".oracle", e.what());
    }
    std::map<double, TailBracket> by_x;
    for (std::size_t i = 0; i < grid.size(); ++i) by_x[grid[i]] = brackets[i];
    return [by_x](double x) {
        const auto it = by_x.find(x);
        if (it == by_x.end()) throw DomainError("grid oracle: x not precomputed");
        OraclePoint p;
        p.log_value = std::log(it->second.midpoint());
        p.abs_error = 0.5 * it->second.width();
        return p;
    };
}

OracleFn make_risk_grid_oracle(const RiskModelConfig& cfg,
                               const std::vector<double>& grid) {
    auto brackets = sn_tail_oracle_grid(cfg, grid);
    std::map<double, TailBracket> by_x;
    for (std::size_t i = 0; i < grid.size(); ++i) by_x[grid[i]] = brackets[i];
    return [by_x](double x) {
        const auto it = by_x.find(x);
        if (it == by_x.end()) throw DomainError("risk grid oracle: x not precomputed");
        OraclePoint p;
        p.log_value = std::log(it->second.midpoint());
        p.abs_error = 0.5 * it->second.width();
        return p;
    };
}

BuiltStudy build_study(const json& js, std::size_t index, std::uint64_t base_seed) {
    const std::string path = "studies[" + std::to_string(index) + "]";
    BuiltStudy study;
    study.name = js.value("name", "study_" + std::to_string(index));
    study.grid = parse_grid(require_field(js, "x_grid", path), path + ".x_grid");
    study.seed = base_seed + 1000003ull * index;
    study.assertions = js.value("assert", json::object());

    // ---- oracle ----
    const json& jo = require_field(js, "oracle", path);
    const std::string omethod = require_field(jo, "method", path + ".oracle")
                                    .get<std::string>();
    if (omethod == "conv_tail_2") {
        auto ds = parse_dists(js, path);
        if (ds.size() != 2) schema_error(path + ".dists", "conv_tail_2 needs 2 dists");
        study.oracle = [ds](double x) {
            return OraclePoint{conv_tail_2(ds[0], ds[1], x).log_value, 0.0};
        };
    } else if (omethod == "grid") {
        study.oracle = make_grid_oracle(parse_dists(js, path), jo, study.grid, path);
    } else if (omethod == "lattice") {
        auto ds = parse_dists(js, path);
        study.oracle = [ds](double x) {
            const double p = lattice_conv_tail(ds, std::llround(x));
            return OraclePoint{p > 0.0 ? std::log(p) : kNegInf, 0.0};
        };
    } else if (omethod == "mixed") {
        auto ds = parse_dists(js, path);
        if (ds.size() != 2) schema_error(path + ".dists", "mixed needs 2 dists");
        const bool first_lattice = ds[0].dist_kind() == DistKind::Lattice;
        const auto& lat = first_lattice ? ds[0] : ds[1];
        const auto& cont = first_lattice ? ds[1] : ds[0];
        study.oracle = [lat, cont](double x) {
            return OraclePoint{conv_tail_lattice_continuous(lat, cont, x).log_value,
                               0.0};
        };
    } else if (omethod == "mc") {
        auto ds = parse_dists(js, path);
        const auto samples = jo.value("samples", std::uint64_t{100000});
        const auto seed = study.seed;
        study.oracle = [ds, samples, seed](double x) {
            const auto est = mc_conv_tail(ds, x, samples, seed);
            return OraclePoint{est.estimate > 0.0 ? std::log(est.estimate) : kNegInf,
                               est.half_width_95};
        };
    } else if (omethod == "function_convolve") {
        auto fs = parse_funcs(js, path);
        if (fs.size() < 2) schema_error(path + ".funcs", "need >= 2 functions");
        study.oracle = [fs](double x) {
            const double v = fs.size() == 2 ? function_convolve(fs[0], fs[1], x)
                                            : function_convolve_n(fs, x);
            return OraclePoint{std::log(v), 0.0};
        };
    } else if (omethod == "gn_integral") {
        auto fs = parse_funcs(js, path);
        study.oracle = [fs](double x) {
            return OraclePoint{std::log(function_convolve_n_integral(fs, x)), 0.0};
        };
    } else if (omethod == "risk_mc_sn" || omethod == "risk_mc_ruin") {
        auto cfg = parse_risk(js, path);
        const auto samples = jo.value("samples", std::uint64_t{100000});
        const auto seed = study.seed;
        const bool use_ruin = omethod == "risk_mc_ruin";
        study.oracle = [cfg, samples, seed, use_ruin](double x) {
            const auto est = ruin_mc(cfg, x, cfg.n, samples, seed);
            const double p = use_ruin ? est.point : est.sn_point;
            const double hw = use_ruin
                                  ? 0.5 * (est.ci_high - est.ci_low)
                                  : est.sn_interval.half_width();
            return OraclePoint{p > 0.0 ? std::log(p) : kNegInf, hw};
        };
    } else if (omethod == "risk_grid") {
        study.oracle = make_risk_grid_oracle(parse_risk(js, path), study.grid);
    } else {
        schema_error(path + ".oracle.method", "unknown oracle method '" + omethod + "'");
    }

    // ---- predictor ----
    const json& jp = require_field(js, "predictor", path);
    const std::string pmethod = require_field(jp, "method", path + ".predictor")
                                    .get<std::string>();
    study.case_tag = pmethod;
    if (pmethod == "auto") {
        auto pred = classify_and_predict(parse_dists(js, path));
        study.case_tag = predictor_case_name(pred.case_tag);
        study.a_constant = pred.a_constant;
        study.predictor = pred.log_eval;
    } else if (pmethod == "thm11") {
        auto ds = parse_dists(js, path);
        study.a_constant = lattice_mix_constant(
            ds.front().alpha(),
            static_cast<int>(std::count_if(ds.begin(), ds.end(), [](const auto& d) {
                return d.dist_kind() == DistKind::Lattice;
            })),
            static_cast<int>(ds.size()));
        study.predictor = [ds](double x) { return predict_thm11(ds, x).log_value; };
    } else if (pmethod == "thm12_case_i") {
        auto ds = parse_dists(js, path);
        study.predictor = [ds](double x) {
            return predict_thm12_case_i(ds, x).log_value;
        };
    } else if (pmethod == "thm12_case_ii") {
        auto ds = parse_dists(js, path);
        study.predictor = [ds](double x) {
            return predict_thm12_case_ii(ds, x).log_value;
        };
    } else if (pmethod == "thm12_case_iii") {
        auto ds = parse_dists(js, path);
        const int m = jp.value("m_split", 1);
        study.predictor = [ds, m](double x) {
            return predict_thm12_case_iii(ds, m, x).log_value;
        };
    } else if (pmethod == "lemma22") {
        auto fs = parse_funcs(js, path);
        if (fs.size() != 2) schema_error(path + ".funcs", "lemma22 needs 2 functions");
        study.predictor = [fs](double x) {
            return std::log(predict_lemma22(fs[0], fs[1], x));
        };
    } else if (pmethod == "lemma23_product") {
        auto fs = parse_funcs(js, path);
        study.predictor = [fs](double x) {
            double v = 0.0;
            for (const auto& f : fs) v += std::log(f.integral(x));
            return v;
        };
    } else if (pmethod == "prop41") {
        auto ds = parse_dists(js, path);
        const auto* fam = std::get_if<ExpPowerFamily>(&ds.front().f().family());
        if (fam == nullptr) {
            schema_error(path + ".dists", "prop41 needs exp_power distributions");
        }
        const double alpha = ds.front().alpha();
        const ExpPowerFamily ep = *fam;
        const int n_fold = static_cast<int>(ds.size());
        study.predictor = [alpha, ep, n_fold](double x) {
            return predict_prop41(alpha, ep.C, ep.D, ep.beta, n_fold, x).log_value;
        };
    } else if (pmethod == "prop42_envelope") {
        auto ds = parse_dists(js, path);
        const json& je = require_field(jp, "envelope", path + ".predictor");
        if (!je.is_array() || je.size() != ds.size()) {
            schema_error(path + ".predictor.envelope",
                         "need one {f0,c,d} entry per distribution");
        }
        std::vector<EnvelopeInput> inputs;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            EnvelopeInput in{ds[i],
                             tailfn_from_json(require_field(je[i], "f0",
                                                            path + ".envelope")),
                             je[i].value("c", 1.0), je[i].value("d", 1.0)};
            inputs.push_back(std::move(in));
        }
        study.predictor = [inputs](double x) {
            return envelope_prop42(inputs, x).first.log_value;
        };
        study.envelope_upper = [inputs](double x) {
            return envelope_prop42(inputs, x).second.log_value;
        };
    } else if (pmethod == "thm31") {
        auto cfg = parse_risk(js, path);
        study.a_constant = cfg.alpha;
        study.predictor = [cfg](double x) {
            return predict_thm31(cfg, x).value.log_value;
        };
    } else if (pmethod == "thm32_case_i" || pmethod == "thm32_case_ii" ||
               pmethod == "thm32_case_iii" || pmethod == "thm32_case_iv") {
        auto cfg = parse_risk(js, path);
        Thm32Case which = Thm32Case::I;
        if (pmethod == "thm32_case_ii") which = Thm32Case::II;
        if (pmethod == "thm32_case_iii") which = Thm32Case::III;
        if (pmethod == "thm32_case_iv") which = Thm32Case::IV;
        study.predictor = [cfg, which](double x) {
            return predict_thm32(cfg, x, which).log_value;
        };
    } else if (pmethod == "theorem_a") {
        auto cfg = parse_risk(js, path);
        study.predictor = [cfg](double x) {
            return predict_theoremA(cfg, x).log_value;
        };
    } else {
        schema_error(path + ".predictor.method",
                     "unknown predictor method '" + pmethod + "'");
    }
    return study;
}

struct StudyOutcome {
    RatioStudyReport report;
    std::vector<std::string> failures;
    double duration_ms = 0.0;
};

StudyOutcome execute_study(const BuiltStudy& study) {
    const auto t0 = std::chrono::steady_clock::now();
    StudyOutcome outcome;
    outcome.report = run_ratio_study(study.name, study.oracle, study.predictor,
                                     study.grid);
    outcome.report.case_tag = study.case_tag;
    outcome.report.a_constant = study.a_constant;
    outcome.report.seed = study.seed;

    const json& as = study.assertions;
    if (as.contains("trend")) {
        const std::string want = as.at("trend").get<std::string>();
        const bool converging = outcome.report.trend == TrendVerdict::ConvergingTo1;
        bool ok = false;
        if (want == "converging_to_1") {
            ok = converging;
        } else if (want == "converging_or_shrinking_ci") {
            ok = converging || (outcome.report.trend == TrendVerdict::Inconclusive &&
                                outcome.report.ci_shrinking);
        } else {
            ok = trend_name(outcome.report.trend) == want;
        }
        if (!ok) {
            outcome.failures.push_back("trend is " + trend_name(outcome.report.trend) +
                                       ", wanted " + want);
        }
    }
    if (as.contains("max_final_deviation")) {
        const double tol = as.at("max_final_deviation").get<double>();
        const RatioStudyRow* last = nullptr;
        for (const auto& r : outcome.report.rows) {
            if (!r.flagged) last = &r;
        }
        if (last == nullptr) {
            outcome.failures.push_back("no unflagged rows for final-deviation check");
        } else if (!(std::abs(last->ratio - 1.0) <= tol)) {
            outcome.failures.push_back(
                "final |ratio-1| = " + format_double(std::abs(last->ratio - 1.0)) +
                " exceeds " + format_double(tol));
        }
    }
    if (as.value("within_envelope", false)) {
        if (!study.envelope_upper) {
            outcome.failures.push_back("within_envelope needs an envelope predictor");
        } else {
            for (const auto& r : outcome.report.rows) {
                const double lo = std::exp(r.predicted_log);
                const double hi = std::exp(study.envelope_upper(r.x));
                const double olo = r.oracle_value() - r.oracle_error_bound;
                const double ohi = r.oracle_value() + r.oracle_error_bound;
                if (!(olo >= lo && ohi <= hi)) {
                    outcome.failures.push_back(
                        "oracle at x=" + format_double(r.x) + " outside envelope");
                }
            }
        }
    }
    outcome.duration_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
    return outcome;
}

}  // namespace

int run_config_file(const std::filesystem::path& config_path,
                    const ConfigRunOptions& options, std::ostream& diag) {
    std::ifstream in(config_path);
    if (!in) {
        diag << "error: cannot open config '" << config_path.string() << "'\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    json config;
    try {
        config = json::parse(bytes);
    } catch (const json::parse_error& e) {
        diag << "error: config parse failure at byte " << e.byte << ": " << e.what()
             << "\n";
        return 2;
    }

    std::vector<BuiltStudy> studies;
    try {
        if (!config.is_object()) schema_error("$", "top level must be an object");
        const json& js = require_field(config, "studies", "$");
        if (!js.is_array() || js.empty()) {
            schema_error("$.studies", "nonempty array expected");
        }
        const std::uint64_t base_seed =
            options.seed_override.value_or(config.value("seed", std::uint64_t{0}));
        for (std::size_t i = 0; i < js.size(); ++i) {
            studies.push_back(build_study(js[i], i, base_seed));
        }
    } catch (const SchemaViolation& v) {
        diag << "error: schema violation at " << v.path << ": " << v.message << "\n";
        return 2;
    } catch (const std::exception& e) {
        diag << "error: invalid config: " << e.what() << "\n";
        return 2;
    }

    std::filesystem::create_directories(options.out_dir);

    std::vector<StudyOutcome> outcomes(studies.size());
    if (options.parallel) {
        std::vector<std::future<StudyOutcome>> futs;
        futs.reserve(studies.size());
        for (const auto& s : studies) {
            futs.push_back(std::async(std::launch::async,
                                      [&s]() { return execute_study(s); }));
        }
        for (std::size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < studies.size(); ++i) {
            outcomes[i] = execute_study(studies[i]);
        }
    }

    const std::string config_hash = fnv1a_hex(bytes);
    json manifest;
    manifest["config"] = config_path.filename().string();
    manifest["config_hash"] = config_hash;
    manifest["tool_version"] = version_string;
    manifest["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    manifest["studies"] = json::array();

    std::vector<std::string> failed_studies;
    for (std::size_t i = 0; i < studies.size(); ++i) {
        auto& outcome = outcomes[i];
        outcome.report.config_hash = config_hash;
        const auto csv_path = options.out_dir / (outcome.report.name + ".csv");
        std::ofstream csv(csv_path, std::ios::binary);
        outcome.report.write_csv(csv);

        json entry;
        entry["name"] = outcome.report.name;
        entry["seed"] = outcome.report.seed;
        entry["trend"] = trend_name(outcome.report.trend);
        entry["case_tag"] = outcome.report.case_tag;
        entry["rows"] = outcome.report.rows.size();
        entry["duration_ms"] = outcome.duration_ms;
        entry["failures"] = outcome.failures;
        manifest["studies"].push_back(entry);

        if (!outcome.failures.empty()) {
            failed_studies.push_back(outcome.report.name);
            for (const auto& f : outcome.failures) {
                diag << "assertion failed [" << outcome.report.name << "]: " << f
                     << "\n";
            }
        }
    }

    std::ofstream mf(options.out_dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";

    if (!failed_studies.empty()) {
        diag << "failed studies:";
        for (const auto& n : failed_studies) diag << ' ' << n;
        diag << "\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Selfcheck
// ---------------------------------------------------------------------------

namespace {

bool report_check(std::ostream& out, const std::string& name, bool ok) {
    out << (ok ? "[ ok ] " : "[FAIL] ") << name << "\n";
    return ok;
}

}  // namespace

int run_selfcheck(std::ostream& out) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        if (!report_check(out, name, ok)) ++failures;
    };

    check("ln_gamma(5) = ln 24",
          std::abs(ln_gamma(5.0) - std::log(24.0)) < 1e-12);
    check("beta(2,3) = 1/12", std::abs(beta(2.0, 3.0) - 1.0 / 12.0) < 1e-13);

    // Beta-Gamma telescoping over random parameter tuples.
    {
        CounterRng rng(20240607, 0);
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 1 + static_cast<int>(rng.next_u64() % 4);
            const double gamma_star = 3.0 * rng.next_double();
            std::vector<TailFunctionSpec> ins, fin;
            std::vector<double> gammas;
            for (int i = 0; i < n; ++i) {
                ins.emplace_back(LogPowerFamily{gamma_star - 1.0, 1.0});
                const double gi = 3.0 * rng.next_double();
                gammas.push_back(gi);
                fin.emplace_back(LogPowerFamily{gi - 1.0, 1.0});
            }
            auto cfg = RiskModelConfig::make(1.0, ins, fin);
            const double x = std::exp(7.0);
            const double ratio =
                std::exp(predict_theoremA(cfg, x).log_value -
                         predict_thm32(cfg, x, Thm32Case::I).log_value);
            if (std::abs(ratio - 1.0) > 1e-10) ok = false;
        }
        check("gamma-quotient vs beta-product telescoping = 1 (20 tuples)", ok);
    }

    // Case collapse: m = 0 mixed form equals case i.
    {
        std::vector<SemiRVDistribution> ds;
        ds.push_back(SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{0.5, 1.0}),
                                              DistKind::Continuous));
        ds.push_back(SemiRVDistribution::make(1.0, TailFunctionSpec(LogPowerFamily{1.0, 2.0}),
                                              DistKind::Continuous));
        bool ok = true;
        for (double x = 2.0; x < 60.0; x *= 1.7) {
            const double a = predict_thm12_case_iii(ds, 0, x).log_value;
            const double b = predict_thm12_case_i(ds, x).log_value;
            if (std::abs(a - b) > 1e-12) ok = false;
        }
        check("mixed-split predictor with m=0 collapses to case i", ok);
    }

    // Lattice-mix constant identity.
    {
        bool ok = true;
        for (int n = 1; n <= 6; ++n) {
            for (int m = 0; m <= n - 1; ++m) {
                if (n == 1 && m != 0) continue;
                const double a = lattice_mix_constant(0.7, m, n);
                const double lhs = std::pow(a, n - 1);
                const double rhs =
                    std::pow(std::expm1(0.7), m) * std::pow(0.7, n - 1 - m);
                if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs)) ok = false;
            }
            if (std::abs(lattice_mix_constant(0.7, n, n) - std::expm1(0.7)) > 1e-15) {
                ok = false;
            }
        }
        check("a^(n-1) = (e^a-1)^m alpha^(n-m-1)", ok);
    }

    // Erlang golden value.
    {
        auto exp1 = SemiRVDistribution::make(1.0, TailFunctionSpec(ConstantFamily{1.0}),
                                             DistKind::Continuous);
        const double got = conv_tail_2(exp1, exp1, 10.0).value();
        const double want = 11.0 * std::exp(-10.0);
        check("two Exp(1): P(X1+X2>10) = 11 e^-10",
              std::abs(got - want) <= 1e-9 * want);
    }

    // Geometric golden value.
    {
        auto geo = SemiRVDistribution::make(std::log(2.0),
                                            TailFunctionSpec(ConstantFamily{1.0}),
                                            DistKind::Lattice);
        const double got = lattice_conv_tail({geo, geo}, 10);
        const double want = 11.0 / 1024.0;
        check("two geometric(ln 2): tail(10) = 11/1024",
              std::abs(got - want) <= 1e-12 * want);
    }

    // RNG reproducibility.
    {
        CounterRng a(42, 7), b(42, 7);
        bool ok = true;
        for (int i = 0; i < 100; ++i) {
            if (a.next_u64() != b.next_u64()) ok = false;
        }
        check("counter rng reproducibility", ok);
    }

    return failures == 0 ? 0 : 1;
}

}  // namespace semirv
