#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semirv/oracle.hpp"

namespace semirv {

enum class TrendVerdict { ConvergingTo1, Inconclusive, Diverging };

std::string trend_name(TrendVerdict t);

struct RatioStudyRow {
    double x = 0.0;
    double oracle_log = kNegInf;
    double oracle_error_bound = 0.0;  // absolute (0 for exact oracles)
    double predicted_log = kNegInf;
    double ratio = 0.0;               // exp(oracle_log - predicted_log)
    bool flagged = false;             // error bound > 25% of the oracle value

    double oracle_value() const { return std::exp(oracle_log); }
    double predicted_value() const { return std::exp(predicted_log); }
};

struct RatioStudyReport {
    std::string name;
    std::vector<RatioStudyRow> rows;
    TrendVerdict trend = TrendVerdict::Inconclusive;
    bool ci_shrinking = false;  // relative error bounds fall over the grid
    std::string case_tag;
    double a_constant = 0.0;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string tool_version;

    void write_csv(std::ostream& out) const;
};

// One oracle evaluation: log-domain value plus an absolute error bound
// (MC half-width or grid bracket half-width; 0 for quadrature/exact paths).
struct OraclePoint {
    double log_value = kNegInf;
    double abs_error = 0.0;
};

using OracleFn = std::function<OraclePoint(double)>;
using PredictorFn = std::function<double(double)>;  // log predicted value

// Fills rows and computes the trend verdict.  Rows whose oracle error bound
// exceeds 25% of the oracle value are flagged and excluded from the trend.
RatioStudyReport run_ratio_study(const std::string& name, const OracleFn& oracle,
                                 const PredictorFn& predictor,
                                 const std::vector<double>& x_grid);

TrendVerdict compute_trend(const std::vector<RatioStudyRow>& rows,
                           bool* ci_shrinking = nullptr);

// Geometric grid start, start*factor, ..., count points.
std::vector<double> geometric_grid(double start, double factor, std::size_t count);

struct ConfigRunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed_override;  // SEMIRV_SEED / --seed
    bool parallel = false;
};

// Executes every study in a JSON config, writes one CSV per study plus a
// manifest; returns the process exit code (0 ok, 1 failed assertions,
// 2 schema violation).  Diagnostics go to `diag`.
int run_config_file(const std::filesystem::path& config_path,
                    const ConfigRunOptions& options, std::ostream& diag);

// Identity suite: Beta-Gamma telescoping, predictor case collapses, and the
// Erlang/geometric golden values.  Prints one line per check.
int run_selfcheck(std::ostream& out);

// FNV-1a 64-bit, hex string; used for config fingerprints in manifests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace semirv
