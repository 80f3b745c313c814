#pragma once

#include "semikrylov/genmat.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semikrylov {

struct SpectralSummary {
    /// "eigen" (λ of A) or "singular" (σ of A).
    std::string kind;
    double max = 0.0;
    /// Smallest value above the rank cut.
    double min = 0.0;
    /// max/min; 0 for a zero-rank operator.
    double ratio = 0.0;

    friend bool operator==(const SpectralSummary&, const SpectralSummary&) = default;
};

/// Per-iteration scalars, parallel-indexed by iteration. Empty series are
/// quantities the command did not compute.
struct IterationSeries {
    std::vector<double> res_norm;
    std::vector<double> normal_res_norm;
    std::vector<double> range_res_norm;
    std::vector<double> null_res_norm;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> measured;
    std::vector<double> bound;

    friend bool operator==(const IterationSeries&, const IterationSeries&) = default;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct RunReport {
    std::string command;
    std::string method;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank = 0;
    SpectralSummary spectral;
    std::string stop_reason;
    std::size_t iterations = 0;
    IterationSeries per_iteration;
    std::optional<double> contraction_factor;
    /// Final-solution distances to the oracle, keyed by name.
    std::map<std::string, double> distances;
    std::vector<CheckResult> checks;
    bool pass = false;
    std::optional<std::uint64_t> seed;
    std::string timestamp;

    /// Sets `pass` to the conjunction of all checks.
    void finalize();

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

/// {"kind", "dims": [m, n], "spectrum", "seed", "consistency_gap", "x0_mode"}.
/// "spectrum" may also be {"geometric": {...}} or {"linear": {...}} with keys
/// "rank", "condition" and optional "top" (default 1).
void to_json(nlohmann::json& j, const ProblemSpec& s);
void from_json(const nlohmann::json& j, ProblemSpec& s);

/// CSV with columns iter, alpha, beta, res_norm, normal_res_norm,
/// range_res_norm, null_res_norm, measured_bound_quantity, bound_value.
/// Missing values are left empty.
std::string trace_csv(const IterationSeries& s);

}  // namespace semikrylov
