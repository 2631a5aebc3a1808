#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csbm/model.hpp"

namespace csbm {

enum class Algo { spec1, spec1y, spec2, spec2k, genie };

const char* to_string(Algo algo);
Algo algo_from_string(const std::string& name);

struct ExperimentConfig {
    ModelParams params;
    int n = 0;
    std::vector<double> t_grid;  // multipliers of t_c
    int trials = 1;
    std::vector<Algo> algos;
    std::uint64_t base_seed = 0;
    bool enforce_concentration = true;
    std::optional<std::pair<double, double>> y_overrides;
};

struct ResultRow {
    std::string algo;
    double t_multiplier = 0.0;
    double t_absolute = 0.0;
    int n = 0;
    int trial_index = 0;
    std::uint64_t seed = 0;
    int exact_success = 0;
    int misclassified = 0;
    double genie_agreement = 0.0;
    double runtime_ms = 0.0;
    std::string error;  // empty on success
};

/// Avalanche-mixing seed derivation (splitmix64 finalizer over
/// base xor golden-ratio multiples of the indices); identical on all
/// platforms.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t t_index);

/// One row per (t multiplier, trial, algo), in that loop order. All
/// algorithms within a cell consume the same sampled graph. Per-cell
/// failures become rows with a nonempty `error` field.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

/// CSV with the ResultRow columns. runtime_ms is omitted by default so the
/// output is a pure function of the config.
void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                   bool include_timings = false);
std::string results_to_csv(const std::vector<ResultRow>& rows, bool include_timings = false);

/// On-disk graph: header "csbm-v1 <n> <k> <t>", a 1-based "labels ..." line,
/// then one "<u> <v> <+|->" line per revealed pair (0-based vertices).
struct GraphFile {
    int k = 0;
    double t = 0.0;
    CommunityAssignment assignment;
    CensoredGraph graph;
};

void write_graph(const GraphFile& file, const std::string& path);
GraphFile read_graph(const std::string& path);

/// Parse an ExperimentConfig from JSON text. Field names mirror the struct:
/// params {k, rho, P, t (optional, default 1)}, n, t_grid, trials, algos,
/// base_seed, enforce_concentration, y_overrides (optional [y1, y2]).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace csbm
