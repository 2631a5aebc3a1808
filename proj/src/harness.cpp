#include "csbm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csbm/info_geometry.hpp"
#include "csbm/recovery.hpp"
#include "csbm/spectral.hpp"

namespace csbm {

const char* to_string(Algo algo) {
    switch (algo) {
        case Algo::spec1: return "spec1";
        case Algo::spec1y: return "spec1y";
        case Algo::spec2: return "spec2";
        case Algo::spec2k: return "spec2k";
        case Algo::genie: return "genie";
    }
    return "unknown";
}

Algo algo_from_string(const std::string& name) {
    if (name == "spec1") return Algo::spec1;
    if (name == "spec1y") return Algo::spec1y;
    if (name == "spec2") return Algo::spec2;
    if (name == "spec2k") return Algo::spec2k;
    if (name == "genie") return Algo::genie;
    throw Error(ErrorCode::InvalidConfig, "unknown algorithm: " + name);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t t_index) {
    // golden-ratio multiples keep (trial, t_index) pairs distinct before the
    // splitmix64 finalizer avalanches them
    std::uint64_t x = base ^ (trial * 0x9E3779B97F4A7C15ULL) ^
                      (t_index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
    x += 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

namespace {

void validate_config(const ExperimentConfig& config) {
    if (config.trials < 1) {
        throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
    }
    if (config.n < 64) {
        throw Error(ErrorCode::InvalidConfig, "n must be >= 64");
    }
    if (config.t_grid.empty()) {
        throw Error(ErrorCode::InvalidConfig, "t_grid must be nonempty");
    }
    for (double m : config.t_grid) {
        if (!(m > 0.0)) {
            throw Error(ErrorCode::InvalidConfig, "t_grid entries must be positive");
        }
    }
    if (config.algos.empty()) {
        throw Error(ErrorCode::InvalidConfig, "algos must be nonempty");
    }
    for (Algo a : config.algos) {
        if ((a == Algo::spec1 || a == Algo::spec1y || a == Algo::spec2) && config.params.k != 2) {
            throw Error(ErrorCode::InvalidConfig,
                        std::string(to_string(a)) + " needs k = 2 parameters");
        }
        if (a == Algo::spec2k && config.params.k < 3) {
            throw Error(ErrorCode::InvalidConfig, "spec2k needs k >= 3 parameters");
        }
    }
}

// misclassification of sigma relative to reference, minimized over all label
// permutations; used for both exact-recovery checks and genie agreement
double agreement(const CommunityAssignment& sigma, const CommunityAssignment& reference) {
    const RecoveryCheck check = exact_recovery(sigma, reference);
    return 1.0 - static_cast<double>(check.misclassified) / sigma.n();
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
    validate_config(config);
    const double t_c = critical_threshold(config.params).t_c;

    std::vector<ResultRow> rows;
    rows.reserve(config.t_grid.size() * config.trials * config.algos.size());
    for (std::size_t t_index = 0; t_index < config.t_grid.size(); ++t_index) {
        const double mult = config.t_grid[t_index];
        ModelParams params = config.params;
        params.t = mult * t_c;
        for (int trial = 0; trial < config.trials; ++trial) {
            const std::uint64_t seed = derive_seed(config.base_seed, trial, t_index);
            ResultRow base_row;
            base_row.t_multiplier = mult;
            base_row.t_absolute = params.t;
            base_row.n = config.n;
            base_row.trial_index = trial;
            base_row.seed = seed;

            Rng rng(seed);
            CommunityAssignment sigma0;
            CensoredGraph graph;
            std::pair<double, double> y_pair{0.0, 0.0};
            CommunityAssignment genie_sigma;
            std::string cell_error;
            try {
                sigma0 = sample_assignment(params, config.n, rng,
                                           config.enforce_concentration);
                graph = sample_graph(params, sigma0, rng);
                y_pair = config.y_overrides ? *config.y_overrides
                                            : draw_valid_y_pair(params, rng);
                genie_sigma = genie(graph, params, sigma0);
            } catch (const Error& e) {
                // just the code: the CSV cell must stay comma-free
                cell_error = to_string(e.code());
            }

            for (Algo algo : config.algos) {
                ResultRow row = base_row;
                row.algo = to_string(algo);
                if (!cell_error.empty()) {
                    row.error = cell_error;
                    rows.push_back(std::move(row));
                    continue;
                }
                try {
                    const auto start = std::chrono::steady_clock::now();
                    CommunityAssignment sigma_hat;
                    switch (algo) {
                        case Algo::spec1: sigma_hat = spec1(graph, params); break;
                        case Algo::spec1y:
                            sigma_hat = spec1_with_y(graph, params, y_pair.first);
                            break;
                        case Algo::spec2: sigma_hat = spec2(graph, params, y_pair); break;
                        case Algo::spec2k: sigma_hat = spec2k(graph, params, y_pair); break;
                        case Algo::genie: sigma_hat = genie_sigma; break;
                    }
                    const auto stop = std::chrono::steady_clock::now();
                    row.runtime_ms =
                        std::chrono::duration<double, std::milli>(stop - start).count();
                    const RecoveryCheck check = exact_recovery(sigma_hat, sigma0);
                    row.exact_success = check.exact ? 1 : 0;
                    row.misclassified = check.misclassified;
                    row.genie_agreement = agreement(sigma_hat, genie_sigma);
                } catch (const Error& e) {
                    row.error = to_string(e.code());
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace

std::string results_to_csv(const std::vector<ResultRow>& rows, bool include_timings) {
    std::ostringstream out;
    out << "algo,t_multiplier,t_absolute,n,trial_index,seed,exact_success,misclassified,"
           "genie_agreement";
    if (include_timings) out << ",runtime_ms";
    out << ",error\n";
    for (const auto& row : rows) {
        out << row.algo << ',' << format_double(row.t_multiplier) << ','
            << format_double(row.t_absolute) << ',' << row.n << ',' << row.trial_index << ','
            << row.seed << ',' << row.exact_success << ',' << row.misclassified << ','
            << format_double(row.genie_agreement);
        if (include_timings) out << ',' << format_double(row.runtime_ms);
        out << ',' << row.error << '\n';
    }
    return out.str();
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                   bool include_timings) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open for writing: " + path);
    }
    out << results_to_csv(rows, include_timings);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed: " + path);
    }
}

void write_graph(const GraphFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open for writing: " + path);
    }
    out << "csbm-v1 " << file.graph.n << ' ' << file.k << ' ' << format_double(file.t) << '\n';
    out << "labels";
    for (int label : file.assignment.labels) {
        out << ' ' << label + 1;  // 1-based on disk
    }
    out << '\n';
    for (const auto& e : file.graph.revealed) {
        out << e.u << ' ' << e.v << ' ' << (e.status == EdgeStatus::present ? '+' : '-') << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed: " + path);
    }
}

GraphFile read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open for reading: " + path);
    }
    GraphFile file;
    std::string magic;
    if (!(in >> magic) || magic != "csbm-v1") {
        throw Error(ErrorCode::FormatViolation, "missing csbm-v1 header");
    }
    if (!(in >> file.graph.n >> file.k >> file.t) || file.graph.n < 1 || file.k < 2) {
        throw Error(ErrorCode::FormatViolation, "malformed header line");
    }
    std::string tag;
    if (!(in >> tag) || tag != "labels") {
        throw Error(ErrorCode::FormatViolation, "missing labels line");
    }
    file.assignment.labels.resize(file.graph.n);
    file.assignment.counts.assign(file.k, 0);
    for (int v = 0; v < file.graph.n; ++v) {
        int label;
        if (!(in >> label) || label < 1 || label > file.k) {
            throw Error(ErrorCode::FormatViolation, "label out of range");
        }
        file.assignment.labels[v] = label - 1;
        ++file.assignment.counts[label - 1];
    }
    int u, v;
    char status;
    while (in >> u >> v >> status) {
        if (u < 0 || v < 0 || u >= file.graph.n || v >= file.graph.n || u >= v) {
            throw Error(ErrorCode::FormatViolation, "bad vertex pair");
        }
        if (status != '+' && status != '-') {
            throw Error(ErrorCode::FormatViolation, "status must be + or -");
        }
        file.graph.revealed.push_back(
            {u, v, status == '+' ? EdgeStatus::present : EdgeStatus::absent});
    }
    if (!in.eof()) {
        throw Error(ErrorCode::FormatViolation, "malformed edge line");
    }
    return file;
}

ExperimentConfig parse_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("bad JSON: ") + e.what());
    }
    try {
        RawParams raw;
        const auto& p = j.at("params");
        raw.k = p.at("k").get<int>();
        raw.rho = p.at("rho").get<std::vector<double>>();
        raw.P = p.at("P").get<std::vector<std::vector<double>>>();
        raw.t = p.value("t", 1.0);

        ExperimentConfig config;
        config.params = validate_params(raw);
        config.n = j.value("n", 0);
        config.t_grid = j.value("t_grid", std::vector<double>{});
        config.trials = j.value("trials", 1);
        for (const auto& name : j.value("algos", std::vector<std::string>{})) {
            config.algos.push_back(algo_from_string(name));
        }
        config.base_seed = j.value("base_seed", std::uint64_t{0});
        config.enforce_concentration = j.value("enforce_concentration", true);
        if (j.contains("y_overrides") && !j["y_overrides"].is_null()) {
            const auto ys = j["y_overrides"].get<std::vector<double>>();
            if (ys.size() != 2) {
                throw Error(ErrorCode::InvalidConfig, "y_overrides must be [y1, y2]");
            }
            config.y_overrides = {ys[0], ys[1]};
        }
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("bad config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open for reading: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace csbm
