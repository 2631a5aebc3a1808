#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csbm/harness.hpp"
#include "csbm/info_geometry.hpp"
#include "csbm/recovery.hpp"
#include "csbm/spectral.hpp"

namespace {

using csbm::Error;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw Error(csbm::ErrorCode::IoFailure, "cannot open for writing: " + path);
    }
    out << text;
    if (!out) {
        throw Error(csbm::ErrorCode::IoFailure, "write failed: " + path);
    }
}

int run_threshold(const std::string& config_path) {
    const csbm::ExperimentConfig config = csbm::load_config(config_path);
    const csbm::ThresholdReport report = csbm::critical_threshold(config.params);
    nlohmann::json j;
    j["t_c"] = report.t_c;
    j["argmin_pair"] = {report.argmin_pair.first, report.argmin_pair.second};
    j["per_pair"] = nlohmann::json::array();
    for (const auto& pg : report.per_pair) {
        nlohmann::json p;
        p["i"] = pg.i;
        p["j"] = pg.j;
        p["delta_plus"] = pg.divergence.delta_plus;
        p["xi_star"] = pg.divergence.xi_star;
        p["w_star"] = std::vector<double>(pg.w_star.data(), pg.w_star.data() + pg.w_star.size());
        p["x_star"] = std::vector<double>(pg.x_star.data(), pg.x_star.data() + pg.x_star.size());
        j["per_pair"].push_back(std::move(p));
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path, bool timings) {
    const csbm::ExperimentConfig config = csbm::load_config(config_path);
    const std::vector<csbm::ResultRow> rows = csbm::run_sweep(config);
    csbm::write_results(rows, out_path, timings);
    return 0;
}

int run_sample(const std::string& config_path, double t_mult, std::uint64_t seed,
               const std::string& out_path) {
    const csbm::ExperimentConfig config = csbm::load_config(config_path);
    csbm::ModelParams params = config.params;
    params.t = t_mult * csbm::critical_threshold(params).t_c;
    csbm::Rng rng(seed);
    csbm::GraphFile file;
    file.k = params.k;
    file.t = params.t;
    file.assignment =
        csbm::sample_assignment(params, config.n, rng, config.enforce_concentration);
    file.graph = csbm::sample_graph(params, file.assignment, rng);
    csbm::write_graph(file, out_path);
    return 0;
}

int run_geometry(const std::string& config_path, const std::string& pair_str, double delta,
                 int resolution, const std::string& out_path) {
    const csbm::ExperimentConfig config = csbm::load_config(config_path);
    const auto comma = pair_str.find(',');
    if (comma == std::string::npos) {
        throw Error(csbm::ErrorCode::InvalidConfig, "--pair must look like i,j");
    }
    const int i = std::stoi(pair_str.substr(0, comma));
    const int j = std::stoi(pair_str.substr(comma + 1));
    const csbm::SlicePlane plane = csbm::default_slice_plane(config.params, i, j);
    std::string csv = "community,ray_index,coord1,coord2\n";
    for (int community : {i, j}) {
        for (const auto& point :
             csbm::dr_boundary_sample(config.params, community, delta, plane, resolution)) {
            csv += std::to_string(community) + ',' + std::to_string(point.ray_index) + ',' +
                   std::to_string(point.coord1) + ',' + std::to_string(point.coord2) + '\n';
        }
    }
    write_text(out_path, csv);
    return 0;
}

int run_recover(const std::string& config_path, const std::string& algo_name,
                const std::string& graph_path, std::optional<double> y1,
                std::optional<double> y2, std::uint64_t seed, const std::string& out_path) {
    const csbm::ExperimentConfig config = csbm::load_config(config_path);
    const csbm::GraphFile file = csbm::read_graph(graph_path);
    csbm::ModelParams params = config.params;
    params.t = file.t;

    std::pair<double, double> y_pair{0.0, 0.0};
    if (y1 && y2) {
        y_pair = {*y1, *y2};
    } else {
        csbm::Rng rng(seed);
        y_pair = csbm::draw_valid_y_pair(params, rng);
        if (y1) y_pair.first = *y1;
    }

    csbm::CommunityAssignment sigma_hat;
    const csbm::Algo algo = csbm::algo_from_string(algo_name);
    switch (algo) {
        case csbm::Algo::spec1: sigma_hat = csbm::spec1(file.graph, params); break;
        case csbm::Algo::spec1y:
            sigma_hat = csbm::spec1_with_y(file.graph, params, y_pair.first);
            break;
        case csbm::Algo::spec2: sigma_hat = csbm::spec2(file.graph, params, y_pair); break;
        case csbm::Algo::spec2k: sigma_hat = csbm::spec2k(file.graph, params, y_pair); break;
        case csbm::Algo::genie:
            sigma_hat = csbm::genie(file.graph, params, file.assignment);
            break;
    }

    std::string csv = "vertex,label\n";
    for (int v = 0; v < sigma_hat.n(); ++v) {
        csv += std::to_string(v) + ',' + std::to_string(sigma_hat.labels[v] + 1) + '\n';
    }
    write_text(out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"censored stochastic block model experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, pair_str, algo_name, graph_path;
    double t_mult = 1.0, delta = 1.0;
    int resolution = 256;
    std::uint64_t seed = 0;
    bool timings = false;
    std::optional<double> y1, y2;

    auto* threshold = app.add_subcommand("threshold", "print the critical threshold report");
    threshold->add_option("--config", config_path)->required();

    auto* sweep = app.add_subcommand("sweep", "run a seeded experiment sweep");
    sweep->add_option("--config", config_path)->required();
    sweep->add_option("--out", out_path)->required();
    sweep->add_flag("--timings", timings, "include the runtime_ms column");

    auto* sample = app.add_subcommand("sample", "sample one graph to a file");
    sample->add_option("--config", config_path)->required();
    sample->add_option("--t-mult", t_mult)->required();
    sample->add_option("--seed", seed)->required();
    sample->add_option("--out", out_path)->required();

    auto* geometry = app.add_subcommand("geometry", "trace a dissonance-range boundary");
    geometry->add_option("--config", config_path)->required();
    geometry->add_option("--pair", pair_str)->required();
    geometry->add_option("--delta", delta)->required();
    geometry->add_option("--resolution", resolution);
    geometry->add_option("--out", out_path)->required();

    auto* recover = app.add_subcommand("recover", "run one recovery algorithm on a graph file");
    recover->add_option("--config", config_path)->required();
    recover->add_option("--algo", algo_name)->required();
    recover->add_option("--graph", graph_path)->required();
    recover->add_option("--y1", [&y1](const std::vector<std::string>& v) {
        y1 = std::stod(v[0]);
        return true;
    }, "first encoding parameter");
    recover->add_option("--y2", [&y2](const std::vector<std::string>& v) {
        y2 = std::stod(v[0]);
        return true;
    }, "second encoding parameter");
    recover->add_option("--seed", seed);
    recover->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*threshold) return run_threshold(config_path);
        if (*sweep) return run_sweep_cmd(config_path, out_path, timings);
        if (*sample) return run_sample(config_path, t_mult, seed, out_path);
        if (*geometry) return run_geometry(config_path, pair_str, delta, resolution, out_path);
        if (*recover)
            return run_recover(config_path, algo_name, graph_path, y1, y2, seed, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
