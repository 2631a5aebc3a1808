#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "csbm/errors.hpp"
#include "csbm/rng.hpp"

namespace csbm {

/// Community indices are 0-based throughout the library; the text formats
/// use 1-based labels and convert at the boundary.
struct ModelParams {
    int k = 0;              // number of communities, >= 2
    Eigen::VectorXd rho;    // community prior, sums to 1
    Eigen::MatrixXd P;      // symmetric connection probabilities in (0,1)
    double t = 0.0;         // reveal intensity, multiplies log(n)/n
};

struct CommunityAssignment {
    std::vector<int> labels;     // labels[v] in [0, k)
    std::vector<int> counts;     // counts[j] = #{v : labels[v] == j}

    int n() const { return static_cast<int>(labels.size()); }
};

enum class EdgeStatus : std::uint8_t { present, absent };

struct RevealedPair {
    int u;
    int v;  // u < v
    EdgeStatus status;
};

/// Sparse censored graph: only revealed pairs are stored.
struct CensoredGraph {
    int n = 0;
    std::vector<RevealedPair> revealed;
};

/// Degree profile of a vertex: (d+1, d-1, d+2, d-2, ..., d+k, d-k), where
/// d+r / d-r count present / absent revealed edges into community r.
using DegreeProfile = Eigen::VectorXi;

struct RawParams {
    int k = 0;
    std::vector<double> rho;
    std::vector<std::vector<double>> P;
    double t = 0.0;
};

ModelParams validate_params(const RawParams& raw);

CommunityAssignment sample_assignment(const ModelParams& params, int n, Rng& rng,
                                      bool enforce_concentration = false);

CensoredGraph sample_graph(const ModelParams& params, const CommunityAssignment& assignment,
                           Rng& rng);

DegreeProfile degree_profile(const CensoredGraph& graph, const CommunityAssignment& assignment,
                             int v);

/// Degree profiles of all vertices in one pass over the revealed list.
std::vector<DegreeProfile> all_degree_profiles(const CensoredGraph& graph,
                                               const CommunityAssignment& assignment);

/// Log-likelihood of the revealed statuses under assignment sigma, dropping
/// the censored-pair constant. Equals z(G,sigma)/2.
double log_likelihood(const CensoredGraph& graph, const CommunityAssignment& sigma,
                      const ModelParams& params);

/// Permutations pi of [k] with rho_i = rho_{pi(i)} and P_ij = P_{pi(i)pi(j)},
/// compared exactly on stored values.
std::vector<std::vector<int>> permissible_relabelings(const ModelParams& params);

/// Hamming distance minimized over permissible relabelings.
int discrepancy(const CommunityAssignment& sigma, const CommunityAssignment& sigma0,
                const ModelParams& params);

struct RecoveryCheck {
    bool exact = false;
    int misclassified = 0;  // Hamming distance minimized over all permutations
};

RecoveryCheck exact_recovery(const CommunityAssignment& sigma_hat,
                             const CommunityAssignment& sigma0);

}  // namespace csbm
