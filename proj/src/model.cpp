#include "csbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace csbm {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonStochasticPrior: return "NonStochasticPrior";
        case ErrorCode::AsymmetricP: return "AsymmetricP";
        case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case ErrorCode::NonPositiveT: return "NonPositiveT";
        case ErrorCode::ResampleLimitExceeded: return "ResampleLimitExceeded";
        case ErrorCode::RevealProbabilityExceedsOne: return "RevealProbabilityExceedsOne";
        case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::CommunityOutOfRange: return "CommunityOutOfRange";
        case ErrorCode::IndistinguishableCommunities: return "IndistinguishableCommunities";
        case ErrorCode::EmptyProfileSet: return "EmptyProfileSet";
        case ErrorCode::AnchorOutsideRange: return "AnchorOutsideRange";
        case ErrorCode::NonPositiveY: return "NonPositiveY";
        case ErrorCode::NoValidEncoding: return "NoValidEncoding";
        case ErrorCode::ExceptionSetViolation: return "ExceptionSetViolation";
        case ErrorCode::EigensolverFailure: return "EigensolverFailure";
        case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
        case ErrorCode::RegimeViolation: return "RegimeViolation";
        case ErrorCode::EqualEncodings: return "EqualEncodings";
        case ErrorCode::TooManyVectors: return "TooManyVectors";
        case ErrorCode::TooManyCommunities: return "TooManyCommunities";
        case ErrorCode::SpectralConditionViolation: return "SpectralConditionViolation";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::FormatViolation: return "FormatViolation";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "UnknownError";
}

ModelParams validate_params(const RawParams& raw) {
    if (raw.k < 2) {
        throw Error(ErrorCode::InvalidConfig, "k must be at least 2");
    }
    const int k = raw.k;
    if (static_cast<int>(raw.rho.size()) != k) {
        throw Error(ErrorCode::NonStochasticPrior, "rho must have length k");
    }
    double sum = 0.0;
    for (double r : raw.rho) {
        if (!(r > 0.0 && r < 1.0)) {
            throw Error(ErrorCode::NonStochasticPrior, "rho entries must lie in (0,1)");
        }
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::NonStochasticPrior, "rho must sum to 1");
    }
    if (static_cast<int>(raw.P.size()) != k) {
        throw Error(ErrorCode::ProbabilityOutOfRange, "P must be k x k");
    }
    for (const auto& row : raw.P) {
        if (static_cast<int>(row.size()) != k) {
            throw Error(ErrorCode::ProbabilityOutOfRange, "P must be k x k");
        }
    }
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double p = raw.P[i][j];
            if (!(p > 0.0 && p < 1.0)) {
                throw Error(ErrorCode::ProbabilityOutOfRange, "P entries must lie in (0,1)");
            }
            if (raw.P[i][j] != raw.P[j][i]) {
                throw Error(ErrorCode::AsymmetricP, "P must be symmetric");
            }
        }
    }
    if (!(raw.t > 0.0)) {
        throw Error(ErrorCode::NonPositiveT, "t must be positive");
    }

    ModelParams params;
    params.k = k;
    params.rho = Eigen::Map<const Eigen::VectorXd>(raw.rho.data(), k);
    params.P.resize(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            params.P(i, j) = raw.P[i][j];
        }
    }
    params.t = raw.t;
    return params;
}

CommunityAssignment sample_assignment(const ModelParams& params, int n, Rng& rng,
                                      bool enforce_concentration) {
    const int k = params.k;
    if (n < k) {
        throw Error(ErrorCode::InvalidConfig, "n must be at least k");
    }
    // cumulative prior for inverse-CDF draws
    std::vector<double> cum(k);
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
        acc += params.rho(j);
        cum[j] = acc;
    }
    cum[k - 1] = 1.0;

    const double bound = std::pow(static_cast<double>(n), 2.0 / 3.0);
    const int max_attempts = 1000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        CommunityAssignment assignment;
        assignment.labels.resize(n);
        assignment.counts.assign(k, 0);
        for (int v = 0; v < n; ++v) {
            const double u = rng.uniform();
            int j = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (j >= k) j = k - 1;
            assignment.labels[v] = j;
            ++assignment.counts[j];
        }
        if (!enforce_concentration) {
            return assignment;
        }
        bool ok = true;
        for (int j = 0; j < k; ++j) {
            if (std::abs(assignment.counts[j] - n * params.rho(j)) > bound) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return assignment;
        }
    }
    throw Error(ErrorCode::ResampleLimitExceeded,
                "could not satisfy the concentration bound in 1000 attempts");
}

CensoredGraph sample_graph(const ModelParams& params, const CommunityAssignment& assignment,
                           Rng& rng) {
    const int n = assignment.n();
    if (n < 2) {
        throw Error(ErrorCode::InvalidConfig, "graph needs at least two vertices");
    }
    const double reveal = params.t * std::log(static_cast<double>(n)) / n;
    if (reveal > 1.0) {
        throw Error(ErrorCode::RevealProbabilityExceedsOne,
                    "t*log(n)/n exceeds 1; increase n or decrease t");
    }
    CensoredGraph graph;
    graph.n = n;
    graph.revealed.reserve(static_cast<std::size_t>(reveal * n * (n - 1) / 2 * 1.1) + 16);
    for (int u = 0; u < n; ++u) {
        const int cu = assignment.labels[u];
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform() >= reveal) continue;
            const double p = params.P(cu, assignment.labels[v]);
            const EdgeStatus status =
                rng.uniform() < p ? EdgeStatus::present : EdgeStatus::absent;
            graph.revealed.push_back({u, v, status});
        }
    }
    return graph;
}

DegreeProfile degree_profile(const CensoredGraph& graph, const CommunityAssignment& assignment,
                             int v) {
    if (v < 0 || v >= graph.n) {
        throw Error(ErrorCode::VertexOutOfRange, "vertex index out of range");
    }
    if (assignment.n() != graph.n) {
        throw Error(ErrorCode::LengthMismatch, "assignment does not cover the graph");
    }
    const int k = static_cast<int>(assignment.counts.size());
    DegreeProfile d = DegreeProfile::Zero(2 * k);
    for (const auto& e : graph.revealed) {
        int other;
        if (e.u == v) {
            other = e.v;
        } else if (e.v == v) {
            other = e.u;
        } else {
            continue;
        }
        const int r = assignment.labels[other];
        d(2 * r + (e.status == EdgeStatus::present ? 0 : 1)) += 1;
    }
    return d;
}

std::vector<DegreeProfile> all_degree_profiles(const CensoredGraph& graph,
                                               const CommunityAssignment& assignment) {
    if (assignment.n() != graph.n) {
        throw Error(ErrorCode::LengthMismatch, "assignment does not cover the graph");
    }
    const int k = static_cast<int>(assignment.counts.size());
    std::vector<DegreeProfile> profiles(graph.n, DegreeProfile::Zero(2 * k));
    for (const auto& e : graph.revealed) {
        const int offset = e.status == EdgeStatus::present ? 0 : 1;
        profiles[e.u](2 * assignment.labels[e.v] + offset) += 1;
        profiles[e.v](2 * assignment.labels[e.u] + offset) += 1;
    }
    return profiles;
}

double log_likelihood(const CensoredGraph& graph, const CommunityAssignment& sigma,
                      const ModelParams& params) {
    if (sigma.n() != graph.n) {
        throw Error(ErrorCode::LengthMismatch, "assignment does not cover the graph");
    }
    const int k = params.k;
    // count pairs per (i<=j, status) first so each log is taken once
    Eigen::MatrixXd present = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd absent = Eigen::MatrixXd::Zero(k, k);
    for (const auto& e : graph.revealed) {
        int i = sigma.labels[e.u];
        int j = sigma.labels[e.v];
        if (i > j) std::swap(i, j);
        (e.status == EdgeStatus::present ? present : absent)(i, j) += 1.0;
    }
    double ll = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            if (present(i, j) > 0) ll += present(i, j) * std::log(params.P(i, j));
            if (absent(i, j) > 0) ll += absent(i, j) * std::log1p(-params.P(i, j));
        }
    }
    return ll;
}

namespace {

void for_each_permutation(int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        fn(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

std::vector<std::vector<int>> permissible_relabelings(const ModelParams& params) {
    const int k = params.k;
    std::vector<std::vector<int>> out;
    for_each_permutation(k, [&](const std::vector<int>& perm) {
        for (int i = 0; i < k; ++i) {
            if (params.rho(i) != params.rho(perm[i])) return;
        }
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                if (params.P(i, j) != params.P(perm[i], perm[j])) return;
            }
        }
        out.push_back(perm);
    });
    return out;
}

namespace {

int hamming_under(const std::vector<int>& perm, const CommunityAssignment& sigma,
                  const CommunityAssignment& sigma0) {
    int dist = 0;
    for (int v = 0; v < sigma.n(); ++v) {
        if (perm[sigma.labels[v]] != sigma0.labels[v]) ++dist;
    }
    return dist;
}

}  // namespace

int discrepancy(const CommunityAssignment& sigma, const CommunityAssignment& sigma0,
                const ModelParams& params) {
    if (sigma.n() != sigma0.n()) {
        throw Error(ErrorCode::LengthMismatch, "assignments differ in length");
    }
    int best = sigma.n() + 1;
    for (const auto& perm : permissible_relabelings(params)) {
        best = std::min(best, hamming_under(perm, sigma, sigma0));
    }
    return best;
}

RecoveryCheck exact_recovery(const CommunityAssignment& sigma_hat,
                             const CommunityAssignment& sigma0) {
    if (sigma_hat.n() != sigma0.n()) {
        throw Error(ErrorCode::LengthMismatch, "assignments differ in length");
    }
    const int k = static_cast<int>(std::max(sigma_hat.counts.size(), sigma0.counts.size()));
    int best = sigma_hat.n() + 1;
    for_each_permutation(k, [&](const std::vector<int>& perm) {
        best = std::min(best, hamming_under(perm, sigma_hat, sigma0));
    });
    return {best == 0, best};
}

}  // namespace csbm
