#include "csbm/recovery.hpp"

#include <cmath>
#include <limits>

namespace csbm {

double y_value(double p, double q) {
    return std::log((1.0 - q) / (1.0 - p)) / std::log(p / q);
}

namespace {

struct TwoParams {
    double p1, p2, q;
};

TwoParams two_community(const ModelParams& params) {
    if (params.k != 2) {
        throw Error(ErrorCode::InvalidConfig, "this routine needs k = 2");
    }
    return {params.P(0, 0), params.P(1, 1), params.P(0, 1)};
}

// p1 = p2, p + q = 1, balanced prior: at y = y(p,q) = 1 the reduced matrix
// drops to rank one, but its single nonzero eigenvector is exactly the
// target direction, so a one-eigenvector pipeline still succeeds
bool balanced_complementary(const ModelParams& params, const TwoParams& tp) {
    return tp.p1 == tp.p2 && tp.p1 != tp.q && tp.p1 + tp.q == 1.0 &&
           params.rho(0) == params.rho(1);
}

// success regime, compared exactly on stored values
bool in_one_matrix_regime(const ModelParams& params, const TwoParams& tp) {
    if (tp.p1 == tp.p2 && tp.p1 != tp.q && tp.p1 + tp.q != 1.0) return true;
    if (tp.p2 == tp.q && tp.p1 != tp.q) return true;
    return balanced_complementary(params, tp);
}

// Block reduction of sqrt(n) log(n) * sum_l c_l v_l / gamma_l = z: the
// expected eigenvector v_l takes value zeta_lj / sqrt(n) on community j, so
// the n-dimensional identity is exactly the k x k system
//   sum_l [log(n) * zeta_lj / gamma_l] c_l = z_j.
Eigen::MatrixXd block_system(const ExpectedSpectrum& expected) {
    const int m = static_cast<int>(expected.gammas.size());
    const double logn = std::log(static_cast<double>(expected.n));
    Eigen::MatrixXd M(m, m);
    for (int j = 0; j < m; ++j) {
        for (int l = 0; l < m; ++l) {
            M(j, l) = logn * expected.block_values(l, j) / expected.gammas(l);
        }
    }
    return M;
}

WeightPlan one_matrix_plan(const ModelParams& params, const ExpectedSpectrum& expected,
                           const Eigen::Vector2d& alphas) {
    WeightPlan plan;
    plan.variant = WeightVariant::one_matrix;
    plan.alphas = alphas;
    // in the rank-one case only community 0's equation is solved; the other
    // block equation holds automatically by the sign symmetry of the target
    const int m = static_cast<int>(expected.gammas.size());
    plan.coeffs = block_system(expected).partialPivLu().solve(alphas.head(m));
    plan.y_values = {expected.y};
    (void)params;
    return plan;
}

// the single nonzero eigenpair of the reduced matrix in the balanced
// complementary case (the other eigenvalue is exactly zero)
ExpectedSpectrum rank_one_spectrum(const ModelParams& params, int n, double y) {
    Eigen::MatrixXd enc = params.P.array() - y * (1.0 - params.P.array());
    Eigen::VectorXd sq = params.rho.array().sqrt();
    Eigen::MatrixXd sym = sq.asDiagonal() * enc * sq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::EigensolverFailure, "reduced matrix eigendecomposition failed");
    }
    const int src = std::abs(solver.eigenvalues()(0)) > std::abs(solver.eigenvalues()(1)) ? 0 : 1;
    ExpectedSpectrum expected;
    expected.y = y;
    expected.n = n;
    expected.gammas.resize(1);
    expected.gammas(0) = params.t * std::log(static_cast<double>(n)) * solver.eigenvalues()(src);
    expected.block_values.resize(1, params.k);
    for (int j = 0; j < params.k; ++j) {
        expected.block_values(0, j) = solver.eigenvectors()(j, src) / sq(j);
    }
    expected.m_plus = expected.gammas(0) > 0.0 ? 1 : 0;
    expected.m_minus = 1 - expected.m_plus;
    return expected;
}

void check_encodings(const ExpectedSpectrum& e1, const ExpectedSpectrum& e2) {
    if (e1.y == e2.y) {
        throw Error(ErrorCode::EqualEncodings, "the two encoding parameters must differ");
    }
}

// solve alpha + alpha~ = a, -y1 alpha - y2 alpha~ = b
Eigen::Vector2d split_pair(double y1, double y2, double a, double b) {
    const double det = y1 - y2;
    const double alpha = (-b - y2 * a) / det;
    return {alpha, a - alpha};
}

int argmax_smallest(const Eigen::VectorXd& scores) {
    int best = 0;
    for (int i = 1; i < scores.size(); ++i) {
        if (scores(i) > scores(best)) best = i;
    }
    return best;
}

CommunityAssignment with_counts(std::vector<int> labels, int k) {
    CommunityAssignment a;
    a.labels = std::move(labels);
    a.counts.assign(k, 0);
    for (int l : a.labels) ++a.counts[l];
    return a;
}

}  // namespace

WeightPlan weights_one(const ModelParams& params, int n, const ExpectedSpectrum& expected) {
    const TwoParams tp = two_community(params);
    if (!in_one_matrix_regime(params, tp)) {
        throw Error(ErrorCode::RegimeViolation,
                    "one-matrix weights need p1 = p2 (with p+q != 1) or p2 = q");
    }
    (void)n;
    const double a1 = std::log(tp.p1 / tp.q);
    const double a2 = tp.p1 == tp.p2 ? -a1 : 0.0;
    return one_matrix_plan(params, expected, {a1, a2});
}

WeightPlan weights_one_with_y(const ModelParams& params, int n, const ExpectedSpectrum& expected) {
    const TwoParams tp = two_community(params);
    (void)n;
    const double a1 = std::log(tp.p1 / tp.q);
    return one_matrix_plan(params, expected, {a1, -a1});
}

WeightPlan weights_two(const ModelParams& params, int n, const ExpectedSpectrum& expected1,
                       const ExpectedSpectrum& expected2) {
    const TwoParams tp = two_community(params);
    check_encodings(expected1, expected2);
    if (!exception_check(params, expected1.y) || !exception_check(params, expected2.y)) {
        throw Error(ErrorCode::ExceptionSetViolation,
                    "an encoding parameter lies in the exception set");
    }
    (void)n;
    const double y1 = expected1.y;
    const double y2 = expected2.y;
    const Eigen::Vector2d s1 =
        split_pair(y1, y2, std::log(tp.p1 / tp.q), std::log((1.0 - tp.p1) / (1.0 - tp.q)));
    const Eigen::Vector2d s2 =
        split_pair(y1, y2, std::log(tp.q / tp.p2), std::log((1.0 - tp.q) / (1.0 - tp.p2)));

    WeightPlan plan;
    plan.variant = WeightVariant::two_matrix_2;
    plan.alphas = Eigen::Vector2d(s1(0), s2(0));
    plan.alphas_tilde = Eigen::Vector2d(s1(1), s2(1));
    plan.coeffs = block_system(expected1).partialPivLu().solve(plan.alphas);
    plan.coeffs_tilde = block_system(expected2).partialPivLu().solve(plan.alphas_tilde);
    plan.y_values = {y1, y2};
    return plan;
}

WeightPlan weights_k(const ModelParams& params, int n, const ExpectedSpectrum& expected1,
                     const ExpectedSpectrum& expected2) {
    check_encodings(expected1, expected2);
    if (!exception_check(params, expected1.y) || !exception_check(params, expected2.y)) {
        throw Error(ErrorCode::ExceptionSetViolation,
                    "an encoding parameter lies in the exception set");
    }
    (void)n;
    const int k = params.k;
    const double y1 = expected1.y;
    const double y2 = expected2.y;

    WeightPlan plan;
    plan.variant = WeightVariant::two_matrix_k;
    plan.alphas.resize(k, k);
    plan.alphas_tilde.resize(k, k);
    for (int r = 0; r < k; ++r) {
        for (int i = 0; i < k; ++i) {
            const Eigen::Vector2d s =
                split_pair(y1, y2, std::log(params.P(r, i)), std::log(1.0 - params.P(r, i)));
            plan.alphas(r, i) = s(0);
            plan.alphas_tilde(r, i) = s(1);
        }
    }
    const auto lu1 = block_system(expected1).partialPivLu();
    const auto lu2 = block_system(expected2).partialPivLu();
    plan.coeffs = lu1.solve(plan.alphas);
    plan.coeffs_tilde = lu2.solve(plan.alphas_tilde);
    plan.y_values = {y1, y2};
    return plan;
}

CommunityAssignment classify(const CensoredGraph& graph,
                             const std::vector<Eigen::VectorXd>& vectors,
                             const std::vector<double>& weights, double T,
                             const ModelParams& params) {
    const int m = static_cast<int>(vectors.size());
    if (m > 8) {
        throw Error(ErrorCode::TooManyVectors, "at most 8 vectors (2^m candidates)");
    }
    if (weights.size() != vectors.size() || m == 0) {
        throw Error(ErrorCode::LengthMismatch, "need one weight per vector");
    }
    for (const auto& v : vectors) {
        if (v.size() != graph.n) {
            throw Error(ErrorCode::LengthMismatch, "vectors must have length n");
        }
    }

    CommunityAssignment best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << m); ++mask) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(graph.n);
        for (int i = 0; i < m; ++i) {
            const double s = (mask >> i) & 1 ? -1.0 : 1.0;
            u += s * weights[i] * vectors[i];
        }
        std::vector<int> labels(graph.n);
        for (int v = 0; v < graph.n; ++v) {
            labels[v] = u(v) - T >= 0.0 ? 1 : 0;  // sign(0) := +1 -> community 2
        }
        CommunityAssignment candidate = with_counts(std::move(labels), 2);
        const double score = log_likelihood(graph, candidate, params);
        if (score > best_score) {
            best_score = score;
            best = std::move(candidate);
        }
    }
    return best;
}

CommunityAssignment classify_multiple(const CensoredGraph& graph, const Eigen::MatrixXd& U,
                                      const Eigen::MatrixXd& coeffs,
                                      const Eigen::MatrixXd& U_tilde,
                                      const Eigen::MatrixXd& coeffs_tilde,
                                      const ModelParams& params) {
    const int k = params.k;
    if (k > 6) {
        throw Error(ErrorCode::TooManyCommunities, "at most 6 communities (2^2k candidates)");
    }
    if (U.rows() != graph.n || U_tilde.rows() != graph.n || U.cols() != k ||
        U_tilde.cols() != k || coeffs.rows() != k || coeffs.cols() != k ||
        coeffs_tilde.rows() != k || coeffs_tilde.cols() != k) {
        throw Error(ErrorCode::LengthMismatch, "score columns and coefficients must be n x k / k x k");
    }

    // per-community contribution of eigenvector l before sign flips:
    // G_i = U * diag(coeffs.col(i)), so scores_i = G_i * s + G~_i * s~
    std::vector<Eigen::MatrixXd> G(k), Gt(k);
    for (int i = 0; i < k; ++i) {
        G[i] = U * coeffs.col(i).asDiagonal();
        Gt[i] = U_tilde * coeffs_tilde.col(i).asDiagonal();
    }

    CommunityAssignment best;
    double best_score = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd scores(graph.n, k);
    for (int mask = 0; mask < (1 << (2 * k)); ++mask) {
        Eigen::VectorXd s(k), st(k);
        for (int l = 0; l < k; ++l) {
            s(l) = (mask >> l) & 1 ? -1.0 : 1.0;
            st(l) = (mask >> (k + l)) & 1 ? -1.0 : 1.0;
        }
        for (int i = 0; i < k; ++i) {
            scores.col(i) = G[i] * s + Gt[i] * st;
        }
        std::vector<int> labels(graph.n);
        for (int v = 0; v < graph.n; ++v) {
            labels[v] = argmax_smallest(scores.row(v).transpose());
        }
        CommunityAssignment candidate = with_counts(std::move(labels), k);
        const double score = log_likelihood(graph, candidate, params);
        if (score > best_score) {
            best_score = score;
            best = std::move(candidate);
        }
    }
    return best;
}

namespace {

CommunityAssignment one_matrix_pipeline(const CensoredGraph& graph, const ModelParams& params,
                                        double y, bool enforce_regime) {
    if (graph.n < 16) {
        throw Error(ErrorCode::InvalidConfig, "need n >= 16");
    }
    const SignedMatrix A = encode(graph, y);
    const TwoParams tp = two_community(params);
    const bool rank_one = balanced_complementary(params, tp) && !exception_check(params, y);
    const ExpectedSpectrum expected = rank_one ? rank_one_spectrum(params, graph.n, y)
                                               : expected_spectrum(params, graph.n, y);
    const SpectralBundle bundle = top_spectrum(A, expected);
    const WeightPlan plan = enforce_regime ? weights_one(params, graph.n, expected)
                                           : weights_one_with_y(params, graph.n, expected);
    std::vector<Eigen::VectorXd> vectors;
    std::vector<double> weights;
    for (int l = 0; l < plan.coeffs.size(); ++l) {
        vectors.push_back(bundle.eigenvectors.col(l));
        weights.push_back(plan.coeffs(l));
    }
    return classify(graph, vectors, weights, 0.0, params);
}

}  // namespace

CommunityAssignment spec1(const CensoredGraph& graph, const ModelParams& params) {
    const TwoParams tp = two_community(params);
    if (!in_one_matrix_regime(params, tp)) {
        throw Error(ErrorCode::RegimeViolation,
                    "parameters outside the one-matrix success regime");
    }
    return one_matrix_pipeline(graph, params, y_value(tp.p1, tp.q), true);
}

CommunityAssignment spec1_with_y(const CensoredGraph& graph, const ModelParams& params,
                                 double y) {
    two_community(params);
    return one_matrix_pipeline(graph, params, y, false);
}

CommunityAssignment spec2(const CensoredGraph& graph, const ModelParams& params,
                          std::pair<double, double> y_pair) {
    two_community(params);
    if (graph.n < 16) {
        throw Error(ErrorCode::InvalidConfig, "need n >= 16");
    }
    const ExpectedSpectrum e1 = expected_spectrum(params, graph.n, y_pair.first);
    const ExpectedSpectrum e2 = expected_spectrum(params, graph.n, y_pair.second);
    const WeightPlan plan = weights_two(params, graph.n, e1, e2);
    const SpectralBundle b1 = top_spectrum(encode(graph, y_pair.first), e1);
    const SpectralBundle b2 = top_spectrum(encode(graph, y_pair.second), e2);
    return classify(graph,
                    {b1.eigenvectors.col(0), b1.eigenvectors.col(1), b2.eigenvectors.col(0),
                     b2.eigenvectors.col(1)},
                    {plan.coeffs(0), plan.coeffs(1), plan.coeffs_tilde(0), plan.coeffs_tilde(1)},
                    0.0, params);
}

CommunityAssignment spec2k(const CensoredGraph& graph, const ModelParams& params,
                           std::pair<double, double> y_pair) {
    if (params.k < 3) {
        throw Error(ErrorCode::InvalidConfig, "spec2k needs k >= 3");
    }
    if (graph.n < 16) {
        throw Error(ErrorCode::InvalidConfig, "need n >= 16");
    }
    if (!exception_check(params, y_pair.first) || !exception_check(params, y_pair.second)) {
        throw Error(ErrorCode::SpectralConditionViolation,
                    "the reduced matrix lacks k distinct nonzero eigenvalues at the chosen "
                    "encodings");
    }
    const ExpectedSpectrum e1 = expected_spectrum(params, graph.n, y_pair.first);
    const ExpectedSpectrum e2 = expected_spectrum(params, graph.n, y_pair.second);
    const WeightPlan plan = weights_k(params, graph.n, e1, e2);
    const SpectralBundle b1 = top_spectrum(encode(graph, y_pair.first), e1);
    const SpectralBundle b2 = top_spectrum(encode(graph, y_pair.second), e2);
    return classify_multiple(graph, b1.eigenvectors, plan.coeffs, b2.eigenvectors,
                             plan.coeffs_tilde, params);
}

CommunityAssignment genie(const CensoredGraph& graph, const ModelParams& params,
                          const CommunityAssignment& sigma0) {
    const int k = params.k;
    const std::vector<DegreeProfile> profiles = all_degree_profiles(graph, sigma0);
    Eigen::MatrixXd weights(2 * k, k);  // column i = (log P_ri, log(1-P_ri))_r
    for (int i = 0; i < k; ++i) {
        for (int r = 0; r < k; ++r) {
            weights(2 * r, i) = std::log(params.P(r, i));
            weights(2 * r + 1, i) = std::log1p(-params.P(r, i));
        }
    }
    std::vector<int> labels(graph.n);
    for (int v = 0; v < graph.n; ++v) {
        labels[v] = argmax_smallest(weights.transpose() * profiles[v].cast<double>());
    }
    return with_counts(std::move(labels), k);
}

}  // namespace csbm
