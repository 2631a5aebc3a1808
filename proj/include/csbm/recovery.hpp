#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "csbm/model.hpp"
#include "csbm/spectral.hpp"

namespace csbm {

/// y(p,q) = log((1-q)/(1-p)) / log(p/q), the encoding that aligns the
/// one-matrix score with the genie hyperplane for the pair (p, q).
double y_value(double p, double q);

enum class WeightVariant { one_matrix, two_matrix_2, two_matrix_k };

/// Coefficients for combining eigenvectors into score vectors.
///
/// Shapes by variant:
///   one_matrix:   alphas 2x1 (target block values), coeffs 2x1 (a1, a2),
///                 alphas_tilde / coeffs_tilde empty, y_values = {y}
///   two_matrix_2: alphas / alphas_tilde 2x1, coeffs / coeffs_tilde 2x1
///                 (c1, c2 resp. c~1, c~2), y_values = {y1, y2}
///   two_matrix_k: alphas / alphas_tilde k x k with entry (r, i),
///                 coeffs / coeffs_tilde k x k with column i = c_i resp. c~_i
struct WeightPlan {
    WeightVariant variant = WeightVariant::one_matrix;
    Eigen::MatrixXd alphas;
    Eigen::MatrixXd alphas_tilde;
    Eigen::MatrixXd coeffs;
    Eigen::MatrixXd coeffs_tilde;
    std::vector<double> y_values;
};

/// One-matrix weights (k = 2, success regime: p1 = p2 = p with p != q and
/// p + q != 1, or p2 = q != p1; compared exactly).
WeightPlan weights_one(const ModelParams& params, int n, const ExpectedSpectrum& expected);

/// One-matrix weights for an arbitrary encoding parameter; the free alphas
/// follow the (p1, q) pair rule. Escape hatch for out-of-regime experiments.
WeightPlan weights_one_with_y(const ModelParams& params, int n, const ExpectedSpectrum& expected);

/// Two-matrix weights for k = 2.
WeightPlan weights_two(const ModelParams& params, int n, const ExpectedSpectrum& expected1,
                       const ExpectedSpectrum& expected2);

/// Two-matrix weights for general k.
WeightPlan weights_k(const ModelParams& params, int n, const ExpectedSpectrum& expected1,
                     const ExpectedSpectrum& expected2);

/// Threshold classifier: over all sign patterns s in {-1,+1}^m, forms
/// u = sum_i s_i * weights_i * vectors_i, assigns community 2 where
/// u_v - T >= 0 (sign(0) := +1) and community 1 elsewhere, and returns the
/// candidate with the highest log-likelihood (first in enumeration order on
/// ties; the all-plus pattern comes first).
CommunityAssignment classify(const CensoredGraph& graph,
                             const std::vector<Eigen::VectorXd>& vectors,
                             const std::vector<double>& weights, double T,
                             const ModelParams& params);

/// Multi-community classifier: over all (s, s~) in {-1,+1}^k x {-1,+1}^k,
/// assigns each vertex argmax_i of (U diag(s) coeffs.col(i))_v +
/// (U~ diag(s~) coeffs~.col(i))_v, ties toward the smallest index, and
/// returns the likelihood-maximizing candidate.
CommunityAssignment classify_multiple(const CensoredGraph& graph, const Eigen::MatrixXd& U,
                                      const Eigen::MatrixXd& coeffs,
                                      const Eigen::MatrixXd& U_tilde,
                                      const Eigen::MatrixXd& coeffs_tilde,
                                      const ModelParams& params);

/// One-matrix pipeline (encode at y(p1, q), top two eigenpairs, weights_one,
/// classify at T = 0). Refuses parameters outside the success regime.
CommunityAssignment spec1(const CensoredGraph& graph, const ModelParams& params);

/// One-matrix pipeline with a caller-chosen encoding parameter.
CommunityAssignment spec1_with_y(const CensoredGraph& graph, const ModelParams& params, double y);

/// Two-matrix pipeline for k = 2.
CommunityAssignment spec2(const CensoredGraph& graph, const ModelParams& params,
                          std::pair<double, double> y_pair);

/// Two-matrix pipeline for k >= 3.
CommunityAssignment spec2k(const CensoredGraph& graph, const ModelParams& params,
                           std::pair<double, double> y_pair);

/// Reference estimator with oracle access to the true labels of all other
/// vertices: v gets argmax_i of <(log P_ri, log(1-P_ri))_r, d(v)>, ties
/// toward the smallest index.
CommunityAssignment genie(const CensoredGraph& graph, const ModelParams& params,
                          const CommunityAssignment& sigma0);

}  // namespace csbm
