#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "csbm/model.hpp"

namespace csbm {

/// Signed adjacency encoding: present -> 1, absent -> -y, censored -> 0.
struct SignedMatrix {
    int n = 0;
    double y = 0.0;
    Eigen::SparseMatrix<double> A;  // symmetric, zero diagonal
};

/// k x k reduction of the expected signed adjacency: M_ij = rho_j (P_ij - y(1-P_ij)).
struct ReducedMatrix {
    double y = 0.0;
    Eigen::MatrixXd M;
    Eigen::VectorXd eigenvalues;  // real, sorted descending
};

struct ExpectedSpectrum {
    double y = 0.0;
    int n = 0;
    Eigen::VectorXd gammas;       // k reference eigenvalues t*log(n)*mu_l, descending
    Eigen::MatrixXd block_values; // zeta(l, j): eigenvector l takes zeta_lj / sqrt(n) on community j
    int m_plus = 0;               // positive reference eigenvalues
    int m_minus = 0;              // negative reference eigenvalues
};

struct SpectralBundle {
    Eigen::VectorXd eigenvalues;  // aligned with ExpectedSpectrum::gammas
    Eigen::MatrixXd eigenvectors; // column i pairs with eigenvalues(i), unit norm
};

SignedMatrix encode(const CensoredGraph& graph, double y);

ReducedMatrix reduced_matrix(const ModelParams& params, double y);

/// True iff all eigenvalues of the reduced matrix exceed `margin` in modulus
/// and all pairwise gaps exceed `margin`.
bool exception_check(const ModelParams& params, double y, double margin = 1e-9);

/// Two distinct encoding parameters from Uniform(0,1), rejection-sampled
/// until both pass exception_check.
std::pair<double, double> draw_valid_y_pair(const ModelParams& params, Rng& rng);

ExpectedSpectrum expected_spectrum(const ModelParams& params, int n, double y);

/// Extremal eigenpairs of the sampled matrix: the m_plus algebraically
/// largest and m_minus smallest, ordered to match the reference gammas.
/// Dense solver up to `dense_cutoff`, Lanczos above.
SpectralBundle top_spectrum(const SignedMatrix& matrix, const ExpectedSpectrum& expected,
                            int dense_cutoff = 1024);

/// Per-eigenvector min-sign sup-norm distance between the sampled
/// eigenvector u_i and the reference surrogate A u*_i / gamma_i.
Eigen::VectorXd entrywise_residual(const SpectralBundle& bundle, const ExpectedSpectrum& expected,
                                   const SignedMatrix& matrix,
                                   const CommunityAssignment& assignment);

namespace detail {
/// Lanczos with full reorthogonalization; exposed for testing against the
/// dense path. Returns the want_low smallest and want_high largest eigenpairs
/// in ascending order.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> lanczos_extremal(
    const Eigen::SparseMatrix<double>& A, int want_low, int want_high,
    int max_iter = 400, double tol = 1e-10);
}  // namespace detail

}  // namespace csbm
