#include "csbm/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace csbm {

SignedMatrix encode(const CensoredGraph& graph, double y) {
    if (!(y > 0.0)) {
        throw Error(ErrorCode::NonPositiveY, "encoding parameter y must be positive");
    }
    SignedMatrix matrix;
    matrix.n = graph.n;
    matrix.y = y;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * graph.revealed.size());
    for (const auto& e : graph.revealed) {
        const double value = e.status == EdgeStatus::present ? 1.0 : -y;
        triplets.emplace_back(e.u, e.v, value);
        triplets.emplace_back(e.v, e.u, value);
    }
    matrix.A.resize(graph.n, graph.n);
    matrix.A.setFromTriplets(triplets.begin(), triplets.end());
    return matrix;
}

namespace {

// Eigenvalues of P_enc * diag(rho) via the similar symmetric matrix
// diag(sqrt(rho)) * P_enc * diag(sqrt(rho)).
Eigen::MatrixXd symmetrized_reduced(const ModelParams& params, double y) {
    const int k = params.k;
    Eigen::MatrixXd enc = params.P.array() - y * (1.0 - params.P.array());
    Eigen::VectorXd sq = params.rho.array().sqrt();
    return sq.asDiagonal() * enc * sq.asDiagonal();
}

}  // namespace

ReducedMatrix reduced_matrix(const ModelParams& params, double y) {
    if (y < 0.0) {
        throw Error(ErrorCode::NonPositiveY, "encoding parameter y must be nonnegative");
    }
    ReducedMatrix reduced;
    reduced.y = y;
    Eigen::MatrixXd enc = params.P.array() - y * (1.0 - params.P.array());
    reduced.M = enc * params.rho.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_reduced(params, y));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::EigensolverFailure, "reduced matrix eigendecomposition failed");
    }
    reduced.eigenvalues = solver.eigenvalues().reverse();
    return reduced;
}

bool exception_check(const ModelParams& params, double y, double margin) {
    const Eigen::VectorXd mu = reduced_matrix(params, y).eigenvalues;
    for (Eigen::Index l = 0; l < mu.size(); ++l) {
        if (std::abs(mu(l)) <= margin) return false;
        for (Eigen::Index m = l + 1; m < mu.size(); ++m) {
            if (std::abs(mu(l) - mu(m)) <= margin) return false;
        }
    }
    return true;
}

std::pair<double, double> draw_valid_y_pair(const ModelParams& params, Rng& rng) {
    double y1 = -1.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double y = rng.uniform();
        if (y <= 0.0 || !exception_check(params, y)) continue;
        if (y1 < 0.0) {
            y1 = y;
        } else if (y != y1) {
            return {y1, y};
        }
    }
    throw Error(ErrorCode::NoValidEncoding,
                "no valid encoding pair in 1000 draws; the reduced matrix is degenerate "
                "for all y (rank-deficient or permanently repeated spectrum)");
}

ExpectedSpectrum expected_spectrum(const ModelParams& params, int n, double y) {
    if (!exception_check(params, y)) {
        throw Error(ErrorCode::ExceptionSetViolation,
                    "y lies in the exception set of the reduced matrix");
    }
    const int k = params.k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_reduced(params, y));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::EigensolverFailure, "reduced matrix eigendecomposition failed");
    }

    ExpectedSpectrum expected;
    expected.y = y;
    expected.n = n;
    const double scale = params.t * std::log(static_cast<double>(n));
    expected.gammas.resize(k);
    expected.block_values.resize(k, k);
    // solver returns ascending order; flip to descending
    for (int l = 0; l < k; ++l) {
        const int src = k - 1 - l;
        expected.gammas(l) = scale * solver.eigenvalues()(src);
        for (int j = 0; j < k; ++j) {
            // eigenvector of M = P_enc*diag(rho) is diag(rho)^{-1/2} w; the
            // scaling makes the implied n-vector (zeta_lj / sqrt(n)) unit-norm
            expected.block_values(l, j) = solver.eigenvectors()(j, src) / std::sqrt(params.rho(j));
        }
    }
    expected.m_plus = static_cast<int>((expected.gammas.array() > 0.0).count());
    expected.m_minus = k - expected.m_plus;
    return expected;
}

namespace detail {

std::pair<Eigen::VectorXd, Eigen::MatrixXd> lanczos_extremal(
    const Eigen::SparseMatrix<double>& A, int want_low, int want_high, int max_iter,
    double tol) {
    const int n = static_cast<int>(A.rows());
    const int want = want_low + want_high;
    max_iter = std::min(max_iter, n);

    // deterministic start vector
    Rng rng(0x5eedULL ^ static_cast<std::uint64_t>(n));
    Eigen::VectorXd q = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) {
        return rng.uniform() - 0.5;
    });
    q.normalize();

    Eigen::MatrixXd Q(n, max_iter);
    std::vector<double> alpha, beta;  // tridiagonal entries
    Q.col(0) = q;

    Eigen::VectorXd ritz_values;
    Eigen::MatrixXd tri_vectors;
    int j = 0;
    for (; j < max_iter; ++j) {
        Eigen::VectorXd w = A * Q.col(j);
        const double a = Q.col(j).dot(w);
        alpha.push_back(a);
        w -= a * Q.col(j);
        if (j > 0) w -= beta[j - 1] * Q.col(j - 1);
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass) {
            w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
        }
        const double b = w.norm();

        const int dim = j + 1;
        if (dim >= want + 2 || b < 1e-14 || j == max_iter - 1) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
            for (int i = 0; i < dim; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
            ritz_values = tri.eigenvalues();
            tri_vectors = tri.eigenvectors();
            if (dim >= want) {
                const double scale = ritz_values.cwiseAbs().maxCoeff();
                bool converged = true;
                for (int i = 0; i < want_low && converged; ++i) {
                    converged = b * std::abs(tri_vectors(dim - 1, i)) <= tol * scale;
                }
                for (int i = 0; i < want_high && converged; ++i) {
                    converged = b * std::abs(tri_vectors(dim - 1, dim - 1 - i)) <= tol * scale;
                }
                if (converged || b < 1e-14) {
                    Eigen::VectorXd values(want);
                    Eigen::MatrixXd vectors(n, want);
                    int out = 0;
                    for (int i = 0; i < want_low; ++i, ++out) {
                        values(out) = ritz_values(i);
                        vectors.col(out) = Q.leftCols(dim) * tri_vectors.col(i);
                    }
                    for (int i = want_high - 1; i >= 0; --i, ++out) {
                        values(out) = ritz_values(dim - 1 - i);
                        vectors.col(out) = Q.leftCols(dim) * tri_vectors.col(dim - 1 - i);
                    }
                    for (int c = 0; c < want; ++c) vectors.col(c).normalize();
                    return {values, vectors};
                }
            }
        }
        if (b < 1e-14) break;  // invariant subspace smaller than requested
        beta.push_back(b);
        if (j + 1 < max_iter) Q.col(j + 1) = w / b;
    }
    throw Error(ErrorCode::EigensolverFailure, "Lanczos did not converge");
}

}  // namespace detail

SpectralBundle top_spectrum(const SignedMatrix& matrix, const ExpectedSpectrum& expected,
                            int dense_cutoff) {
    const int k = static_cast<int>(expected.gammas.size());
    if (matrix.n < k) {
        throw Error(ErrorCode::DimensionMismatch, "matrix smaller than the community count");
    }
    SpectralBundle bundle;
    bundle.eigenvalues.resize(k);
    bundle.eigenvectors.resize(matrix.n, k);

    if (matrix.n <= dense_cutoff) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(matrix.A));
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::EigensolverFailure, "dense eigendecomposition failed");
        }
        // ascending order; signature rule: m_plus largest, m_minus smallest,
        // laid out descending to match the reference gammas
        int out = 0;
        for (int i = 0; i < expected.m_plus; ++i, ++out) {
            const int src = matrix.n - 1 - i;
            bundle.eigenvalues(out) = solver.eigenvalues()(src);
            bundle.eigenvectors.col(out) = solver.eigenvectors().col(src);
        }
        for (int i = expected.m_minus - 1; i >= 0; --i, ++out) {
            bundle.eigenvalues(out) = solver.eigenvalues()(i);
            bundle.eigenvectors.col(out) = solver.eigenvectors().col(i);
        }
    } else {
        auto [values, vectors] =
            detail::lanczos_extremal(matrix.A, expected.m_minus, expected.m_plus);
        // lanczos output is ascending (smallest block first); flip to descending
        int out = 0;
        for (int i = expected.m_minus; i < k; ++i, ++out) {
            const int src = k - 1 - (i - expected.m_minus);
            bundle.eigenvalues(out) = values(src);
            bundle.eigenvectors.col(out) = vectors.col(src);
        }
        for (int i = expected.m_minus - 1; i >= 0; --i, ++out) {
            bundle.eigenvalues(out) = values(i);
            bundle.eigenvectors.col(out) = vectors.col(i);
        }
    }
    return bundle;
}

Eigen::VectorXd entrywise_residual(const SpectralBundle& bundle, const ExpectedSpectrum& expected,
                                   const SignedMatrix& matrix,
                                   const CommunityAssignment& assignment) {
    const int k = static_cast<int>(expected.gammas.size());
    if (bundle.eigenvalues.size() != k || assignment.n() != matrix.n ||
        bundle.eigenvectors.rows() != matrix.n) {
        throw Error(ErrorCode::AlignmentMismatch, "bundle, matrix and assignment must agree");
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(matrix.n));
    Eigen::VectorXd residuals(k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd u_star(matrix.n);
        for (int v = 0; v < matrix.n; ++v) {
            u_star(v) = expected.block_values(i, assignment.labels[v]) * inv_sqrt_n;
        }
        u_star.normalize();
        const Eigen::VectorXd surrogate = (matrix.A * u_star) / expected.gammas(i);
        const double plus = (bundle.eigenvectors.col(i) - surrogate).lpNorm<Eigen::Infinity>();
        const double minus = (-bundle.eigenvectors.col(i) - surrogate).lpNorm<Eigen::Infinity>();
        residuals(i) = std::min(plus, minus);
    }
    return residuals;
}

}  // namespace csbm
