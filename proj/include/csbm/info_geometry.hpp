#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "csbm/model.hpp"

namespace csbm {

struct DivergenceResult {
    double delta_plus = 0.0;  // Chernoff-Hellinger divergence
    double xi_star = 0.5;     // maximizer in [0,1]
};

struct PairGeometry {
    int i = 0;
    int j = 0;
    DivergenceResult divergence;
    Eigen::VectorXd w_star;  // genie hyperplane normal, length 2k
    Eigen::VectorXd x_star;  // tangency point, length 2k
};

struct ThresholdReport {
    double t_c = 0.0;
    std::pair<int, int> argmin_pair;
    std::vector<PairGeometry> per_pair;  // all i < j, lexicographic

    const PairGeometry& pair(int i, int j) const;
};

/// CH_xi(mu, nu) = sum_i [xi*mu_i + (1-xi)*nu_i - mu_i^xi * nu_i^(1-xi)].
double ch_value(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, double xi);

/// Maximum of CH_xi over xi in [0,1] via golden-section search (CH_xi is
/// concave in xi). mu == nu returns (0, 0.5) by convention.
DivergenceResult ch_divergence(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

/// theta_i = (rho_r P_ri, rho_r (1 - P_ri))_{r in [k]}, length 2k.
Eigen::VectorXd theta(const ModelParams& params, int i);

ThresholdReport critical_threshold(const ModelParams& params);

/// w* = (log(P_ri/P_rj), log((1-P_ri)/(1-P_rj)))_{r in [k]}.
Eigen::VectorXd genie_weight(const ModelParams& params, int i, int j);

/// x* = (rho_r P_ri^xi* P_rj^(1-xi*), rho_r (1-P_ri)^xi* (1-P_rj)^(1-xi*))_r,
/// the single point where the two critical dissonance ranges touch.
Eigen::VectorXd tangency_point(const ModelParams& params, int i, int j);

/// eta_i(x), with 0*log(0) terms taken as 0. Entries must be >= 0.
double dissonance(const ModelParams& params, int i, const Eigen::VectorXd& x);

bool in_dissonance_range(const ModelParams& params, int i, const Eigen::VectorXd& x,
                         double delta);

bool separates(const Eigen::VectorXd& w, double beta,
               const std::vector<DegreeProfile>& profiles_i,
               const std::vector<DegreeProfile>& profiles_j);

struct ConfusionWitness {
    DegreeProfile d_i;
    DegreeProfile d_j;
    std::vector<int> signs;  // +1 / -1 per hyperplane
};

std::optional<ConfusionWitness> confuses(const std::vector<Eigen::VectorXd>& ws,
                                         const std::vector<double>& gammas, double beta,
                                         const std::vector<DegreeProfile>& profiles_i,
                                         const std::vector<DegreeProfile>& profiles_j);

/// A 2D slice through the 2k-dimensional profile space for boundary tracing.
struct SlicePlane {
    Eigen::VectorXd anchor;
    Eigen::VectorXd e1;  // orthonormal in-plane directions
    Eigen::VectorXd e2;
};

/// Default plane through x*(i,j) spanned by the directions toward theta_i
/// and theta_j (Gram-Schmidt orthonormalized).
SlicePlane default_slice_plane(const ModelParams& params, int i, int j);

struct BoundaryPoint {
    int ray_index;
    double coord1;  // plane coordinates relative to the anchor
    double coord2;
};

/// For each of `resolution` rays in the plane, the radius where eta_i
/// crosses delta, located by bisection to 1e-9.
std::vector<BoundaryPoint> dr_boundary_sample(const ModelParams& params, int i, double delta,
                                              const SlicePlane& plane, int resolution);

}  // namespace csbm
