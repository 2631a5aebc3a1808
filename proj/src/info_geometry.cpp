#include "csbm/info_geometry.hpp"

#include <cmath>
#include <limits>

namespace csbm {

namespace {

void check_positive_pair(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
    if (mu.size() != nu.size()) {
        throw Error(ErrorCode::DimensionMismatch, "mu and nu differ in length");
    }
    if ((mu.array() <= 0.0).any() || (nu.array() <= 0.0).any()) {
        throw Error(ErrorCode::NonPositiveEntry, "CH divergence needs strictly positive entries");
    }
}

void check_community(const ModelParams& params, int i) {
    if (i < 0 || i >= params.k) {
        throw Error(ErrorCode::CommunityOutOfRange, "community index out of range");
    }
}

}  // namespace

const PairGeometry& ThresholdReport::pair(int i, int j) const {
    for (const auto& pg : per_pair) {
        if ((pg.i == i && pg.j == j) || (pg.i == j && pg.j == i)) return pg;
    }
    throw Error(ErrorCode::CommunityOutOfRange, "no such community pair in report");
}

double ch_value(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, double xi) {
    check_positive_pair(mu, nu);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        sum += xi * mu(i) + (1.0 - xi) * nu(i) -
               nu(i) * std::exp(xi * std::log(mu(i) / nu(i)));
    }
    return sum;
}

DivergenceResult ch_divergence(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
    check_positive_pair(mu, nu);
    if (mu == nu) {
        return {0.0, 0.5};  // argmax is the whole interval
    }
    // golden-section maximization; CH_xi is strictly concave for mu != nu
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = ch_value(mu, nu, c);
    double fd = ch_value(mu, nu, d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = ch_value(mu, nu, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = ch_value(mu, nu, d);
        }
    }
    double xi = 0.5 * (a + b);
    // golden section localizes the maximizer only to ~sqrt(eps) because the
    // bracketing comparisons become noise near the flat top; Newton on the
    // analytic derivative polishes it to machine precision
    for (int iter = 0; iter < 100; ++iter) {
        double d1 = 0.0, d2 = 0.0;
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            const double L = std::log(mu(i) / nu(i));
            const double term = nu(i) * std::exp(xi * L);
            d1 += mu(i) - nu(i) - L * term;
            d2 -= L * L * term;
        }
        if (d2 == 0.0) break;
        const double step = d1 / d2;
        const double next = std::min(1.0, std::max(0.0, xi - step));
        if (next == xi) break;
        xi = next;
        if (std::abs(step) < 1e-15) break;
    }
    return {std::max(ch_value(mu, nu, xi), 0.0), xi};
}

Eigen::VectorXd theta(const ModelParams& params, int i) {
    check_community(params, i);
    Eigen::VectorXd th(2 * params.k);
    for (int r = 0; r < params.k; ++r) {
        th(2 * r) = params.rho(r) * params.P(r, i);
        th(2 * r + 1) = params.rho(r) * (1.0 - params.P(r, i));
    }
    return th;
}

Eigen::VectorXd genie_weight(const ModelParams& params, int i, int j) {
    check_community(params, i);
    check_community(params, j);
    Eigen::VectorXd w(2 * params.k);
    for (int r = 0; r < params.k; ++r) {
        w(2 * r) = std::log(params.P(r, i) / params.P(r, j));
        w(2 * r + 1) = std::log((1.0 - params.P(r, i)) / (1.0 - params.P(r, j)));
    }
    return w;
}

Eigen::VectorXd tangency_point(const ModelParams& params, int i, int j) {
    check_community(params, i);
    check_community(params, j);
    const double xi = ch_divergence(theta(params, i), theta(params, j)).xi_star;
    Eigen::VectorXd x(2 * params.k);
    for (int r = 0; r < params.k; ++r) {
        x(2 * r) = params.rho(r) * std::pow(params.P(r, i), xi) *
                   std::pow(params.P(r, j), 1.0 - xi);
        x(2 * r + 1) = params.rho(r) * std::pow(1.0 - params.P(r, i), xi) *
                       std::pow(1.0 - params.P(r, j), 1.0 - xi);
    }
    return x;
}

ThresholdReport critical_threshold(const ModelParams& params) {
    ThresholdReport report;
    double min_div = std::numeric_limits<double>::infinity();
    for (int i = 0; i < params.k; ++i) {
        for (int j = i + 1; j < params.k; ++j) {
            PairGeometry pg;
            pg.i = i;
            pg.j = j;
            pg.divergence = ch_divergence(theta(params, i), theta(params, j));
            if (pg.divergence.delta_plus <= 1e-14) {
                throw Error(ErrorCode::IndistinguishableCommunities,
                            "communities " + std::to_string(i) + " and " + std::to_string(j) +
                                " have vanishing divergence; t_c is infinite");
            }
            pg.w_star = genie_weight(params, i, j);
            pg.x_star = tangency_point(params, i, j);
            if (pg.divergence.delta_plus < min_div) {
                min_div = pg.divergence.delta_plus;
                report.argmin_pair = {i, j};
            }
            report.per_pair.push_back(std::move(pg));
        }
    }
    report.t_c = 1.0 / min_div;
    return report;
}

double dissonance(const ModelParams& params, int i, const Eigen::VectorXd& x) {
    check_community(params, i);
    if (x.size() != 2 * params.k) {
        throw Error(ErrorCode::DimensionMismatch, "x must have length 2k");
    }
    if ((x.array() < 0.0).any()) {
        throw Error(ErrorCode::NegativeEntry, "dissonance is defined on the nonnegative orthant");
    }
    double eta = 1.0;
    for (int r = 0; r < params.k; ++r) {
        const double mean_p = params.rho(r) * params.P(r, i);
        const double mean_a = params.rho(r) * (1.0 - params.P(r, i));
        const double xp = x(2 * r);
        const double xa = x(2 * r + 1);
        if (xp > 0.0) eta += xp * (std::log(xp / mean_p) - 1.0);
        if (xa > 0.0) eta += xa * (std::log(xa / mean_a) - 1.0);
    }
    return eta;
}

bool in_dissonance_range(const ModelParams& params, int i, const Eigen::VectorXd& x,
                         double delta) {
    return dissonance(params, i, x) <= delta;
}

bool separates(const Eigen::VectorXd& w, double beta,
               const std::vector<DegreeProfile>& profiles_i,
               const std::vector<DegreeProfile>& profiles_j) {
    if (profiles_i.empty() || profiles_j.empty()) {
        throw Error(ErrorCode::EmptyProfileSet, "profile sets must be nonempty");
    }
    for (const auto& d : profiles_i) {
        if (w.dot(d.cast<double>()) < beta / 2.0) return false;
    }
    for (const auto& d : profiles_j) {
        if (w.dot(d.cast<double>()) > -beta / 2.0) return false;
    }
    return true;
}

std::optional<ConfusionWitness> confuses(const std::vector<Eigen::VectorXd>& ws,
                                         const std::vector<double>& gammas, double beta,
                                         const std::vector<DegreeProfile>& profiles_i,
                                         const std::vector<DegreeProfile>& profiles_j) {
    if (ws.size() != gammas.size() || ws.empty()) {
        throw Error(ErrorCode::LengthMismatch, "need one offset per hyperplane");
    }
    if (profiles_i.empty() || profiles_j.empty()) {
        throw Error(ErrorCode::EmptyProfileSet, "profile sets must be nonempty");
    }
    const std::size_t m = ws.size();
    for (const auto& di : profiles_i) {
        for (const auto& dj : profiles_j) {
            std::vector<int> signs(m);
            bool ok = true;
            for (std::size_t r = 0; r < m; ++r) {
                const double a = ws[r].dot(di.cast<double>()) - gammas[r];
                const double b = ws[r].dot(dj.cast<double>()) - gammas[r];
                if (a > beta && b > beta) {
                    signs[r] = 1;
                } else if (-a > beta && -b > beta) {
                    signs[r] = -1;
                } else {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                return ConfusionWitness{di, dj, signs};
            }
        }
    }
    return std::nullopt;
}

SlicePlane default_slice_plane(const ModelParams& params, int i, int j) {
    SlicePlane plane;
    plane.anchor = tangency_point(params, i, j);
    Eigen::VectorXd u1 = theta(params, i) - plane.anchor;
    Eigen::VectorXd u2 = theta(params, j) - plane.anchor;
    plane.e1 = u1.normalized();
    Eigen::VectorXd v2 = u2 - u2.dot(plane.e1) * plane.e1;
    if (v2.norm() < 1e-12) {
        // degenerate: fall back to the first coordinate direction
        v2 = Eigen::VectorXd::Unit(plane.anchor.size(), 0);
        v2 -= v2.dot(plane.e1) * plane.e1;
    }
    plane.e2 = v2.normalized();
    return plane;
}

namespace {

// eta extended by +inf outside the nonnegative orthant, so ray bisection can
// treat "leaves the orthant" and "leaves the range" uniformly
double eta_extended(const ModelParams& params, int i, const Eigen::VectorXd& x) {
    if ((x.array() < 0.0).any()) {
        return std::numeric_limits<double>::infinity();
    }
    return dissonance(params, i, x);
}

}  // namespace

std::vector<BoundaryPoint> dr_boundary_sample(const ModelParams& params, int i, double delta,
                                              const SlicePlane& plane, int resolution) {
    if (!(delta > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "delta must be positive");
    }
    if (dissonance(params, i, plane.anchor) > delta) {
        throw Error(ErrorCode::AnchorOutsideRange, "anchor lies outside the dissonance range");
    }
    std::vector<BoundaryPoint> points;
    points.reserve(resolution);
    for (int m = 0; m < resolution; ++m) {
        const double phi = 2.0 * M_PI * m / resolution;
        const Eigen::VectorXd dir = std::cos(phi) * plane.e1 + std::sin(phi) * plane.e2;
        // bracket the crossing: the range is bounded, so doubling terminates
        double lo = 0.0, hi = 1.0;
        while (eta_extended(params, i, plane.anchor + hi * dir) <= delta) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) {
                throw Error(ErrorCode::InvalidConfig, "unbounded ray in dr_boundary_sample");
            }
        }
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            if (eta_extended(params, i, plane.anchor + mid * dir) <= delta) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double r = 0.5 * (lo + hi);
        points.push_back({m, r * std::cos(phi), r * std::sin(phi)});
    }
    return points;
}

}  // namespace csbm
