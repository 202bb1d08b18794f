#include "bistable/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "bistable/errors.hpp"
#include "bistable/kernels.hpp"

namespace bistable {

namespace {

constexpr double kFeasTol = 1e-12;

// W(eps) = eps^T A eps in (a, b, c) coordinates.
Eigen::Matrix3d cauchy_form(double C) {
    Eigen::Matrix3d a;
    a << 0.75, 0.0, -0.25,
         0.0, 2.0, 0.0,
         -0.25, 0.0, 0.75;
    return (2.0 * C / 3.0) * a;
}

}  // namespace

void RodEnergyParams::validate() const {
    if (!(l > 0.0) || !(s > 0.0) || !(C > 0.0)) throw InvalidArgument("l, s and C must be positive");
}

double rod_energy_quadratic(double x, const RodEnergyParams& p) {
    const double lo = x - p.l;
    const double hi = x - p.l * (1.0 + p.s);
    return std::min(0.5 * lo * lo, 0.5 * p.C * hi * hi);
}

double rod_energy_poly(double x, const RodEnergyParams& p) {
    const double lo = x - p.l;
    const double hi = x - p.l * (1.0 + p.s);
    return lo * lo * hi * hi;
}

double link_energy(double kappa, const RodEnergyParams& p) {
    const double d = std::min(kappa * kappa, (kappa - p.s) * (kappa - p.s));
    return 0.5 * p.C * p.l * p.l * d;
}

double total_energy(const Lattice& lat, const Eigen::VectorXd& u, const RodEnergyParams& p) {
    return kernels::omp::link_energy_sum(kernels::omp::rigidity_apply(lat, u), p.C, p.l, p.s);
}

Eigen::VectorXd total_energy_gradient(const Lattice& lat, const Eigen::VectorXd& u, const RodEnergyParams& p) {
    const Eigen::VectorXd kappa = kernels::omp::rigidity_apply(lat, u);
    return kernels::omp::rigidity_transpose_apply(lat, kernels::omp::link_energy_derivative(kappa, p.C, p.l, p.s));
}

double cauchy_energy(const StrainTensor& eps, double C) {
    const double tr = eps.trace();
    const double tr_sq = eps.a * eps.a + 2.0 * eps.b * eps.b + eps.c * eps.c;
    return (2.0 * C / 3.0) * (tr_sq - 0.25 * tr * tr);
}

BoxQpResult minimize_box_qp(const Eigen::Matrix3d& H, const Eigen::Vector3d& g) {
    BoxQpResult best;
    best.value = std::numeric_limits<double>::infinity();
    // pattern digit per variable: 0 -> fixed at 0, 1 -> fixed at 1, 2 -> free
    for (int pattern = 0; pattern < 27; ++pattern) {
        std::array<int, 3> state{pattern % 3, (pattern / 3) % 3, pattern / 9};
        std::array<int, 3> free_idx{};
        int nfree = 0;
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        for (int i = 0; i < 3; ++i) {
            if (state[i] == 2) {
                free_idx[nfree++] = i;
            } else {
                x[i] = state[i];
            }
        }
        if (nfree > 0) {
            Eigen::MatrixXd hff(nfree, nfree);
            Eigen::VectorXd rhs(nfree);
            for (int r = 0; r < nfree; ++r) {
                const int i = free_idx[r];
                rhs[r] = -g[i];
                for (int j = 0; j < 3; ++j) {
                    if (state[j] != 2) rhs[r] -= H(i, j) * x[j];
                }
                for (int c = 0; c < nfree; ++c) hff(r, c) = H(i, free_idx[c]);
            }
            const Eigen::VectorXd sol = hff.llt().solve(rhs);
            bool feasible = true;
            for (int r = 0; r < nfree; ++r) {
                if (sol[r] < -kFeasTol || sol[r] > 1.0 + kFeasTol) feasible = false;
                x[free_idx[r]] = std::clamp(sol[r], 0.0, 1.0);
            }
            if (!feasible) continue;
        }
        const double value = 0.5 * x.dot(H * x) + g.dot(x);
        if (value < best.value) {
            best.value = value;
            best.x = x;
            best.active.clear();
            for (int i = 0; i < 3; ++i) {
                if (state[i] != 2) best.active.push_back("x" + std::to_string(i + 1) + "=" + std::to_string(state[i]));
            }
        }
    }
    return best;
}

EffectiveDensityResult effective_density_full(const StrainTensor& e, const RodEnergyParams& p) {
    p.validate();
    EffectiveDensityResult out;
    const Membership mem = flat_bottom_membership(e, p.s);
    if (mem.inside) {
        out.J = 0.0;
        out.minimizer = e;
        out.x = mem.x;
        return out;
    }
    // f(x) = (y - s M x)^T A (y - s M x) = 1/2 x^T H x + g^T x + y^T A y
    const Eigen::Matrix3d A = cauchy_form(p.C);
    const Eigen::Matrix3d M = p.s * q_matrices().Qinv;
    const Eigen::Vector3d y = m_inverse(e);
    const Eigen::Matrix3d H = 2.0 * M.transpose() * A * M;
    const Eigen::Vector3d g = -2.0 * M.transpose() * (A * y);
    const BoxQpResult qp = minimize_box_qp(0.5 * (H + H.transpose()), g);
    out.x = qp.x;
    out.minimizer = m_map(M * qp.x);
    out.J = std::max(0.0, cauchy_energy(e - out.minimizer, p.C));
    out.active_constraints = qp.active;
    return out;
}

double effective_density_corners(const StrainTensor& e, const RodEnergyParams& p) {
    p.validate();
    if (flat_bottom_membership(e, p.s).inside) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : flat_bottom_vertices(p.s).vertices) best = std::min(best, cauchy_energy(e - v.E, p.C));
    return best;
}

double finite_size_gap(int n, double s) {
    const Counts c = counts(n);
    return std::sqrt(2.0) * double(c.boundary_edges) / double(c.triangles) * q_inverse_norm2() * s;
}

RelaxResult relax(const Lattice& lat, const Eigen::VectorXd& u0, const RodEnergyParams& p, int max_iters,
                  double grad_tol) {
    p.validate();
    constexpr double kArmijo = 1e-4;
    constexpr double kMinStep = 1e-20;

    RelaxResult res;
    res.u = u0;
    res.energy = total_energy(lat, res.u, p);
    Eigen::VectorXd grad = total_energy_gradient(lat, res.u, p);
    res.grad_norm = grad.norm();
    while (res.grad_norm > grad_tol && res.iters < max_iters) {
        const double g2 = res.grad_norm * res.grad_norm;
        double step = 1.0;
        Eigen::VectorXd trial;
        double trial_energy = 0.0;
        bool accepted = false;
        while (step >= kMinStep) {
            trial = res.u - step * grad;
            trial_energy = total_energy(lat, trial, p);
            if (trial_energy <= res.energy - kArmijo * step * g2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent at machine precision
        res.u = std::move(trial);
        res.energy = trial_energy;
        grad = total_energy_gradient(lat, res.u, p);
        res.grad_norm = grad.norm();
        ++res.iters;
    }
    res.converged = res.grad_norm <= grad_tol;
    return res;
}

}  // namespace bistable
