#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bistable/lattice.hpp"
#include "bistable/strain.hpp"

namespace bistable {

struct RodEnergyParams {
    double l = 1.0;  // reference length
    double s = 0.1;  // critical relative elongation
    double C = 1.0;  // stiffness of the long well

    /// Throws InvalidArgument unless l, s, C > 0.
    void validate() const;
};

/// min{ (x - l)^2 / 2, C (x - l(1+s))^2 / 2 }
double rod_energy_quadratic(double x, const RodEnergyParams& p);
/// (x - l)^2 (x - l(1+s))^2
double rod_energy_poly(double x, const RodEnergyParams& p);
/// (C l^2 / 2) min{ kappa^2, (kappa - s)^2 }
double link_energy(double kappa, const RodEnergyParams& p);

/// Sum of link energies of kappa = R u.
double total_energy(const Lattice& lat, const Eigen::VectorXd& u, const RodEnergyParams& p);
/// Gradient of total_energy with respect to u.
Eigen::VectorXd total_energy_gradient(const Lattice& lat, const Eigen::VectorXd& u, const RodEnergyParams& p);

/// Isotropic quadratic form (2C/3) [Tr(eps^2) - (Tr eps)^2 / 4].
double cauchy_energy(const StrainTensor& eps, double C);

/// Minimizer of 1/2 x^T H x + g^T x over the unit cube.
struct BoxQpResult {
    Eigen::Vector3d x;
    double value = 0.0;             // 1/2 x^T H x + g^T x
    std::vector<std::string> active;  // e.g. "x1=0", "x3=1"
};

/// Exact solution by enumerating the 27 face/edge/vertex patterns of the cube.
/// H must be symmetric positive definite.
BoxQpResult minimize_box_qp(const Eigen::Matrix3d& H, const Eigen::Vector3d& g);

struct EffectiveDensityResult {
    double J = 0.0;
    StrainTensor minimizer;  // element of D
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    std::vector<std::string> active_constraints;
};

/// min over E in D of cauchy_energy(e - E, C).
EffectiveDensityResult effective_density_full(const StrainTensor& e, const RodEnergyParams& p);

/// 0 inside D, otherwise the minimum over the eight corners of D.
double effective_density_corners(const StrainTensor& e, const RodEnergyParams& p);

/// sqrt(2) (EB/T) |Q^{-1}|_2 s: the boundary-term scale separating J_n from its limit.
double finite_size_gap(int n, double s);

struct RelaxResult {
    Eigen::VectorXd u;
    double energy = 0.0;
    double grad_norm = 0.0;
    int iters = 0;
    bool converged = false;  // grad_norm <= grad_tol
};

/// Steepest descent with Armijo backtracking (step 1, halving, c = 1e-4).
/// Energy never increases between accepted iterates.
RelaxResult relax(const Lattice& lat, const Eigen::VectorXd& u0, const RodEnergyParams& p, int max_iters,
                  double grad_tol);

}  // namespace bistable
