#pragma once

// Data-parallel loops over edges, triangles and interior nodes.
//
// Every kernel exists twice: `serial` is the straightforward reference loop,
// `omp` is the OpenMP version used by the rest of the library. Reductions in
// `omp` sum fixed-size blocks and then combine the block sums in order, so the
// result does not depend on the thread count.

#include <array>

#include <Eigen/Core>

#include "bistable/lattice.hpp"

namespace bistable::kernels {

/// Sum of per-triangle symmetrized displacement gradients, as (a, b, c).
using Sym3 = std::array<double, 3>;

namespace serial {

/// kappa_e = unit(x_j - x_i) . (u_j - u_i) for every edge.
Eigen::VectorXd rigidity_apply(const Lattice& lat, const Eigen::VectorXd& u);
/// R^T y, length 2N.
Eigen::VectorXd rigidity_transpose_apply(const Lattice& lat, const Eigen::VectorXd& y);
/// Z kappa: spoke sum minus rim sum per interior node.
Eigen::VectorXd hexagon_apply(const Lattice& lat, const Eigen::VectorXd& kappa);
Sym3 triangle_strain_sum(const Lattice& lat, const Eigen::VectorXd& u);
/// Sum over triangles of the per-direction elongation triple k_Delta.
Eigen::Vector3d triangle_k_sum(const Lattice& lat, const Eigen::VectorXd& kappa);
/// Sum of w(kappa) = (C l^2 / 2) min(kappa^2, (kappa - s)^2).
double link_energy_sum(const Eigen::VectorXd& kappa, double C, double l, double s);
/// dW/dkappa per edge.
Eigen::VectorXd link_energy_derivative(const Eigen::VectorXd& kappa, double C, double l, double s);

}  // namespace serial

namespace omp {

Eigen::VectorXd rigidity_apply(const Lattice& lat, const Eigen::VectorXd& u);
Eigen::VectorXd rigidity_transpose_apply(const Lattice& lat, const Eigen::VectorXd& y);
Eigen::VectorXd hexagon_apply(const Lattice& lat, const Eigen::VectorXd& kappa);
Sym3 triangle_strain_sum(const Lattice& lat, const Eigen::VectorXd& u);
Eigen::Vector3d triangle_k_sum(const Lattice& lat, const Eigen::VectorXd& kappa);
double link_energy_sum(const Eigen::VectorXd& kappa, double C, double l, double s);
Eigen::VectorXd link_energy_derivative(const Eigen::VectorXd& kappa, double C, double l, double s);

}  // namespace omp

/// Number of OpenMP threads the parallel kernels will use.
int thread_count();
/// Sets the thread count for subsequent parallel regions (n >= 1).
void set_thread_count(int n);

}  // namespace bistable::kernels
