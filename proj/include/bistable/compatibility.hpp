#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "bistable/lattice.hpp"

namespace bistable {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// E x 2N map from nodal displacements (u_x, u_y interleaved) to edge elongations.
SparseMatrix rigidity_matrix(const Lattice& lat);

/// M x E hexagonal equations: +1 on the six spokes, -1 on the six rim edges.
SparseMatrix hexagon_matrix(const Lattice& lat);

inline constexpr double kRankTolerance = 1e-10;

struct RankReport {
    int rank_R = 0;
    int nullity_R = 0;
    int rank_Z = 0;
    /// Smallest kept / largest dropped singular value, relative to the largest.
    double R_smallest_kept = 0.0;
    double R_largest_dropped = 0.0;
    double Z_smallest_kept = 0.0;
    double Z_largest_dropped = 0.0;
    /// Set when a relative singular value falls within a factor 10 of the threshold.
    std::optional<std::string> warning;
};

/// Ranks of R and Z by dense SVD. Intended for n <= 6 or so.
RankReport rank_report(const Lattice& lat, double tolerance = kRankTolerance);

/// Relative tolerance on the hexagonal residual accepted by solve_displacements.
inline constexpr double kCompatTolerance = 1e-9;

/// Displacements realizing `kappa`, with node 0 pinned and the y component of
/// its q1 neighbour fixed to zero. Throws IncompatibleElongations when
/// |Z kappa|_inf > 1e-9 |kappa|.
Eigen::VectorXd solve_displacements(const Lattice& lat, const Eigen::VectorXd& kappa);

/// Index of the node whose y displacement is pinned by the gauge.
std::size_t gauge_neighbour(const Lattice& lat);

/// Orthogonal projection onto ker Z, computed from the SVD of Z.
Eigen::VectorXd project_to_compatible(const Lattice& lat, const Eigen::VectorXd& v);

/// Nodal angle-sum defect: sum of the six angles at the node minus 2 pi.
/// spokes[i], spokes[i+1] and rims[i] form triangle i. Throws DegenerateTriangle.
double nonlinear_node_residual(const std::array<double, 6>& spokes, const std::array<double, 6>& rims);

/// Lengths l(1 + kappa) of the spokes and rim of an interior node.
std::pair<std::array<double, 6>, std::array<double, 6>> node_lengths(const Lattice& lat, std::size_t node,
                                                                     const Eigen::VectorXd& kappa,
                                                                     double scale = 1.0);

/// Writes "row col value" lines, one per stored entry.
void write_triplets(std::ostream& os, const SparseMatrix& m);

}  // namespace bistable
