#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "bistable/lattice.hpp"
#include "bistable/still_states.hpp"

namespace bistable {

/// Symmetric 2x2 matrix [[a, b], [b, c]].
struct StrainTensor {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << a, b, b, c;
        return m;
    }
    static StrainTensor from_matrix(const Eigen::Matrix2d& m) { return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }
    static StrainTensor identity(double scale = 1.0) { return {scale, 0.0, scale}; }

    double trace() const { return a + c; }
    double det() const { return a * c - b * b; }
    double frobenius() const;
    /// (larger, smaller)
    std::array<double, 2> eigenvalues() const;

    friend StrainTensor operator+(const StrainTensor& x, const StrainTensor& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
    friend StrainTensor operator-(const StrainTensor& x, const StrainTensor& y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
    friend StrainTensor operator*(double k, const StrainTensor& x) { return {k * x.a, k * x.b, k * x.c}; }
    friend bool operator==(const StrainTensor&, const StrainTensor&) = default;
};

/// Q maps (a, b, c) to (q_r . E q_r)_r; rows (q_r1^2, 2 q_r1 q_r2, q_r2^2).
struct QMatrices {
    Eigen::Matrix3d Q;
    Eigen::Matrix3d Qinv;
};

/// Q assembled from the direction vectors; Qinv in closed form.
const QMatrices& q_matrices();

/// Spectral norm of Q^{-1}, from its singular values.
double q_inverse_norm2();

StrainTensor m_map(const Eigen::Vector3d& x);
Eigen::Vector3d m_inverse(const StrainTensor& e);

/// Average of the symmetrized gradient of the piecewise-linear interpolant.
StrainTensor strain_from_displacements(const Lattice& lat, const Eigen::VectorXd& u);

/// Edge-sum form: 2 (E/T) m(Q^{-1} kbar) - (1/T) m(Q^{-1} sum_boundary k_e).
StrainTensor strain_from_elongations(const Lattice& lat, const Eigen::VectorXd& kappa);

/// Triangle-sum form: (1/T) m(Q^{-1} sum_triangles k_Delta).
StrainTensor strain_from_triangle_sum(const Lattice& lat, const Eigen::VectorXd& kappa);

/// Per-direction edge sums; with boundary_only, restricted to perimeter edges.
Eigen::Vector3d direction_sums(const Lattice& lat, const Eigen::VectorXd& kappa, bool boundary_only);

/// The boundary correction (1/T) m(Q^{-1} sum_boundary k_e).
StrainTensor boundary_term(const Lattice& lat, const Eigen::VectorXd& kappa);

/// sqrt(2) (EB/T) |Q^{-1}|_2 max_boundary |k_e|_2.
double boundary_term_bound(const Lattice& lat, const Eigen::VectorXd& kappa);

struct FlatBottomVertex {
    Eigen::Vector3d x;  // cube corner
    StrainTensor E;     // s m(Q^{-1} x)
};

/// The parallelepiped D = { s m(Q^{-1} x) : x in [0,1]^3 } through its 8 corners.
struct FlatBottomSet {
    double s = 0.0;
    std::array<FlatBottomVertex, 8> vertices;
};

FlatBottomSet flat_bottom_vertices(double s);

inline constexpr double kMembershipTolerance = 1e-12;

struct Membership {
    bool inside = false;
    Eigen::Vector3d x;  // cube coordinates (1/s) Q m^{-1}(E)
};

Membership flat_bottom_membership(const StrainTensor& e, double s);

struct FlatBottomSample {
    Eigen::Vector3d x;
    StrainTensor E;
    std::array<double, 2> lambda;
};

/// Corners, then a uniform grid of `resolution` points per cube axis.
std::vector<FlatBottomSample> flat_bottom_samples(double s, int resolution);

struct ApproximationReport {
    StrainTensor target;
    StrainTensor Estar;
    Concentrations alpha_target{};
    Concentrations alpha_star{};
    double error = 0.0;  // |E* - E|_F
    double bound = 0.0;  // 8 s |Q^{-1}|_2 / (n - 1)
    StillState state;
    Eigen::VectorXd displacements;
};

/// Still-state approximation of a target strain in D. Throws TargetOutsideD.
ApproximationReport approximate_strain(const Lattice& lat, const StrainTensor& target, double s);

}  // namespace bistable
