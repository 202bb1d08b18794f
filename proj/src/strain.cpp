#include "bistable/strain.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "bistable/compatibility.hpp"
#include "bistable/errors.hpp"
#include "bistable/kernels.hpp"

namespace bistable {

namespace {

using Idx = Eigen::Index;

QMatrices build_q() {
    QMatrices qm;
    for (int r = 1; r <= 3; ++r) {
        const Vec2 q = DirectionVectors::q(r);
        qm.Q.row(r - 1) << q[0] * q[0], 2.0 * q[0] * q[1], q[1] * q[1];
    }
    const double k = std::sqrt(3.0) / 3.0;
    qm.Qinv << 1.0, 0.0, 0.0,
               0.0, k, -k,
               -1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0;
    return qm;
}

}  // namespace

double StrainTensor::frobenius() const { return std::sqrt(a * a + 2.0 * b * b + c * c); }

std::array<double, 2> StrainTensor::eigenvalues() const {
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    return {mean + radius, mean - radius};
}

const QMatrices& q_matrices() {
    static const QMatrices qm = build_q();
    return qm;
}

double q_inverse_norm2() {
    static const double norm = [] {
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(q_matrices().Qinv);
        return svd.singularValues()[0];
    }();
    return norm;
}

StrainTensor m_map(const Eigen::Vector3d& x) { return {x[0], x[1], x[2]}; }

Eigen::Vector3d m_inverse(const StrainTensor& e) { return {e.a, e.b, e.c}; }

StrainTensor strain_from_displacements(const Lattice& lat, const Eigen::VectorXd& u) {
    const kernels::Sym3 sum = kernels::omp::triangle_strain_sum(lat, u);
    const double t = double(lat.num_triangles());
    return {sum[0] / t, sum[1] / t, sum[2] / t};
}

Eigen::Vector3d direction_sums(const Lattice& lat, const Eigen::VectorXd& kappa, bool boundary_only) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    if (boundary_only) {
        for (std::size_t e : lat.boundary_edges()) acc[lat.edges()[e].dir - 1] += kappa[Idx(e)];
    } else {
        const auto& edges = lat.edges();
        for (std::size_t e = 0; e < edges.size(); ++e) acc[edges[e].dir - 1] += kappa[Idx(e)];
    }
    return acc;
}

StrainTensor boundary_term(const Lattice& lat, const Eigen::VectorXd& kappa) {
    const double t = double(lat.num_triangles());
    return m_map(q_matrices().Qinv * direction_sums(lat, kappa, true) / t);
}

StrainTensor strain_from_elongations(const Lattice& lat, const Eigen::VectorXd& kappa) {
    const double e = double(lat.num_edges());
    const double t = double(lat.num_triangles());
    const Eigen::Vector3d kbar = direction_sums(lat, kappa, false) / e;
    const StrainTensor bulk = m_map(2.0 * (e / t) * (q_matrices().Qinv * kbar));
    return bulk - boundary_term(lat, kappa);
}

StrainTensor strain_from_triangle_sum(const Lattice& lat, const Eigen::VectorXd& kappa) {
    const double t = double(lat.num_triangles());
    return m_map(q_matrices().Qinv * kernels::omp::triangle_k_sum(lat, kappa) / t);
}

double boundary_term_bound(const Lattice& lat, const Eigen::VectorXd& kappa) {
    // k_e has a single nonzero component, so |k_e|_2 = |kappa_e|.
    double worst = 0.0;
    for (std::size_t e : lat.boundary_edges()) worst = std::max(worst, std::abs(kappa[Idx(e)]));
    const double ratio = double(lat.boundary_edges().size()) / double(lat.num_triangles());
    return std::sqrt(2.0) * ratio * q_inverse_norm2() * worst;
}

FlatBottomSet flat_bottom_vertices(double s) {
    if (!(s > 0.0)) throw InvalidArgument("critical elongation s must be positive");
    FlatBottomSet set;
    set.s = s;
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector3d x(k & 1, (k >> 1) & 1, (k >> 2) & 1);
        set.vertices[std::size_t(k)] = {x, s * m_map(q_matrices().Qinv * x)};
    }
    return set;
}

Membership flat_bottom_membership(const StrainTensor& e, double s) {
    if (!(s > 0.0)) throw InvalidArgument("critical elongation s must be positive");
    Membership out;
    out.x = q_matrices().Q * m_inverse(e) / s;
    out.inside = (out.x.array() >= -kMembershipTolerance).all() && (out.x.array() <= 1.0 + kMembershipTolerance).all();
    return out;
}

std::vector<FlatBottomSample> flat_bottom_samples(double s, int resolution) {
    if (resolution < 2) throw InvalidArgument("resolution must be >= 2");
    std::vector<FlatBottomSample> out;
    for (const auto& v : flat_bottom_vertices(s).vertices) out.push_back({v.x, v.E, v.E.eigenvalues()});
    const double h = 1.0 / double(resolution - 1);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            for (int k = 0; k < resolution; ++k) {
                const Eigen::Vector3d x(i * h, j * h, k * h);
                const StrainTensor e = s * m_map(q_matrices().Qinv * x);
                out.push_back({x, e, e.eigenvalues()});
            }
        }
    }
    return out;
}

ApproximationReport approximate_strain(const Lattice& lat, const StrainTensor& target, double s) {
    const Membership mem = flat_bottom_membership(target, s);
    if (!mem.inside) throw TargetOutsideD("target strain lies outside the flat-bottom set");
    const Eigen::Vector3d x = mem.x.cwiseMax(0.0).cwiseMin(1.0);

    ApproximationReport rep;
    rep.target = target;
    rep.alpha_target = {x[0], x[1], x[2]};
    rep.state = approx_concentrations(lat, rep.alpha_target, s);
    rep.alpha_star = rep.state.alpha;
    rep.displacements = solve_displacements(lat, rep.state.kappa);
    rep.Estar = strain_from_elongations(lat, rep.state.kappa);
    rep.error = (rep.Estar - target).frobenius();
    rep.bound = 8.0 * s * q_inverse_norm2() / double(lat.side() - 1);
    return rep;
}

}  // namespace bistable
