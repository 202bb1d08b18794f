#include "bistable/compatibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SVD>

#include "bistable/errors.hpp"
#include "bistable/kernels.hpp"

namespace bistable {

namespace {

using Idx = Eigen::Index;
using Triplet = Eigen::Triplet<double>;

constexpr int kDenseSolveMaxSide = 8;

struct SvdRank {
    int rank = 0;
    double smallest_kept = 0.0;
    double largest_dropped = 0.0;
};

SvdRank svd_rank(const Eigen::MatrixXd& m, double tol) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    SvdRank out;
    if (sv.size() == 0 || sv[0] == 0.0) return out;
    const double top = sv[0];
    out.smallest_kept = 1.0;
    for (Idx k = 0; k < sv.size(); ++k) {
        const double rel = sv[k] / top;
        if (rel > tol) {
            ++out.rank;
            out.smallest_kept = rel;
        } else {
            out.largest_dropped = std::max(out.largest_dropped, rel);
        }
    }
    return out;
}

// Gauge: pin u_0 and the y component of node 0's q1 neighbour. Returns the
// map from full displacement index to reduced column (or -1 when pinned).
std::vector<Idx> free_columns(const Lattice& lat) {
    const std::size_t nb = gauge_neighbour(lat);
    std::vector<Idx> col(2 * lat.num_nodes(), -1);
    Idx next = 0;
    for (std::size_t k = 0; k < col.size(); ++k) {
        if (k == 0 || k == 1 || k == 2 * nb + 1) continue;
        col[k] = next++;
    }
    return col;
}

SparseMatrix reduced_rigidity(const Lattice& lat, const std::vector<Idx>& col) {
    std::vector<Triplet> trip;
    trip.reserve(4 * lat.num_edges());
    const auto& edges = lat.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Vec2 q = lat.edge_unit(e);
        for (int c = 0; c < 2; ++c) {
            if (Idx k = col[2 * edges[e].j + c]; k >= 0) trip.emplace_back(Idx(e), k, q[c]);
            if (Idx k = col[2 * edges[e].i + c]; k >= 0) trip.emplace_back(Idx(e), k, -q[c]);
        }
    }
    const Idx free = *std::max_element(col.begin(), col.end()) + 1;
    SparseMatrix m(Idx(lat.num_edges()), free);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

}  // namespace

SparseMatrix rigidity_matrix(const Lattice& lat) {
    std::vector<Triplet> trip;
    trip.reserve(4 * lat.num_edges());
    const auto& edges = lat.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Vec2 q = lat.edge_unit(e);
        for (int c = 0; c < 2; ++c) {
            trip.emplace_back(Idx(e), Idx(2 * edges[e].i + c), -q[c]);
            trip.emplace_back(Idx(e), Idx(2 * edges[e].j + c), q[c]);
        }
    }
    SparseMatrix r(Idx(lat.num_edges()), Idx(2 * lat.num_nodes()));
    r.setFromTriplets(trip.begin(), trip.end());
    return r;
}

SparseMatrix hexagon_matrix(const Lattice& lat) {
    std::vector<Triplet> trip;
    const auto& interior = lat.interior_nodes();
    trip.reserve(12 * interior.size());
    for (std::size_t row = 0; row < interior.size(); ++row) {
        const NodeHexagon h = lat.node_hexagon(interior[row]);
        for (int k = 0; k < 6; ++k) {
            trip.emplace_back(Idx(row), Idx(h.spokes[k]), 1.0);
            trip.emplace_back(Idx(row), Idx(h.rim[k]), -1.0);
        }
    }
    SparseMatrix z(Idx(interior.size()), Idx(lat.num_edges()));
    z.setFromTriplets(trip.begin(), trip.end());
    return z;
}

RankReport rank_report(const Lattice& lat, double tolerance) {
    const Eigen::MatrixXd r = Eigen::MatrixXd(rigidity_matrix(lat));
    const Eigen::MatrixXd z = Eigen::MatrixXd(hexagon_matrix(lat));
    const SvdRank sr = svd_rank(r, tolerance);
    const SvdRank sz = svd_rank(z, tolerance);

    RankReport rep;
    rep.rank_R = sr.rank;
    rep.nullity_R = int(r.cols()) - sr.rank;
    rep.rank_Z = sz.rank;
    rep.R_smallest_kept = sr.smallest_kept;
    rep.R_largest_dropped = sr.largest_dropped;
    rep.Z_smallest_kept = sz.smallest_kept;
    rep.Z_largest_dropped = sz.largest_dropped;

    auto close = [&](const SvdRank& s) {
        return s.smallest_kept < 10.0 * tolerance ||
               (s.largest_dropped > 0.0 && s.largest_dropped * 10.0 > tolerance);
    };
    if (close(sr) || close(sz)) {
        const double cond_r = sr.smallest_kept > 0.0 ? 1.0 / sr.smallest_kept : INFINITY;
        const double cond_z = sz.smallest_kept > 0.0 ? 1.0 / sz.smallest_kept : INFINITY;
        rep.warning = "singular-value gap near threshold; condition estimates R " + std::to_string(cond_r) +
                      ", Z " + std::to_string(cond_z);
    }
    return rep;
}

std::size_t gauge_neighbour(const Lattice& lat) {
    const Axial a = lat.axial()[0];
    return lat.node_at({a.p + 1, a.q});
}

Eigen::VectorXd solve_displacements(const Lattice& lat, const Eigen::VectorXd& kappa) {
    if (kappa.size() != Idx(lat.num_edges())) {
        throw InvalidArgument("elongation vector has length " + std::to_string(kappa.size()) + ", expected " +
                              std::to_string(lat.num_edges()));
    }
    const double norm = kappa.norm();
    const double tol = kCompatTolerance * norm;
    const Eigen::VectorXd hex = kernels::omp::hexagon_apply(lat, kappa);
    if (hex.size() > 0) {
        Idx worst = 0;
        const double worst_value = hex.cwiseAbs().maxCoeff(&worst);
        if (worst_value > tol) {
            throw IncompatibleElongations(lat.interior_nodes()[std::size_t(worst)], worst_value, tol);
        }
    }

    const Idx full = 2 * Idx(lat.num_nodes());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(full);
    if (norm == 0.0) return u;

    const std::vector<Idx> col = free_columns(lat);
    const SparseMatrix a = reduced_rigidity(lat, col);
    Eigen::VectorXd x;
    if (lat.side() <= kDenseSolveMaxSide) {
        x = Eigen::MatrixXd(a).colPivHouseholderQr().solve(kappa);
    } else {
        Eigen::LeastSquaresConjugateGradient<SparseMatrix> cg;
        cg.setTolerance(1e-15);
        cg.setMaxIterations(20 * a.cols());
        cg.compute(a);
        x = cg.solve(kappa);
    }
    for (Idx k = 0; k < full; ++k) {
        if (col[std::size_t(k)] >= 0) u[k] = x[col[std::size_t(k)]];
    }

    const double residual = (kernels::omp::rigidity_apply(lat, u) - kappa).norm();
    if (residual > tol) {
        throw NonConvergence("displacement solve residual " + std::to_string(residual) + " exceeds " +
                                 std::to_string(tol),
                             residual);
    }
    return u;
}

Eigen::VectorXd project_to_compatible(const Lattice& lat, const Eigen::VectorXd& v) {
    const Eigen::MatrixXd z = Eigen::MatrixXd(hexagon_matrix(lat));
    // Z has full row rank, so its right singular vectors for the M nonzero
    // singular values span the row space; remove that component.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinV);
    const Eigen::MatrixXd& vr = svd.matrixV();
    return v - vr * (vr.transpose() * v);
}

double nonlinear_node_residual(const std::array<double, 6>& spokes, const std::array<double, 6>& rims) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        const double a = spokes[i];
        const double b = spokes[(i + 1) % 6];
        const double c = rims[i];
        const double cosine = (a * a + b * b - c * c) / (2.0 * a * b);
        if (!(cosine > -1.0 && cosine < 1.0)) throw DegenerateTriangle(i);
        sum += std::acos(cosine);
    }
    return sum - 2.0 * std::numbers::pi;
}

std::pair<std::array<double, 6>, std::array<double, 6>> node_lengths(const Lattice& lat, std::size_t node,
                                                                     const Eigen::VectorXd& kappa,
                                                                     double scale) {
    const NodeHexagon h = lat.node_hexagon(node);
    std::array<double, 6> spokes{};
    std::array<double, 6> rims{};
    for (int k = 0; k < 6; ++k) {
        spokes[k] = 1.0 + scale * kappa[Idx(h.spokes[k])];
        rims[k] = 1.0 + scale * kappa[Idx(h.rim[k])];
    }
    return {spokes, rims};
}

void write_triplets(std::ostream& os, const SparseMatrix& m) {
    os.precision(17);
    for (Idx r = 0; r < m.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
}

}  // namespace bistable
