#include "bistable/kernels.hpp"

#include <algorithm>
#include <vector>

#include <Eigen/LU>
#include <omp.h>

namespace bistable::kernels {

namespace {

constexpr Eigen::Index kBlock = 512;

using Idx = Eigen::Index;

inline double link_w(double k, double C, double l, double s) {
    const double d = std::min(k * k, (k - s) * (k - s));
    return 0.5 * C * l * l * d;
}

inline double link_dw(double k, double C, double l, double s) {
    // The short well wins on k < s/2; at the midpoint both branches give the same value.
    const double target = (k < 0.5 * s) ? 0.0 : s;
    return C * l * l * (k - target);
}

inline Sym3 triangle_strain(const Lattice& lat, const Triangle& t, const Eigen::VectorXd& u) {
    const auto& x = lat.positions();
    const auto [n0, n1, n2] = t.nodes;
    Eigen::Matrix2d dx;
    dx.col(0) = x[n1] - x[n0];
    dx.col(1) = x[n2] - x[n0];
    Eigen::Matrix2d du;
    du.col(0) = u.segment<2>(2 * Idx(n1)) - u.segment<2>(2 * Idx(n0));
    du.col(1) = u.segment<2>(2 * Idx(n2)) - u.segment<2>(2 * Idx(n0));
    const Eigen::Matrix2d g = du * dx.inverse();
    return {g(0, 0), 0.5 * (g(0, 1) + g(1, 0)), g(1, 1)};
}

inline double hexagon_row(const Lattice& lat, std::size_t node, const Eigen::VectorXd& kappa) {
    const NodeHexagon h = lat.node_hexagon(node);
    double acc = 0.0;
    for (int k = 0; k < 6; ++k) acc += kappa[Idx(h.spokes[k])] - kappa[Idx(h.rim[k])];
    return acc;
}

// Fixed-block reduction: parallel over blocks, ordered combine.
template <typename T, typename F>
T blocked_reduce(Idx count, T zero, F&& block_sum) {
    const Idx blocks = (count + kBlock - 1) / kBlock;
    std::vector<T> partial(static_cast<std::size_t>(blocks), zero);
#pragma omp parallel for schedule(static)
    for (Idx b = 0; b < blocks; ++b) {
        partial[static_cast<std::size_t>(b)] = block_sum(b * kBlock, std::min(count, (b + 1) * kBlock));
    }
    T total = zero;
    for (const T& v : partial) total = total + v;
    return total;
}

Sym3 operator+(const Sym3& a, const Sym3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

}  // namespace

namespace serial {

Eigen::VectorXd rigidity_apply(const Lattice& lat, const Eigen::VectorXd& u) {
    const auto& edges = lat.edges();
    Eigen::VectorXd kappa(Idx(edges.size()));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Vec2 q = lat.edge_unit(e);
        kappa[Idx(e)] = q.dot(u.segment<2>(2 * Idx(edges[e].j)) - u.segment<2>(2 * Idx(edges[e].i)));
    }
    return kappa;
}

Eigen::VectorXd rigidity_transpose_apply(const Lattice& lat, const Eigen::VectorXd& y) {
    const auto& edges = lat.edges();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * Idx(lat.num_nodes()));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Vec2 q = lat.edge_unit(e) * y[Idx(e)];
        out.segment<2>(2 * Idx(edges[e].j)) += q;
        out.segment<2>(2 * Idx(edges[e].i)) -= q;
    }
    return out;
}

Eigen::VectorXd hexagon_apply(const Lattice& lat, const Eigen::VectorXd& kappa) {
    const auto& interior = lat.interior_nodes();
    Eigen::VectorXd z(Idx(interior.size()));
    for (std::size_t r = 0; r < interior.size(); ++r) z[Idx(r)] = hexagon_row(lat, interior[r], kappa);
    return z;
}

Sym3 triangle_strain_sum(const Lattice& lat, const Eigen::VectorXd& u) {
    Sym3 acc{0.0, 0.0, 0.0};
    for (const auto& t : lat.triangles()) acc = acc + triangle_strain(lat, t, u);
    return acc;
}

Eigen::Vector3d triangle_k_sum(const Lattice& lat, const Eigen::VectorXd& kappa) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (const auto& t : lat.triangles()) {
        for (int r = 0; r < 3; ++r) acc[r] += kappa[Idx(t.edge_by_dir[r])];
    }
    return acc;
}

double link_energy_sum(const Eigen::VectorXd& kappa, double C, double l, double s) {
    double acc = 0.0;
    for (Idx e = 0; e < kappa.size(); ++e) acc += link_w(kappa[e], C, l, s);
    return acc;
}

Eigen::VectorXd link_energy_derivative(const Eigen::VectorXd& kappa, double C, double l, double s) {
    Eigen::VectorXd d(kappa.size());
    for (Idx e = 0; e < kappa.size(); ++e) d[e] = link_dw(kappa[e], C, l, s);
    return d;
}

}  // namespace serial

namespace omp {

Eigen::VectorXd rigidity_apply(const Lattice& lat, const Eigen::VectorXd& u) {
    const auto& edges = lat.edges();
    const Idx count = Idx(edges.size());
    Eigen::VectorXd kappa(count);
#pragma omp parallel for schedule(static)
    for (Idx e = 0; e < count; ++e) {
        const auto& ed = edges[std::size_t(e)];
        const Vec2 q = lat.edge_unit(std::size_t(e));
        kappa[e] = q.dot(u.segment<2>(2 * Idx(ed.j)) - u.segment<2>(2 * Idx(ed.i)));
    }
    return kappa;
}

Eigen::VectorXd rigidity_transpose_apply(const Lattice& lat, const Eigen::VectorXd& y) {
    // Gather per node instead of scattering per edge, so no two threads write the same entry.
    const Idx nodes = Idx(lat.num_nodes());
    const auto& edges = lat.edges();
    Eigen::VectorXd out(2 * nodes);
#pragma omp parallel for schedule(static)
    for (Idx v = 0; v < nodes; ++v) {
        Vec2 acc = Vec2::Zero();
        for (int k = 0; k < 6; ++k) {
            const std::size_t e = lat.incident_edge(std::size_t(v), k);
            if (e == kNoEdge) continue;
            const Vec2 q = lat.edge_unit(e) * y[Idx(e)];
            acc += (edges[e].j == std::size_t(v)) ? q : Vec2(-q);
        }
        out.segment<2>(2 * v) = acc;
    }
    return out;
}

Eigen::VectorXd hexagon_apply(const Lattice& lat, const Eigen::VectorXd& kappa) {
    const auto& interior = lat.interior_nodes();
    const Idx rows = Idx(interior.size());
    Eigen::VectorXd z(rows);
#pragma omp parallel for schedule(static)
    for (Idx r = 0; r < rows; ++r) z[r] = hexagon_row(lat, interior[std::size_t(r)], kappa);
    return z;
}

Sym3 triangle_strain_sum(const Lattice& lat, const Eigen::VectorXd& u) {
    const auto& tris = lat.triangles();
    return blocked_reduce(Idx(tris.size()), Sym3{0.0, 0.0, 0.0}, [&](Idx lo, Idx hi) {
        Sym3 acc{0.0, 0.0, 0.0};
        for (Idx t = lo; t < hi; ++t) acc = acc + triangle_strain(lat, tris[std::size_t(t)], u);
        return acc;
    });
}

Eigen::Vector3d triangle_k_sum(const Lattice& lat, const Eigen::VectorXd& kappa) {
    const auto& tris = lat.triangles();
    return blocked_reduce(Idx(tris.size()), Eigen::Vector3d(Eigen::Vector3d::Zero()), [&](Idx lo, Idx hi) {
        Eigen::Vector3d acc = Eigen::Vector3d::Zero();
        for (Idx t = lo; t < hi; ++t) {
            for (int r = 0; r < 3; ++r) acc[r] += kappa[Idx(tris[std::size_t(t)].edge_by_dir[r])];
        }
        return acc;
    });
}

double link_energy_sum(const Eigen::VectorXd& kappa, double C, double l, double s) {
    return blocked_reduce(kappa.size(), 0.0, [&](Idx lo, Idx hi) {
        double acc = 0.0;
        for (Idx e = lo; e < hi; ++e) acc += link_w(kappa[e], C, l, s);
        return acc;
    });
}

Eigen::VectorXd link_energy_derivative(const Eigen::VectorXd& kappa, double C, double l, double s) {
    Eigen::VectorXd d(kappa.size());
#pragma omp parallel for schedule(static)
    for (Idx e = 0; e < kappa.size(); ++e) d[e] = link_dw(kappa[e], C, l, s);
    return d;
}

}  // namespace omp

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int n) { omp_set_num_threads(std::max(1, n)); }

}  // namespace bistable::kernels
