#include "bistable/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "bistable/errors.hpp"

namespace bistable {

namespace {

int hex_radius(Axial a) {
    return std::max({std::abs(a.p), std::abs(a.q), std::abs(a.p + a.q)});
}

Axial operator+(Axial a, Axial b) { return {a.p + b.p, a.q + b.q}; }

void require_side(int n) {
    if (n < 2) {
        throw InvalidArgument("lattice side n must be >= 2, got " + std::to_string(n));
    }
}

}  // namespace

Vec2 DirectionVectors::q(int r) {
    const double h = std::sqrt(3.0) / 2.0;
    switch (r) {
        case 1: return {1.0, 0.0};
        case 2: return {0.5, h};
        case 3: return {-0.5, h};
        default: throw InvalidArgument("direction label must be 1, 2 or 3");
    }
}

std::array<Vec2, 3> DirectionVectors::all() { return {q(1), q(2), q(3)}; }

Counts counts(int n) {
    require_side(n);
    const long long m = n;
    return {3 * m * m - 3 * m + 1, 9 * m * m - 15 * m + 6, 3 * m * m - 9 * m + 7,
            6 * (m - 1) * (m - 1), 6 * (m - 1)};
}

const std::array<Axial, 6>& Lattice::hex_offsets() {
    static const std::array<Axial, 6> offsets{
        {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
    return offsets;
}

Lattice::Lattice(int n) : n_(n) {
    require_side(n);
    const int r = n - 1;
    const int width = 2 * n - 1;

    for (int p = -r; p <= r; ++p) {
        for (int q = -r; q <= r; ++q) {
            if (hex_radius({p, q}) <= r) axial_.push_back({p, q});
        }
    }
    // The double loop already yields lexicographic order.
    grid_.assign(static_cast<std::size_t>(width) * width, kNoEdge);
    positions_.reserve(axial_.size());
    const Vec2 q1 = DirectionVectors::q(1);
    const Vec2 q2 = DirectionVectors::q(2);
    for (std::size_t k = 0; k < axial_.size(); ++k) {
        const Axial a = axial_[k];
        grid_[static_cast<std::size_t>(a.p + r) * width + (a.q + r)] = k;
        positions_.push_back(a.p * q1 + a.q * q2);
    }

    // Each node is the lower index of exactly one potential edge per direction,
    // so scanning nodes in order and directions 1..3 gives the sorted edge list.
    incident_.assign(axial_.size(), {kNoEdge, kNoEdge, kNoEdge, kNoEdge, kNoEdge, kNoEdge});
    const auto& off = hex_offsets();
    for (std::size_t i = 0; i < axial_.size(); ++i) {
        for (int dir = 1; dir <= 3; ++dir) {
            for (int k : {dir - 1, dir + 2}) {
                const std::size_t j = node_at(axial_[i] + off[k]);
                if (j == kNoEdge || j < i) continue;
                const std::size_t e = edges_.size();
                edges_.push_back({i, j, dir});
                incident_[i][k] = e;
                incident_[j][(k + 3) % 6] = e;
            }
        }
    }

    // Up triangle a, a+(1,0), a+(0,1); down triangle a, a+(1,0), a+(1,-1).
    for (std::size_t i = 0; i < axial_.size(); ++i) {
        for (const std::array<int, 2>& pair : {std::array<int, 2>{0, 1}, std::array<int, 2>{0, 5}}) {
            const std::size_t b = node_at(axial_[i] + off[pair[0]]);
            const std::size_t c = node_at(axial_[i] + off[pair[1]]);
            if (b == kNoEdge || c == kNoEdge) continue;
            Triangle t{};
            t.nodes = {i, b, c};
            std::sort(t.nodes.begin(), t.nodes.end());
            for (auto [u, v] : {std::pair{i, b}, std::pair{i, c}, std::pair{b, c}}) {
                const std::size_t e = edge_between(u, v);
                t.edge_by_dir[edges_[e].dir - 1] = e;
            }
            triangles_.push_back(t);
        }
    }
    std::sort(triangles_.begin(), triangles_.end(),
              [](const Triangle& x, const Triangle& y) { return x.nodes < y.nodes; });

    std::vector<int> incidence(edges_.size(), 0);
    for (const auto& t : triangles_) {
        for (std::size_t e : t.edge_by_dir) ++incidence[e];
    }
    boundary_mask_.assign(edges_.size(), false);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (incidence[e] == 1) {
            boundary_.push_back(e);
            boundary_mask_[e] = true;
        }
    }

    equation_row_.assign(axial_.size(), kNoEdge);
    for (std::size_t i = 0; i < axial_.size(); ++i) {
        if (hex_radius(axial_[i]) <= r - 1) {
            equation_row_[i] = interior_.size();
            interior_.push_back(i);
        }
    }
}

Vec2 Lattice::edge_unit(std::size_t e) const {
    const Edge& ed = edges_[e];
    return (positions_[ed.j] - positions_[ed.i]).normalized();
}

std::size_t Lattice::node_at(Axial a) const {
    const int r = n_ - 1;
    if (hex_radius(a) > r) return kNoEdge;
    const int width = 2 * n_ - 1;
    return grid_[static_cast<std::size_t>(a.p + r) * width + (a.q + r)];
}

std::size_t Lattice::edge_between(std::size_t a, std::size_t b) const {
    for (std::size_t e : incident_[a]) {
        if (e == kNoEdge) continue;
        if (edges_[e].i == b || edges_[e].j == b) return e;
    }
    return kNoEdge;
}

bool Lattice::is_interior(std::size_t node) const {
    return node < equation_row_.size() && equation_row_[node] != kNoEdge;
}

NodeHexagon Lattice::node_hexagon(std::size_t node) const {
    if (!is_interior(node)) {
        throw InvalidArgument("node " + std::to_string(node) + " is not an interior node");
    }
    const auto& off = hex_offsets();
    NodeHexagon h{};
    std::array<std::size_t, 6> nb{};
    for (int k = 0; k < 6; ++k) {
        h.spokes[k] = incident_[node][k];
        nb[k] = node_at(axial_[node] + off[k]);
    }
    for (int k = 0; k < 6; ++k) h.rim[k] = edge_between(nb[k], nb[(k + 1) % 6]);
    return h;
}

Eigen::VectorXd Lattice::direction_indicator(int r) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(edges_.size()));
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].dir == r) d[static_cast<Eigen::Index>(e)] = 1.0;
    }
    return d;
}

}  // namespace bistable
