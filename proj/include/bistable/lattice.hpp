#pragma once

// Hexagon-shaped patch of the triangular lattice.
//
// Nodes are addressed by axial coordinates (p, q) with position p*q1 + q*q2
// and max(|p|, |q|, |p+q|) <= n-1. All indexing is deterministic: nodes are
// sorted lexicographically by (p, q), edges by (lower node index, direction).

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace bistable {

using Vec2 = Eigen::Vector2d;

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

/// Unit vectors of the three rod families.
struct DirectionVectors {
    static Vec2 q(int r);  // r in {1, 2, 3}
    static std::array<Vec2, 3> all();
};

struct Axial {
    int p = 0;
    int q = 0;
    friend bool operator==(const Axial&, const Axial&) = default;
    friend auto operator<=>(const Axial&, const Axial&) = default;
};

struct Edge {
    std::size_t i;  // i < j
    std::size_t j;
    int dir;        // 1, 2 or 3
};

struct Triangle {
    std::array<std::size_t, 3> nodes;        // ascending
    std::array<std::size_t, 3> edge_by_dir;  // edge_by_dir[r-1] is the edge parallel to q_r
};

struct Counts {
    long long nodes;           // N
    long long edges;           // E
    long long interior;        // M
    long long triangles;       // T
    long long boundary_edges;  // EB

    friend bool operator==(const Counts&, const Counts&) = default;
};

/// Closed-form counts for the side-n hexagon. Throws InvalidArgument for n < 2.
Counts counts(int n);

struct NodeHexagon {
    std::array<std::size_t, 6> spokes;  // counterclockwise from the q1 neighbour
    std::array<std::size_t, 6> rim;     // rim[k] joins neighbours k and k+1
};

class Lattice {
public:
    /// Throws InvalidArgument for n < 2.
    explicit Lattice(int n);

    int side() const { return n_; }
    std::size_t num_nodes() const { return positions_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    const std::vector<Vec2>& positions() const { return positions_; }
    const std::vector<Axial>& axial() const { return axial_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<std::size_t>& interior_nodes() const { return interior_; }
    const std::vector<std::size_t>& boundary_edges() const { return boundary_; }
    const std::vector<bool>& is_boundary_edge() const { return boundary_mask_; }

    /// Unit vector from node i to node j of the edge (i < j).
    Vec2 edge_unit(std::size_t e) const;

    /// Node index at axial coordinates, or kNoEdge when outside the hexagon.
    std::size_t node_at(Axial a) const;

    /// Edge joining node `node` to its neighbour in hex direction k
    /// (k = 0..5 counterclockwise from q1), or kNoEdge.
    std::size_t incident_edge(std::size_t node, int k) const { return incident_[node][k]; }

    /// Edge joining two nodes, or kNoEdge.
    std::size_t edge_between(std::size_t a, std::size_t b) const;

    bool is_interior(std::size_t node) const;

    /// Position of `node` in interior_nodes(), i.e. its hexagonal-equation row.
    std::size_t equation_row(std::size_t node) const { return equation_row_[node]; }

    /// Spokes and rim of an interior node. Throws InvalidArgument otherwise.
    NodeHexagon node_hexagon(std::size_t node) const;

    /// Indicator of direction-r edges (the vector d_r).
    Eigen::VectorXd direction_indicator(int r) const;

    /// Axial offsets of the six neighbours, counterclockwise from q1.
    static const std::array<Axial, 6>& hex_offsets();

private:
    int n_;
    std::vector<Vec2> positions_;
    std::vector<Axial> axial_;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::vector<std::size_t> interior_;
    std::vector<std::size_t> boundary_;
    std::vector<bool> boundary_mask_;
    std::vector<std::array<std::size_t, 6>> incident_;
    std::vector<std::size_t> grid_;  // (2n-1)^2 lookup of node index by axial coordinates
    std::vector<std::size_t> equation_row_;
};

}  // namespace bistable
