#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "bistable/lattice.hpp"

namespace bistable {

using Concentrations = std::array<double, 3>;

/// Elongation vector with entries in {0, s} satisfying the hexagonal equations.
struct StillState {
    Eigen::VectorXd kappa;
    double s = 0.0;
    std::vector<std::size_t> long_edges;  // ascending
    Concentrations alpha{0.0, 0.0, 0.0};  // long edges of direction r over E/3
};

/// Long edges of one stripe. Stripes of group r use only direction-r edges.
struct StripeFamily {
    int group = 1;
    int index = 1;  // 1 .. 2(n-1)
    std::vector<std::size_t> edges;
};

/// All 2(n-1) stripes of a group in index order.
std::vector<StripeFamily> stripes_of_group(const Lattice& lat, int group);

/// Throws InvalidArgument for a bad group or index outside 1..2(n-1).
StripeFamily stripe_family(const Lattice& lat, int group, int index);

StillState stripe(const Lattice& lat, int group, int index, double s);

StillState zero_state(const Lattice& lat, double s);

/// Builds a state from its long-edge set (no compatibility check).
StillState state_from_long_edges(const Lattice& lat, std::vector<std::size_t> long_edges, double s);

/// Sum of two states without shared long edges. Throws OverlappingLongEdges.
StillState sum_states(const Lattice& lat, const StillState& a, const StillState& b);

/// Greedy stripe selection: per group, add stripes in index order while the
/// concentration stays <= target. Each |alpha*_r - alpha_r| < 1/n. Needs n >= 3.
StillState approx_concentrations(const Lattice& lat, const Concentrations& target, double s);

/// Entries in {0, s} (after snapping within 1e-12) and Z kappa = 0.
bool is_still(const Lattice& lat, const Eigen::VectorXd& kappa, double s);

}  // namespace bistable
