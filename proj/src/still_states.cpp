#include "bistable/still_states.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "bistable/errors.hpp"
#include "bistable/kernels.hpp"

namespace bistable {

namespace {

using Idx = Eigen::Index;

constexpr double kSnap = 1e-12;

void check_group(int group) {
    if (group < 1 || group > 3) throw InvalidArgument("stripe group must be 1, 2 or 3");
}

void check_s(double s) {
    if (!(s > 0.0)) throw InvalidArgument("critical elongation s must be positive");
}

// Linear invariant of the tail node that is constant along one stripe.
// A hexagon then meets a stripe in nothing or in exactly one spoke and one rim edge.
int stripe_invariant(int group, Axial tail) {
    switch (group) {
        case 1: return tail.p + tail.q;
        case 2: return tail.q;
        default: return tail.p;
    }
}

Concentrations concentrations_of(const Lattice& lat, const std::vector<std::size_t>& long_edges) {
    std::array<std::size_t, 3> per_dir{0, 0, 0};
    for (std::size_t e : long_edges) ++per_dir[std::size_t(lat.edges()[e].dir - 1)];
    const double third = double(lat.num_edges()) / 3.0;
    return {double(per_dir[0]) / third, double(per_dir[1]) / third, double(per_dir[2]) / third};
}

}  // namespace

std::vector<StripeFamily> stripes_of_group(const Lattice& lat, int group) {
    check_group(group);
    const Axial step = Lattice::hex_offsets()[std::size_t(group - 1)];
    const auto& axial = lat.axial();
    std::map<int, std::vector<std::size_t>> by_invariant;
    for (std::size_t e = 0; e < lat.num_edges(); ++e) {
        const Edge& ed = lat.edges()[e];
        if (ed.dir != group) continue;
        const Axial ai = axial[ed.i];
        const Axial aj = axial[ed.j];
        const bool forward = (aj.p - ai.p == step.p) && (aj.q - ai.q == step.q);
        by_invariant[stripe_invariant(group, forward ? ai : aj)].push_back(e);
    }
    std::vector<StripeFamily> out;
    out.reserve(by_invariant.size());
    int index = 1;
    for (auto& [key, edges] : by_invariant) out.push_back({group, index++, std::move(edges)});
    return out;
}

StripeFamily stripe_family(const Lattice& lat, int group, int index) {
    check_group(group);
    const int count = 2 * (lat.side() - 1);
    if (index < 1 || index > count) {
        throw InvalidArgument("stripe index " + std::to_string(index) + " outside 1.." + std::to_string(count));
    }
    return stripes_of_group(lat, group)[std::size_t(index - 1)];
}

StillState state_from_long_edges(const Lattice& lat, std::vector<std::size_t> long_edges, double s) {
    check_s(s);
    std::sort(long_edges.begin(), long_edges.end());
    StillState st;
    st.s = s;
    st.kappa = Eigen::VectorXd::Zero(Idx(lat.num_edges()));
    for (std::size_t e : long_edges) st.kappa[Idx(e)] = s;
    st.alpha = concentrations_of(lat, long_edges);
    st.long_edges = std::move(long_edges);
    return st;
}

StillState stripe(const Lattice& lat, int group, int index, double s) {
    return state_from_long_edges(lat, stripe_family(lat, group, index).edges, s);
}

StillState zero_state(const Lattice& lat, double s) { return state_from_long_edges(lat, {}, s); }

StillState sum_states(const Lattice& lat, const StillState& a, const StillState& b) {
    if (a.s != b.s) throw InvalidArgument("still states have different s");
    if (a.kappa.size() != b.kappa.size() || a.kappa.size() != Idx(lat.num_edges())) {
        throw InvalidArgument("still states belong to different lattices");
    }
    std::vector<std::size_t> shared;
    std::set_intersection(a.long_edges.begin(), a.long_edges.end(), b.long_edges.begin(), b.long_edges.end(),
                          std::back_inserter(shared));
    if (!shared.empty()) throw OverlappingLongEdges(shared.front());
    std::vector<std::size_t> merged;
    merged.reserve(a.long_edges.size() + b.long_edges.size());
    std::merge(a.long_edges.begin(), a.long_edges.end(), b.long_edges.begin(), b.long_edges.end(),
               std::back_inserter(merged));
    return state_from_long_edges(lat, std::move(merged), a.s);
}

StillState approx_concentrations(const Lattice& lat, const Concentrations& target, double s) {
    check_s(s);
    if (lat.side() < 3) throw InvalidArgument("concentration targeting needs n >= 3");
    for (double t : target) {
        if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("target concentrations must lie in [0, 1]");
    }
    const double third = double(lat.num_edges()) / 3.0;
    std::array<std::vector<std::size_t>, 3> chosen;

    // The three groups are independent.
#pragma omp parallel for schedule(static, 1)
    for (int g = 0; g < 3; ++g) {
        std::size_t count = 0;
        for (const StripeFamily& f : stripes_of_group(lat, g + 1)) {
            // Compare integer counts against target * E/3 to avoid rounding at equality.
            if (double(count + f.edges.size()) > target[std::size_t(g)] * third + 1e-9) break;
            count += f.edges.size();
            chosen[std::size_t(g)].insert(chosen[std::size_t(g)].end(), f.edges.begin(), f.edges.end());
        }
    }

    StillState result = zero_state(lat, s);
    for (auto& edges : chosen) result = sum_states(lat, result, state_from_long_edges(lat, std::move(edges), s));
    return result;
}

bool is_still(const Lattice& lat, const Eigen::VectorXd& kappa, double s) {
    if (kappa.size() != Idx(lat.num_edges())) return false;
    // Snap to a 0/1 indicator so the hexagonal sums are exact small integers.
    Eigen::VectorXd indicator(kappa.size());
    for (Idx e = 0; e < kappa.size(); ++e) {
        if (std::abs(kappa[e]) <= kSnap) {
            indicator[e] = 0.0;
        } else if (std::abs(kappa[e] - s) <= kSnap) {
            indicator[e] = 1.0;
        } else {
            return false;
        }
    }
    return kernels::omp::hexagon_apply(lat, indicator).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace bistable
