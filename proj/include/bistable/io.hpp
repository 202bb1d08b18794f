#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "bistable/eigenstrain_large.hpp"
#include "bistable/lattice.hpp"
#include "bistable/still_states.hpp"
#include "bistable/strain.hpp"

namespace bistable::io {

using json = nlohmann::ordered_json;

/// {"n": n, "nodes": [[x, y], ...], "edges": [[i, j, r], ...]}
json lattice_to_json(const Lattice& lat);

json vector_to_json(const Eigen::VectorXd& v);
/// Throws InvalidArgument unless `j` is an array of numbers.
Eigen::VectorXd vector_from_json(const json& j);

/// {"a": a, "b": b, "c": c}
json strain_to_json(const StrainTensor& e);
StrainTensor strain_from_json(const json& j);

/// {"s": s, "long_edges": [...], "alpha": [a1, a2, a3]}
json still_state_to_json(const StillState& st);
StillState still_state_from_json(const Lattice& lat, const json& j);

/// %.17g
std::string fmt(double v);

/// Compact JSON text with every floating value printed by fmt().
std::string dump(const json& j);

/// Header "edge,i,j,dir,x_mid,y_mid,kappa", one row per edge.
void write_still_state_csv(std::ostream& os, const Lattice& lat, const StillState& st);

/// Header "x1,x2,x3,a,b,c,lambda1,lambda2".
void write_flat_bottom_csv(std::ostream& os, const std::vector<FlatBottomSample>& samples);

/// Header "lambda1,lambda2,family,mu,k,n1,n2,n3".
void write_region_csv(std::ostream& os, const std::vector<RegionSample>& samples);

std::string read_file(const std::string& path);

}  // namespace bistable::io
