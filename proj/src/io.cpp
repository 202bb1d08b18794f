#include "bistable/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bistable/errors.hpp"

namespace bistable::io {

json lattice_to_json(const Lattice& lat) {
    json nodes = json::array();
    for (const Vec2& x : lat.positions()) nodes.push_back({x[0], x[1]});
    json edges = json::array();
    for (const Edge& e : lat.edges()) edges.push_back({e.i, e.j, e.dir});
    return {{"n", lat.side()}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    if (!j.is_array()) throw InvalidArgument("expected a JSON array of numbers");
    Eigen::VectorXd v(Eigen::Index(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) throw InvalidArgument("non-numeric entry at position " + std::to_string(k));
        v[Eigen::Index(k)] = j[k].get<double>();
    }
    return v;
}

json strain_to_json(const StrainTensor& e) { return {{"a", e.a}, {"b", e.b}, {"c", e.c}}; }

StrainTensor strain_from_json(const json& j) {
    try {
        return {j.at("a").get<double>(), j.at("b").get<double>(), j.at("c").get<double>()};
    } catch (const json::exception& ex) {
        throw InvalidArgument(std::string("bad strain tensor JSON: ") + ex.what());
    }
}

json still_state_to_json(const StillState& st) {
    return {{"s", st.s}, {"long_edges", st.long_edges}, {"alpha", {st.alpha[0], st.alpha[1], st.alpha[2]}}};
}

StillState still_state_from_json(const Lattice& lat, const json& j) {
    try {
        auto edges = j.at("long_edges").get<std::vector<std::size_t>>();
        for (std::size_t e : edges) {
            if (e >= lat.num_edges()) throw InvalidArgument("long edge index out of range");
        }
        return state_from_long_edges(lat, std::move(edges), j.at("s").get<double>());
    } catch (const json::exception& ex) {
        throw InvalidArgument(std::string("bad still state JSON: ") + ex.what());
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_into(std::string& out, const json& j) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += json(key).dump();
                out += ':';
                dump_into(out, value);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ',';
                dump_into(out, j[k]);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? fmt(v) : "null";
            break;
        }
        default: out += j.dump();
    }
}

}  // namespace

std::string dump(const json& j) {
    std::string out;
    dump_into(out, j);
    return out;
}

void write_still_state_csv(std::ostream& os, const Lattice& lat, const StillState& st) {
    os << "edge,i,j,dir,x_mid,y_mid,kappa\n";
    for (std::size_t e = 0; e < lat.num_edges(); ++e) {
        const Edge& ed = lat.edges()[e];
        const Vec2 mid = 0.5 * (lat.positions()[ed.i] + lat.positions()[ed.j]);
        os << e << ',' << ed.i << ',' << ed.j << ',' << ed.dir << ',' << fmt(mid[0]) << ',' << fmt(mid[1]) << ','
           << fmt(st.kappa[Eigen::Index(e)]) << '\n';
    }
}

void write_flat_bottom_csv(std::ostream& os, const std::vector<FlatBottomSample>& samples) {
    os << "x1,x2,x3,a,b,c,lambda1,lambda2\n";
    for (const auto& s : samples) {
        os << fmt(s.x[0]) << ',' << fmt(s.x[1]) << ',' << fmt(s.x[2]) << ',' << fmt(s.E.a) << ',' << fmt(s.E.b)
           << ',' << fmt(s.E.c) << ',' << fmt(s.lambda[0]) << ',' << fmt(s.lambda[1]) << '\n';
    }
}

void write_region_csv(std::ostream& os, const std::vector<RegionSample>& samples) {
    os << "lambda1,lambda2,family,mu,k,n1,n2,n3\n";
    for (const auto& s : samples) {
        os << fmt(s.lambda1) << ',' << fmt(s.lambda2) << ',' << s.family << ',' << fmt(s.mu) << ',' << s.k << ','
           << s.n1 << ',' << s.n2 << ',' << s.n3 << '\n';
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace bistable::io
