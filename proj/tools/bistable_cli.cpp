// Command-line driver: every subcommand prints one JSON document (or CSV with
// --format csv) and exits nonzero with a one-line JSON error on bad input.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bistable/compatibility.hpp"
#include "bistable/eigenstrain_large.hpp"
#include "bistable/energy.hpp"
#include "bistable/errors.hpp"
#include "bistable/io.hpp"
#include "bistable/kernels.hpp"
#include "bistable/lattice.hpp"
#include "bistable/still_states.hpp"
#include "bistable/strain.hpp"

namespace {

using namespace bistable;
using io::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    int n = 4;
    double s = 0.1;
    double C = 1.0;
    double l = 1.0;
    double a = 1.2;
    double tol = kRankTolerance;
    int resolution = 20;
    std::string format = "json";
    std::string output;
    std::string input;
    std::uint64_t seed = 0;
    std::vector<double> triple;
    int group = 0;
    bool random = false;
    bool corners = false;
    long long k = 1, n1 = 1, n2 = 1, n3 = 1;
    int max_iters = 500;
    double grad_tol = 1e-12;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void fail_line(const std::string& kind, const std::string& message, const json& extra = json::object()) {
    json j = {{"error", kind}, {"message", message}};
    for (const auto& [key, value] : extra.items()) j[key] = value;
    std::cerr << io::dump(j) << '\n';
}

std::string strip_newlines(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

json strain_json(const StrainTensor& e) {
    const auto ev = e.eigenvalues();
    return {{"a", e.a}, {"b", e.b}, {"c", e.c}, {"eigenvalues", {ev[0], ev[1]}}};
}

json vec3(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

json read_json_file(const std::string& path) {
    if (path.empty()) throw UsageError("--input is required");
    try {
        return json::parse(io::read_file(path));
    } catch (const json::parse_error& ex) {
        throw InvalidArgument("cannot parse '" + path + "': " + ex.what());
    }
}

Eigen::VectorXd read_vector(const std::string& path, Eigen::Index expected, const char* what) {
    json j = read_json_file(path);
    if (j.is_object()) {
        for (const char* key : {"U", "kappa", "u"}) {
            if (j.contains(key)) {
                j = j[key];
                break;
            }
        }
    }
    Eigen::VectorXd v = io::vector_from_json(j);
    if (v.size() != expected) {
        throw InvalidArgument(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                              std::to_string(expected));
    }
    return v;
}

Lattice make_lattice(int n) {
    if (n < 2) throw UsageError("--n must be >= 2");
    return Lattice(n);
}

// ---------------------------------------------------------------------------

void cmd_lattice_info(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    const Counts c = counts(cfg.n);
    const long long N = (long long)lat.num_nodes(), E = (long long)lat.num_edges();
    const long long M = (long long)lat.interior_nodes().size();
    const long long T = (long long)lat.num_triangles(), EB = (long long)lat.boundary_edges().size();
    const bool match = c == Counts{N, E, M, T, EB};
    if (cfg.format == "csv") {
        os << "n,N,E,M,T,EB,two_N_minus_3,E_minus_M,formula_match\n"
           << cfg.n << ',' << N << ',' << E << ',' << M << ',' << T << ',' << EB << ',' << 2 * N - 3 << ','
           << E - M << ',' << (match ? "true" : "false") << '\n';
        return;
    }
    os << io::dump({{"n", cfg.n}, {"N", N}, {"E", E}, {"M", M}, {"T", T}, {"EB", EB},
                    {"two_N_minus_3", 2 * N - 3}, {"E_minus_M", E - M}, {"identity_holds", 2 * N - 3 == E - M},
                    {"formula_match", match}})
       << '\n';
}

void cmd_lattice_dump(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    if (cfg.format == "csv") {
        os << "edge,i,j,dir,x_i,y_i,x_j,y_j,boundary\n";
        for (std::size_t e = 0; e < lat.num_edges(); ++e) {
            const Edge& ed = lat.edges()[e];
            const Vec2& xi = lat.positions()[ed.i];
            const Vec2& xj = lat.positions()[ed.j];
            os << e << ',' << ed.i << ',' << ed.j << ',' << ed.dir << ',' << io::fmt(xi.x()) << ','
               << io::fmt(xi.y()) << ',' << io::fmt(xj.x()) << ',' << io::fmt(xj.y()) << ','
               << (lat.is_boundary_edge()[e] ? 1 : 0) << '\n';
        }
        return;
    }
    json j = io::lattice_to_json(lat);
    j["interior_nodes"] = lat.interior_nodes();
    j["boundary_edges"] = lat.boundary_edges();
    os << io::dump(j) << '\n';
}

void cmd_compat_rank(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    const RankReport r = rank_report(lat, cfg.tol);
    const Counts c = counts(cfg.n);
    json j = {{"n", cfg.n},
              {"tolerance", cfg.tol},
              {"rank_R", r.rank_R},
              {"nullity_R", r.nullity_R},
              {"rank_Z", r.rank_Z},
              {"expected_rank_R", 2 * c.nodes - 3},
              {"expected_rank_Z", c.interior},
              {"R_smallest_kept", r.R_smallest_kept},
              {"R_largest_dropped", r.R_largest_dropped},
              {"Z_smallest_kept", r.Z_smallest_kept},
              {"Z_largest_dropped", r.Z_largest_dropped},
              {"warning", r.warning ? json(*r.warning) : json(nullptr)}};
    if (cfg.format == "csv") {
        os << "n,rank_R,nullity_R,rank_Z,expected_rank_R,expected_rank_Z\n"
           << cfg.n << ',' << r.rank_R << ',' << r.nullity_R << ',' << r.rank_Z << ',' << 2 * c.nodes - 3 << ','
           << c.interior << '\n';
        return;
    }
    os << io::dump(j) << '\n';
}

void cmd_compat_solve(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    const Eigen::VectorXd kappa = read_vector(cfg.input, Eigen::Index(lat.num_edges()), "elongation vector");
    const Eigen::VectorXd u = solve_displacements(lat, kappa);
    const double residual = (kernels::omp::rigidity_apply(lat, u) - kappa).norm();
    if (cfg.format == "csv") {
        os << "node,x,y,u_x,u_y\n";
        for (std::size_t k = 0; k < lat.num_nodes(); ++k) {
            os << k << ',' << io::fmt(lat.positions()[k].x()) << ',' << io::fmt(lat.positions()[k].y()) << ','
               << io::fmt(u[Eigen::Index(2 * k)]) << ',' << io::fmt(u[Eigen::Index(2 * k + 1)]) << '\n';
        }
        return;
    }
    os << io::dump({{"n", cfg.n}, {"U", io::vector_to_json(u)}, {"residual", residual}}) << '\n';
}

void cmd_still_stripes(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    if (cfg.group < 0 || cfg.group > 3) throw UsageError("--group must be 1, 2 or 3");
    std::vector<int> groups = cfg.group ? std::vector<int>{cfg.group} : std::vector<int>{1, 2, 3};
    if (cfg.format == "csv") {
        os << "group,index,edge,i,j,dir,x_mid,y_mid\n";
        for (int g : groups) {
            for (const StripeFamily& f : stripes_of_group(lat, g)) {
                for (std::size_t e : f.edges) {
                    const Edge& ed = lat.edges()[e];
                    const Vec2 mid = 0.5 * (lat.positions()[ed.i] + lat.positions()[ed.j]);
                    os << g << ',' << f.index << ',' << e << ',' << ed.i << ',' << ed.j << ',' << ed.dir << ','
                       << io::fmt(mid.x()) << ',' << io::fmt(mid.y()) << '\n';
                }
            }
        }
        return;
    }
    json list = json::array();
    for (int g : groups) {
        for (const StripeFamily& f : stripes_of_group(lat, g)) {
            const StillState st = state_from_long_edges(lat, f.edges, cfg.s);
            list.push_back({{"group", g},
                            {"index", f.index},
                            {"long_edges", f.edges},
                            {"alpha", {st.alpha[0], st.alpha[1], st.alpha[2]}},
                            {"is_still", is_still(lat, st.kappa, cfg.s)}});
        }
    }
    os << io::dump({{"n", cfg.n}, {"s", cfg.s}, {"stripes", std::move(list)}}) << '\n';
}

void cmd_still_approx(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    Eigen::Vector3d alpha;
    if (cfg.random) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int r = 0; r < 3; ++r) alpha[r] = u(rng);
    } else {
        if (cfg.triple.size() != 3) throw UsageError("--alpha needs three comma-separated values (or --random)");
        alpha = {cfg.triple[0], cfg.triple[1], cfg.triple[2]};
    }
    for (int r = 0; r < 3; ++r) {
        if (!(alpha[r] >= 0.0 && alpha[r] <= 1.0)) throw InvalidArgument("target concentrations must lie in [0, 1]");
    }
    const StrainTensor target = cfg.s * m_map(q_matrices().Qinv * alpha);
    const ApproximationReport rep = approximate_strain(lat, target, cfg.s);
    if (cfg.format == "csv") {
        io::write_still_state_csv(os, lat, rep.state);
        return;
    }
    json j = {{"n", cfg.n},
              {"s", cfg.s},
              {"alpha_target", vec3(alpha)},
              {"alpha_star", {rep.alpha_star[0], rep.alpha_star[1], rep.alpha_star[2]}},
              {"state", io::still_state_to_json(rep.state)},
              {"is_still", is_still(lat, rep.state.kappa, cfg.s)},
              {"target", strain_json(rep.target)},
              {"Estar", strain_json(rep.Estar)},
              {"Estar_from_displacements", strain_json(strain_from_displacements(lat, rep.displacements))},
              {"error", rep.error},
              {"bound", rep.bound},
              {"within_bound", rep.error <= rep.bound},
              {"q_inverse_norm2", q_inverse_norm2()},
              {"energy", total_energy(lat, rep.displacements, RodEnergyParams{cfg.l, cfg.s, cfg.C})}};
    os << io::dump(j) << '\n';
}

void cmd_strain_average(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    const Eigen::VectorXd u = read_vector(cfg.input, 2 * Eigen::Index(lat.num_nodes()), "displacement field");
    const Eigen::VectorXd kappa = kernels::omp::rigidity_apply(lat, u);
    const StrainTensor a = strain_from_displacements(lat, u);
    const StrainTensor b = strain_from_elongations(lat, kappa);
    const StrainTensor c = strain_from_triangle_sum(lat, kappa);
    if (cfg.format == "csv") {
        os << "route,a,b,c,lambda1,lambda2\n";
        const std::pair<const char*, StrainTensor> rows[] = {
            {"displacements", a}, {"elongations", b}, {"triangle_sum", c}, {"boundary_term", boundary_term(lat, kappa)}};
        for (const auto& [name, e] : rows) {
            const auto ev = e.eigenvalues();
            os << name << ',' << io::fmt(e.a) << ',' << io::fmt(e.b) << ',' << io::fmt(e.c) << ',' << io::fmt(ev[0])
               << ',' << io::fmt(ev[1]) << '\n';
        }
        return;
    }
    os << io::dump({{"n", cfg.n},
                    {"from_displacements", strain_json(a)},
                    {"from_elongations", strain_json(b)},
                    {"triangle_sum", strain_json(c)},
                    {"route_difference", (a - b).frobenius()},
                    {"boundary_term", strain_json(boundary_term(lat, kappa))},
                    {"boundary_term_bound", boundary_term_bound(lat, kappa)}})
       << '\n';
}

void cmd_flatbottom(const RunConfig& cfg, std::ostream& os) {
    if (cfg.resolution < 2) throw UsageError("--resolution must be >= 2");
    const auto samples = flat_bottom_samples(cfg.s, cfg.resolution);
    if (cfg.format == "csv") {
        io::write_flat_bottom_csv(os, samples);
        return;
    }
    json vertices = json::array();
    for (const auto& v : flat_bottom_vertices(cfg.s).vertices) {
        vertices.push_back({{"x", vec3(v.x)}, {"E", strain_json(v.E)}});
    }
    json pts = json::array();
    for (std::size_t k = 8; k < samples.size(); ++k) {
        pts.push_back({{"x", vec3(samples[k].x)}, {"lambda", {samples[k].lambda[0], samples[k].lambda[1]}}});
    }
    os << io::dump({{"s", cfg.s}, {"vertices", std::move(vertices)}, {"samples", std::move(pts)}}) << '\n';
}

void cmd_region(const RunConfig& cfg, std::ostream& os) {
    if (cfg.resolution < 2) throw UsageError("--resolution must be >= 2");
    const auto pts = sample_region(cfg.a, cfg.resolution);
    if (cfg.format == "csv") {
        io::write_region_csv(os, pts);
        return;
    }
    json list = json::array();
    for (const auto& p : pts) {
        list.push_back({{"lambda1", p.lambda1},
                        {"lambda2", p.lambda2},
                        {"family", p.family},
                        {"mu", p.mu},
                        {"k", p.k},
                        {"n1", p.n1},
                        {"n2", p.n2},
                        {"n3", p.n3}});
    }
    os << io::dump({{"a", cfg.a}, {"resolution", cfg.resolution}, {"points", std::move(list)}}) << '\n';
}

void cmd_hexassembly(const RunConfig& cfg, std::ostream& os) {
    const HexAssembly h = hex_assembly(cfg.k, cfg.n1, cfg.n2, cfg.n3, cfg.a);
    json j = {{"k", cfg.k},  {"n1", cfg.n1}, {"n2", cfg.n2},
              {"n3", cfg.n3}, {"a", cfg.a},  {"N", h.N},
              {"E_hex", strain_json(h.E_hex)}};
    j["isotropic_factor"] = (cfg.n1 == cfg.n2 && cfg.n2 == cfg.n3) ? json(isotropic_factor(cfg.k, cfg.n1, cfg.a))
                                                                   : json(nullptr);
    if (cfg.format == "csv") {
        const auto ev = h.E_hex.eigenvalues();
        os << "k,n1,n2,n3,a,N,E11,E12,E22,lambda1,lambda2\n"
           << cfg.k << ',' << cfg.n1 << ',' << cfg.n2 << ',' << cfg.n3 << ',' << io::fmt(cfg.a) << ',' << h.N << ','
           << io::fmt(h.E_hex.a) << ',' << io::fmt(h.E_hex.b) << ',' << io::fmt(h.E_hex.c) << ',' << io::fmt(ev[0])
           << ',' << io::fmt(ev[1]) << '\n';
        return;
    }
    os << io::dump(j) << '\n';
}

void cmd_energy_effective(const RunConfig& cfg, std::ostream& os) {
    if (cfg.triple.size() != 3) throw UsageError("--e needs three comma-separated values a,b,c");
    const StrainTensor e{cfg.triple[0], cfg.triple[1], cfg.triple[2]};
    const RodEnergyParams p{cfg.l, cfg.s, cfg.C};
    p.validate();
    json j;
    if (cfg.corners) {
        StrainTensor best = e;
        json active = json::array();
        const double J = effective_density_corners(e, p);
        if (J > 0.0) {
            for (const auto& v : flat_bottom_vertices(p.s).vertices) {
                if (cauchy_energy(e - v.E, p.C) == J) {
                    best = v.E;
                    for (int r = 0; r < 3; ++r) active.push_back("x" + std::to_string(r + 1) + "=" + std::to_string(int(v.x[r])));
                    break;
                }
            }
        }
        j = {{"variant", "corners"}, {"J", J}, {"minimizer", strain_json(best)}, {"active_set", active}};
    } else {
        const EffectiveDensityResult r = effective_density_full(e, p);
        j = {{"variant", "full"},
             {"J", r.J},
             {"minimizer", strain_json(r.minimizer)},
             {"x", vec3(r.x)},
             {"active_set", r.active_constraints}};
    }
    j["inside_D"] = flat_bottom_membership(e, p.s).inside;
    if (cfg.format == "csv") {
        os << "variant,J,a,b,c\n"
           << j["variant"].get<std::string>() << ',' << io::fmt(j["J"].get<double>()) << ','
           << io::fmt(j["minimizer"]["a"].get<double>()) << ',' << io::fmt(j["minimizer"]["b"].get<double>()) << ','
           << io::fmt(j["minimizer"]["c"].get<double>()) << '\n';
        return;
    }
    os << io::dump(j) << '\n';
}

void cmd_energy_relax(const RunConfig& cfg, std::ostream& os) {
    const Lattice lat = make_lattice(cfg.n);
    const Eigen::VectorXd u0 = read_vector(cfg.input, 2 * Eigen::Index(lat.num_nodes()), "displacement field");
    const RodEnergyParams p{cfg.l, cfg.s, cfg.C};
    const RelaxResult r = relax(lat, u0, p, cfg.max_iters, cfg.grad_tol);
    if (cfg.format == "csv") {
        os << "node,u_x,u_y\n";
        for (std::size_t k = 0; k < lat.num_nodes(); ++k) {
            os << k << ',' << io::fmt(r.u[Eigen::Index(2 * k)]) << ',' << io::fmt(r.u[Eigen::Index(2 * k + 1)]) << '\n';
        }
        return;
    }
    os << io::dump({{"U", io::vector_to_json(r.u)},
                    {"energy", r.energy},
                    {"grad_norm", r.grad_norm},
                    {"iters", r.iters},
                    {"converged", r.converged}})
       << '\n';
}

void apply_thread_env() {
    for (const char* var : {"BISTABLE_THREADS", "OMP_NUM_THREADS"}) {
        if (const char* v = std::getenv(var)) {
            char* end = nullptr;
            const long t = std::strtol(v, &end, 10);
            if (end != v && t >= 1) {
                kernels::set_thread_count(int(t));
                return;
            }
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();
    RunConfig cfg;
    CLI::App app{"Bistable triangular lattice: still states, average strain and effective energy"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("-o,--output", cfg.output, "Write to this file instead of standard output");
    };
    auto add_n = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "Hexagon side in nodes")->check(CLI::Range(2, 1 << 14));
    };
    auto add_s = [&](CLI::App* sub) {
        sub->add_option("--s", cfg.s, "Critical relative elongation")
            ->check(CLI::PositiveNumber);
    };

    std::function<void(const RunConfig&, std::ostream&)> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                    void (*fn)(const RunConfig&, std::ostream&)) {
        CLI::App* sub = parent->add_subcommand(name, desc);
        add_common(sub);
        sub->callback([&action, fn] { action = fn; });
        return sub;
    };

    CLI::App* lattice = app.add_subcommand("lattice", "Lattice construction")->require_subcommand(1);
    add_n(leaf(lattice, "info", "Counts and the identity 2N - 3 = E - M", cmd_lattice_info));
    add_n(leaf(lattice, "dump", "Nodes and edges", cmd_lattice_dump));

    CLI::App* compat = app.add_subcommand("compat", "Rigidity and hexagonal equations")->require_subcommand(1);
    {
        CLI::App* rank = leaf(compat, "rank", "Ranks of R and Z by SVD", cmd_compat_rank);
        add_n(rank);
        rank->add_option("--tol", cfg.tol, "Relative singular-value threshold")->check(CLI::PositiveNumber);
        CLI::App* solve = leaf(compat, "solve", "Displacements from elongations (JSON array file)", cmd_compat_solve);
        add_n(solve);
        solve->add_option("--input", cfg.input, "JSON file with the elongation vector")->required();
    }

    CLI::App* still = app.add_subcommand("still", "Still states")->require_subcommand(1);
    {
        CLI::App* stripes = leaf(still, "stripes", "All stripes (or one group)", cmd_still_stripes);
        add_n(stripes);
        add_s(stripes);
        stripes->add_option("--group", cfg.group, "Only this group (1, 2 or 3)")->check(CLI::Range(1, 3));
        CLI::App* approx = leaf(still, "approx", "Greedy still state for target concentrations", cmd_still_approx);
        add_n(approx);
        add_s(approx);
        approx->add_option("--alpha", cfg.triple, "Target concentrations a1,a2,a3")->delimiter(',')->expected(3);
        approx->add_flag("--random", cfg.random, "Draw the target from --seed");
        approx->add_option("--seed", cfg.seed, "Seed for --random");
        approx->add_option("--C", cfg.C, "Long-well stiffness")->check(CLI::PositiveNumber);
    }

    CLI::App* strain = app.add_subcommand("strain", "Average strain")->require_subcommand(1);
    {
        CLI::App* avg = leaf(strain, "average", "Average strain of a displacement field", cmd_strain_average);
        add_n(avg);
        avg->add_option("--input", cfg.input, "JSON file with the displacement field")->required();
    }

    {
        CLI::App* fb = leaf(&app, "flatbottom", "Vertices and eigenvalue samples of the flat-bottom set", cmd_flatbottom);
        add_s(fb);
        fb->add_option("--resolution", cfg.resolution, "Grid points per cube axis")->check(CLI::Range(2, 1000));
        CLI::App* region = leaf(&app, "region", "Eigenvalue samples of large-deformation still states", cmd_region);
        region->add_option("--a", cfg.a, "Long rod length")->required();
        region->add_option("--resolution", cfg.resolution, "Samples per family")->check(CLI::Range(2, 100000));
        CLI::App* hex = leaf(&app, "hexassembly", "Hexagon/triangle/strip assembly", cmd_hexassembly);
        hex->add_option("--k", cfg.k)->required();
        hex->add_option("--n1", cfg.n1)->required();
        hex->add_option("--n2", cfg.n2)->required();
        hex->add_option("--n3", cfg.n3)->required();
        hex->add_option("--a", cfg.a)->required();
    }

    CLI::App* energy = app.add_subcommand("energy", "Energies")->require_subcommand(1);
    {
        CLI::App* eff = leaf(energy, "effective", "Effective energy density J(e)", cmd_energy_effective);
        eff->add_option("--e", cfg.triple, "Strain a,b,c")->delimiter(',')->expected(3)->required();
        add_s(eff);
        eff->add_option("--C", cfg.C)->check(CLI::PositiveNumber);
        eff->add_flag("--corners", cfg.corners, "Minimize over the eight corners only");
        CLI::App* rel = leaf(energy, "relax", "Steepest-descent relaxation from a displacement field", cmd_energy_relax);
        add_n(rel);
        add_s(rel);
        rel->add_option("--C", cfg.C)->check(CLI::PositiveNumber);
        rel->add_option("--l", cfg.l)->check(CLI::PositiveNumber);
        rel->add_option("--input", cfg.input, "JSON file with the initial displacement field")->required();
        rel->add_option("--max-iters", cfg.max_iters)->check(CLI::NonNegativeNumber);
        rel->add_option("--grad-tol", cfg.grad_tol)->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail_line("UsageError", strip_newlines(e.what()));
        return kExitUsage;
    }

    try {
        std::ostringstream buffer;
        action(cfg, buffer);
        if (cfg.output.empty()) {
            std::cout << buffer.str();
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out) throw InvalidArgument("cannot write '" + cfg.output + "'");
            out << buffer.str();
        }
    } catch (const UsageError& e) {
        fail_line("UsageError", strip_newlines(e.what()));
        return kExitUsage;
    } catch (const IncompatibleElongations& e) {
        fail_line("IncompatibleElongations", strip_newlines(e.what()),
                  {{"worst_node", e.worst_node}, {"residual", e.worst_residual}});
        return kExitFailure;
    } catch (const ParameterOutOfRange& e) {
        fail_line("ParameterOutOfRange", strip_newlines(e.what()));
        return kExitFailure;
    } catch (const TargetOutsideD& e) {
        fail_line("TargetOutsideD", strip_newlines(e.what()));
        return kExitFailure;
    } catch (const NoRealRotation& e) {
        fail_line("NoRealRotation", strip_newlines(e.what()));
        return kExitFailure;
    } catch (const NonConvergence& e) {
        fail_line("NonConvergence", strip_newlines(e.what()), {{"grad_norm", e.grad_norm}});
        return kExitFailure;
    } catch (const Error& e) {
        fail_line("InvalidArgument", strip_newlines(e.what()));
        return kExitFailure;
    } catch (const std::exception& e) {
        fail_line("InternalError", strip_newlines(e.what()));
        return kExitFailure;
    }
    return 0;
}
