#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "bistable/compatibility.hpp"
#include "bistable/errors.hpp"
#include "bistable/kernels.hpp"
#include "bistable/lattice.hpp"
#include "oracles.hpp"

using namespace bistable;

namespace {

Eigen::VectorXd random_vector(Eigen::Index size, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Eigen::VectorXd v(size);
    for (Eigen::Index k = 0; k < size; ++k) v[k] = dist(rng);
    return v;
}

Eigen::VectorXd positions_as_field(const Lattice& lat) {
    Eigen::VectorXd u(2 * lat.num_nodes());
    for (std::size_t k = 0; k < lat.num_nodes(); ++k) u.segment<2>(2 * k) = lat.positions()[k];
    return u;
}

// Rows of R times 2 with the y columns divided by sqrt(3) are integers:
// (2, 0), (1, 1), (-1, 1). Neither operation changes the rank.
std::vector<std::vector<long long>> integer_rigidity(const Lattice& lat) {
    std::vector<std::vector<long long>> m(lat.num_edges(), std::vector<long long>(2 * lat.num_nodes(), 0));
    for (std::size_t e = 0; e < lat.num_edges(); ++e) {
        const Edge& ed = lat.edges()[e];
        const Vec2 d = lat.positions()[ed.j] - lat.positions()[ed.i];
        const long long cx = std::llround(2.0 * d.x());
        const long long cy = std::llround(2.0 * d.y() / std::sqrt(3.0));
        m[e][2 * ed.j] += cx;
        m[e][2 * ed.i] -= cx;
        m[e][2 * ed.j + 1] += cy;
        m[e][2 * ed.i + 1] -= cy;
    }
    return m;
}

}  // namespace

TEST(RigidityMatrix, RowStructure) {
    const Lattice lat(4);
    const SparseMatrix R = rigidity_matrix(lat);
    EXPECT_EQ(R.rows(), Eigen::Index(lat.num_edges()));
    EXPECT_EQ(R.cols(), 2 * Eigen::Index(lat.num_nodes()));
    for (Eigen::Index r = 0; r < R.rows(); ++r) {
        int nnz = 0;
        for (SparseMatrix::InnerIterator it(R, r); it; ++it) {
            if (it.value() != 0.0) ++nnz;
        }
        EXPECT_LE(nnz, 4);
        EXPECT_GE(nnz, 2);  // direction 1 edges have no y component
    }
}

TEST(RigidityMatrix, RigidMotionsAndDilation) {
    const Lattice lat(5);
    const SparseMatrix R = rigidity_matrix(lat);
    Eigen::VectorXd tx(2 * lat.num_nodes()), rot(2 * lat.num_nodes());
    for (std::size_t k = 0; k < lat.num_nodes(); ++k) {
        tx.segment<2>(2 * k) = Vec2(1.0, 0.0);
        const Vec2 x = lat.positions()[k];
        rot.segment<2>(2 * k) = Vec2(-x.y(), x.x());
    }
    EXPECT_LE((R * tx).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((R * rot).cwiseAbs().maxCoeff(), 1e-14);
    const Eigen::VectorXd ones = R * positions_as_field(lat);
    EXPECT_LE((ones.array() - 1.0).abs().maxCoeff(), 1e-14);
}

TEST(RigidityMatrix, MatchesKernel) {
    const Lattice lat(6);
    std::mt19937_64 rng(1);
    const Eigen::VectorXd u = random_vector(2 * Eigen::Index(lat.num_nodes()), rng);
    const Eigen::VectorXd a = rigidity_matrix(lat) * u;
    EXPECT_LE((a - kernels::serial::rigidity_apply(lat, u)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HexagonMatrix, SideTwo) {
    const Lattice lat(2);
    const Eigen::MatrixXd Z = Eigen::MatrixXd(hexagon_matrix(lat));
    ASSERT_EQ(Z.rows(), 1);
    ASSERT_EQ(Z.cols(), 12);
    EXPECT_EQ((Z.array() == 1.0).count(), 6);
    EXPECT_EQ((Z.array() == -1.0).count(), 6);
}

TEST(HexagonMatrix, RowsAndConstantVector) {
    const Lattice lat(5);
    const SparseMatrix Z = hexagon_matrix(lat);
    EXPECT_EQ(Z.rows(), Eigen::Index(lat.interior_nodes().size()));
    for (Eigen::Index r = 0; r < Z.rows(); ++r) {
        int plus = 0, minus = 0;
        for (SparseMatrix::InnerIterator it(Z, r); it; ++it) {
            plus += it.value() == 1.0;
            minus += it.value() == -1.0;
        }
        EXPECT_EQ(plus, 6);
        EXPECT_EQ(minus, 6);
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Constant(Z.cols(), 0.37);
    EXPECT_EQ((Z * ones).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RankReport, KnownSides) {
    const int expect_R[] = {0, 0, 11, 35, 71};
    const int expect_Z[] = {0, 0, 1, 7, 19};
    for (int n = 2; n <= 4; ++n) {
        const RankReport rep = rank_report(Lattice(n));
        EXPECT_EQ(rep.rank_R, expect_R[n]);
        EXPECT_EQ(rep.nullity_R, 3);
        EXPECT_EQ(rep.rank_Z, expect_Z[n]);
        EXPECT_FALSE(rep.warning.has_value());
        EXPECT_LT(rep.R_largest_dropped, 1e-12);
        EXPECT_GT(rep.R_smallest_kept, 1e-4);
    }
}

TEST(RankReport, ExactIntegerRanks) {
    for (int n = 2; n <= 6; ++n) {
        const Lattice lat(n);
        const Counts c = counts(n);
        // Z: mod-p rank is a lower bound for the rational rank; M rows bound it above.
        const Eigen::MatrixXd Zd = Eigen::MatrixXd(hexagon_matrix(lat));
        std::vector<std::vector<long long>> zi(Zd.rows(), std::vector<long long>(Zd.cols()));
        for (Eigen::Index r = 0; r < Zd.rows(); ++r) {
            for (Eigen::Index k = 0; k < Zd.cols(); ++k) zi[r][k] = std::llround(Zd(r, k));
        }
        EXPECT_EQ(oracle::rank_mod_p(zi), c.interior);
        // R: three independent rigid motions bound the rank above by 2N - 3.
        EXPECT_EQ(oracle::rank_mod_p(integer_rigidity(lat)), 2 * c.nodes - 3);
        EXPECT_EQ(rank_report(lat).rank_Z, c.interior);
    }
}

TEST(SolveDisplacements, ZeroAndDilation) {
    const Lattice lat(4);
    const Eigen::VectorXd zero = solve_displacements(lat, Eigen::VectorXd::Zero(Eigen::Index(lat.num_edges())));
    EXPECT_EQ(zero.cwiseAbs().maxCoeff(), 0.0);

    const Eigen::VectorXd u = solve_displacements(lat, Eigen::VectorXd::Ones(Eigen::Index(lat.num_edges())));
    Eigen::VectorXd expect = positions_as_field(lat);
    for (std::size_t k = 0; k < lat.num_nodes(); ++k) expect.segment<2>(2 * k) -= lat.positions()[0];
    EXPECT_LE((u - expect).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(u[0], 0.0);
    EXPECT_EQ(u[1], 0.0);
    EXPECT_EQ(u[2 * gauge_neighbour(lat) + 1], 0.0);
}

TEST(SolveDisplacements, RandomRangeVectors) {
    for (int n : {3, 5, 9}) {  // 9 takes the iterative path
        const Lattice lat(n);
        std::mt19937_64 rng(n);
        const Eigen::VectorXd u0 = random_vector(2 * Eigen::Index(lat.num_nodes()), rng);
        const Eigen::VectorXd kappa = kernels::omp::rigidity_apply(lat, u0);
        const Eigen::VectorXd u = solve_displacements(lat, kappa);
        const double res = (kernels::omp::rigidity_apply(lat, u) - kappa).norm();
        EXPECT_LE(res, 1e-9 * kappa.norm()) << n;
    }
}

TEST(SolveDisplacements, ReportsWorstNode) {
    const Lattice lat(4);
    Eigen::VectorXd kappa = Eigen::VectorXd::Zero(Eigen::Index(lat.num_edges()));
    const std::size_t node = lat.interior_nodes()[5];
    const NodeHexagon h = lat.node_hexagon(node);
    kappa[Eigen::Index(h.spokes[0])] = 0.1;
    // the spoke also sits on the rim of up to two other hexagons
    try {
        solve_displacements(lat, kappa);
        FAIL() << "expected IncompatibleElongations";
    } catch (const IncompatibleElongations& ex) {
        const Eigen::VectorXd r = hexagon_matrix(lat) * kappa;
        EXPECT_DOUBLE_EQ(std::abs(r[Eigen::Index(lat.equation_row(ex.worst_node))]), r.cwiseAbs().maxCoeff());
        EXPECT_DOUBLE_EQ(ex.worst_residual, 0.1);
    }
}

TEST(ProjectToCompatible, LandsInKernelAndIsIdempotent) {
    const Lattice lat(4);
    std::mt19937_64 rng(3);
    const Eigen::VectorXd v = random_vector(Eigen::Index(lat.num_edges()), rng);
    const Eigen::VectorXd p = project_to_compatible(lat, v);
    EXPECT_LE((hexagon_matrix(lat) * p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((project_to_compatible(lat, p) - p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR((v - p).dot(p), 0.0, 1e-10);
}

TEST(NonlinearResidual, EquilateralIsClosed) {
    std::array<double, 6> ones;
    ones.fill(1.0);
    EXPECT_NEAR(nonlinear_node_residual(ones, ones), 0.0, 1e-14);
}

TEST(NonlinearResidual, DegenerateTriangles) {
    std::array<double, 6> spokes, rims;
    spokes.fill(1.0);
    rims.fill(2.0);
    EXPECT_THROW(nonlinear_node_residual(spokes, rims), DegenerateTriangle);
    rims.fill(2.5);
    EXPECT_THROW(nonlinear_node_residual(spokes, rims), DegenerateTriangle);
}

TEST(NonlinearResidual, MatchesLawOfCosines) {
    const std::array<double, 6> spokes{1.02, 0.97, 1.05, 1.0, 0.99, 1.01};
    const std::array<double, 6> rims{1.0, 1.03, 0.96, 1.02, 1.0, 0.98};
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) sum += oracle::law_of_cosines_angle(spokes[i], spokes[(i + 1) % 6], rims[i]);
    EXPECT_NEAR(nonlinear_node_residual(spokes, rims), sum - 2.0 * std::numbers::pi, 1e-14);
}

TEST(NonlinearResidual, QuadraticForCompatibleElongations) {
    const Lattice lat(4);
    std::mt19937_64 rng(11);
    const Eigen::VectorXd u = random_vector(2 * Eigen::Index(lat.num_nodes()), rng);
    const Eigen::VectorXd kappa = kernels::omp::rigidity_apply(lat, u);
    const double eps = 1e-2;
    for (std::size_t node : lat.interior_nodes()) {
        const auto [s1, r1] = node_lengths(lat, node, kappa, eps);
        const auto [s2, r2] = node_lengths(lat, node, kappa, eps / 2);
        const double ratio = nonlinear_node_residual(s1, r1) / nonlinear_node_residual(s2, r2);
        EXPECT_GE(ratio, 3.0);
        EXPECT_LE(ratio, 5.0);
    }
}

TEST(NonlinearResidual, FirstOrderCoefficient) {
    // d(sum of angles)/d eps = -(sqrt(3)/3) (2 sum ka - 2 sum kb)
    std::mt19937_64 rng(2);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 20; ++trial) {
        std::array<double, 6> ka, kb;
        double sa = 0.0, sb = 0.0;
        for (int i = 0; i < 6; ++i) {
            ka[i] = dist(rng);
            kb[i] = dist(rng);
            sa += ka[i];
            sb += kb[i];
        }
        auto eval = [&](double e) {
            std::array<double, 6> s, r;
            for (int i = 0; i < 6; ++i) {
                s[i] = 1.0 + e * ka[i];
                r[i] = 1.0 + e * kb[i];
            }
            return nonlinear_node_residual(s, r);
        };
        const double h = 1e-5;
        const double fd = (eval(h) - eval(-h)) / (2 * h);
        const double expect = -(std::sqrt(3.0) / 3.0) * (2 * sa - 2 * sb);
        EXPECT_NEAR(fd, expect, 1e-6 * std::abs(expect));
    }
}

TEST(Triplets, Format) {
    const Lattice lat(2);
    std::ostringstream os;
    write_triplets(os, hexagon_matrix(lat));
    std::istringstream in(os.str());
    int r, c;
    double v;
    int count = 0;
    while (in >> r >> c >> v) {
        EXPECT_EQ(r, 0);
        EXPECT_TRUE(v == 1.0 || v == -1.0);
        ++count;
    }
    EXPECT_EQ(count, 12);
}
