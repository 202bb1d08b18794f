#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bistable/compatibility.hpp"
#include "bistable/energy.hpp"
#include "bistable/errors.hpp"
#include "bistable/kernels.hpp"
#include "bistable/still_states.hpp"
#include "oracles.hpp"

using namespace bistable;

namespace {

StrainTensor random_in_D(std::mt19937_64& rng, double s) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return s * m_map(q_matrices().Qinv * Eigen::Vector3d(u(rng), u(rng), u(rng)));
}

StrainTensor random_strain(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> n(0.0, scale);
    return {n(rng), n(rng), n(rng)};
}

// Frobenius distance to D by projected gradient on the cube coordinates.
double distance_to_D(const StrainTensor& e, double s) {
    const Eigen::Matrix3d W = Eigen::Vector3d(1.0, 2.0, 1.0).asDiagonal();
    const Eigen::Matrix3d M = s * q_matrices().Qinv;
    const Eigen::Vector3d y = m_inverse(e);
    const Eigen::Matrix3d H = 2.0 * M.transpose() * W * M;
    const Eigen::Vector3d g = -2.0 * M.transpose() * W * y;
    const Eigen::Vector3d x = oracle::projected_gradient_box(H, g);
    return (e - m_map(M * x)).frobenius();
}

}  // namespace

TEST(RodEnergy, Wells) {
    const RodEnergyParams p{1.0, 0.1, 1.0};
    EXPECT_EQ(rod_energy_quadratic(1.0, p), 0.0);
    EXPECT_EQ(rod_energy_quadratic(1.1, p), 0.0);
    EXPECT_NEAR(rod_energy_quadratic(1.05, p), 0.01 / 8.0, 1e-17);
    EXPECT_EQ(rod_energy_poly(1.0, p), 0.0);
    EXPECT_NEAR(rod_energy_poly(1.1, p), 0.0, 1e-30);
    EXPECT_NEAR(rod_energy_poly(1.05, p), std::pow(0.05, 4), 1e-18);
    const RodEnergyParams stiff{2.0, 0.1, 3.0};
    // first branch carries no stiffness factor
    EXPECT_NEAR(rod_energy_quadratic(2.01, stiff), 0.5 * 0.01 * 0.01, 1e-16);
    EXPECT_NEAR(rod_energy_quadratic(2.19, stiff), 0.5 * 3.0 * 0.01 * 0.01, 1e-17);
}

TEST(LinkEnergy, Values) {
    const RodEnergyParams p{1.5, 0.1, 2.0};
    EXPECT_EQ(link_energy(0.0, p), 0.0);
    EXPECT_EQ(link_energy(0.1, p), 0.0);
    EXPECT_NEAR(link_energy(0.05, p), 0.5 * 2.0 * 2.25 * 0.0025, 1e-16);
    EXPECT_THROW((RodEnergyParams{1.0, 0.0, 1.0}).validate(), InvalidArgument);
    EXPECT_THROW((RodEnergyParams{1.0, 0.1, -1.0}).validate(), InvalidArgument);
}

TEST(TotalEnergy, ZeroCases) {
    const Lattice lat(5);
    const RodEnergyParams p;
    const Eigen::Index dim = 2 * Eigen::Index(lat.num_nodes());
    EXPECT_EQ(total_energy(lat, Eigen::VectorXd::Zero(dim), p), 0.0);
    Eigen::VectorXd tr(dim);
    for (Eigen::Index k = 0; k < dim; k += 2) {
        tr[k] = 0.3;
        tr[k + 1] = -0.2;
    }
    EXPECT_LE(total_energy(lat, tr, p), 1e-30);
    for (int g = 1; g <= 3; ++g) {
        const StillState st = stripe(lat, g, 2, p.s);
        EXPECT_EQ(kernels::omp::link_energy_sum(st.kappa, p.C, p.l, p.s), 0.0);
        const Eigen::VectorXd u = solve_displacements(lat, st.kappa);
        EXPECT_LE(total_energy(lat, u, p), 1e-28);
    }
}

TEST(TotalEnergy, GradientMatchesFiniteDifferences) {
    const Lattice lat(3);
    const RodEnergyParams p{1.0, 0.1, 1.7};
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 0.03);
    Eigen::VectorXd u(2 * lat.num_nodes());
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = n(rng);
    const Eigen::VectorXd g = total_energy_gradient(lat, u, p);
    const double h = 1e-7;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        Eigen::VectorXd up = u, dn = u;
        up[k] += h;
        dn[k] -= h;
        const double fd = (total_energy(lat, up, p) - total_energy(lat, dn, p)) / (2 * h);
        EXPECT_NEAR(fd, g[k], 1e-7);
    }
}

TEST(Cauchy, Values) {
    EXPECT_EQ(cauchy_energy({}, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(cauchy_energy(StrainTensor::identity(), 1.0), 2.0 / 3.0);
    EXPECT_NEAR(cauchy_energy({0.0, 0.3, 0.0}, 2.0), 4.0 * 2.0 / 3.0 * 0.09, 1e-16);
}

TEST(Cauchy, PositiveDefiniteWithSpectralBounds) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        const StrainTensor e = random_strain(rng, 1.0);
        const double f2 = e.frobenius() * e.frobenius();
        const double w = cauchy_energy(e, 1.5);
        EXPECT_GT(w, 0.0);
        EXPECT_GE(w, 1.5 / 3.0 * f2 * (1 - 1e-12));
        EXPECT_LE(w, 2.0 * 1.5 / 3.0 * f2 * (1 + 1e-12));
    }
}

TEST(BoxQp, MatchesProjectedGradient) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Matrix3d B;
        for (int i = 0; i < 9; ++i) B.data()[i] = n(rng);
        const Eigen::Matrix3d H = B * B.transpose() + 0.1 * Eigen::Matrix3d::Identity();
        const Eigen::Vector3d g(3 * n(rng), 3 * n(rng), 3 * n(rng));
        const BoxQpResult r = minimize_box_qp(H, g);
        const Eigen::Vector3d x = oracle::projected_gradient_box(H, g);
        const double ref = 0.5 * x.dot(H * x) + g.dot(x);
        EXPECT_LE(r.value, ref + 1e-10);
        EXPECT_NEAR(r.value, ref, 1e-8 * (1 + std::abs(ref)));
        EXPECT_TRUE((r.x.array() >= 0).all() && (r.x.array() <= 1).all());
    }
}

TEST(EffectiveDensity, ZeroOnD) {
    const RodEnergyParams p{1.0, 0.1, 1.0};
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
        const StrainTensor e = random_in_D(rng, p.s);
        const EffectiveDensityResult r = effective_density_full(e, p);
        EXPECT_EQ(r.J, 0.0);
        EXPECT_EQ(r.minimizer, e);
        EXPECT_EQ(effective_density_corners(e, p), 0.0);
    }
}

TEST(EffectiveDensity, TwiceIdentity) {
    const RodEnergyParams p{1.0, 0.1, 1.0};
    const StrainTensor e = StrainTensor::identity(0.2);
    const EffectiveDensityResult r = effective_density_full(e, p);
    EXPECT_LE((r.minimizer - StrainTensor::identity(0.1)).frobenius(), 1e-14);
    EXPECT_NEAR(r.J, 2.0 / 3.0 * 0.01, 1e-15);
    EXPECT_NEAR(effective_density_corners(e, p), 2.0 / 3.0 * 0.01, 1e-15);
    EXPECT_EQ(r.active_constraints.size(), 3u);
}

TEST(EffectiveDensity, OutsideAndCornerOrdering) {
    const RodEnergyParams p{1.0, 0.1, 1.3};
    std::mt19937_64 rng(5);
    int outside = 0;
    for (int k = 0; k < 500; ++k) {
        const StrainTensor e = random_strain(rng, 0.15);
        if (flat_bottom_membership(e, p.s).inside) continue;
        ++outside;
        const EffectiveDensityResult r = effective_density_full(e, p);
        EXPECT_GT(r.J, 0.0);
        EXPECT_TRUE(flat_bottom_membership(r.minimizer, p.s).inside);
        EXPECT_NEAR(r.J, cauchy_energy(e - r.minimizer, p.C), 1e-15);
        EXPECT_GE(effective_density_corners(e, p), r.J - 1e-15);
        const double d = distance_to_D(e, p.s);
        EXPECT_GE(r.J, p.C / 3.0 * d * d * (1 - 1e-6));
        EXPECT_LE(r.J, 2.0 * p.C / 3.0 * d * d * (1 + 1e-6));
    }
    EXPECT_GT(outside, 100);
}

TEST(EffectiveDensity, Convex) {
    const RodEnergyParams p{1.0, 0.1, 1.0};
    std::mt19937_64 rng(13);
    for (int k = 0; k < 500; ++k) {
        const StrainTensor e1 = random_strain(rng, 0.2);
        const StrainTensor e2 = random_strain(rng, 0.2);
        const double mid = effective_density_full(0.5 * (e1 + e2), p).J;
        const double avg = 0.5 * (effective_density_full(e1, p).J + effective_density_full(e2, p).J);
        EXPECT_LE(mid, avg + 1e-10);
    }
}

TEST(EffectiveDensity, QuadraticAlongRay) {
    const RodEnergyParams p{1.0, 0.1, 1.0};
    const StrainTensor dir{0.6, 0.3, -0.2};
    auto J = [&](double t) { return effective_density_full(StrainTensor::identity(0.1) + t * dir, p); };
    const auto far1 = J(10.0);
    const auto far2 = J(20.0);
    ASSERT_EQ(far1.active_constraints, far2.active_constraints);
    EXPECT_NEAR(far2.J / far1.J, 4.0, 0.05);
}

TEST(FiniteSizeGap, Decays) {
    EXPECT_NEAR(finite_size_gap(5, 0.1) * 4.0, finite_size_gap(2, 0.1), 1e-15);
}

TEST(Relax, StillStateIsFixedPoint) {
    const Lattice lat(4);
    const RodEnergyParams p;
    const StillState st = approx_concentrations(lat, {0.5, 0.2, 0.7}, p.s);
    const Eigen::VectorXd u = solve_displacements(lat, st.kappa);
    const RelaxResult r = relax(lat, u, p, 100, 1e-10);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iters, 0);
    EXPECT_LE(r.energy, 1e-28);
}

TEST(Relax, RecoversPerturbedStillState) {
    const Lattice lat(5);
    const RodEnergyParams p{1.0, 0.1, 1.0};
    const StillState st = approx_concentrations(lat, {0.4, 0.6, 0.3}, p.s);
    Eigen::VectorXd u = solve_displacements(lat, st.kappa);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] += 1e-3 * p.s * p.l * d(rng);
    const double e0 = total_energy(lat, u, p);
    const RelaxResult r = relax(lat, u, p, 500, 1e-14);
    EXPECT_LE(r.energy, e0);
    EXPECT_LE(r.iters, 500);
    EXPECT_LE(r.energy, 1e-12 * p.C * p.l * p.l * double(lat.num_edges()));
}

TEST(Relax, EnergyNeverIncreases) {
    const Lattice lat(3);
    const RodEnergyParams p{1.0, 0.1, 2.0};
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 0.05);
    Eigen::VectorXd u(2 * lat.num_nodes());
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = n(rng);
    double prev = total_energy(lat, u, p);
    for (int step = 0; step < 30; ++step) {
        const RelaxResult r = relax(lat, u, p, 1, 0.0);
        EXPECT_LE(r.energy, prev);
        prev = r.energy;
        u = r.u;
    }
}
