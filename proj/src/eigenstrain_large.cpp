#include "bistable/eigenstrain_large.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "bistable/errors.hpp"

namespace bistable {

namespace {

const double kSqrt3 = std::sqrt(3.0);

void check_a(double a) {
    if (!(a > 0.5 && a < 2.0)) {
        throw ParameterOutOfRange("long rod length a must lie in (1/2, 2), got " + std::to_string(a));
    }
}

Eigen::Matrix2d rotation60() {
    const double c = 0.5;
    const double s = kSqrt3 / 2.0;
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

StrainTensor gamma_state(double a) {
    const double cos_g = 1.0 / (2.0 * a);
    const double tan_g = std::sqrt(1.0 - cos_g * cos_g) / cos_g;
    return {tan_g / kSqrt3, 0.0, 1.0};
}

StrainTensor delta_state(double a) {
    const double cos_d = a / 2.0;
    const double sin_d = std::sqrt(1.0 - cos_d * cos_d);
    return {2.0 * sin_d / kSqrt3, 0.0, 2.0 * cos_d};
}

void push_pair(std::vector<RegionSample>& out, const StrainTensor& e, const std::string& family, double mu,
               long long k = 0, long long n1 = 0, long long n2 = 0, long long n3 = 0) {
    const auto lam = e.eigenvalues();
    out.push_back({lam[0], lam[1], family, mu, k, n1, n2, n3});
    out.push_back({lam[1], lam[0], family, mu, k, n1, n2, n3});
}

}  // namespace

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Alpha: return "alpha";
        case Phase::Beta: return "beta";
        case Phase::Gamma: return "gamma";
        case Phase::GammaP: return "gamma'";
        case Phase::GammaPP: return "gamma''";
        case Phase::Delta: return "delta";
        case Phase::DeltaP: return "delta'";
        case Phase::DeltaPP: return "delta''";
    }
    return "?";
}

Phase parse_phase(std::string_view name) {
    for (Phase p : {Phase::Alpha, Phase::Beta, Phase::Gamma, Phase::GammaP, Phase::GammaPP, Phase::Delta,
                    Phase::DeltaP, Phase::DeltaPP}) {
        if (phase_name(p) == name) return p;
    }
    throw InvalidArgument("unknown phase '" + std::string(name) + "'");
}

HomogeneousState homogeneous_state(Phase phase, double a) {
    check_a(a);
    StrainTensor e;
    switch (phase) {
        case Phase::Alpha: e = StrainTensor::identity(); break;
        case Phase::Beta: e = StrainTensor::identity(a); break;
        case Phase::Gamma: e = gamma_state(a); break;
        case Phase::GammaP: e = twin_rotate(gamma_state(a), +1); break;
        case Phase::GammaPP: e = twin_rotate(gamma_state(a), -1); break;
        case Phase::Delta: e = delta_state(a); break;
        case Phase::DeltaP: e = twin_rotate(delta_state(a), +1); break;
        case Phase::DeltaPP: e = twin_rotate(delta_state(a), -1); break;
    }
    return {phase, a, e};
}

StrainTensor twin_rotate(const StrainTensor& e, int sign) {
    const Eigen::Matrix2d r = rotation60();
    const Eigen::Matrix2d m = e.matrix();
    return StrainTensor::from_matrix(sign >= 0 ? Eigen::Matrix2d(r.transpose() * m * r)
                                               : Eigen::Matrix2d(r * m * r.transpose()));
}

LaminateCheck laminate_compatible(const StrainTensor& ey, const StrainTensor& ez) {
    const StrainTensor d = ey - ez;
    const double scale = d.frobenius();
    LaminateCheck out;
    if (scale == 0.0) {
        out.compatible = true;
        out.tau = Vec2(1.0, 0.0);
        return out;
    }
    if (d.det() > 1e-14 * scale * scale) return out;
    out.compatible = true;
    // D = l1 v1 v1^T + l2 v2 v2^T with l1 >= 0 >= l2; mixing the eigenvectors
    // with weights sqrt(-l2), sqrt(l1) cancels the two contributions.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(d.matrix());
    const double lo = std::min(eig.eigenvalues()[0], 0.0);
    const double hi = std::max(eig.eigenvalues()[1], 0.0);
    const Vec2 tau = std::sqrt(-lo) * eig.eigenvectors().col(1) + std::sqrt(hi) * eig.eigenvectors().col(0);
    out.tau = tau.normalized();
    return out;
}

StrainTensor laminate_mix(std::span<const StrainTensor> states, std::span<const double> fractions) {
    if (states.size() != fractions.size() || states.empty()) {
        throw FractionSumError("need one fraction per state");
    }
    double total = 0.0;
    for (double f : fractions) {
        if (f < 0.0) throw FractionSumError("fractions must be nonnegative");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-12) throw FractionSumError("fractions sum to " + std::to_string(total));
    StrainTensor acc;
    for (std::size_t i = 0; i < states.size(); ++i) acc = acc + fractions[i] * states[i];
    return acc;
}

DeltaRotation rotate_delta_to_tangent(double a) {
    if (!(a >= 1.0 && a < 2.0)) {
        throw ParameterOutOfRange("rotation needs 1 <= a < 2, got " + std::to_string(a));
    }
    const StrainTensor ed = delta_state(a);
    // G = [[g, rho], [rho, 1]]: trace fixes g, determinant fixes rho^2.
    const double g = ed.trace() - 1.0;
    const double rho2 = g - ed.det();
    if (rho2 < -1e-14) throw NoRealRotation("no real off-diagonal entry: rho^2 = " + std::to_string(rho2));
    DeltaRotation out;
    out.rho = std::sqrt(std::max(0.0, rho2));
    out.G = {g, out.rho, 1.0};
    const double cos_d = a / 2.0;
    const double sin_d = std::sqrt(1.0 - cos_d * cos_d);
    out.rho_squared_reference = (2.0 * cos_d - 1.0) * (2.0 * sin_d * kSqrt3 - 3.0) / 3.0;
    return out;
}

StrainTensor twin_mix(double a, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterOutOfRange("twin fraction must lie in [0, 1]");
    const DeltaRotation rot = rotate_delta_to_tangent(a);
    return {rot.G.a, (1.0 - 2.0 * mu) * rot.rho, 1.0};
}

StrainTensor delta_gamma_mix(double a, double mu) {
    const StrainTensor g = rotate_delta_to_tangent(a).G;
    const std::array<StrainTensor, 2> states{g, gamma_state(a)};
    const std::array<double, 2> mix{mu, 1.0 - mu};
    return laminate_mix(states, mix);
}

StrainTensor three_phase_mix(double a, double nu, double mu) {
    const StrainTensor g = rotate_delta_to_tangent(a).G;
    const std::array<StrainTensor, 3> states{StrainTensor::identity(), g, gamma_state(a)};
    // grid fractions like 3/5 + 2/5 leave a remainder of -1e-17
    double rest = 1.0 - mu - nu;
    if (rest < 0.0 && rest > -1e-12) rest = 0.0;
    const std::array<double, 3> mix{nu, mu, rest};
    return laminate_mix(states, mix);
}

HexAssembly hex_assembly(long long k, long long n1, long long n2, long long n3, double a) {
    if (k < 1 || n1 < 1 || n2 < 1 || n3 < 1) throw ParameterOutOfRange("hex assembly counts must be positive");
    check_a(a);
    const long long pairs = n1 * n2 + n2 * n3 + n3 * n1;
    const StrainTensor ed = delta_state(a);
    const StrainTensor d = double(k * (k + 1)) * StrainTensor::identity() + double(n1 * k) * ed +
                           double(n2 * k) * twin_rotate(ed, +1) + double(n3 * k) * twin_rotate(ed, -1) +
                           double(pairs) * StrainTensor::identity(a);
    HexAssembly out;
    out.N = k * (k + 1 + n1 + n2 + n3) + pairs;
    out.E_hex = (1.0 / double(out.N)) * d;
    return out;
}

double isotropic_factor(long long k, long long n, double a) {
    check_a(a);
    const double kk = double(k);
    const double nn = double(n);
    const double num = kk * (kk + 1.0) + 1.5 * nn * kk * delta_state(a).trace() + 3.0 * nn * nn * a;
    const double den = kk * (kk + 1.0) + 3.0 * nn * kk + 3.0 * nn * nn;
    return num / den;
}

std::vector<RegionSample> sample_region(double a, int resolution) {
    if (!(a >= 1.0 && a < 2.0)) throw ParameterOutOfRange("region sampling needs 1 <= a < 2");
    if (resolution < 2) throw InvalidArgument("resolution must be >= 2");
    std::vector<RegionSample> out;

    for (Phase p : {Phase::Alpha, Phase::Beta, Phase::Gamma, Phase::GammaP, Phase::GammaPP, Phase::Delta,
                    Phase::DeltaP, Phase::DeltaPP}) {
        push_pair(out, homogeneous_state(p, a).eigenstrain, "vertex:" + std::string(phase_name(p)), 1.0);
    }

    const StrainTensor ea = StrainTensor::identity();
    const StrainTensor eb = StrainTensor::identity(a);
    const StrainTensor eg = gamma_state(a);
    const StrainTensor edl = delta_state(a);
    const struct {
        const char* name;
        StrainTensor first;
        StrainTensor second;
    } segments[] = {{"alpha-delta", ea, edl}, {"alpha-gamma", ea, eg}, {"beta-delta", eb, edl}, {"beta-gamma", eb, eg}};

    const double h = 1.0 / double(resolution - 1);
    for (const auto& seg : segments) {
        for (int i = 0; i < resolution; ++i) {
            const double mu = i * h;
            push_pair(out, mu * seg.first + (1.0 - mu) * seg.second, seg.name, mu);
        }
    }
    for (int i = 0; i < resolution; ++i) push_pair(out, delta_gamma_mix(a, i * h), "delta-gamma", i * h);
    for (int i = 0; i < resolution; ++i) push_pair(out, twin_mix(a, i * h), "twin-delta", i * h);

    // mu = k/N, nu = p/N with p <= N - k.
    const int steps = resolution - 1;
    for (int k = 0; k <= steps; ++k) {
        for (int p = 0; p <= steps - k; ++p) {
            const double mu = double(k) / steps;
            const double nu = double(p) / steps;
            push_pair(out, three_phase_mix(a, nu, mu), "alpha-delta-gamma", mu, 0, p);
        }
    }

    for (long long k = 1; k <= resolution; ++k) {
        for (long long n = 1; n <= resolution; ++n) {
            push_pair(out, hex_assembly(k, n, n, n, a).E_hex, "hex", 0.0, k, n, n, n);
            push_pair(out, hex_assembly(k, n, 1, 1, a).E_hex, "hex", 0.0, k, n, 1, 1);
        }
    }
    return out;
}

}  // namespace bistable
