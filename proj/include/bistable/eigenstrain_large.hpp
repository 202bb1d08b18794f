#pragma once

// Eigenstrains of still states under finite deformation: rods of length 1 or
// a = 1 + s, homogeneous phases, laminates, twins and the hexagon/triangle/strip
// assembly.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bistable/lattice.hpp"
#include "bistable/strain.hpp"

namespace bistable {

enum class Phase { Alpha, Beta, Gamma, GammaP, GammaPP, Delta, DeltaP, DeltaPP };

std::string_view phase_name(Phase p);
/// Accepts "alpha", "beta", "gamma", "gamma'", "gamma''", "delta", ... Throws InvalidArgument.
Phase parse_phase(std::string_view name);

struct HomogeneousState {
    Phase phase;
    double a;
    StrainTensor eigenstrain;
};

/// Throws ParameterOutOfRange unless 1/2 < a < 2.
HomogeneousState homogeneous_state(Phase phase, double a);

/// Conjugation by the 60 degree rotation R: R^T E R for sign +1, R E R^T for -1.
StrainTensor twin_rotate(const StrainTensor& e, int sign);

struct LaminateCheck {
    bool compatible = false;
    std::optional<Vec2> tau;  // unit tangent with tau^T (Ey - Ez) tau = 0
};

/// Compatible iff det(Ey - Ez) <= 0.
LaminateCheck laminate_compatible(const StrainTensor& ey, const StrainTensor& ez);

/// Volume-fraction average. Throws FractionSumError unless the fractions are
/// nonnegative and sum to 1 within 1e-12.
StrainTensor laminate_mix(std::span<const StrainTensor> states, std::span<const double> fractions);

struct DeltaRotation {
    StrainTensor G;  // same trace and determinant as E_delta, G_22 = 1, G_12 >= 0
    double rho = 0.0;
    /// (1/3)(2 cos d - 1)(2 sqrt(3) sin d - 3). This equals -rho^2; kept for
    /// comparison only.
    double rho_squared_reference = 0.0;
};

/// Rotates E_delta so that its tangent entry matches the unit rod.
/// Throws ParameterOutOfRange unless 1 <= a < 2, NoRealRotation if no real G_12 exists.
DeltaRotation rotate_delta_to_tangent(double a);

/// Two-phase twin [[Tr E_delta - 1, (1 - 2 mu) rho], [(1 - 2 mu) rho, 1]].
StrainTensor twin_mix(double a, double mu);

/// mu G + (1 - mu) E_gamma.
StrainTensor delta_gamma_mix(double a, double mu);

/// nu E_alpha + mu G + (1 - mu - nu) E_gamma.
StrainTensor three_phase_mix(double a, double nu, double mu);

struct HexAssembly {
    StrainTensor E_hex;
    long long N = 0;  // k(k+1+n1+n2+n3) + n1 n2 + n2 n3 + n3 n1
};

/// Throws ParameterOutOfRange for non-positive counts or a outside (1, 2).
HexAssembly hex_assembly(long long k, long long n1, long long n2, long long n3, double a);

/// Isotropic factor of the assembly with n1 = n2 = n3 = n, from the closed form
/// (k(k+1) + 3/2 n k Tr E_delta + 3 n^2 a) / (k(k+1) + 3 n k + 3 n^2).
double isotropic_factor(long long k, long long n, double a);

struct RegionSample {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::string family;
    double mu = 0.0;
    long long k = 0;
    long long n1 = 0;
    long long n2 = 0;
    long long n3 = 0;
};

/// Eigenvalue pairs of homogeneous states, two- and three-phase laminates, twins
/// and hex assemblies; every point is followed by its swapped copy.
std::vector<RegionSample> sample_region(double a, int resolution);

}  // namespace bistable
