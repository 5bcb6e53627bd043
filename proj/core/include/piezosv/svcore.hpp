#pragma once

#include "piezosv/material.hpp"
#include "piezosv/section.hpp"

namespace piezosv {

/// Integration constants of the polynomial-in-z solution:
///   u~_z' = (v1 + v2 z) . r + (b1 + b2 z)
/// plus the potential offsets, the rigid rotations about o = (0, 0) and the
/// affine potential data (k0, k) of the rectangular Almansi case.
struct SVConstants {
    Vec2 v1;
    Vec2 v2;
    double b1 = 0.0;
    double b2 = 0.0;
    double phi1_tilde0 = 0.0;
    double phi2_tilde0 = 0.0;
    double mu1_0 = 0.0;  // rigid rotation of u_pi^0
    double mu2_0 = 0.0;  // rigid rotation of u_pi^1
    double k0 = 0.0;
    Vec2 k;
};

struct NondegeneracyCheck {
    double bracket = 0.0;  // alpha2 F1 + beta1 G1
    double margin = 0.0;   // |bracket|
    bool pass = false;
};

/// The quadratic-in-z structure is the only one admitted when the bracket
/// alpha2 F1 + beta1 G1 is nonzero.
NondegeneracyCheck check_nondegeneracy(const DerivedModuli& dm);
/// Throws DegenerateMaterial when check_nondegeneracy fails.
void require_nondegenerate(const DerivedModuli& dm);

/// u~_z^1 = v1 . r + b1 and u~_z^2 = v2 . r + b2.
std::pair<ScalarField2D, ScalarField2D> axial_linear_profiles(const SVConstants& c, const Section& s);

/// Relative tolerance on the five-point Laplacian used to accept a field as harmonic.
inline constexpr double kHarmonicTolerance = 1e-8;

/// Returns g with grad g = *grad f and g(node 0,0) = base_value, by trapezoid
/// path integration along grid lines (row-first and column-first sweeps
/// averaged). Throws NotHarmonic when f is not discrete-harmonic.
ScalarField2D complete_gradient(const ScalarField2D& f, double base_value,
                                double harmonic_tolerance = kHarmonicTolerance);

/// Path integral for a single sweep order; exposed for path-independence checks.
enum class SweepOrder { rows_first, columns_first };
ScalarField2D complete_gradient_sweep(const ScalarField2D& f, double base_value, SweepOrder order);

inline constexpr double kIntegrabilityTolerance = 0.05;

/// Integrates grad u = spherical I + *g (with *g the skew tensor
/// [[0, -g], [g, 0]]) for u, fixing u(o) = anchor and adding a rigid rotation.
/// Throws IntegrabilityFailure when the discrete compatibility
/// grad g = *grad spherical is violated beyond the tolerance.
VectorField2D reconstruct_inplane(const ScalarField2D& spherical, const ScalarField2D& g, Vec2 anchor,
                                  double rotation, double integrability_tolerance = kIntegrabilityTolerance);

/// Closed form of the above for an affine spherical part a . r + c:
///   u = anchor + c r + rotation *r + 1/2 [(a . r) r + (*a . r) *r]
VectorField2D spherical_affine_displacement(const Section& s, Vec2 a, double c, double rotation = 0.0,
                                            Vec2 anchor = {});

/// Coefficient fields of u_z = uz0 + uz1 z + uz2 z^2/2 and phi likewise.
struct AxialProfiles {
    ScalarField2D uz0, uz1, uz2;
    ScalarField2D phi0, phi1, phi2;

    explicit AxialProfiles(const Section& s) : uz0(s), uz1(s), uz2(s), phi0(s), phi1(s), phi2(s) {}
};

/// u~_z^k = alpha1 u_z^k + 2 beta2 phi_k  (k = 0, 1, 2)
ScalarField2D uz_tilde(const AxialProfiles& p, int k, const MaterialTIP& m);
/// phi~_k = gamma1 phi_k - (beta1 + beta2)/2 u_z^k
ScalarField2D phi_tilde(const AxialProfiles& p, int k, const MaterialTIP& m);

/// Recovers (u_z^k, phi_k) from (u~_z^k, phi~_k).
std::pair<ScalarField2D, ScalarField2D> untilde(const ScalarField2D& uz_t, const ScalarField2D& phi_t,
                                                const DerivedModuli& dm);

/// Three-dimensional fields on C_pi x [-L, L]:
///   u_z   = uz0 + uz1 z + uz2 z^2/2
///   phi   = phi0 + phi1 z + phi2 z^2/2
///   u_pi  = u_pi0 + u_pi1 z - (v1 z^2/2 + v2 z^3/6)/alpha1
/// All evaluators accept a z-derivative order.
class Solution3D {
public:
    Solution3D(AxialProfiles profiles, VectorField2D u_pi0, VectorField2D u_pi1, SVConstants constants,
               double half_length, double alpha1);

    const Section& section() const { return profiles_.uz0.section; }
    const AxialProfiles& profiles() const { return profiles_; }
    const VectorField2D& u_pi0() const { return u_pi0_; }
    const VectorField2D& u_pi1() const { return u_pi1_; }
    const SVConstants& constants() const { return constants_; }
    double half_length() const { return half_length_; }
    double alpha1() const { return alpha1_; }

    ScalarField2D uz(double z, int order = 0) const;
    ScalarField2D phi(double z, int order = 0) const;
    VectorField2D u_pi(double z, int order = 0) const;

    double uz_at(int i, int j, double z) const;
    double phi_at(int i, int j, double z) const;
    Vec2 u_pi_at(int i, int j, double z) const;

private:
    AxialProfiles profiles_;
    VectorField2D u_pi0_;
    VectorField2D u_pi1_;
    SVConstants constants_;
    double half_length_;
    double alpha1_;
};

/// Section resultants of a solution.
struct Resultants {
    double axial_force = 0.0;           // int sigma dA at z = 0
    double d_flux = 0.0;                // int D_z dA at z = 0
    double potential_difference = 0.0;  // 2L times the section mean of phi_1
    Vec2 shear;                         // int tau dA = int r sigma' dA
};

/// Quadrature of the resultants from the stored profiles, using
/// sigma = A1 u_z' + B1 phi' and D_z = B2 u_z' + A2 phi' (valid under T^ = 0).
Resultants section_resultants(const Solution3D& sol, const DerivedModuli& dm);

/// Throws GridMismatch unless every part lives on the same section.
Solution3D assemble(AxialProfiles profiles, VectorField2D u_pi0, VectorField2D u_pi1, SVConstants constants,
                    double half_length, double alpha1);

}  // namespace piezosv
