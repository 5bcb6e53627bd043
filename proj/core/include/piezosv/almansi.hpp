#pragma once

#include "piezosv/elliptic.hpp"
#include "piezosv/svcore.hpp"

#include <optional>

namespace piezosv {

/// Lateral potential phi0 + z phi1 + z^2/2 phi2 prescribed on the wall.
/// phi2's trace defaults to the rectangular shortcut: k0 on y = 0, k1 on
/// y = y0, linear in between. phi0 and phi1 traces default to zero.
struct AlmansiBoundaryData {
    double k0 = 0.0;
    double k1 = 0.0;
    std::optional<EdgeTrace> phi0_trace;
    std::optional<EdgeTrace> phi1_trace;
    std::optional<EdgeTrace> phi2_trace;

    /// True when phi2 is the affine field k0 + k . r.
    bool affine() const { return !phi2_trace.has_value(); }
};

/// k = (0, (k1 - k0)/y0)
Vec2 potential_slope(const AlmansiBoundaryData& bd, const Section& s);

/// Sign of the flux in grad u~_z^0 . n = sign alpha1 u_pi^1 . n. The minus
/// sign follows from tau . n = 0; plus is kept for comparison only.
enum class FluxSign { minus, plus };

struct AlmansiSolution {
    Solution3D solution;
    // Only meaningful for affine phi2 data (zero otherwise).
    Vec2 omega0;
    double omega1_bar = 0.0;
    Vec2 omega2;
    double omega3_bar = 0.0;
    Resultants resultants;
    CompatibilityDefect warping_defect;
};

ScalarField2D solve_phi2(const AlmansiBoundaryData& bd, const Section& s, const SolverConfig& cfg = {});
ScalarField2D solve_phi1(const AlmansiBoundaryData& bd, const Section& s, const SolverConfig& cfg = {});
/// Lap phi0 = Z2 u~_z^2 + Z3 phi2 with the phi0 trace.
ScalarField2D solve_phi0(const ScalarField2D& uz2_tilde, const ScalarField2D& phi2, const DerivedModuli& dm,
                         const AlmansiBoundaryData& bd, const Section& s, const SolverConfig& cfg = {});

struct SecondOrderAxial {
    double b2 = 0.0;
    ScalarField2D uz2_tilde;
};

/// b2 = -v2 . r_B + (k0 + k . r_B)(2 beta2 - B1 alpha1/A1), u~_z^2 = v2 . r + b2,
/// which makes the section integral of sigma' vanish.
SecondOrderAxial b2_and_uz2(Vec2 v2, double k0, Vec2 k, const DerivedModuli& dm, const Section& s);
/// Same for a general phi2, with its section mean in place of k0 + k . r_B.
SecondOrderAxial b2_and_uz2(Vec2 v2, const ScalarField2D& phi2, const DerivedModuli& dm);

/// Omega0 = Z4 v2 + Z5 k;  Omega1bar = (k0 + k . r_B)(Z5 + Z4 c)
/// Omega2 = Z0 v2 + Z1 k;  Omega3bar = (k0 + k . r_B)(Z1 + Z0 c),  c = 2 beta2 - B1 alpha1/A1
struct OmegaValues {
    Vec2 omega0;
    double omega1_bar = 0.0;
    Vec2 omega2;
    double omega3_bar = 0.0;
};
OmegaValues omega_values(Vec2 v2, double k0, Vec2 k, const DerivedModuli& dm, const Section& s);

/// u_pi^1 = 1/2[(Omega0 . r) r + (*Omega0 . r) *r] + (Omega1bar - Omega0 . r_B) r + mu2_0 *r,
/// whose symmetric gradient is (Z4 u~_z^2 + Z5 phi2) I.
VectorField2D u_pi1_closed(Vec2 v2, Vec2 k, double k0, const DerivedModuli& dm, const Section& s,
                           double mu2_0 = 0.0);

/// Lap u~_z^0 = rhs, grad u~_z^0 . n = sign alpha1 u_pi^1 . n, zero mean.
/// Throws IncompatibleData when the data are not compatible.
ScalarField2D warping_bvp(const ScalarField2D& rhs, const VectorField2D& u_pi1, const DerivedModuli& dm,
                          const SolverConfig& cfg = {}, FluxSign sign = FluxSign::minus);
/// rhs = Omega2 . (r - r_B) + Omega3bar
ScalarField2D warping_bvp(const VectorField2D& u_pi1, Vec2 omega2, double omega3_bar, const DerivedModuli& dm,
                          const SolverConfig& cfg = {}, FluxSign sign = FluxSign::minus);

/// q = *J_B (Y v2 + Ybar k)
Vec2 shear_resultant(Vec2 v2, Vec2 k, const DerivedModuli& dm, const InertiaData& in);
/// Inverse of shear_resultant in v2. Throws DegenerateMaterial(Y).
Vec2 design_v2(Vec2 q_target, Vec2 k, const DerivedModuli& dm, const InertiaData& in);
/// Simpson quadrature of int r sigma' dA with sigma' = Y v2 . (r - r_B) + Ybar k . (r - r_B).
Vec2 shear_quadrature(Vec2 v2, Vec2 k, const DerivedModuli& dm, const Section& s);

/// Full pipeline. The k0, k members of c are replaced by the boundary data.
AlmansiSolution solve_almansi(const SVConstants& c, const AlmansiBoundaryData& bd, const MaterialTIP& m,
                              const Section& s, const SolverConfig& cfg = {}, double half_length = 1.0,
                              FluxSign sign = FluxSign::minus);

}  // namespace piezosv
