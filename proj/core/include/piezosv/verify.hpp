#pragma once

#include "piezosv/section.hpp"
#include "piezosv/svcore.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace piezosv {

/// Nodal strain and electric field blocks at one z-station (or their z-derivatives).
struct FieldState {
    Section section;
    std::vector<BlockSymTensor> strain;  // (Sigma^, zeta, eta)
    std::vector<BlockVec3> e_field;      // (grad phi, phi')
};

/// Strain and E = grad phi of the order-th z-derivative of the solution at z.
/// z-derivatives are analytic, in-plane derivatives are finite differences.
FieldState kinematics(const Solution3D& sol, double z, int order = 0);

struct StressState {
    Section section;
    std::vector<BlockSymTensor> stress;       // (T^, tau, sigma)
    std::vector<BlockVec3> displacement;      // (D_pi, D_z)
};

StressState constitutive(const FieldState& k, const MaterialTIP& m);

/// Lateral wall conditions checked besides T n = 0.
struct FluxFreeWall {};
struct PotentialWall {
    EdgeTrace phi0, phi1, phi2;  // phi = phi0 + z phi1 + z^2/2 phi2 on the wall
};
using LateralCondition = std::variant<FluxFreeWall, PotentialWall>;

struct ResidualFamily {
    std::string name;
    double value = 0.0;
    double scale = 0.0;            // natural scale (scale/diameter for divergences)
    double exact_threshold = 0.0;  // values at or below this are round-off
};

struct ResidualReport {
    double max_div_T = 0.0;
    double max_div_D = 0.0;
    double max_That = 0.0;
    double max_lateral_Tn = 0.0;
    double max_lateral_Dn = 0.0;         // flux-free wall
    double max_lateral_phi_error = 0.0;  // potential wall
    bool potential_wall = false;
    double h = 0.0;  // max(hx, hy)
    double diameter = 0.0;
    double corner_exclusion = 0.0;
    std::vector<double> z_stations;
    double stress_scale = 0.0;     // max |T|
    double flux_scale = 0.0;       // max |D|
    double potential_scale = 0.0;  // max |phi|

    /// The five families, each with a round-off threshold of 1e-10 times
    /// its natural scale (scale/h for divergences).
    std::vector<ResidualFamily> families() const;
};

/// {-L, -L/2, 0, L/2, L}
std::vector<double> default_z_stations(double half_length);

/// Recomputes T, D from the assembled fields only and checks equilibrium (at
/// interior nodes), the Clebsch condition and the lateral conditions (on the
/// wall) at every station.
/// Nodes closer than corner_exclusion to a section corner are skipped; the
/// default of zero checks every node.
ResidualReport residuals(const Solution3D& sol, const MaterialTIP& m, const std::vector<double>& z_stations,
                         const LateralCondition& lateral, double corner_exclusion = 0.0);

struct IdentityDefect {
    double defect = 0.0;
    double scale = 0.0;
};

/// max |tau(z1) - tau(z2)|
IdentityDefect tau_z_defect(const Solution3D& sol, const MaterialTIP& m, double z1, double z2);
/// max |sigma(z - dz) - 2 sigma(z) + sigma(z + dz)|
IdentityDefect sigma_curvature_defect(const Solution3D& sol, const MaterialTIP& m, double z, double dz);
/// Largest nodewise mismatch of (u_z, phi) recovered from (u~_z, phi~), over k = 0, 1, 2.
IdentityDefect tilde_identity_defect(const Solution3D& sol, const DerivedModuli& dm);

struct FamilyConvergence {
    std::string name;
    std::vector<double> h;
    std::vector<double> values;
    std::vector<double> ratios;  // values[i] / values[i + 1]
    double order = 0.0;          // least-squares slope of log value against log h
    bool exact = false;          // every value at round-off level
};

/// Throws InsufficientGrids for fewer than three points.
FamilyConvergence observed_order(const std::string& name, const std::vector<double>& h,
                                 const std::vector<double>& values, const std::vector<double>& exact_thresholds);

/// Runs `run` on every grid (coarse to fine) and reports each residual family.
std::vector<FamilyConvergence> convergence_study(const std::function<ResidualReport(const Section&)>& run,
                                                 const std::vector<Section>& grids);

}  // namespace piezosv
