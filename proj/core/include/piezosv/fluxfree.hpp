#pragma once

#include "piezosv/elliptic.hpp"
#include "piezosv/svcore.hpp"

namespace piezosv {

/// Lateral wall free of tractions and of normal electric displacement.
struct FluxFreeSolution {
    Solution3D solution;
    double lambda0 = 0.0;  // spherical part of u_pi^0 is lambda0 + lambda1 . r
    Vec2 lambda1;
    Resultants resultants;
    CompatibilityDefect phi_defect;  // Neumann problem for phi~_0
    CompatibilityDefect uz_defect;   // Neumann problem for u~_z^0
};

/// b2 and phi~_2^0 are overwritten so that both Neumann problems are
/// compatible; k0 and k must be zero. Throws DegenerateMaterial,
/// IncompatibleData, SolveFailure, InvalidBoundaryData.
FluxFreeSolution solve_fluxfree(const SVConstants& c, const MaterialTIP& m, const Section& s,
                                const SolverConfig& cfg = {}, double half_length = 1.0);

/// phi~_1^0 that cancels the lateral contraction of pure extension (u_pi^0 = 0).
/// Throws DegenerateMaterial when 2 alpha2 beta2 - alpha1 beta1 vanishes.
double poisson_cancel_potential(double b1, const MaterialTIP& m);

struct ResultantsCheck {
    Resultants closed_form;
    Resultants quadrature;
    double discrepancy = 0.0;  // largest relative disagreement of axial_force, d_flux
    bool consistent = false;   // discrepancy <= 1e-8
};

/// Closed-form and quadrature resultants at z = 0.
ResultantsCheck resultants_fluxfree(const FluxFreeSolution& sol, const MaterialTIP& m, const Section& s,
                                    double half_length);

}  // namespace piezosv
