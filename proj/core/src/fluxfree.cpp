#include "piezosv/fluxfree.hpp"

#include "piezosv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace piezosv {

namespace {

struct ExtensionConstants {
    double c_u1 = 0.0;  // constant part of u_z^1 (its slope is v1/alpha1)
    double phi1 = 0.0;  // phi_1 is constant
};

ExtensionConstants extension_constants(const SVConstants& c, const DerivedModuli& dm) {
    const MaterialTIP& m = dm.material;
    return {(m.gamma1 * c.b1 - 2.0 * m.beta2 * c.phi1_tilde0) / dm.Dc,
            (0.5 * (m.beta1 + m.beta2) * c.b1 + m.alpha1 * c.phi1_tilde0) / dm.Dc};
}

}  // namespace

FluxFreeSolution solve_fluxfree(const SVConstants& constants, const MaterialTIP& m, const Section& s,
                                const SolverConfig& cfg, double half_length) {
    if (constants.k0 != 0.0 || constants.k != Vec2{})
        throw InvalidBoundaryData("flux-free wall requires k0 = 0 and k = 0");
    const DerivedModuli dm = derive_moduli(m);
    require_nondegenerate(dm);

    const double ml = dm.mu_plus_lambda();
    const double bs = m.beta1 + m.beta2;
    const Vec2 rB = inertia(s).centroid;

    SVConstants c = constants;
    c.b2 = -dot(c.v2, rB);
    c.phi2_tilde0 = bs / (2.0 * m.alpha1) * dot(c.v2, rB);

    const ExtensionConstants ext = extension_constants(c, dm);

    AxialProfiles p(s);
    p.uz1 = affine_field(s, c.v1 / m.alpha1, ext.c_u1);
    p.phi1 = ScalarField2D(s, ext.phi1);
    p.uz2 = affine_field(s, c.v2 / m.alpha1, -dot(c.v2, rB) / m.alpha1);
    p.phi2 = ScalarField2D(s, 0.0);

    // Spherical parts: s0 = lambda0 + lambda1 . r, s1 = a1 . (r - r_B).
    const Vec2 lambda1 = -m.alpha2 / (2.0 * m.alpha1 * ml) * c.v1;
    const double lambda0 = -(m.alpha2 * ext.c_u1 + m.beta1 * ext.phi1) / (2.0 * ml);
    const Vec2 a1 = -m.alpha2 / (2.0 * m.alpha1 * ml) * c.v2;

    VectorField2D u0 = spherical_affine_displacement(s, lambda1, lambda0, c.mu1_0);
    VectorField2D u1 = spherical_affine_displacement(s, a1, -dot(a1, rB), c.mu2_0);

    const EdgeTrace u1n = normal_component(u1);
    EdgeTrace phi_flux = u1n;
    EdgeTrace uz_flux = u1n;
    for (Edge e : kEdges) {
        for (double& g : phi_flux[e]) g *= 0.5 * bs;
        for (double& g : uz_flux[e]) g *= -m.alpha1;
    }
    const NeumannProblem phi_problem{combine(-dm.F2, p.uz2, -dm.G2, p.phi2), phi_flux};
    const NeumannProblem uz_problem{combine(-dm.F3, p.uz2, -dm.G3, p.phi2), uz_flux};
    const CompatibilityDefect phi_defect = compatibility_defect(phi_problem);
    const CompatibilityDefect uz_defect = compatibility_defect(uz_problem);

    const ScalarField2D phi_t0 = solve_neumann(phi_problem, cfg);
    const ScalarField2D uz_t0 = solve_neumann(uz_problem, cfg);
    auto [uz0, phi0] = untilde(uz_t0, phi_t0, dm);
    p.uz0 = std::move(uz0);
    p.phi0 = std::move(phi0);

    Solution3D sol = assemble(std::move(p), std::move(u0), std::move(u1), c, half_length, m.alpha1);
    const Resultants res = section_resultants(sol, dm);
    return {std::move(sol), lambda0, lambda1, res, phi_defect, uz_defect};
}

double poisson_cancel_potential(double b1, const MaterialTIP& m) {
    // lambda0 = 0  <=>  alpha2 c_u1 + beta1 phi_1 = 0 with c_u1, phi_1 affine in (b1, phi~_1^0).
    const double den = 2.0 * m.alpha2 * m.beta2 - m.alpha1 * m.beta1;
    if (is_degenerate(den, {2.0 * m.alpha2 * m.beta2, m.alpha1 * m.beta1}))
        throw DegenerateMaterial("2*alpha2*beta2-alpha1*beta1", den);
    return b1 * (m.alpha2 * m.gamma1 + 0.5 * m.beta1 * (m.beta1 + m.beta2)) / den;
}

ResultantsCheck resultants_fluxfree(const FluxFreeSolution& sol, const MaterialTIP& m, const Section& s,
                                    double half_length) {
    const DerivedModuli dm = derive_moduli(m);
    const SVConstants& c = sol.solution.constants();
    const ExtensionConstants ext = extension_constants(c, dm);
    const InertiaData in = inertia(s);
    const double mean_uz1 = dot(c.v1, in.centroid) / m.alpha1 + ext.c_u1;

    ResultantsCheck out;
    out.closed_form.axial_force = in.area * (dm.A1 * mean_uz1 + dm.B1 * ext.phi1);
    out.closed_form.d_flux = in.area * (dm.B2 * mean_uz1 + dm.A2 * ext.phi1);
    out.closed_form.potential_difference = 2.0 * half_length * ext.phi1;
    out.closed_form.shear = dm.Y * in.euler.apply(c.v2);  // int r sigma' with phi_2 = 0

    out.quadrature = section_resultants(sol.solution, dm);

    auto rel = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
    };
    out.discrepancy = std::max(rel(out.closed_form.axial_force, out.quadrature.axial_force),
                               rel(out.closed_form.d_flux, out.quadrature.d_flux));
    out.consistent = out.discrepancy <= 1e-8;
    return out;
}

}  // namespace piezosv
