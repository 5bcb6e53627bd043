#include "piezosv/almansi.hpp"

#include "piezosv/errors.hpp"

#include <cmath>

namespace piezosv {

Vec2 potential_slope(const AlmansiBoundaryData& bd, const Section& s) {
    return {0.0, (bd.k1 - bd.k0) / s.height()};
}

namespace {

EdgeTrace trace_or_zero(const std::optional<EdgeTrace>& t, const Section& s) {
    if (!t) return zero_trace(s);
    validate_trace(s, *t);
    return *t;
}

ScalarField2D integrate_r_times(const ScalarField2D& f, bool y_component) {
    const Section& s = f.section;
    ScalarField2D g(s);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            const Vec2 r = s.node(i, j);
            g(i, j) = (y_component ? r.y : r.x) * f(i, j);
        }
    return g;
}

}  // namespace

ScalarField2D solve_phi2(const AlmansiBoundaryData& bd, const Section& s, const SolverConfig& cfg) {
    EdgeTrace trace;
    if (bd.phi2_trace) {
        validate_trace(s, *bd.phi2_trace);
        trace = *bd.phi2_trace;
    } else {
        const Vec2 k = potential_slope(bd, s);
        trace = sample_trace(s, [&](Vec2 r, Vec2) { return bd.k0 + dot(k, r); });
    }
    return solve_dirichlet({ScalarField2D(s), trace}, cfg);
}

ScalarField2D solve_phi1(const AlmansiBoundaryData& bd, const Section& s, const SolverConfig& cfg) {
    return solve_dirichlet({ScalarField2D(s), trace_or_zero(bd.phi1_trace, s)}, cfg);
}

ScalarField2D solve_phi0(const ScalarField2D& uz2_tilde, const ScalarField2D& phi2, const DerivedModuli& dm,
                         const AlmansiBoundaryData& bd, const Section& s, const SolverConfig& cfg) {
    require_same_grid(s, uz2_tilde.section);
    require_same_grid(s, phi2.section);
    return solve_dirichlet({combine(dm.Z2, uz2_tilde, dm.Z3, phi2), trace_or_zero(bd.phi0_trace, s)}, cfg);
}

namespace {

void require_axial_stiffness(const DerivedModuli& dm) {
    const MaterialTIP& m = dm.material;
    const double alpha2_term = m.alpha2 * m.alpha2 / dm.mu_plus_lambda();
    if (is_degenerate(dm.A1, {dm.alpha, alpha2_term})) throw DegenerateMaterial("A1", dm.A1);
}

}  // namespace

SecondOrderAxial b2_and_uz2(Vec2 v2, double k0, Vec2 k, const DerivedModuli& dm, const Section& s) {
    require_axial_stiffness(dm);
    const Vec2 rB = inertia(s).centroid;
    const double b2 = -dot(v2, rB) + (k0 + dot(k, rB)) * dm.offset_factor();
    return {b2, affine_field(s, v2, b2)};
}

SecondOrderAxial b2_and_uz2(Vec2 v2, const ScalarField2D& phi2, const DerivedModuli& dm) {
    require_axial_stiffness(dm);
    const Section& s = phi2.section;
    const InertiaData in = inertia(s);
    const double mean_phi2 = integrate_area(phi2, best_rule(s)) / in.area;
    const double b2 = -dot(v2, in.centroid) + mean_phi2 * dm.offset_factor();
    return {b2, affine_field(s, v2, b2)};
}

OmegaValues omega_values(Vec2 v2, double k0, Vec2 k, const DerivedModuli& dm, const Section& s) {
    const double c = dm.offset_factor();
    const double level = k0 + dot(k, inertia(s).centroid);
    OmegaValues o;
    o.omega0 = dm.Z4 * v2 + dm.Z5 * k;
    o.omega1_bar = level * (dm.Z5 + dm.Z4 * c);
    o.omega2 = dm.Z0 * v2 + dm.Z1 * k;
    o.omega3_bar = level * (dm.Z1 + dm.Z0 * c);
    return o;
}

VectorField2D u_pi1_closed(Vec2 v2, Vec2 k, double k0, const DerivedModuli& dm, const Section& s, double mu2_0) {
    const OmegaValues o = omega_values(v2, k0, k, dm, s);
    const Vec2 rB = inertia(s).centroid;
    return spherical_affine_displacement(s, o.omega0, o.omega1_bar - dot(o.omega0, rB), mu2_0);
}

namespace {

EdgeTrace warping_flux(const VectorField2D& u_pi1, const DerivedModuli& dm, FluxSign sign) {
    const double factor = (sign == FluxSign::minus ? -1.0 : 1.0) * dm.material.alpha1;
    EdgeTrace flux = normal_component(u_pi1);
    for (Edge e : kEdges)
        for (double& g : flux[e]) g *= factor;
    return flux;
}

}  // namespace

ScalarField2D warping_bvp(const ScalarField2D& rhs, const VectorField2D& u_pi1, const DerivedModuli& dm,
                          const SolverConfig& cfg, FluxSign sign) {
    require_same_grid(rhs.section, u_pi1.section);
    return solve_neumann({rhs, warping_flux(u_pi1, dm, sign)}, cfg);
}

ScalarField2D warping_bvp(const VectorField2D& u_pi1, Vec2 omega2, double omega3_bar, const DerivedModuli& dm,
                          const SolverConfig& cfg, FluxSign sign) {
    const Section& s = u_pi1.section;
    const Vec2 rB = inertia(s).centroid;
    return warping_bvp(affine_field(s, omega2, omega3_bar - dot(omega2, rB)), u_pi1, dm, cfg, sign);
}

Vec2 shear_resultant(Vec2 v2, Vec2 k, const DerivedModuli& dm, const InertiaData& in) {
    return rotate90(in.euler.apply(dm.Y * v2 + dm.Ybar * k));
}

Vec2 design_v2(Vec2 q_target, Vec2 k, const DerivedModuli& dm, const InertiaData& in) {
    const MaterialTIP& m = dm.material;
    const double alpha2_term = m.alpha2 * m.alpha2 / dm.mu_plus_lambda() / m.alpha1;
    if (is_degenerate(dm.Y, {dm.alpha / m.alpha1, alpha2_term})) throw DegenerateMaterial("Y", dm.Y);
    const Vec2 w{q_target.y, -q_target.x};  // inverse quarter turn
    const Sym2& J = in.euler;
    const double det = J.xx * J.yy - J.xy * J.xy;
    const Vec2 jw{(J.yy * w.x - J.xy * w.y) / det, (J.xx * w.y - J.xy * w.x) / det};
    return (jw - dm.Ybar * k) / dm.Y;
}

Vec2 shear_quadrature(Vec2 v2, Vec2 k, const DerivedModuli& dm, const Section& s) {
    const Vec2 rB = inertia(s).centroid;
    const Vec2 w = dm.Y * v2 + dm.Ybar * k;
    const ScalarField2D sigma1 = affine_field(s, w, -dot(w, rB));
    return {integrate_area(integrate_r_times(sigma1, false)), integrate_area(integrate_r_times(sigma1, true))};
}

AlmansiSolution solve_almansi(const SVConstants& constants, const AlmansiBoundaryData& bd, const MaterialTIP& m,
                              const Section& s, const SolverConfig& cfg, double half_length, FluxSign sign) {
    const DerivedModuli dm = derive_moduli(m);
    require_nondegenerate(dm);

    SVConstants c = constants;
    c.k0 = bd.k0;
    c.k = potential_slope(bd, s);

    AxialProfiles p(s);
    p.phi2 = solve_phi2(bd, s, cfg);
    SecondOrderAxial second = bd.affine() ? b2_and_uz2(c.v2, c.k0, c.k, dm, s) : b2_and_uz2(c.v2, p.phi2, dm);
    c.b2 = second.b2;
    p.uz2 = combine(1.0 / m.alpha1, second.uz2_tilde, -2.0 * m.beta2 / m.alpha1, p.phi2);

    OmegaValues omega;
    VectorField2D u1(s);
    if (bd.affine()) {
        omega = omega_values(c.v2, c.k0, c.k, dm, s);
        u1 = u_pi1_closed(c.v2, c.k, c.k0, dm, s, c.mu2_0);
    } else {
        const ScalarField2D s1 = combine(dm.Z4, second.uz2_tilde, dm.Z5, p.phi2);
        u1 = reconstruct_inplane(s1, complete_gradient(s1, 0.0), {}, c.mu2_0);
    }

    p.phi1 = solve_phi1(bd, s, cfg);
    const ScalarField2D uz1_tilde = affine_field(s, c.v1, c.b1);
    p.uz1 = combine(1.0 / m.alpha1, uz1_tilde, -2.0 * m.beta2 / m.alpha1, p.phi1);

    p.phi0 = solve_phi0(second.uz2_tilde, p.phi2, dm, bd, s, cfg);
    const ScalarField2D warp_rhs = combine(dm.Z0, second.uz2_tilde, dm.Z1, p.phi2);
    const CompatibilityDefect warping_defect = compatibility_defect({warp_rhs, warping_flux(u1, dm, sign)});
    const ScalarField2D uz0_tilde = warping_bvp(warp_rhs, u1, dm, cfg, sign);
    p.uz0 = combine(1.0 / m.alpha1, uz0_tilde, -2.0 * m.beta2 / m.alpha1, p.phi0);

    const ScalarField2D s0 = combine(dm.Z4, uz1_tilde, dm.Z5, p.phi1);
    VectorField2D u0 = reconstruct_inplane(s0, complete_gradient(s0, 0.0), {}, c.mu1_0);

    Solution3D sol = assemble(std::move(p), std::move(u0), std::move(u1), c, half_length, m.alpha1);
    const Resultants res = section_resultants(sol, dm);
    return {std::move(sol), omega.omega0, omega.omega1_bar, omega.omega2, omega.omega3_bar, res, warping_defect};
}

}  // namespace piezosv
