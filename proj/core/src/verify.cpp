#include "piezosv/verify.hpp"

#include "piezosv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace piezosv {

namespace {

// Fourth-order first derivatives (one-sided near the edges). Nesting two of
// them keeps the truncation error below the O(h^2) error of the solvers;
// nesting second-order one-sided stencils would leave an O(h) defect at the
// boundary.
double d1(const double* f, std::ptrdiff_t stride, int i, int n, double h) {
    auto at = [&](int k) { return f[k * stride]; };
    if (n < 5) {
        if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
        return (at(i + 1) - at(i - 1)) / (2.0 * h);
    }
    if (i == 0) return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
    if (i == 1) return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
    if (i == n - 1)
        return (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) + 3.0 * at(n - 5)) /
               (12.0 * h);
    if (i == n - 2)
        return (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) - at(n - 5)) / (12.0 * h);
    return (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
}

VectorField2D grad4(const ScalarField2D& f) {
    const Section& s = f.section;
    VectorField2D g(s);
    const double* base = f.values.data();
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            g(i, j).x = d1(base + s.index(0, j), 1, i, s.nx(), s.hx());
            g(i, j).y = d1(base + s.index(i, 0), s.nx(), j, s.ny(), s.hy());
        }
    return g;
}

std::pair<VectorField2D, VectorField2D> grad4(const VectorField2D& v) {
    const Section& s = v.section;
    ScalarField2D vx(s), vy(s);
    for (std::size_t n = 0; n < s.size(); ++n) vx.values[n] = v.values[n].x, vy.values[n] = v.values[n].y;
    const VectorField2D gx = grad4(vx), gy = grad4(vy);
    VectorField2D ddx(s), ddy(s);
    for (std::size_t n = 0; n < s.size(); ++n) {
        ddx.values[n] = {gx.values[n].x, gy.values[n].x};
        ddy.values[n] = {gx.values[n].y, gy.values[n].y};
    }
    return {ddx, ddy};
}

}  // namespace

FieldState kinematics(const Solution3D& sol, double z, int order) {
    const Section& s = sol.section();
    const VectorField2D u = sol.u_pi(z, order);
    const VectorField2D du = sol.u_pi(z, order + 1);
    const VectorField2D grad_uz = grad4(sol.uz(z, order));
    const ScalarField2D duz = sol.uz(z, order + 1);
    const VectorField2D grad_phi = grad4(sol.phi(z, order));
    const ScalarField2D dphi = sol.phi(z, order + 1);
    const auto [ux, uy] = grad4(u);  // d/dx u, d/dy u

    FieldState k{s, std::vector<BlockSymTensor>(s.size()), std::vector<BlockVec3>(s.size())};
    for (std::size_t n = 0; n < s.size(); ++n) {
        BlockSymTensor& e = k.strain[n];
        e.plane = {ux.values[n].x, 0.5 * (ux.values[n].y + uy.values[n].x), uy.values[n].y};
        e.shear = 0.5 * (du.values[n] + grad_uz.values[n]);
        e.axial = duz.values[n];
        k.e_field[n] = {grad_phi.values[n], dphi.values[n]};
    }
    return k;
}

StressState constitutive(const FieldState& k, const MaterialTIP& m) {
    StressState out{k.section, std::vector<BlockSymTensor>(k.strain.size()), std::vector<BlockVec3>(k.strain.size())};
    for (std::size_t n = 0; n < k.strain.size(); ++n) {
        out.stress[n] = stress(k.strain[n], k.e_field[n], m);
        out.displacement[n] = electric_displacement(k.strain[n], k.e_field[n], m);
    }
    return out;
}

std::vector<double> default_z_stations(double half_length) {
    return {-half_length, -0.5 * half_length, 0.0, 0.5 * half_length, half_length};
}

std::vector<ResidualFamily> ResidualReport::families() const {
    constexpr double tol = 1e-10;
    std::vector<ResidualFamily> out = {
        {"div_T", max_div_T, stress_scale / diameter, tol * stress_scale / h},
        {"div_D", max_div_D, flux_scale / diameter, tol * flux_scale / h},
        {"T_hat", max_That, stress_scale, tol * stress_scale},
        {"lateral_Tn", max_lateral_Tn, stress_scale, tol * stress_scale},
    };
    if (potential_wall)
        out.push_back({"lateral_phi", max_lateral_phi_error, potential_scale, tol * potential_scale});
    else
        out.push_back({"lateral_Dn", max_lateral_Dn, flux_scale, tol * flux_scale});
    return out;
}

namespace {

ScalarField2D component(const Section& s, std::size_t count, const std::function<double(std::size_t)>& f) {
    ScalarField2D out(s);
    for (std::size_t n = 0; n < count; ++n) out.values[n] = f(n);
    return out;
}

double max_entry(const Sym2& t) { return std::max({std::abs(t.xx), std::abs(t.xy), std::abs(t.yy)}); }
double max_entry(Vec2 v) { return std::max(std::abs(v.x), std::abs(v.y)); }

}  // namespace

ResidualReport residuals(const Solution3D& sol, const MaterialTIP& m, const std::vector<double>& z_stations,
                         const LateralCondition& lateral, double corner_exclusion) {
    const Section& s = sol.section();
    const std::size_t N = s.size();
    std::vector<char> skip(N, 0);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            const Vec2 r = s.node(i, j);
            const double dx = std::min(r.x, s.width() - r.x);
            const double dy = std::min(r.y, s.height() - r.y);
            skip[s.index(i, j)] = std::hypot(dx, dy) < corner_exclusion;
        }

    ResidualReport r;
    r.corner_exclusion = corner_exclusion;
    r.h = std::max(s.hx(), s.hy());
    r.diameter = s.diameter();
    r.z_stations = z_stations;
    const PotentialWall* wall = std::get_if<PotentialWall>(&lateral);
    r.potential_wall = wall != nullptr;

    for (double z : z_stations) {
        const StressState t0 = constitutive(kinematics(sol, z, 0), m);
        const StressState t1 = constitutive(kinematics(sol, z, 1), m);  // z-derivatives

        const auto& T = t0.stress;
        const auto& D = t0.displacement;
        const VectorField2D g_xx = grad4(component(s, N, [&](auto n) { return T[n].plane.xx; }));
        const VectorField2D g_xy = grad4(component(s, N, [&](auto n) { return T[n].plane.xy; }));
        const VectorField2D g_yy = grad4(component(s, N, [&](auto n) { return T[n].plane.yy; }));
        const VectorField2D g_tx = grad4(component(s, N, [&](auto n) { return T[n].shear.x; }));
        const VectorField2D g_ty = grad4(component(s, N, [&](auto n) { return T[n].shear.y; }));
        const VectorField2D g_dx = grad4(component(s, N, [&](auto n) { return D[n].plane.x; }));
        const VectorField2D g_dy = grad4(component(s, N, [&](auto n) { return D[n].plane.y; }));

        for (std::size_t n = 0; n < N; ++n) {
            if (skip[n]) continue;
            r.max_That = std::max(r.max_That, max_entry(T[n].plane));
            r.stress_scale = std::max({r.stress_scale, max_entry(T[n].plane), max_entry(T[n].shear),
                                       std::abs(T[n].axial)});
            r.flux_scale = std::max({r.flux_scale, max_entry(D[n].plane), std::abs(D[n].axial)});
            // Field equations hold in the open section; boundary nodes carry the lateral conditions.
            if (s.on_boundary(static_cast<int>(n % s.nx()), static_cast<int>(n / s.nx()))) continue;
            const Vec2 div_that{g_xx.values[n].x + g_xy.values[n].y, g_xy.values[n].x + g_yy.values[n].y};
            const Vec2 plane_row = div_that + t1.stress[n].shear;
            const double axial_row = g_tx.values[n].x + g_ty.values[n].y + t1.stress[n].axial;
            const double electric = g_dx.values[n].x + g_dy.values[n].y + t1.displacement[n].axial;
            r.max_div_T = std::max({r.max_div_T, max_entry(plane_row), std::abs(axial_row)});
            r.max_div_D = std::max(r.max_div_D, std::abs(electric));
        }

        const ScalarField2D phi = sol.phi(z);
        r.potential_scale = std::max(r.potential_scale, max_abs(phi));
        for (Edge e : kEdges) {
            const Vec2 nrm = outward_normal(e);
            for (int k = 0; k < edge_node_count(s, e); ++k) {
                const auto [i, j] = edge_node(s, e, k);
                const std::size_t n = s.index(i, j);
                if (skip[n]) continue;
                r.max_lateral_Tn = std::max({r.max_lateral_Tn, max_entry(T[n].plane.apply(nrm)),
                                             std::abs(dot(T[n].shear, nrm))});
                if (wall) {
                    const double prescribed =
                        wall->phi0[e][k] + z * wall->phi1[e][k] + 0.5 * z * z * wall->phi2[e][k];
                    r.max_lateral_phi_error = std::max(r.max_lateral_phi_error, std::abs(phi(i, j) - prescribed));
                } else {
                    r.max_lateral_Dn = std::max(r.max_lateral_Dn, std::abs(dot(D[n].plane, nrm)));
                }
            }
        }
    }
    return r;
}

IdentityDefect tau_z_defect(const Solution3D& sol, const MaterialTIP& m, double z1, double z2) {
    const StressState a = constitutive(kinematics(sol, z1), m);
    const StressState b = constitutive(kinematics(sol, z2), m);
    IdentityDefect d;
    for (std::size_t n = 0; n < a.stress.size(); ++n) {
        d.defect = std::max(d.defect, max_entry(a.stress[n].shear - b.stress[n].shear));
        d.scale = std::max({d.scale, max_entry(a.stress[n].shear), max_entry(b.stress[n].shear)});
    }
    return d;
}

IdentityDefect sigma_curvature_defect(const Solution3D& sol, const MaterialTIP& m, double z, double dz) {
    const StressState a = constitutive(kinematics(sol, z - dz), m);
    const StressState b = constitutive(kinematics(sol, z), m);
    const StressState c = constitutive(kinematics(sol, z + dz), m);
    IdentityDefect d;
    for (std::size_t n = 0; n < a.stress.size(); ++n) {
        const double sa = a.stress[n].axial, sb = b.stress[n].axial, sc = c.stress[n].axial;
        d.defect = std::max(d.defect, std::abs(sa - 2.0 * sb + sc));
        d.scale = std::max({d.scale, std::abs(sa), std::abs(sb), std::abs(sc)});
    }
    return d;
}

IdentityDefect tilde_identity_defect(const Solution3D& sol, const DerivedModuli& dm) {
    const AxialProfiles& p = sol.profiles();
    IdentityDefect d;
    for (int k = 0; k < 3; ++k) {
        const auto [uz, phi] = untilde(uz_tilde(p, k, dm.material), phi_tilde(p, k, dm.material), dm);
        const ScalarField2D& uz_ref = k == 0 ? p.uz0 : (k == 1 ? p.uz1 : p.uz2);
        const ScalarField2D& phi_ref = k == 0 ? p.phi0 : (k == 1 ? p.phi1 : p.phi2);
        d.defect = std::max({d.defect, max_abs_difference(uz, uz_ref), max_abs_difference(phi, phi_ref)});
        d.scale = std::max({d.scale, max_abs(uz_ref), max_abs(phi_ref)});
    }
    return d;
}

FamilyConvergence observed_order(const std::string& name, const std::vector<double>& h,
                                 const std::vector<double>& values, const std::vector<double>& exact_thresholds) {
    if (h.size() < 3 || values.size() != h.size() || exact_thresholds.size() != h.size())
        throw InsufficientGrids("observed order needs at least three matching samples");
    FamilyConvergence out{name, h, values, {}, 0.0, true};
    for (std::size_t i = 0; i < h.size(); ++i)
        if (!(values[i] <= exact_thresholds[i])) out.exact = false;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        out.ratios.push_back(values[i + 1] == 0.0 ? std::numeric_limits<double>::infinity()
                                                  : values[i] / values[i + 1]);
    if (out.exact) {
        out.order = std::numeric_limits<double>::infinity();
        return out;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(values[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

std::vector<FamilyConvergence> convergence_study(const std::function<ResidualReport(const Section&)>& run,
                                                 const std::vector<Section>& grids) {
    if (grids.size() < 3) throw InsufficientGrids("convergence study needs at least three grids");
    std::vector<ResidualReport> reports;
    for (const Section& s : grids) reports.push_back(run(s));

    std::vector<FamilyConvergence> out;
    const std::size_t families = reports.front().families().size();
    for (std::size_t f = 0; f < families; ++f) {
        std::vector<double> h, values, thresholds;
        for (const ResidualReport& r : reports) {
            const ResidualFamily fam = r.families()[f];
            h.push_back(r.h);
            values.push_back(fam.value);
            thresholds.push_back(fam.exact_threshold);
        }
        out.push_back(observed_order(reports.front().families()[f].name, h, values, thresholds));
    }
    return out;
}

}  // namespace piezosv
