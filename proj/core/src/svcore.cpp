#include "piezosv/svcore.hpp"

#include "piezosv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace piezosv {

NondegeneracyCheck check_nondegeneracy(const DerivedModuli& dm) {
    const MaterialTIP& m = dm.material;
    NondegeneracyCheck out;
    out.bracket = m.alpha2 * dm.F1 + m.beta1 * dm.G1;
    out.margin = std::abs(out.bracket);
    out.pass = std::isfinite(out.bracket) && !is_degenerate(out.bracket, {m.alpha2 * dm.F1, m.beta1 * dm.G1});
    return out;
}

void require_nondegenerate(const DerivedModuli& dm) {
    const NondegeneracyCheck check = check_nondegeneracy(dm);
    if (!check.pass) throw DegenerateMaterial("alpha2*F1+beta1*G1", check.bracket);
}

std::pair<ScalarField2D, ScalarField2D> axial_linear_profiles(const SVConstants& c, const Section& s) {
    return {affine_field(s, c.v1, c.b1), affine_field(s, c.v2, c.b2)};
}

namespace {

double harmonic_defect(const ScalarField2D& f, double& scale) {
    const Section& s = f.section;
    const double cx = 1.0 / (s.hx() * s.hx());
    const double cy = 1.0 / (s.hy() * s.hy());
    double worst = 0.0;
    scale = 0.0;
    for (int j = 1; j < s.ny() - 1; ++j)
        for (int i = 1; i < s.nx() - 1; ++i) {
            const double lap = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) * cx +
                               (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) * cy;
            const double terms = (std::abs(f(i + 1, j)) + 2.0 * std::abs(f(i, j)) + std::abs(f(i - 1, j))) * cx +
                                 (std::abs(f(i, j + 1)) + 2.0 * std::abs(f(i, j)) + std::abs(f(i, j - 1))) * cy;
            worst = std::max(worst, std::abs(lap));
            scale = std::max(scale, terms);
        }
    return worst;
}

// Trapezoid path integration of a gradient given by its nodal components.
template <class T, class Gx, class Gy>
void integrate_paths(const Section& s, T base, Gx along_x, Gy along_y, SweepOrder order, std::vector<T>& out) {
    const int nx = s.nx();
    const int ny = s.ny();
    const double hx = s.hx();
    const double hy = s.hy();
    out.assign(s.size(), T{});
    auto at = [&](int i, int j) -> T& { return out[s.index(i, j)]; };
    at(0, 0) = base;
    if (order == SweepOrder::rows_first) {
        for (int i = 1; i < nx; ++i) at(i, 0) = at(i - 1, 0) + 0.5 * hx * (along_x(i - 1, 0) + along_x(i, 0));
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) at(i, j) = at(i, j - 1) + 0.5 * hy * (along_y(i, j - 1) + along_y(i, j));
    } else {
        for (int j = 1; j < ny; ++j) at(0, j) = at(0, j - 1) + 0.5 * hy * (along_y(0, j - 1) + along_y(0, j));
        for (int j = 0; j < ny; ++j)
            for (int i = 1; i < nx; ++i) at(i, j) = at(i - 1, j) + 0.5 * hx * (along_x(i - 1, j) + along_x(i, j));
    }
}

}  // namespace

ScalarField2D complete_gradient_sweep(const ScalarField2D& f, double base_value, SweepOrder order) {
    const Section& s = f.section;
    const VectorField2D grad = gradient(f);
    // grad g = *grad f = (-f_y, f_x)
    auto gx = [&](int i, int j) { return -grad(i, j).y; };
    auto gy = [&](int i, int j) { return grad(i, j).x; };
    ScalarField2D g(s);
    integrate_paths(s, base_value, gx, gy, order, g.values);
    return g;
}

ScalarField2D complete_gradient(const ScalarField2D& f, double base_value, double harmonic_tolerance) {
    double scale = 0.0;
    const double defect = harmonic_defect(f, scale);
    if (defect > harmonic_tolerance * scale) throw NotHarmonic(defect);
    const ScalarField2D a = complete_gradient_sweep(f, base_value, SweepOrder::rows_first);
    const ScalarField2D b = complete_gradient_sweep(f, base_value, SweepOrder::columns_first);
    return combine(0.5, a, 0.5, b);
}

VectorField2D reconstruct_inplane(const ScalarField2D& spherical, const ScalarField2D& g, Vec2 anchor,
                                  double rotation, double integrability_tolerance) {
    require_same_grid(spherical.section, g.section);
    const Section& s = spherical.section;

    // Cell-wise compatibility: s_y + g_x = 0 and g_y - s_x = 0 at cell centres.
    double defect = 0.0;
    double scale = 0.0;
    for (int j = 0; j + 1 < s.ny(); ++j)
        for (int i = 0; i + 1 < s.nx(); ++i) {
            auto dx = [&](const ScalarField2D& f) {
                return 0.5 * (f(i + 1, j) - f(i, j) + f(i + 1, j + 1) - f(i, j + 1)) / s.hx();
            };
            auto dy = [&](const ScalarField2D& f) {
                return 0.5 * (f(i, j + 1) - f(i, j) + f(i + 1, j + 1) - f(i + 1, j)) / s.hy();
            };
            const double sx = dx(spherical), sy = dy(spherical), gx = dx(g), gy = dy(g);
            defect = std::max({defect, std::abs(sy + gx), std::abs(gy - sx)});
            scale = std::max({scale, std::abs(sx), std::abs(sy), std::abs(gx), std::abs(gy)});
        }
    if (defect > integrability_tolerance * scale) throw IntegrabilityFailure(defect);

    auto along_x = [&](int i, int j) { return Vec2{spherical(i, j), g(i, j) + rotation}; };
    auto along_y = [&](int i, int j) { return Vec2{-(g(i, j) + rotation), spherical(i, j)}; };
    VectorField2D a(s), b(s);
    integrate_paths(s, anchor, along_x, along_y, SweepOrder::rows_first, a.values);
    integrate_paths(s, anchor, along_x, along_y, SweepOrder::columns_first, b.values);
    VectorField2D u(s);
    for (std::size_t n = 0; n < u.values.size(); ++n) u.values[n] = 0.5 * (a.values[n] + b.values[n]);
    return u;
}

VectorField2D spherical_affine_displacement(const Section& s, Vec2 a, double c, double rotation, Vec2 anchor) {
    return sample_vector(s, [&](Vec2 r) {
        const Vec2 rr = rotate90(r);
        return anchor + c * r + rotation * rr + 0.5 * (dot(a, r) * r + dot(rotate90(a), r) * rr);
    });
}

ScalarField2D uz_tilde(const AxialProfiles& p, int k, const MaterialTIP& m) {
    const ScalarField2D& uz = k == 0 ? p.uz0 : (k == 1 ? p.uz1 : p.uz2);
    const ScalarField2D& phi = k == 0 ? p.phi0 : (k == 1 ? p.phi1 : p.phi2);
    return combine(m.alpha1, uz, 2.0 * m.beta2, phi);
}

ScalarField2D phi_tilde(const AxialProfiles& p, int k, const MaterialTIP& m) {
    const ScalarField2D& uz = k == 0 ? p.uz0 : (k == 1 ? p.uz1 : p.uz2);
    const ScalarField2D& phi = k == 0 ? p.phi0 : (k == 1 ? p.phi1 : p.phi2);
    return combine(m.gamma1, phi, -0.5 * (m.beta1 + m.beta2), uz);
}

std::pair<ScalarField2D, ScalarField2D> untilde(const ScalarField2D& uz_t, const ScalarField2D& phi_t,
                                                const DerivedModuli& dm) {
    const MaterialTIP& m = dm.material;
    ScalarField2D uz = combine(m.gamma1 / dm.Dc, uz_t, -2.0 * m.beta2 / dm.Dc, phi_t);
    ScalarField2D phi = combine(0.5 * (m.beta1 + m.beta2) / dm.Dc, uz_t, m.alpha1 / dm.Dc, phi_t);
    return {std::move(uz), std::move(phi)};
}

Solution3D::Solution3D(AxialProfiles profiles, VectorField2D u_pi0, VectorField2D u_pi1, SVConstants constants,
                       double half_length, double alpha1)
    : profiles_(std::move(profiles)),
      u_pi0_(std::move(u_pi0)),
      u_pi1_(std::move(u_pi1)),
      constants_(constants),
      half_length_(half_length),
      alpha1_(alpha1) {}

namespace {

// Coefficients of d^order/dz^order of c0 + c1 z + c2 z^2/2.
std::array<double, 3> quadratic_weights(double z, int order) {
    switch (order) {
        case 0: return {1.0, z, 0.5 * z * z};
        case 1: return {0.0, 1.0, z};
        case 2: return {0.0, 0.0, 1.0};
        default: return {0.0, 0.0, 0.0};
    }
}

ScalarField2D quadratic(const ScalarField2D& c0, const ScalarField2D& c1, const ScalarField2D& c2, double z,
                        int order) {
    const auto w = quadratic_weights(z, order);
    return combine(w[0], c0, w[1], c1, w[2], c2);
}

}  // namespace

ScalarField2D Solution3D::uz(double z, int order) const {
    return quadratic(profiles_.uz0, profiles_.uz1, profiles_.uz2, z, order);
}

ScalarField2D Solution3D::phi(double z, int order) const {
    return quadratic(profiles_.phi0, profiles_.phi1, profiles_.phi2, z, order);
}

VectorField2D Solution3D::u_pi(double z, int order) const {
    // u_pi = u0 + u1 z - (v1 z^2/2 + v2 z^3/6)/alpha1
    double w0 = 0.0, w1 = 0.0, wv1 = 0.0, wv2 = 0.0;
    switch (order) {
        case 0: w0 = 1.0, w1 = z, wv1 = 0.5 * z * z, wv2 = z * z * z / 6.0; break;
        case 1: w1 = 1.0, wv1 = z, wv2 = 0.5 * z * z; break;
        case 2: wv1 = 1.0, wv2 = z; break;
        case 3: wv2 = 1.0; break;
        default: break;
    }
    const Vec2 shift = -(wv1 * constants_.v1 + wv2 * constants_.v2) / alpha1_;
    VectorField2D out(section());
    for (std::size_t n = 0; n < out.values.size(); ++n)
        out.values[n] = w0 * u_pi0_.values[n] + w1 * u_pi1_.values[n] + shift;
    return out;
}

double Solution3D::uz_at(int i, int j, double z) const {
    return profiles_.uz0(i, j) + profiles_.uz1(i, j) * z + 0.5 * profiles_.uz2(i, j) * z * z;
}

double Solution3D::phi_at(int i, int j, double z) const {
    return profiles_.phi0(i, j) + profiles_.phi1(i, j) * z + 0.5 * profiles_.phi2(i, j) * z * z;
}

Vec2 Solution3D::u_pi_at(int i, int j, double z) const {
    return u_pi0_(i, j) + z * u_pi1_(i, j) -
           (0.5 * z * z * constants_.v1 + z * z * z / 6.0 * constants_.v2) / alpha1_;
}

Resultants section_resultants(const Solution3D& sol, const DerivedModuli& dm) {
    const Section& s = sol.section();
    const Quadrature rule = best_rule(s);
    const AxialProfiles& p = sol.profiles();
    const ScalarField2D sigma0 = combine(dm.A1, p.uz1, dm.B1, p.phi1);
    const ScalarField2D dz0 = combine(dm.B2, p.uz1, dm.A2, p.phi1);
    const ScalarField2D sigma1 = combine(dm.A1, p.uz2, dm.B1, p.phi2);
    ScalarField2D x_sigma1(s), y_sigma1(s);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            const Vec2 r = s.node(i, j);
            x_sigma1(i, j) = r.x * sigma1(i, j);
            y_sigma1(i, j) = r.y * sigma1(i, j);
        }
    Resultants out;
    out.axial_force = integrate_area(sigma0, rule);
    out.d_flux = integrate_area(dz0, rule);
    const double area = s.width() * s.height();
    out.potential_difference = 2.0 * sol.half_length() * integrate_area(p.phi1, rule) / area;
    out.shear = {integrate_area(x_sigma1, rule), integrate_area(y_sigma1, rule)};
    return out;
}

Solution3D assemble(AxialProfiles profiles, VectorField2D u_pi0, VectorField2D u_pi1, SVConstants constants,
                    double half_length, double alpha1) {
    const Section& s = profiles.uz0.section;
    for (const ScalarField2D* f : {&profiles.uz1, &profiles.uz2, &profiles.phi0, &profiles.phi1, &profiles.phi2})
        require_same_grid(s, f->section);
    require_same_grid(s, u_pi0.section);
    require_same_grid(s, u_pi1.section);
    return Solution3D(std::move(profiles), std::move(u_pi0), std::move(u_pi1), constants, half_length, alpha1);
}

}  // namespace piezosv
