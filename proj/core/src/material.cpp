#include "piezosv/material.hpp"

#include "piezosv/errors.hpp"

#include <string>

namespace piezosv {

bool is_degenerate(double value, std::initializer_list<double> terms) {
    double scale = 0.0;
    for (double t : terms) scale += std::abs(t);
    return !(std::abs(value) > kDegeneracyTolerance * scale);
}

namespace {

void require_positive(const char* name, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw DegenerateMaterial(name, value);
}

void require_nonzero(const char* name, double value, std::initializer_list<double> terms) {
    if (!std::isfinite(value) || is_degenerate(value, terms)) throw DegenerateMaterial(name, value);
}

}  // namespace

DerivedModuli derive_moduli(const MaterialTIP& m) {
    require_positive("mu", m.mu);
    require_positive("gamma1", m.gamma1);
    require_positive("gamma2", m.gamma2);
    const double ml = m.mu + m.lambda;
    if (!(ml > 0.0) || is_degenerate(ml, {m.mu, m.lambda})) throw DegenerateMaterial("mu+lambda", ml);
    require_nonzero("alpha1", m.alpha1, {m.alpha1, m.alpha2, m.alpha3, m.mu, m.lambda});

    DerivedModuli d;
    d.material = m;
    d.alpha = 2.0 * (m.alpha1 + m.alpha2 + m.alpha3);

    d.B1 = m.beta3 - m.beta1 * m.alpha2 / ml;
    require_nonzero("B1", d.B1, {m.beta3, m.beta1 * m.alpha2 / ml});

    d.Dc = m.gamma1 * m.alpha1 + m.beta2 * (m.beta1 + m.beta2);
    require_nonzero("gamma1*alpha1+beta2*(beta1+beta2)", d.Dc, {m.gamma1 * m.alpha1, m.beta2 * m.beta1, m.beta2 * m.beta2});

    const double bs = m.beta1 + m.beta2;
    d.A1 = d.alpha - m.alpha2 * m.alpha2 / ml;
    d.A2 = m.gamma2 + m.beta2 * m.beta1 / ml;
    d.B2 = m.beta2 * m.alpha2 / ml - m.beta3;
    d.A4 = -1.0 / (2.0 * ml) * (m.alpha2 - m.beta1 * d.A1 / d.B1);
    d.K = d.A4 * bs + d.A2 * d.A1 / d.B1 - d.B2;

    d.F1 = (2.0 * m.gamma1 - 2.0 * m.beta2 * d.K) / d.Dc;
    d.G1 = (bs + m.alpha1 * d.K) / d.Dc;
    d.F2 = m.alpha2 * bs / (2.0 * ml) + d.B2;
    d.G2 = m.beta1 * bs / (2.0 * ml) + d.A2;
    d.F3 = 2.0 * d.A1 - m.alpha1 * m.alpha2 / ml;
    // Lap u~_z^0 = -F3 u_z^2 - G3 phi_2 follows from sigma' + div tau = 0 with
    // div u_pi^1 = -(alpha2 u_z^2 + beta1 phi_2)/(mu+lambda).
    d.G3 = 2.0 * d.B1 - m.alpha1 * m.beta1 / ml;

    const double p = (m.alpha1 * d.F2 + d.F3 * bs / 2.0) / d.Dc;
    const double q = (m.alpha1 * d.G2 + d.G3 * bs / 2.0) / d.Dc;
    d.Z0 = -d.F3 / m.alpha1;
    d.Z1 = 2.0 * m.beta2 * d.F3 / m.alpha1 - d.G3;
    d.Z2 = -p / m.alpha1;
    d.Z3 = -q + 2.0 * m.beta2 / m.alpha1 * p;
    d.Z4 = -m.alpha2 / (2.0 * m.alpha1 * ml);
    d.Z5 = (2.0 * m.beta2 * m.alpha2 - m.alpha1 * m.beta1) / (2.0 * m.alpha1 * ml);
    d.Y = d.A1 / m.alpha1;
    d.Ybar = d.B1 - 2.0 * m.beta2 * d.A1 / m.alpha1;
    return d;
}

BlockSymTensor stress(const BlockSymTensor& s, const BlockVec3& e, const MaterialTIP& m) {
    const double alpha = 2.0 * (m.alpha1 + m.alpha2 + m.alpha3);
    const double tr = s.plane.trace();
    const double spherical = m.lambda * tr + m.alpha2 * s.axial + m.beta1 * e.axial;
    BlockSymTensor t;
    t.plane = {2.0 * m.mu * s.plane.xx + spherical, 2.0 * m.mu * s.plane.xy, 2.0 * m.mu * s.plane.yy + spherical};
    t.shear = m.alpha1 * s.shear + m.beta2 * e.plane;
    t.axial = m.alpha2 * tr + alpha * s.axial + m.beta3 * e.axial;
    return t;
}

BlockVec3 electric_displacement(const BlockSymTensor& s, const BlockVec3& e, const MaterialTIP& m) {
    BlockVec3 d;
    d.plane = m.gamma1 * e.plane - (m.beta1 + m.beta2) * s.shear;
    d.axial = m.gamma2 * e.axial - m.beta2 * s.plane.trace() - m.beta3 * s.axial;
    return d;
}

}  // namespace piezosv
