#pragma once

#include <cmath>
#include <initializer_list>

namespace piezosv {

/// In-plane vector (components along e_x, e_y of the cross-section plane).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    constexpr Vec2& operator+=(Vec2 b) {
        x += b.x;
        y += b.y;
        return *this;
    }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Counter-clockwise rotation by pi/2: (x, y) -> (-y, x).
constexpr Vec2 rotate90(Vec2 v) { return {-v.y, v.x}; }

/// Symmetric 2x2 tensor.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    constexpr double trace() const { return xx + yy; }
    constexpr Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    friend constexpr bool operator==(Sym2, Sym2) = default;
};

/// Symmetric 3x3 tensor split into plane block, shear column and axial entry:
///   S = plane + shear (x) e_z + e_z (x) shear + axial e_z (x) e_z
struct BlockSymTensor {
    Sym2 plane;
    Vec2 shear;
    double axial = 0.0;
};

/// 3-vector split as plane + axial e_z.
struct BlockVec3 {
    Vec2 plane;
    double axial = 0.0;
};

/// The ten moduli of a transversely isotropic piezoelectric material whose
/// symmetry axis is the beam axis e_z. Elastic (Pa): mu, lambda, alpha1..3;
/// piezoelectric (C/m^2): beta1..3; dielectric (F/m): gamma1, gamma2.
struct MaterialTIP {
    double mu = 0.0;
    double lambda = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

/// Composite moduli used by the Saint-Venant reduction. Every field is a
/// closed-form function of the ten base moduli, which are kept alongside.
struct DerivedModuli {
    MaterialTIP material;

    double alpha = 0.0;  // 2(alpha1 + alpha2 + alpha3)
    double A1 = 0.0;     // axial stiffness under T^ = 0
    double B1 = 0.0;     // axial piezo coefficient under T^ = 0
    double A2 = 0.0;
    double B2 = 0.0;
    double A4 = 0.0;
    double K = 0.0;   // A4(beta1+beta2) + A2 A1/B1 - B2
    double Dc = 0.0;  // gamma1 alpha1 + beta2(beta1+beta2)
    double F1 = 0.0;
    double G1 = 0.0;
    double F2 = 0.0;
    double G2 = 0.0;
    double F3 = 0.0;
    double G3 = 0.0;
    double Z0 = 0.0;
    double Z1 = 0.0;
    double Z2 = 0.0;
    double Z3 = 0.0;
    double Z4 = 0.0;
    double Z5 = 0.0;
    double Y = 0.0;     // A1/alpha1
    double Ybar = 0.0;  // B1 - 2 beta2 A1/alpha1

    double mu_plus_lambda() const { return material.mu + material.lambda; }
    /// 2 beta2 - B1 alpha1/A1, the offset factor shared by b2, u~_z^2 and the Omega constants.
    double offset_factor() const { return 2.0 * material.beta2 - B1 * material.alpha1 / A1; }
};

/// Relative degeneracy threshold for denominators.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// True when |value| <= kDegeneracyTolerance * sum|terms|.
bool is_degenerate(double value, std::initializer_list<double> terms);

/// Computes every composite modulus. Throws DegenerateMaterial when a
/// material invariant fails (mu, mu+lambda, gamma1, gamma2 positivity; alpha1,
/// B1 and Dc nonzero). The nondegeneracy bracket is checked separately by
/// check_nondegeneracy().
DerivedModuli derive_moduli(const MaterialTIP& m);

/// T = C:Sigma + Xi:E in block form.
BlockSymTensor stress(const BlockSymTensor& strain, const BlockVec3& e_field, const MaterialTIP& m);

/// D = Sigma^d.E - Xi:Sigma in block form.
BlockVec3 electric_displacement(const BlockSymTensor& strain, const BlockVec3& e_field, const MaterialTIP& m);

}  // namespace piezosv
