#include "support.hpp"

#include "piezosv/elliptic.hpp"
#include "piezosv/errors.hpp"
#include "piezosv/svcore.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace piezosv;

TEST(Nondegeneracy, ReferenceMaterialFails) {
    const NondegeneracyCheck c = check_nondegeneracy(derive_moduli(support::reference_material()));
    EXPECT_EQ(c.bracket, 0.0);
    EXPECT_FALSE(c.pass);
    EXPECT_THROW(require_nondegenerate(derive_moduli(support::reference_material())), DegenerateMaterial);
}

TEST(Nondegeneracy, PureAlpha2Coupling) {
    MaterialTIP m = support::generic_material();
    m.beta1 = 0.0;
    const DerivedModuli dm = derive_moduli(m);
    const NondegeneracyCheck c = check_nondegeneracy(dm);
    ASSERT_NE(dm.F1, 0.0);
    EXPECT_TRUE(c.pass);
    EXPECT_DOUBLE_EQ(c.margin, std::abs(m.alpha2 * dm.F1));
}

// beta -> c beta together with gamma -> c^2 gamma leaves every electric
// quantity dimensionally consistent, so the bracket only picks up a factor.
TEST(Nondegeneracy, ElectricRescalingKeepsVerdict) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        MaterialTIP m = support::random_material(rng);
        const NondegeneracyCheck base = check_nondegeneracy(derive_moduli(m));
        const double c = support::uniform(rng, 0.2, 5.0);
        m.beta1 *= c, m.beta2 *= c, m.beta3 *= c;
        m.gamma1 *= c * c, m.gamma2 *= c * c;
        const NondegeneracyCheck scaled = check_nondegeneracy(derive_moduli(m));
        EXPECT_EQ(base.pass, scaled.pass);
        EXPECT_NEAR(scaled.bracket, base.bracket, 1e-12 * std::abs(base.bracket) * 10);
    }
}

TEST(AxialProfiles, LinearExamples) {
    const Section s = Section::build(1, 1, 5, 5);
    SVConstants c;
    c.b1 = 1.0;
    auto [u1, u2] = axial_linear_profiles(c, s);
    for (double v : u1.values) EXPECT_DOUBLE_EQ(v, 1.0);
    c = {};
    c.v1 = {1.0, 0.0};
    std::tie(u1, u2) = axial_linear_profiles(c, s);
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(u1(i, j), s.node(i, j).x);
}

TEST(CompleteGradient, LinearAndHarmonicQuadratic) {
    const Section s = Section::build(1, 1.5, 9, 13);
    const ScalarField2D g1 = complete_gradient(sample(s, [](Vec2 r) { return r.x; }), 0.5);
    const ScalarField2D g2 = complete_gradient(sample(s, [](Vec2 r) { return r.x * r.y; }), -1.0);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            const Vec2 r = s.node(i, j);
            EXPECT_NEAR(g1(i, j), r.y + 0.5, 1e-13);
            EXPECT_NEAR(g2(i, j), 0.5 * (r.y * r.y - r.x * r.x) - 1.0, 1e-13);
        }
}

TEST(CompleteGradient, ConvergesToHarmonicConjugate) {
    using std::numbers::pi;
    auto errors = [](int n) {
        const Section s = Section::build(1, 1, n, n);
        const EdgeTrace t =
            sample_trace(s, [](Vec2 r, Vec2) { return std::sin(pi * r.x) * std::sinh(pi * r.y) / 10.0; });
        const ScalarField2D f = solve_dirichlet({ScalarField2D(s), t}, {LinearSolver::direct, 1e-14});
        const ScalarField2D conj =
            sample(s, [](Vec2 r) { return (std::cos(pi * r.x) * std::cosh(pi * r.y) - 1.0) / 10.0; });
        const ScalarField2D a = complete_gradient_sweep(f, 0.0, SweepOrder::rows_first);
        const ScalarField2D b = complete_gradient_sweep(f, 0.0, SweepOrder::columns_first);
        return std::make_pair(max_abs_difference(complete_gradient(f, 0.0), conj), max_abs_difference(a, b));
    };
    const auto [e33, path33] = errors(33);
    const auto [e65, path65] = errors(65);
    EXPECT_LE(e33, 1e-2);
    EXPECT_GE(e33 / e65, 3.2);
    EXPECT_LE(e33 / e65, 4.8);
    // sweep orders differ only by truncation error
    EXPECT_GE(path33 / path65, 3.2);
    EXPECT_LE(path33 / path65, 4.8);
}

TEST(CompleteGradient, RejectsNonHarmonic) {
    const Section s = Section::build(1, 1, 9, 9);
    EXPECT_THROW(complete_gradient(sample(s, [](Vec2 r) { return r.x * r.x; }), 0.0), NotHarmonic);
}

TEST(Reconstruct, Dilation) {
    const Section s = Section::build(1.2, 0.8, 9, 7);
    const VectorField2D u = reconstruct_inplane(ScalarField2D(s, 0.3), ScalarField2D(s), {}, 0.0);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            EXPECT_NEAR(u(i, j).x, 0.3 * s.node(i, j).x, 1e-14);
            EXPECT_NEAR(u(i, j).y, 0.3 * s.node(i, j).y, 1e-14);
        }
}

TEST(Reconstruct, RigidRotation) {
    const Section s = Section::build(1, 1, 9, 9);
    const VectorField2D u = reconstruct_inplane(ScalarField2D(s), ScalarField2D(s), {}, 0.7);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            const Vec2 e = 0.7 * rotate90(s.node(i, j));
            EXPECT_NEAR(u(i, j).x, e.x, 1e-14);
            EXPECT_NEAR(u(i, j).y, e.y, 1e-14);
        }
}

// spherical part lambda . r: the displacement is the quadratic
// 1/2 [(lambda . r) r + (*lambda . r) *r]
TEST(Reconstruct, AffineSphericalPartGivesQuadraticClosedForm) {
    const Section s = Section::build(1.5, 1, 17, 13);
    const Vec2 a{0.4, -0.9};
    const ScalarField2D f = affine_field(s, a, 0.0);
    const ScalarField2D g = complete_gradient(f, 0.0);
    const VectorField2D u = reconstruct_inplane(f, g, {}, 0.0);
    const VectorField2D closed = spherical_affine_displacement(s, a, 0.0);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            const Vec2 r = s.node(i, j);
            const Vec2 e = 0.5 * (dot(a, r) * r + dot(rotate90(a), r) * rotate90(r));
            EXPECT_NEAR(u(i, j).x, e.x, 1e-13);
            EXPECT_NEAR(u(i, j).y, e.y, 1e-13);
            EXPECT_NEAR(closed(i, j).x, e.x, 1e-14);
            EXPECT_NEAR(closed(i, j).y, e.y, 1e-14);
        }
}

TEST(Reconstruct, RejectsIncompatiblePair) {
    const Section s = Section::build(1, 1, 9, 9);
    const ScalarField2D f = affine_field(s, {1.0, 0.0}, 0.0);
    EXPECT_THROW(reconstruct_inplane(f, ScalarField2D(s), {}, 0.0), IntegrabilityFailure);
}

namespace {

Solution3D with_constants(const Section& s, SVConstants c, double alpha1 = 1.0) {
    return assemble(AxialProfiles(s), VectorField2D(s), VectorField2D(s), c, 1.0, alpha1);
}

}  // namespace

TEST(Assemble, ZeroPartsGiveZeroFields) {
    const Section s = Section::build(1, 1, 5, 5);
    const Solution3D sol = with_constants(s, {});
    for (double z : {-1.0, 0.0, 0.5}) {
        EXPECT_EQ(max_abs(sol.uz(z)), 0.0);
        EXPECT_EQ(max_abs(sol.phi(z)), 0.0);
        EXPECT_EQ(max_abs(sol.u_pi(z)), 0.0);
    }
}

TEST(Assemble, CubicBendingTerm) {
    const Section s = Section::build(1, 1, 5, 5);
    SVConstants c;
    c.v2 = {1.0, 0.0};
    const Solution3D sol = with_constants(s, c);
    const Vec2 u = sol.u_pi_at(2, 3, 1.0);
    EXPECT_DOUBLE_EQ(u.x, -1.0 / 6.0);
    EXPECT_DOUBLE_EQ(u.y, 0.0);
}

TEST(Assemble, AxialFieldsQuadraticInZ) {
    const Section s = Section::build(1, 1, 5, 5);
    AxialProfiles p(s);
    p.uz0 = ScalarField2D(s, 0.2);
    p.uz1 = ScalarField2D(s, -0.7);
    p.uz2 = ScalarField2D(s, 1.1);
    p.phi0 = ScalarField2D(s, 0.4);
    p.phi1 = ScalarField2D(s, 0.9);
    p.phi2 = ScalarField2D(s, -0.6);
    const Solution3D sol = assemble(p, VectorField2D(s), VectorField2D(s), {}, 2.0, 1.0);
    const double z = 0.75;
    EXPECT_DOUBLE_EQ(sol.uz_at(1, 1, z), 0.2 - 0.7 * z + 0.5 * 1.1 * z * z);
    EXPECT_DOUBLE_EQ(sol.phi_at(1, 1, z), 0.4 + 0.9 * z - 0.5 * 0.6 * z * z);
    EXPECT_EQ(sol.uz(0.0).values, p.uz0.values);
    EXPECT_NEAR(sol.uz(z, 1)(1, 1), -0.7 + 1.1 * z, 1e-15);
    EXPECT_NEAR(sol.phi(z, 2)(1, 1), -0.6, 1e-15);
    EXPECT_EQ(max_abs(sol.phi(z, 3)), 0.0);
}

TEST(Assemble, AnalyticZDerivativesMatchDifferences) {
    const Section s = Section::build(1, 1, 5, 5);
    SVConstants c;
    c.v1 = {0.3, -0.2};
    c.v2 = {0.7, 0.4};
    const Solution3D sol = with_constants(s, c, 1.3);
    const double z = 0.4, h = 1e-3;
    for (int order = 0; order < 3; ++order) {
        const VectorField2D fwd = sol.u_pi(z + h, order), bwd = sol.u_pi(z - h, order), d = sol.u_pi(z, order + 1);
        for (std::size_t k = 0; k < s.size(); ++k) {
            EXPECT_NEAR((fwd.values[k].x - bwd.values[k].x) / (2 * h), d.values[k].x, 1e-6);
            EXPECT_NEAR((fwd.values[k].y - bwd.values[k].y) / (2 * h), d.values[k].y, 1e-6);
        }
    }
}

TEST(Assemble, GridMismatchRejected) {
    const Section a = Section::build(1, 1, 5, 5), b = Section::build(1, 1, 7, 7);
    EXPECT_THROW(assemble(AxialProfiles(a), VectorField2D(b), VectorField2D(a), {}, 1.0, 1.0), GridMismatch);
}

TEST(Tilde, RoundTrip) {
    std::mt19937_64 rng(23);
    const Section s = Section::build(1, 1, 7, 7);
    for (int trial = 0; trial < 20; ++trial) {
        const DerivedModuli dm = derive_moduli(support::random_material(rng));
        AxialProfiles p(s);
        p.uz1 = sample(s, [&](Vec2 r) { return std::sin(r.x + trial) + r.y; });
        p.phi1 = sample(s, [&](Vec2 r) { return std::cos(2 * r.y - trial) * r.x; });
        const auto [uz, phi] = untilde(uz_tilde(p, 1, dm.material), phi_tilde(p, 1, dm.material), dm);
        EXPECT_LE(max_abs_difference(uz, p.uz1), 1e-12 * max_abs(p.uz1) * 10);
        EXPECT_LE(max_abs_difference(phi, p.phi1), 1e-12 * max_abs(p.phi1) * 10);
    }
}
