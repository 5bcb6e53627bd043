#include "support.hpp"

#include "piezosv/almansi.hpp"
#include "piezosv/errors.hpp"
#include "piezosv/fluxfree.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace piezosv;

namespace {

const Section& grid() {
    static const Section s = Section::build(1.5, 1.0, 33, 33);
    return s;
}

AlmansiBoundaryData ramp(double k0 = 0.0, double k1 = 1.0) {
    AlmansiBoundaryData bd;
    bd.k0 = k0;
    bd.k1 = k1;
    return bd;
}

// Sym(grad u) - s I, largest component, by exact-on-quadratics differences.
double sym_grad_defect(const VectorField2D& u, const ScalarField2D& s) {
    const auto [dx, dy] = gradient(u);
    double d = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        d = std::max(d, std::abs(dx.values[k].x - s.values[k]));
        d = std::max(d, std::abs(dy.values[k].y - s.values[k]));
        d = std::max(d, std::abs(0.5 * (dx.values[k].y + dy.values[k].x)));
    }
    return d;
}

}  // namespace

TEST(Phi2, ConstantTrace) {
    const ScalarField2D p = solve_phi2(ramp(0.4, 0.4), grid());
    for (double v : p.values) EXPECT_NEAR(v, 0.4, 1e-13);
}

TEST(Phi2, LinearRampIsExact) {
    const Section s = Section::build(1, 1, 17, 17);
    const ScalarField2D p = solve_phi2(ramp(0.0, 1.0), s);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) EXPECT_NEAR(p(i, j), s.node(i, j).y, 1e-12);
    EXPECT_EQ(potential_slope(ramp(0.0, 1.0), grid()), (Vec2{0.0, 1.0}));
}

TEST(Phi2, HarmonicTraceConvergesAtSecondOrder) {
    auto err = [](int n) {
        const Section s = Section::build(1, 1, n, n);
        auto f = [](Vec2 r) { return std::sin(std::numbers::pi * r.x) * std::sinh(std::numbers::pi * r.y) / 10.0; };
        AlmansiBoundaryData bd;
        bd.phi2_trace = sample_trace(s, [&](Vec2 r, Vec2) { return f(r); });
        const ScalarField2D p = solve_phi2(bd, s);
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) e = std::max(e, std::abs(p(i, j) - f(s.node(i, j))));
        return e;
    };
    const double r = err(33) / err(65);
    EXPECT_GE(r, 3.2);
    EXPECT_LE(r, 4.8);
}

TEST(Phi1Phi0, ZeroAndConstantTraces) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    AlmansiBoundaryData bd;
    EXPECT_EQ(max_abs(solve_phi1(bd, grid())), 0.0);
    EXPECT_EQ(max_abs(solve_phi0(ScalarField2D(grid()), ScalarField2D(grid()), dm, bd, grid())), 0.0);
    bd.phi1_trace = sample_trace(grid(), [](Vec2, Vec2) { return -0.6; });
    for (double v : solve_phi1(bd, grid()).values) EXPECT_NEAR(v, -0.6, 1e-13);
}

TEST(Phi1Phi0, Phi0MatchesDirectPoissonSolve) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    const AlmansiBoundaryData bd = ramp();
    const Vec2 k = potential_slope(bd, grid());
    const SecondOrderAxial second = b2_and_uz2({0.7, 0.4}, bd.k0, k, dm, grid());
    const ScalarField2D phi2 = solve_phi2(bd, grid());
    SolverConfig cfg;
    cfg.method = LinearSolver::direct;
    const ScalarField2D a = solve_phi0(second.uz2_tilde, phi2, dm, bd, grid(), cfg);
    const ScalarField2D rhs = combine(dm.Z2, second.uz2_tilde, dm.Z3, phi2);
    const ScalarField2D b = solve_dirichlet({rhs, zero_trace(grid())}, cfg);
    EXPECT_LE(max_abs_difference(a, b), 1e-13 * std::max(1.0, max_abs(b)));
}

TEST(SecondOrderAxial, Examples) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    const SecondOrderAxial zero = b2_and_uz2({}, 0.0, {}, dm, grid());
    EXPECT_EQ(zero.b2, 0.0);
    EXPECT_EQ(max_abs(zero.uz2_tilde), 0.0);

    const Vec2 v2{0.7, 0.4};
    const Vec2 rb = inertia(grid()).centroid;
    const SecondOrderAxial flex = b2_and_uz2(v2, 0.0, {}, dm, grid());
    for (int j = 0; j < grid().ny(); ++j)
        for (int i = 0; i < grid().nx(); ++i)
            EXPECT_NEAR(flex.uz2_tilde(i, j), dot(v2, grid().node(i, j) - rb), 1e-14);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const DerivedModuli d = derive_moduli(support::random_material(rng));
        const double k0 = support::uniform(rng, -1, 1);
        const Vec2 k{support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        const SecondOrderAxial g = b2_and_uz2({support::uniform(rng, -1, 1), 0.3}, k0, k, d, grid());
        const double expected = 1.5 * (k0 + dot(k, rb)) * d.offset_factor();
        EXPECT_NEAR(integrate_area(g.uz2_tilde), expected, 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST(SecondOrderAxial, GeneralTraceAgreesWithAffinePath) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    const AlmansiBoundaryData bd = ramp(0.2, 1.1);
    const Vec2 k = potential_slope(bd, grid());
    const SecondOrderAxial affine = b2_and_uz2({0.7, 0.4}, bd.k0, k, dm, grid());
    const SecondOrderAxial general = b2_and_uz2({0.7, 0.4}, solve_phi2(bd, grid()), dm);
    EXPECT_NEAR(affine.b2, general.b2, 1e-12);
    EXPECT_LE(max_abs_difference(affine.uz2_tilde, general.uz2_tilde), 1e-12);
}

TEST(UPi1, ZeroAndRigidRotation) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    EXPECT_EQ(max_abs(u_pi1_closed({}, {}, 0.0, dm, grid())), 0.0);
    const VectorField2D rot = u_pi1_closed({}, {}, 0.0, dm, grid(), 0.8);
    EXPECT_LE(sym_grad_defect(rot, ScalarField2D(grid())), 1e-13);
    EXPECT_GT(max_abs(rot), 0.1);
}

TEST(UPi1, SphericalStrainMatchesDefinition) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const DerivedModuli dm = derive_moduli(support::random_material(rng));
        const Vec2 v2{support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        const double k0 = support::uniform(rng, -1, 1);
        const Vec2 k{0.0, support::uniform(rng, -1, 1)};
        const VectorField2D u = u_pi1_closed(v2, k, k0, dm, grid(), 0.2);
        const SecondOrderAxial second = b2_and_uz2(v2, k0, k, dm, grid());
        const ScalarField2D phi2 = affine_field(grid(), k, k0);
        const ScalarField2D s = combine(dm.Z4, second.uz2_tilde, dm.Z5, phi2);
        EXPECT_LE(sym_grad_defect(u, s), 1e-12);
    }
}

TEST(Warping, ZeroDrivingGivesZero) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    EXPECT_EQ(max_abs(warping_bvp(VectorField2D(grid()), Vec2{}, 0.0, dm)), 0.0);
}

TEST(Warping, CompatibleUnderMinusSignOnly) {
    const MaterialTIP m = support::generic_material();
    SVConstants c;
    c.v2 = {0.7, 0.4};
    const AlmansiSolution a = solve_almansi(c, ramp(), m, grid());
    EXPECT_LE(std::abs(a.warping_defect.defect), 1e-8 * a.warping_defect.scale);
    EXPECT_THROW(solve_almansi(c, ramp(), m, grid(), {}, 1.0, FluxSign::plus), IncompatibleData);
}

TEST(Warping, CompatibleForRandomData) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const MaterialTIP m = support::random_material(rng);
        SVConstants c;
        c.v1 = {support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        c.v2 = {support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        c.b1 = support::uniform(rng, -1, 1);
        c.mu2_0 = support::uniform(rng, -1, 1);
        const AlmansiSolution a =
            solve_almansi(c, ramp(support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)), m, grid());
        EXPECT_LE(std::abs(a.warping_defect.defect), 1e-10 * a.warping_defect.scale);
    }
}

TEST(Warping, SelfConvergesAtSecondOrder) {
    const MaterialTIP m = support::generic_material();
    SVConstants c;
    c.v2 = {0.7, 0.4};
    auto warp = [&](int n) {
        const Section s = Section::build(1.5, 1.0, n, n);
        return uz_tilde(solve_almansi(c, ramp(), m, s).solution.profiles(), 0, m);
    };
    const ScalarField2D w17 = warp(17), w33 = warp(33), w65 = warp(65);
    double e1 = 0.0, e2 = 0.0;
    for (int j = 0; j < 17; ++j)
        for (int i = 0; i < 17; ++i) {
            e1 = std::max(e1, std::abs(w17(i, j) - w33(2 * i, 2 * j)));
            e2 = std::max(e2, std::abs(w33(2 * i, 2 * j) - w65(4 * i, 4 * j)));
        }
    const double r = e1 / e2;
    EXPECT_GE(r, 3.2) << e1 << " " << e2;
    EXPECT_LE(r, 4.8) << e1 << " " << e2;
}

TEST(ShearResultant, Examples) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    const InertiaData in = inertia(grid());
    EXPECT_EQ(shear_resultant({}, {}, dm, in), Vec2{});
    DerivedModuli unit;
    unit.Y = 1.0;
    unit.Ybar = 0.0;
    const Vec2 q = shear_resultant({1.0, 0.0}, {}, unit, inertia(Section::build(1, 1, 9, 9)));
    EXPECT_NEAR(q.x, 0.0, 1e-16);
    EXPECT_NEAR(q.y, 1.0 / 12.0, 1e-16);
}

// Simpson integration of r sigma' reproduces J_B (Y v2 + Ybar k) with no
// quarter turn, so it differs from q by exactly one rotation.
TEST(ShearResultant, QuadratureIsUnrotatedMoment) {
    std::mt19937_64 rng(53);
    const Section s = Section::build(1.5, 1.0, 65, 65);
    const InertiaData in = inertia(s);
    for (int trial = 0; trial < 5; ++trial) {
        const DerivedModuli dm = derive_moduli(support::random_material(rng));
        const Vec2 v2{support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        const Vec2 k{0.0, support::uniform(rng, -1, 1)};
        const Vec2 quad = shear_quadrature(v2, k, dm, s);
        const Vec2 moment = in.euler.apply(dm.Y * v2 + dm.Ybar * k);
        EXPECT_LE(norm(quad - moment), 1e-10 * norm(moment));
        const Vec2 q = shear_resultant(v2, k, dm, in);
        EXPECT_LE(norm(q - rotate90(quad)), 1e-10 * norm(moment));
    }
}

TEST(DesignV2, ZeroAndRoundTrip) {
    const InertiaData in = inertia(grid());
    const DerivedModuli dm0 = derive_moduli(support::generic_material());
    const Vec2 zero = design_v2({}, {}, dm0, in);
    EXPECT_EQ(norm(zero), 0.0);
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const DerivedModuli dm = derive_moduli(support::random_material(rng));
        const Vec2 v2{support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        const Vec2 k{support::uniform(rng, -1, 1), support::uniform(rng, -1, 1)};
        const Vec2 q = shear_resultant(v2, k, dm, in);
        const Vec2 back = design_v2(q, k, dm, in);
        EXPECT_LE(norm(back - v2), 1e-12 * norm(v2));
        EXPECT_LE(norm(shear_resultant(back, k, dm, in) - q), 1e-12 * norm(q));
    }
}

TEST(DesignV2, PotentialSlopeShiftsV2Linearly) {
    const InertiaData in = inertia(grid());
    const DerivedModuli dm = derive_moduli(support::generic_material());
    const Vec2 q{0.1, -0.3}, k1{0.0, 0.2}, k2{0.0, 1.3};
    const Vec2 d = design_v2(q, k2, dm, in) - design_v2(q, k1, dm, in);
    const Vec2 expected = -(dm.Ybar / dm.Y) * (k2 - k1);
    EXPECT_NEAR(d.x, expected.x, 1e-14);
    EXPECT_NEAR(d.y, expected.y, 1e-14);
}

TEST(SolveAlmansi, ZeroInputsGiveZeroSolution) {
    AlmansiBoundaryData bd;
    const AlmansiSolution a = solve_almansi({}, bd, support::generic_material(), grid());
    for (double z : {-1.0, 0.5}) {
        EXPECT_EQ(max_abs(a.solution.uz(z)), 0.0);
        EXPECT_EQ(max_abs(a.solution.phi(z)), 0.0);
        EXPECT_EQ(max_abs(a.solution.u_pi(z)), 0.0);
    }
}

TEST(SolveAlmansi, ReducesToFluxFreeFlexureWithoutPotential) {
    const MaterialTIP m = support::generic_material();
    SVConstants c;
    c.v2 = {0.7, 0.4};
    const AlmansiSolution a = solve_almansi(c, ramp(0.0, 0.0), m, grid());
    const FluxFreeSolution f = solve_fluxfree(c, m, grid());
    EXPECT_EQ(max_abs(a.solution.profiles().phi2), 0.0);
    EXPECT_LE(max_abs_difference(a.solution.profiles().uz2, f.solution.profiles().uz2), 1e-14);
    EXPECT_NEAR(a.solution.constants().b2, f.solution.constants().b2, 1e-15);
    EXPECT_LE(support::max_abs_diff(a.solution.u_pi1(), f.solution.u_pi1()), 1e-13);
}

TEST(SolveAlmansi, GeneralTracePathMatchesAffinePath) {
    const MaterialTIP m = support::generic_material();
    SVConstants c;
    c.v1 = {0.3, -0.2};
    c.v2 = {0.7, 0.4};
    c.b1 = 0.5;
    const AlmansiBoundaryData affine = ramp(0.2, 1.0);
    AlmansiBoundaryData general = affine;
    const Vec2 k = potential_slope(affine, grid());
    general.phi2_trace = sample_trace(grid(), [&](Vec2 r, Vec2) { return affine.k0 + dot(k, r); });
    SolverConfig cfg;
    cfg.method = LinearSolver::direct;
    const AlmansiSolution a = solve_almansi(c, affine, m, grid(), cfg);
    const AlmansiSolution g = solve_almansi(c, general, m, grid(), cfg);
    EXPECT_LE(support::max_abs_diff(a.solution.u_pi1(), g.solution.u_pi1()), 1e-10);
    EXPECT_LE(max_abs_difference(a.solution.profiles().uz0, g.solution.profiles().uz0), 1e-10);
    EXPECT_LE(max_abs_difference(a.solution.profiles().phi0, g.solution.profiles().phi0), 1e-10);
}

TEST(SolveAlmansi, OmegaConstants) {
    const DerivedModuli dm = derive_moduli(support::generic_material());
    const Vec2 v2{0.7, 0.4}, k{0.0, 1.0};
    const double k0 = 0.3;
    const OmegaValues o = omega_values(v2, k0, k, dm, grid());
    const double level = k0 + dot(k, inertia(grid()).centroid);
    const double c = dm.offset_factor();
    EXPECT_NEAR(o.omega0.x, dm.Z4 * v2.x + dm.Z5 * k.x, 1e-15);
    EXPECT_NEAR(o.omega0.y, dm.Z4 * v2.y + dm.Z5 * k.y, 1e-15);
    EXPECT_NEAR(o.omega2.y, dm.Z0 * v2.y + dm.Z1 * k.y, 1e-14);
    EXPECT_NEAR(o.omega3_bar, level * (dm.Z1 + dm.Z0 * c), 1e-13);
    EXPECT_NEAR(o.omega1_bar, level * (dm.Z5 + dm.Z4 * c), 1e-14);
}
