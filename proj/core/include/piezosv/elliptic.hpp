#pragma once

#include "piezosv/section.hpp"

namespace piezosv {

enum class LinearSolver {
    automatic,           // direct up to 257^2 nodes, conjugate gradient beyond
    direct,              // sparse LDL^T factorisation
    conjugate_gradient,  // Jacobi-preconditioned CG
};

struct SolverConfig {
    LinearSolver method = LinearSolver::automatic;
    double tolerance = 1e-10;  // relative residual of the discrete system
    int max_iterations = 20000;
    double compat_tolerance = 1e-8;  // relative Neumann compatibility tolerance
};

/// Lap u = rhs inside, u = boundary on the boundary.
struct DirichletProblem {
    ScalarField2D rhs;
    EdgeTrace boundary;
};

/// Lap u = rhs inside, grad u . n = flux on the boundary.
struct NeumannProblem {
    ScalarField2D rhs;
    EdgeTrace flux;
};

/// How the additive constant of a Neumann solution is fixed.
enum class NeumannGauge { zero_mean, zero_at_origin };

struct CompatibilityDefect {
    double defect = 0.0;  // int rhs - oint flux
    double scale = 0.0;   // int |rhs| + oint |flux|
};

CompatibilityDefect compatibility_defect(const NeumannProblem& p);

/// Five-point solve; boundary nodes take the trace exactly. Corner values of
/// the trace must agree between adjacent edges (InvalidBoundaryData otherwise).
ScalarField2D solve_dirichlet(const DirichletProblem& p, const SolverConfig& cfg = {});

/// Five-point solve with second-order ghost-node flux conditions. The data
/// must be compatible to cfg.compat_tolerance (IncompatibleData otherwise);
/// the residual discretisation defect is then deflated away.
ScalarField2D solve_neumann(const NeumannProblem& p, const SolverConfig& cfg = {},
                            NeumannGauge gauge = NeumannGauge::zero_mean);

}  // namespace piezosv
