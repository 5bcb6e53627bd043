#include "piezosv/elliptic.hpp"

#include "piezosv/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <vector>

namespace piezosv {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr std::size_t kDirectNodeLimit = 257 * 257;

bool use_direct(const SolverConfig& cfg, std::size_t unknowns) {
    switch (cfg.method) {
        case LinearSolver::direct: return true;
        case LinearSolver::conjugate_gradient: return false;
        case LinearSolver::automatic: return unknowns <= kDirectNodeLimit;
    }
    return true;
}

// Solves the SPD system A x = b and checks the relative residual.
Eigen::VectorXd solve_spd(const SpMat& a, const Eigen::VectorXd& b, const SolverConfig& cfg, const char* what) {
    const double bnorm = b.norm();
    if (bnorm == 0.0) return Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd x;
    if (use_direct(cfg, static_cast<std::size_t>(b.size()))) {
        Eigen::SimplicialLDLT<SpMat> ldlt(a);
        if (ldlt.info() != Eigen::Success) throw SolveFailure(std::string(what) + ": factorisation failed", 1.0);
        x = ldlt.solve(b);
    } else {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg(a);
        cg.setTolerance(cfg.tolerance);
        cg.setMaxIterations(cfg.max_iterations);
        x = cg.solve(b);
    }
    const double residual = (a * x - b).norm() / bnorm;
    if (!std::isfinite(residual) || residual > cfg.tolerance)
        throw SolveFailure(std::string(what) + ": residual above tolerance", residual);
    return x;
}

double corner_value(const EdgeTrace& t, Edge a, int ka, Edge b, int kb) {
    const double va = t[a][ka];
    const double vb = t[b][kb];
    if (std::abs(va - vb) > 1e-9 * (1.0 + std::abs(va) + std::abs(vb)))
        throw InvalidBoundaryData("Dirichlet trace disagrees at a corner");
    return va;
}

}  // namespace

CompatibilityDefect compatibility_defect(const NeumannProblem& p) {
    const Section& s = p.rhs.section;
    validate_trace(s, p.flux);
    const Quadrature rule = best_rule(s);
    ScalarField2D abs_rhs = p.rhs;
    for (double& v : abs_rhs.values) v = std::abs(v);
    EdgeTrace abs_flux = p.flux;
    for (auto& e : abs_flux.edges)
        for (double& v : e) v = std::abs(v);
    CompatibilityDefect out;
    out.defect = integrate_area(p.rhs, rule) - integrate_boundary(s, p.flux, rule);
    out.scale = integrate_area(abs_rhs, rule) + integrate_boundary(s, abs_flux, rule);
    return out;
}

ScalarField2D solve_dirichlet(const DirichletProblem& p, const SolverConfig& cfg) {
    const Section& s = p.rhs.section;
    validate_trace(s, p.boundary);
    const int nx = s.nx();
    const int ny = s.ny();

    ScalarField2D u(s);
    for (Edge e : kEdges)
        for (int k = 0; k < edge_node_count(s, e); ++k) {
            auto [i, j] = edge_node(s, e, k);
            u(i, j) = p.boundary[e][k];
        }
    u(0, 0) = corner_value(p.boundary, Edge::bottom, 0, Edge::left, 0);
    u(nx - 1, 0) = corner_value(p.boundary, Edge::bottom, nx - 1, Edge::right, 0);
    u(0, ny - 1) = corner_value(p.boundary, Edge::top, 0, Edge::left, ny - 1);
    u(nx - 1, ny - 1) = corner_value(p.boundary, Edge::top, nx - 1, Edge::right, ny - 1);

    const int mx = nx - 2;
    const int my = ny - 2;
    auto unknown = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };
    const double cx = 1.0 / (s.hx() * s.hx());
    const double cy = 1.0 / (s.hy() * s.hy());

    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mx) * my * 5);
    Eigen::VectorXd b(mx * my);
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) {
            const int row = unknown(i, j);
            double rhs = -p.rhs(i, j);
            triplets.emplace_back(row, row, 2.0 * cx + 2.0 * cy);
            auto couple = [&](int ii, int jj, double c) {
                if (s.on_boundary(ii, jj))
                    rhs += c * u(ii, jj);
                else
                    triplets.emplace_back(row, unknown(ii, jj), -c);
            };
            couple(i - 1, j, cx);
            couple(i + 1, j, cx);
            couple(i, j - 1, cy);
            couple(i, j + 1, cy);
            b[row] = rhs;
        }
    SpMat a(mx * my, mx * my);
    a.setFromTriplets(triplets.begin(), triplets.end());
    const Eigen::VectorXd x = solve_spd(a, b, cfg, "Dirichlet solve");
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) u(i, j) = x[unknown(i, j)];
    return u;
}

ScalarField2D solve_neumann(const NeumannProblem& p, const SolverConfig& cfg, NeumannGauge gauge) {
    const Section& s = p.rhs.section;
    const CompatibilityDefect compat = compatibility_defect(p);
    if (!(std::abs(compat.defect) <= cfg.compat_tolerance * compat.scale)) throw IncompatibleData(compat.defect);

    const int nx = s.nx();
    const int ny = s.ny();
    const double hx = s.hx();
    const double hy = s.hy();
    const std::size_t n = s.size();

    // Rows are scaled by the trapezoid weight of their node, which makes the
    // ghost-node operator symmetric with the constants as its null space.
    auto weight = [&](int i, int j) {
        const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
        const double wy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
        return wx * wy * hx * hy;
    };

    std::vector<Triplet> triplets;
    triplets.reserve(n * 5);
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const auto row = static_cast<Eigen::Index>(s.index(i, j));
            const double wt = weight(i, j);
            double source = p.rhs(i, j);
            double diag = 0.0;
            auto couple = [&](int ii, int jj, double c) {
                triplets.emplace_back(row, static_cast<Eigen::Index>(s.index(ii, jj)), -wt * c);
                diag += wt * c;
            };
            const double cx = 1.0 / (hx * hx);
            const double cy = 1.0 / (hy * hy);
            if (i == 0) {
                couple(1, j, 2.0 * cx);
                source -= 2.0 * p.flux[Edge::left][j] / hx;
            } else if (i == nx - 1) {
                couple(nx - 2, j, 2.0 * cx);
                source -= 2.0 * p.flux[Edge::right][j] / hx;
            } else {
                couple(i - 1, j, cx);
                couple(i + 1, j, cx);
            }
            if (j == 0) {
                couple(i, 1, 2.0 * cy);
                source -= 2.0 * p.flux[Edge::bottom][i] / hy;
            } else if (j == ny - 1) {
                couple(i, ny - 2, 2.0 * cy);
                source -= 2.0 * p.flux[Edge::top][i] / hy;
            } else {
                couple(i, j - 1, cy);
                couple(i, j + 1, cy);
            }
            triplets.emplace_back(row, row, diag);
            b[row] = -wt * source;
            w[row] = wt;
        }

    // Deflation: remove the discrete compatibility defect by a constant shift of the source.
    const double shift = b.sum() / w.sum();
    b -= shift * w;

    SpMat full(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    full.setFromTriplets(triplets.begin(), triplets.end());

    // Pin node (0, 0) and solve the remaining SPD block.
    const Eigen::Index m = static_cast<Eigen::Index>(n) - 1;
    SpMat reduced = full.bottomRightCorner(m, m);
    const Eigen::VectorXd x = solve_spd(reduced, b.tail(m), cfg, "Neumann solve");

    ScalarField2D u(s);
    for (Eigen::Index k = 0; k < m; ++k) u.values[static_cast<std::size_t>(k + 1)] = x[k];

    Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(u.values.data(), static_cast<Eigen::Index>(n));
    const double bnorm = b.norm();
    const double residual = bnorm > 0.0 ? (full * uv - b).norm() / bnorm : 0.0;
    if (!std::isfinite(residual) || residual > cfg.tolerance)
        throw SolveFailure("Neumann solve: residual above tolerance", residual);

    if (gauge == NeumannGauge::zero_mean) {
        const double mean = integrate_area(u, best_rule(s)) / (s.width() * s.height());
        for (double& v : u.values) v -= mean;
    }
    return u;
}

}  // namespace piezosv
