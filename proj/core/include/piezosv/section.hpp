#pragma once

#include "piezosv/material.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace piezosv {

/// Rectangular cross-section [0, x0] x [0, y0] sampled on a uniform,
/// node-centred tensor-product grid that includes the boundary.
class Section {
public:
    /// Throws InvalidGeometry unless x0, y0 > 0 and nx, ny >= 3.
    static Section build(double x0, double y0, int nx, int ny);

    double width() const { return x0_; }
    double height() const { return y0_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    double diameter() const;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    Vec2 node(int i, int j) const { return {i * hx_, j * hy_}; }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }

    friend bool operator==(const Section&, const Section&) = default;

private:
    Section(double x0, double y0, int nx, int ny);

    double x0_;
    double y0_;
    int nx_;
    int ny_;
    double hx_;
    double hy_;
};

/// Nodal scalar field on a Section.
struct ScalarField2D {
    Section section;
    std::vector<double> values;

    explicit ScalarField2D(const Section& s, double fill = 0.0) : section(s), values(s.size(), fill) {}

    double& operator()(int i, int j) { return values[section.index(i, j)]; }
    double operator()(int i, int j) const { return values[section.index(i, j)]; }
};

/// Nodal in-plane vector field on a Section.
struct VectorField2D {
    Section section;
    std::vector<Vec2> values;

    explicit VectorField2D(const Section& s, Vec2 fill = {}) : section(s), values(s.size(), fill) {}

    Vec2& operator()(int i, int j) { return values[section.index(i, j)]; }
    Vec2 operator()(int i, int j) const { return values[section.index(i, j)]; }
};

/// Samples f(r) at every node.
ScalarField2D sample(const Section& s, const std::function<double(Vec2)>& f);
VectorField2D sample_vector(const Section& s, const std::function<Vec2(Vec2)>& f);
/// offset + slope . r
ScalarField2D affine_field(const Section& s, Vec2 slope, double offset);

/// a*f + b*g, nodewise. Throws GridMismatch on different sections.
ScalarField2D combine(double a, const ScalarField2D& f, double b, const ScalarField2D& g);
ScalarField2D combine(double a, const ScalarField2D& f, double b, const ScalarField2D& g, double c,
                      const ScalarField2D& h);
double max_abs(const ScalarField2D& f);
double max_abs(const VectorField2D& f);
double max_abs_difference(const ScalarField2D& f, const ScalarField2D& g);
void require_same_grid(const Section& a, const Section& b);

struct InertiaData {
    double area = 0.0;
    Vec2 centroid;  // r_B
    Sym2 euler;     // J_B = int (r - r_B) (x) (r - r_B) dA
};

/// Closed-form rectangle values.
InertiaData inertia(const Section& s);

/// Second-order central differences inside, second-order one-sided at the boundary.
VectorField2D gradient(const ScalarField2D& f);
/// Per-component gradients of a vector field: returns (d/dx v, d/dy v).
std::pair<VectorField2D, VectorField2D> gradient(const VectorField2D& v);
ScalarField2D divergence(const VectorField2D& v);
/// Five-point Laplacian at interior nodes; boundary entries are zero.
ScalarField2D laplacian(const ScalarField2D& f);

enum class Quadrature { simpson, trapezoid };

/// Composite tensor-product quadrature of nodal values. Simpson requires odd
/// node counts and throws QuadratureOrderUnavailable otherwise.
double integrate_area(const ScalarField2D& f, Quadrature rule = Quadrature::simpson);
/// Simpson when the node count is odd, trapezoid otherwise.
Quadrature best_rule(const Section& s);

/// Boundary edges in counter-clockwise order starting at y = 0.
enum class Edge { bottom = 0, right = 1, top = 2, left = 3 };
inline constexpr std::array<Edge, 4> kEdges = {Edge::bottom, Edge::right, Edge::top, Edge::left};

Vec2 outward_normal(Edge e);
int edge_node_count(const Section& s, Edge e);
/// Grid indices of node k along edge e (bottom/top run in x, left/right in y).
std::pair<int, int> edge_node(const Section& s, Edge e, int k);

/// Values attached to boundary nodes, stored per edge. Corner nodes belong to
/// both adjacent edges and carry one value per edge.
struct EdgeTrace {
    std::array<std::vector<double>, 4> edges;

    std::vector<double>& operator[](Edge e) { return edges[static_cast<int>(e)]; }
    const std::vector<double>& operator[](Edge e) const { return edges[static_cast<int>(e)]; }
};

EdgeTrace zero_trace(const Section& s);
/// g(r, n) at every boundary node, once per edge membership.
EdgeTrace sample_trace(const Section& s, const std::function<double(Vec2, Vec2)>& g);
EdgeTrace trace_of(const ScalarField2D& f);
/// v . n on every edge.
EdgeTrace normal_component(const VectorField2D& v);
/// Throws InvalidBoundaryData when the edge lengths do not match the grid.
void validate_trace(const Section& s, const EdgeTrace& t);

/// Line integral over the closed boundary.
double integrate_boundary(const Section& s, const EdgeTrace& g, Quadrature rule = Quadrature::simpson);

/// Outward unit normals at a boundary node: one on an edge, two at a corner.
/// Throws NotBoundaryNode for interior nodes.
std::vector<Vec2> boundary_normals(const Section& s, int i, int j);

}  // namespace piezosv
