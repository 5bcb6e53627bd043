#include "piezosv/section.hpp"

#include "piezosv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace piezosv {

Section::Section(double x0, double y0, int nx, int ny)
    : x0_(x0), y0_(y0), nx_(nx), ny_(ny), hx_(x0 / (nx - 1)), hy_(y0 / (ny - 1)) {}

Section Section::build(double x0, double y0, int nx, int ny) {
    if (!(x0 > 0.0) || !(y0 > 0.0) || !std::isfinite(x0) || !std::isfinite(y0))
        throw InvalidGeometry("section dimensions must be positive");
    if (nx < 3 || ny < 3) throw InvalidGeometry("at least 3 grid nodes per axis are required");
    return Section(x0, y0, nx, ny);
}

double Section::diameter() const { return std::hypot(x0_, y0_); }

ScalarField2D sample(const Section& s, const std::function<double(Vec2)>& f) {
    ScalarField2D out(s);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) out(i, j) = f(s.node(i, j));
    return out;
}

VectorField2D sample_vector(const Section& s, const std::function<Vec2(Vec2)>& f) {
    VectorField2D out(s);
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) out(i, j) = f(s.node(i, j));
    return out;
}

ScalarField2D affine_field(const Section& s, Vec2 slope, double offset) {
    return sample(s, [&](Vec2 r) { return offset + dot(slope, r); });
}

void require_same_grid(const Section& a, const Section& b) {
    if (!(a == b)) throw GridMismatch("fields live on different sections");
}

ScalarField2D combine(double a, const ScalarField2D& f, double b, const ScalarField2D& g) {
    require_same_grid(f.section, g.section);
    ScalarField2D out(f.section);
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = a * f.values[n] + b * g.values[n];
    return out;
}

ScalarField2D combine(double a, const ScalarField2D& f, double b, const ScalarField2D& g, double c,
                      const ScalarField2D& h) {
    require_same_grid(f.section, h.section);
    ScalarField2D out = combine(a, f, b, g);
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += c * h.values[n];
    return out;
}

double max_abs(const ScalarField2D& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const VectorField2D& f) {
    double m = 0.0;
    for (Vec2 v : f.values) m = std::max(m, norm(v));
    return m;
}

double max_abs_difference(const ScalarField2D& f, const ScalarField2D& g) {
    require_same_grid(f.section, g.section);
    double m = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n) m = std::max(m, std::abs(f.values[n] - g.values[n]));
    return m;
}

InertiaData inertia(const Section& s) {
    const double a = s.width();
    const double b = s.height();
    InertiaData out;
    out.area = a * b;
    out.centroid = {a / 2.0, b / 2.0};
    out.euler = {a * a * a * b / 12.0, 0.0, a * b * b * b / 12.0};
    return out;
}

namespace {

// d/dx (axis 0) or d/dy (axis 1) of nodal values accessed through get(i, j).
template <class Get>
double difference(const Section& s, Get get, int i, int j, int axis) {
    const int n = axis == 0 ? s.nx() : s.ny();
    const int k = axis == 0 ? i : j;
    const double h = axis == 0 ? s.hx() : s.hy();
    auto at = [&](int kk) { return axis == 0 ? get(kk, j) : get(i, kk); };
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

std::vector<double> weights_1d(int n, double h, Quadrature rule) {
    std::vector<double> w(n, h);
    if (rule == Quadrature::trapezoid) {
        w.front() = w.back() = h / 2.0;
        return w;
    }
    if (n % 2 == 0) throw QuadratureOrderUnavailable("Simpson quadrature needs an odd node count, got " + std::to_string(n));
    for (int k = 0; k < n; ++k) w[k] = (k == 0 || k == n - 1) ? h / 3.0 : (k % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    return w;
}

}  // namespace

VectorField2D gradient(const ScalarField2D& f) {
    const Section& s = f.section;
    VectorField2D out(s);
    auto get = [&](int i, int j) { return f(i, j); };
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) out(i, j) = {difference(s, get, i, j, 0), difference(s, get, i, j, 1)};
    return out;
}

std::pair<VectorField2D, VectorField2D> gradient(const VectorField2D& v) {
    const Section& s = v.section;
    VectorField2D dx(s), dy(s);
    auto gx = [&](int i, int j) { return v(i, j).x; };
    auto gy = [&](int i, int j) { return v(i, j).y; };
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            dx(i, j) = {difference(s, gx, i, j, 0), difference(s, gy, i, j, 0)};
            dy(i, j) = {difference(s, gx, i, j, 1), difference(s, gy, i, j, 1)};
        }
    return {dx, dy};
}

ScalarField2D divergence(const VectorField2D& v) {
    const Section& s = v.section;
    ScalarField2D out(s);
    auto gx = [&](int i, int j) { return v(i, j).x; };
    auto gy = [&](int i, int j) { return v(i, j).y; };
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) out(i, j) = difference(s, gx, i, j, 0) + difference(s, gy, i, j, 1);
    return out;
}

ScalarField2D laplacian(const ScalarField2D& f) {
    const Section& s = f.section;
    ScalarField2D out(s);
    const double ihx2 = 1.0 / (s.hx() * s.hx());
    const double ihy2 = 1.0 / (s.hy() * s.hy());
    for (int j = 1; j < s.ny() - 1; ++j)
        for (int i = 1; i < s.nx() - 1; ++i)
            out(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) * ihx2 +
                        (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) * ihy2;
    return out;
}

double integrate_area(const ScalarField2D& f, Quadrature rule) {
    const Section& s = f.section;
    const auto wx = weights_1d(s.nx(), s.hx(), rule);
    const auto wy = weights_1d(s.ny(), s.hy(), rule);
    double sum = 0.0;
    for (int j = 0; j < s.ny(); ++j) {
        double row = 0.0;
        for (int i = 0; i < s.nx(); ++i) row += wx[i] * f(i, j);
        sum += wy[j] * row;
    }
    return sum;
}

Quadrature best_rule(const Section& s) {
    return (s.nx() % 2 == 1 && s.ny() % 2 == 1) ? Quadrature::simpson : Quadrature::trapezoid;
}

Vec2 outward_normal(Edge e) {
    switch (e) {
        case Edge::bottom: return {0.0, -1.0};
        case Edge::right: return {1.0, 0.0};
        case Edge::top: return {0.0, 1.0};
        case Edge::left: return {-1.0, 0.0};
    }
    return {};
}

int edge_node_count(const Section& s, Edge e) {
    return (e == Edge::bottom || e == Edge::top) ? s.nx() : s.ny();
}

std::pair<int, int> edge_node(const Section& s, Edge e, int k) {
    switch (e) {
        case Edge::bottom: return {k, 0};
        case Edge::right: return {s.nx() - 1, k};
        case Edge::top: return {k, s.ny() - 1};
        case Edge::left: return {0, k};
    }
    return {0, 0};
}

EdgeTrace zero_trace(const Section& s) {
    EdgeTrace t;
    for (Edge e : kEdges) t[e].assign(edge_node_count(s, e), 0.0);
    return t;
}

EdgeTrace sample_trace(const Section& s, const std::function<double(Vec2, Vec2)>& g) {
    EdgeTrace t = zero_trace(s);
    for (Edge e : kEdges) {
        const Vec2 n = outward_normal(e);
        for (int k = 0; k < edge_node_count(s, e); ++k) {
            auto [i, j] = edge_node(s, e, k);
            t[e][k] = g(s.node(i, j), n);
        }
    }
    return t;
}

EdgeTrace trace_of(const ScalarField2D& f) {
    const Section& s = f.section;
    EdgeTrace t = zero_trace(s);
    for (Edge e : kEdges)
        for (int k = 0; k < edge_node_count(s, e); ++k) {
            auto [i, j] = edge_node(s, e, k);
            t[e][k] = f(i, j);
        }
    return t;
}

EdgeTrace normal_component(const VectorField2D& v) {
    const Section& s = v.section;
    EdgeTrace t = zero_trace(s);
    for (Edge e : kEdges) {
        const Vec2 n = outward_normal(e);
        for (int k = 0; k < edge_node_count(s, e); ++k) {
            auto [i, j] = edge_node(s, e, k);
            t[e][k] = dot(v(i, j), n);
        }
    }
    return t;
}

void validate_trace(const Section& s, const EdgeTrace& t) {
    for (Edge e : kEdges)
        if (static_cast<int>(t[e].size()) != edge_node_count(s, e))
            throw InvalidBoundaryData("boundary trace does not match the grid");
}

double integrate_boundary(const Section& s, const EdgeTrace& g, Quadrature rule) {
    validate_trace(s, g);
    double sum = 0.0;
    for (Edge e : kEdges) {
        const int n = edge_node_count(s, e);
        const double h = (e == Edge::bottom || e == Edge::top) ? s.hx() : s.hy();
        const auto w = weights_1d(n, h, rule);
        for (int k = 0; k < n; ++k) sum += w[k] * g[e][k];
    }
    return sum;
}

std::vector<Vec2> boundary_normals(const Section& s, int i, int j) {
    if (i < 0 || j < 0 || i >= s.nx() || j >= s.ny() || !s.on_boundary(i, j))
        throw NotBoundaryNode("node (" + std::to_string(i) + ", " + std::to_string(j) + ") is not on the boundary");
    std::vector<Vec2> normals;
    if (j == 0) normals.push_back(outward_normal(Edge::bottom));
    if (i == s.nx() - 1) normals.push_back(outward_normal(Edge::right));
    if (j == s.ny() - 1) normals.push_back(outward_normal(Edge::top));
    if (i == 0) normals.push_back(outward_normal(Edge::left));
    return normals;
}

}  // namespace piezosv
