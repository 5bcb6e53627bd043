#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace piezosv::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' is not a finite number: '" + text + "'");
    }
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& key) const {
        if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return trim(*v);
        return std::nullopt;
    }
    double number(const std::string& key) const {
        const auto v = raw(key);
        if (!v) throw ConfigError("missing key '" + key + "'");
        return parse_number(*v, key);
    }
    double number(const std::string& key, double fallback) const {
        const auto v = raw(key);
        return v ? parse_number(*v, key) : fallback;
    }
    int integer(const std::string& key, int fallback) const {
        const double v = number(key, fallback);
        if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "' must be an integer");
        return static_cast<int>(v);
    }
    bool flag(const std::string& key, bool fallback) const {
        const auto v = raw(key);
        if (!v) return fallback;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw ConfigError("'" + key + "' must be true or false");
    }
    Vec2 vec2(const std::string& key, Vec2 fallback) const {
        const auto v = raw(key);
        if (!v) return fallback;
        const std::vector<double> a = parse_array(*v);
        if (a.size() != 2) throw ConfigError("'" + key + "' must have two entries");
        return {a[0], a[1]};
    }

private:
    const pt::ptree& tree_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<double> parse_array(const std::string& text) {
    std::string body = trim(text);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw ConfigError("expected an array like [a, b], got '" + text + "'");
    body = body.substr(1, body.size() - 2);
    std::vector<double> out;
    if (trim(body).empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "array entry"));
    return out;
}

namespace {

pt::ptree read_tree(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    return tree;
}

MaterialTIP read_material(const Reader& r) {
    MaterialTIP m;
    m.mu = r.number("material.mu");
    m.lambda = r.number("material.lambda");
    m.alpha1 = r.number("material.alpha1");
    m.alpha2 = r.number("material.alpha2");
    m.alpha3 = r.number("material.alpha3");
    m.beta1 = r.number("material.beta1");
    m.beta2 = r.number("material.beta2");
    m.beta3 = r.number("material.beta3");
    m.gamma1 = r.number("material.gamma1");
    m.gamma2 = r.number("material.gamma2");
    return m;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

MaterialTIP parse_material(const std::string& text) {
    const pt::ptree tree = read_tree(text);
    return read_material(Reader(tree));
}

MaterialTIP load_material(const std::filesystem::path& path) { return parse_material(read_text(path)); }

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    const pt::ptree tree = read_tree(text);
    const Reader r(tree);
    RunConfig c;
    c.material = read_material(r);

    c.x0 = r.number("section.x0");
    c.y0 = r.number("section.y0");
    c.nx = r.integer("section.nx", c.nx);
    c.ny = r.integer("section.ny", c.ny);
    c.half_length = r.number("section.L", c.half_length);
    if (!(c.half_length > 0.0)) throw ConfigError("section.L must be positive");

    const std::string mode = r.raw("case.mode").value_or("");
    if (mode == "flux-free")
        c.mode = Mode::flux_free;
    else if (mode == "almansi")
        c.mode = Mode::almansi;
    else
        throw ConfigError("case.mode must be flux-free or almansi, got '" + mode + "'");
    c.v1 = r.vec2("case.v1", {});
    c.v2 = r.vec2("case.v2", {});
    c.b1 = r.number("case.b1", 0.0);
    c.phi1_tilde0 = r.number("case.phi1_tilde0", 0.0);
    c.k0 = r.number("case.k0", 0.0);
    c.k1 = r.number("case.k1", 0.0);
    if (auto f = r.raw("case.phi0_trace")) c.phi0_trace_file = resolve(base_dir, *f);
    if (auto f = r.raw("case.phi1_trace")) c.phi1_trace_file = resolve(base_dir, *f);
    if (auto f = r.raw("case.phi2_trace")) c.phi2_trace_file = resolve(base_dir, *f);
    for (const auto* f : {&c.phi0_trace_file, &c.phi1_trace_file, &c.phi2_trace_file})
        if (*f && !std::filesystem::exists(**f)) throw ConfigError("trace file not found: " + (*f)->string());
    c.poisson_cancel = r.flag("case.poisson_cancel", false);
    if (r.raw("case.design_q")) c.design_q = r.vec2("case.design_q", {});
    const std::string sign = r.raw("case.flux_sign_variant").value_or("minus");
    if (sign == "minus")
        c.flux_sign = FluxSign::minus;
    else if (sign == "plus")
        c.flux_sign = FluxSign::plus;
    else
        throw ConfigError("case.flux_sign_variant must be minus or plus");

    if (c.mode == Mode::flux_free) {
        if (c.k0 != 0.0 || c.k1 != 0.0 || c.phi0_trace_file || c.phi1_trace_file || c.phi2_trace_file)
            throw ConfigError("k0, k1 and trace files only apply to mode = almansi");
        if (c.design_q) throw ConfigError("design_q only applies to mode = almansi");
    } else if (c.poisson_cancel) {
        throw ConfigError("poisson_cancel only applies to mode = flux-free");
    }

    c.solver.tolerance = r.number("solver.tolerance", c.solver.tolerance);
    c.solver.max_iterations = r.integer("solver.max_iterations", c.solver.max_iterations);
    const std::string method = r.raw("solver.method").value_or("auto");
    if (method == "auto")
        c.solver.method = LinearSolver::automatic;
    else if (method == "direct")
        c.solver.method = LinearSolver::direct;
    else if (method == "cg")
        c.solver.method = LinearSolver::conjugate_gradient;
    else
        throw ConfigError("solver.method must be auto, direct or cg");
    if (!(c.solver.tolerance > 0.0) || c.solver.max_iterations <= 0)
        throw ConfigError("solver.tolerance and solver.max_iterations must be positive");

    if (auto p = r.raw("output.fields")) c.fields_path = *p;
    if (auto p = r.raw("output.report")) c.report_path = *p;
    if (auto p = r.raw("output.sweep")) c.sweep_path = *p;
    if (auto z = r.raw("output.z_stations")) {
        c.z_stations = parse_array(*z);
        for (double zz : c.z_stations)
            if (std::abs(zz) > c.half_length) throw ConfigError("z_stations must lie in [-L, L]");
    }

    c.verify_threshold = r.number("verify.threshold", c.verify_threshold);
    c.corner_exclusion = r.number("verify.corner_exclusion", c.corner_exclusion);
    if (!(c.verify_threshold > 0.0) || c.corner_exclusion < 0.0 || c.corner_exclusion >= 0.5)
        throw ConfigError("verify.threshold must be positive and verify.corner_exclusion in [0, 0.5)");

    c.sweep_parameter = r.raw("sweep.parameter").value_or("");
    if (auto v = r.raw("sweep.values")) c.sweep_values = parse_array(*v);
    if (!c.sweep_parameter.empty()) {
        RunConfig probe = c;
        set_parameter(probe, c.sweep_parameter, 0.0);
        if (c.mode == Mode::flux_free && (c.sweep_parameter == "k0" || c.sweep_parameter == "k1"))
            throw ConfigError("sweeping k0 or k1 requires mode = almansi");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text(path), path.parent_path().empty() ? "." : path.parent_path());
}

EdgeTrace load_trace(const std::filesystem::path& path, const Section& s) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path.string());
    EdgeTrace t;
    std::array<std::vector<char>, 4> seen;
    for (Edge e : kEdges) {
        t[e].assign(edge_node_count(s, e), 0.0);
        seen[static_cast<int>(e)].assign(edge_node_count(s, e), 0);
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.rfind("edge", 0) == 0) continue;
        std::stringstream ss(line);
        std::string edge, index, value;
        if (!std::getline(ss, edge, ',') || !std::getline(ss, index, ',') || !std::getline(ss, value))
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected edge,index,value");
        edge = trim(edge);
        const std::array<std::string, 4> names = {"bottom", "right", "top", "left"};
        const auto it = std::find(names.begin(), names.end(), edge);
        if (it == names.end()) throw ConfigError(path.string() + ": unknown edge '" + edge + "'");
        const Edge e = kEdges[it - names.begin()];
        const double k = parse_number(index, "trace index");
        if (k != std::floor(k) || k < 0 || k >= edge_node_count(s, e))
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": index out of range");
        t[e][static_cast<std::size_t>(k)] = parse_number(value, "trace value");
        seen[static_cast<int>(e)][static_cast<std::size_t>(k)] = 1;
    }
    for (const auto& edge : seen)
        if (std::find(edge.begin(), edge.end(), 0) != edge.end())
            throw ConfigError(path.string() + ": trace does not cover every boundary node");
    return t;
}

void set_parameter(RunConfig& cfg, const std::string& name, double value) {
    if (name == "k0")
        cfg.k0 = value;
    else if (name == "k1")
        cfg.k1 = value;
    else if (name == "b1")
        cfg.b1 = value;
    else if (name == "phi1_tilde0")
        cfg.phi1_tilde0 = value;
    else if (name == "v1x")
        cfg.v1.x = value;
    else if (name == "v1y")
        cfg.v1.y = value;
    else if (name == "v2x")
        cfg.v2.x = value;
    else if (name == "v2y")
        cfg.v2.y = value;
    else
        throw ConfigError("unknown sweep parameter '" + name + "'");
}

}  // namespace piezosv::cli
