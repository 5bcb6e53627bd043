#pragma once

#include "piezosv/almansi.hpp"
#include "piezosv/elliptic.hpp"
#include "piezosv/material.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace piezosv::cli {

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { flux_free, almansi };

struct RunConfig {
    MaterialTIP material;

    double x0 = 1.0;
    double y0 = 1.0;
    int nx = 33;
    int ny = 33;
    double half_length = 1.0;  // L, the beam occupies z in [-L, L]

    Mode mode = Mode::flux_free;
    Vec2 v1;
    Vec2 v2;
    double b1 = 0.0;
    double phi1_tilde0 = 0.0;
    double k0 = 0.0;
    double k1 = 0.0;
    std::optional<std::filesystem::path> phi0_trace_file;
    std::optional<std::filesystem::path> phi1_trace_file;
    std::optional<std::filesystem::path> phi2_trace_file;
    bool poisson_cancel = false;
    std::optional<Vec2> design_q;
    FluxSign flux_sign = FluxSign::minus;

    SolverConfig solver;

    std::filesystem::path fields_path = "fields.csv";
    std::filesystem::path report_path = "report.txt";
    std::filesystem::path sweep_path = "sweep.csv";
    std::vector<double> z_stations;  // empty: {-L, -L/2, 0, L/2, L}

    double verify_threshold = 1e-2;  // on residual / natural scale
    double corner_exclusion = 0.0;   // as a fraction of min(x0, y0)

    std::string sweep_parameter;
    std::vector<double> sweep_values;
};

/// Only the [material] section; enough for `derive`.
MaterialTIP load_material(const std::filesystem::path& path);
MaterialTIP parse_material(const std::string& text);

/// Parses an INI-style file; relative paths inside are resolved against the
/// file's directory. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

/// "[a, b, c]"; the brackets are required.
std::vector<double> parse_array(const std::string& text);

/// Trace file rows `edge,index,value` with edge in bottom|right|top|left.
EdgeTrace load_trace(const std::filesystem::path& path, const Section& s);

/// Sets a scalar case parameter by name (k0, k1, b1, phi1_tilde0, v1x, v1y, v2x, v2y).
void set_parameter(RunConfig& cfg, const std::string& name, double value);

}  // namespace piezosv::cli
