#include "run.hpp"

#include "piezosv/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace piezosv::cli {

namespace {

class NonFiniteOutput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw NonFiniteOutput("non-finite value in " + what);
}

std::string format_list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
    return s + "]";
}

// Writes `key = value` and rejects NaN/inf.
struct KeyWriter {
    std::ostream& out;
    void operator()(const std::string& key, double v) const {
        require_finite(v, key);
        fmt::print(out, "{} = {}\n", key, format_number(v));
    }
    void operator()(const std::string& key, Vec2 v) const {
        (*this)(key + "_x", v.x);
        (*this)(key + "_y", v.y);
    }
    void text(const std::string& key, const std::string& v) const { fmt::print(out, "{} = {}\n", key, v); }
};

double max_norm(const VectorField2D& f) {
    double m = 0.0;
    for (Vec2 v : f.values) m = std::max(m, norm(v));
    return m;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    return fmt::format("{:.17g}", v);
}

Section make_section(const RunConfig& cfg) { return Section::build(cfg.x0, cfg.y0, cfg.nx, cfg.ny); }

std::vector<double> z_stations(const RunConfig& cfg) {
    return cfg.z_stations.empty() ? default_z_stations(cfg.half_length) : cfg.z_stations;
}

CaseResult solve_case(const RunConfig& input) {
    CaseResult r{input, derive_moduli(input.material), {}, {}, {}, {}, {}, {}};
    r.nondegeneracy = check_nondegeneracy(r.moduli);
    require_nondegenerate(r.moduli);
    RunConfig& cfg = r.config;
    const Section s = make_section(cfg);

    SVConstants c;
    c.v1 = cfg.v1;
    c.b1 = cfg.b1;
    if (cfg.mode == Mode::flux_free) {
        if (cfg.poisson_cancel) cfg.phi1_tilde0 = poisson_cancel_potential(cfg.b1, cfg.material);
        c.v2 = cfg.v2;
        c.phi1_tilde0 = cfg.phi1_tilde0;
        r.flux_free = solve_fluxfree(c, cfg.material, s, cfg.solver, cfg.half_length);
        r.resultants_check = resultants_fluxfree(*r.flux_free, cfg.material, s, cfg.half_length);
        return r;
    }

    AlmansiBoundaryData bd;
    bd.k0 = cfg.k0;
    bd.k1 = cfg.k1;
    if (cfg.phi0_trace_file) bd.phi0_trace = load_trace(*cfg.phi0_trace_file, s);
    if (cfg.phi1_trace_file) bd.phi1_trace = load_trace(*cfg.phi1_trace_file, s);
    if (cfg.phi2_trace_file) bd.phi2_trace = load_trace(*cfg.phi2_trace_file, s);
    const Vec2 k = potential_slope(bd, s);
    const InertiaData in = inertia(s);
    if (cfg.design_q) {
        cfg.v2 = design_v2(*cfg.design_q, k, r.moduli, in);
        r.q_roundtrip = shear_resultant(cfg.v2, k, r.moduli, in);
    }
    c.v2 = cfg.v2;
    r.q_formula = shear_resultant(cfg.v2, k, r.moduli, in);
    r.almansi = solve_almansi(c, bd, cfg.material, s, cfg.solver, cfg.half_length, cfg.flux_sign);
    return r;
}

ResidualReport verify_case(const CaseResult& result) {
    const RunConfig& cfg = result.config;
    const Section& s = result.solution().section();
    const double exclusion = cfg.corner_exclusion * std::min(cfg.x0, cfg.y0);
    if (result.flux_free) return residuals(result.solution(), cfg.material, z_stations(cfg), FluxFreeWall{}, exclusion);

    AlmansiBoundaryData bd;
    bd.k0 = cfg.k0;
    bd.k1 = cfg.k1;
    const Vec2 k = potential_slope(bd, s);
    PotentialWall wall{
        cfg.phi0_trace_file ? load_trace(*cfg.phi0_trace_file, s) : zero_trace(s),
        cfg.phi1_trace_file ? load_trace(*cfg.phi1_trace_file, s) : zero_trace(s),
        cfg.phi2_trace_file ? load_trace(*cfg.phi2_trace_file, s)
                            : sample_trace(s, [&](Vec2 r, Vec2) { return cfg.k0 + dot(k, r); }),
    };
    return residuals(result.solution(), cfg.material, z_stations(cfg), wall, exclusion);
}

bool residuals_pass(const ResidualReport& report, double threshold) {
    for (const ResidualFamily& f : report.families()) {
        const double rel = f.scale > 0.0 ? f.value / f.scale : f.value;
        if (!(rel <= threshold)) return false;
    }
    return true;
}

void write_derived(std::ostream& out, const DerivedModuli& dm, const NondegeneracyCheck& check) {
    const KeyWriter w{out};
    out << "[derived]\n";
    const std::pair<const char*, double> rows[] = {
        {"alpha", dm.alpha}, {"A1", dm.A1}, {"B1", dm.B1}, {"A2", dm.A2}, {"B2", dm.B2}, {"A4", dm.A4},
        {"K", dm.K},         {"Dc", dm.Dc}, {"F1", dm.F1}, {"G1", dm.G1}, {"F2", dm.F2}, {"G2", dm.G2},
        {"F3", dm.F3},       {"G3", dm.G3}, {"Z0", dm.Z0}, {"Z1", dm.Z1}, {"Z2", dm.Z2}, {"Z3", dm.Z3},
        {"Z4", dm.Z4},       {"Z5", dm.Z5}, {"Y", dm.Y},   {"Ybar", dm.Ybar},
    };
    for (const auto& [key, value] : rows) w(key, value);
    w("nondegeneracy_bracket", check.bracket);
    w.text("nondegenerate", check.pass ? "true" : "false");
}

void write_report(std::ostream& out, const CaseResult& result, const ResidualReport* res) {
    const KeyWriter w{out};
    const RunConfig& cfg = result.config;
    const SVConstants& c = result.solution().constants();
    write_derived(out, result.moduli, result.nondegeneracy);

    out << "\n[constants]\n";
    w.text("mode", cfg.mode == Mode::flux_free ? "flux-free" : "almansi");
    w("v1", c.v1);
    w("v2", c.v2);
    w("b1", c.b1);
    w("b2", c.b2);
    w("phi1_tilde0", c.phi1_tilde0);
    w("phi2_tilde0", c.phi2_tilde0);
    w("k0", c.k0);
    w("k", c.k);
    if (result.flux_free) {
        w.text("poisson_cancel", cfg.poisson_cancel ? "true" : "false");
        w("lambda0", result.flux_free->lambda0);
        w("lambda1", result.flux_free->lambda1);
    } else {
        const AlmansiSolution& a = *result.almansi;
        w.text("flux_sign", cfg.flux_sign == FluxSign::minus ? "minus" : "plus");
        w("omega0", a.omega0);
        w("omega1_bar", a.omega1_bar);
        w("omega2", a.omega2);
        w("omega3_bar", a.omega3_bar);
        if (cfg.design_q) w("design_q", *cfg.design_q);
    }

    out << "\n[resultants]\n";
    const Resultants& rs = result.resultants();
    w("axial_force", rs.axial_force);
    w("d_flux", rs.d_flux);
    w("potential_difference", rs.potential_difference);
    w("shear", rs.shear);
    if (result.resultants_check) {
        const ResultantsCheck& rc = *result.resultants_check;
        w("closed_form_axial_force", rc.closed_form.axial_force);
        w("closed_form_d_flux", rc.closed_form.d_flux);
        w("closed_form_discrepancy", rc.discrepancy);
        w.text("closed_form_consistent", rc.consistent ? "true" : "false");
        w("compat_defect_phi", result.flux_free->phi_defect.defect);
        w("compat_defect_uz", result.flux_free->uz_defect.defect);
    } else {
        w("q", result.q_formula);
        w("compat_defect_warping", result.almansi->warping_defect.defect);
    }
    if (result.q_roundtrip) {
        w("q_roundtrip", *result.q_roundtrip);
        w("q_roundtrip_error", norm(*result.q_roundtrip - *cfg.design_q));
    }
    w("max_u_pi0", max_norm(result.solution().u_pi0()));
    w("max_u_pi1", max_norm(result.solution().u_pi1()));

    if (!res) return;
    out << "\n[residuals]\n";
    w("max_div_T", res->max_div_T);
    w("max_div_D", res->max_div_D);
    w("max_That", res->max_That);
    w("max_lateral_Tn", res->max_lateral_Tn);
    if (res->potential_wall)
        w("max_lateral_phi_error", res->max_lateral_phi_error);
    else
        w("max_lateral_Dn", res->max_lateral_Dn);
    w("h", res->h);
    w.text("z_stations", format_list(res->z_stations));
    w("stress_scale", res->stress_scale);
    w("flux_scale", res->flux_scale);
    w("potential_scale", res->potential_scale);
    w("corner_exclusion", res->corner_exclusion);
    for (const ResidualFamily& f : res->families()) w("relative_" + f.name, f.scale > 0.0 ? f.value / f.scale : f.value);
    w("threshold", cfg.verify_threshold);
    w.text("pass", residuals_pass(*res, cfg.verify_threshold) ? "true" : "false");
}

void write_fields(std::ostream& out, const CaseResult& result) {
    const Solution3D& sol = result.solution();
    const Section& s = sol.section();
    out << "x,y,z,ux,uy,uz,phi,sigma_zz,dz\n";
    for (double z : z_stations(result.config)) {
        const VectorField2D u = sol.u_pi(z);
        const ScalarField2D uz = sol.uz(z);
        const ScalarField2D phi = sol.phi(z);
        const StressState t = constitutive(kinematics(sol, z), result.config.material);
        for (int j = 0; j < s.ny(); ++j)
            for (int i = 0; i < s.nx(); ++i) {
                const std::size_t n = s.index(i, j);
                const Vec2 r = s.node(i, j);
                const double row[] = {r.x, r.y, z, u.values[n].x, u.values[n].y, uz.values[n], phi.values[n],
                                      t.stress[n].axial, t.displacement[n].axial};
                for (std::size_t k = 0; k < std::size(row); ++k) {
                    require_finite(row[k], "fields");
                    out << (k ? "," : "") << format_number(row[k]);
                }
                out << '\n';
            }
    }
}

namespace {

std::filesystem::path output_path(const std::filesystem::path& out_dir, const std::filesystem::path& p) {
    return p.is_absolute() ? p : out_dir / p;
}

// Renders to memory first so that a failure never leaves a partial file.
template <class F>
void write_file(const std::filesystem::path& path, F&& render) {
    std::ostringstream buffer;
    render(buffer);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << buffer.str();
}

int classify(const std::exception_ptr& e, std::ostream& log) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& x) {
        log << "config error: " << x.what() << '\n';
        return kConfigError;
    } catch (const DegenerateMaterial& x) {
        log << x.what() << '\n';
        return kDegenerateMaterial;
    } catch (const InvalidGeometry& x) {
        log << "config error: " << x.what() << '\n';
        return kConfigError;
    } catch (const InvalidBoundaryData& x) {
        log << "config error: " << x.what() << '\n';
        return kConfigError;
    } catch (const NonFiniteOutput& x) {
        log << "solve failure: " << x.what() << '\n';
        return kSolveFailure;
    } catch (const Error& x) {
        log << "solve failure: " << x.what() << '\n';
        return kSolveFailure;
    } catch (const std::exception& x) {
        log << "error: " << x.what() << '\n';
        return kSolveFailure;
    }
}

std::string sweep_row(const RunConfig& cfg, double value, const CaseResult& r) {
    const Resultants& rs = r.resultants();
    const VectorField2D& u0 = r.solution().u_pi0();
    const double values[] = {rs.axial_force, rs.d_flux, rs.potential_difference, rs.shear.x, rs.shear.y,
                             max_norm(u0), r.config.v2.x, r.config.v2.y};
    std::string line = cfg.sweep_parameter + "," + format_number(value) + ",0";
    for (double v : values) {
        require_finite(v, "sweep row");
        line += "," + format_number(v);
    }
    return line;
}

unsigned sweep_threads(std::size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PIEZOSV_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            throw ConfigError(std::string("PIEZOSV_THREADS must be a positive integer, got '") + env + "'");
        }
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

int run_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    if (cfg.sweep_parameter.empty() || cfg.sweep_values.empty())
        throw ConfigError("sweep needs [sweep] parameter and values");
    const std::size_t jobs = cfg.sweep_values.size();
    std::vector<std::string> lines(jobs);
    std::vector<int> status(jobs, kOk);
    std::vector<std::string> messages(jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < jobs; i = next++) {
            const double value = cfg.sweep_values[i];
            try {
                RunConfig one = cfg;
                set_parameter(one, cfg.sweep_parameter, value);
                lines[i] = sweep_row(cfg, value, solve_case(one));
            } catch (...) {
                std::ostringstream msg;
                status[i] = classify(std::current_exception(), msg);
                messages[i] = msg.str();
                lines[i] = cfg.sweep_parameter + "," + format_number(value) + "," + std::to_string(status[i]) +
                           ",,,,,,,,";
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned threads = sweep_threads(jobs);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    write_file(output_path(out_dir, cfg.sweep_path), [&](std::ostream& out) {
        out << "parameter,value,status,axial_force,d_flux,potential_difference,shear_x,shear_y,max_u_pi0,v2x,v2y\n";
        for (const std::string& l : lines) out << l << '\n';
    });
    int code = kOk;
    for (std::size_t i = 0; i < jobs; ++i)
        if (status[i] != kOk) {
            log << cfg.sweep_parameter << " = " << format_number(cfg.sweep_values[i]) << ": " << messages[i];
            if (code == kOk) code = status[i];
        }
    return code;
}

}  // namespace

int run(const std::string& command, const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
        std::ostream& out, std::ostream& log) {
    try {
        if (command != "derive" && command != "solve" && command != "verify" && command != "sweep")
            throw ConfigError("unknown command '" + command + "'");
        if (command == "derive") {
            const DerivedModuli dm = derive_moduli(load_material(config_path));
            std::ostringstream buffer;
            write_derived(buffer, dm, check_nondegeneracy(dm));
            out << buffer.str();
            return kOk;
        }
        const RunConfig cfg = load_config(config_path);
        if (command == "sweep") return run_sweep(cfg, out_dir, log);

        const CaseResult result = solve_case(cfg);
        std::optional<ResidualReport> res;
        if (command == "verify") res = verify_case(result);
        write_file(output_path(out_dir, cfg.fields_path), [&](std::ostream& o) { write_fields(o, result); });
        write_file(output_path(out_dir, cfg.report_path),
                   [&](std::ostream& o) { write_report(o, result, res ? &*res : nullptr); });
        if (res && !residuals_pass(*res, cfg.verify_threshold)) {
            log << "verification failed: a residual family exceeds threshold " << format_number(cfg.verify_threshold)
                << '\n';
            return kVerificationFailure;
        }
        return kOk;
    } catch (...) {
        return classify(std::current_exception(), log);
    }
}

}  // namespace piezosv::cli
