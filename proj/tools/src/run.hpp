#pragma once

#include "config.hpp"

#include "piezosv/fluxfree.hpp"
#include "piezosv/verify.hpp"

#include <iosfwd>
#include <optional>

namespace piezosv::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kDegenerateMaterial = 2,
    kSolveFailure = 3,
    kVerificationFailure = 4,
};

/// A solved case together with the values echoed in the report.
struct CaseResult {
    RunConfig config;  // effective config (poisson_cancel and design_q applied)
    DerivedModuli moduli;
    NondegeneracyCheck nondegeneracy;
    std::optional<FluxFreeSolution> flux_free;
    std::optional<AlmansiSolution> almansi;
    std::optional<ResultantsCheck> resultants_check;
    Vec2 q_formula;  // *J_B (Y v2 + Ybar k), Almansi only
    std::optional<Vec2> q_roundtrip;

    const Solution3D& solution() const { return flux_free ? flux_free->solution : almansi->solution; }
    const Resultants& resultants() const { return flux_free ? flux_free->resultants : almansi->resultants; }
};

Section make_section(const RunConfig& cfg);
std::vector<double> z_stations(const RunConfig& cfg);

/// Throws piezosv errors and ConfigError.
CaseResult solve_case(const RunConfig& cfg);
ResidualReport verify_case(const CaseResult& result);
/// True when every residual family, divided by its natural scale, is within the threshold.
bool residuals_pass(const ResidualReport& report, double threshold);

/// 17 significant digits; negative zero printed as 0.
std::string format_number(double v);

void write_derived(std::ostream& out, const DerivedModuli& dm, const NondegeneracyCheck& check);
void write_report(std::ostream& out, const CaseResult& result, const ResidualReport* residuals);
/// Header x,y,z,ux,uy,uz,phi,sigma_zz,dz; one row per (z-station, node).
void write_fields(std::ostream& out, const CaseResult& result);

/// Runs derive | solve | verify | sweep and returns the exit code. Messages go to `log`.
int run(const std::string& command, const std::filesystem::path& config_path,
        const std::filesystem::path& out_dir, std::ostream& out, std::ostream& log);

}  // namespace piezosv::cli
