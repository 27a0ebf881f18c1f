#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bidisc/corner_fit.hpp"
#include "bidisc/form_data.hpp"
#include "bidisc/log_neumann.hpp"
#include "bidisc/recovery.hpp"

namespace bidisc {

/// Invalid configuration (exit code 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Degree 6 in a window of radius 0.07 needs about 840 samples (n_r >= 129 on the graded grid);
// smooth solutions then leak below 1e-7 into alpha and gamma.
struct FitConfig {
    int degree = 6;
    double theta1 = 0;  // angles at which u is sampled for the fit
    double theta2 = 0;
    std::vector<FitWindow> windows{{0, 0, 0.0, 0.07}};
};

struct Gates {
    double pde = 1e-6;
    double boundary = 1e-6;
};

struct RunConfig {
    GridConfig grid{129, 64, Grading::graded, 4.0};
    int M = 8;
    SolverOptions solver{4, 1e-10, 6, 1600};
    SeriesConfig series;
    FitConfig fit;
    Gates gates;
    std::string preset = "polynomial";
    std::optional<FormData> data;  // overrides the preset when set
    std::vector<ModeKey> modes{{1, 1}, {8, 8}};  // series study
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    FormData form_data() const;
};

/// Parses a JSON config; throws ConfigError on unknown presets, bad tolerances or M > n_theta/2 - 1.
RunConfig run_config_from_json(const nlohmann::json& j);
void validate(const RunConfig& c);

/// Registry: zero, polynomial, corner-one, suff-satisfying, suff-violating.
std::vector<std::string> preset_names();
FormData preset(const std::string& name);

struct FormSolution {
    ModeCoefficients f1, f2;
    ModeCoefficients u1, u2;
    double worst_solver_residual = 0;
};

/// Per-mode solves of Delta u_j = -2 f_j with u1 = 0 on r1 = 1, du1/dz2bar = 0 on r2 = 1 and the
/// symmetric conditions for u2. Throws SolveError.
FormSolution solve_form(const FormData& f, const GridConfig& grid, int M, const SolverOptions& opt);

/// Samples of sum_m u_m(r1, r2) e^{i(m1 theta1 + m2 theta2)} at the grid nodes, in y = -log r.
std::vector<FitSample> corner_samples(const ModeCoefficients& u, double theta1, double theta2);

struct PipelineResult {
    FormSolution solution;
    VerificationReport report;
};

/// Solve, residuals and corner fits of u1, without touching the file system.
PipelineResult run_form(const FormData& f, const RunConfig& c);

/// Runs the configured study and writes its artifacts; returns the exit code
/// (0 ok, 1 invalid config, 2 solver failure, 3 verification gate failed).
int run_pipeline(const RunConfig& c);

struct SeriesStudyRow {
    ModeKey mode;
    SeriesResult result;
    double exact_error = 0;   // relative L2 error against the transformed closed form, inner region
    double direct_error = 0;  // same against the transformed direct mode solve
    bool strictly_decreasing = false;
    std::string failure;  // set when the cutoffs do not fit the box or the iterates wrap around
};

/// Neumann series for the manufactured bubble of each mode, compared against the direct solve.
/// Cutoff radii that outgrow the box give rows with `failure` set instead of an exception.
std::vector<SeriesStudyRow> series_study(const RunConfig& c);
int run_series_study(const RunConfig& c);

struct BergmanCheck {
    ZPoly g;
    double gap = 0;           // ||Pg - (g - dbar* N dbar g)||_2
    double collapse = 0;      // ||Pg - g||_2, meaningful for holomorphic g
    double kernel_agreement = 0;  // max |P g| difference between the coefficient and kernel routes at random probes
};

BergmanCheck bergman_identity_check(const ZPoly& g, const RunConfig& c);
int run_bergman_study(const RunConfig& c);
int run_sufficiency_study(const RunConfig& c, int n = 2);

}  // namespace bidisc
