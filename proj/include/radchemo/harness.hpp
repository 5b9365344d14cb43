#pragma once

#include "radchemo/config.hpp"
#include "radchemo/functionals.hpp"
#include "radchemo/model.hpp"
#include "radchemo/primitive.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace radchemo {

enum class Classification { Bounded, Blowup, Inconclusive };

std::string to_string(Classification c);

/// Relative slack of the inequality monitors (fraction of the bounding quantity).
inline constexpr double kResidualTolerance = 0.01;

struct RunOutcome {
    Classification classification = Classification::Inconclusive;
    Solver solver = Solver::Primitive;
    double t_final = 0.0;
    double sup_u_final = 0.0;
    double sup_u_max = 0.0;
    double blowup_ceiling = 0.0;
    std::optional<double> blowup_time_estimate;    ///< interpolated ceiling crossing
    std::optional<double> blowup_time_coarse;      ///< same on the half-resolution grid
    std::optional<double> blowup_time_richardson;  ///< first-order extrapolation of the two
    std::optional<double> blowup_time_bound;
    TerminationReason termination;
    std::vector<FunctionalSample> samples;
    std::optional<BlowupConstants> constants;
    double m0 = 0.0;
    double mass_drift = 0.0;       ///< max over steps of |mass - m0| / m0
    double step_mass_drift = 0.0;  ///< max relative mass change of one step
    double clamped_mass = 0.0;
    double vmax_max = 0.0;         ///< max v over all accepted steps
    double v_bound = 0.0;          ///< max(M, ||v0||_inf): the bound vmax_max obeys
    long steps = 0;
    nlohmann::json manifest;
};

/// Called at every positive multiple of time.sample_dt with the density on the r-grid.
using SyncHook = std::function<void(double t, std::span<const double> u)>;

/// Runs one configuration to T_end or suspected blow-up and classifies it:
/// BOUNDED when T_end is reached, BLOWUP on suspected blow-up, INCONCLUSIVE
/// on numerical failure. Throws ConfigError for invalid combinations.
RunOutcome classify_run(const RunConfig& config, Solver solver, const SyncHook& hook = {});

/// t_fine + (t_fine - t_coarse) / (2^order - 1).
double richardson_extrapolate(double t_coarse, double t_fine, double order = 1.0);

class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MStarTrial {
    double M = 0.0;
    Classification classification = Classification::Inconclusive;
    std::optional<double> t_blowup;
};

struct MStarResult {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
    std::vector<MStarTrial> runs;  ///< endpoint runs first, then the midpoints in order
    bool audit_ok = true;          ///< every BLOWUP midpoint lies above every non-BLOWUP one
    Classification verdict = Classification::Blowup;  ///< INCONCLUSIVE when the audit fails
};

/// Bisection on M between a non-BLOWUP `lo` and a BLOWUP `hi`. The bracket
/// brackets the observed transition only; it is not a value of M*.
MStarResult bisect_mstar(const RunConfig& config, Solver solver, double lo, double hi, int iters);

struct SweepRow {
    double beta = 0.0;
    double M = 0.0;
    Classification classification = Classification::Inconclusive;
    std::optional<double> t_blowup;
    int grid_N = 0;
};

/// One run per (beta, M) pair with at most `parallelism` runs at a time.
/// Rows are ordered by (beta, M); failures become INCONCLUSIVE rows.
std::vector<SweepRow> sweep(const RunConfig& config, Solver solver, std::span<const double> betas,
                            std::span<const double> Ms, int parallelism);

struct ComparePoint {
    double t = 0.0;
    double rel_discrepancy = 0.0;  ///< ||u_prim - u_mass||_inf / ||u_prim||_inf
};

struct CompareReport {
    std::vector<ComparePoint> series;
    double max_rel_discrepancy = 0.0;
    Classification primitive = Classification::Inconclusive;
    Classification masspde = Classification::Inconclusive;
    std::optional<double> t_blowup_primitive;
    std::optional<double> t_blowup_masspde;
    std::optional<double> blowup_rel_diff;  ///< |t_mass - t_prim| / t_prim when both blow up
};

/// Runs both formulations from the same u0 and compares them at every
/// multiple of time.sample_dt. Requires n = 2, tau = 0.
CompareReport compare_formulations(const RunConfig& config);

/// Manifest for any experiment: the configuration echo plus a "manifest"
/// block with version, solver and tolerances.
nlohmann::json base_manifest(const RunConfig& config, Solver solver);

}  // namespace radchemo
