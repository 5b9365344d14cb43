#pragma once

#include "radchemo/grid.hpp"
#include "radchemo/model.hpp"
#include "radchemo/signal.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace radchemo {

/// Step-size and termination policy shared by both solvers.
struct StepControls {
    double dt_init = 1e-4;
    double dt_max = 1e-2;
    double dt_min = 1e-12;
    /// Safety factor of the chemotactic rate bound; infinity disables it.
    double cfl = INFINITY;
    /// Largest accepted ||u_new - u||_inf / ||u||_inf per step.
    double max_change = 0.02;
    double growth = 1.2;
    /// sup u at or above this level ends the run as suspected blow-up.
    double blowup_ceiling = INFINITY;
    /// On dt collapse, sup u above this level means blow-up, otherwise failure.
    double collapse_level = INFINITY;
    long max_steps = 5'000'000;
};

enum class TerminationKind { ReachedTStop, BlowupSuspected, NumericalFailure };

std::string to_string(TerminationKind kind);

struct TerminationReason {
    TerminationKind kind = TerminationKind::ReachedTStop;
    double t = 0.0;
    double sup_u = 0.0;
    std::string detail;
};

/// Cell density and signal at time t. `signal` always belongs to `u`
/// (tau = 0) or is the current v (tau = 1).
struct RadialState {
    std::shared_ptr<const RadialGrid> grid;
    double t = 0.0;
    std::vector<double> u;
    SignalField signal;
    double dt_last = 0.0;
    double dt_next = 0.0;  ///< step-size proposal, not shortened by output synchronisation
    double clamped_mass = 0.0;  ///< accumulated mass removed by clamping round-off undershoot
    long steps = 0;

    double mass() const { return grid->mass(u); }
    double sup_u() const;
};

/// Builds the initial state; for tau = 0 the elliptic signal is solved, for
/// tau = 1 data.v0 is used.
RadialState make_radial_state(const ModelParams& params, const InitialData& data,
                              std::shared_ptr<const RadialGrid> grid);

enum class StepStatus { Accepted, DtCollapse };

struct StepResult {
    StepStatus status = StepStatus::Accepted;
    double dt = 0.0;
};

/// Largest admissible explicit step for the chemotactic flux given face
/// gradients `grad` (donor-cell positivity bound with safety factor cfl).
double chemotaxis_dt_limit(std::span<const double> u, std::span<const double> grad, const SensitivitySpec& S,
                           const RadialGrid& grid, double cfl);

/// One IMEX step: implicit diffusion, explicit upwind chemotactic flux in
/// conservative form. The accepted dt is min(dt_target, growth*dt_last,
/// stability bound). On DtCollapse the state is left unchanged.
StepResult step(RadialState& state, const ModelParams& params, double dt_target, const StepControls& controls);

using RadialObserver = std::function<void(const RadialState&)>;

/// Repeated steps until t_stop, blow-up detection or failure. The observer
/// sees every accepted state; an exception from it ends the run as
/// NumericalFailure. Steps are shortened to land on multiples of
/// `sync_dt` (if > 0) and on t_stop.
TerminationReason run_until(RadialState& state, const ModelParams& params, double t_stop,
                            const StepControls& controls, const RadialObserver& observer = {},
                            double sync_dt = 0.0);

}  // namespace radchemo
