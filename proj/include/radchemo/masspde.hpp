#pragma once

#include "radchemo/grid.hpp"
#include "radchemo/model.hpp"
#include "radchemo/primitive.hpp"
#include "radchemo/signal.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace radchemo {

/// Mass-accumulation variable w(s,t) = int_0^{sqrt s} rho u(rho,t) d rho on a
/// uniform s-grid, for n = 2 and tau = 0.
struct MassState {
    std::shared_ptr<const SGrid> sgrid;
    std::shared_ptr<const RadialGrid> rgrid;  ///< grid of the elliptic signal solve
    double t = 0.0;
    std::vector<double> w;
    double m0 = 0.0;
    std::vector<double> U;  ///< U(r_i) = w(r_i^2) on the r-grid
    SignalField signal;     ///< elliptic signal of the reconstructed density
    double dt_last = 0.0;
    double dt_next = 0.0;
    long steps = 0;

    double boundary_value() const;  ///< m0 / (2 pi)
    double sup_u() const;           ///< max of reconstruct_u
};

/// w0 from nodal u0 on the r-grid; the last node is pinned to m0/(2 pi),
/// with m0 = 2 pi w0(R^2) from the same quadrature.
MassState transform_initial(std::span<const double> u0, std::shared_ptr<const RadialGrid> rgrid,
                            std::shared_ptr<const SGrid> sgrid, double M);

/// u(r_i) = 2 w_s(r_i^2): nodal w_s by centered differences (second-order
/// one-sided at the ends), linearly interpolated in s.
std::vector<double> reconstruct_u(const MassState& state);

/// Refreshes U and the elliptic signal from the current w.
void refresh_derived(MassState& state, double M);

/// One step of w_t = 4 s w_ss + sqrt(s) S(2 w_s) v_r(sqrt s, t): implicit
/// diffusion, source linearly implicit in the forward difference of w with
/// v_r and S(xi)/xi frozen. dt is limited by controls.max_change applied to
/// the increments of w.
StepResult step_w(MassState& state, const ModelParams& params, double dt_target, const StepControls& controls);

using MassObserver = std::function<void(const MassState&)>;

TerminationReason run_until(MassState& state, const ModelParams& params, double t_stop,
                            const StepControls& controls, const MassObserver& observer = {},
                            double sync_dt = 0.0);

}  // namespace radchemo
