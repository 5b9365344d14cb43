#pragma once

// Shared time loop for the primitive and mass-accumulation solvers.

#include "radchemo/primitive.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

namespace radchemo::detail {

template <class State, class StepFn, class Observer>
TerminationReason drive(State& state, double t_stop, const StepControls& controls, const Observer& observer,
                        double sync_dt, StepFn&& advance)
{
    if (!(t_stop > state.t))
        throw std::invalid_argument("run_until: t_stop must exceed the current time");

    const long first_step = state.steps;
    while (state.t < t_stop) {
        double t_next = t_stop;
        if (sync_dt > 0.0) {
            const double k = std::floor(state.t / sync_dt + 1e-9) + 1.0;
            t_next = std::min(t_next, k * sync_dt);
        }
        StepResult r;
        try {
            r = advance(state, t_next - state.t);
        } catch (const std::exception& e) {
            return {TerminationKind::NumericalFailure, state.t, state.sup_u(), e.what()};
        }
        if (r.status == StepStatus::DtCollapse) {
            const double sup = state.sup_u();
            if (sup > controls.collapse_level)
                return {TerminationKind::BlowupSuspected, state.t, sup, "time step collapse"};
            return {TerminationKind::NumericalFailure, state.t, sup, "time step collapse below dt_min"};
        }
        if (std::abs(state.t - t_next) <= 1e-12 * std::max(1.0, t_next))
            state.t = t_next;

        if (observer) {
            try {
                observer(state);
            } catch (const std::exception& e) {
                return {TerminationKind::NumericalFailure, state.t, state.sup_u(),
                        std::string("observer: ") + e.what()};
            }
        }
        const double sup = state.sup_u();
        if (!std::isfinite(sup))
            return {TerminationKind::NumericalFailure, state.t, sup, "non-finite density"};
        if (sup >= controls.blowup_ceiling)
            return {TerminationKind::BlowupSuspected, state.t, sup, "blow-up ceiling reached"};
        if (state.steps - first_step >= controls.max_steps)
            return {TerminationKind::NumericalFailure, state.t, sup, "step budget exhausted"};
    }
    return {TerminationKind::ReachedTStop, state.t, state.sup_u(), ""};
}

}  // namespace radchemo::detail
