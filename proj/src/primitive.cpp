#include "radchemo/primitive.hpp"

#include "radchemo/tridiag.hpp"
#include "driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radchemo {

std::string to_string(TerminationKind kind)
{
    switch (kind) {
    case TerminationKind::ReachedTStop:
        return "ReachedTStop";
    case TerminationKind::BlowupSuspected:
        return "BlowupSuspected";
    case TerminationKind::NumericalFailure:
        return "NumericalFailure";
    }
    return "unknown";
}

double RadialState::sup_u() const
{
    return *std::max_element(u.begin(), u.end());
}

RadialState make_radial_state(const ModelParams& params, const InitialData& data,
                              std::shared_ptr<const RadialGrid> grid)
{
    params.validate();
    if (static_cast<int>(data.u0.size()) != grid->nodes())
        throw ValidationError("initial state: u0 does not match grid");
    RadialState state;
    state.grid = std::move(grid);
    state.u = data.u0;
    if (params.tau == 0) {
        state.signal = solve_elliptic(state.u, params.M, *state.grid);
    } else {
        if (!data.v0)
            throw ValidationError("initial state: tau = 1 needs v0");
        // A zero-length-in-time parabolic step is not defined; build the field
        // directly from v0 with finite-difference gradients.
        const RadialGrid& g = *state.grid;
        SignalField f;
        f.v = *data.v0;
        f.face_grad.resize(g.cells());
        for (int i = 0; i < g.cells(); ++i)
            f.face_grad[i] = (f.v[i + 1] - f.v[i]) / g.h();
        f.vr.assign(g.nodes(), 0.0);
        for (int i = 1; i < g.cells(); ++i)
            f.vr[i] = 0.5 * (f.face_grad[i - 1] + f.face_grad[i]);
        const int N = g.cells();
        f.vr[N] = (3.0 * f.v[N] - 4.0 * f.v[N - 1] + f.v[N - 2]) / (2.0 * g.h());
        state.signal = std::move(f);
    }
    return state;
}

double chemotaxis_dt_limit(std::span<const double> u, std::span<const double> grad, const SensitivitySpec& S,
                           const RadialGrid& grid, double cfl)
{
    const int N = grid.cells();
    const double umax = *std::max_element(u.begin(), u.end());
    const double floor = 1e-8 * std::max(1.0, umax);
    const double s0 = evaluate_sensitivity(S, 0.0);

    // Outflow rate of each donor cell. The S(0) part of the flux is balanced
    // by the inflow through the opposite face, so only the increment
    // S(u) - S(0) (secant slope) and the wave speed S'(u) restrict dt.
    std::vector<double> rate(N + 1, 0.0);
    for (int i = 0; i < N; ++i) {
        const double g = grad[i];
        if (g == 0.0)
            continue;
        const int donor = g > 0.0 ? i + 1 : i;
        const double ud = std::max(u[donor], floor);
        const double secant = (evaluate_sensitivity(S, ud) - s0) / ud;
        const double slope = std::max(secant, sensitivity_derivative(S, ud));
        rate[donor] += grid.face_area(i) * std::abs(g) * slope / grid.volume(donor);
    }
    const double worst = *std::max_element(rate.begin(), rate.end());
    return worst > 0.0 ? cfl / worst : INFINITY;
}

namespace {

std::vector<double> advance_density(const RadialState& state, std::span<const double> grad, const SensitivitySpec& S,
                                    double dt)
{
    const RadialGrid& grid = *state.grid;
    const int N = grid.cells();
    const double h = grid.h();
    const auto& u = state.u;
    const double umax = *std::max_element(u.begin(), u.end());
    const double floor = 1e-300 + 1e-14 * std::max(1.0, umax);

    // Donor flux A g S(u_d) written as A g (S(u_d^n)/u_d^n) u_d^{n+1}: the
    // matrix stays an M-matrix with zero column sums, so the step is
    // positivity preserving and conservative.
    Tridiagonal sys(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double east = i < N ? grid.face_area(i) / h : 0.0;
        const double west = i > 0 ? grid.face_area(i - 1) / h : 0.0;
        sys.lower[i] = -dt * west;
        sys.upper[i] = -dt * east;
        sys.diag[i] = grid.volume(i) + dt * (east + west);
        sys.rhs[i] = grid.volume(i) * u[i];
    }
    for (int i = 0; i < N; ++i) {
        const double g = grad[i];
        if (g == 0.0)
            continue;
        const int donor = g > 0.0 ? i + 1 : i;
        const int receiver = g > 0.0 ? i : i + 1;
        const double ud = std::max(u[donor], floor);
        const double coef = dt * grid.face_area(i) * std::abs(g) * evaluate_sensitivity(S, ud) / ud;
        sys.diag[donor] += coef;
        if (receiver < donor)
            sys.upper[receiver] -= coef;
        else
            sys.lower[receiver] -= coef;
    }
    return solve(sys);
}

}  // namespace

StepResult step(RadialState& state, const ModelParams& params, double dt_target, const StepControls& controls)
{
    if (!(dt_target > 0.0))
        throw std::domain_error("step: dt_target must be positive");
    const RadialGrid& grid = *state.grid;
    const SensitivitySpec& S = params.sensitivity;

    double candidate = state.dt_next > 0.0 ? state.dt_next : controls.dt_init;
    candidate = std::min(candidate, controls.dt_max);
    if (params.tau == 0 && std::isfinite(controls.cfl))
        candidate = std::min(candidate, chemotaxis_dt_limit(state.u, state.signal.face_grad, S, grid, controls.cfl));

    const double sup_old = state.sup_u();
    SignalField next_signal;
    std::vector<double> u_new;
    double dt = 0.0;
    double change = 0.0;
    for (;;) {
        if (candidate < controls.dt_min && candidate < dt_target)
            return {StepStatus::DtCollapse, candidate};
        dt = std::min(candidate, dt_target);
        std::span<const double> grad = state.signal.face_grad;
        if (params.tau == 1) {
            // v^{n+1} depends on dt, and its gradients drive the flux.
            next_signal = step_parabolic_v(state.signal, state.u, dt, params.M, grid);
            grad = next_signal.face_grad;
            if (std::isfinite(controls.cfl)) {
                const double limit = chemotaxis_dt_limit(state.u, grad, S, grid, controls.cfl);
                if (dt > limit) {
                    candidate = 0.9 * limit;
                    continue;
                }
            }
        }
        u_new = advance_density(state, grad, S, dt);
        change = 0.0;
        for (int i = 0; i <= grid.cells(); ++i)
            change = std::max(change, std::abs(u_new[i] - state.u[i]));
        change /= std::max(sup_old, 1e-300);
        if (!(change > controls.max_change))
            break;
        candidate = 0.8 * dt * controls.max_change / change;
    }

    for (int i = 0; i <= grid.cells(); ++i) {
        if (u_new[i] < 0.0) {
            state.clamped_mass += -u_new[i] * grid.volume(i);
            u_new[i] = 0.0;
        }
        if (!std::isfinite(u_new[i]))
            throw std::runtime_error("step: non-finite density");
    }

    state.u = std::move(u_new);
    if (params.tau == 0)
        state.signal = solve_elliptic(state.u, params.M, grid);
    else
        state.signal = std::move(next_signal);
    state.t += dt;
    state.dt_last = dt;
    double proposal = controls.growth * candidate;
    if (change > 0.0)
        proposal = std::min(proposal, 0.8 * dt * controls.max_change / change);
    state.dt_next = std::min(proposal, controls.dt_max);
    ++state.steps;
    return {StepStatus::Accepted, dt};
}

TerminationReason run_until(RadialState& state, const ModelParams& params, double t_stop,
                            const StepControls& controls, const RadialObserver& observer, double sync_dt)
{
    return detail::drive(state, t_stop, controls, observer, sync_dt, [&](RadialState& s, double dt_target) {
        return step(s, params, dt_target, controls);
    });
}

}  // namespace radchemo
