#include "radchemo/masspde.hpp"

#include "radchemo/quadrature.hpp"
#include "radchemo/tridiag.hpp"
#include "driver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace radchemo {

namespace {

constexpr double kMonotoneTol = 1e-10;

double min_increment(const std::vector<double>& w)
{
    double worst = INFINITY;
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        worst = std::min(worst, w[j + 1] - w[j]);
    return worst;
}

}  // namespace

double MassState::boundary_value() const
{
    return m0 / (2.0 * std::numbers::pi);
}

double MassState::sup_u() const
{
    const std::vector<double> u = reconstruct_u(*this);
    return *std::max_element(u.begin(), u.end());
}

std::vector<double> reconstruct_u(const MassState& state)
{
    const RadialGrid& rg = *state.rgrid;
    const double hs = state.sgrid->hs();
    const std::vector<double> ws = nodal_derivative(state.w, hs);
    std::vector<double> u(rg.nodes());
    for (int i = 0; i < rg.nodes(); ++i) {
        const double r = rg.r(i);
        u[i] = std::max(0.0, 2.0 * interpolate_uniform(ws, hs, r * r));
    }
    return u;
}

void refresh_derived(MassState& state, double M)
{
    const RadialGrid& rg = *state.rgrid;
    const double hs = state.sgrid->hs();
    state.U.resize(rg.nodes());
    for (int i = 0; i < rg.nodes(); ++i) {
        const double r = rg.r(i);
        state.U[i] = interpolate_uniform(state.w, hs, r * r);
    }
    state.signal = solve_elliptic(reconstruct_u(state), M, rg);
}

MassState transform_initial(std::span<const double> u0, std::shared_ptr<const RadialGrid> rgrid,
                            std::shared_ptr<const SGrid> sgrid, double M)
{
    if (rgrid->dim() != 2)
        throw ValidationError("mass formulation requires n = 2");
    if (std::abs(rgrid->radius() - sgrid->radius()) > 1e-12 * rgrid->radius())
        throw ValidationError("mass formulation: r-grid and s-grid radii differ");

    MassState state;
    state.w = mass_profile_on_s(u0, *rgrid, *sgrid);
    state.m0 = 2.0 * std::numbers::pi * state.w.back();
    if (!(state.m0 > 0.0))
        throw ValidationError("mass formulation: u0 vanishes identically");
    state.w.back() = state.boundary_value();
    if (min_increment(state.w) < 0.0)
        throw std::logic_error("transform_initial: w0 is not monotone");
    state.rgrid = std::move(rgrid);
    state.sgrid = std::move(sgrid);
    refresh_derived(state, M);
    return state;
}

namespace {

// Source rate c_j with sqrt(s_j) S(xi_j) v_r = c_j (w_{j+1} - w_j), xi_j = 2 D+ w.
std::vector<double> source_coefficients(const MassState& state, const SensitivitySpec& S)
{
    const SGrid& sg = *state.sgrid;
    const RadialGrid& rg = *state.rgrid;
    const int Ns = sg.cells();
    const double hs = sg.hs();
    double xmax = 0.0;
    for (int j = 0; j < Ns; ++j)
        xmax = std::max(xmax, 2.0 * (state.w[j + 1] - state.w[j]) / hs);
    const double floor = 1e-300 + 1e-14 * std::max(1.0, xmax);
    std::vector<double> c(Ns + 1, 0.0);
    for (int j = 1; j < Ns; ++j) {
        const double rho = std::sqrt(sg.s(j));
        const double a = rho * interpolate_uniform(state.signal.vr, rg.h(), rho);
        const double xi = std::max(floor, 2.0 * (state.w[j + 1] - state.w[j]) / hs);
        c[j] = a * evaluate_sensitivity(S, xi) / xi * 2.0 / hs;
    }
    return c;
}

}  // namespace

StepResult step_w(MassState& state, const ModelParams& params, double dt_target, const StepControls& controls)
{
    if (params.tau != 0 || params.n != 2)
        throw ValidationError("masspde requires tau=0, n=2");
    if (!(dt_target > 0.0))
        throw std::domain_error("step_w: dt_target must be positive");

    const SGrid& sg = *state.sgrid;
    const int Ns = sg.cells();
    const double hs = sg.hs();
    const std::vector<double> c = source_coefficients(state, params.sensitivity);

    double dmax = 0.0;
    for (int j = 0; j < Ns; ++j)
        dmax = std::max(dmax, state.w[j + 1] - state.w[j]);

    double candidate = std::min(state.dt_next > 0.0 ? state.dt_next : controls.dt_init, controls.dt_max);
    std::vector<double> w;
    double dt = 0.0;
    double change = 0.0;
    for (;;) {
        if (candidate < controls.dt_min && candidate < dt_target)
            return {StepStatus::DtCollapse, candidate};
        dt = std::min(candidate, dt_target);

        // Implicit 4 s w_ss and a linearly implicit source: the increments
        // w_{j+1} - w_j solve an M-matrix system, so w stays monotone.
        Tridiagonal sys(Ns + 1);
        sys.diag[0] = 1.0;
        for (int j = 1; j < Ns; ++j) {
            const double d = dt * 4.0 * sg.s(j) / (hs * hs);
            sys.lower[j] = -d;
            sys.upper[j] = -d - dt * c[j];
            sys.diag[j] = 1.0 + 2.0 * d + dt * c[j];
            sys.rhs[j] = state.w[j];
        }
        sys.diag[Ns] = 1.0;
        sys.rhs[Ns] = state.boundary_value();
        w = solve(sys);
        w[0] = 0.0;
        w[Ns] = state.boundary_value();

        change = 0.0;
        for (int j = 0; j < Ns; ++j)
            change = std::max(change, std::abs((w[j + 1] - w[j]) - (state.w[j + 1] - state.w[j])));
        change /= std::max(dmax, 1e-300);
        if (!(change > controls.max_change))
            break;
        candidate = 0.8 * dt * controls.max_change / change;
    }

    if (min_increment(w) < -kMonotoneTol)
        throw std::runtime_error("step_w: w lost monotonicity");
    for (double x : w)
        if (!std::isfinite(x))
            throw std::runtime_error("step_w: non-finite w");

    state.w = std::move(w);
    refresh_derived(state, params.M);
    state.t += dt;
    state.dt_last = dt;
    double proposal = controls.growth * candidate;
    if (change > 0.0)
        proposal = std::min(proposal, 0.8 * dt * controls.max_change / change);
    state.dt_next = std::min(proposal, controls.dt_max);
    ++state.steps;
    return {StepStatus::Accepted, dt};
}

TerminationReason run_until(MassState& state, const ModelParams& params, double t_stop,
                            const StepControls& controls, const MassObserver& observer, double sync_dt)
{
    return detail::drive(state, t_stop, controls, observer, sync_dt, [&](MassState& s, double dt_target) {
        return step_w(s, params, dt_target, controls);
    });
}

}  // namespace radchemo
