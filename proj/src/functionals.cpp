#include "radchemo/functionals.hpp"

#include "radchemo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace radchemo {

namespace {

// I(s_j) = (1/2) int_0^{s_j} w(sigma)/sigma d sigma; w/sigma is taken constant
// on the first cell (w linear through the origin).
std::vector<double> half_log_moment(std::span<const double> w, const SGrid& sg)
{
    const int Ns = sg.cells();
    std::vector<double> I(Ns + 1, 0.0);
    I[1] = 0.5 * w[1];
    for (int j = 1; j < Ns; ++j)
        I[j + 1] = I[j] + 0.25 * sg.hs() * (w[j] / sg.s(j) + w[j + 1] / sg.s(j + 1));
    return I;
}

}  // namespace

bool FunctionalSample::within(double rel_tol) const
{
    const std::pair<double, double> checks[] = {
        {residual_w_bound, scale_w_bound}, {residual_phi_bound, scale_phi_bound}, {residual_vlower, scale_vlower},
        {residual_rvr, scale_rvr},         {residual_wt, scale_wt},
    };
    for (const auto& [res, scale] : checks)
        if (!std::isnan(res) && res < -rel_tol * std::abs(scale))
            return false;
    return true;
}

double eval_phi(std::span<const double> w, const SGrid& sgrid, double gamma)
{
    return moment_integral(w, sgrid.hs(), gamma);
}

double eval_phi(const MassState& state, const BlowupConstants& consts)
{
    return eval_phi(state.w, *state.sgrid, consts.gamma);
}

double eval_psi(std::span<const double> w, const SGrid& sgrid, double gamma, double beta)
{
    return psi_integral(w, sgrid.hs(), gamma, beta);
}

double eval_psi(const MassState& state, const BlowupConstants& consts, double beta)
{
    return eval_psi(state.w, *state.sgrid, consts.gamma, beta);
}

FunctionalSample check_pointwise_bounds(const MonitorView& now, const MonitorView* previous, const SGrid& sg,
                                        const RadialGrid& rg, const BlowupConstants& consts,
                                        const ModelParams& params)
{
    if (params.tau != 0 || params.n != 2)
        throw UnsupportedRegime("monitors require tau = 0 and n = 2");
    if (params.sensitivity.family != SensitivityFamily::PowerPure || !(params.sensitivity.beta > 1.0))
        throw UnsupportedRegime("monitors require a pure power sensitivity with beta > 1");
    if (static_cast<int>(now.w.size()) != sg.nodes() || now.signal == nullptr)
        throw std::invalid_argument("check_pointwise_bounds: snapshot does not match the grids");

    const double beta = consts.beta;
    const double gamma = consts.gamma;
    const int Ns = sg.cells();
    const double hs = sg.hs();
    const std::span<const double> w = now.w;
    const SignalField& sig = *now.signal;

    FunctionalSample out;
    out.t = now.t;
    out.phi = eval_phi(w, sg, gamma);
    out.psi = eval_psi(w, sg, gamma, beta);
    const double root = std::pow(out.psi, 1.0 / (2.0 * beta));

    out.scale_w_bound = consts.C38 * root;
    out.residual_w_bound = out.scale_w_bound - *std::max_element(w.begin(), w.end());
    out.scale_phi_bound = consts.C40 * root;
    out.residual_phi_bound = out.scale_phi_bound - out.phi;

    const double R = rg.radius();
    const double M = params.M;
    const double a = consts.m0 / (2.0 * std::numbers::pi);
    out.scale_vlower = M;
    out.residual_vlower = sig.v[0];
    for (int i = 1; i < rg.nodes(); ++i) {
        const double r = rg.r(i);
        const double bound = M * std::exp(-std::sqrt(a * std::log(R / r)));
        out.residual_vlower = std::min(out.residual_vlower, sig.v[i] - bound);
    }

    const std::vector<double> I = half_log_moment(w, sg);
    out.scale_rvr = 0.0;
    out.residual_rvr = INFINITY;
    for (int i = 1; i < rg.nodes(); ++i) {
        const double r = rg.r(i);
        const double U = interpolate_uniform(w, hs, r * r);
        const double bound = U * sig.v[i] / (1.0 + interpolate_uniform(I, hs, r * r));
        out.scale_rvr = std::max(out.scale_rvr, bound);
        out.residual_rvr = std::min(out.residual_rvr, r * sig.vr[i] - bound);
    }

    if (previous != nullptr && previous->t < now.t && static_cast<int>(previous->w.size()) == sg.nodes()) {
        const double dt = now.t - previous->t;
        const double coeff = M * consts.k * consts.C37;
        out.scale_wt = 0.0;
        out.residual_wt = INFINITY;
        for (int j = 1; j < Ns; ++j) {
            const double s = sg.s(j);
            const double wt = (w[j] - previous->w[j]) / dt;
            const double diffusion = 4.0 * s * (w[j + 1] - 2.0 * w[j] + w[j - 1]) / (hs * hs);
            const double ws = std::max(0.0, (w[j + 1] - w[j]) / hs);
            const double bound =
                coeff * std::pow(s, 0.5 * (beta - 1.0)) * w[j] * std::pow(ws, beta) / (1.0 + I[j]);
            out.scale_wt = std::max({out.scale_wt, std::abs(wt - diffusion), bound});
            out.residual_wt = std::min(out.residual_wt, wt - diffusion - bound);
        }
    }
    return out;
}

FunctionalSample check_pointwise_bounds(const MassState& state, const MassState* previous,
                                        const BlowupConstants& consts, const ModelParams& params)
{
    const MonitorView now{state.t, state.w, &state.signal};
    MonitorView before;
    if (previous != nullptr)
        before = MonitorView{previous->t, previous->w, &previous->signal};
    FunctionalSample out = check_pointwise_bounds(now, previous ? &before : nullptr, *state.sgrid, *state.rgrid,
                                                  consts, params);
    out.sup_u = state.sup_u();
    out.mass = state.m0;
    out.vmax = state.signal.max_v();
    return out;
}

double blowup_time_bound(const BlowupConstants& consts, const ModelParams& params)
{
    const double arg = consts.m0 * std::pow(consts.R, 2.0 * (1.0 - consts.gamma)) /
                       (2.0 * std::numbers::pi * (1.0 - consts.gamma) * consts.phi0);
    if (!(arg > 1.0))
        throw std::domain_error("blowup_time_bound: phi0 is at or above its supremum");
    const double c45 = consts.c45(params.M);
    if (!(c45 > 0.0))
        throw std::domain_error("blowup_time_bound: C45 must be positive");
    return std::log(arg) / c45;
}

}  // namespace radchemo
