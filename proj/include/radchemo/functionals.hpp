#pragma once

#include "radchemo/grid.hpp"
#include "radchemo/masspde.hpp"
#include "radchemo/model.hpp"
#include "radchemo/signal.hpp"

#include <span>

namespace radchemo {

/// Diagnostics of one snapshot. Residuals are (bound side) - (bounded side);
/// each carries the magnitude of its bounding quantity as `scale_*`.
/// Unavailable entries are NaN.
struct FunctionalSample {
    double t = 0.0;
    double phi = NAN;
    double psi = NAN;
    double sup_u = NAN;
    double mass = NAN;
    double vmax = NAN;
    double residual_w_bound = NAN;
    double residual_phi_bound = NAN;
    double residual_vlower = NAN;
    double residual_rvr = NAN;
    double residual_wt = NAN;
    double scale_w_bound = NAN;
    double scale_phi_bound = NAN;
    double scale_vlower = NAN;
    double scale_rvr = NAN;
    double scale_wt = NAN;

    /// True when every available residual is >= -rel_tol * its scale.
    bool within(double rel_tol) const;
};

/// phi = int_0^{R^2} s^{-gamma} w ds.
double eval_phi(std::span<const double> w, const SGrid& sgrid, double gamma);
double eval_phi(const MassState& state, const BlowupConstants& consts);

/// psi = int_0^{R^2} s^{(beta-1)/2-gamma} w w_s^beta ds.
double eval_psi(std::span<const double> w, const SGrid& sgrid, double gamma, double beta);
double eval_psi(const MassState& state, const BlowupConstants& consts, double beta);

/// A snapshot of the mass profile on the s-grid with the elliptic signal of
/// the same density on the r-grid.
struct MonitorView {
    double t = 0.0;
    std::span<const double> w;
    const SignalField* signal = nullptr;
};

/// Fills phi, psi and the five residuals. `previous` (the preceding accepted
/// state) is needed for the backward difference w_t; without it residual_wt
/// stays NaN. Requires tau = 0, n = 2 and PowerPure with beta > 1.
FunctionalSample check_pointwise_bounds(const MonitorView& now, const MonitorView* previous, const SGrid& sgrid,
                                        const RadialGrid& rgrid, const BlowupConstants& consts,
                                        const ModelParams& params);

/// Same for a mass-formulation state; also fills sup_u, mass and vmax.
FunctionalSample check_pointwise_bounds(const MassState& state, const MassState* previous,
                                        const BlowupConstants& consts, const ModelParams& params);

/// (1/C45) ln(m0 R^{2(1-gamma)} / (2 pi (1-gamma) phi0)) at M = params.M.
/// Throws std::domain_error when the logarithm is not positive.
double blowup_time_bound(const BlowupConstants& consts, const ModelParams& params);

}  // namespace radchemo
