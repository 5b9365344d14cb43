#include "oracles.hpp"

#include "radchemo/functionals.hpp"
#include "radchemo/masspde.hpp"
#include "radchemo/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace radchemo;

namespace {

constexpr double kA = 10.0;
constexpr double kW = 0.2;

std::vector<double> gaussian_nodal(const RadialGrid& g)
{
    std::vector<double> u(g.nodes());
    for (int i = 0; i < g.nodes(); ++i)
        u[i] = kA * std::exp(-g.r(i) * g.r(i) / (2 * kW * kW));
    return u;
}

std::vector<double> linear_w(const SGrid& sg, double c)
{
    std::vector<double> w(sg.nodes());
    for (int j = 0; j < sg.nodes(); ++j)
        w[j] = 0.5 * c * sg.s(j);
    return w;
}

}  // namespace

TEST_CASE("w0 of a constant density is c s / 2")
{
    const RadialGrid rg(2, 1.3, 128);
    const SGrid sg(1.3, 512);
    const std::vector<double> w = mass_profile_on_s(std::vector<double>(rg.nodes(), 3.0), rg, sg);
    for (int j = 0; j < sg.nodes(); ++j)
        CHECK(w[j] == doctest::Approx(1.5 * sg.s(j)).epsilon(1e-12));
    CHECK(2 * std::numbers::pi * w.back() == doctest::Approx(std::numbers::pi * 1.69 * 3.0));
}

TEST_CASE("w0 of a Gaussian against a fine quadrature")
{
    const RadialGrid rg(2, 1.0, 4096);
    const SGrid sg(1.0, 4096);
    const std::vector<double> w = mass_profile_on_s(gaussian_nodal(rg), rg, sg);
    const double top = oracle::gaussian_w(kA, kW, 1.0);
    double worst = 0.0;
    for (int j = 1; j < sg.nodes(); j += 97) {
        const double rho = std::sqrt(sg.s(j));
        const double ref = oracle::simpson([](double r) { return r * kA * std::exp(-r * r / (2 * kW * kW)); }, 0.0,
                                           rho, 1'000'000);
        CHECK(ref == doctest::Approx(oracle::gaussian_w(kA, kW, sg.s(j))).epsilon(1e-12));
        worst = std::max(worst, std::abs(w[j] - ref) / top);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("phi of power-law profiles")
{
    const SGrid sg(1.0, 4096);
    const double gamma = 1.0 / 12.0;
    const double c = 2.0;
    CHECK(eval_phi(linear_w(sg, c), sg, gamma) == doctest::Approx(0.5 * c / (2.0 - gamma)).epsilon(1e-6));

    std::vector<double> flat(sg.nodes(), 0.75);
    flat[0] = 0.0;
    // All mass at the origin; the first cell ramps from 0, so compare to first order in hs.
    const double exact = 0.75 / (1.0 - gamma);
    CHECK(std::abs(eval_phi(flat, sg, gamma) - exact) / exact < 2.0 * std::pow(sg.hs(), 1.0 - gamma));
}

TEST_CASE("phi and psi of a Gaussian against singular quadrature oracles")
{
    const SGrid sg(1.0, 4096);
    std::vector<double> w(sg.nodes());
    for (int j = 0; j < sg.nodes(); ++j)
        w[j] = oracle::gaussian_w(kA, kW, sg.s(j));
    const double gamma = 1.0 / 12.0;
    const double beta = 2.0;

    const double phi_ref =
        oracle::singular_integral([&](double s) { return oracle::gaussian_w(kA, kW, s); }, gamma, 1.0, 1'000'000);
    CHECK(std::abs(eval_phi(w, sg, gamma) - phi_ref) / phi_ref < 1e-6);

    const double p = 0.5 * (beta - 1.0) - gamma;
    const double psi_ref = oracle::simpson(
        [&](double s) {
            return std::pow(s, p) * oracle::gaussian_w(kA, kW, s) * std::pow(oracle::gaussian_ws(kA, kW, s), beta);
        },
        0.0, 1.0, 1'000'000);
    CHECK(std::abs(eval_psi(w, sg, gamma, beta) - psi_ref) / psi_ref < 1e-5);
}

TEST_CASE("psi: closed forms and homogeneity")
{
    const SGrid sg(1.0, 4096);
    const double gamma = 1.0 / 12.0;
    for (double beta : {1.5, 2.0, 3.0}) {
        const double c = 1.7;
        const double e = 0.5 * (beta + 3.0) - gamma;
        CHECK(eval_psi(linear_w(sg, c), sg, gamma, beta) == doctest::Approx(std::pow(0.5 * c, beta + 1.0) / e).epsilon(1e-5));

        std::vector<double> w(sg.nodes());
        for (int j = 0; j < sg.nodes(); ++j)
            w[j] = oracle::gaussian_w(kA, kW, sg.s(j));
        const double lambda = 1.37;
        std::vector<double> scaled = w;
        for (double& x : scaled)
            x *= lambda;
        CHECK(eval_psi(scaled, sg, gamma, beta) ==
              doctest::Approx(std::pow(lambda, beta + 1.0) * eval_psi(w, sg, gamma, beta)).epsilon(1e-13));
    }
    CHECK(eval_psi(std::vector<double>(sg.nodes(), 0.0), sg, gamma, 2.0) == 0.0);
}

TEST_CASE("phi and psi converge under s refinement")
{
    const double gamma = 1.0 / 12.0;
    const double phi_ref =
        oracle::singular_integral([&](double s) { return oracle::gaussian_w(kA, kW, s); }, gamma, 1.0, 1'000'000);
    double prev = 0.0;
    for (int Ns : {256, 512, 1024}) {
        const SGrid sg(1.0, Ns);
        std::vector<double> w(sg.nodes());
        for (int j = 0; j < sg.nodes(); ++j)
            w[j] = oracle::gaussian_w(kA, kW, sg.s(j));
        const double err = std::abs(eval_phi(w, sg, gamma) - phi_ref);
        if (prev > 0.0)
            CHECK(prev / err >= 2.0);
        prev = err;
    }
}

TEST_CASE("pointwise bounds: degenerate equality cases")
{
    ModelParams p;
    p.M = 2.0;
    p.sensitivity = {SensitivityFamily::PowerPure, 2.0, 1.0};
    const RadialGrid rg(2, 1.0, 128);
    const SGrid sg(1.0, 512);
    BlowupConstants c;
    c.beta = 2.0;
    c.k = 1.0;
    c.R = 1.0;
    c.gamma = 1.0 / 12.0;
    c.C37 = c.C38 = c.C40 = 1.0;
    c.m0 = 0.0;

    const std::vector<double> w(sg.nodes(), 0.0);
    const SignalField sig = solve_elliptic(std::vector<double>(rg.nodes(), 0.0), p.M, rg);
    const MonitorView view{0.0, w, &sig};
    const FunctionalSample s = check_pointwise_bounds(view, nullptr, sg, rg, c, p);
    CHECK(s.residual_vlower == doctest::Approx(0.0).scale(1e-3));
    CHECK(s.residual_rvr == 0.0);
    CHECK(std::isnan(s.residual_wt));
    CHECK(s.within(0.01));

    p.tau = 1;
    CHECK_THROWS_AS(check_pointwise_bounds(view, nullptr, sg, rg, c, p), UnsupportedRegime);
}

TEST_CASE("pointwise bounds: the boundary node meets the v lower bound with equality")
{
    ModelParams p;
    p.M = 50.0;
    p.sensitivity = {SensitivityFamily::PowerPure, 2.0, 1.0};
    auto rg = std::make_shared<const RadialGrid>(2, 1.0, 256);
    auto sg = std::make_shared<const SGrid>(1.0, 4096);
    const InitialData d = make_initial_data(p, profile::Gaussian{kA, kW}, *rg);
    const BlowupConstants c = compute_constants(p, d, *rg);
    const MassState st = transform_initial(d.u0, rg, sg, p.M);
    // v - M exp(-sqrt(a ln(R/r))) at r = R is v(R) - M = 0.
    CHECK(st.signal.v.back() - p.M == 0.0);
    const FunctionalSample s = check_pointwise_bounds(st, nullptr, c, p);
    CHECK(s.residual_vlower <= 1e-12);
    CHECK(s.within(0.01));
    CHECK(s.phi == doctest::Approx(c.phi0).epsilon(1e-5));
}

TEST_CASE("blow-up time bound")
{
    ModelParams p;
    p.M = 50.0;
    p.sensitivity = {SensitivityFamily::PowerPure, 2.0, 1.0};
    const RadialGrid rg(2, 1.0, 256);
    const InitialData d = make_initial_data(p, profile::Gaussian{kA, kW}, rg);
    BlowupConstants c = compute_constants(p, d, rg);

    const double t50 = blowup_time_bound(c, p);
    CHECK(t50 > 0.0);
    ModelParams doubled = p;
    doubled.M = 100.0;
    CHECK(blowup_time_bound(c, doubled) == doctest::Approx(0.5 * t50).epsilon(1e-12));

    const double sup = c.m0 / (2 * std::numbers::pi * (1 - c.gamma));
    c.phi0 = sup * (1.0 - 1e-9);
    CHECK(blowup_time_bound(c, p) < 1e-6);
    c.phi0 = sup;
    CHECK_THROWS_AS(blowup_time_bound(c, p), std::domain_error);
}

TEST_CASE("mass formulation: constant data and decoupled diffusion")
{
    ModelParams p;
    p.M = 1.0;
    p.sensitivity = {SensitivityFamily::PowerShifted, 1.0, 0.0};
    auto rg = std::make_shared<const RadialGrid>(2, 1.0, 128);
    auto sg = std::make_shared<const SGrid>(1.0, 1024);

    MassState st = transform_initial(std::vector<double>(rg->nodes(), 2.0), rg, sg, p.M);
    CHECK(st.m0 == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(st.w.back() == st.m0 / (2 * std::numbers::pi));
    for (int j = 0; j < sg->nodes(); ++j)
        CHECK(st.w[j] == doctest::Approx(sg->s(j)).epsilon(1e-12));
    for (double u : reconstruct_u(st))
        CHECK(u == doctest::Approx(2.0).epsilon(1e-10));

    StepControls ctl;
    const std::vector<double> before = st.w;
    REQUIRE(step_w(st, p, 1e-3, ctl).status == StepStatus::Accepted);
    for (int j = 0; j < sg->nodes(); ++j)
        CHECK(st.w[j] == doctest::Approx(before[j]).epsilon(1e-12));

    // A Gaussian relaxes to the linear profile m0 s / (2 pi R^2).
    std::vector<double> u0(rg->nodes());
    for (int i = 0; i < rg->nodes(); ++i)
        u0[i] = kA * std::exp(-rg->r(i) * rg->r(i) / (2 * kW * kW));
    MassState g = transform_initial(u0, rg, sg, p.M);
    ctl.dt_max = 0.05;
    const TerminationReason r = run_until(g, p, 20.0, ctl);
    CHECK(r.kind == TerminationKind::ReachedTStop);
    for (int j = 0; j < sg->nodes(); ++j)
        CHECK(g.w[j] == doctest::Approx(g.boundary_value() * sg->s(j)).epsilon(1e-8).scale(g.boundary_value()));
    CHECK(g.w[0] == 0.0);
}

TEST_CASE("mass formulation: round trip of a smooth density")
{
    auto rg = std::make_shared<const RadialGrid>(2, 1.0, 256);
    std::vector<double> u0(rg->nodes());
    for (int i = 0; i < rg->nodes(); ++i)
        u0[i] = kA * std::exp(-rg->r(i) * rg->r(i) / (2 * kW * kW));
    double prev = 0.0;
    for (int Ns : {1024, 2048, 4096}) {
        auto sg = std::make_shared<const SGrid>(1.0, Ns);
        const MassState st = transform_initial(u0, rg, sg, 1.0);
        const std::vector<double> u = reconstruct_u(st);
        double err = 0.0;
        for (int i = 0; i < rg->nodes(); ++i)
            err = std::max(err, std::abs(u[i] - u0[i]));
        CHECK(err / kA < 50.0 * sg->hs());
        if (prev > 0.0)
            CHECK(prev / err > 1.8);
        prev = err;
    }
}

TEST_CASE("mass formulation: preconditions and monotonicity in a blow-up run")
{
    ModelParams p;
    p.M = 50.0;
    p.sensitivity = {SensitivityFamily::PowerPure, 2.0, 1.0};
    auto rg = std::make_shared<const RadialGrid>(2, 1.0, 128);
    auto sg = std::make_shared<const SGrid>(1.0, 4096);
    const InitialData d = make_initial_data(p, profile::Gaussian{kA, kW}, *rg);
    MassState st = transform_initial(d.u0, rg, sg, p.M);

    ModelParams parabolic = p;
    parabolic.tau = 1;
    CHECK_THROWS_AS(step_w(st, parabolic, 1e-4, StepControls{}), ValidationError);
    CHECK_THROWS_AS(transform_initial(std::vector<double>(rg->nodes(), 0.0), rg, sg, 1.0), ValidationError);

    StepControls ctl;
    ctl.dt_init = 1e-7;
    ctl.blowup_ceiling = 1e3;
    bool monotone = true;
    const TerminationReason r = run_until(st, p, 1.0, ctl, [&](const MassState& s) {
        for (std::size_t j = 0; j + 1 < s.w.size(); ++j)
            monotone = monotone && s.w[j + 1] - s.w[j] >= -1e-10;
        monotone = monotone && s.w.front() == 0.0 && s.w.back() == s.boundary_value();
    });
    CHECK(r.kind == TerminationKind::BlowupSuspected);
    CHECK(monotone);
}
