#include "oracles.hpp"

#include "radchemo/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace radchemo;

namespace {

ModelParams pure(double beta, double k = 1.0, double M = 1.0, double R = 1.0)
{
    ModelParams p;
    p.R = R;
    p.M = M;
    p.sensitivity = {SensitivityFamily::PowerPure, beta, k};
    return p;
}

}  // namespace

TEST_CASE("sensitivity values")
{
    CHECK(evaluate_sensitivity({SensitivityFamily::PowerPure, 2.0, 1.0}, 3.0) == doctest::Approx(9.0));
    CHECK(evaluate_sensitivity({SensitivityFamily::PowerShifted, 0.5, 1.0}, 0.0) == 1.0);
    CHECK(evaluate_sensitivity({SensitivityFamily::PowerPure, 1.5, 2.0}, 4.0) == doctest::Approx(16.0));
    CHECK(evaluate_sensitivity({SensitivityFamily::PowerPure, 0.5, 1.0}, 0.0) == 0.0);
    CHECK_THROWS_AS(evaluate_sensitivity({SensitivityFamily::PowerPure, 2.0, 1.0}, -1e-3), std::domain_error);
}

TEST_CASE("sensitivity is nondecreasing")
{
    for (auto family : {SensitivityFamily::PowerPure, SensitivityFamily::PowerShifted}) {
        for (double beta : {0.25, 0.5, 1.0, 2.0, 3.5}) {
            const SensitivitySpec S{family, beta, 1.7};
            double prev = evaluate_sensitivity(S, 0.0);
            for (double xi = 1e-3; xi < 100.0; xi *= 1.3) {
                const double cur = evaluate_sensitivity(S, xi);
                CHECK(cur >= prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("family names round trip")
{
    CHECK(sensitivity_family_from_string(to_string(SensitivityFamily::PowerPure)) == SensitivityFamily::PowerPure);
    CHECK(sensitivity_family_from_string(to_string(SensitivityFamily::PowerShifted)) ==
          SensitivityFamily::PowerShifted);
    CHECK_THROWS_AS(sensitivity_family_from_string("Logistic"), ValidationError);
}

TEST_CASE("initial data from a constant profile")
{
    const ModelParams p = pure(2.0);
    const RadialGrid g(2, 1.0, 64);
    const InitialData d = make_initial_data(p, profile::Constant{1.0}, g);
    CHECK(d.m0 == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK_FALSE(d.v0.has_value());
    CHECK_THROWS_AS(make_initial_data(p, profile::Constant{0.0}, g), ValidationError);
}

TEST_CASE("initial data for tau = 1 carries v0 = M")
{
    ModelParams p = pure(2.0, 1.0, 3.0);
    p.tau = 1;
    const RadialGrid g(2, 1.0, 32);
    const InitialData d = make_initial_data(p, profile::Constant{1.0}, g);
    REQUIRE(d.v0.has_value());
    for (double v : *d.v0)
        CHECK(v == 3.0);
    std::vector<double> bad(g.nodes(), 3.0);
    bad.back() = 2.0;
    CHECK_THROWS_AS(make_initial_data(p, profile::Constant{1.0}, g, bad), ValidationError);
}

TEST_CASE("Gaussian mass against a fine quadrature")
{
    const double a = 10.0;
    const double w = 0.2;
    const double oracle = 2.0 * std::numbers::pi *
                          oracle::simpson([&](double r) { return r * a * std::exp(-r * r / (2 * w * w)); }, 0.0, 1.0,
                                          1'000'000);
    const ModelParams p = pure(2.0);
    double prev_err = 0.0;
    for (int N : {128, 256, 512}) {
        const RadialGrid g(2, 1.0, N);
        const double err = std::abs(make_initial_data(p, profile::Gaussian{a, w}, g).m0 - oracle);
        if (N == 512)
            CHECK(err / oracle < 1e-4);
        if (prev_err > 0.0)
            CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.15));
        prev_err = err;
    }
}

TEST_CASE("constants: closed forms at beta = 2, R = 1, m0 = pi")
{
    const ModelParams p = pure(2.0);
    const RadialGrid g(2, 1.0, 256);
    const InitialData d = make_initial_data(p, profile::Constant{1.0}, g);
    const BlowupConstants c = compute_constants(p, d, g);

    const long double m0 = std::numbers::pi_v<long double>;
    const long double c37 = 4.0L * std::exp(-m0 / (8.0L * std::numbers::pi_v<long double>));
    CHECK(c.C37 == doctest::Approx(static_cast<double>(c37)).epsilon(1e-13));
    CHECK(c.C37 == doctest::Approx(3.5300).epsilon(1e-4));
    CHECK(c.gamma == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(c.l == doctest::Approx(0.5 * ((2 * c.gamma + 1) + (2 + (2 * c.gamma - 3) / 4))));
    CHECK(c.C40 == doctest::Approx(c.C38 / (1.0 - c.gamma)));
    // w0 = s/2 gives phi0 = (1/2) / (2 - gamma).
    CHECK(c.phi0 == doctest::Approx(0.5 / (2.0 - c.gamma)).epsilon(1e-6));
}

TEST_CASE("constants: regime checks")
{
    const RadialGrid g(2, 1.0, 64);
    const InitialData d = make_initial_data(pure(2.0), profile::Constant{1.0}, g);
    CHECK_THROWS_AS(compute_constants(pure(1.0), d, g), UnsupportedRegime);
    ModelParams shifted = pure(2.0);
    shifted.sensitivity.family = SensitivityFamily::PowerShifted;
    CHECK_THROWS_AS(compute_constants(shifted, d, g), UnsupportedRegime);
    CHECK_THROWS_AS(compute_constants(pure(2.0), d, g, 1.0 / 6.0), std::domain_error);
    CHECK_THROWS_AS(compute_constants(pure(2.0), d, g, -0.01), std::domain_error);
    CHECK(compute_constants(pure(2.0), d, g, 0.1).gamma == 0.1);
}

TEST_CASE("constants: random parameters stay inside the admissible intervals")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> beta_d(1.05, 5.0);
    std::uniform_real_distribution<double> R_d(0.3, 3.0);
    std::uniform_real_distribution<double> c_d(0.1, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double beta = beta_d(rng);
        const double R = R_d(rng);
        const ModelParams p = pure(beta, 1.0, 10.0, R);
        const RadialGrid g(2, R, 64);
        const InitialData d = make_initial_data(p, profile::Constant{c_d(rng)}, g);
        const BlowupConstants c = compute_constants(p, d, g, std::nullopt, 256);
        CHECK(c.gamma > 0.0);
        CHECK(c.gamma < (beta - 1.0) / (4.0 * beta - 2.0));
        CHECK(c.l > 2.0 * c.gamma + 1.0);
        CHECK(c.l < 2.0 + (2.0 * c.gamma - beta - 1.0) / (2.0 * beta));
        for (double x : {c.C37, c.C38, c.C39, c.C40, c.C41, c.C42, c.C43, c.C44, c.C45, c.phi0})
            CHECK(x > 0.0);
    }
}

TEST_CASE("constants: the M threshold solves f_M >= 0 on [C44, inf)")
{
    const ModelParams p = pure(2.0, 1.0, 10.0);
    const RadialGrid g(2, 1.0, 256);
    const InitialData d = make_initial_data(p, profile::Gaussian{10.0, 0.2}, g);
    const BlowupConstants c = compute_constants(p, d, g);
    CHECK(c.f_M(c.mstar_bound, c.C44) == doctest::Approx(0.0).epsilon(1e-9).scale(c.C41));
    CHECK(c.f_M(0.99 * c.mstar_bound, c.C44) < 0.0);
    for (double z = c.C44; z < 1e6 * c.C44; z *= 3.0)
        CHECK(c.f_M(1.0001 * c.mstar_bound, z) >= 0.0);
    CHECK(c.c45(2.0 * p.M) == doctest::Approx(2.0 * c.C45));
}
