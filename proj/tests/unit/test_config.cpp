#include "oracles.hpp"

#include "radchemo/config.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

using namespace radchemo;

namespace {

const char* kValid = R"({
  "model": {"n": 2, "R": 1.0, "tau": 0, "M": 5.0, "T_end": 10.0},
  "sensitivity": {"family": "PowerShifted", "beta": 0.5, "coeff": 1.0},
  "initial": {"profile": "gaussian", "params": {"amplitude": 10.0, "width": 0.2}},
  "grid": {"N_r": 512, "N_s": 4096},
  "time": {"dt_init": 1e-6, "dt_min_factor": 1e-12, "sample_dt": 0.1},
  "functionals": {"enable": true},
  "output": {"dir": "out/x"}
})";

std::string error_of(const std::string& text)
{
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("valid configuration")
{
    const RunConfig c = parse_config(kValid);
    CHECK(c.model.M == 5.0);
    CHECK(c.model.sensitivity.family == SensitivityFamily::PowerShifted);
    CHECK(c.N_r == 512);
    CHECK(c.N_s == 4096);
    CHECK(c.time.dt_init == 1e-6);
    CHECK(c.output_dir == "out/x");
    CHECK_FALSE(c.solver.has_value());
    CHECK_FALSE(c.gamma.has_value());
    const auto* g = std::get_if<profile::Gaussian>(&c.initial);
    REQUIRE(g != nullptr);
    CHECK(g->amplitude == 10.0);
}

TEST_CASE("unknown keys are rejected with their line")
{
    std::string text = kValid;
    text.replace(text.find("\"N_s\""), 5, "\"N_x\"");
    CHECK(error_of(text).rfind("cfg.json:5:", 0) == 0);
    CHECK(error_of(text).find("N_x") != std::string::npos);

    std::string top = kValid;
    top.insert(top.rfind('}'), ",\n  \"extra\": 1\n");
    CHECK(error_of(top).rfind("cfg.json:10:", 0) == 0);
}

TEST_CASE("invalid values are anchored to their line")
{
    std::string text = kValid;
    text.replace(text.find("\"tau\": 0"), 8, "\"tau\": 3");
    CHECK(error_of(text).rfind("cfg.json:2:", 0) == 0);

    std::string fam = kValid;
    fam.replace(fam.find("PowerShifted"), 12, "Logistic");
    CHECK(error_of(fam).rfind("cfg.json:3:", 0) == 0);

    std::string missing = kValid;
    missing.replace(missing.find("\"M\": 5.0, "), 10, "");
    CHECK(error_of(missing).find("M") != std::string::npos);
}

TEST_CASE("malformed JSON reports a line")
{
    std::string text = kValid;
    text.replace(text.find("\"grid\""), 6, "grid");
    const std::string e = error_of(text);
    CHECK(e.rfind("cfg.json:5: malformed JSON", 0) == 0);
}

TEST_CASE("canonical JSON round trips")
{
    const RunConfig c = parse_config(kValid);
    const RunConfig again = parse_config(c.to_json().dump());
    CHECK(again.to_json() == c.to_json());
    CHECK(to_string(Solver::MassPDE) == "masspde");
    CHECK(solver_from_string("primitive") == Solver::Primitive);
    CHECK_THROWS_AS(solver_from_string("spectral"), ConfigError);
}

TEST_CASE("Gaussian amplitude for a prescribed mass")
{
    for (int n : {2, 3}) {
        const double a = gaussian_amplitude_for_mass(n, 1.0, 0.2, std::numbers::pi);
        const double area = n == 2 ? 2 * std::numbers::pi : 4 * std::numbers::pi;
        const double mass = area * oracle::simpson(
                                       [&](double r) { return std::pow(r, n - 1) * a * std::exp(-r * r / 0.08); },
                                       0.0, 1.0, 1'000'000);
        CHECK(mass == doctest::Approx(std::numbers::pi).epsilon(1e-10));
    }
}

TEST_CASE("profile files resolve against the configuration directory")
{
    const auto dir = std::filesystem::temp_directory_path() / "radchemo_unit_profile";
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "u0.csv");
        csv << "r,u0\n0,2\n0.5,2\n1,2\n";
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"model": {"M": 1, "T_end": 1},
          "sensitivity": {"family": "PowerPure", "beta": 2},
          "initial": {"file": "u0.csv"}})";
    }
    const RunConfig c = load_config((dir / "cfg.json").string());
    const auto* t = std::get_if<profile::Tabulated>(&c.initial);
    REQUIRE(t != nullptr);
    CHECK(t->u.size() == 3);
    CHECK(std::filesystem::path(c.initial_spec.at("file").get<std::string>()).is_absolute());

    CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);
}
