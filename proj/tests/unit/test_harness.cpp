#include "radchemo/config.hpp"
#include "radchemo/harness.hpp"
#include "radchemo/result_store.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace radchemo;
namespace fs = std::filesystem;

namespace {

std::string blowup_json(double M, double T = 0.05, int N = 128, int Ns = 1024)
{
    std::ostringstream os;
    os << R"({"model": {"n": 2, "R": 1.0, "tau": 0, "M": )" << M << R"(, "T_end": )" << T << R"(},
  "sensitivity": {"family": "PowerPure", "beta": 2.0, "coeff": 1.0},
  "initial": {"profile": "gaussian", "params": {"amplitude": 10.0, "width": 0.2}},
  "grid": {"N_r": )" << N << R"(, "N_s": )" << Ns << R"(},
  "time": {"sample_dt": 0.01},
  "functionals": {"enable": false}})";
    return os.str();
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("radchemo_unit_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("richardson extrapolation")
{
    CHECK(richardson_extrapolate(1.1, 1.05) == doctest::Approx(1.0));
    CHECK(richardson_extrapolate(1.12, 1.03, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("classification of simple runs")
{
    SUBCASE("bounded, elliptic and parabolic signal")
    {
        for (int tau : {0, 1}) {
            RunConfig c = parse_config(R"({"model": {"n": 2, "R": 1, "tau": )" + std::to_string(tau) +
                                       R"(, "M": 5, "T_end": 10},
              "sensitivity": {"family": "PowerShifted", "beta": 0.5, "coeff": 1},
              "initial": {"profile": "gaussian", "params": {"mass": 3.141592653589793, "width": 0.2}},
              "grid": {"N_r": 256}})");
            const RunOutcome o = classify_run(c, Solver::Primitive);
            CAPTURE(tau);
            CHECK(o.classification == Classification::Bounded);
            CHECK(o.t_final == 10.0);
            CHECK_FALSE(o.blowup_time_estimate.has_value());
            for (const FunctionalSample& s : o.samples)
                CHECK(s.sup_u < o.blowup_ceiling);
            CHECK(o.samples.size() >= 101);
            CHECK(o.samples.front().t == 0.0);
            CHECK(o.samples.back().t == 10.0);
        }
    }
    SUBCASE("blow-up")
    {
        const RunConfig c = parse_config(blowup_json(1000.0, 1.0, 256, 65536));
        for (Solver s : {Solver::Primitive, Solver::MassPDE}) {
            const RunOutcome o = classify_run(c, s);
            CHECK(o.classification == Classification::Blowup);
            REQUIRE(o.blowup_time_estimate.has_value());
            CHECK(*o.blowup_time_estimate <= c.model.T_end);
            CHECK(*o.blowup_time_estimate <= o.t_final);
        }
    }
    SUBCASE("mass formulation rejects tau = 1")
    {
        RunConfig c = parse_config(blowup_json(10.0));
        c.model.tau = 1;
        CHECK_THROWS_WITH_AS(classify_run(c, Solver::MassPDE), "masspde requires tau=0, n=2", ConfigError);
    }
    SUBCASE("a step budget that runs out is inconclusive")
    {
        RunConfig c = parse_config(blowup_json(1.0));
        c.time.max_steps = 3;
        CHECK(classify_run(c, Solver::Primitive).classification == Classification::Inconclusive);
    }
}

TEST_CASE("bisection")
{
    const RunConfig c = parse_config(blowup_json(1.0));

    SUBCASE("bracket width halves each iteration")
    {
        const MStarResult r = bisect_mstar(c, Solver::Primitive, 0.1, 1000.0, 10);
        CHECK(r.iterations == 10);
        CHECK(r.bracket_hi - r.bracket_lo == doctest::Approx((1000.0 - 0.1) / 1024.0).epsilon(1e-12));
        CHECK(r.bracket_hi - r.bracket_lo == doctest::Approx(0.98).epsilon(0.01));
        CHECK(r.runs.size() == 12);
        CHECK(r.audit_ok);
        CHECK(r.verdict == Classification::Blowup);
        // Both ends correspond to completed runs.
        bool lo_run = false;
        bool hi_run = false;
        for (const MStarTrial& t : r.runs) {
            lo_run = lo_run || (t.M == r.bracket_lo && t.classification != Classification::Blowup);
            hi_run = hi_run || (t.M == r.bracket_hi && t.classification == Classification::Blowup);
        }
        CHECK(lo_run);
        CHECK(hi_run);
    }
    SUBCASE("zero iterations return the input bracket")
    {
        const MStarResult r = bisect_mstar(c, Solver::Primitive, 0.1, 1000.0, 0);
        CHECK(r.bracket_lo == 0.1);
        CHECK(r.bracket_hi == 1000.0);
    }
    SUBCASE("bad brackets")
    {
        CHECK_THROWS_AS(bisect_mstar(c, Solver::Primitive, 500.0, 1000.0, 2), BracketError);
        CHECK_THROWS_AS(bisect_mstar(c, Solver::Primitive, 0.1, 0.2, 2), BracketError);
        CHECK_THROWS_AS(bisect_mstar(c, Solver::Primitive, 2.0, 1.0, 2), BracketError);
        CHECK_THROWS_AS(bisect_mstar(c, Solver::Primitive, 0.1, 1000.0, -1), BracketError);
    }
}

TEST_CASE("sweep")
{
    RunConfig c = parse_config(blowup_json(1.0));
    const std::vector<double> betas{2.0, 0.5};
    const std::vector<double> Ms{1000.0, 0.5, 20.0};

    const std::vector<SweepRow> serial = sweep(c, Solver::Primitive, betas, Ms, 1);
    const std::vector<SweepRow> parallel = sweep(c, Solver::Primitive, betas, Ms, 4);
    REQUIRE(serial.size() == 6);
    CHECK(serial.front().beta == 0.5);
    CHECK(serial.front().M == 0.5);
    CHECK(serial.back().beta == 2.0);
    CHECK(serial.back().M == 1000.0);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        if (serial[i].beta == 0.5)
            CHECK(serial[i].classification == Classification::Bounded);
        CHECK(serial[i].grid_N == 128);
    }
    CHECK(serial.back().classification == Classification::Blowup);

    const fs::path a = scratch_dir("sweep_a");
    const fs::path b = scratch_dir("sweep_b");
    write_summary_csv((fs::create_directories(a), a / "summary.csv"), serial);
    write_summary_csv((fs::create_directories(b), b / "summary.csv"), parallel);
    CHECK(read_file(a / "summary.csv") == read_file(b / "summary.csv"));

    CHECK(sweep(c, Solver::Primitive, {}, Ms, 2).empty());

    // A failing cell is recorded, not thrown.
    const std::vector<double> bad_beta{-1.0};
    const std::vector<SweepRow> failed = sweep(c, Solver::Primitive, bad_beta, std::vector<double>{1.0}, 1);
    REQUIRE(failed.size() == 1);
    CHECK(failed[0].classification == Classification::Inconclusive);
}

TEST_CASE("compare with zero sensitivity")
{
    RunConfig c = parse_config(R"({"model": {"n": 2, "R": 1, "tau": 0, "M": 1, "T_end": 0.2},
      "sensitivity": {"family": "PowerShifted", "beta": 1, "coeff": 0},
      "initial": {"profile": "constant", "params": {"value": 2.0}},
      "grid": {"N_r": 128, "N_s": 1024}, "time": {"sample_dt": 0.05}})");
    const CompareReport r = compare_formulations(c);
    CHECK(r.primitive == Classification::Bounded);
    CHECK(r.masspde == Classification::Bounded);
    CHECK(r.series.size() == 4);
    CHECK(r.max_rel_discrepancy < 1e-6);
    CHECK_FALSE(r.blowup_rel_diff.has_value());
}

TEST_CASE("result store")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(NAN) == "nan");

    const RunConfig c = parse_config(blowup_json(1000.0, 0.05, 64));
    const RunOutcome o = classify_run(c, Solver::Primitive);
    const fs::path d1 = scratch_dir("run1");
    const fs::path d2 = scratch_dir("run2");
    write_run(d1, o);
    write_run(d2, classify_run(c, Solver::Primitive));
    const std::string csv = read_file(d1 / "samples.csv");
    CHECK(csv.rfind("t,phi,psi,sup_u,mass,vmax,residual_w_bound,residual_phi_bound,residual_vlower,"
                    "residual_rvr,residual_wt\n",
                    0) == 0);
    CHECK(csv == read_file(d2 / "samples.csv"));

    // The manifest loads as a configuration and reproduces the run.
    const RunConfig again = load_config((d1 / "manifest.json").string());
    nlohmann::json expected = base_manifest(c, Solver::Primitive);
    expected.erase("manifest");
    CHECK(again.to_json() == expected);
    const fs::path d3 = scratch_dir("run3");
    write_run(d3, classify_run(again, *again.solver));
    CHECK(read_file(d3 / "samples.csv") == csv);

    std::vector<SweepRow> rows{{0.5, 1.0, Classification::Bounded, std::nullopt, 128},
                               {2.0, 10.0, Classification::Blowup, 0.25, 128}};
    const fs::path d4 = scratch_dir("summary");
    fs::create_directories(d4);
    write_summary_csv(d4 / "summary.csv", rows);
    CHECK(read_file(d4 / "summary.csv") ==
          "beta,M,classification,t_blowup,grid_N\n0.5,1,BOUNDED,nan,128\n2,10,BLOWUP,0.25,128\n");
}
