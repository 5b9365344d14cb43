#include "radchemo.h"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kError = 1, kInconclusive = 2 };

const char* label(rc_classification c)
{
    switch (c) {
    case RC_BOUNDED:
        return "BOUNDED";
    case RC_BLOWUP:
        return "BLOWUP";
    case RC_INCONCLUSIVE:
        break;
    }
    return "INCONCLUSIVE";
}

// Shortest round-trip decimal; integral values keep one decimal place.
std::string shortest(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos)
        s += ".0";
    return s;
}

std::string brief(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

int report_error(const char* context)
{
    std::fprintf(stderr, "radchemo %s: %s\n", context, rc_last_error());
    return kError;
}

struct Session {
    rc_config* config = nullptr;
    ~Session() { rc_config_free(config); }

    int load(const std::string& path)
    {
        if (rc_config_load_file(path.c_str(), &config) != RC_OK) {
            std::fprintf(stderr, "%s\n", rc_last_error());
            return kError;
        }
        if (const char* dir = std::getenv("RADCHEMO_OUT"); dir && *dir) {
            if (rc_config_set_output_dir(config, dir) != RC_OK)
                return report_error("RADCHEMO_OUT");
        }
        return kOk;
    }

    rc_solver solver(const std::string& flag) const
    {
        if (flag == "masspde")
            return RC_SOLVER_MASSPDE;
        if (flag == "primitive")
            return RC_SOLVER_PRIMITIVE;
        const int configured = rc_config_solver(config);
        return configured < 0 ? RC_SOLVER_PRIMITIVE : static_cast<rc_solver>(configured);
    }
};

int cmd_run(const std::string& path, const std::string& solver_flag, bool write)
{
    Session s;
    if (int rc = s.load(path))
        return rc;
    rc_outcome* out = nullptr;
    if (rc_run(s.config, s.solver(solver_flag), write ? 1 : 0, &out) != RC_OK)
        return report_error("run");

    const rc_classification c = rc_outcome_classification(out);
    double tb = 0.0;
    if (c == RC_BLOWUP && rc_outcome_blowup_time(out, &tb))
        std::printf("BLOWUP t≈%s\n", brief(tb).c_str());
    else if (c == RC_BOUNDED)
        std::printf("BOUNDED t=%s\n", shortest(rc_outcome_t_final(out)).c_str());
    else
        std::printf("INCONCLUSIVE t=%s (%s)\n", shortest(rc_outcome_t_final(out)).c_str(), rc_outcome_detail(out));
    std::printf("sup_u_max=%s mass_drift=%s\n", brief(rc_outcome_sup_u_max(out)).c_str(),
                brief(rc_outcome_mass_drift(out)).c_str());
    double bound = 0.0;
    if (rc_outcome_blowup_time_bound(out, &bound))
        std::printf("blowup_time_bound=%s\n", brief(bound).c_str());
    if (write)
        std::printf("results in %s\n", rc_config_output_dir(s.config));
    rc_outcome_free(out);
    return c == RC_INCONCLUSIVE ? kInconclusive : kOk;
}

int cmd_sweep(const std::string& path, const std::string& solver_flag, const std::vector<double>& betas,
              const std::vector<double>& Ms, int parallel, bool write)
{
    Session s;
    if (int rc = s.load(path))
        return rc;
    rc_sweep* sw = nullptr;
    if (rc_sweep_run(s.config, s.solver(solver_flag), betas.data(), betas.size(), Ms.data(), Ms.size(), parallel,
                     write ? 1 : 0, &sw) != RC_OK)
        return report_error("sweep");
    std::printf("%-10s %-12s %-13s %s\n", "beta", "M", "class", "t_blowup");
    for (size_t i = 0; i < rc_sweep_row_count(sw); ++i) {
        rc_sweep_row row;
        rc_sweep_get_row(sw, i, &row);
        std::printf("%-10s %-12s %-13s %s\n", brief(row.beta).c_str(), brief(row.M).c_str(), label(row.classification),
                    std::isnan(row.t_blowup) ? "-" : brief(row.t_blowup).c_str());
    }
    if (write)
        std::printf("results in %s\n", rc_config_output_dir(s.config));
    rc_sweep_free(sw);
    return kOk;
}

int cmd_mstar(const std::string& path, const std::string& solver_flag, double lo, double hi, int iters, bool write)
{
    Session s;
    if (int rc = s.load(path))
        return rc;
    rc_mstar_result r;
    if (rc_mstar_run(s.config, s.solver(solver_flag), lo, hi, iters, write ? 1 : 0, &r) != RC_OK)
        return report_error("mstar");
    std::printf("M* ∈ [%s, %s]\n", shortest(r.bracket_lo).c_str(), shortest(r.bracket_hi).c_str());
    std::printf("runs=%zu iterations=%d audit=%s\n", r.runs, r.iterations, r.audit_ok ? "ok" : "failed");
    if (!r.audit_ok)
        std::printf("INCONCLUSIVE: classification is not monotone along the bisection trace\n");
    if (write)
        std::printf("results in %s\n", rc_config_output_dir(s.config));
    return r.verdict == RC_INCONCLUSIVE ? kInconclusive : kOk;
}

int cmd_compare(const std::string& path, bool write)
{
    Session s;
    if (int rc = s.load(path))
        return rc;
    rc_compare_result r;
    if (rc_compare_run(s.config, write ? 1 : 0, &r) != RC_OK)
        return report_error("compare");
    std::printf("primitive=%s masspde=%s max_rel_discrepancy=%s points=%zu\n", label(r.primitive), label(r.masspde),
                brief(r.max_rel_discrepancy).c_str(), r.points);
    if (!std::isnan(r.blowup_rel_diff))
        std::printf("t_blowup primitive=%s masspde=%s rel_diff=%s\n", brief(r.t_blowup_primitive).c_str(),
                    brief(r.t_blowup_masspde).c_str(), brief(r.blowup_rel_diff).c_str());
    if (write)
        std::printf("results in %s\n", rc_config_output_dir(s.config));
    return r.primitive == RC_INCONCLUSIVE || r.masspde == RC_INCONCLUSIVE ? kInconclusive : kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Radial repulsion-consumption chemotaxis experiments"};
    app.set_version_flag("--version", std::string(rc_version()));
    app.require_subcommand(1);

    std::string config;
    std::string solver;
    bool no_write = false;
    const std::vector<std::string> solvers{"primitive", "masspde"};

    auto* run = app.add_subcommand("run", "classify one configuration");
    run->add_option("config", config, "configuration file")->required();
    run->add_option("--solver", solver, "primitive or masspde (default: config, else primitive)")
        ->check(CLI::IsMember(solvers));
    run->add_flag("--no-write", no_write, "skip samples.csv and manifest.json");

    std::vector<double> betas;
    std::vector<double> Ms;
    int parallel = 1;
    auto* sweep = app.add_subcommand("sweep", "classify a (beta, M) grid");
    sweep->add_option("config", config, "configuration file")->required();
    sweep->add_option("--solver", solver)->check(CLI::IsMember(solvers));
    sweep->add_option("--beta", betas, "beta values")->delimiter(',')->required();
    sweep->add_option("--M", Ms, "boundary levels")->delimiter(',')->required();
    sweep->add_option("--parallel", parallel, "concurrent runs")->check(CLI::PositiveNumber);
    sweep->add_flag("--no-write", no_write);

    double lo = 0.0;
    double hi = 0.0;
    int iters = 8;
    auto* mstar = app.add_subcommand("mstar", "bisect the boundary level between bounded and blow-up runs");
    mstar->add_option("config", config, "configuration file")->required();
    mstar->add_option("--solver", solver)->check(CLI::IsMember(solvers));
    mstar->add_option("--lo", lo, "M with a non-blow-up run")->required();
    mstar->add_option("--hi", hi, "M with a blow-up run")->required();
    mstar->add_option("--iters", iters, "bisection steps")->check(CLI::NonNegativeNumber);
    mstar->add_flag("--no-write", no_write);

    auto* compare = app.add_subcommand("compare", "run both formulations and compare densities");
    compare->add_option("config", config, "configuration file")->required();
    compare->add_flag("--no-write", no_write);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kError;
    }

    if (*run)
        return cmd_run(config, solver, !no_write);
    if (*sweep)
        return cmd_sweep(config, solver, betas, Ms, parallel, !no_write);
    if (*mstar)
        return cmd_mstar(config, solver, lo, hi, iters, !no_write);
    return cmd_compare(config, !no_write);
}
