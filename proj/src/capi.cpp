#include "radchemo.h"

#include "radchemo/config.hpp"
#include "radchemo/harness.hpp"
#include "radchemo/model.hpp"
#include "radchemo/result_store.hpp"
#include "radchemo/signal.hpp"
#include "radchemo/version.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

struct rc_config {
    radchemo::RunConfig cfg;
};

struct rc_outcome {
    radchemo::RunOutcome outcome;
};

struct rc_sweep {
    std::vector<radchemo::SweepRow> rows;
};

namespace {

thread_local std::string last_error;

class IoFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

rc_status fail(rc_status status, const std::string& message)
{
    last_error = message;
    return status;
}

template <class Fn>
rc_status guarded(Fn&& fn)
{
    try {
        last_error.clear();
        fn();
        return RC_OK;
    } catch (const radchemo::ConfigError& e) {
        return fail(RC_ERR_CONFIG, e.what());
    } catch (const radchemo::ValidationError& e) {
        return fail(RC_ERR_CONFIG, e.what());
    } catch (const radchemo::UnsupportedRegime& e) {
        return fail(RC_ERR_UNSUPPORTED, e.what());
    } catch (const radchemo::BracketError& e) {
        return fail(RC_ERR_BRACKET, e.what());
    } catch (const IoFailure& e) {
        return fail(RC_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RC_ERR_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(RC_ERR_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(RC_ERR_NUMERICAL, e.what());
    } catch (const std::exception& e) {
        return fail(RC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RC_ERR_INTERNAL, "unknown error");
    }
}

template <class Fn>
void writing(Fn&& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        throw IoFailure(std::string("writing results: ") + e.what());
    }
}

radchemo::Solver to_solver(rc_solver s)
{
    if (s == RC_SOLVER_PRIMITIVE)
        return radchemo::Solver::Primitive;
    if (s == RC_SOLVER_MASSPDE)
        return radchemo::Solver::MassPDE;
    throw std::invalid_argument("unknown solver id");
}

rc_classification to_c(radchemo::Classification c)
{
    switch (c) {
    case radchemo::Classification::Bounded:
        return RC_BOUNDED;
    case radchemo::Classification::Blowup:
        return RC_BLOWUP;
    case radchemo::Classification::Inconclusive:
        break;
    }
    return RC_INCONCLUSIVE;
}

char* duplicate(const std::string& s)
{
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what)
{
    if (p == nullptr)
        throw std::invalid_argument(std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* rc_version(void)
{
    static const std::string v = radchemo::version_string();
    return v.c_str();
}

const char* rc_last_error(void)
{
    return last_error.c_str();
}

rc_status rc_config_load_file(const char* path, rc_config** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto c = std::make_unique<rc_config>();
        c->cfg = radchemo::load_config(path);
        *out = c.release();
    });
}

rc_status rc_config_parse(const char* json_text, rc_config** out)
{
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        *out = nullptr;
        auto c = std::make_unique<rc_config>();
        c->cfg = radchemo::parse_config(json_text);
        *out = c.release();
    });
}

rc_status rc_config_set_output_dir(rc_config* config, const char* dir)
{
    return guarded([&] {
        require(config, "config");
        require(dir, "dir");
        if (*dir == '\0')
            throw std::invalid_argument("output directory must not be empty");
        config->cfg.output_dir = dir;
    });
}

const char* rc_config_output_dir(const rc_config* config)
{
    return config ? config->cfg.output_dir.c_str() : "";
}

int rc_config_solver(const rc_config* config)
{
    if (!config || !config->cfg.solver)
        return -1;
    return *config->cfg.solver == radchemo::Solver::Primitive ? RC_SOLVER_PRIMITIVE : RC_SOLVER_MASSPDE;
}

rc_status rc_config_to_json(const rc_config* config, char** out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = duplicate(config->cfg.to_json().dump(2));
    });
}

void rc_config_free(rc_config* config)
{
    delete config;
}

void rc_string_free(char* s)
{
    delete[] s;
}

rc_status rc_run(const rc_config* config, rc_solver solver, int write_outputs, rc_outcome** out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = nullptr;
        auto o = std::make_unique<rc_outcome>();
        o->outcome = radchemo::classify_run(config->cfg, to_solver(solver));
        if (write_outputs)
            writing([&] { radchemo::write_run(config->cfg.output_dir, o->outcome); });
        *out = o.release();
    });
}

rc_classification rc_outcome_classification(const rc_outcome* o)
{
    return o ? to_c(o->outcome.classification) : RC_INCONCLUSIVE;
}

double rc_outcome_t_final(const rc_outcome* o)
{
    return o ? o->outcome.t_final : NAN;
}

double rc_outcome_sup_u_final(const rc_outcome* o)
{
    return o ? o->outcome.sup_u_final : NAN;
}

double rc_outcome_sup_u_max(const rc_outcome* o)
{
    return o ? o->outcome.sup_u_max : NAN;
}

int rc_outcome_blowup_time(const rc_outcome* o, double* t)
{
    if (!o || !o->outcome.blowup_time_estimate)
        return 0;
    if (t)
        *t = *o->outcome.blowup_time_estimate;
    return 1;
}

int rc_outcome_blowup_time_bound(const rc_outcome* o, double* t)
{
    if (!o || !o->outcome.blowup_time_bound)
        return 0;
    if (t)
        *t = *o->outcome.blowup_time_bound;
    return 1;
}

double rc_outcome_mass_drift(const rc_outcome* o)
{
    return o ? o->outcome.mass_drift : NAN;
}

double rc_outcome_vmax(const rc_outcome* o)
{
    return o ? o->outcome.vmax_max : NAN;
}

const char* rc_outcome_detail(const rc_outcome* o)
{
    return o ? o->outcome.termination.detail.c_str() : "";
}

size_t rc_outcome_sample_count(const rc_outcome* o)
{
    return o ? o->outcome.samples.size() : 0;
}

rc_status rc_outcome_sample(const rc_outcome* o, size_t index, rc_sample* out)
{
    return guarded([&] {
        require(o, "outcome");
        require(out, "out");
        if (index >= o->outcome.samples.size())
            throw std::invalid_argument("sample index out of range");
        const radchemo::FunctionalSample& s = o->outcome.samples[index];
        *out = rc_sample{s.t,
                         s.phi,
                         s.psi,
                         s.sup_u,
                         s.mass,
                         s.vmax,
                         s.residual_w_bound,
                         s.residual_phi_bound,
                         s.residual_vlower,
                         s.residual_rvr,
                         s.residual_wt};
    });
}

rc_status rc_outcome_manifest(const rc_outcome* o, char** out)
{
    return guarded([&] {
        require(o, "outcome");
        require(out, "out");
        *out = duplicate(o->outcome.manifest.dump(2));
    });
}

void rc_outcome_free(rc_outcome* o)
{
    delete o;
}

rc_status rc_sweep_run(const rc_config* config, rc_solver solver, const double* betas, size_t n_beta,
                       const double* Ms, size_t n_M, int parallelism, int write_outputs, rc_sweep** out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = nullptr;
        if ((n_beta && !betas) || (n_M && !Ms))
            throw std::invalid_argument("parameter list must not be null");
        if (parallelism < 1)
            throw std::invalid_argument("parallelism must be at least 1");
        const radchemo::Solver s = to_solver(solver);
        auto result = std::make_unique<rc_sweep>();
        const std::span<const double> b(betas, n_beta);
        const std::span<const double> m(Ms, n_M);
        result->rows = radchemo::sweep(config->cfg, s, b, m, parallelism);
        if (write_outputs) {
            nlohmann::json manifest = radchemo::base_manifest(config->cfg, s);
            manifest["manifest"]["sweep"] = {{"beta", std::vector<double>(b.begin(), b.end())},
                                             {"M", std::vector<double>(m.begin(), m.end())}};
            writing([&] { radchemo::write_sweep(config->cfg.output_dir, result->rows, manifest); });
        }
        *out = result.release();
    });
}

size_t rc_sweep_row_count(const rc_sweep* s)
{
    return s ? s->rows.size() : 0;
}

rc_status rc_sweep_get_row(const rc_sweep* s, size_t index, rc_sweep_row* out)
{
    return guarded([&] {
        require(s, "sweep");
        require(out, "out");
        if (index >= s->rows.size())
            throw std::invalid_argument("row index out of range");
        const radchemo::SweepRow& r = s->rows[index];
        *out = rc_sweep_row{r.beta, r.M, to_c(r.classification), r.t_blowup.value_or(NAN), r.grid_N};
    });
}

void rc_sweep_free(rc_sweep* s)
{
    delete s;
}

rc_status rc_mstar_run(const rc_config* config, rc_solver solver, double lo, double hi, int iters,
                       int write_outputs, rc_mstar_result* out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        const radchemo::Solver s = to_solver(solver);
        const radchemo::MStarResult r = radchemo::bisect_mstar(config->cfg, s, lo, hi, iters);
        if (write_outputs) {
            nlohmann::json manifest = radchemo::base_manifest(config->cfg, s);
            manifest["manifest"]["mstar"] = {{"lo", lo},
                                             {"hi", hi},
                                             {"iterations", iters},
                                             {"bracket", {r.bracket_lo, r.bracket_hi}},
                                             {"audit_ok", r.audit_ok},
                                             {"verdict", radchemo::to_string(r.verdict)}};
            writing([&] { radchemo::write_mstar(config->cfg.output_dir, r, manifest); });
        }
        *out = rc_mstar_result{r.bracket_lo, r.bracket_hi, r.iterations, r.audit_ok ? 1 : 0, to_c(r.verdict),
                               r.runs.size()};
    });
}

rc_status rc_compare_run(const rc_config* config, int write_outputs, rc_compare_result* out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        const radchemo::CompareReport r = radchemo::compare_formulations(config->cfg);
        if (write_outputs) {
            nlohmann::json manifest = radchemo::base_manifest(config->cfg, radchemo::Solver::Primitive);
            manifest.erase("solver");
            manifest["manifest"]["solver"] = "primitive+masspde";
            auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(); };
            manifest["manifest"]["compare"] = {{"max_rel_discrepancy", r.max_rel_discrepancy},
                                               {"t_blowup_primitive", opt(r.t_blowup_primitive)},
                                               {"t_blowup_masspde", opt(r.t_blowup_masspde)},
                                               {"blowup_rel_diff", opt(r.blowup_rel_diff)}};
            writing([&] { radchemo::write_compare(config->cfg.output_dir, r, manifest); });
        }
        *out = rc_compare_result{r.max_rel_discrepancy,
                                 to_c(r.primitive),
                                 to_c(r.masspde),
                                 r.t_blowup_primitive.value_or(NAN),
                                 r.t_blowup_masspde.value_or(NAN),
                                 r.blowup_rel_diff.value_or(NAN),
                                 r.series.size()};
    });
}

rc_status rc_solve_elliptic(int n, double R, int cells, const double* u, double M, double* v_out)
{
    return guarded([&] {
        require(u, "u");
        require(v_out, "v_out");
        const radchemo::RadialGrid grid(n, R, cells);
        const radchemo::SignalField f =
            radchemo::solve_elliptic(std::span<const double>(u, grid.nodes()), M, grid);
        std::copy(f.v.begin(), f.v.end(), v_out);
    });
}

rc_status rc_sensitivity_eval(rc_family family, double beta, double coeff, double xi, double* out)
{
    return guarded([&] {
        require(out, "out");
        radchemo::SensitivitySpec S;
        if (family == RC_POWER_SHIFTED)
            S.family = radchemo::SensitivityFamily::PowerShifted;
        else if (family == RC_POWER_PURE)
            S.family = radchemo::SensitivityFamily::PowerPure;
        else
            throw std::invalid_argument("unknown sensitivity family");
        S.beta = beta;
        S.coeff = coeff;
        S.validate();
        *out = radchemo::evaluate_sensitivity(S, xi);
    });
}

}  // extern "C"
