#include "radchemo/harness.hpp"

#include "radchemo/masspde.hpp"
#include "radchemo/quadrature.hpp"
#include "radchemo/version.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <thread>

namespace radchemo {

using nlohmann::json;

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::Bounded:
        return "BOUNDED";
    case Classification::Blowup:
        return "BLOWUP";
    case Classification::Inconclusive:
        return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

double richardson_extrapolate(double t_coarse, double t_fine, double order)
{
    return t_fine + (t_fine - t_coarse) / (std::pow(2.0, order) - 1.0);
}

namespace {

constexpr double kCollapseFactor = 1e3;
constexpr double kSampleGrowth = 1.25;

std::string shortest_decimal(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json optional_number(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

json constants_json(const BlowupConstants& c)
{
    return {{"gamma", c.gamma}, {"l", c.l},       {"C37", c.C37},   {"C38", c.C38},   {"C39", c.C39},
            {"C40", c.C40},     {"C41", c.C41},   {"C42", c.C42},   {"C43", c.C43},   {"C44", c.C44},
            {"C45", c.C45},     {"phi0", c.phi0}, {"m0", c.m0},     {"mstar_bound", c.mstar_bound}};
}

StepControls make_controls(const RunConfig& cfg, double sup0)
{
    StepControls c;
    c.dt_init = cfg.time.dt_init;
    c.dt_max = cfg.time.dt_max;
    c.dt_min = cfg.time.dt_min_factor * cfg.model.T_end;
    c.cfl = cfg.time.cfl.value_or(INFINITY);
    c.max_change = cfg.time.max_change;
    c.growth = cfg.time.growth;
    c.blowup_ceiling = cfg.time.blowup_factor * std::max(1.0, sup0);
    c.collapse_level = kCollapseFactor * sup0;
    c.max_steps = cfg.time.max_steps;
    return c;
}

bool monitors_apply(const RunConfig& cfg)
{
    const SensitivitySpec& S = cfg.model.sensitivity;
    return cfg.functionals_enable && cfg.model.n == 2 && cfg.model.tau == 0 &&
           S.family == SensitivityFamily::PowerPure && S.beta > 1.0 && S.coeff > 0.0;
}

// Per-step bookkeeping shared by both solvers.
class Recorder {
public:
    Recorder(const RunConfig& cfg, const StepControls& controls, double m0, const SyncHook& hook)
        : cfg_(cfg), controls_(controls), m0_(m0), hook_(hook)
    {
    }

    bool due(double t, double sup) const
    {
        return on_sync(t) || sup >= kSampleGrowth * last_sample_sup_;
    }

    bool on_sync(double t) const
    {
        const double dt = cfg_.time.sample_dt;
        return std::abs(t - std::round(t / dt) * dt) <= 1e-12 * std::max(1.0, t);
    }

    void step(double t, double sup, double mass, double vmax)
    {
        prev_t_ = cur_t_;
        prev_sup_ = cur_sup_;
        cur_t_ = t;
        cur_sup_ = sup;
        sup_max_ = std::max(sup_max_, sup);
        vmax_max_ = std::max(vmax_max_, vmax);
        mass_drift_ = std::max(mass_drift_, std::abs(mass - m0_) / m0_);
        if (!std::isnan(last_mass_))
            step_drift_ = std::max(step_drift_, std::abs(mass - last_mass_) / m0_);
        last_mass_ = mass;
    }

    void start(double sup, double mass, double vmax)
    {
        cur_t_ = 0.0;
        cur_sup_ = sup;
        sup_max_ = sup;
        vmax_max_ = vmax;
        last_mass_ = mass;
    }

    void record(FunctionalSample s)
    {
        last_sample_sup_ = s.sup_u;
        samples.push_back(std::move(s));
    }

    void sync(double t, std::span<const double> u) const
    {
        if (hook_ && on_sync(t))
            hook_(t, u);
    }

    std::optional<double> crossing_time(const TerminationReason& r) const
    {
        if (r.kind != TerminationKind::BlowupSuspected)
            return std::nullopt;
        const double C = controls_.blowup_ceiling;
        if (cur_sup_ >= C && prev_sup_ > 0.0 && prev_sup_ < C && cur_t_ > prev_t_) {
            const double theta = (std::log(C) - std::log(prev_sup_)) / (std::log(cur_sup_) - std::log(prev_sup_));
            return prev_t_ + theta * (cur_t_ - prev_t_);
        }
        return r.t;
    }

    void fill(RunOutcome& out) const
    {
        out.sup_u_max = sup_max_;
        out.vmax_max = vmax_max_;
        out.mass_drift = mass_drift_;
        out.step_mass_drift = step_drift_;
    }

    std::vector<FunctionalSample> samples;

private:
    const RunConfig& cfg_;
    const StepControls& controls_;
    double m0_;
    const SyncHook& hook_;
    double last_sample_sup_ = 0.0;
    double prev_t_ = 0.0, prev_sup_ = 0.0, cur_t_ = 0.0, cur_sup_ = 0.0;
    double sup_max_ = 0.0, vmax_max_ = 0.0;
    double mass_drift_ = 0.0, step_drift_ = 0.0;
    double last_mass_ = NAN;
};

FunctionalSample plain_sample(double t, double sup, double mass, double vmax)
{
    FunctionalSample s;
    s.t = t;
    s.sup_u = sup;
    s.mass = mass;
    s.vmax = vmax;
    return s;
}

TerminationReason run_primitive(const RunConfig& cfg, const InitialData& data,
                                const std::shared_ptr<const RadialGrid>& grid, const StepControls& controls,
                                const std::optional<BlowupConstants>& consts, Recorder& rec, RunOutcome& out)
{
    const ModelParams& params = cfg.model;
    RadialState state = make_radial_state(params, data, grid);
    std::shared_ptr<const SGrid> sgrid;
    if (consts)
        sgrid = std::make_shared<SGrid>(params.R, cfg.N_s);

    std::vector<double> prev_u;
    double prev_t = 0.0;
    auto sample = [&](const RadialState& s, bool with_prev) {
        FunctionalSample fs = plain_sample(s.t, s.sup_u(), s.mass(), s.signal.max_v());
        if (consts) {
            const std::vector<double> w = mass_profile_on_s(s.u, *grid, *sgrid);
            std::vector<double> wp;
            MonitorView now{s.t, w, &s.signal};
            MonitorView before;
            if (with_prev) {
                wp = mass_profile_on_s(prev_u, *grid, *sgrid);
                before = MonitorView{prev_t, wp, nullptr};
            }
            FunctionalSample m =
                check_pointwise_bounds(now, with_prev ? &before : nullptr, *sgrid, *grid, *consts, params);
            m.sup_u = fs.sup_u;
            m.mass = fs.mass;
            m.vmax = fs.vmax;
            fs = m;
        }
        rec.record(fs);
    };

    rec.start(state.sup_u(), state.mass(), state.signal.max_v());
    sample(state, false);
    prev_u = state.u;
    prev_t = state.t;

    const TerminationReason r = run_until(
        state, params, params.T_end, controls,
        [&](const RadialState& s) {
            const double sup = s.sup_u();
            rec.step(s.t, sup, s.mass(), s.signal.max_v());
            if (rec.due(s.t, sup))
                sample(s, true);
            rec.sync(s.t, s.u);
            prev_u = s.u;
            prev_t = s.t;
        },
        cfg.time.sample_dt);
    if (rec.samples.empty() || rec.samples.back().t != state.t) {
        try {
            sample(state, state.steps > 0 && prev_t < state.t);
        } catch (const std::exception&) {
        }
    }
    out.clamped_mass = state.clamped_mass;
    out.steps = state.steps;
    out.sup_u_final = state.sup_u();
    return r;
}

TerminationReason run_mass(const RunConfig& cfg, const InitialData& data,
                           const std::shared_ptr<const RadialGrid>& grid, const StepControls& controls,
                           const std::optional<BlowupConstants>& consts, Recorder& rec, RunOutcome& out)
{
    const ModelParams& params = cfg.model;
    auto sgrid = std::make_shared<SGrid>(params.R, cfg.N_s);
    MassState state = transform_initial(data.u0, grid, sgrid, params.M);

    MassState prev;
    bool have_prev = false;
    auto sample = [&](const MassState& s, bool with_prev) {
        if (consts) {
            rec.record(check_pointwise_bounds(s, with_prev ? &prev : nullptr, *consts, params));
        } else {
            rec.record(plain_sample(s.t, s.sup_u(), s.m0, s.signal.max_v()));
        }
    };

    rec.start(state.sup_u(), state.m0, state.signal.max_v());
    sample(state, false);
    prev = state;

    const TerminationReason r = run_until(
        state, params, params.T_end, controls,
        [&](const MassState& s) {
            const std::vector<double> u = reconstruct_u(s);
            const double sup = *std::max_element(u.begin(), u.end());
            rec.step(s.t, sup, 2.0 * std::numbers::pi * s.w.back(), s.signal.max_v());
            if (rec.due(s.t, sup))
                sample(s, true);
            rec.sync(s.t, u);
            prev = s;
            have_prev = true;
        },
        cfg.time.sample_dt);
    if (rec.samples.empty() || rec.samples.back().t != state.t) {
        try {
            sample(state, have_prev && prev.t < state.t);
        } catch (const std::exception&) {
        }
    }
    out.steps = state.steps;
    out.sup_u_final = state.sup_u();
    return r;
}

}  // namespace

json base_manifest(const RunConfig& config, Solver solver)
{
    RunConfig echo = config;
    echo.solver = solver;
    json m = echo.to_json();
    m["manifest"] = {
        {"code_version", version_string()},
        {"solver", to_string(solver)},
        {"tolerances",
         {{"residual_relative", kResidualTolerance},
          {"monotonicity", 1e-10},
          {"collapse_factor", kCollapseFactor},
          {"sample_growth", kSampleGrowth}}},
        {"choices",
         {{"v0", "v0 = M when tau = 1"},
          {"ws_endpoints", "second-order one-sided differences at s = 0 and s = R^2"},
          {"blowup_ceiling", "blowup_factor * max(1, ||u0||_inf)"},
          {"C40", "C38 (R^2)^(1-gamma) / (1-gamma)"},
          {"C41", "max{4 gamma (1-gamma) C42 + 4 (1-gamma) R^(-2 gamma) m0/(2 pi), max{2, sqrt(C39) C43} / (k C37)}"}}},
    };
    return m;
}

RunOutcome classify_run(const RunConfig& cfg, Solver solver, const SyncHook& hook)
{
    const ModelParams& params = cfg.model;
    if (solver == Solver::MassPDE && (params.tau != 0 || params.n != 2))
        throw ConfigError("masspde requires tau=0, n=2");
    params.validate();

    auto grid = std::make_shared<const RadialGrid>(params.n, params.R, cfg.N_r);
    const InitialData data = make_initial_data(params, cfg.initial, *grid);
    const StepControls controls = make_controls(cfg, data.sup_u0);

    RunOutcome out;
    out.solver = solver;
    out.m0 = data.m0;
    out.blowup_ceiling = controls.blowup_ceiling;
    out.v_bound = params.M;
    if (data.v0)
        out.v_bound = std::max(params.M, *std::max_element(data.v0->begin(), data.v0->end()));

    std::optional<BlowupConstants> consts;
    if (monitors_apply(cfg))
        consts = compute_constants(params, data, *grid, cfg.gamma, cfg.N_s);
    out.constants = consts;

    Recorder rec(cfg, controls, data.m0, hook);
    out.termination = solver == Solver::Primitive ? run_primitive(cfg, data, grid, controls, consts, rec, out)
                                                  : run_mass(cfg, data, grid, controls, consts, rec, out);
    rec.fill(out);
    out.samples = std::move(rec.samples);
    out.t_final = out.termination.t;

    switch (out.termination.kind) {
    case TerminationKind::ReachedTStop:
        out.classification = Classification::Bounded;
        break;
    case TerminationKind::BlowupSuspected:
        out.classification = Classification::Blowup;
        out.blowup_time_estimate = rec.crossing_time(out.termination);
        break;
    case TerminationKind::NumericalFailure:
        out.classification = Classification::Inconclusive;
        break;
    }

    if (consts) {
        try {
            out.blowup_time_bound = blowup_time_bound(*consts, params);
        } catch (const std::domain_error&) {
        }
    }

    if (cfg.time.richardson && out.classification == Classification::Blowup && cfg.N_r >= 32 && cfg.N_s >= 32) {
        RunConfig coarse = cfg;
        coarse.N_r = cfg.N_r / 2;
        coarse.N_s = cfg.N_s / 2;
        coarse.time.richardson = false;
        coarse.functionals_enable = false;
        const RunOutcome c = classify_run(coarse, solver);
        if (c.classification == Classification::Blowup && c.blowup_time_estimate) {
            out.blowup_time_coarse = c.blowup_time_estimate;
            out.blowup_time_richardson = richardson_extrapolate(*c.blowup_time_estimate, *out.blowup_time_estimate);
        }
    }

    out.manifest = base_manifest(cfg, solver);
    json& m = out.manifest["manifest"];
    m["controls"] = {{"dt_min", controls.dt_min},
                     {"blowup_ceiling", controls.blowup_ceiling},
                     {"collapse_level", controls.collapse_level}};
    m["constants"] = consts ? constants_json(*consts) : json(nullptr);
    m["outcome"] = {
        {"classification", to_string(out.classification)},
        {"termination", to_string(out.termination.kind)},
        {"detail", out.termination.detail},
        {"t_final", out.t_final},
        {"sup_u_final", out.sup_u_final},
        {"sup_u_max", out.sup_u_max},
        {"blowup_time_estimate", optional_number(out.blowup_time_estimate)},
        {"blowup_time_coarse", optional_number(out.blowup_time_coarse)},
        {"blowup_time_richardson", optional_number(out.blowup_time_richardson)},
        {"blowup_time_bound", optional_number(out.blowup_time_bound)},
        {"m0", out.m0},
        {"mass_drift", out.mass_drift},
        {"clamped_mass", out.clamped_mass},
        {"steps", out.steps},
    };
    return out;
}

MStarResult bisect_mstar(const RunConfig& config, Solver solver, double lo, double hi, int iters)
{
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw BracketError("bracket must satisfy 0 < lo < hi");
    if (iters < 0)
        throw BracketError("iterations must be nonnegative");

    auto trial = [&](double M) {
        RunConfig c = config;
        c.model.M = M;
        c.functionals_enable = false;
        const RunOutcome o = classify_run(c, solver);
        return MStarTrial{M, o.classification, o.blowup_time_estimate};
    };

    MStarResult res;
    res.runs.push_back(trial(lo));
    if (res.runs.back().classification == Classification::Blowup)
        throw BracketError("lower end M = " + shortest_decimal(lo) + " is classified BLOWUP");
    res.runs.push_back(trial(hi));
    if (res.runs.back().classification != Classification::Blowup)
        throw BracketError("upper end M = " + shortest_decimal(hi) + " is not classified BLOWUP");

    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        res.runs.push_back(trial(mid));
        if (res.runs.back().classification == Classification::Blowup)
            hi = mid;
        else
            lo = mid;
    }
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.iterations = iters;

    double highest_calm = -INFINITY;
    double lowest_blowup = INFINITY;
    for (const MStarTrial& t : res.runs) {
        if (t.classification == Classification::Blowup)
            lowest_blowup = std::min(lowest_blowup, t.M);
        else
            highest_calm = std::max(highest_calm, t.M);
    }
    res.audit_ok = highest_calm < lowest_blowup;
    res.verdict = res.audit_ok ? Classification::Blowup : Classification::Inconclusive;
    return res;
}

std::vector<SweepRow> sweep(const RunConfig& config, Solver solver, std::span<const double> betas,
                            std::span<const double> Ms, int parallelism)
{
    std::vector<std::pair<double, double>> cells;
    for (double b : betas)
        for (double M : Ms)
            cells.emplace_back(b, M);
    std::sort(cells.begin(), cells.end());

    const int grid_N = solver == Solver::Primitive ? config.N_r : config.N_s;
    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            SweepRow& row = rows[i];
            row.beta = cells[i].first;
            row.M = cells[i].second;
            row.grid_N = grid_N;
            try {
                RunConfig c = config;
                c.model.sensitivity.beta = row.beta;
                c.model.M = row.M;
                c.functionals_enable = false;
                c.time.richardson = false;
                const RunOutcome o = classify_run(c, solver);
                row.classification = o.classification;
                row.t_blowup = o.blowup_time_estimate;
            } catch (const std::exception&) {
                row.classification = Classification::Inconclusive;
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(std::max(parallelism, 1), cells.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < workers; ++k)
            pool.emplace_back(work);
    }
    return rows;
}

CompareReport compare_formulations(const RunConfig& config)
{
    if (config.model.tau != 0 || config.model.n != 2)
        throw ConfigError("masspde requires tau=0, n=2");

    RunConfig c = config;
    c.time.richardson = false;
    std::map<long, std::vector<double>> reference;
    const double dt = config.time.sample_dt;
    const RunOutcome prim = classify_run(c, Solver::Primitive, [&](double t, std::span<const double> u) {
        reference[std::lround(t / dt)] = std::vector<double>(u.begin(), u.end());
    });

    CompareReport rep;
    const RunOutcome mass = classify_run(c, Solver::MassPDE, [&](double t, std::span<const double> u) {
        const auto it = reference.find(std::lround(t / dt));
        if (it == reference.end())
            return;
        const std::vector<double>& up = it->second;
        double diff = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < up.size(); ++i) {
            diff = std::max(diff, std::abs(up[i] - u[i]));
            norm = std::max(norm, std::abs(up[i]));
        }
        const double rel = norm > 0.0 ? diff / norm : diff;
        rep.series.push_back({t, rel});
        rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, rel);
    });

    rep.primitive = prim.classification;
    rep.masspde = mass.classification;
    rep.t_blowup_primitive = prim.blowup_time_estimate;
    rep.t_blowup_masspde = mass.blowup_time_estimate;
    if (rep.t_blowup_primitive && rep.t_blowup_masspde)
        rep.blowup_rel_diff = std::abs(*rep.t_blowup_masspde - *rep.t_blowup_primitive) / *rep.t_blowup_primitive;
    return rep;
}

}  // namespace radchemo
