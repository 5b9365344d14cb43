#include "radchemo/config.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace radchemo {

using nlohmann::json;

std::string to_string(Solver solver)
{
    return solver == Solver::Primitive ? "primitive" : "masspde";
}

Solver solver_from_string(const std::string& name)
{
    if (name == "primitive")
        return Solver::Primitive;
    if (name == "masspde")
        return Solver::MassPDE;
    throw ConfigError("unknown solver '" + name + "' (expected primitive or masspde)");
}

double gaussian_amplitude_for_mass(int n, double R, double width, double mass)
{
    const double half_n = 0.5 * n;
    const double x = R * R / (2.0 * width * width);
    const double radial = 0.5 * std::pow(2.0 * width * width, half_n) * std::tgamma(half_n) *
                          boost::math::gamma_p(half_n, x);
    return mass / (RadialGrid::unit_sphere_area(n) * radial);
}

namespace {

class Reader {
public:
    Reader(std::string_view text, std::string_view origin) : text_(text), origin_(origin) {}

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& message) const
    {
        std::ostringstream os;
        os << origin_;
        if (const int line = line_of(path); line > 0)
            os << ':' << line;
        os << ": ";
        if (!path.empty()) {
            for (std::size_t i = 0; i < path.size(); ++i)
                os << (i ? "." : "") << path[i];
            os << ": ";
        }
        os << message;
        throw ConfigError(os.str());
    }

    const json& object(const json& parent, const std::vector<std::string>& path,
                       std::initializer_list<std::string_view> allowed) const
    {
        const json& node = path.empty() ? parent : parent.at(path.back());
        if (!node.is_object())
            fail(path, "expected an object");
        const std::set<std::string_view> keys(allowed);
        for (const auto& [key, value] : node.items()) {
            if (!keys.count(key)) {
                std::vector<std::string> p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
        return node;
    }

    double number(const json& obj, std::vector<std::string> path, std::optional<double> fallback) const
    {
        const std::string key = path.back();
        if (!obj.contains(key)) {
            if (fallback)
                return *fallback;
            fail(path, "missing required number");
        }
        const json& v = obj.at(key);
        if (!v.is_number())
            fail(path, "expected a number");
        return v.get<double>();
    }

    long integer(const json& obj, std::vector<std::string> path, std::optional<long> fallback) const
    {
        const std::string key = path.back();
        if (!obj.contains(key)) {
            if (fallback)
                return *fallback;
            fail(path, "missing required integer");
        }
        const json& v = obj.at(key);
        if (v.is_number_integer())
            return v.get<long>();
        if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())
            return static_cast<long>(v.get<double>());
        fail(path, "expected an integer");
    }

    bool boolean(const json& obj, std::vector<std::string> path, bool fallback) const
    {
        const std::string key = path.back();
        if (!obj.contains(key))
            return fallback;
        if (!obj.at(key).is_boolean())
            fail(path, "expected true or false");
        return obj.at(key).get<bool>();
    }

    std::string string(const json& obj, std::vector<std::string> path, std::optional<std::string> fallback) const
    {
        const std::string key = path.back();
        if (!obj.contains(key)) {
            if (fallback)
                return *fallback;
            fail(path, "missing required string");
        }
        if (!obj.at(key).is_string())
            fail(path, "expected a string");
        return obj.at(key).get<std::string>();
    }

private:
    // Line of the last key of `path`, found by scanning for each key in turn.
    int line_of(const std::vector<std::string>& path) const
    {
        std::size_t pos = 0;
        std::size_t found = std::string_view::npos;
        for (const std::string& key : path) {
            const std::string quoted = "\"" + key + "\"";
            std::size_t at = text_.find(quoted, pos);
            while (at != std::string_view::npos) {
                std::size_t after = at + quoted.size();
                while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after])))
                    ++after;
                if (after < text_.size() && text_[after] == ':')
                    break;
                at = text_.find(quoted, at + 1);
            }
            if (at == std::string_view::npos)
                return found == std::string_view::npos ? 0 : line_at(found);
            found = at;
            pos = at + quoted.size();
        }
        return found == std::string_view::npos ? 0 : line_at(found);
    }

    int line_at(std::size_t offset) const
    {
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + offset, '\n'));
    }

    std::string_view text_;
    std::string origin_;
};

void check_positive(const Reader& rd, const std::vector<std::string>& path, double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        rd.fail(path, "must be positive and finite");
}

Profile read_initial(const Reader& rd, const json& root, const ModelParams& model, std::string_view base_dir,
                     json& echo)
{
    const json& init = rd.object(root, {"initial"}, {"profile", "params", "file"});
    if (init.contains("file")) {
        if (init.contains("profile") || init.contains("params"))
            rd.fail({"initial", "file"}, "give either a file or a profile, not both");
        std::filesystem::path p = rd.string(init, {"initial", "file"}, std::nullopt);
        if (p.is_relative())
            p = std::filesystem::path(base_dir) / p;
        p = p.lexically_normal();
        if (p.is_relative())
            p = std::filesystem::absolute(p).lexically_normal();
        echo = json{{"file", p.string()}};
        try {
            return load_profile_csv(p.string());
        } catch (const std::exception& e) {
            rd.fail({"initial", "file"}, e.what());
        }
    }

    const std::string name = rd.string(init, {"initial", "profile"}, std::nullopt);
    if (!init.contains("params"))
        rd.fail({"initial", "params"}, "missing parameter object");
    echo = json{{"profile", name}, {"params", init.at("params")}};
    const std::vector<std::string> pp{"initial", "params"};
    auto key = [&](const char* k) {
        std::vector<std::string> p = pp;
        p.push_back(k);
        return p;
    };
    if (name == "constant") {
        const json& prm = rd.object(init, pp, {"value"});
        const double c = rd.number(prm, key("value"), std::nullopt);
        check_positive(rd, key("value"), c);
        return profile::Constant{c};
    }
    if (name == "gaussian") {
        const json& prm = rd.object(init, pp, {"amplitude", "mass", "width"});
        const double width = rd.number(prm, key("width"), std::nullopt);
        check_positive(rd, key("width"), width);
        if (prm.contains("amplitude") == prm.contains("mass"))
            rd.fail(pp, "give exactly one of amplitude and mass");
        if (prm.contains("mass")) {
            const double mass = rd.number(prm, key("mass"), std::nullopt);
            check_positive(rd, key("mass"), mass);
            return profile::Gaussian{gaussian_amplitude_for_mass(model.n, model.R, width, mass), width};
        }
        const double a = rd.number(prm, key("amplitude"), std::nullopt);
        check_positive(rd, key("amplitude"), a);
        return profile::Gaussian{a, width};
    }
    if (name == "bump") {
        const json& prm = rd.object(init, pp, {"amplitude", "radius"});
        const double a = rd.number(prm, key("amplitude"), std::nullopt);
        const double radius = rd.number(prm, key("radius"), std::nullopt);
        check_positive(rd, key("amplitude"), a);
        check_positive(rd, key("radius"), radius);
        return profile::BumpNearOrigin{a, radius};
    }
    rd.fail({"initial", "profile"}, "unknown profile '" + name + "' (expected constant, gaussian or bump)");
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view origin, std::string_view base_dir)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t at = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + (at ? at - 1 : 0), '\n'));
        std::ostringstream os;
        os << origin << ':' << line << ": malformed JSON (" << e.what() << ')';
        throw ConfigError(os.str());
    }
    const Reader rd(text, origin);
    rd.object(root, {},
              {"model", "sensitivity", "initial", "grid", "time", "functionals", "output", "solver", "manifest"});

    RunConfig cfg;
    if (!root.contains("model"))
        rd.fail({"model"}, "missing section");
    const json& model = rd.object(root, {"model"}, {"n", "R", "tau", "M", "T_end"});
    cfg.model.n = static_cast<int>(rd.integer(model, {"model", "n"}, 2));
    cfg.model.R = rd.number(model, {"model", "R"}, 1.0);
    cfg.model.tau = static_cast<int>(rd.integer(model, {"model", "tau"}, 0));
    cfg.model.M = rd.number(model, {"model", "M"}, std::nullopt);
    cfg.model.T_end = rd.number(model, {"model", "T_end"}, std::nullopt);
    if (cfg.model.n < 2)
        rd.fail({"model", "n"}, "must be >= 2");
    check_positive(rd, {"model", "R"}, cfg.model.R);
    if (cfg.model.tau != 0 && cfg.model.tau != 1)
        rd.fail({"model", "tau"}, "must be 0 or 1");
    check_positive(rd, {"model", "M"}, cfg.model.M);
    check_positive(rd, {"model", "T_end"}, cfg.model.T_end);

    if (!root.contains("sensitivity"))
        rd.fail({"sensitivity"}, "missing section");
    const json& sens = rd.object(root, {"sensitivity"}, {"family", "beta", "coeff"});
    try {
        cfg.model.sensitivity.family =
            sensitivity_family_from_string(rd.string(sens, {"sensitivity", "family"}, std::nullopt));
    } catch (const ValidationError& e) {
        rd.fail({"sensitivity", "family"}, e.what());
    }
    cfg.model.sensitivity.beta = rd.number(sens, {"sensitivity", "beta"}, std::nullopt);
    cfg.model.sensitivity.coeff = rd.number(sens, {"sensitivity", "coeff"}, 1.0);
    check_positive(rd, {"sensitivity", "beta"}, cfg.model.sensitivity.beta);
    if (!(cfg.model.sensitivity.coeff >= 0.0) || !std::isfinite(cfg.model.sensitivity.coeff))
        rd.fail({"sensitivity", "coeff"}, "must be nonnegative and finite");

    if (!root.contains("initial"))
        rd.fail({"initial"}, "missing section");
    cfg.initial = read_initial(rd, root, cfg.model, base_dir, cfg.initial_spec);

    if (root.contains("grid")) {
        const json& grid = rd.object(root, {"grid"}, {"N_r", "N_s"});
        const long nr = rd.integer(grid, {"grid", "N_r"}, cfg.N_r);
        const long ns = rd.integer(grid, {"grid", "N_s"}, cfg.N_s);
        if (nr < 16 || nr > 1'000'000)
            rd.fail({"grid", "N_r"}, "must lie in [16, 1000000]");
        if (ns < 16 || ns > 100'000'000)
            rd.fail({"grid", "N_s"}, "must lie in [16, 100000000]");
        cfg.N_r = static_cast<int>(nr);
        cfg.N_s = static_cast<int>(ns);
    }

    if (root.contains("time")) {
        const json& t = rd.object(root, {"time"},
                                  {"dt_init", "dt_min_factor", "sample_dt", "dt_max", "max_change", "cfl", "growth",
                                   "blowup_factor", "max_steps", "richardson"});
        TimeSettings& ts = cfg.time;
        ts.dt_init = rd.number(t, {"time", "dt_init"}, ts.dt_init);
        ts.dt_min_factor = rd.number(t, {"time", "dt_min_factor"}, ts.dt_min_factor);
        ts.sample_dt = rd.number(t, {"time", "sample_dt"}, ts.sample_dt);
        ts.dt_max = rd.number(t, {"time", "dt_max"}, ts.dt_max);
        ts.max_change = rd.number(t, {"time", "max_change"}, ts.max_change);
        if (t.contains("cfl") && !t.at("cfl").is_null())
            ts.cfl = rd.number(t, {"time", "cfl"}, std::nullopt);
        ts.growth = rd.number(t, {"time", "growth"}, ts.growth);
        ts.blowup_factor = rd.number(t, {"time", "blowup_factor"}, ts.blowup_factor);
        ts.max_steps = rd.integer(t, {"time", "max_steps"}, ts.max_steps);
        ts.richardson = rd.boolean(t, {"time", "richardson"}, ts.richardson);
        for (const char* k : {"dt_init", "sample_dt", "dt_max", "max_change", "blowup_factor"})
            check_positive(rd, {"time", k}, rd.number(t, {"time", k}, 1.0));
        if (!(ts.dt_min_factor > 0.0 && ts.dt_min_factor < 1.0))
            rd.fail({"time", "dt_min_factor"}, "must lie in (0, 1)");
        if (!(ts.max_change <= 1.0))
            rd.fail({"time", "max_change"}, "must not exceed 1");
        if (ts.cfl)
            check_positive(rd, {"time", "cfl"}, *ts.cfl);
        if (!(ts.growth >= 1.0 && ts.growth <= 10.0))
            rd.fail({"time", "growth"}, "must lie in [1, 10]");
        if (!(ts.blowup_factor > 1.0))
            rd.fail({"time", "blowup_factor"}, "must exceed 1");
        if (ts.max_steps < 1)
            rd.fail({"time", "max_steps"}, "must be positive");
    }

    if (root.contains("functionals")) {
        const json& f = rd.object(root, {"functionals"}, {"gamma", "enable"});
        cfg.functionals_enable = rd.boolean(f, {"functionals", "enable"}, true);
        if (f.contains("gamma") && !f.at("gamma").is_null()) {
            const double g = rd.number(f, {"functionals", "gamma"}, std::nullopt);
            if (!(g > 0.0 && g < 1.0))
                rd.fail({"functionals", "gamma"}, "must lie in (0, 1)");
            cfg.gamma = g;
        }
    }

    if (root.contains("output")) {
        const json& o = rd.object(root, {"output"}, {"dir"});
        cfg.output_dir = rd.string(o, {"output", "dir"}, cfg.output_dir);
        if (cfg.output_dir.empty())
            rd.fail({"output", "dir"}, "must not be empty");
    }

    if (root.contains("solver")) {
        try {
            cfg.solver = solver_from_string(rd.string(root, {"solver"}, std::nullopt));
        } catch (const ConfigError& e) {
            rd.fail({"solver"}, e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open configuration");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_config(ss.str(), path, base.empty() ? "." : base);
}

json RunConfig::to_json() const
{
    json time_json = {
        {"dt_init", time.dt_init},       {"dt_min_factor", time.dt_min_factor}, {"sample_dt", time.sample_dt},
        {"dt_max", time.dt_max},         {"max_change", time.max_change},       {"growth", time.growth},
        {"blowup_factor", time.blowup_factor}, {"max_steps", time.max_steps},  {"richardson", time.richardson},
    };
    if (time.cfl)
        time_json["cfl"] = *time.cfl;
    json f = {{"enable", functionals_enable}};
    if (gamma)
        f["gamma"] = *gamma;
    json out = {
        {"model", {{"n", model.n}, {"R", model.R}, {"tau", model.tau}, {"M", model.M}, {"T_end", model.T_end}}},
        {"sensitivity",
         {{"family", radchemo::to_string(model.sensitivity.family)},
          {"beta", model.sensitivity.beta},
          {"coeff", model.sensitivity.coeff}}},
        {"initial", initial_spec},
        {"grid", {{"N_r", N_r}, {"N_s", N_s}}},
        {"time", time_json},
        {"functionals", f},
        {"output", {{"dir", output_dir}}},
    };
    if (solver)
        out["solver"] = radchemo::to_string(*solver);
    return out;
}

}  // namespace radchemo
