#pragma once

#include "radchemo/model.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace radchemo {

/// Malformed or invalid configuration; the message starts with
/// "<origin>:<line>:" when the offending key can be located.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Solver { Primitive, MassPDE };

std::string to_string(Solver solver);
Solver solver_from_string(const std::string& name);

struct TimeSettings {
    double dt_init = 1e-6;
    double dt_min_factor = 1e-12;  ///< dt_min = dt_min_factor * T_end
    double sample_dt = 0.1;
    double dt_max = 1e-2;
    double max_change = 0.02;
    std::optional<double> cfl;     ///< rate bound of the explicit flux; off when absent
    double growth = 1.2;
    double blowup_factor = 1e3;    ///< ceiling = blowup_factor * max(1, ||u0||_inf)
    long max_steps = 5'000'000;
    bool richardson = false;       ///< also run on N_r/2 and extrapolate the blow-up time
};

struct RunConfig {
    ModelParams model;
    nlohmann::json initial_spec;   ///< echo of the "initial" section (file paths made absolute)
    Profile initial;
    int N_r = 512;
    int N_s = 4096;
    TimeSettings time;
    bool functionals_enable = true;
    std::optional<double> gamma;
    std::string output_dir = "out";
    std::optional<Solver> solver;

    /// Canonical JSON with every default filled in; parse_config accepts it.
    nlohmann::json to_json() const;
};

/// Parses and validates a JSON configuration. Relative profile file paths are
/// resolved against `base_dir`. A top-level "manifest" object is accepted
/// and ignored so that written manifests load as configurations.
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>", std::string_view base_dir = ".");

RunConfig load_config(const std::string& path);

/// Amplitude a with omega_n int_0^R r^{n-1} a exp(-r^2/(2 width^2)) dr = mass.
double gaussian_amplitude_for_mass(int n, double R, double width, double mass);

}  // namespace radchemo
