#pragma once

#include "radchemo/grid.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace radchemo {

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a request falls outside the parameter regime an operation
/// supports (e.g. moment constants with beta <= 1).
class UnsupportedRegime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class SensitivityFamily {
    PowerShifted,  ///< S(xi) = K (1 + xi)^beta
    PowerPure,     ///< S(xi) = k xi^beta
};

std::string to_string(SensitivityFamily family);
SensitivityFamily sensitivity_family_from_string(const std::string& name);

struct SensitivitySpec {
    SensitivityFamily family = SensitivityFamily::PowerShifted;
    double beta = 1.0;
    double coeff = 1.0;

    void validate() const;
};

/// S(xi) for xi >= 0. Throws std::domain_error for negative xi.
double evaluate_sensitivity(const SensitivitySpec& spec, double xi);

/// S'(xi); may be +inf at xi = 0 for PowerPure with beta < 1.
double sensitivity_derivative(const SensitivitySpec& spec, double xi);

struct ModelParams {
    int n = 2;
    double R = 1.0;
    int tau = 0;
    SensitivitySpec sensitivity;
    double M = 1.0;
    double T_end = 1.0;

    void validate() const;
};

namespace profile {
struct Constant {
    double c;
};
struct Gaussian {
    double amplitude;
    double width;  ///< u0 = a exp(-r^2 / (2 width^2))
};
struct BumpNearOrigin {
    double amplitude;
    double radius;  ///< u0 = a (1 - (r/radius)^2)^2 on r < radius
};
/// Samples (r_k, u_k) with increasing r; linearly interpolated, held constant
/// outside the sampled range.
struct Tabulated {
    std::vector<double> r;
    std::vector<double> u;
};
}  // namespace profile

using Profile = std::variant<profile::Constant, profile::Gaussian, profile::BumpNearOrigin, profile::Tabulated>;

/// Evaluates a parametric profile at radius r.
double evaluate_profile(const Profile& p, double r);

/// Reads a two-column "r,u0" CSV (optional header line) into a Tabulated profile.
profile::Tabulated load_profile_csv(const std::string& path);

struct InitialData {
    std::vector<double> u0;
    std::optional<std::vector<double>> v0;
    double m0 = 0.0;
    double sup_u0 = 0.0;
};

/// Samples the profile on the grid and computes m0 with the grid's
/// control-volume quadrature. For tau = 1 attaches v0 = M unless one is given.
InitialData make_initial_data(const ModelParams& params, const Profile& profile, const RadialGrid& grid,
                              std::optional<std::vector<double>> v0 = std::nullopt);

/// Constants of the blow-up argument for S(xi) >= k xi^beta, beta > 1, n = 2.
struct BlowupConstants {
    double beta = 0.0;
    double k = 0.0;
    double R = 0.0;
    double m0 = 0.0;
    double gamma = 0.0;
    double l = 0.0;
    double C37 = 0.0;
    double C38 = 0.0;
    double C39 = 0.0;
    double C40 = 0.0;
    double C41 = 0.0;
    double C42 = 0.0;
    double C43 = 0.0;
    double C44 = 0.0;
    double C45 = 0.0;  ///< depends on M; evaluated for ModelParams::M
    double phi0 = 0.0;
    double mstar_bound = 0.0;  ///< smallest M with f_M >= 0 on [C44, inf)

    static double gamma_supremum(double beta) { return (beta - 1.0) / (4.0 * beta - 2.0); }
    double l_lower() const { return 2.0 * gamma + 1.0; }
    double l_upper() const { return 2.0 + (2.0 * gamma - beta - 1.0) / (2.0 * beta); }

    /// C45 for an arbitrary boundary level M.
    double c45(double M) const;
    /// f_M(z) = M/(2 C41) z/(1+z^{1/(2 beta)}) - C41 z^{1/(2 beta)} - C41.
    double f_M(double M, double z) const;
};

/// Closed-form constants. phi0 is evaluated from w0 on an s-grid with
/// `s_cells` cells. Requires PowerPure with beta > 1.
BlowupConstants compute_constants(const ModelParams& params, const InitialData& data, const RadialGrid& grid,
                                 std::optional<double> gamma_override = std::nullopt, int s_cells = 4096);

}  // namespace radchemo
