#include "radchemo/model.hpp"

#include "radchemo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace radchemo {

std::string to_string(SensitivityFamily family)
{
    switch (family) {
    case SensitivityFamily::PowerShifted:
        return "PowerShifted";
    case SensitivityFamily::PowerPure:
        return "PowerPure";
    }
    return "unknown";
}

SensitivityFamily sensitivity_family_from_string(const std::string& name)
{
    if (name == "PowerShifted")
        return SensitivityFamily::PowerShifted;
    if (name == "PowerPure")
        return SensitivityFamily::PowerPure;
    throw ValidationError("unknown sensitivity family '" + name + "' (expected PowerShifted or PowerPure)");
}

void SensitivitySpec::validate() const
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ValidationError("sensitivity: beta must be positive");
    // coeff = 0 is allowed: it decouples the system, which the tests rely on.
    if (!(coeff >= 0.0) || !std::isfinite(coeff))
        throw ValidationError("sensitivity: coefficient must be nonnegative");
}

double evaluate_sensitivity(const SensitivitySpec& spec, double xi)
{
    if (xi < 0.0 || std::isnan(xi))
        throw std::domain_error("sensitivity: argument must be nonnegative");
    switch (spec.family) {
    case SensitivityFamily::PowerShifted:
        return spec.coeff * std::pow(1.0 + xi, spec.beta);
    case SensitivityFamily::PowerPure:
        return xi == 0.0 ? 0.0 : spec.coeff * std::pow(xi, spec.beta);
    }
    return 0.0;
}

double sensitivity_derivative(const SensitivitySpec& spec, double xi)
{
    if (xi < 0.0 || std::isnan(xi))
        throw std::domain_error("sensitivity: argument must be nonnegative");
    switch (spec.family) {
    case SensitivityFamily::PowerShifted:
        return spec.coeff * spec.beta * std::pow(1.0 + xi, spec.beta - 1.0);
    case SensitivityFamily::PowerPure:
        if (xi == 0.0) {
            if (spec.beta < 1.0)
                return spec.coeff == 0.0 ? 0.0 : INFINITY;
            return spec.beta == 1.0 ? spec.coeff : 0.0;
        }
        return spec.coeff * spec.beta * std::pow(xi, spec.beta - 1.0);
    }
    return 0.0;
}

void ModelParams::validate() const
{
    if (n < 2)
        throw ValidationError("model: n must be >= 2");
    if (!(R > 0.0))
        throw ValidationError("model: R must be positive");
    if (tau != 0 && tau != 1)
        throw ValidationError("model: tau must be 0 or 1");
    if (!(M > 0.0))
        throw ValidationError("model: M must be positive");
    if (!(T_end > 0.0))
        throw ValidationError("model: T_end must be positive");
    sensitivity.validate();
}

double evaluate_profile(const Profile& p, double r)
{
    struct Visitor {
        double r;
        double operator()(const profile::Constant& c) const { return c.c; }
        double operator()(const profile::Gaussian& g) const
        {
            return g.amplitude * std::exp(-r * r / (2.0 * g.width * g.width));
        }
        double operator()(const profile::BumpNearOrigin& b) const
        {
            if (r >= b.radius)
                return 0.0;
            const double x = 1.0 - (r / b.radius) * (r / b.radius);
            return b.amplitude * x * x;
        }
        double operator()(const profile::Tabulated& t) const
        {
            if (r <= t.r.front())
                return t.u.front();
            if (r >= t.r.back())
                return t.u.back();
            const auto it = std::upper_bound(t.r.begin(), t.r.end(), r);
            const std::size_t k = static_cast<std::size_t>(it - t.r.begin());
            const double f = (r - t.r[k - 1]) / (t.r[k] - t.r[k - 1]);
            return (1.0 - f) * t.u[k - 1] + f * t.u[k];
        }
    };
    return std::visit(Visitor{r}, p);
}

profile::Tabulated load_profile_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("initial profile file '" + path + "' cannot be read");
    profile::Tabulated table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double r = 0.0;
        double u = 0.0;
        if (!(fields >> r >> u)) {
            if (table.r.empty() && line_no == 1)
                continue;  // header
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected two numeric columns r,u0");
        }
        if (!table.r.empty() && r <= table.r.back())
            throw ValidationError(path + ":" + std::to_string(line_no) + ": r values must be strictly increasing");
        table.r.push_back(r);
        table.u.push_back(u);
    }
    if (table.r.size() < 2)
        throw ValidationError(path + ": need at least two samples");
    return table;
}

InitialData make_initial_data(const ModelParams& params, const Profile& profile, const RadialGrid& grid,
                              std::optional<std::vector<double>> v0)
{
    params.validate();
    if (grid.dim() != params.n || std::abs(grid.radius() - params.R) > 1e-12 * params.R)
        throw ValidationError("initial data: grid does not match model dimension/radius");

    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, profile::Constant>) {
                if (p.c < 0.0)
                    throw ValidationError("initial data: constant must be nonnegative");
            } else if constexpr (std::is_same_v<T, profile::Gaussian>) {
                if (p.amplitude < 0.0 || !(p.width > 0.0))
                    throw ValidationError("initial data: Gaussian needs amplitude >= 0 and width > 0");
            } else if constexpr (std::is_same_v<T, profile::BumpNearOrigin>) {
                if (p.amplitude < 0.0 || !(p.radius > 0.0))
                    throw ValidationError("initial data: bump needs amplitude >= 0 and radius > 0");
            }
        },
        profile);

    InitialData data;
    data.u0.resize(grid.nodes());
    for (int i = 0; i < grid.nodes(); ++i) {
        const double u = evaluate_profile(profile, grid.r(i));
        if (u < 0.0 || !std::isfinite(u))
            throw ValidationError("initial data: u0 must be finite and nonnegative");
        data.u0[i] = u;
    }
    data.m0 = grid.mass(data.u0);
    data.sup_u0 = *std::max_element(data.u0.begin(), data.u0.end());
    if (!(data.m0 > 0.0))
        throw ValidationError("initial data: u0 vanishes identically (m0 = 0)");

    if (params.tau == 1) {
        if (!v0)
            v0 = std::vector<double>(grid.nodes(), params.M);
        if (static_cast<int>(v0->size()) != grid.nodes())
            throw ValidationError("initial data: v0 size does not match grid");
        for (double v : *v0)
            if (!(v > 0.0))
                throw ValidationError("initial data: v0 must be positive");
        if (std::abs(v0->back() - params.M) > 1e-12 * params.M)
            throw ValidationError("initial data: v0(R) must equal M");
        v0->back() = params.M;
        data.v0 = std::move(v0);
    }
    return data;
}

double BlowupConstants::c45(double M) const
{
    const double q = phi0 / (2.0 * C40);
    const double e = 1.0 / (2.0 * beta);
    return M / (2.0 * C40 * C41) * std::pow(q, 1.0 - e) / (1.0 + std::pow(q, e));
}

double BlowupConstants::f_M(double M, double z) const
{
    const double ze = std::pow(z, 1.0 / (2.0 * beta));
    return M / (2.0 * C41) * z / (1.0 + ze) - C41 * ze - C41;
}

BlowupConstants compute_constants(const ModelParams& params, const InitialData& data, const RadialGrid& grid,
                                 std::optional<double> gamma_override, int s_cells)
{
    const SensitivitySpec& S = params.sensitivity;
    if (S.family != SensitivityFamily::PowerPure)
        throw UnsupportedRegime("moment constants need a PowerPure sensitivity S = k xi^beta");
    if (!(S.beta > 1.0))
        throw UnsupportedRegime("moment constants need beta > 1 (the gamma interval is empty otherwise)");
    if (!(S.coeff > 0.0))
        throw UnsupportedRegime("moment constants need k > 0");

    BlowupConstants c;
    c.beta = S.beta;
    c.k = S.coeff;
    c.R = params.R;
    c.m0 = data.m0;
    const double beta = S.beta;
    const double R = params.R;
    const double m0 = data.m0;
    const double two_pi = 2.0 * std::numbers::pi;

    const double gamma_sup = BlowupConstants::gamma_supremum(beta);
    if (gamma_override) {
        if (!(*gamma_override > 0.0 && *gamma_override < gamma_sup))
            throw std::domain_error("gamma must lie in (0, (beta-1)/(4 beta-2))");
        c.gamma = *gamma_override;
    } else {
        c.gamma = 0.5 * gamma_sup;
    }
    const double gamma = c.gamma;
    c.l = 0.5 * (c.l_lower() + c.l_upper());
    const double l = c.l;

    c.C37 = std::pow(2.0, beta) * std::pow(R, -(beta - 1.0)) * std::exp(-m0 / (4.0 * two_pi * (beta - 1.0)));

    const double a = (2.0 * beta - 2.0) / (2.0 * gamma + beta - 1.0) * m0 / two_pi;
    c.C38 = std::sqrt(2.0) * std::pow(a, (beta - 1.0) / (2.0 * beta)) *
            std::pow(R, (2.0 * gamma + beta - 1.0) / (2.0 * beta));

    // int_0^{R^2} rho^{-l + (2 gamma + beta - 1)/(2 beta)} d rho = (R^2)^e / e
    const double e = 1.0 - l + (2.0 * gamma + beta - 1.0) / (2.0 * beta);
    c.C39 = 2.0 * std::pow(a, (beta - 1.0) / beta) * std::pow(R * R, e) / e;

    c.C40 = c.C38 * std::pow(R * R, 1.0 - gamma) / (1.0 - gamma);

    const double p42 = l - 2.0 * gamma - 1.0;
    c.C42 = std::sqrt(c.C39) * std::sqrt(std::pow(R * R, p42) / p42);
    c.C43 = std::sqrt(std::pow(R * R, l - 1.0) / (l - 1.0));

    c.C41 = std::max(4.0 * gamma * (1.0 - gamma) * c.C42 + 4.0 * (1.0 - gamma) * std::pow(R, -2.0 * gamma) * m0 / two_pi,
                     std::max(2.0, std::sqrt(c.C39) * c.C43) / (S.coeff * c.C37));

    const SGrid sgrid(R, s_cells);
    std::vector<double> w0 = mass_profile_on_s(data.u0, grid, sgrid);
    w0.back() = m0 / two_pi;
    c.phi0 = moment_integral(w0, sgrid.hs(), gamma);

    const double q = c.phi0 / (2.0 * c.C40);
    c.C44 = std::pow(q, 2.0 * beta);
    // f_M(z) >= 0  <=>  M >= 2 C41^2 (1 + z^{1/(2 beta)})^2 / z, decreasing in z.
    c.mstar_bound = 2.0 * c.C41 * c.C41 * (1.0 + q) * (1.0 + q) / c.C44;
    c.C45 = c.c45(params.M);
    return c;
}

}  // namespace radchemo
