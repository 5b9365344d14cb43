#include "radchemo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radchemo {

CumulativeRadialMass::CumulativeRadialMass(std::span<const double> u, double h) : h_(h)
{
    const int n = static_cast<int>(u.size());
    if (n < 3)
        throw std::invalid_argument("cumulative mass: need at least three samples");

    slopes_.resize(n);
    for (int i = 0; i < n; ++i)
        slopes_[i] = i * h * u[i];

    std::vector<double> df(n);
    df[0] = (-3.0 * slopes_[0] + 4.0 * slopes_[1] - slopes_[2]) / (2.0 * h);
    df[n - 1] = (3.0 * slopes_[n - 1] - 4.0 * slopes_[n - 2] + slopes_[n - 3]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i)
        df[i] = (slopes_[i + 1] - slopes_[i - 1]) / (2.0 * h);

    values_.assign(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double trap = 0.5 * h * (slopes_[i] + slopes_[i + 1]);
        const double corrected = trap - h * h / 12.0 * (df[i + 1] - df[i]);
        values_[i + 1] = values_[i] + std::max(corrected, 0.0);
    }
}

double CumulativeRadialMass::operator()(double rho) const
{
    const int last = static_cast<int>(values_.size()) - 1;
    if (rho <= 0.0)
        return 0.0;
    const double pos = rho / h_;
    const int i = static_cast<int>(pos);
    if (i >= last)
        return values_[last];
    const double t = pos - i;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    const double y = h00 * values_[i] + h10 * h_ * slopes_[i] + h01 * values_[i + 1] + h11 * h_ * slopes_[i + 1];
    return std::clamp(y, values_[i], values_[i + 1]);
}


std::vector<double> mass_profile_on_s(std::span<const double> u, const RadialGrid& rgrid, const SGrid& sgrid)
{
    if (static_cast<int>(u.size()) != rgrid.nodes())
        throw std::invalid_argument("mass profile: field size does not match r-grid");
    const CumulativeRadialMass cumulative(u, rgrid.h());
    std::vector<double> w(sgrid.nodes());
    for (int j = 0; j < sgrid.nodes(); ++j)
        w[j] = cumulative(std::sqrt(sgrid.s(j)));
    w[0] = 0.0;
    return w;
}

double moment_integral(std::span<const double> w, double hs, double gamma)
{
    const int n = static_cast<int>(w.size());
    const double s1 = hs;
    double sum = w[1] / s1 * std::pow(s1, 2.0 - gamma) / (2.0 - gamma);
    double prev = std::pow(s1, -gamma) * w[1];
    for (int j = 2; j < n; ++j) {
        const double cur = std::pow(j * hs, -gamma) * w[j];
        sum += 0.5 * hs * (prev + cur);
        prev = cur;
    }
    return sum;
}

std::vector<double> nodal_derivative(std::span<const double> w, double hs)
{
    const int n = static_cast<int>(w.size());
    std::vector<double> d(n);
    d[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * hs);
    d[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * hs);
    for (int j = 1; j < n - 1; ++j)
        d[j] = (w[j + 1] - w[j - 1]) / (2.0 * hs);
    return d;
}

double psi_integral(std::span<const double> w, double hs, double gamma, double beta)
{
    const int n = static_cast<int>(w.size());
    const double p = 0.5 * (beta - 1.0) - gamma;
    const std::vector<double> ws = nodal_derivative(w, hs);
    const double s1 = hs;
    const double slope = std::max(w[1] / s1, 0.0);
    double sum = std::pow(slope, beta + 1.0) * std::pow(s1, p + 2.0) / (p + 2.0);
    auto integrand = [&](int j) {
        const double s = j * hs;
        return std::pow(s, p) * w[j] * std::pow(std::max(ws[j], 0.0), beta);
    };
    double prev = integrand(1);
    for (int j = 2; j < n; ++j) {
        const double cur = integrand(j);
        sum += 0.5 * hs * (prev + cur);
        prev = cur;
    }
    return sum;
}

}  // namespace radchemo
