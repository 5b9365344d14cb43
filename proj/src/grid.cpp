#include "radchemo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace radchemo {

double RadialGrid::unit_sphere_area(int n)
{
    // 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialGrid::RadialGrid(int dim, double radius, int cells)
    : dim_(dim), radius_(radius), cells_(cells), h_(0.0)
{
    if (dim < 2)
        throw std::invalid_argument("radial grid: dimension must be >= 2, got " + std::to_string(dim));
    if (!(radius > 0.0))
        throw std::invalid_argument("radial grid: radius must be positive");
    if (cells < 16)
        throw std::invalid_argument("radial grid: need at least 16 cells, got " + std::to_string(cells));

    h_ = radius / cells;
    const double omega = unit_sphere_area(dim);
    volume_.resize(cells + 1);
    face_.resize(cells);
    auto ball = [&](double r) { return omega / dim * std::pow(r, dim); };
    for (int i = 0; i <= cells; ++i) {
        const double lo = i == 0 ? 0.0 : (i - 0.5) * h_;
        const double hi = i == cells ? radius : (i + 0.5) * h_;
        volume_[i] = ball(hi) - ball(lo);
    }
    for (int i = 0; i < cells; ++i)
        face_[i] = omega * std::pow((i + 0.5) * h_, dim - 1);
}

double RadialGrid::mass(std::span<const double> u) const
{
    if (static_cast<int>(u.size()) != nodes())
        throw std::invalid_argument("radial grid: field size does not match grid");
    double m = 0.0;
    for (int i = 0; i <= cells_; ++i)
        m += volume_[i] * u[i];
    return m;
}

SGrid::SGrid(double radius, int cells) : radius_(radius), cells_(cells), hs_(0.0)
{
    if (!(radius > 0.0))
        throw std::invalid_argument("s-grid: radius must be positive");
    if (cells < 16)
        throw std::invalid_argument("s-grid: need at least 16 cells, got " + std::to_string(cells));
    hs_ = radius * radius / cells;
}

double interpolate_uniform(std::span<const double> values, double h, double x)
{
    const int last = static_cast<int>(values.size()) - 1;
    if (x <= 0.0)
        return values[0];
    const double pos = x / h;
    int i = static_cast<int>(pos);
    if (i >= last)
        return values[last];
    const double f = pos - i;
    return (1.0 - f) * values[i] + f * values[i + 1];
}

}  // namespace radchemo
