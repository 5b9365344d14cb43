#pragma once

#include "radchemo/grid.hpp"

#include <span>
#include <vector>

namespace radchemo {

/// Cumulative radial mass integral W(r) = int_0^r rho u(rho) d rho from nodal
/// samples of u.
///
/// Node values use the trapezoid rule with the Euler-Maclaurin end correction
/// (fourth order for smooth u). Cell increments are kept nonnegative so the
/// result is monotone for u >= 0. Between nodes W is the cubic Hermite
/// interpolant with slopes rho*u, clipped to the cell's value range.
class CumulativeRadialMass {
public:
    CumulativeRadialMass(std::span<const double> u, double h);

    double operator()(double rho) const;
    double total() const { return values_.back(); }
    const std::vector<double>& nodal() const { return values_; }

private:
    double h_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

/// w(s_j) = int_0^{sqrt(s_j)} rho u d rho on the s-grid, from nodal u on the
/// r-grid (cubic Hermite on the cumulative integral, w(0) = 0).
std::vector<double> mass_profile_on_s(std::span<const double> u, const RadialGrid& rgrid, const SGrid& sgrid);

/// int_0^{S} s^{-gamma} w ds on a uniform s-grid. The first cell assumes w
/// linear through the origin: w(s_1)/s_1 * s_1^{2-gamma}/(2-gamma).
double moment_integral(std::span<const double> w, double hs, double gamma);

/// Nodal w_s: centered differences inside, second-order one-sided at the ends.
std::vector<double> nodal_derivative(std::span<const double> w, double hs);

/// int_0^{S} s^{(beta-1)/2-gamma} w w_s^beta ds. First cell uses w linear
/// through the origin, so the integrand there is (w_1/s_1)^{beta+1} s^{p+1}.
double psi_integral(std::span<const double> w, double hs, double gamma, double beta);

}  // namespace radchemo
