#pragma once

#include <span>
#include <vector>

namespace radchemo {

/// Uniform radial grid on [0, R] with nodes r_i = i*h, i = 0..N.
///
/// Every node owns the control volume [r_{i-1/2}, r_{i+1/2}] clipped to
/// [0, R], so node 0 and node N carry half cells. Volumes and face areas are
/// the exact n-dimensional measures of those shells; all conservative
/// operators in the library are written against them.
class RadialGrid {
public:
    RadialGrid(int dim, double radius, int cells);

    int dim() const { return dim_; }
    double radius() const { return radius_; }
    int cells() const { return cells_; }
    int nodes() const { return cells_ + 1; }
    double h() const { return h_; }
    double r(int i) const { return i * h_; }

    /// Measure of the control volume owned by node i.
    double volume(int i) const { return volume_[i]; }
    /// Area of the sphere at r_{i+1/2}, i = 0..N-1.
    double face_area(int i) const { return face_[i]; }

    /// Discrete mass sum_i V_i u_i; exact for constants.
    double mass(std::span<const double> u) const;

    /// Surface area of the unit sphere in R^n (2*pi for n=2, 4*pi for n=3).
    static double unit_sphere_area(int n);

private:
    int dim_;
    double radius_;
    int cells_;
    double h_;
    std::vector<double> volume_;
    std::vector<double> face_;
};

/// Uniform grid on [0, R^2] for the mass-accumulation variable s = r^2.
class SGrid {
public:
    SGrid(double radius, int cells);

    double radius() const { return radius_; }
    double length() const { return radius_ * radius_; }
    int cells() const { return cells_; }
    int nodes() const { return cells_ + 1; }
    double hs() const { return hs_; }
    double s(int j) const { return j * hs_; }

private:
    double radius_;
    int cells_;
    double hs_;
};

/// Linear interpolation of nodal values on a uniform grid with spacing h
/// starting at 0; x is clamped to the grid range.
double interpolate_uniform(std::span<const double> values, double h, double x);

}  // namespace radchemo
