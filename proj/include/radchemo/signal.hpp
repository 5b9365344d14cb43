#pragma once

#include "radchemo/grid.hpp"

#include <span>
#include <vector>

namespace radchemo {

/// Signal concentration on a radial grid.
///
/// `v` and `vr` are nodal. `face_grad[i]` is (v_{i+1} - v_i)/h at r_{i+1/2};
/// the transport schemes use it as the face value of v_r. For the elliptic
/// problem face_area * face_grad telescopes exactly to sum_j V_j u_j v_j.
struct SignalField {
    std::vector<double> v;
    std::vector<double> vr;
    std::vector<double> face_grad;

    double max_v() const;
};

/// Solves Delta v = u v on the ball with v(R) = M by one tridiagonal
/// elimination. The regular row at r = 0 is the ghost-symmetric limit
/// Delta v(0) = n v_rr(0). Nodal v_r follows the integral representation
/// v_r(r) = r^{1-n} int_0^r rho^{n-1} u v d rho (trapezoid).
SignalField solve_elliptic(std::span<const double> u, double M, const RadialGrid& grid);

/// One backward-Euler step of v_t = Delta v - u v with v(R) = M.
SignalField step_parabolic_v(const SignalField& state, std::span<const double> u, double dt, double M,
                             const RadialGrid& grid);

/// (omega_n int_0^R rho^{n-1} v_r^2 d rho)^{1/2} by the trapezoid rule on nodal v_r.
double gradient_l2_norm(const SignalField& field, const RadialGrid& grid);

}  // namespace radchemo
