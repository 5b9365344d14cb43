#include "radchemo/signal.hpp"

#include "radchemo/tridiag.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace radchemo {

namespace {

void check_density(std::span<const double> u, const RadialGrid& grid)
{
    if (static_cast<int>(u.size()) != grid.nodes())
        throw std::invalid_argument("signal: density size does not match grid");
}

// Rows i = 0..N-1 of  sum_faces A (v_nb - v_i)/h - V_i (u_i + shift_i) v_i = -V_i rhs_i,
// with the Dirichlet row v_N = M.
Tridiagonal assemble(std::span<const double> u, double M, const RadialGrid& grid, double inv_dt,
                     std::span<const double> v_old)
{
    const int N = grid.cells();
    const double h = grid.h();
    Tridiagonal sys(N + 1);
    for (int i = 0; i < N; ++i) {
        const double east = grid.face_area(i) / h;
        const double west = i > 0 ? grid.face_area(i - 1) / h : 0.0;
        const double vol = grid.volume(i);
        sys.lower[i] = -west;
        sys.upper[i] = -east;
        sys.diag[i] = east + west + vol * (std::max(u[i], 0.0) + inv_dt);
        sys.rhs[i] = inv_dt > 0.0 ? vol * inv_dt * v_old[i] : 0.0;
    }
    sys.diag[N] = 1.0;
    sys.rhs[N] = M;
    return sys;
}

void fill_face_gradients(SignalField& f, const RadialGrid& grid)
{
    const int N = grid.cells();
    f.face_grad.resize(N);
    for (int i = 0; i < N; ++i)
        f.face_grad[i] = (f.v[i + 1] - f.v[i]) / grid.h();
}

}  // namespace

double SignalField::max_v() const
{
    return *std::max_element(v.begin(), v.end());
}

SignalField solve_elliptic(std::span<const double> u, double M, const RadialGrid& grid)
{
    check_density(u, grid);
    for (double x : u)
        if (x < -1e-12 || std::isnan(x))
            throw std::invalid_argument("solve_elliptic: density must be nonnegative");

    SignalField f;
    f.v = solve(assemble(u, M, grid, 0.0, {}));
    fill_face_gradients(f, grid);

    const int N = grid.cells();
    const int n = grid.dim();
    const double h = grid.h();
    f.vr.assign(N + 1, 0.0);
    double integral = 0.0;
    double prev = 0.0;  // rho^{n-1} u v at rho = 0
    for (int i = 1; i <= N; ++i) {
        const double r = grid.r(i);
        const double cur = std::pow(r, n - 1) * std::max(u[i], 0.0) * f.v[i];
        integral += 0.5 * h * (prev + cur);
        prev = cur;
        f.vr[i] = integral / std::pow(r, n - 1);
    }
    assert(std::all_of(f.vr.begin(), f.vr.end(), [](double x) { return x >= 0.0; }));
    return f;
}

SignalField step_parabolic_v(const SignalField& state, std::span<const double> u, double dt, double M,
                             const RadialGrid& grid)
{
    check_density(u, grid);
    if (!(dt > 0.0))
        throw std::domain_error("step_parabolic_v: dt must be positive");
    if (static_cast<int>(state.v.size()) != grid.nodes())
        throw std::invalid_argument("step_parabolic_v: signal size does not match grid");

    SignalField f;
    f.v = solve(assemble(u, M, grid, 1.0 / dt, state.v));
    fill_face_gradients(f, grid);

    // v_r at nodes: mean of the adjacent face gradients, zero at the centre,
    // second-order one-sided at r = R.
    const int N = grid.cells();
    const double h = grid.h();
    f.vr.assign(N + 1, 0.0);
    for (int i = 1; i < N; ++i)
        f.vr[i] = 0.5 * (f.face_grad[i - 1] + f.face_grad[i]);
    f.vr[N] = (3.0 * f.v[N] - 4.0 * f.v[N - 1] + f.v[N - 2]) / (2.0 * h);
    return f;
}

double gradient_l2_norm(const SignalField& field, const RadialGrid& grid)
{
    const int N = grid.cells();
    const int n = grid.dim();
    const double h = grid.h();
    auto g = [&](int i) { return std::pow(grid.r(i), n - 1) * field.vr[i] * field.vr[i]; };
    double sum = 0.0;
    for (int i = 0; i < N; ++i)
        sum += 0.5 * h * (g(i) + g(i + 1));
    return std::sqrt(RadialGrid::unit_sphere_area(n) * sum);
}

}  // namespace radchemo
