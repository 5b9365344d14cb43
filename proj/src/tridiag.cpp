#include "radchemo/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace radchemo {

std::vector<double> solve(const Tridiagonal& system)
{
    const std::size_t n = system.size();
    std::vector<double> c_star(n, 0.0);
    std::vector<double> x(n, 0.0);
    if (n == 0)
        return x;

    double pivot = system.diag[0];
    if (pivot == 0.0)
        throw std::runtime_error("tridiagonal solve: zero pivot in row 0");
    c_star[0] = system.upper[0] / pivot;
    x[0] = system.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = system.diag[i] - system.lower[i] * c_star[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw std::runtime_error("tridiagonal solve: singular system");
        c_star[i] = system.upper[i] / pivot;
        x[i] = (system.rhs[i] - system.lower[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= c_star[i] * x[i + 1];
    return x;
}

}  // namespace radchemo
