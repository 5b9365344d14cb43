#pragma once

#include <span>
#include <vector>

namespace radchemo {

/// Tridiagonal system in row form: lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0) {}

    std::size_t size() const { return diag.size(); }

    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;
};

/// Thomas elimination without pivoting. Intended for M-matrices, where it is
/// stable. Throws std::runtime_error on a zero pivot.
std::vector<double> solve(const Tridiagonal& system);

}  // namespace radchemo
