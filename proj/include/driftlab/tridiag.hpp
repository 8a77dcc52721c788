/// @file tridiag.hpp
/// @brief Thomas algorithm for tridiagonal systems
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace driftlab {

/// Solves lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i] in place
/// (rhs becomes the solution). lower[0] and upper[n-1] are ignored. `scratch`
/// must hold n values. No pivoting: intended for diagonally dominant systems.
inline void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs,
                              std::span<double> scratch) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    if (lower.size() < n || upper.size() < n || rhs.size() < n || scratch.size() < n)
        throw std::invalid_argument("solve_tridiagonal: size mismatch");
    double pivot = diag[0];
    if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
        scratch[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace driftlab
