#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dcns/error.hpp"

namespace dcns {

/// Rows of a tridiagonal system: lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas algorithm without pivoting. Requires weak diagonal dominance of
/// every row; a row that loses it raises SingularTridiagonal.
inline std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::span<const double> rhs)
{
    const std::size_t n = m.size();
    if (rhs.size() != n || n == 0) {
        throw ShapeMismatch("tridiagonal system and right-hand side sizes differ");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(m.lower[i]) : 0.0) + (i + 1 < n ? std::abs(m.upper[i]) : 0.0);
        if (!(std::abs(m.diag[i]) >= off * (1.0 - 1e-14)) || !std::isfinite(m.diag[i])) {
            throw SingularTridiagonal("row " + std::to_string(i) + " is not diagonally dominant");
        }
    }

    std::vector<double> c(n), d(n), x(n);
    double pivot = m.diag[0];
    if (pivot == 0.0) {
        throw SingularTridiagonal("zero pivot at row 0");
    }
    c[0] = (n > 1 ? m.upper[0] : 0.0) / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = m.diag[i] - m.lower[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw SingularTridiagonal("vanishing pivot at row " + std::to_string(i));
        }
        c[i] = (i + 1 < n ? m.upper[i] : 0.0) / pivot;
        d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / pivot;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

} // namespace dcns
