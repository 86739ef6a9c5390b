#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dcns/error.hpp"

namespace dcns {

/// Uniform cell-centred mesh on [-L, L]: x_i = -L + (i + 1/2) dx.
class Grid {
public:
    Grid() = default;
    Grid(double half_width, std::size_t cells) : L_(half_width), N_(cells)
    {
        if (!(half_width > 0.0) || !std::isfinite(half_width)) {
            throw ConfigError("grid half-width L must be positive and finite");
        }
        if (cells < 8) {
            throw ConfigError("grid needs N >= 8 cells (got " + std::to_string(cells) + ")");
        }
        dx_ = 2.0 * L_ / static_cast<double>(N_);
    }

    double L() const noexcept { return L_; }
    std::size_t N() const noexcept { return N_; }
    double dx() const noexcept { return dx_; }
    double x(std::size_t i) const noexcept { return -L_ + (static_cast<double>(i) + 0.5) * dx_; }

    std::vector<double> nodes() const
    {
        std::vector<double> xs(N_);
        for (std::size_t i = 0; i < N_; ++i) {
            xs[i] = x(i);
        }
        return xs;
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept
    {
        return a.L_ == b.L_ && a.N_ == b.N_;
    }

private:
    double L_ = 1.0;
    std::size_t N_ = 8;
    double dx_ = 0.25;
};

/// Point samples of a real function on a Grid.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0) : grid_(g), values_(g.N(), fill) {}
    Field(const Grid& g, std::vector<double> values) : grid_(g), values_(std::move(values))
    {
        if (values_.size() != grid_.N()) {
            throw ShapeMismatch("field length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.N()));
        }
    }

    template <class F>
    static Field from_function(const Grid& g, F&& f)
    {
        Field out(g);
        for (std::size_t i = 0; i < g.N(); ++i) {
            out.values_[i] = f(g.x(i));
        }
        return out;
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vec() const noexcept { return values_; }

    bool all_finite() const
    {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }
    double min() const { return *std::min_element(values_.begin(), values_.end()); }
    double max() const { return *std::max_element(values_.begin(), values_.end()); }

    /// Pointwise map into a new field on the same grid.
    template <class F>
    Field map(F&& f) const
    {
        Field out(grid_);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            out.values_[i] = f(values_[i]);
        }
        return out;
    }

    Field& operator+=(const Field& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    Field& operator-=(const Field& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    Field& operator*=(const Field& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
        return *this;
    }
    Field& operator*=(double s)
    {
        for (double& v : values_) v *= s;
        return *this;
    }
    Field& operator+=(double s)
    {
        for (double& v : values_) v += s;
        return *this;
    }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, const Field& b) { return a *= b; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }
    friend Field operator+(Field a, double s) { return a += s; }

    void check_same(const Field& o) const
    {
        if (!(grid_ == o.grid_) || values_.size() != o.values_.size()) {
            throw ShapeMismatch("fields live on different grids");
        }
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// First derivative: centred in the interior, one-sided second order at the
/// two boundary nodes.
inline Field ddx(const Field& f)
{
    const std::size_t n = f.size();
    const double inv2dx = 0.5 / f.grid().dx();
    Field out(f.grid());
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2dx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i + 1] - f[i - 1]) * inv2dx;
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2dx;
    return out;
}

/// Second derivative: 3-point stencil in the interior, 4-point one-sided
/// (second order) at the boundary nodes.
inline Field d2dx2(const Field& f)
{
    const std::size_t n = f.size();
    const double inv = 1.0 / (f.grid().dx() * f.grid().dx());
    Field out(f.grid());
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    }
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return out;
}

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

namespace detail {

inline double lp_range(const Field& f, double p, std::size_t lo, std::size_t hi)
{
    if (lo >= hi) {
        return 0.0;
    }
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(f[i]));
        return m;
    }
    if (!(p >= 1.0)) {
        throw ConfigError("L^p norm needs p >= 1");
    }
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t i = lo; i < hi; ++i) s += f[i] * f[i];
        return std::sqrt(s * f.grid().dx());
    }
    for (std::size_t i = lo; i < hi; ++i) s += std::pow(std::abs(f[i]), p);
    return std::pow(s * f.grid().dx(), 1.0 / p);
}

} // namespace detail

/// Discrete L^p norm (sum |f|^p dx)^(1/p); p = infinity gives max |f|.
inline double lp_norm(const Field& f, double p)
{
    return detail::lp_range(f, p, 0, f.size());
}

/// Index range [lo, hi) of the nodes with |x| <= r.
inline std::pair<std::size_t, std::size_t> window(const Grid& g, double r)
{
    std::size_t lo = g.N();
    std::size_t hi = 0;
    for (std::size_t i = 0; i < g.N(); ++i) {
        if (std::abs(g.x(i)) <= r) {
            lo = std::min(lo, i);
            hi = i + 1;
        }
    }
    if (lo >= hi) return {0, 0};
    return {lo, hi};
}

/// L^p norm over the nodes with |x| <= r.
inline double lp_norm_window(const Field& f, double p, double r)
{
    auto [lo, hi] = window(f.grid(), r);
    return detail::lp_range(f, p, lo, hi);
}

inline double min_window(const Field& f, double r)
{
    auto [lo, hi] = window(f.grid(), r);
    if (lo >= hi) {
        throw ConfigError("window |x| <= r contains no grid nodes");
    }
    return *std::min_element(f.values().begin() + static_cast<std::ptrdiff_t>(lo),
                             f.values().begin() + static_cast<std::ptrdiff_t>(hi));
}

/// Midpoint rule sum f_i dx.
inline double integrate(const Field& f)
{
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().dx();
}

} // namespace dcns
