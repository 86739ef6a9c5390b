#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "dcns/error.hpp"
#include "dcns/field.hpp"
#include "dcns/params.hpp"
#include "dcns/reformulation.hpp"

namespace dcns {

/// Initial data of the form
///   rho_0 = (1 + x^2)^(-kappa),
///   u_0   = u0_amp * (1 - (x/u0_radius)^2)^4 on |x| < u0_radius,
///   S_0   = S_bar + s0_amp / (1 + x^2),
/// lifted by eta in phi.
struct InitSpec {
    double kappa = 0.7;
    double q = 24.0;
    double u0_amp = 1.0;
    double u0_radius = 1.0;
    double s0_amp = 0.0;
    double eta = 1e-2;
};

/// C^3 compactly supported bump (1 - (x/r)^2)^4 on |x| < r.
inline double bump(double x, double r)
{
    const double s = x / r;
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return w * w * w * w;
}

/// Open interval of admissible density decay exponents:
/// 1/(4(gamma-1)) < kappa < (1 - 3/q) / (2 (1 - delta)).
inline std::pair<double, double> kappa_interval(const DerivedConsts& dc, double q)
{
    const double lo = 1.0 / (4.0 * (dc.gamma() - 1.0));
    const double hi = (1.0 - 3.0 / q) / (2.0 * (1.0 - dc.delta));
    return {lo, hi};
}

/// Validates the spec. Bounds on kappa and on gamma + delta are enforced only
/// in strict mode; support and eta checks always apply.
inline void check_init_spec(const InitSpec& spec, const Grid& grid, const DerivedConsts& dc, bool strict)
{
    const double vals[] = {spec.kappa, spec.q, spec.u0_amp, spec.u0_radius, spec.s0_amp, spec.eta};
    for (double v : vals) {
        if (!std::isfinite(v)) throw ConfigError("[init] values must be finite");
    }
    if (spec.eta < 0.0) {
        throw ConfigError("[init] eta must be nonnegative");
    }
    if (spec.kappa < 0.0) {
        throw InadmissibleKappa("kappa must be nonnegative");
    }
    if (spec.u0_amp != 0.0 && !(spec.u0_radius > 0.0 && spec.u0_radius < grid.L())) {
        throw SupportTooWide("support radius " + detail::fmt_num(spec.u0_radius) +
                             " of u0 must lie strictly inside (0, L = " + detail::fmt_num(grid.L()) + ")");
    }
    if (!strict) return;

    if (!(spec.q > 3.0)) {
        throw InadmissibleKappa("q must exceed 3 (got " + detail::fmt_num(spec.q) + ")");
    }
    auto [lo, hi] = kappa_interval(dc, spec.q);
    if (!(lo < hi)) {
        throw InadmissibleKappa("admissible kappa interval (" + detail::fmt_num(lo) + ", " +
                                detail::fmt_num(hi) + ") is empty");
    }
    if (!(spec.kappa > lo && spec.kappa < hi)) {
        throw InadmissibleKappa("kappa = " + detail::fmt_num(spec.kappa) + " outside (" +
                                detail::fmt_num(lo) + ", " + detail::fmt_num(hi) + ")");
    }
    const double gd = dc.gamma() + dc.delta;
    if (!(1.5 + 0.5 * dc.delta < gd && gd <= 2.0)) {
        throw InadmissibleExponents("violated 3/2+δ/2<γ+δ≤2 (γ+δ = " + detail::fmt_num(gd) + ")");
    }
}

/// Builds the lifted initial state (phi_0 + eta, u_0, l_0, (phi_0 + eta)^(2 iota)).
inline ReformState gen_initial(const InitSpec& spec, const Grid& grid, const DerivedConsts& dc, bool strict = true)
{
    check_init_spec(spec, grid, dc, strict);
    const double g1 = dc.gamma() - 1.0;
    ReformState r;
    r.phi = Field::from_function(grid, [&](double x) {
        return dc.phi_factor() * std::pow(1.0 + x * x, -spec.kappa * g1) + spec.eta;
    });
    r.u = Field::from_function(grid, [&](double x) { return spec.u0_amp * bump(x, spec.u0_radius); });
    r.l = Field::from_function(grid, [&](double x) {
        return std::exp((dc.model.S_bar + spec.s0_amp / (1.0 + x * x)) / dc.cv);
    });
    r.h = h_from_phi(r.phi, dc);
    r.psi = psi_from_h(r.h, dc);
    r.n = n_from_h(r.h, dc);
    r.eta = spec.eta;
    r.t = 0.0;
    return r;
}

/// L^2 norms of the singularly weighted derivative fields g1..g4 of the
/// compatibility conditions.
struct CompatReport {
    std::array<double, 4> g{};      // |g1|_2 .. |g4|_2
    double grad_phi_iota_l6 = 0.0;  // |d/dx phi_0^iota|_6, reported only
    double threshold = 0.0;
    bool pass = false;
    // Filled by compatibility_study(): the same norms on the 2N grid.
    bool has_refinement = false;
    std::array<double, 4> g_fine{};
    std::array<double, 4> ratio{};  // fine / coarse (1 when both vanish)
    bool refinement_stable = false;
};

inline CompatReport check_compatibility(const ReformState& r0, const DerivedConsts& dc, double threshold)
{
    const Field w1 = pos_pow(r0.phi, dc.iota, "phi");       // phi^iota
    const Field w2 = pos_pow(r0.phi, 2.0 * dc.iota, "phi"); // phi^(2 iota)
    const Field lu = lame_of(r0.u, dc);

    CompatReport rep;
    rep.threshold = threshold;
    rep.g[0] = lp_norm(w1 * ddx(r0.u), 2.0);
    rep.g[1] = lp_norm(w2 * lu, 2.0);
    rep.g[2] = lp_norm(w1 * ddx(w2 * lu), 2.0);
    rep.g[3] = lp_norm(w1 * d2dx2(r0.l), 2.0);
    rep.grad_phi_iota_l6 = lp_norm(ddx(w1), 6.0);
    rep.pass = true;
    for (double v : rep.g) {
        if (!(std::isfinite(v) && v <= threshold)) rep.pass = false;
    }
    return rep;
}

/// Compatibility check on `grid` plus the refinement trend under N -> 2N.
/// Norms count as stable when the fine/coarse ratio stays within 10%.
inline CompatReport compatibility_study(const InitSpec& spec, const Grid& grid, const DerivedConsts& dc,
                                        double threshold, bool strict = true)
{
    CompatReport coarse = check_compatibility(gen_initial(spec, grid, dc, strict), dc, threshold);
    const Grid fine_grid(grid.L(), 2 * grid.N());
    const CompatReport fine = check_compatibility(gen_initial(spec, fine_grid, dc, strict), dc, threshold);
    coarse.has_refinement = true;
    coarse.g_fine = fine.g;
    coarse.refinement_stable = true;
    for (std::size_t k = 0; k < 4; ++k) {
        const double c = coarse.g[k];
        const double f = fine.g[k];
        coarse.ratio[k] = (c == 0.0 && f == 0.0) ? 1.0 : f / c;
        const bool negligible = std::abs(c) < 1e-12 && std::abs(f) < 1e-12;
        if (!negligible && !(std::abs(coarse.ratio[k] - 1.0) <= 0.1)) coarse.refinement_stable = false;
    }
    coarse.pass = coarse.pass && fine.pass;
    return coarse;
}

} // namespace dcns
