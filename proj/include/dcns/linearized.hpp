#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dcns/error.hpp"
#include "dcns/field.hpp"
#include "dcns/params.hpp"
#include "dcns/reformulation.hpp"
#include "dcns/tridiagonal.hpp"

namespace dcns {

/// Coefficients held fixed during one linearized solve: the velocity v, the
/// h-iterate g and the l-iterate w.
struct FrozenCoeffs {
    Field v;
    Field g;
    Field w;
};

enum class TransportScheme { Upwind, SemiLagrangianCubic };

struct StepParams {
    double dt = 0.0;
    double eps = 0.0;
    double cfl = 0.5;
    TransportScheme scheme = TransportScheme::Upwind;
};

/// Values just outside the box, used for upwind inflow and as the Dirichlet
/// data of the implicit solve.
struct Ghosts {
    double left = 0.0;
    double right = 0.0;
};

/// Far-field state (eta, 0, l_bar, eta^(2 iota)) of the lifted problem.
struct FarField {
    double phi;
    double u;
    double l;
    double h;
};

inline FarField far_field(const DerivedConsts& dc, double eta)
{
    if (!(eta > 0.0)) {
        throw ConfigError("the density lift eta must be positive for time stepping");
    }
    return {eta, 0.0, dc.l_bar, pos_pow(eta, 2.0 * dc.iota, "eta")};
}

namespace detail {

inline void check_step(const Field& q, const Field& v, const StepParams& sp)
{
    q.check_same(v);
    if (!(sp.dt > 0.0) || !std::isfinite(sp.dt)) {
        throw ConfigError("time step must be positive and finite");
    }
    if (sp.eps < 0.0) {
        throw ConfigError("artificial viscosity eps must be nonnegative");
    }
    const double vmax = lp_norm(v, kInfNorm);
    const double courant = vmax * sp.dt / q.grid().dx();
    if (!(courant <= 1.0 + 1e-12)) {
        throw CFLViolation("Courant number " + fmt_num(courant) + " exceeds 1");
    }
}

inline double extended(const Field& q, std::ptrdiff_t j, const Ghosts& bc)
{
    const auto n = static_cast<std::ptrdiff_t>(q.size());
    if (j < 0) return bc.left;
    if (j >= n) return bc.right;
    return q[static_cast<std::size_t>(j)];
}

/// Cubic Lagrange interpolation of q at x, with ghost values outside the box.
inline double interp_cubic(const Field& q, double x, const Ghosts& bc)
{
    const Grid& g = q.grid();
    const double s = (x - g.x(0)) / g.dx();  // fractional node index
    const auto j = static_cast<std::ptrdiff_t>(std::floor(s));
    const double t = s - static_cast<double>(j);
    const double f0 = extended(q, j - 1, bc);
    const double f1 = extended(q, j, bc);
    const double f2 = extended(q, j + 1, bc);
    const double f3 = extended(q, j + 2, bc);
    // nodes at -1, 0, 1, 2 relative to j
    const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return w0 * f0 + w1 * f1 + w2 * f2 + w3 * f3;
}

} // namespace detail

/// One explicit step of q_t + v q_x = rate: upwind (monotone) or cubic
/// semi-Lagrangian advection, then + dt * rate.
inline Field advect(const Field& q, const Field& v, const Field& rate, const StepParams& sp, const Ghosts& bc)
{
    detail::check_step(q, v, sp);
    q.check_same(rate);
    const std::size_t n = q.size();
    const double dx = q.grid().dx();
    Field out(q.grid());
    if (sp.scheme == TransportScheme::Upwind) {
        const double lam = sp.dt / dx;
        for (std::size_t i = 0; i < n; ++i) {
            const double qm = i > 0 ? q[i - 1] : bc.left;
            const double qp = i + 1 < n ? q[i + 1] : bc.right;
            const double vi = v[i];
            const double flux_diff = vi > 0.0 ? vi * (q[i] - qm) : vi * (qp - q[i]);
            out[i] = q[i] - lam * flux_diff + sp.dt * rate[i];
        }
    } else {
        const Grid& g = q.grid();
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = detail::interp_cubic(q, g.x(i) - v[i] * sp.dt, bc) + sp.dt * rate[i];
        }
    }
    return out;
}

/// Backward-Euler solve of (u' - u)/dt - diffusivity * u'_xx = rhs with
/// Dirichlet ghost values, using the 3-point Laplacian.
inline Field implicit_diffusion(const Field& u, const Field& diffusivity, const Field& rhs, double dt,
                                const Ghosts& bc)
{
    u.check_same(diffusivity);
    u.check_same(rhs);
    const std::size_t n = u.size();
    const double inv_dx2 = 1.0 / (u.grid().dx() * u.grid().dx());
    Tridiagonal m(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = dt * diffusivity[i] * inv_dx2;
        if (!(k >= 0.0) || !std::isfinite(k)) {
            throw NonpositiveCoefficient("diffusivity must be nonnegative and finite at node " + std::to_string(i));
        }
        m.lower[i] = -k;
        m.diag[i] = 1.0 + 2.0 * k;
        m.upper[i] = -k;
        b[i] = u[i] + dt * rhs[i];
        if (i == 0) b[i] += k * bc.left;
        if (i + 1 == n) b[i] += k * bc.right;
    }
    return Field(u.grid(), solve_tridiagonal(m, b));
}

/// phi_t + v phi_x + (gamma - 1) phi v_x = 0.
inline Field step_phi(const Field& phi, const FrozenCoeffs& c, const StepParams& sp, const DerivedConsts& dc,
                      const Ghosts& bc, const Field* forcing = nullptr)
{
    Field rate = phi * ddx(c.v) * (-(dc.gamma() - 1.0));
    if (forcing) rate += *forcing;
    return advect(phi, c.v, rate, sp, bc);
}

/// h_t + v h_x + (delta - 1) g v_x = 0. The source uses the frozen g.
inline Field step_h(const Field& h, const FrozenCoeffs& c, const StepParams& sp, const DerivedConsts& dc,
                    const Ghosts& bc, const Field* forcing = nullptr)
{
    Field rate = c.g * ddx(c.v) * (-(dc.delta - 1.0));
    if (forcing) rate += *forcing;
    return advect(h, c.v, rate, sp, bc);
}

/// a4 w^nu (a h)^b g^2 H(v); nonnegative.
inline Field entropy_source(const Field& h_new, const FrozenCoeffs& c, const DerivedConsts& dc)
{
    if (!(c.w.min() > 0.0)) throw NonpositiveCoefficient("frozen l-iterate w must be positive");
    if (!(c.g.min() > 0.0)) throw NonpositiveCoefficient("frozen h-iterate g must be positive");
    const Field n = n_from_h(h_new, dc);
    const Field hv = h_of(c.v, dc);
    Field out(h_new.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = dc.a4 * pos_pow(c.w[i], dc.nu(), "w") * n[i] * c.g[i] * c.g[i] * hv[i];
    }
    return out;
}

/// l_t + v l_x = a4 w^nu n g^2 H(v), with n = (a h_new)^b.
inline Field step_l(const Field& l, const Field& h_new, const FrozenCoeffs& c, const StepParams& sp,
                    const DerivedConsts& dc, const Ghosts& bc, const Field* forcing = nullptr)
{
    Field rate = entropy_source(h_new, c, dc);
    if (forcing) rate += *forcing;
    return advect(l, c.v, rate, sp, bc);
}

/// Explicit part of the momentum equation:
///   -v v_x - a1 phi l_x - l phi_x + a2 g (l^nu)_x Q(v) + a3 l^nu psi Q(v).
inline Field momentum_explicit_terms(const Field& phi_new, const Field& l_new, const Field& psi_new,
                                     const FrozenCoeffs& c, const DerivedConsts& dc)
{
    const Field lnu = pos_pow(l_new, dc.nu(), "l");
    const Field vx = ddx(c.v);
    const Field qv = vx * dc.visc();
    const Field lx = ddx(l_new);
    const Field phix = ddx(phi_new);
    const Field lnux = ddx(lnu);
    Field out(phi_new.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = -c.v[i] * vx[i] - dc.a1 * phi_new[i] * lx[i] - l_new[i] * phix[i] +
                 dc.a2 * c.g[i] * lnux[i] * qv[i] + dc.a3 * lnu[i] * psi_new[i] * qv[i];
    }
    return out;
}

/// Backward Euler in the Lame term a2 l^nu sqrt(h^2 + eps^2) Lu, everything
/// else explicit. One tridiagonal solve.
inline Field step_u(const Field& u, const Field& phi_new, const Field& l_new, const Field& h_new,
                    const Field& psi_new, const FrozenCoeffs& c, const StepParams& sp, const DerivedConsts& dc,
                    const Ghosts& bc = {}, const Field* forcing = nullptr)
{
    detail::check_step(u, c.v, sp);
    if (!(l_new.min() > 0.0)) throw NonpositiveField("l must be positive in the momentum step");
    Field rhs = momentum_explicit_terms(phi_new, l_new, psi_new, c, dc);
    if (forcing) rhs += *forcing;
    Field diffusivity(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
        diffusivity[i] = dc.a2 * pos_pow(l_new[i], dc.nu(), "l") *
                         std::sqrt(h_new[i] * h_new[i] + sp.eps * sp.eps) * dc.visc();
    }
    return implicit_diffusion(u, diffusivity, rhs, sp.dt, bc);
}

/// One full linearized step in the order phi -> h -> psi -> l -> u, with
/// far-field ghost values taken from the state's eta.
inline ReformState linear_step(const ReformState& s, const FrozenCoeffs& c, const StepParams& sp,
                               const DerivedConsts& dc)
{
    const FarField ff = far_field(dc, s.eta);
    ReformState out;
    out.eta = s.eta;
    out.eps = sp.eps;
    out.t = s.t + sp.dt;
    out.phi = step_phi(s.phi, c, sp, dc, {ff.phi, ff.phi});
    out.h = step_h(s.h, c, sp, dc, {ff.h, ff.h});
    out.psi = psi_from_h(out.h, dc);
    out.n = n_from_h(out.h, dc);
    out.l = step_l(s.l, out.h, c, sp, dc, {ff.l, ff.l});
    out.u = step_u(s.u, out.phi, out.l, out.h, out.psi, c, sp, dc, {ff.u, ff.u});
    return out;
}

/// dt = min(cfl dx / max(|u|_inf, c_sound, v_floor), dt_max), where c_sound is
/// the largest sound speed of the state.
inline double choose_dt(const ReformState& s, const DerivedConsts& dc, double cfl, double dt_max, double v_floor)
{
    const double speed = std::max({lp_norm(s.u, kInfNorm), sound_speed_max(s.phi, s.l, dc), v_floor});
    double dt = dt_max;
    if (speed > 0.0) dt = std::min(dt, cfl * s.grid().dx() / speed);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("could not determine a positive time step");
    }
    return dt;
}

} // namespace dcns
