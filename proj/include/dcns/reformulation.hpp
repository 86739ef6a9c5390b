#pragma once

#include <cmath>
#include <string>

#include "dcns/error.hpp"
#include "dcns/field.hpp"
#include "dcns/params.hpp"

namespace dcns {

/// x^e for x > 0 via exp(e ln x). Nonpositive input is an error, never clamped.
inline double pos_pow(double x, double e, const char* what = "field")
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw NonpositiveField(std::string(what) + " must be strictly positive for a fractional power");
    }
    return std::exp(e * std::log(x));
}

inline Field pos_pow(const Field& f, double e, const char* what = "field")
{
    return f.map([&](double v) { return pos_pow(v, e, what); });
}

/// Physical variables and the thermodynamic quantities derived from them.
struct PhysState {
    Field rho;
    Field u;
    Field S;
    Field theta;
    Field P;
    Field e;
};

/// (phi, u, l, h, psi, n) at one time level, plus the regularizers in force.
struct ReformState {
    Field phi;
    Field u;
    Field l;
    Field h;
    Field psi;
    Field n;
    double eta = 0.0;
    double eps = 0.0;
    double t = 0.0;

    const Grid& grid() const noexcept { return phi.grid(); }
};

/// Fills theta = A/R rho^(gamma-1) e^(S/c_v), P = A e^(S/c_v) rho^gamma, e = c_v theta.
inline PhysState make_phys(Field rho, Field u, Field S, const DerivedConsts& dc)
{
    rho.check_same(u);
    rho.check_same(S);
    const double g = dc.gamma();
    const double A = dc.model.A;
    const double R = dc.model.R;
    PhysState p{std::move(rho), std::move(u), std::move(S), {}, {}, {}};
    const Grid& grid = p.rho.grid();
    p.theta = Field(grid);
    p.P = Field(grid);
    p.e = Field(grid);
    for (std::size_t i = 0; i < grid.N(); ++i) {
        if (!(p.rho[i] > 0.0)) {
            throw NonpositiveDensity("density must be positive at node " + std::to_string(i));
        }
        const double ls = std::exp(p.S[i] / dc.cv);
        const double rg1 = pos_pow(p.rho[i], g - 1.0, "rho");
        p.theta[i] = A / R * rg1 * ls;
        p.P[i] = A * ls * rg1 * p.rho[i];
        p.e[i] = dc.cv * p.theta[i];
    }
    return p;
}

inline Field h_from_phi(const Field& phi, const DerivedConsts& dc)
{
    return pos_pow(phi, 2.0 * dc.iota, "phi");
}

inline Field n_from_h(const Field& h, const DerivedConsts& dc)
{
    return h.map([&](double v) {
        if (!(v > 0.0)) throw NonpositiveField("h must be strictly positive");
        return pos_pow(dc.a * v, dc.b, "a*h");
    });
}

/// psi = (a delta / (delta - 1)) d/dx h.
inline Field psi_from_h(const Field& h, const DerivedConsts& dc)
{
    return ddx(h) * dc.psi_factor();
}

inline Field phi_from_rho(const Field& rho, const DerivedConsts& dc)
{
    return rho.map([&](double r) {
        if (!(r > 0.0)) throw NonpositiveDensity("density must be strictly positive");
        return dc.phi_factor() * pos_pow(r, dc.gamma() - 1.0, "rho");
    });
}

inline Field rho_from_phi(const Field& phi, const DerivedConsts& dc)
{
    const double inv = 1.0 / dc.phi_factor();
    return phi.map([&](double f) { return pos_pow(inv * f, 1.0 / (dc.gamma() - 1.0), "phi"); });
}

/// Physical -> reformulated: phi, l, h = phi^(2 iota), n = (a h)^b pointwise;
/// psi by differentiating h on the grid.
inline ReformState to_reformulated(const PhysState& p, const DerivedConsts& dc)
{
    ReformState r;
    r.phi = phi_from_rho(p.rho, dc);
    r.u = p.u;
    r.l = p.S.map([&](double s) { return std::exp(s / dc.cv); });
    r.h = h_from_phi(r.phi, dc);
    r.psi = psi_from_h(r.h, dc);
    r.n = n_from_h(r.h, dc);
    return r;
}

/// Reformulated -> physical: rho from phi, S = c_v ln l, then (theta, P, e).
inline PhysState from_reformulated(const ReformState& r, const DerivedConsts& dc)
{
    if (!(r.phi.min() > 0.0)) throw NonpositiveField("phi must be strictly positive");
    if (!(r.l.min() > 0.0)) throw NonpositiveField("l must be strictly positive");
    Field rho = rho_from_phi(r.phi, dc);
    Field S = r.l.map([&](double l) { return dc.cv * std::log(l); });
    return make_phys(std::move(rho), r.u, std::move(S), dc);
}

/// Q(u) = (2 alpha + beta) u_x in one dimension.
inline Field q_of(const Field& u, const DerivedConsts& dc)
{
    return ddx(u) * dc.visc();
}

/// H(u) = (2 alpha + beta) u_x^2 in one dimension; nonnegative.
inline Field h_of(const Field& u, const DerivedConsts& dc)
{
    Field ux = ddx(u);
    return (ux * ux) * dc.visc();
}

/// Lu = -(2 alpha + beta) u_xx in one dimension.
inline Field lame_of(const Field& u, const DerivedConsts& dc)
{
    return d2dx2(u) * (-dc.visc());
}

/// The divergence form d/dx(u Q(u)) - u d/dx Q(u), which equals h_of(u) in
/// exact arithmetic.
inline Field h_of_divergence_form(const Field& u, const DerivedConsts& dc)
{
    Field q = q_of(u, dc);
    return ddx(u * q) - u * ddx(q);
}

/// Local sound speed sqrt(gamma P / rho) = sqrt((gamma - 1) phi l).
inline double sound_speed_max(const Field& phi, const Field& l, const DerivedConsts& dc)
{
    double c = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        c = std::max(c, std::sqrt(std::max(0.0, (dc.gamma() - 1.0) * phi[i] * l[i])));
    }
    return c;
}

} // namespace dcns
