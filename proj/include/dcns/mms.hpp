#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dcns/field.hpp"
#include "dcns/linearized.hpp"
#include "dcns/params.hpp"

namespace dcns {

/// Errors against a manufactured solution over a refinement sequence.
struct MmsStudy {
    std::string name;
    std::vector<double> h;    // refinement parameter (dx or dt)
    std::vector<double> err;  // max-norm error at the final time

    /// log2(err_k / err_(k+1)) for consecutive levels.
    std::vector<double> orders() const
    {
        std::vector<double> o;
        for (std::size_t k = 0; k + 1 < err.size(); ++k) {
            o.push_back(std::log(err[k] / err[k + 1]) / std::log(h[k] / h[k + 1]));
        }
        return o;
    }
    /// Order between the two finest levels.
    double observed_order() const { return orders().back(); }
};

namespace mms {

// Frozen velocity and its derivative for the transport studies.
inline double tv(double x) { return 0.6 + 0.3 * std::cos(x); }
inline double tv_x(double x) { return -0.3 * std::sin(x); }
inline double tg(double x) { return 1.0 + 0.2 * x * x; }
inline double tw(double x) { return 1.0 + 0.1 * std::cos(x); }

enum class Transported { Phi, H, L };

inline double exact(Transported which, double t, double x)
{
    switch (which) {
    case Transported::Phi: return 2.0 + 0.5 * std::sin(2.0 * x - t);
    case Transported::H: return 1.5 + 0.5 * std::cos(x + t);
    case Transported::L: return 1.0 + 0.3 * std::sin(x - 2.0 * t);
    }
    return 0.0;
}

inline double exact_t(Transported which, double t, double x)
{
    switch (which) {
    case Transported::Phi: return -0.5 * std::cos(2.0 * x - t);
    case Transported::H: return -0.5 * std::sin(x + t);
    case Transported::L: return -0.6 * std::cos(x - 2.0 * t);
    }
    return 0.0;
}

inline double exact_x(Transported which, double t, double x)
{
    switch (which) {
    case Transported::Phi: return std::cos(2.0 * x - t);
    case Transported::H: return -0.5 * std::sin(x + t);
    case Transported::L: return 0.3 * std::cos(x - 2.0 * t);
    }
    return 0.0;
}

/// Error at t = 0.4 of the upwind step for one transported field, on [-1, 1]
/// with N cells and dt = 2 / N.
inline double transport_error(Transported which, std::size_t N, const DerivedConsts& dc,
                              TransportScheme scheme = TransportScheme::Upwind)
{
    const Grid g(1.0, N);
    const double T = 0.4;
    const std::size_t steps = N / 5;
    const double dt = T / static_cast<double>(steps);
    const StepParams sp{dt, 0.0, 1.0, scheme};
    FrozenCoeffs c{Field::from_function(g, tv), Field::from_function(g, tg), Field::from_function(g, tw)};
    Field q = Field::from_function(g, [&](double x) { return exact(which, 0.0, x); });
    const double xl = g.x(0) - g.dx();
    const double xr = g.x(N - 1) + g.dx();
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = dt * static_cast<double>(n);
        const Ghosts bc{exact(which, t, xl), exact(which, t, xr)};
        const Field h_new = Field::from_function(g, [&](double x) { return exact(Transported::H, t + dt, x); });
        Field f = Field::from_function(g, [&](double x) {
            const double base = exact_t(which, t, x) + tv(x) * exact_x(which, t, x);
            switch (which) {
            case Transported::Phi: return base + (dc.gamma() - 1.0) * exact(which, t, x) * tv_x(x);
            case Transported::H: return base + (dc.delta - 1.0) * tg(x) * tv_x(x);
            case Transported::L: {
                const double src = dc.a4 * std::pow(tw(x), dc.nu()) * std::pow(dc.a * exact(Transported::H, t + dt, x), dc.b) *
                                   tg(x) * tg(x) * dc.visc() * tv_x(x) * tv_x(x);
                return base - src;
            }
            }
            return base;
        });
        switch (which) {
        case Transported::Phi: q = step_phi(q, c, sp, dc, bc, &f); break;
        case Transported::H: q = step_h(q, c, sp, dc, bc, &f); break;
        case Transported::L: q = step_l(q, h_new, c, sp, dc, bc, &f); break;
        }
    }
    const Field ref = Field::from_function(g, [&](double x) { return exact(which, T, x); });
    return lp_norm(q - ref, kInfNorm);
}

inline MmsStudy transport_study(Transported which, const DerivedConsts& dc, std::vector<std::size_t> levels = {80, 160, 320, 640, 1280})
{
    static const char* names[] = {"transport:phi", "transport:h", "transport:l"};
    MmsStudy s;
    s.name = names[static_cast<int>(which)];
    for (std::size_t N : levels) {
        s.h.push_back(2.0 / static_cast<double>(N));
        s.err.push_back(transport_error(which, N, dc));
    }
    return s;
}

// Coefficient fields for the momentum studies.
inline double mphi(double x) { return 2.0 + 0.5 * std::sin(x); }
inline double mphi_x(double x) { return 0.5 * std::cos(x); }
inline double ml(double x) { return 1.0 + 0.3 * std::cos(x); }
inline double ml_x(double x) { return -0.3 * std::sin(x); }
inline double mh(double x) { return 1.0 + 0.2 * std::sin(2.0 * x); }
inline double mh_x(double x) { return 0.4 * std::cos(2.0 * x); }
inline double mU(double x) { return std::cos(0.5 * M_PI * x) + 0.2 * std::sin(M_PI * x); }
inline double mU_xx(double x)
{
    return -0.25 * M_PI * M_PI * std::cos(0.5 * M_PI * x) - 0.2 * M_PI * M_PI * std::sin(M_PI * x);
}

struct MomentumCase {
    double v_amp;
    bool linear_in_time;  // u* = (1 + t) U, else u* = cos(t) U
};

/// Error of repeated step_u calls against u*(t, x), with every coefficient
/// field given exactly and the forcing evaluated at the new time level.
inline double momentum_error(std::size_t N, std::size_t steps, double T, const MomentumCase& mc, const DerivedConsts& dc,
                             double eps)
{
    const Grid g(1.0, N);
    const double dt = T / static_cast<double>(steps);
    const StepParams sp{dt, eps, 1.0, TransportScheme::Upwind};
    auto v = [&](double x) { return mc.v_amp * std::sin(M_PI * x); };
    auto v_x = [&](double x) { return mc.v_amp * M_PI * std::cos(M_PI * x); };
    auto amp = [&](double t) { return mc.linear_in_time ? 1.0 + t : std::cos(t); };
    auto amp_t = [&](double t) { return mc.linear_in_time ? 1.0 : -std::sin(t); };
    const double nu = dc.nu();
    const double pf = dc.psi_factor();

    FrozenCoeffs c{Field::from_function(g, v), Field::from_function(g, mh), Field::from_function(g, ml)};
    const Field phi = Field::from_function(g, mphi);
    const Field l = Field::from_function(g, ml);
    const Field h = Field::from_function(g, mh);
    const Field psi = Field::from_function(g, [&](double x) { return pf * mh_x(x); });
    Field u = Field::from_function(g, [&](double x) { return amp(0.0) * mU(x); });
    const double xl = g.x(0) - g.dx();
    const double xr = g.x(N - 1) + g.dx();
    for (std::size_t n = 0; n < steps; ++n) {
        const double t1 = dt * static_cast<double>(n + 1);
        const Field f = Field::from_function(g, [&](double x) {
            const double lnu = std::pow(ml(x), nu);
            const double lnu_x = nu * std::pow(ml(x), nu - 1.0) * ml_x(x);
            const double qv = dc.visc() * v_x(x);
            const double lame = -dc.visc() * amp(t1) * mU_xx(x);
            const double coef = dc.a2 * lnu * std::sqrt(mh(x) * mh(x) + eps * eps);
            return amp_t(t1) * mU(x) + v(x) * v_x(x) + dc.a1 * mphi(x) * ml_x(x) + ml(x) * mphi_x(x) + coef * lame -
                   dc.a2 * mh(x) * lnu_x * qv - dc.a3 * lnu * pf * mh_x(x) * qv;
        });
        const Ghosts bc{amp(t1) * mU(xl), amp(t1) * mU(xr)};
        u = step_u(u, phi, l, h, psi, c, sp, dc, bc, &f);
    }
    const double tT = dt * static_cast<double>(steps);
    const Field ref = Field::from_function(g, [&](double x) { return amp(tT) * mU(x); });
    return lp_norm(u - ref, kInfNorm);
}

/// Spatial order: u* linear in time, so backward Euler is exact in t and
/// only the stencils contribute.
inline MmsStudy momentum_spatial_study(const DerivedConsts& dc, double eps = 1e-3,
                                       std::vector<std::size_t> levels = {32, 64, 128, 256, 512})
{
    MmsStudy s;
    s.name = "momentum:space";
    for (std::size_t N : levels) {
        s.h.push_back(2.0 / static_cast<double>(N));
        s.err.push_back(momentum_error(N, N / 8, 0.25, {0.5, true}, dc, eps));
    }
    return s;
}

/// Temporal order on a fixed fine grid, u* = cos(t) U.
inline MmsStudy momentum_temporal_study(const DerivedConsts& dc, double eps = 1e-3,
                                        std::vector<std::size_t> steps = {8, 16, 32, 64, 128})
{
    MmsStudy s;
    s.name = "momentum:time";
    const double T = 1.0;
    for (std::size_t m : steps) {
        s.h.push_back(T / static_cast<double>(m));
        s.err.push_back(momentum_error(512, m, T, {0.02, false}, dc, eps));
    }
    return s;
}

} // namespace mms
} // namespace dcns
