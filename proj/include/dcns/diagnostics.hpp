#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcns/error.hpp"
#include "dcns/field.hpp"
#include "dcns/params.hpp"
#include "dcns/reformulation.hpp"

namespace dcns {

/// Per-time-level quantities: conserved integrals, bounds, weighted norms and
/// relation residuals.
struct DiagRecord {
    double t = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
    double E_k = 0.0;
    double E_p = 0.0;
    double E = 0.0;
    double l_min = 0.0;
    double l_max = 0.0;
    double u_linf = 0.0;
    double du_linf = 0.0;  // |u_x|_inf, integrated by the positivity check
    double phi_min = 0.0;
    double w_phi_iota_grad_u = 0.0;  // |phi^iota u_x|_2
    double w_h_d2u = 0.0;            // |h u_xx|_2
    double w_h14_dl = 0.0;           // |h^(1/4) l_x|_6
    double h_d2u_d1 = 0.0;           // |(h u_xx)_x|_2, tracked only
    double psi_lq = 0.0;             // |psi|_q
    double psi_d13 = 0.0;            // |psi_x|_3
    double res_h = 0.0;              // |h - phi^(2 iota)|_inf
    double res_psi = 0.0;            // |psi - (a delta/(delta-1)) d/dx phi^(2 iota)|_2
    double res_n = 0.0;              // |n - (a h)^b|_inf
    double c_u0 = 0.0;               // |P_mom(0)| / m(0)
    double slack = 0.0;
    bool bound_ok = true;
};

/// Builds the record for one state. `ref0` is the t = 0 record of the run
/// (nullptr when `state` itself is the reference).
inline DiagRecord record(const ReformState& state, const DerivedConsts& dc, const DiagRecord* ref0 = nullptr,
                         double q = 24.0)
{
    const PhysState p = from_reformulated(state, dc);
    DiagRecord r;
    r.t = state.t;
    r.mass = integrate(p.rho);
    r.momentum = integrate(p.rho * p.u);
    r.E_k = 0.5 * integrate(p.rho * p.u * p.u);
    r.E_p = integrate(p.P) / (dc.gamma() - 1.0);
    r.E = r.E_k + r.E_p;
    r.l_min = state.l.min();
    r.l_max = state.l.max();
    r.u_linf = lp_norm(state.u, kInfNorm);
    const Field ux = ddx(state.u);
    const Field uxx = d2dx2(state.u);
    r.du_linf = lp_norm(ux, kInfNorm);
    r.phi_min = state.phi.min();
    r.w_phi_iota_grad_u = lp_norm(pos_pow(state.phi, dc.iota, "phi") * ux, 2.0);
    r.w_h_d2u = lp_norm(state.h * uxx, 2.0);
    r.w_h14_dl = lp_norm(pos_pow(state.h, 0.25, "h") * ddx(state.l), 6.0);
    r.h_d2u_d1 = lp_norm(ddx(state.h * uxx), 2.0);
    r.psi_lq = lp_norm(state.psi, q);
    r.psi_d13 = lp_norm(ddx(state.psi), 3.0);

    const Field h_phi = h_from_phi(state.phi, dc);
    r.res_h = lp_norm(state.h - h_phi, kInfNorm);
    r.res_psi = lp_norm(state.psi - psi_from_h(h_phi, dc), 2.0);
    r.res_n = lp_norm(state.n - n_from_h(state.h, dc), kInfNorm);

    const double m0 = ref0 ? ref0->mass : r.mass;
    const double p0 = ref0 ? ref0->momentum : r.momentum;
    if (std::abs(p0) > 0.0 && m0 > 0.0) {
        r.c_u0 = std::abs(p0) / m0;
        r.slack = 2.0 * (r.c_u0 * std::abs(r.mass - m0) / m0 + std::abs(std::abs(r.momentum) - std::abs(p0)) / m0);
        r.bound_ok = r.u_linf >= r.c_u0 - r.slack;
    } else {
        r.c_u0 = 0.0;
        r.slack = 0.0;
        r.bound_ok = true;
    }
    return r;
}

/// Records for every level of a run, each against the first.
template <class States>
std::vector<DiagRecord> record_all(const States& states, const DerivedConsts& dc, double q = 24.0)
{
    std::vector<DiagRecord> out;
    for (const auto& s : states) {
        if (out.empty()) {
            out.push_back(record(s, dc, nullptr, q));
        } else {
            out.push_back(record(s, dc, &out.front(), q));
        }
    }
    return out;
}

struct Drift {
    double value = 0.0;
    bool relative = true;  // false when the reference value is zero
};

struct DriftReport {
    Drift mass;
    Drift momentum;
    Drift energy;
};

namespace detail {

template <class Get>
Drift max_drift(const std::vector<DiagRecord>& recs, Get get)
{
    const double q0 = get(recs.front());
    double m = 0.0;
    for (const auto& r : recs) m = std::max(m, std::abs(get(r) - q0));
    if (q0 == 0.0) return {m, false};
    return {m / std::abs(q0), true};
}

} // namespace detail

/// max_t |q(t) - q(0)| / |q(0)| for mass, momentum and total energy; the
/// absolute drift where q(0) = 0.
inline DriftReport drift_report(const std::vector<DiagRecord>& recs)
{
    if (recs.size() < 2) {
        throw ShapeMismatch("drift_report needs at least two records");
    }
    DriftReport d;
    d.mass = detail::max_drift(recs, [](const DiagRecord& r) { return r.mass; });
    d.momentum = detail::max_drift(recs, [](const DiagRecord& r) { return r.momentum; });
    d.energy = detail::max_drift(recs, [](const DiagRecord& r) { return r.E; });
    return d;
}

struct DriftOrder {
    double mass = 0.0;
    double momentum = 0.0;
    double energy = 0.0;
};

/// Empirical order log2(drift_N / drift_2N) from a run at N and one at 2N.
inline DriftOrder drift_order(const DriftReport& coarse, const DriftReport& fine)
{
    auto ord = [](const Drift& c, const Drift& f) {
        if (f.value == 0.0) return c.value == 0.0 ? 0.0 : kInfNorm;
        return std::log2(c.value / f.value);
    };
    return {ord(coarse.mass, fine.mass), ord(coarse.momentum, fine.momentum), ord(coarse.energy, fine.energy)};
}

/// How far min_x l ever falls below its initial value (0 when it never does).
inline double entropy_floor_deficit(const std::vector<DiagRecord>& recs)
{
    double d = 0.0;
    for (const auto& r : recs) d = std::max(d, recs.front().l_min - r.l_min);
    return d;
}

/// Largest amount by which phi_min(t) falls below
/// phi_min(0) exp(-(gamma - 1) int_0^t |u_x|_inf ds), the integral by the
/// trapezoid rule over the records.
inline double positivity_deficit(const std::vector<DiagRecord>& recs, const DerivedConsts& dc)
{
    double integral = 0.0;
    double d = 0.0;
    for (std::size_t k = 1; k < recs.size(); ++k) {
        integral += 0.5 * (recs[k].du_linf + recs[k - 1].du_linf) * (recs[k].t - recs[k - 1].t);
        const double bound = recs.front().phi_min * std::exp(-(dc.gamma() - 1.0) * integral);
        d = std::max(d, bound - recs[k].phi_min);
    }
    return d;
}

/// |P_mom| - sqrt(2 m E_k); nonpositive up to round-off for any record.
inline double momentum_cauchy_schwarz_gap(const DiagRecord& r)
{
    return std::abs(r.momentum) - std::sqrt(2.0 * r.mass * r.E_k);
}

} // namespace dcns
