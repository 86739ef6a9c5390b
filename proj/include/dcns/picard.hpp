#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "dcns/error.hpp"
#include "dcns/field.hpp"
#include "dcns/initial_data.hpp"
#include "dcns/linearized.hpp"
#include "dcns/params.hpp"
#include "dcns/reformulation.hpp"

namespace dcns {

/// States at t = 0, dt, ..., steps * dt on a fixed time grid.
struct Trajectory {
    std::vector<ReformState> levels;
    double dt = 0.0;

    std::size_t steps() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
    const ReformState& front() const { return levels.front(); }
    const ReformState& back() const { return levels.back(); }
};

struct PicardOptions {
    double t_end = 0.01;
    double cfl = 0.5;
    double dt_max = 1.0;
    double v_floor = 1.0;
    double eps = 1e-3;
    double tol = 1e-24;
    int max_iters = 50;
    double upsilon1 = 1.0;
    int max_halvings = 6;
    TransportScheme scheme = TransportScheme::Upwind;
};

/// The five sup-in-time terms of the contraction functional.
struct GammaParts {
    double phi_h1 = 0.0;     // sup |phi_bar|_2^2 + |d phi_bar|_2^2
    double psi_l2 = 0.0;     // sup |psi_bar|_2^2
    double dl_l2 = 0.0;      // sup |d l_bar|_2^2
    double sqrt_h_du = 0.0;  // sup alpha a2 upsilon1 |sqrt(h) d u_bar|_2^2
    double l_u = 0.0;        // sup |l^(-nu/2) u_bar|_2^2

    double total() const noexcept { return phi_h1 + psi_l2 + dl_l2 + sqrt_h_du + l_u; }
};

/// Discrete contraction functional between consecutive iterates. The weights
/// h and l come from `next`.
inline GammaParts gamma_metric(const Trajectory& prev, const Trajectory& next, const DerivedConsts& dc,
                               double upsilon1)
{
    if (prev.levels.size() != next.levels.size() || prev.levels.empty()) {
        throw ShapeMismatch("trajectories have different numbers of time samples");
    }
    GammaParts g;
    auto sq = [](double v) { return v * v; };
    for (std::size_t k = 0; k < next.levels.size(); ++k) {
        const ReformState& a = prev.levels[k];
        const ReformState& b = next.levels[k];
        if (!(a.grid() == b.grid())) {
            throw ShapeMismatch("trajectories live on different grids");
        }
        const Field dphi = b.phi - a.phi;
        const Field du = b.u - a.u;
        const Field sqrt_h = pos_pow(b.h, 0.5, "h");
        const Field l_w = pos_pow(b.l, -0.5 * dc.nu(), "l");
        g.phi_h1 = std::max(g.phi_h1, sq(lp_norm(dphi, 2.0)) + sq(lp_norm(ddx(dphi), 2.0)));
        g.psi_l2 = std::max(g.psi_l2, sq(lp_norm(b.psi - a.psi, 2.0)));
        g.dl_l2 = std::max(g.dl_l2, sq(lp_norm(ddx(b.l - a.l), 2.0)));
        g.sqrt_h_du = std::max(g.sqrt_h_du, dc.model.alpha * dc.a2 * upsilon1 * sq(lp_norm(sqrt_h * ddx(du), 2.0)));
        g.l_u = std::max(g.l_u, sq(lp_norm(l_w * du, 2.0)));
    }
    return g;
}

/// Starting iterate: phi, l, h transported by u_0 and u_0 diffused with
/// diffusivity h, on the time grid of the Picard solve.
inline Trajectory initial_iterate(const ReformState& r0, const DerivedConsts& dc, double dt, std::size_t steps,
                                  TransportScheme scheme)
{
    const FarField ff = far_field(dc, r0.eta);
    StepParams sp{dt, r0.eps, 1.0, scheme};
    const Field zero(r0.grid());
    Trajectory tr;
    tr.dt = dt;
    tr.levels.reserve(steps + 1);
    tr.levels.push_back(r0);
    for (std::size_t n = 0; n < steps; ++n) {
        const ReformState& s = tr.levels.back();
        ReformState o;
        o.eta = s.eta;
        o.eps = s.eps;
        o.t = s.t + dt;
        o.phi = advect(s.phi, r0.u, zero, sp, {ff.phi, ff.phi});
        o.l = advect(s.l, r0.u, zero, sp, {ff.l, ff.l});
        o.h = advect(s.h, r0.u, zero, sp, {ff.h, ff.h});
        o.u = implicit_diffusion(s.u, s.h, zero, dt, {ff.u, ff.u});
        o.psi = psi_from_h(o.h, dc);
        o.n = n_from_h(o.h, dc);
        tr.levels.push_back(std::move(o));
    }
    return tr;
}

/// Solves the linearized problem with (v, g, w) frozen at the previous
/// iterate (u, h, l) on every time level.
inline Trajectory picard_iterate(const Trajectory& prev, const DerivedConsts& dc, double eps, TransportScheme scheme)
{
    StepParams sp{prev.dt, eps, 1.0, scheme};
    Trajectory tr;
    tr.dt = prev.dt;
    tr.levels.reserve(prev.levels.size());
    ReformState start = prev.front();
    start.eps = eps;
    tr.levels.push_back(std::move(start));
    for (std::size_t n = 0; n + 1 < prev.levels.size(); ++n) {
        const ReformState& frozen = prev.levels[n];
        FrozenCoeffs c{frozen.u, frozen.h, frozen.l};
        tr.levels.push_back(linear_step(tr.levels.back(), c, sp, dc));
    }
    return tr;
}

struct IterationReport {
    int k = 0;  // index of the new iterate; gamma measures iterate k against k-1
    double gamma_metric = 0.0;
    GammaParts parts;
    bool converged = false;
    std::vector<double> ratios;  // Gamma^j / Gamma^(j-1) for j = 2..k
};

struct PicardResult {
    Trajectory trajectory;
    std::vector<IterationReport> reports;
    double t_end = 0.0;
    int halvings = 0;
};

/// Fixed time grid: steps = ceil(t_end / dt_cfl), dt = t_end / steps.
inline std::pair<double, std::size_t> time_grid(const ReformState& r0, const DerivedConsts& dc,
                                                const PicardOptions& opts)
{
    if (!(opts.t_end > 0.0)) throw ConfigError("t_end must be positive");
    const double dt_cfl = choose_dt(r0, dc, opts.cfl, opts.dt_max, opts.v_floor);
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(opts.t_end / dt_cfl - 1e-9)));
    return {opts.t_end / static_cast<double>(steps), steps};
}

/// Picard iteration over [0, t_end]. Converged when Gamma < tol, or when the
/// ratio Gamma^(k+1)/Gamma^k < 1 for 3 consecutive k with Gamma < 10 tol.
/// Three consecutive ratios >= 1 raise NoContraction.
inline PicardResult picard_solve(const ReformState& r0, const DerivedConsts& dc, const PicardOptions& opts)
{
    auto [dt, steps] = time_grid(r0, dc, opts);
    ReformState start = r0;
    start.t = 0.0;
    start.eps = opts.eps;
    Trajectory prev = initial_iterate(start, dc, dt, steps, opts.scheme);

    PicardResult res;
    res.t_end = opts.t_end;
    std::vector<double> history;
    std::vector<double> ratios;
    int below = 0;
    int above = 0;
    for (int k = 1; k <= opts.max_iters; ++k) {
        Trajectory next = picard_iterate(prev, dc, opts.eps, opts.scheme);
        IterationReport rep;
        rep.k = k;
        rep.parts = gamma_metric(prev, next, dc, opts.upsilon1);
        rep.gamma_metric = rep.parts.total();
        if (!history.empty()) {
            const double last = history.back();
            const double ratio = last > 0.0 ? rep.gamma_metric / last : (rep.gamma_metric > 0.0 ? kInfNorm : 0.0);
            ratios.push_back(ratio);
            below = ratio < 1.0 ? below + 1 : 0;
            above = ratio >= 1.0 ? above + 1 : 0;
        }
        history.push_back(rep.gamma_metric);
        rep.ratios = ratios;
        rep.converged = rep.gamma_metric < opts.tol || (below >= 3 && rep.gamma_metric < 10.0 * opts.tol);
        res.reports.push_back(rep);
        if (!std::isfinite(rep.gamma_metric)) {
            throw NoContraction("contraction functional is not finite at iterate " + std::to_string(k));
        }
        if (rep.converged) {
            res.trajectory = std::move(next);
            return res;
        }
        if (above >= 3) {
            throw NoContraction("contraction ratio >= 1 for 3 consecutive iterates (k = " + std::to_string(k) +
                                "); reduce the time window");
        }
        prev = std::move(next);
    }
    throw NotConverged("Picard iteration did not reach tol " + detail::fmt_num(opts.tol) + " in " +
                       std::to_string(opts.max_iters) + " iterates");
}

/// picard_solve with the time window halved on NoContraction, at most
/// opts.max_halvings times.
inline PicardResult picard_solve_adaptive(const ReformState& r0, const DerivedConsts& dc, PicardOptions opts)
{
    for (int h = 0;; ++h) {
        try {
            PicardResult r = picard_solve(r0, dc, opts);
            r.halvings = h;
            return r;
        } catch (const NoContraction&) {
            if (h >= opts.max_halvings) throw;
            opts.t_end *= 0.5;
        }
    }
}

/// Everything needed to set up one solve from scratch.
struct Problem {
    DerivedConsts dc;
    InitSpec init;
    Grid grid;
    PicardOptions opts;
    bool strict = true;
};

enum class ContinuationParam { Eps, Eta };

struct ContinuationPlan {
    ContinuationParam param = ContinuationParam::Eps;
    double start = 1e-2;
    double factor = 0.5;
    int count = 5;
    double R0 = 2.0;
};

struct ContinuationRow {
    int leg = 0;
    double value = 0.0;
    int iterations = 0;
    double t_end = 0.0;
    // Differences to the previous leg at t = t_end; NaN on the first leg.
    // Global for eps legs, restricted to |x| <= R0 for eta legs.
    double diff_u = std::numeric_limits<double>::quiet_NaN();
    double diff_phi = std::numeric_limits<double>::quiet_NaN();  // of phi - eta
    double diff_l = std::numeric_limits<double>::quiet_NaN();
    double min_phi_window = 0.0;  // min over [0, t_end] x [-R0, R0] of phi
    double entropy_deficit = 0.0;  // max_t (min_x l(0) - min_x l(t)), clipped at 0
};

inline std::vector<double> continuation_values(const ContinuationPlan& plan)
{
    if (plan.count < 1) throw ConfigError("[continuation] count must be >= 1");
    if (!(plan.start > 0.0) || !(plan.factor > 0.0)) throw ConfigError("[continuation] start and factor must be positive");
    std::vector<double> v(static_cast<std::size_t>(plan.count));
    double x = plan.start;
    for (auto& e : v) {
        e = x;
        x *= plan.factor;
    }
    return v;
}

/// Runs one converged Picard solve per schedule value and tabulates L^2
/// differences between consecutive legs. Legs run concurrently.
inline std::vector<ContinuationRow> continuation_run(const ContinuationPlan& plan, const Problem& base)
{
    const std::vector<double> values = continuation_values(plan);
    const bool eta_leg = plan.param == ContinuationParam::Eta;

    auto run_leg = [&](std::size_t idx) {
        Problem p = base;
        if (eta_leg) {
            p.init.eta = values[idx];
        } else {
            p.opts.eps = values[idx];
        }
        ReformState r0 = gen_initial(p.init, p.grid, p.dc, p.strict);
        return picard_solve(r0, p.dc, p.opts);
    };

    std::vector<std::future<PicardResult>> futures;
    futures.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        futures.push_back(std::async(std::launch::async, run_leg, i));
    }
    std::vector<PicardResult> legs;
    legs.reserve(values.size());
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            legs.push_back(futures[i].get());
        } catch (const std::exception& e) {
            for (std::size_t j = i + 1; j < futures.size(); ++j) {
                try { futures[j].get(); } catch (...) {}
            }
            throw LegFailed(static_cast<int>(i), e.what());
        }
    }

    std::vector<ContinuationRow> rows;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        const Trajectory& tr = legs[i].trajectory;
        ContinuationRow row;
        row.leg = static_cast<int>(i);
        row.value = values[i];
        row.iterations = static_cast<int>(legs[i].reports.size());
        row.t_end = legs[i].t_end;
        double mn = kInfNorm;
        for (const auto& s : tr.levels) mn = std::min(mn, min_window(s.phi, plan.R0));
        row.min_phi_window = mn;
        const double l0 = tr.front().l.min();
        for (const auto& s : tr.levels) row.entropy_deficit = std::max(row.entropy_deficit, l0 - s.l.min());
        if (i > 0) {
            const ReformState& a = legs[i - 1].trajectory.back();
            const ReformState& b = tr.back();
            const Field da = b.u - a.u;
            const Field dp = (b.phi + (-b.eta)) - (a.phi + (-a.eta));
            const Field dl = b.l - a.l;
            if (eta_leg) {
                row.diff_u = lp_norm_window(da, 2.0, plan.R0);
                row.diff_phi = lp_norm_window(dp, 2.0, plan.R0);
                row.diff_l = lp_norm_window(dl, 2.0, plan.R0);
            } else {
                row.diff_u = lp_norm(da, 2.0);
                row.diff_phi = lp_norm(dp, 2.0);
                row.diff_l = lp_norm(dl, 2.0);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace dcns
