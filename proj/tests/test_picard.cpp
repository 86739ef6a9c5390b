#include <gtest/gtest.h>

#include <cmath>

#include "dcns/config.hpp"
#include "dcns/picard.hpp"

using namespace dcns;

namespace {

const DerivedConsts& worked()
{
    static const DerivedConsts dc = validate_params(ModelParams{});
    return dc;
}

ReformState flat_state(const Grid& g, const Field& u)
{
    ReformState s;
    s.phi = Field(g, 1.0);
    s.u = u;
    s.l = Field(g, 1.0);
    s.h = Field(g, 1.0);
    s.psi = Field(g);
    s.n = Field(g, 1.0);
    return s;
}

Trajectory single(const ReformState& s)
{
    Trajectory t;
    t.levels = {s};
    t.dt = 1.0;
    return t;
}

Problem worked_problem(std::size_t N = 512)
{
    RunConfig c;
    c.N = N;
    return make_problem(c, true);
}

} // namespace

TEST(GammaMetric, IdenticalTrajectoriesGiveZero)
{
    const Grid g(1.0, 16);
    const Trajectory a = single(flat_state(g, Field::from_function(g, [](double x) { return std::sin(x); })));
    EXPECT_DOUBLE_EQ(gamma_metric(a, a, worked(), 1.0).total(), 0.0);
}

TEST(GammaMetric, VelocityDifferenceByHand)
{
    // u_bar = c x with sqrt(h) = l = 1: Gamma = alpha a2 upsilon1 c^2 2L + c^2 (2L^3/3 - L dx^2 / 6).
    const DerivedConsts& dc = worked();
    const double L = 1.5;
    const Grid g(L, 12);
    const double c = 0.7;
    const Trajectory a = single(flat_state(g, Field(g)));
    const Trajectory b = single(flat_state(g, Field::from_function(g, [&](double x) { return c * x; })));
    const double ups = 0.3;
    const GammaParts p = gamma_metric(a, b, dc, ups);
    const double expect_grad = dc.model.alpha * dc.a2 * ups * c * c * 2.0 * L;
    const double expect_l2 = c * c * (2.0 * L * L * L / 3.0 - L * g.dx() * g.dx() / 6.0);
    EXPECT_NEAR(p.sqrt_h_du, expect_grad, 1e-12 * expect_grad);
    EXPECT_NEAR(p.l_u, expect_l2, 1e-12 * expect_l2);
    EXPECT_DOUBLE_EQ(p.phi_h1 + p.psi_l2 + p.dl_l2, 0.0);

    const Trajectory b2 = single(flat_state(g, Field::from_function(g, [&](double x) { return 2.0 * c * x; })));
    EXPECT_NEAR(gamma_metric(a, b2, dc, ups).total(), 4.0 * p.total(), 1e-12 * p.total());
}

TEST(GammaMetric, SymmetricWhenWeightsAgree)
{
    const Grid g(1.0, 16);
    ReformState s = flat_state(g, Field(g));
    ReformState t = s;
    t.phi = Field::from_function(g, [](double x) { return 1.0 + 0.1 * x * x; });
    t.u = Field::from_function(g, [](double x) { return std::sin(3.0 * x); });
    t.psi = Field(g, 0.3);
    const GammaParts st = gamma_metric(single(s), single(t), worked(), 1.0);
    const GammaParts ts = gamma_metric(single(t), single(s), worked(), 1.0);
    EXPECT_GT(st.total(), 0.0);
    EXPECT_DOUBLE_EQ(st.total(), ts.total());
    EXPECT_NEAR(st.psi_l2, 0.09 * 2.0, 1e-14);
}

TEST(GammaMetric, TakesSupremumOverSamples)
{
    const Grid g(1.0, 16);
    Trajectory a;
    Trajectory b;
    a.dt = b.dt = 0.1;
    for (double amp : {0.1, 0.5, 0.2}) {
        a.levels.push_back(flat_state(g, Field(g)));
        ReformState s = flat_state(g, Field(g));
        s.psi = Field(g, amp);
        b.levels.push_back(s);
    }
    EXPECT_NEAR(gamma_metric(a, b, worked(), 1.0).psi_l2, 0.25 * 2.0, 1e-14);
}

TEST(GammaMetric, MismatchedShapesRejected)
{
    const Grid g(1.0, 16);
    Trajectory a = single(flat_state(g, Field(g)));
    Trajectory b = a;
    b.levels.push_back(b.levels.front());
    EXPECT_THROW(gamma_metric(a, b, worked(), 1.0), ShapeMismatch);
    Trajectory c = single(flat_state(Grid(1.0, 32), Field(Grid(1.0, 32))));
    EXPECT_THROW(gamma_metric(a, c, worked(), 1.0), ShapeMismatch);
}

TEST(TimeGrid, StepsCoverTheWindowExactly)
{
    Problem p = worked_problem(256);
    const ReformState r0 = gen_initial(p.init, p.grid, p.dc);
    const auto [dt, steps] = time_grid(r0, p.dc, p.opts);
    EXPECT_EQ(steps, 6u);
    EXPECT_DOUBLE_EQ(dt * static_cast<double>(steps), p.opts.t_end);
}

TEST(PicardSolve, HomogeneousEquilibriumConvergesAtOnce)
{
    RunConfig c;
    c.N = 64;
    c.init.kappa = 0.0;
    c.init.u0_amp = 0.0;
    const Problem p = make_problem(c, false);
    const ReformState r0 = gen_initial(p.init, p.grid, p.dc, false);
    const PicardResult res = picard_solve(r0, p.dc, p.opts);
    ASSERT_EQ(res.reports.size(), 1u);
    EXPECT_LT(res.reports.front().gamma_metric, 1e-28);
    EXPECT_TRUE(res.reports.front().converged);
    EXPECT_LT(lp_norm(res.trajectory.back().u, kInfNorm), 1e-15);
}

TEST(PicardSolve, WorkedConfigContractsGeometrically)
{
    const Problem p = worked_problem(256);
    const ReformState r0 = gen_initial(p.init, p.grid, p.dc);
    const PicardResult res = picard_solve(r0, p.dc, p.opts);
    ASSERT_GE(res.reports.size(), 5u);
    EXPECT_TRUE(res.reports.back().converged);
    const auto& ratios = res.reports.back().ratios;
    for (double r : ratios) EXPECT_LT(r, 0.5);
    EXPECT_EQ(ratios.size(), res.reports.size() - 1);
    EXPECT_EQ(res.trajectory.levels.size(), 7u);
}

TEST(PicardSolve, ConvergedTrajectoryIsAFixedPoint)
{
    const Problem p = worked_problem(128);
    const ReformState r0 = gen_initial(p.init, p.grid, p.dc);
    const PicardResult res = picard_solve(r0, p.dc, p.opts);
    const Trajectory again = picard_iterate(res.trajectory, p.dc, p.opts.eps, p.opts.scheme);
    EXPECT_LT(gamma_metric(res.trajectory, again, p.dc, p.opts.upsilon1).total(), p.opts.tol);
}

TEST(PicardSolve, IterationBudgetExhausted)
{
    Problem p = worked_problem(64);
    p.opts.max_iters = 2;
    const ReformState r0 = gen_initial(p.init, p.grid, p.dc);
    EXPECT_THROW(picard_solve(r0, p.dc, p.opts), NotConverged);
}

TEST(PicardSolve, AdaptiveLeavesAContractingWindowAlone)
{
    const Problem p = worked_problem(64);
    const ReformState r0 = gen_initial(p.init, p.grid, p.dc);
    const PicardResult res = picard_solve_adaptive(r0, p.dc, p.opts);
    EXPECT_EQ(res.halvings, 0);
    EXPECT_DOUBLE_EQ(res.t_end, p.opts.t_end);
}

TEST(Continuation, ScheduleIsGeometric)
{
    ContinuationPlan plan;
    plan.start = 0.1;
    plan.factor = 0.5;
    plan.count = 4;
    const auto v = continuation_values(plan);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_DOUBLE_EQ(v[3], 0.0125);
    plan.count = 0;
    EXPECT_THROW(continuation_values(plan), ConfigError);
}

TEST(Continuation, SingleLegHasNoDifferences)
{
    ContinuationPlan plan;
    plan.count = 1;
    const auto rows = continuation_run(plan, worked_problem(64));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(std::isnan(rows[0].diff_u));
    EXPECT_TRUE(std::isnan(rows[0].diff_l));
    EXPECT_GT(rows[0].min_phi_window, 0.0);
}

TEST(Continuation, FailingLegIsReported)
{
    Problem p = worked_problem(64);
    p.opts.max_iters = 1;
    ContinuationPlan plan;
    plan.count = 2;
    try {
        continuation_run(plan, p);
        FAIL() << "expected LegFailed";
    } catch (const LegFailed& e) {
        EXPECT_EQ(e.leg(), 0);
    }
}

TEST(Continuation, EtaLegsMonotoneInPositivity)
{
    ContinuationPlan plan;
    plan.param = ContinuationParam::Eta;
    plan.start = 0.1;
    plan.count = 3;
    const auto rows = continuation_run(plan, worked_problem(128));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[0].min_phi_window, rows[1].min_phi_window);
    EXPECT_GT(rows[1].min_phi_window, rows[2].min_phi_window);
    EXPECT_GT(rows[1].diff_u, rows[2].diff_u);
}
