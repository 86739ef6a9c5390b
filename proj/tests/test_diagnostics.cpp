#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dcns/config.hpp"
#include "dcns/diagnostics.hpp"

using namespace dcns;

namespace {

const DerivedConsts& worked()
{
    static const DerivedConsts dc = validate_params(ModelParams{});
    return dc;
}

ReformState from_rho_u(const Field& rho, const Field& u)
{
    const DerivedConsts& dc = worked();
    ReformState r = to_reformulated(make_phys(rho, u, Field(rho.grid()), dc), dc);
    return r;
}

} // namespace

TEST(Record, RestStateHasNoMomentum)
{
    const Grid g(1.0, 16);
    const DiagRecord r = record(from_rho_u(Field(g, 1.0), Field(g)), worked());
    EXPECT_DOUBLE_EQ(r.momentum, 0.0);
    EXPECT_DOUBLE_EQ(r.E_k, 0.0);
    EXPECT_TRUE(r.bound_ok);
    EXPECT_DOUBLE_EQ(r.c_u0, 0.0);
}

TEST(Record, UniformFlowHandIntegrals)
{
    const Grid g(1.0, 16);
    const DiagRecord r = record(from_rho_u(Field(g, 1.0), Field(g, 0.5)), worked());
    EXPECT_NEAR(r.mass, 2.0, 1e-14);
    EXPECT_NEAR(r.momentum, 1.0, 1e-14);
    EXPECT_NEAR(r.E_k, 0.25, 1e-14);
    EXPECT_NEAR(r.E_p, 2.0 / 0.4, 1e-12);
    EXPECT_NEAR(r.c_u0, 0.5, 1e-14);
    EXPECT_NEAR(r.u_linf, 0.5, 1e-15);
    EXPECT_TRUE(r.bound_ok);
    EXPECT_NEAR(r.res_h, 0.0, 1e-15);
    EXPECT_NEAR(r.res_psi, 0.0, 1e-15);
    EXPECT_NEAR(r.res_n, 0.0, 1e-15);
}

TEST(Record, DiscreteCauchySchwarzAtRandomFields)
{
    const Grid g(3.0, 64);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Field rho(g), u(g);
        for (std::size_t i = 0; i < g.N(); ++i) {
            rho[i] = 0.01 + U(rng);
            u[i] = 4.0 * U(rng) - 2.0;
        }
        const DiagRecord r = record(from_rho_u(rho, u), worked());
        EXPECT_LE(momentum_cauchy_schwarz_gap(r), 1e-14 * std::sqrt(2.0 * r.mass * r.E_k));
        EXPECT_GE(r.E_k, 0.0);
        EXPECT_GE(r.E_p, 0.0);
    }
}

TEST(Record, VelocityBoundUsesReference)
{
    const Grid g(1.0, 16);
    const DiagRecord r0 = record(from_rho_u(Field(g, 1.0), Field(g, 0.5)), worked());
    const DiagRecord low = record(from_rho_u(Field(g, 1.0), Field(g, 0.2)), worked(), &r0);
    EXPECT_NEAR(low.c_u0, 0.5, 1e-14);
    EXPECT_NEAR(low.slack, 0.6, 1e-14);  // twice the momentum drift per unit mass
    EXPECT_TRUE(low.bound_ok);
    const DiagRecord same = record(from_rho_u(Field(g, 1.0), Field(g, 0.5)), worked(), &r0);
    EXPECT_DOUBLE_EQ(same.slack, 0.0);
    EXPECT_TRUE(same.bound_ok);
}

TEST(DriftReport, RelativeAndAbsoluteBranches)
{
    std::vector<DiagRecord> recs(3);
    for (auto& r : recs) {
        r.mass = 2.0;
        r.E = 5.0;
    }
    recs[1].mass = 2.002;
    recs[2].momentum = 3e-4;
    const DriftReport d = drift_report(recs);
    EXPECT_TRUE(d.mass.relative);
    EXPECT_NEAR(d.mass.value, 1e-3, 1e-15);
    EXPECT_FALSE(d.momentum.relative);
    EXPECT_DOUBLE_EQ(d.momentum.value, 3e-4);
    EXPECT_DOUBLE_EQ(d.energy.value, 0.0);
    EXPECT_THROW(drift_report(std::vector<DiagRecord>(1)), ShapeMismatch);
}

TEST(DriftOrder, FromCoarseAndFine)
{
    DriftReport c;
    DriftReport f;
    c.mass.value = 4e-4;
    f.mass.value = 1e-4;
    c.energy.value = f.energy.value = 0.0;
    const DriftOrder o = drift_order(c, f);
    EXPECT_DOUBLE_EQ(o.mass, 2.0);
    EXPECT_DOUBLE_EQ(o.energy, 0.0);
}

TEST(PositivityDeficit, TrapezoidBound)
{
    std::vector<DiagRecord> recs(3);
    const double rates[] = {1.0, 1.0, 1.0};
    for (int k = 0; k < 3; ++k) {
        recs[k].t = 0.1 * k;
        recs[k].du_linf = rates[k];
    }
    recs[0].phi_min = 1.0;
    recs[1].phi_min = std::exp(-0.4 * 0.1);
    recs[2].phi_min = std::exp(-0.4 * 0.2) - 1e-3;
    EXPECT_NEAR(positivity_deficit(recs, worked()), 1e-3, 1e-14);
    recs[2].phi_min = 1.0;
    EXPECT_NEAR(positivity_deficit(recs, worked()), 0.0, 1e-15);
}

TEST(EntropyFloor, DeficitOfDecreasingMinimum)
{
    std::vector<DiagRecord> recs(3);
    recs[0].l_min = 1.0;
    recs[1].l_min = 1.1;
    recs[2].l_min = 0.9;
    EXPECT_DOUBLE_EQ(entropy_floor_deficit(recs), 1.0 - 0.9);
}

TEST(Run, StaticEquilibriumConservesExactly)
{
    RunConfig c;
    c.N = 128;
    c.init.kappa = 0.0;
    c.init.u0_amp = 0.0;
    const Problem p = make_problem(c, false);
    const PicardResult res = picard_solve(gen_initial(p.init, p.grid, p.dc, false), p.dc, p.opts);
    const DriftReport d = drift_report(record_all(res.trajectory.levels, p.dc));
    EXPECT_LE(d.mass.value, 1e-12);
    EXPECT_LE(d.momentum.value, 1e-12);
    EXPECT_LE(d.energy.value, 1e-12);
}

TEST(Run, AdvectingBumpDriftHalvesUnderRefinement)
{
    auto drift = [](std::size_t N, double dt) {
        RunConfig c;
        c.N = N;
        c.dt_max = dt;
        const Problem p = make_problem(c, true);
        const PicardResult res = picard_solve(gen_initial(p.init, p.grid, p.dc), p.dc, p.opts);
        return drift_report(record_all(res.trajectory.levels, p.dc));
    };
    const DriftReport a = drift(256, 2.5e-4);
    const DriftReport b = drift(512, 1.25e-4);
    EXPECT_GE(a.mass.value / b.mass.value, 1.7);
    EXPECT_GE(a.momentum.value / b.momentum.value, 1.7);
}
