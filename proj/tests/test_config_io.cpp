#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "dcns/config.hpp"
#include "dcns/io.hpp"

using namespace dcns;

TEST(Config, DefaultsRoundTrip)
{
    const RunConfig c;
    EXPECT_EQ(parse_config(to_ini(c)), c);
}

TEST(Config, NonDefaultValuesRoundTrip)
{
    RunConfig c;
    c.model.gamma = 1.3;
    c.model.c_v = 1.0 / 0.3;
    c.model.S_bar = 0.1;
    c.N = 1000;
    c.init.eta = 0.1 / 3.0;
    c.transport = TransportScheme::SemiLagrangianCubic;
    c.continuation.param = ContinuationParam::Eta;
    c.output_dir = "some/where";
    c.snapshot_every = 7;
    const std::string text = to_ini(c);
    const RunConfig back = parse_config(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(to_ini(back), text);
}

TEST(Config, ShippedConfigsParse)
{
    for (const char* name : {"worked.ini", "static_equilibrium.ini", "entropy_bump.ini", "gamma_1_5.ini"}) {
        SCOPED_TRACE(name);
        const RunConfig c = load_config(std::string(DCNS_CONFIG_DIR) + "/" + name);
        EXPECT_EQ(parse_config(to_ini(c)), c);
    }
}

TEST(Config, WorkedFileMatchesDefaults)
{
    RunConfig expect;
    expect.output_dir = "out/worked";
    expect.snapshot_every = 1;
    EXPECT_EQ(load_config(std::string(DCNS_CONFIG_DIR) + "/worked.ini"), expect);
}

TEST(Config, UnknownKeysAndSectionsAreErrors)
{
    EXPECT_THROW(parse_config("[model]\ngama = 1.4\n"), ParseError);
    EXPECT_THROW(parse_config("[modle]\ngamma = 1.4\n"), ParseError);
    EXPECT_THROW(parse_config("gamma = 1.4\n"), ParseError);
}

TEST(Config, MalformedValuesAreErrors)
{
    EXPECT_THROW(parse_config("[model]\ngamma = 1.4x\n"), ParseError);
    EXPECT_THROW(parse_config("[domain]\nN = 12.5\n"), ParseError);
    EXPECT_THROW(parse_config("[domain]\nN = 4\n"), ConfigError);
    EXPECT_THROW(parse_config("[time]\ntransport = spectral\n"), ParseError);
    EXPECT_THROW(parse_config("[continuation]\nparam = kappa\n"), ParseError);
    EXPECT_THROW(parse_config("[model]\ngamma = 1.4\ngamma = 1.5\n"), ParseError);
}

TEST(Config, CommentsAndMissingKeys)
{
    const RunConfig c = parse_config("; lead\n# other\n[init]\nkappa = 0.65\n");
    EXPECT_DOUBLE_EQ(c.init.kappa, 0.65);
    EXPECT_DOUBLE_EQ(c.model.gamma, 1.4);
}

TEST(Config, ProblemValidation)
{
    RunConfig c;
    c.cfl = 1.5;
    EXPECT_THROW(make_problem(c, true), ConfigError);
    c = RunConfig{};
    c.init.kappa = 0.6;
    EXPECT_THROW(make_problem(c, true), InadmissibleKappa);
    EXPECT_NO_THROW(make_problem(c, false));
}

TEST(Snapshot, WriteReadRoundTrip)
{
    const DerivedConsts dc = validate_params(ModelParams{});
    InitSpec spec;
    spec.s0_amp = 0.3;
    ReformState s = gen_initial(spec, Grid(10.0, 64), dc);
    s.t = 0.0125;
    const std::string text = snapshot_csv(s, dc);
    EXPECT_EQ(text.substr(0, text.find('\n')), "# t=0.012500000000000001");
    const ReformState back = read_snapshot(text);
    EXPECT_EQ(back.t, s.t);
    EXPECT_EQ(back.grid().N(), 64u);
    EXPECT_NEAR(back.grid().L(), 10.0, 1e-12);
    EXPECT_EQ(back.phi.vec(), s.phi.vec());
    EXPECT_EQ(back.u.vec(), s.u.vec());
    EXPECT_EQ(back.l.vec(), s.l.vec());
    EXPECT_EQ(back.psi.vec(), s.psi.vec());
    EXPECT_EQ(snapshot_csv(read_snapshot(text, 10.0), dc), text);
}

TEST(Snapshot, RejectsMalformedInput)
{
    EXPECT_THROW(read_snapshot("x,rho\n"), ParseError);
    EXPECT_THROW(read_snapshot("# t=0\nx,rho,u\n"), ParseError);
    EXPECT_THROW(read_snapshot("# t=0\nx,rho,u,S,phi,l,h,psi,n,theta\n1,2,3\n"), ParseError);
}

TEST(Diagnostics, CsvLayout)
{
    std::vector<DiagRecord> recs(2);
    recs[1].t = 0.5;
    recs[1].bound_ok = false;
    const std::string csv = diagnostics_csv(recs);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kDiagnosticsHeader);
    const std::string last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
    EXPECT_EQ(last.substr(0, 4), "0.5,");
    EXPECT_EQ(last.substr(last.size() - 3), ",0\n");
    EXPECT_EQ(std::count(last.begin(), last.end(), ','), 16);
}

TEST(Output, EnvironmentOverridesConfigDirectory)
{
    RunConfig c;
    c.output_dir = "from_config";
    unsetenv("CNS_OUT_DIR");
    EXPECT_EQ(output_dir(c), std::filesystem::path("from_config"));
    setenv("CNS_OUT_DIR", "from_env", 1);
    EXPECT_EQ(output_dir(c), std::filesystem::path("from_env"));
    unsetenv("CNS_OUT_DIR");
}

TEST(Output, SnapshotLevels)
{
    EXPECT_EQ(snapshot_levels(81, 20), (std::vector<std::size_t>{0, 20, 40, 60, 80}));
    EXPECT_EQ(snapshot_levels(81, 0), (std::vector<std::size_t>{0, 80}));
    EXPECT_EQ(snapshot_levels(10, 4), (std::vector<std::size_t>{0, 4, 8, 9}));
    EXPECT_EQ(snapshot_levels(1, 0), (std::vector<std::size_t>{0}));
}
