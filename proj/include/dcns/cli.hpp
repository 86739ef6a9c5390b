#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcns/config.hpp"
#include "dcns/diagnostics.hpp"
#include "dcns/error.hpp"
#include "dcns/initial_data.hpp"
#include "dcns/io.hpp"
#include "dcns/mms.hpp"
#include "dcns/picard.hpp"

namespace dcns {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

namespace detail {

inline void print_warnings(const DerivedConsts& dc, std::ostream& err)
{
    for (const auto& w : dc.warnings) err << "warning: " << w << "\n";
}

inline void print_consts(const DerivedConsts& dc, std::ostream& out)
{
    out << "gamma = " << num17(dc.gamma()) << "\n"
        << "nu = " << num17(dc.nu()) << "\n"
        << "c_v = " << num17(dc.cv) << "\n"
        << "delta = " << num17(dc.delta) << "\n"
        << "iota = " << num17(dc.iota) << "\n"
        << "a = " << num17(dc.a) << "\n"
        << "b = " << num17(dc.b) << "\n"
        << "a1 = " << num17(dc.a1) << "\n"
        << "a2 = " << num17(dc.a2) << "\n"
        << "a3 = " << num17(dc.a3) << "\n"
        << "a4 = " << num17(dc.a4) << "\n"
        << "l_bar = " << num17(dc.l_bar) << "\n"
        << "strict = " << (dc.strict ? "true" : "false") << "\n";
}

inline void print_compat(const CompatReport& r, std::ostream& out)
{
    for (std::size_t k = 0; k < 4; ++k) {
        out << "g" << k + 1 << " = " << num17(r.g[k]);
        if (r.has_refinement) out << "  (2N: " << num17(r.g_fine[k]) << ", ratio " << num17(r.ratio[k]) << ")";
        out << "\n";
    }
    out << "grad_phi_iota_l6 = " << num17(r.grad_phi_iota_l6) << "\n"
        << "threshold = " << num17(r.threshold) << "\n"
        << "refinement_stable = " << (r.refinement_stable ? "true" : "false") << "\n"
        << "compatible = " << (r.pass ? "true" : "false") << "\n";
}

inline void print_study(const MmsStudy& s, std::ostream& out)
{
    out << s.name << ":";
    for (std::size_t k = 0; k < s.err.size(); ++k) out << " " << num17(s.err[k]);
    out << "\n" << s.name << " orders:";
    for (double o : s.orders()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.4f", o);
        out << buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", s.observed_order());
    out << "\n" << s.name << " observed order = " << buf << "\n";
}

} // namespace detail

/// Entry point of the `dcns` tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Degenerate compressible Navier-Stokes solver (1-D, far-field vacuum)"};
    app.require_subcommand(1);

    std::string config_path;
    bool allow_unproven = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "INI run configuration")->required()->check(CLI::ExistingFile);
        sub->add_flag("--allow-unproven", allow_unproven, "accept parameters outside the proven regime (with a warning)");
    };

    auto* validate = app.add_subcommand("validate-params", "check model parameters and print derived constants");
    add_common(validate);

    double compat_threshold = 1e3;
    auto* check = app.add_subcommand("check-init", "check initial data and print the compatibility report");
    add_common(check);
    check->add_option("--compat-threshold", compat_threshold, "bound on the weighted compatibility norms");

    std::string out_override;
    auto* run = app.add_subcommand("run", "solve the worked problem and write snapshots and diagnostics");
    add_common(run);
    run->add_option("-o,--out", out_override, "output directory (overrides CNS_OUT_DIR and [output] dir)");

    std::string cont_param;
    auto* cont = app.add_subcommand("continuation", "run an eps or eta continuation study");
    add_common(cont);
    cont->add_option("--param", cont_param, "eps or eta (overrides [continuation] param)")
        ->check(CLI::IsMember({"eps", "eta"}));

    std::string solver = "all";
    auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence studies");
    mms_cmd->add_option("--solver", solver, "transport, momentum or all")
        ->check(CLI::IsMember({"transport", "momentum", "all"}));
    mms_cmd->add_flag("--allow-unproven", allow_unproven, "accept parameters outside the proven regime");
    mms_cmd->add_option("-c,--config", config_path, "INI run configuration for the model constants")
        ->check(CLI::ExistingFile);

    std::string snapshot_path;
    auto* diag = app.add_subcommand("diagnose", "recompute the diagnostics record of a snapshot");
    add_common(diag);
    diag->add_option("-s,--snapshot", snapshot_path, "snapshot CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const bool strict = !allow_unproven;
    try {
        if (validate->parsed()) {
            const RunConfig c = load_config(config_path);
            const DerivedConsts dc = validate_params(c.model, strict);
            detail::print_warnings(dc, err);
            detail::print_consts(dc, out);
            return kExitOk;
        }

        if (check->parsed()) {
            const RunConfig c = load_config(config_path);
            const Problem p = make_problem(c, strict);
            detail::print_warnings(p.dc, err);
            const auto [lo, hi] = kappa_interval(p.dc, p.init.q);
            out << "kappa = " << detail::num17(p.init.kappa) << " in (" << detail::num17(lo) << ", "
                << detail::num17(hi) << ")\n";
            const CompatReport r = compatibility_study(p.init, p.grid, p.dc, compat_threshold, strict);
            detail::print_compat(r, out);
            return r.pass ? kExitOk : kExitConfig;
        }

        if (run->parsed()) {
            const RunConfig c = load_config(config_path);
            const Problem p = make_problem(c, strict);
            detail::print_warnings(p.dc, err);
            const ReformState r0 = gen_initial(p.init, p.grid, p.dc, strict);
            const PicardResult res = picard_solve_adaptive(r0, p.dc, p.opts);
            const auto recs = record_all(res.trajectory.levels, p.dc, p.init.q);

            const std::filesystem::path dir = out_override.empty() ? output_dir(c) : std::filesystem::path(out_override);
            for (std::size_t k : snapshot_levels(res.trajectory.levels.size(), c.snapshot_every)) {
                char name[32];
                std::snprintf(name, sizeof name, "snapshot_%05zu.csv", k);
                write_text(dir / name, snapshot_csv(res.trajectory.levels[k], p.dc));
            }
            write_text(dir / "diagnostics.csv", diagnostics_csv(recs));

            for (const auto& rep : res.reports) {
                out << "iterate " << rep.k << ": Gamma = " << detail::num17(rep.gamma_metric) << "\n";
            }
            const DriftReport d = drift_report(recs);
            out << "t_end = " << detail::num17(res.t_end) << " (halvings " << res.halvings << ")\n"
                << "steps = " << res.trajectory.steps() << ", dt = " << detail::num17(res.trajectory.dt) << "\n"
                << "drift mass = " << detail::num17(d.mass.value) << (d.mass.relative ? "" : " (absolute)") << "\n"
                << "drift momentum = " << detail::num17(d.momentum.value) << (d.momentum.relative ? "" : " (absolute)")
                << "\n"
                << "drift energy = " << detail::num17(d.energy.value) << (d.energy.relative ? "" : " (absolute)") << "\n"
                << "output = " << dir.string() << "\n";
            return kExitOk;
        }

        if (cont->parsed()) {
            RunConfig c = load_config(config_path);
            if (cont_param == "eps") c.continuation.param = ContinuationParam::Eps;
            if (cont_param == "eta") c.continuation.param = ContinuationParam::Eta;
            const Problem p = make_problem(c, strict);
            detail::print_warnings(p.dc, err);
            const auto rows = continuation_run(c.continuation, p);
            out << "leg,value,iterations,t_end,diff_u,diff_phi,diff_l,min_phi_window\n";
            for (const auto& r : rows) {
                out << r.leg << "," << detail::num17(r.value) << "," << r.iterations << "," << detail::num17(r.t_end)
                    << "," << detail::num17(r.diff_u) << "," << detail::num17(r.diff_phi) << ","
                    << detail::num17(r.diff_l) << "," << detail::num17(r.min_phi_window) << "\n";
            }
            return kExitOk;
        }

        if (mms_cmd->parsed()) {
            const ModelParams mp = config_path.empty() ? ModelParams{} : load_config(config_path).model;
            const DerivedConsts dc = validate_params(mp, strict);
            detail::print_warnings(dc, err);
            if (solver == "transport" || solver == "all") {
                for (auto w : {mms::Transported::Phi, mms::Transported::H, mms::Transported::L}) {
                    detail::print_study(mms::transport_study(w, dc), out);
                }
            }
            if (solver == "momentum" || solver == "all") {
                detail::print_study(mms::momentum_spatial_study(dc), out);
                detail::print_study(mms::momentum_temporal_study(dc), out);
            }
            return kExitOk;
        }

        if (diag->parsed()) {
            const RunConfig c = load_config(config_path);
            const DerivedConsts dc = validate_params(c.model, strict);
            detail::print_warnings(dc, err);
            ReformState s = load_snapshot(snapshot_path);
            if (s.grid().N() == c.N) s = load_snapshot(snapshot_path, c.L);
            const DiagRecord r = record(s, dc, nullptr, c.init.q);
            out << kDiagnosticsHeader << "\n" << diagnostics_row(r) << "\n";
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}

} // namespace dcns
