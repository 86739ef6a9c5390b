#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dcns/config.hpp"
#include "dcns/diagnostics.hpp"
#include "dcns/error.hpp"
#include "dcns/reformulation.hpp"

namespace dcns {

inline constexpr const char* kSnapshotHeader = "x,rho,u,S,phi,l,h,psi,n,theta";
inline constexpr const char* kDiagnosticsHeader =
    "t,mass,momentum,E_k,E_p,E,l_min,l_max,u_linf,phi_min,w_phi_iota_grad_u,w_h_d2u,w_h14_dl,res_h,res_psi,res_n,"
    "bound_ok";

/// Snapshot CSV: `# t=<t>`, the header, one row per node.
inline std::string snapshot_csv(const ReformState& s, const DerivedConsts& dc)
{
    using detail::num17;
    const PhysState p = from_reformulated(s, dc);
    std::string out = "# t=" + num17(s.t) + "\n" + kSnapshotHeader + "\n";
    const Grid& g = s.grid();
    for (std::size_t i = 0; i < g.N(); ++i) {
        const double row[] = {g.x(i), p.rho[i], s.u[i], p.S[i], s.phi[i], s.l[i], s.h[i], s.psi[i], s.n[i], p.theta[i]};
        for (std::size_t k = 0; k < std::size(row); ++k) {
            if (k) out += ',';
            out += num17(row[k]);
        }
        out += '\n';
    }
    return out;
}

/// Reads a snapshot back. `L` is taken from the node spacing unless a
/// positive value is given.
inline ReformState read_snapshot(const std::string& text, double L = 0.0)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# t=", 0) != 0) {
        throw ParseError("snapshot must start with '# t=<time>'");
    }
    const double t = detail::parse_double("t", line.substr(4));
    if (!std::getline(in, line) || line != kSnapshotHeader) {
        throw ParseError(std::string("snapshot header must be '") + kSnapshotHeader + "'");
    }
    std::vector<std::array<double, 10>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 10> r{};
        std::size_t k = 0;
        std::size_t pos = 0;
        for (; k < r.size(); ++k) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            r[k] = detail::parse_double("snapshot row " + std::to_string(rows.size()), cell);
            if (comma == std::string::npos) {
                ++k;
                break;
            }
            pos = comma + 1;
        }
        if (k != r.size()) throw ParseError("snapshot row " + std::to_string(rows.size()) + " needs 10 columns");
        rows.push_back(r);
    }
    if (rows.size() < 8) throw ParseError("snapshot needs at least 8 rows");
    const std::size_t N = rows.size();
    if (!(L > 0.0)) L = 0.5 * static_cast<double>(N) * (rows[N - 1][0] - rows[0][0]) / static_cast<double>(N - 1);
    const Grid g(L, N);
    ReformState s;
    s.phi = Field(g);
    s.u = Field(g);
    s.l = Field(g);
    s.h = Field(g);
    s.psi = Field(g);
    s.n = Field(g);
    for (std::size_t i = 0; i < N; ++i) {
        s.u[i] = rows[i][2];
        s.phi[i] = rows[i][4];
        s.l[i] = rows[i][5];
        s.h[i] = rows[i][6];
        s.psi[i] = rows[i][7];
        s.n[i] = rows[i][8];
    }
    s.t = t;
    return s;
}

inline ReformState load_snapshot(const std::string& path, double L = 0.0)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open snapshot '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return read_snapshot(ss.str(), L);
}

inline std::string diagnostics_row(const DiagRecord& r)
{
    using detail::num17;
    const double vals[] = {r.t,       r.mass,     r.momentum, r.E_k,   r.E_p,   r.E,
                           r.l_min,   r.l_max,    r.u_linf,   r.phi_min, r.w_phi_iota_grad_u, r.w_h_d2u,
                           r.w_h14_dl, r.res_h,   r.res_psi,  r.res_n};
    std::string out;
    for (double v : vals) out += num17(v) + ',';
    out += r.bound_ok ? "1" : "0";
    return out;
}

inline std::string diagnostics_csv(const std::vector<DiagRecord>& recs)
{
    std::string out = std::string(kDiagnosticsHeader) + "\n";
    for (const auto& r : recs) out += diagnostics_row(r) + "\n";
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

/// Output directory: CNS_OUT_DIR when set, else [output] dir.
inline std::filesystem::path output_dir(const RunConfig& c)
{
    if (const char* env = std::getenv("CNS_OUT_DIR"); env && *env) return env;
    return c.output_dir;
}

/// Levels written as snapshots: every `every`-th plus the last; with every
/// = 0 only the first and last.
inline std::vector<std::size_t> snapshot_levels(std::size_t count, int every)
{
    std::vector<std::size_t> idx;
    if (count == 0) return idx;
    const std::size_t stride = every > 0 ? static_cast<std::size_t>(every) : count - 1;
    for (std::size_t k = 0; k < count; k += std::max<std::size_t>(stride, 1)) idx.push_back(k);
    if (idx.back() != count - 1) idx.push_back(count - 1);
    return idx;
}

} // namespace dcns
