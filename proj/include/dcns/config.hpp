#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dcns/error.hpp"
#include "dcns/field.hpp"
#include "dcns/initial_data.hpp"
#include "dcns/linearized.hpp"
#include "dcns/params.hpp"
#include "dcns/picard.hpp"

namespace dcns {

inline bool operator==(const InitSpec& a, const InitSpec& b)
{
    return a.kappa == b.kappa && a.q == b.q && a.u0_amp == b.u0_amp && a.u0_radius == b.u0_radius &&
           a.s0_amp == b.s0_amp && a.eta == b.eta;
}
inline bool operator==(const ModelParams& a, const ModelParams& b)
{
    return a.gamma == b.gamma && a.nu == b.nu && a.alpha == b.alpha && a.beta == b.beta && a.A == b.A &&
           a.R == b.R && a.c_v == b.c_v && a.S_bar == b.S_bar;
}
inline bool operator==(const ContinuationPlan& a, const ContinuationPlan& b)
{
    return a.param == b.param && a.start == b.start && a.factor == b.factor && a.count == b.count && a.R0 == b.R0;
}

/// A run configuration: flat `key = value` pairs under `[section]` headers.
struct RunConfig {
    ModelParams model;
    double L = 10.0;
    std::size_t N = 512;
    InitSpec init;
    double eps = 1e-3;
    double t_end = 0.01;
    double cfl = 0.5;
    double dt_max = 0.01 / 6.0;
    double v_floor = 1.0;
    TransportScheme transport = TransportScheme::Upwind;
    int snapshot_every = 0;  // 0: initial and final levels only
    int max_iters = 50;
    double tol = 1e-24;
    double upsilon1 = 1.0;
    int max_halvings = 6;
    ContinuationPlan continuation;
    std::string output_dir = "out";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& s)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("key '" + key + "': cannot parse '" + s + "' as a number");
    }
    return v;
}

inline long parse_int(const std::string& key, const std::string& s)
{
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("key '" + key + "': cannot parse '" + s + "' as an integer");
    }
    return v;
}

inline std::string num17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Parses INI text. Unknown sections or keys are errors; missing keys keep
/// their defaults.
inline RunConfig parse_config(const std::string& text)
{
    boost::property_tree::ptree pt;
    std::istringstream is(text);
    try {
        boost::property_tree::ini_parser::read_ini(is, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ParseError(std::string("malformed config: ") + e.what());
    }

    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, std::map<std::string, Setter>> schema = {
        {"model",
         {{"gamma", [&](auto& k, auto& v) { c.model.gamma = detail::parse_double(k, v); }},
          {"nu", [&](auto& k, auto& v) { c.model.nu = detail::parse_double(k, v); }},
          {"alpha", [&](auto& k, auto& v) { c.model.alpha = detail::parse_double(k, v); }},
          {"beta", [&](auto& k, auto& v) { c.model.beta = detail::parse_double(k, v); }},
          {"A", [&](auto& k, auto& v) { c.model.A = detail::parse_double(k, v); }},
          {"R", [&](auto& k, auto& v) { c.model.R = detail::parse_double(k, v); }},
          {"c_v", [&](auto& k, auto& v) { c.model.c_v = detail::parse_double(k, v); }},
          {"S_bar", [&](auto& k, auto& v) { c.model.S_bar = detail::parse_double(k, v); }}}},
        {"domain",
         {{"L", [&](auto& k, auto& v) { c.L = detail::parse_double(k, v); }},
          {"N",
           [&](auto& k, auto& v) {
               const long n = detail::parse_int(k, v);
               if (n < 8) throw ConfigError("[domain] N must be >= 8");
               c.N = static_cast<std::size_t>(n);
           }}}},
        {"init",
         {{"kappa", [&](auto& k, auto& v) { c.init.kappa = detail::parse_double(k, v); }},
          {"q", [&](auto& k, auto& v) { c.init.q = detail::parse_double(k, v); }},
          {"u0_amp", [&](auto& k, auto& v) { c.init.u0_amp = detail::parse_double(k, v); }},
          {"u0_radius", [&](auto& k, auto& v) { c.init.u0_radius = detail::parse_double(k, v); }},
          {"s0_amp", [&](auto& k, auto& v) { c.init.s0_amp = detail::parse_double(k, v); }},
          {"eta", [&](auto& k, auto& v) { c.init.eta = detail::parse_double(k, v); }}}},
        {"regularization", {{"eps", [&](auto& k, auto& v) { c.eps = detail::parse_double(k, v); }}}},
        {"time",
         {{"t_end", [&](auto& k, auto& v) { c.t_end = detail::parse_double(k, v); }},
          {"cfl", [&](auto& k, auto& v) { c.cfl = detail::parse_double(k, v); }},
          {"dt_max", [&](auto& k, auto& v) { c.dt_max = detail::parse_double(k, v); }},
          {"v_floor", [&](auto& k, auto& v) { c.v_floor = detail::parse_double(k, v); }},
          {"snapshot_every", [&](auto& k, auto& v) { c.snapshot_every = static_cast<int>(detail::parse_int(k, v)); }},
          {"transport",
           [&](auto& k, auto& v) {
               if (v == "upwind") {
                   c.transport = TransportScheme::Upwind;
               } else if (v == "semi_lagrangian") {
                   c.transport = TransportScheme::SemiLagrangianCubic;
               } else {
                   throw ParseError("key '" + k + "': expected upwind or semi_lagrangian");
               }
           }}}},
        {"picard",
         {{"max_iters", [&](auto& k, auto& v) { c.max_iters = static_cast<int>(detail::parse_int(k, v)); }},
          {"tol", [&](auto& k, auto& v) { c.tol = detail::parse_double(k, v); }},
          {"upsilon1", [&](auto& k, auto& v) { c.upsilon1 = detail::parse_double(k, v); }},
          {"max_halvings", [&](auto& k, auto& v) { c.max_halvings = static_cast<int>(detail::parse_int(k, v)); }}}},
        {"continuation",
         {{"param",
           [&](auto& k, auto& v) {
               if (v == "eps") {
                   c.continuation.param = ContinuationParam::Eps;
               } else if (v == "eta") {
                   c.continuation.param = ContinuationParam::Eta;
               } else {
                   throw ParseError("key '" + k + "': expected eps or eta");
               }
           }},
          {"start", [&](auto& k, auto& v) { c.continuation.start = detail::parse_double(k, v); }},
          {"factor", [&](auto& k, auto& v) { c.continuation.factor = detail::parse_double(k, v); }},
          {"count", [&](auto& k, auto& v) { c.continuation.count = static_cast<int>(detail::parse_int(k, v)); }},
          {"R0", [&](auto& k, auto& v) { c.continuation.R0 = detail::parse_double(k, v); }}}},
        {"output", {{"dir", [&](auto&, auto& v) { c.output_dir = v; }}}},
    };

    for (const auto& [section, body] : pt) {
        auto sit = schema.find(section);
        if (sit == schema.end()) {
            throw ParseError(body.empty() ? "key '" + section + "' outside any section"
                                          : "unknown config section [" + section + "]");
        }
        for (const auto& [key, node] : body) {
            auto kit = sit->second.find(key);
            if (kit == sit->second.end()) {
                throw ParseError("unknown config key '" + key + "' in [" + section + "]");
            }
            kit->second(section + "." + key, node.get_value<std::string>());
        }
    }
    return c;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Serializes every key; parse_config(to_ini(c)) == c.
inline std::string to_ini(const RunConfig& c)
{
    using detail::num17;
    std::ostringstream os;
    os << "[model]\n"
       << "gamma = " << num17(c.model.gamma) << "\n"
       << "nu = " << num17(c.model.nu) << "\n"
       << "alpha = " << num17(c.model.alpha) << "\n"
       << "beta = " << num17(c.model.beta) << "\n"
       << "A = " << num17(c.model.A) << "\n"
       << "R = " << num17(c.model.R) << "\n";
    if (c.model.c_v) os << "c_v = " << num17(*c.model.c_v) << "\n";
    os << "S_bar = " << num17(c.model.S_bar) << "\n\n"
       << "[domain]\n"
       << "L = " << num17(c.L) << "\n"
       << "N = " << c.N << "\n\n"
       << "[init]\n"
       << "kappa = " << num17(c.init.kappa) << "\n"
       << "q = " << num17(c.init.q) << "\n"
       << "u0_amp = " << num17(c.init.u0_amp) << "\n"
       << "u0_radius = " << num17(c.init.u0_radius) << "\n"
       << "s0_amp = " << num17(c.init.s0_amp) << "\n"
       << "eta = " << num17(c.init.eta) << "\n\n"
       << "[regularization]\n"
       << "eps = " << num17(c.eps) << "\n\n"
       << "[time]\n"
       << "t_end = " << num17(c.t_end) << "\n"
       << "cfl = " << num17(c.cfl) << "\n"
       << "dt_max = " << num17(c.dt_max) << "\n"
       << "v_floor = " << num17(c.v_floor) << "\n"
       << "snapshot_every = " << c.snapshot_every << "\n"
       << "transport = " << (c.transport == TransportScheme::Upwind ? "upwind" : "semi_lagrangian") << "\n\n"
       << "[picard]\n"
       << "max_iters = " << c.max_iters << "\n"
       << "tol = " << num17(c.tol) << "\n"
       << "upsilon1 = " << num17(c.upsilon1) << "\n"
       << "max_halvings = " << c.max_halvings << "\n\n"
       << "[continuation]\n"
       << "param = " << (c.continuation.param == ContinuationParam::Eps ? "eps" : "eta") << "\n"
       << "start = " << num17(c.continuation.start) << "\n"
       << "factor = " << num17(c.continuation.factor) << "\n"
       << "count = " << c.continuation.count << "\n"
       << "R0 = " << num17(c.continuation.R0) << "\n\n"
       << "[output]\n"
       << "dir = " << c.output_dir << "\n";
    return os.str();
}

inline PicardOptions picard_options(const RunConfig& c)
{
    PicardOptions o;
    o.t_end = c.t_end;
    o.cfl = c.cfl;
    o.dt_max = c.dt_max;
    o.v_floor = c.v_floor;
    o.eps = c.eps;
    o.tol = c.tol;
    o.max_iters = c.max_iters;
    o.upsilon1 = c.upsilon1;
    o.max_halvings = c.max_halvings;
    o.scheme = c.transport;
    return o;
}

/// Validates the whole config and assembles a Problem.
inline Problem make_problem(const RunConfig& c, bool strict)
{
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("[time] cfl must lie in (0, 1]");
    if (!(c.dt_max > 0.0)) throw ConfigError("[time] dt_max must be positive");
    if (!(c.t_end > 0.0)) throw ConfigError("[time] t_end must be positive");
    if (c.v_floor < 0.0) throw ConfigError("[time] v_floor must be nonnegative");
    if (c.eps < 0.0) throw ConfigError("[regularization] eps must be nonnegative");
    if (c.max_iters < 1) throw ConfigError("[picard] max_iters must be >= 1");
    if (!(c.tol > 0.0)) throw ConfigError("[picard] tol must be positive");
    if (!(c.upsilon1 > 0.0)) throw ConfigError("[picard] upsilon1 must be positive");
    if (c.max_halvings < 0) throw ConfigError("[picard] max_halvings must be >= 0");
    if (c.snapshot_every < 0) throw ConfigError("[time] snapshot_every must be >= 0");
    Problem p;
    p.dc = validate_params(c.model, strict);
    p.grid = Grid(c.L, c.N);
    p.init = c.init;
    p.opts = picard_options(c);
    p.strict = strict;
    check_init_spec(p.init, p.grid, p.dc, strict);
    return p;
}

} // namespace dcns
