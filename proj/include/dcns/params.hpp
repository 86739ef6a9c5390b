#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dcns/error.hpp"

namespace dcns {

/// Physical constants of a polytropic gas with power-law viscosities
/// mu = alpha * theta^nu, lambda = beta * theta^nu and zero heat conduction.
struct ModelParams {
    double gamma = 1.4;
    double nu = 1.0;
    double alpha = 1.0;
    double beta = 0.0;
    double A = 1.0;
    double R = 1.0;
    std::optional<double> c_v;  // derived from (R, gamma) when absent
    double S_bar = 0.0;
};

/// Constants of the reformulated system. Immutable once built by
/// validate_params().
struct DerivedConsts {
    ModelParams model;
    double cv = 0.0;
    double delta = 0.0;
    double iota = 0.0;
    double a = 0.0;
    double b = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;
    double l_bar = 0.0;
    bool strict = true;
    std::vector<std::string> warnings;

    double gamma() const noexcept { return model.gamma; }
    double nu() const noexcept { return model.nu; }
    /// 2*alpha + beta, the 1-D viscosity multiplier in Q, H and L.
    double visc() const noexcept { return 2.0 * model.alpha + model.beta; }
    /// a*delta/(delta-1), the factor in psi = c * d/dx h.
    double psi_factor() const noexcept { return a * delta / (delta - 1.0); }
    /// A*gamma/(gamma-1), the factor in phi = c * rho^(gamma-1).
    double phi_factor() const noexcept { return model.A * model.gamma / (model.gamma - 1.0); }
};

namespace detail {

inline std::string fmt_num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace detail

/// Checks the admissibility constraints and computes every derived constant.
///
/// In strict mode 4*gamma + 3*delta > 7 is rejected; in lenient mode it is
/// accepted and a warning is recorded in DerivedConsts::warnings. The other
/// constraints are always enforced.
inline DerivedConsts validate_params(const ModelParams& p, bool strict = true)
{
    const double fields[] = {p.gamma, p.nu, p.alpha, p.beta, p.A, p.R, p.S_bar};
    for (double v : fields) {
        if (!std::isfinite(v)) {
            throw ConstraintViolation("model parameters must be finite");
        }
    }
    if (p.c_v && !std::isfinite(*p.c_v)) {
        throw ConstraintViolation("model parameter c_v must be finite");
    }

    if (!(p.gamma > 1.0)) {
        throw ConstraintViolation("violated γ>1 (gamma = " + detail::fmt_num(p.gamma) + ")");
    }
    if (!(p.alpha > 0.0)) {
        throw ConstraintViolation("violated α>0 (alpha = " + detail::fmt_num(p.alpha) + ")");
    }
    if (!(2.0 * p.alpha + 3.0 * p.beta >= 0.0)) {
        throw ConstraintViolation("violated 2α+3β≥0 (2α+3β = " +
                                  detail::fmt_num(2.0 * p.alpha + 3.0 * p.beta) + ")");
    }
    if (!(p.A > 0.0) || !(p.R > 0.0)) {
        throw ConstraintViolation("violated A>0 and R>0");
    }

    DerivedConsts dc;
    dc.model = p;
    dc.strict = strict;
    dc.delta = (p.gamma - 1.0) * p.nu;
    if (!(dc.delta > 0.0 && dc.delta < 1.0)) {
        throw ConstraintViolation("violated 0<δ=(γ−1)ν<1 (δ = " + detail::fmt_num(dc.delta) + ")");
    }
    const double lhs = 4.0 * p.gamma + 3.0 * dc.delta;
    if (lhs > 7.0) {
        const std::string msg = "violated 4γ+3δ≤7 (4γ+3δ = " + detail::fmt_num(lhs) + ")";
        if (strict) {
            throw ConstraintViolation(msg);
        }
        dc.warnings.push_back(msg + "; continuing outside the proven regime");
    }

    const double cv_derived = p.R / (p.gamma - 1.0);
    if (p.c_v) {
        if (std::abs(*p.c_v - cv_derived) > 1e-12 * std::abs(cv_derived)) {
            throw ConstraintViolation("violated c_v=R/(γ−1): supplied c_v = " + detail::fmt_num(*p.c_v) +
                                      ", R/(γ−1) = " + detail::fmt_num(cv_derived));
        }
    }
    dc.cv = cv_derived;
    dc.model.c_v = cv_derived;

    const double g = p.gamma;
    const double d = dc.delta;
    dc.iota = (d - 1.0) / (2.0 * (g - 1.0));
    dc.a = std::pow(p.A * g / (g - 1.0), (1.0 - d) / (g - 1.0));
    dc.b = (2.0 - d - g) / (d - 1.0);
    dc.a1 = (g - 1.0) / g;
    dc.a3 = std::pow(p.A / p.R, p.nu);
    dc.a2 = dc.a * dc.a3;
    dc.a4 = std::pow(p.A, p.nu - 1.0) * dc.a * dc.a * (g - 1.0) / std::pow(p.R, p.nu);
    dc.l_bar = std::exp(p.S_bar / dc.cv);

    if (dc.b > 0.0) {
        dc.warnings.push_back("b = " + detail::fmt_num(dc.b) + " > 0 (γ+δ>2)");
    }
    return dc;
}

} // namespace dcns
