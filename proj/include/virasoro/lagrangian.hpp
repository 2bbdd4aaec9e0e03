#pragma once

// Lagrangian densities and the right-invariant two-point Lagrangian
// L(X, Y) = H(X Y^{-1}) on the Virasoro group.

#include "virasoro/virasoro_group.hpp"

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace vir {

using Fn2 = std::function<double(double, double)>;
using Fn3 = std::function<double(double, double, double)>;

/// V(x1, x2) and the partials the dynamics consume. V112 is needed to
/// synthesize the U-class partials U112, U123, U233.
struct PotentialVFunctions {
    Fn2 V, V1, V2, V11, V12, V22, V112;
};

/// Density of H((f, F)) = F^2 + int V(f(x) - x, f'(x)) dx.
///
/// Construction validates: 2pi-periodicity in x1, V1(0, 1) = 0, and agreement
/// of every supplied partial with central differences of a lower-order one
/// (1e-6 relative) at 100 fixed sample points. Immutable afterwards.
class PotentialV {
public:
    explicit PotentialV(PotentialVFunctions fns, std::string name = "custom");

    /// V = p(1 - cos x1) + (q/2)(x2 - 1)^2 + s(1 - cos x1)(x2 - 1).
    static PotentialV builtin(double p, double q, double s);

    /// Keys V, V1, V2, V11, V12, V22, V112; see Expression for the syntax.
    static PotentialV from_expressions(const std::map<std::string, std::string>& exprs);

    double V(double a, double b) const { return f_.V(a, b); }
    double V1(double a, double b) const { return f_.V1(a, b); }
    double V2(double a, double b) const { return f_.V2(a, b); }
    double V11(double a, double b) const { return f_.V11(a, b); }
    double V12(double a, double b) const { return f_.V12(a, b); }
    double V22(double a, double b) const { return f_.V22(a, b); }
    double V112(double a, double b) const { return f_.V112(a, b); }

    /// alpha = V11(0, 1).
    double alpha() const { return alpha_; }
    /// beta = V22(0, 1).
    double beta() const { return beta_; }

    const std::string& name() const { return name_; }

private:
    PotentialVFunctions f_;
    std::string name_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
};

struct PotentialUFunctions {
    Fn3 U, U1, U11, U12, U13, U22, U23, U112, U123, U233;
};

/// General density U(f(x), f'(x), x), 2pi-periodic in x1, with exactly the
/// partials the discrete Euler-Lagrange residual and its first-order
/// expansion need. Validated like PotentialV at construction.
class GeneralPotentialU {
public:
    explicit GeneralPotentialU(PotentialUFunctions fns, std::string name = "custom");

    /// U(x1, x2, x3) = V(x1 - x3, x2).
    static GeneralPotentialU from_potential(const PotentialV& v);

    /// Keys U, U1, U11, U12, U13, U22, U23, U112, U123, U233.
    static GeneralPotentialU from_expressions(const std::map<std::string, std::string>& exprs);

    double U(double a, double b, double c) const { return f_.U(a, b, c); }
    double U1(double a, double b, double c) const { return f_.U1(a, b, c); }
    double U11(double a, double b, double c) const { return f_.U11(a, b, c); }
    double U12(double a, double b, double c) const { return f_.U12(a, b, c); }
    double U13(double a, double b, double c) const { return f_.U13(a, b, c); }
    double U22(double a, double b, double c) const { return f_.U22(a, b, c); }
    double U23(double a, double b, double c) const { return f_.U23(a, b, c); }
    double U112(double a, double b, double c) const { return f_.U112(a, b, c); }
    double U123(double a, double b, double c) const { return f_.U123(a, b, c); }
    double U233(double a, double b, double c) const { return f_.U233(a, b, c); }

    const std::string& name() const { return name_; }

private:
    PotentialUFunctions f_;
    std::string name_;
};

using Potential = std::variant<PotentialV, GeneralPotentialU>;

/// Parses "builtin:p,q,s".
PotentialV parse_builtin_potential(std::string_view spec);

/// H((f, F)) = F^2 + int V(u(x), 1 + u'(x)) dx.
double eval_H(const VirasoroElement& x, const PotentialV& v);

/// L(X, Y) = H(X Y^{-1}).
double eval_L(const VirasoroElement& x, const VirasoroElement& y, const PotentialV& v);

}  // namespace vir
