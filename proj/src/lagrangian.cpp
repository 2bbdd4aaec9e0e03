#include "virasoro/lagrangian.hpp"

#include "virasoro/expression.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vir {
namespace {

constexpr int sample_count = 100;
constexpr double consistency_tol = 1e-6;
constexpr double first_step = 1e-5;
constexpr double second_step = 1e-4;

// Kronecker sequence on [0,1)^3; deterministic on every platform.
std::array<double, 3> sample_point(int i) {
    constexpr std::array<double, 3> alpha = {0.8191725133961645, 0.6710436067037893, 0.5497004779019703};
    std::array<double, 3> p{};
    for (int d = 0; d < 3; ++d) {
        const double t = 0.5 + alpha[d] * (i + 1);
        p[d] = t - std::floor(t);
    }
    return p;
}

void check_close(const std::string& who, const char* what, double supplied, double reference, double scale,
                 double a, double b, double c = std::nan("")) {
    const double tol = consistency_tol * std::max({1.0, std::abs(supplied), std::abs(reference), scale});
    if (!std::isfinite(supplied) || !(std::abs(supplied - reference) <= tol)) {
        std::ostringstream msg;
        msg << who << ": supplied " << what << " = " << supplied << " disagrees with finite differences ("
            << reference << ") at (" << a << ", " << b;
        if (!std::isnan(c)) msg << ", " << c;
        msg << ")";
        throw std::invalid_argument(msg.str());
    }
}

void require_all(const std::map<std::string, std::string>& exprs, std::initializer_list<const char*> keys,
                 const char* kind) {
    for (const char* k : keys) {
        if (!exprs.contains(k)) throw std::invalid_argument(std::string(kind) + " potential: missing expression '" + k + "'");
    }
    for (const auto& [k, _] : exprs) {
        if (std::find_if(keys.begin(), keys.end(), [&](const char* key) { return k == key; }) == keys.end()) {
            throw std::invalid_argument(std::string(kind) + " potential: unknown key '" + k + "'");
        }
    }
}

Fn2 fn2(const std::map<std::string, std::string>& exprs, const char* key) {
    Expression e = Expression::parse(exprs.at(key));
    return [e](double a, double b) { return e(a, b, 0.0); };
}

Fn3 fn3(const std::map<std::string, std::string>& exprs, const char* key) {
    Expression e = Expression::parse(exprs.at(key));
    return [e](double a, double b, double c) { return e(a, b, c); };
}

}  // namespace

PotentialV::PotentialV(PotentialVFunctions fns, std::string name) : f_(std::move(fns)), name_(std::move(name)) {
    const auto& f = f_;
    if (!f.V || !f.V1 || !f.V2 || !f.V11 || !f.V12 || !f.V22 || !f.V112) {
        throw std::invalid_argument("PotentialV '" + name_ + "': every partial must be supplied");
    }
    const double v1 = f.V1(0.0, 1.0);
    if (!(std::abs(v1) <= 1e-12)) {
        std::ostringstream msg;
        msg << "PotentialV '" << name_ << "': admissibility requires V1(0,1) = 0, got " << v1;
        throw std::invalid_argument(msg.str());
    }
    const double h = first_step;
    for (int i = 0; i < sample_count; ++i) {
        const auto p = sample_point(i);
        const double a = two_pi * p[0] - std::numbers::pi;
        const double b = 0.5 + p[1];
        const double v = f.V(a, b);
        if (!(std::abs(f.V(a + two_pi, b) - v) <= 1e-12 * std::max(1.0, std::abs(v)))) {
            throw std::invalid_argument("PotentialV '" + name_ + "': V is not 2pi-periodic in x1");
        }
        const double scale = std::abs(v);
        check_close(name_, "V1", f.V1(a, b), (f.V(a + h, b) - f.V(a - h, b)) / (2 * h), scale, a, b);
        check_close(name_, "V2", f.V2(a, b), (f.V(a, b + h) - f.V(a, b - h)) / (2 * h), scale, a, b);
        check_close(name_, "V11", f.V11(a, b), (f.V1(a + h, b) - f.V1(a - h, b)) / (2 * h), scale, a, b);
        check_close(name_, "V12", f.V12(a, b), (f.V1(a, b + h) - f.V1(a, b - h)) / (2 * h), scale, a, b);
        check_close(name_, "V22", f.V22(a, b), (f.V2(a, b + h) - f.V2(a, b - h)) / (2 * h), scale, a, b);
        check_close(name_, "V112", f.V112(a, b), (f.V11(a, b + h) - f.V11(a, b - h)) / (2 * h), scale, a, b);
    }
    alpha_ = f.V11(0.0, 1.0);
    beta_ = f.V22(0.0, 1.0);
}

PotentialV PotentialV::builtin(double p, double q, double s) {
    PotentialVFunctions f;
    f.V = [=](double a, double b) { return p * (1 - std::cos(a)) + 0.5 * q * (b - 1) * (b - 1) + s * (1 - std::cos(a)) * (b - 1); };
    f.V1 = [=](double a, double b) { return p * std::sin(a) + s * std::sin(a) * (b - 1); };
    f.V2 = [=](double a, double b) { return q * (b - 1) + s * (1 - std::cos(a)); };
    f.V11 = [=](double a, double b) { return p * std::cos(a) + s * std::cos(a) * (b - 1); };
    f.V12 = [=](double a, double) { return s * std::sin(a); };
    f.V22 = [=](double, double) { return q; };
    f.V112 = [=](double a, double) { return s * std::cos(a); };
    std::ostringstream name;
    name << "builtin:" << p << "," << q << "," << s;
    return PotentialV(std::move(f), name.str());
}

PotentialV PotentialV::from_expressions(const std::map<std::string, std::string>& exprs) {
    require_all(exprs, {"V", "V1", "V2", "V11", "V12", "V22", "V112"}, "V-class");
    PotentialVFunctions f{fn2(exprs, "V"),   fn2(exprs, "V1"),  fn2(exprs, "V2"),  fn2(exprs, "V11"),
                          fn2(exprs, "V12"), fn2(exprs, "V22"), fn2(exprs, "V112")};
    return PotentialV(std::move(f), "expr:" + exprs.at("V"));
}

GeneralPotentialU::GeneralPotentialU(PotentialUFunctions fns, std::string name)
    : f_(std::move(fns)), name_(std::move(name)) {
    const auto& f = f_;
    if (!f.U || !f.U1 || !f.U11 || !f.U12 || !f.U13 || !f.U22 || !f.U23 || !f.U112 || !f.U123 || !f.U233) {
        throw std::invalid_argument("GeneralPotentialU '" + name_ + "': every partial must be supplied");
    }
    const double h = first_step;
    const double k = second_step;
    for (int i = 0; i < sample_count; ++i) {
        const auto p = sample_point(i);
        const double a = two_pi * p[0];
        const double b = 0.5 + p[1];
        const double c = two_pi * p[2];
        const double u = f.U(a, b, c);
        if (!(std::abs(f.U(a + two_pi, b, c) - u) <= 1e-12 * std::max(1.0, std::abs(u)))) {
            throw std::invalid_argument("GeneralPotentialU '" + name_ + "': U is not 2pi-periodic in x1");
        }
        const double scale = std::abs(u);
        check_close(name_, "U1", f.U1(a, b, c), (f.U(a + h, b, c) - f.U(a - h, b, c)) / (2 * h), scale, a, b, c);
        check_close(name_, "U11", f.U11(a, b, c), (f.U1(a + h, b, c) - f.U1(a - h, b, c)) / (2 * h), scale, a, b, c);
        check_close(name_, "U12", f.U12(a, b, c), (f.U1(a, b + h, c) - f.U1(a, b - h, c)) / (2 * h), scale, a, b, c);
        check_close(name_, "U13", f.U13(a, b, c), (f.U1(a, b, c + h) - f.U1(a, b, c - h)) / (2 * h), scale, a, b, c);
        check_close(name_, "U22", f.U22(a, b, c), (f.U(a, b + k, c) - 2 * u + f.U(a, b - k, c)) / (k * k), scale, a, b, c);
        check_close(name_, "U23", f.U23(a, b, c),
                    (f.U(a, b + k, c + k) - f.U(a, b + k, c - k) - f.U(a, b - k, c + k) + f.U(a, b - k, c - k)) /
                        (4 * k * k),
                    scale, a, b, c);
        check_close(name_, "U112", f.U112(a, b, c), (f.U11(a, b + h, c) - f.U11(a, b - h, c)) / (2 * h), scale, a, b, c);
        check_close(name_, "U123", f.U123(a, b, c), (f.U12(a, b, c + h) - f.U12(a, b, c - h)) / (2 * h), scale, a, b, c);
        check_close(name_, "U233", f.U233(a, b, c), (f.U23(a, b, c + h) - f.U23(a, b, c - h)) / (2 * h), scale, a, b, c);
    }
}

GeneralPotentialU GeneralPotentialU::from_potential(const PotentialV& v) {
    PotentialUFunctions f;
    f.U = [v](double a, double b, double c) { return v.V(a - c, b); };
    f.U1 = [v](double a, double b, double c) { return v.V1(a - c, b); };
    f.U11 = [v](double a, double b, double c) { return v.V11(a - c, b); };
    f.U12 = [v](double a, double b, double c) { return v.V12(a - c, b); };
    f.U13 = [v](double a, double b, double c) { return -v.V11(a - c, b); };
    f.U22 = [v](double a, double b, double c) { return v.V22(a - c, b); };
    f.U23 = [v](double a, double b, double c) { return -v.V12(a - c, b); };
    f.U112 = [v](double a, double b, double c) { return v.V112(a - c, b); };
    f.U123 = [v](double a, double b, double c) { return -v.V112(a - c, b); };
    f.U233 = [v](double a, double b, double c) { return v.V112(a - c, b); };
    return GeneralPotentialU(std::move(f), "synth(" + v.name() + ")");
}

GeneralPotentialU GeneralPotentialU::from_expressions(const std::map<std::string, std::string>& exprs) {
    require_all(exprs, {"U", "U1", "U11", "U12", "U13", "U22", "U23", "U112", "U123", "U233"}, "U-class");
    PotentialUFunctions f{fn3(exprs, "U"),    fn3(exprs, "U1"),   fn3(exprs, "U11"), fn3(exprs, "U12"),
                          fn3(exprs, "U13"),  fn3(exprs, "U22"),  fn3(exprs, "U23"), fn3(exprs, "U112"),
                          fn3(exprs, "U123"), fn3(exprs, "U233")};
    return GeneralPotentialU(std::move(f), "expr:" + exprs.at("U"));
}

PotentialV parse_builtin_potential(std::string_view spec) {
    constexpr std::string_view prefix = "builtin:";
    if (!spec.starts_with(prefix)) {
        throw std::invalid_argument("potential spec must look like builtin:p,q,s, got '" + std::string(spec) + "'");
    }
    std::string body(spec.substr(prefix.size()));
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    double p = 0, q = 0, s = 0;
    std::string extra;
    if (!(in >> p >> q >> s) || (in >> extra)) {
        throw std::invalid_argument("potential spec must look like builtin:p,q,s, got '" + std::string(spec) + "'");
    }
    return PotentialV::builtin(p, q, s);
}

double eval_H(const VirasoroElement& x, const PotentialV& v) {
    const PeriodicField u = x.f.centered_displacement();
    const PeriodicField du = spectral_derivative(u, 1);
    PeriodicField density = u;
    for (std::size_t j = 0; j < u.size(); ++j) density[j] = v.V(u[j], 1.0 + du[j]);
    return x.F * x.F + integrate(density);
}

double eval_L(const VirasoroElement& x, const VirasoroElement& y, const PotentialV& v) {
    return eval_H(vir_product(x, vir_inverse(y)), v);
}

}  // namespace vir
