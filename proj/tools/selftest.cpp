#include "app.hpp"

#include "virasoro/ch_family.hpp"
#include "virasoro/diagnostics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace vircli {
namespace {

using namespace vir;

struct Check {
    std::string name;
    std::function<double()> error;  // returns the discrepancy
    double tol;
};

PeriodicField wave(std::size_t n, double a, int k, double phase = 0.0) {
    return PeriodicField::sample(n, [=](double x) { return a * std::sin(k * x + phase); });
}

CircleDiffeo sample_diffeo(std::size_t n) {
    return CircleDiffeo(PeriodicField::sample(n, [](double x) { return 0.3 * std::sin(x) + 0.05 * std::cos(3 * x) + 0.4; }));
}

double diffeo_gap(const CircleDiffeo& a, const CircleDiffeo& b) {
    return (a.centered_displacement() - b.centered_displacement()).max_abs();
}

std::vector<Check> checks() {
    constexpr std::size_t n = 128;
    const PotentialV V = PotentialV::builtin(1.0, 1.0, 0.0);
    const PotentialV W = PotentialV::builtin(1.0, 0.7, 0.3);
    const CircleDiffeo f = sample_diffeo(n);
    const VirasoroElement X{f, 0.7};
    const PeriodicField sin_x = wave(n, 1.0, 1);
    std::vector<Check> c;

    c.push_back({"derivative of sin is cos", [=] {
                     return (spectral_derivative(sin_x, 1) - PeriodicField::sample(n, [](double x) { return std::cos(x); })).max_abs();
                 }, 1e-12});
    c.push_back({"derivative of a constant vanishes",
                 [=] { return spectral_derivative(PeriodicField::constant(n, 3.0), 1).max_abs(); }, 1e-12});
    c.push_back({"interpolate cos at pi/3", [=] {
                     const double p = std::numbers::pi / 3;
                     return std::abs(interpolate(sin_x.map([](double) { return 0.0; }) + PeriodicField::sample(n, [](double x) { return std::cos(x); }),
                                                 std::vector<double>{p})[0] - 0.5);
                 }, 1e-12});
    c.push_back({"interpolation reproduces nodes", [=] {
                     std::vector<double> nodes(n);
                     for (std::size_t j = 0; j < n; ++j) nodes[j] = grid_node(n, j);
                     const auto vals = interpolate(f.displacement(), nodes);
                     double e = 0;
                     for (std::size_t j = 0; j < n; ++j) e = std::max(e, std::abs(vals[j] - f.displacement()[j]));
                     return e;
                 }, 0.0});
    c.push_back({"integral of 1 is 2pi", [=] { return std::abs(integrate(PeriodicField::constant(n, 1.0)) - two_pi); }, 1e-14});
    c.push_back({"integral of sin vanishes", [=] { return std::abs(integrate(sin_x)); }, 1e-14});
    c.push_back({"power law c eps^2", [] {
                     const std::vector<double> e{0.1, 0.05, 0.02, 0.01};
                     std::vector<double> r;
                     for (double x : e) r.push_back(3.0 * x * x);
                     const auto fit = fit_power_law(e, r);
                     return std::max({std::abs(fit.exponent - 2.0), std::abs(fit.coefficient - 3.0), std::abs(fit.r_squared - 1.0)});
                 }, 1e-12});
    c.push_back({"power law eps^3", [] {
                     const std::vector<double> e{0.1, 0.05, 0.02, 0.01};
                     std::vector<double> r;
                     for (double x : e) r.push_back(x * x * x);
                     return std::abs(fit_power_law(e, r).exponent - 3.0);
                 }, 1e-12});
    c.push_back({"compose with identity", [=] {
                     const auto id = CircleDiffeo::identity(n);
                     return std::max(diffeo_gap(compose(id, f), f), diffeo_gap(compose(f, id), f));
                 }, 1e-12});
    c.push_back({"rotations compose by adding angles", [=] {
                     return diffeo_gap(compose(CircleDiffeo::rotation(n, 2.0), CircleDiffeo::rotation(n, 5.0)),
                                       CircleDiffeo::rotation(n, 7.0));
                 }, 1e-12});
    c.push_back({"inverse of identity", [=] { return diffeo_gap(invert(CircleDiffeo::identity(n)), CircleDiffeo::identity(n)); }, 1e-12});
    c.push_back({"inverse of a rotation", [=] { return diffeo_gap(invert(CircleDiffeo::rotation(n, 1.3)), CircleDiffeo::rotation(n, -1.3)); }, 1e-12});
    c.push_back({"slope of identity is 1", [=] { return (derivative(CircleDiffeo::identity(n), 1) + (-1.0)).max_abs(); }, 1e-14});
    c.push_back({"slope of x + a sin x", [=] {
                     const auto g = CircleDiffeo(wave(n, 0.3, 1));
                     return (derivative(g, 1) - PeriodicField::sample(n, [](double x) { return 1 + 0.3 * std::cos(x); })).max_abs();
                 }, 1e-13});
    c.push_back({"curvature of x + 0.2 sin 3x", [=] {
                     // Second differentiation amplifies roundoff by ~n^2; a coarse grid suffices.
                     const auto g = CircleDiffeo(wave(64, 0.2, 3));
                     return (derivative(g, 2) + wave(64, 1.8, 3)).max_abs();
                 }, 1e-12});
    c.push_back({"cocycle with identity on the right", [=] { return std::abs(bott_cocycle(f, CircleDiffeo::identity(n))); }, 1e-14});
    c.push_back({"cocycle with identity on the left", [=] { return std::abs(bott_cocycle(CircleDiffeo::identity(n), f)); }, 1e-12});
    c.push_back({"product with the identity element", [=] {
                     const auto p = vir_product(X, VirasoroElement::identity(n));
                     return std::max(diffeo_gap(p.f, X.f), std::abs(p.F - X.F));
                 }, 1e-12});
    c.push_back({"product with the inverse", [=] {
                     const auto p = vir_product(X, vir_inverse(X));
                     return std::max(diffeo_gap(p.f, CircleDiffeo::identity(n)), std::abs(p.F));
                 }, 1e-9});
    c.push_back({"inverse of (id, 3.5)", [=] {
                     const auto p = vir_inverse({CircleDiffeo::identity(n), 3.5});
                     return std::max(diffeo_gap(p.f, CircleDiffeo::identity(n)), std::abs(p.F + 3.5));
                 }, 0.0});
    c.push_back({"inverse is an involution", [=] {
                     const auto p = vir_inverse(vir_inverse(X));
                     return std::max(diffeo_gap(p.f, X.f), std::abs(p.F - X.F));
                 }, 1e-10});
    c.push_back({"H of (id, F) is F^2", [=] { return std::abs(eval_H({CircleDiffeo::identity(n), 1.5}, W) - 2.25); }, 1e-14});
    c.push_back({"H of (id, 0) vanishes", [=] { return std::abs(eval_H(VirasoroElement::identity(n), W)); }, 0.0});
    c.push_back({"L(X, X) vanishes", [=] { return std::abs(eval_L(X, X, W)); }, 1e-12});
    c.push_back({"L(X, identity) equals H(X)", [=] { return std::abs(eval_L(X, VirasoroElement::identity(n), W) - eval_H(X, W)); }, 1e-12});
    c.push_back({"constant path has identity velocities", [=] {
                     const auto v = velocities(DiscretePath({X, X, X}));
                     double e = 0;
                     for (const auto& p : v) e = std::max({e, diffeo_gap(p.omega, CircleDiffeo::identity(n)), std::abs(p.Omega)});
                     return e;
                 }, 1e-9});
    c.push_back({"velocity of ((g, G), identity)", [=] {
                     const auto v = velocities(DiscretePath({X, VirasoroElement::identity(n)}));
                     return std::max(diffeo_gap(v[0].omega, X.f), std::abs(v[0].Omega - X.F));
                 }, 1e-12});
    c.push_back({"constant Omega has no EL1 residual", [=] {
                     const std::vector<VelocityPair> v(3, VelocityPair{CircleDiffeo::identity(n), 0.4});
                     double e = 0;
                     for (double r : el1_residual(v)) e = std::max(e, std::abs(r));
                     return e;
                 }, 0.0});
    c.push_back({"EL1 of Omega = (1, 2)", [=] {
                     const std::vector<VelocityPair> v{{CircleDiffeo::identity(n), 1.0}, {CircleDiffeo::identity(n), 2.0}};
                     return std::abs(el1_residual(v).at(0) - 1.0);
                 }, 0.0});
    c.push_back({"EL2 vanishes at identity velocities", [=] {
                     const auto id = CircleDiffeo::identity(n);
                     return el2_residual(id, id, 0.3, 0.3, Potential{W}).max_abs();
                 }, 1e-14});
    c.push_back({"gradient at a constant path", [=] { return action_gradient(X, X, X, W).max_norm(); }, 1e-8});
    c.push_back({"step from (id, 0) stays put", [=] {
                     const auto r = step(CircleDiffeo::identity(n), 0.0, W);
                     return diffeo_gap(r.omega_next, CircleDiffeo::identity(n)) + r.iterations;
                 }, 0.0});
    c.push_back({"trajectory from (id, 0) is constant", [=] {
                     const auto t = trajectory(X, {CircleDiffeo::identity(n), 0.0}, 3, W);
                     double e = 0;
                     for (const auto& x : t.path.elements()) e = std::max({e, diffeo_gap(x.f, X.f), std::abs(x.F - X.F)});
                     return e;
                 }, 1e-12});
    c.push_back({"trajectory with one step", [=] {
                     const VelocityPair w{CircleDiffeo(wave(n, 0.05, 2)), 0.1};
                     const auto t = trajectory(X, w, 1, W);
                     const auto v = velocities(t.path);
                     return std::max(diffeo_gap(v[0].omega, w.omega), std::abs(v[0].Omega - w.Omega)) + (t.path.length() == 2 ? 0.0 : 1.0);
                 }, 1e-12});
    c.push_back({"embed v = 0", [=] {
                     const auto p = embed({PeriodicField::zeros(n), 0.8, 0.01});
                     return std::max(diffeo_gap(p.omega, CircleDiffeo::identity(n)), std::abs(p.Omega - 0.008));
                 }, 1e-15});
    c.push_back({"embed eps = 0", [=] {
                     const auto p = embed({sin_x, 0.8, 0.0});
                     return std::max(diffeo_gap(p.omega, CircleDiffeo::identity(n)), std::abs(p.Omega));
                 }, 0.0});
    c.push_back({"embed sin x with eps 0.01", [=] {
                     return std::abs(embed({sin_x, 1.0, 0.01}).omega.centered_displacement().max_abs() - 0.01);
                 }, 1e-15});
    c.push_back({"first-order term of v = 0", [=] {
                     return epsilon1_term(GeneralPotentialU::from_potential(W), PeriodicField::zeros(n)).max_abs();
                 }, 0.0});
    c.push_back({"CH operator on a constant", [=] {
                     return ch_family_operator(PeriodicField::constant(n, 2.0), PeriodicField::zeros(n), {1.3, 0.7, 2.0}).max_abs();
                 }, 1e-12});
    c.push_back({"CH operator with v = 0, (alpha, 0, 0)", [=] {
                     const auto vt = wave(n, 0.4, 2, 0.3);
                     return (ch_family_operator(PeriodicField::zeros(n), vt, {2.5, 0.0, 0.0}) - 2.5 * vt).max_abs();
                 }, 1e-15});
    c.push_back({"second-order term on a constant", [=] {
                     return second_order_term(PeriodicField::constant(n, 2.0), PeriodicField::zeros(n), W, 0.25).max_abs();
                 }, 1e-12});
    c.push_back({"second-order term against the CH operator", [=] {
                     const auto v = wave(n, 0.7, 1) + wave(n, 0.2, 3, 1.0);
                     const auto vt = wave(n, 0.5, 2, 0.4);
                     return (second_order_term(v, vt, W, 0.3) + ch_family_operator(v, -vt, limit_params(W, 0.3))).max_abs();
                 }, 1e-12});
    c.push_back({"constants stay constant under CH", [=] {
                     const PDEState s{PeriodicField::constant(n, 0.8), 0.0, {1.0, 1.0, 0.0}};
                     return (evolve(s, 0.1, 1e-3).v + (-0.8)).max_abs();
                 }, 1e-13});
    c.push_back({"energy of zero", [=] { return std::abs(energy({PeriodicField::zeros(n), 0.0, {1, 1, 0}})); }, 0.0});
    c.push_back({"energy of sin x is 2pi", [=] { return std::abs(energy({sin_x, 0.0, {1, 1, 0}}) - two_pi); }, 1e-13});
    c.push_back({"mean of sin x", [=] { return std::abs(mean_momentum({sin_x, 0.0, {1, 1, 0}})); }, 1e-15});
    c.push_back({"mean of 2 + sin x", [=] { return std::abs(mean_momentum({sin_x + 2.0, 0.0, {1, 1, 0}}) - 2.0); }, 1e-15});
    c.push_back({"identity symmetry", [=] {
                     const auto z = apply_symmetry(frozen_field(sin_x), SymmetryTransform{});
                     return (z.v(0.3) - sin_x).max_abs() + z.v_t(0.3).max_abs();
                 }, 0.0});
    c.push_back({"Galilean image of a constant solution", [=] {
                     const SymmetryTransform t{1.0, 1.0, 0.5, 1.5, 1.0};
                     const auto z = apply_symmetry(frozen_field(PeriodicField::constant(n, 0.3)), t);
                     const auto canon = transform_params({1, 1, 0}, t);
                     return ch_family_operator(z.v(0.2), z.v_t(0.2), canon).max_abs() + (z.v(0.2) + (-0.8)).max_abs();
                 }, 1e-13});
    c.push_back({"classify (1,1,0)", [] {
                     const auto oc = classify_orbit({1, 1, 0});
                     const auto& t = oc.normalization;
                     return (oc.tag == OrbitTag::CamassaHolm ? 0.0 : 1.0) + std::abs(t.lambda - 1) + std::abs(t.mu - 1) +
                            std::abs(t.c) + std::abs(t.d) + std::abs(t.scale - 1);
                 }, 0.0});
    c.push_back({"classify the special cases", [] {
                     const bool ok = classify_orbit({1, 0, 1}).tag == OrbitTag::KdV &&
                                     classify_orbit({0, 1, 5}).tag == OrbitTag::HunterSaxton &&
                                     classify_orbit({1, 0, 0}).tag == OrbitTag::DispersionlessKdV &&
                                     classify_orbit({0, 0, 2}).tag == OrbitTag::ThirdDerivativeConstraint;
                     return ok ? 0.0 : 1.0;
                 }, 0.0});
    return c;
}

}  // namespace

int run_selftest(std::ostream& out) {
    set_warnings_enabled(false);
    int failures = 0;
    const auto list = checks();
    for (const auto& c : list) {
        double e = 0;
        std::string detail;
        try {
            e = c.error();
        } catch (const std::exception& ex) {
            e = INFINITY;
            detail = ex.what();
        }
        const bool ok = e <= c.tol;
        if (!ok) ++failures;
        out << fmt::format("{} {} (error {:.3e}, tol {:.1e}){}\n", ok ? "ok  " : "FAIL", c.name, e, c.tol,
                           detail.empty() ? "" : ": " + detail);
    }
    out << fmt::format("selftest: {} of {} checks passed\n", list.size() - failures, list.size());
    set_warnings_enabled(true);
    return failures == 0 ? 0 : 1;
}

}  // namespace vircli
