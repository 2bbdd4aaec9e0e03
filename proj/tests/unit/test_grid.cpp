#include "doctest.h"
#include "oracles.hpp"

#include "virasoro/grid.hpp"

#include <cmath>
#include <vector>

using namespace vir;

TEST_CASE("grid sizes") {
    CHECK(is_valid_grid_size(16));
    CHECK(is_valid_grid_size(4096));
    CHECK_FALSE(is_valid_grid_size(8));
    CHECK_FALSE(is_valid_grid_size(96));
    CHECK_FALSE(is_valid_grid_size(0));
}

TEST_CASE("spectral derivative of closed forms") {
    const auto u = PeriodicField::sample(64, [](double x) { return std::sin(x); });
    const auto cosx = PeriodicField::sample(64, [](double x) { return std::cos(x); });
    CHECK((spectral_derivative(u, 1) - cosx).max_abs() <= 1e-12);
    CHECK(spectral_derivative(PeriodicField::constant(64, 3.7), 1).max_abs() <= 1e-15);

    const auto w = PeriodicField::sample(64, [](double x) { return std::sin(3 * x) + 0.2 * std::cos(7 * x); });
    const auto w3 = PeriodicField::sample(64, [](double x) { return -27 * std::cos(3 * x) + 0.2 * 343 * std::sin(7 * x); });
    CHECK((spectral_derivative(w, 3) - w3).max_abs() <= 1e-10);
}

TEST_CASE("second derivative of exp(sin x) against fine-grid differences") {
    const std::size_t n = 128, m = 4096;
    const auto fn = [](double x) { return std::exp(std::sin(x)); };
    const auto d2 = spectral_derivative(PeriodicField::sample(n, fn), 2);
    const double h = two_pi / m;
    double err = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = d2.node(j);
        // fourth-order central stencil on the m-node grid through x
        const double fd = (-fn(x + 2 * h) + 16 * fn(x + h) - 30 * fn(x) + 16 * fn(x - h) - fn(x - 2 * h)) / (12 * h * h);
        err = std::max(err, std::abs(d2[j] - fd));
    }
    CHECK(err <= 1e-8);
}

TEST_CASE("derivative identities") {
    const auto u = PeriodicField::sample(128, [](double x) { return std::cos(2 * x) - 0.4 * std::sin(5 * x) + 0.1; });
    CHECK((spectral_derivative(u, 2) - spectral_derivative(spectral_derivative(u, 1), 1)).max_abs() <= 1e-10);
    CHECK(std::abs(integrate(spectral_derivative(u, 1))) <= 1e-12);
    const auto e = PeriodicField::sample(128, [](double x) { return std::exp(std::cos(x)); });
    CHECK(std::abs(integrate(spectral_derivative(e, 1))) <= 1e-12);
}

TEST_CASE("interpolation") {
    const auto c = PeriodicField::sample(32, [](double x) { return std::cos(x); });
    const double third = std::numbers::pi / 3;
    CHECK(std::abs(interpolate(c, std::vector<double>{third})[0] - 0.5) <= 1e-12);

    oracle::Rng rng(7);
    const auto r = PeriodicField::sample(64, [&](double) { return rng.uniform(-1, 1); });
    std::vector<double> nodes;
    for (std::size_t j = 0; j < 64; ++j) nodes.push_back(r.node(j) + (j % 2 ? two_pi : 0.0));
    const auto at = interpolate(r, nodes);
    for (std::size_t j = 0; j < 64; ++j) CHECK(at[j] == r[j]);

    const auto fn = [](double x) { return std::sin(2 * x) + 0.3 * std::cos(5 * x); };
    const auto u = PeriodicField::sample(64, fn);
    std::vector<double> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(rng.uniform(-10, 10));
    const auto vals = interpolate(u, pts);
    double err = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, std::abs(vals[i] - fn(pts[i])));
    CHECK(err <= 1e-10);
}

TEST_CASE("integration") {
    CHECK(integrate(PeriodicField::constant(16, 1.0)) == doctest::Approx(two_pi).epsilon(1e-15));
    CHECK(std::abs(integrate(PeriodicField::sample(64, [](double x) { return std::sin(x); }))) <= 1e-14);
    const double i0 = two_pi * oracle::bessel_i0_one();
    CHECK(std::abs(i0 - 7.95492652101284) <= 1e-13);
    const auto e = PeriodicField::sample(64, [](double x) { return std::exp(std::cos(x)); });
    CHECK(std::abs(integrate(e) - i0) <= 1e-10);
}

TEST_CASE("translate, reflect, resample") {
    const auto fn = [](double x) { return std::sin(x) + 0.5 * std::cos(3 * x); };
    const auto u = PeriodicField::sample(64, fn);
    const auto shifted = translate(u, 0.37);
    const auto ref = PeriodicField::sample(64, [&](double x) { return fn(x - 0.37); });
    CHECK((shifted - ref).max_abs() <= 1e-12);
    CHECK((reflect(u) - PeriodicField::sample(64, [&](double x) { return fn(-x); })).max_abs() <= 1e-14);
    CHECK((resample(u, 256) - PeriodicField::sample(256, fn)).max_abs() <= 1e-13);
    CHECK((resample(resample(u, 256), 64) - u).max_abs() <= 1e-13);
}

TEST_CASE("power-law fit") {
    const std::vector<double> eps = {1e-2, 5e-3, 2.5e-3, 1e-3};
    std::vector<double> r2, r3, mixed;
    for (double e : eps) {
        r2.push_back(3.0 * e * e);
        r3.push_back(e * e * e);
        mixed.push_back(2 * e * e + 5 * e * e * e);
    }
    const auto f2 = fit_power_law(eps, r2);
    CHECK(f2.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f2.coefficient == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f2.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_power_law(eps, r3).exponent == doctest::Approx(3.0).epsilon(1e-12));
    const double em = fit_power_law(eps, mixed).exponent;
    CHECK(em >= 1.95);
    CHECK(em <= 2.05);

    const std::vector<double> few = {1e-2, 5e-3, 1e-3};
    CHECK_THROWS_AS(fit_power_law(few, std::vector<double>{1, 2, 3}), std::invalid_argument);
    const std::vector<double> unsorted = {1e-3, 5e-3, 2.5e-3, 1e-2};
    CHECK_THROWS_AS(fit_power_law(unsorted, r2), std::invalid_argument);
    std::vector<double> zero = r2;
    zero[3] = 0;
    CHECK_THROWS_AS(fit_power_law(eps, zero), std::invalid_argument);
}
