#include "doctest.h"
#include "oracles.hpp"

#include "virasoro/expression.hpp"
#include "virasoro/lagrangian.hpp"

#include <cmath>

using namespace vir;

TEST_CASE("expression parser") {
    CHECK(Expression::parse("1 + 2 * 3")(0, 0) == 7);
    CHECK(Expression::parse("-2^2")(0, 0) == -4);
    CHECK(Expression::parse("2^3^2")(0, 0) == 512);
    CHECK(Expression::parse("sin(x1) * x2 + cos(x3)")(0.5, 2, 0.1) ==
          doctest::Approx(std::sin(0.5) * 2 + std::cos(0.1)));
    CHECK(Expression::parse("exp(log(x2)) / pi")(0, 3) == doctest::Approx(3 / std::numbers::pi));
    CHECK_THROWS_AS(Expression::parse("1 +"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("(1"), std::invalid_argument);
}

TEST_CASE("potential validation") {
    CHECK_NOTHROW(PotentialV::builtin(1, 1, 0));
    CHECK(PotentialV::builtin(2, 3, 0.5).alpha() == doctest::Approx(2));
    CHECK(PotentialV::builtin(2, 3, 0.5).beta() == doctest::Approx(3));
    CHECK(parse_builtin_potential("builtin:1,0.5,2").beta() == doctest::Approx(0.5));
    CHECK_THROWS_AS(parse_builtin_potential("builtin:1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_builtin_potential("quadratic:1,2,3"), std::invalid_argument);

    oracle::Rng rng(2);
    for (int i = 0; i < 5; ++i) CHECK_NOTHROW(oracle::random_v_family(rng).potential());
    for (const auto& u : oracle::generic_u_potentials()) CHECK(!u.name().empty());

    std::map<std::string, std::string> good = {{"V", "1 - cos(x1) + 0.5*(x2-1)^2"},
                                               {"V1", "sin(x1)"},
                                               {"V2", "x2 - 1"},
                                               {"V11", "cos(x1)"},
                                               {"V12", "0"},
                                               {"V22", "1"},
                                               {"V112", "0"}};
    CHECK_NOTHROW(PotentialV::from_expressions(good));

    auto not_periodic = good;
    not_periodic["V"] = "x1^2/2 + 0.5*(x2-1)^2";
    not_periodic["V1"] = "x1";
    not_periodic["V11"] = "1";
    CHECK_THROWS_AS(PotentialV::from_expressions(not_periodic), std::invalid_argument);

    auto not_stationary = good;
    not_stationary["V"] = "sin(x1) + 0.5*(x2-1)^2";
    not_stationary["V1"] = "cos(x1)";
    not_stationary["V11"] = "-sin(x1)";
    CHECK_THROWS_AS(PotentialV::from_expressions(not_stationary), std::invalid_argument);

    auto inconsistent = good;
    inconsistent["V22"] = "2";
    CHECK_THROWS_AS(PotentialV::from_expressions(inconsistent), std::invalid_argument);

    auto missing = good;
    missing.erase("V112");
    CHECK_THROWS_AS(PotentialV::from_expressions(missing), std::invalid_argument);
}

TEST_CASE("synthesized U matches V") {
    oracle::Rng rng(4);
    const auto fam = oracle::random_v_family(rng);
    const auto V = fam.potential();
    const auto U = GeneralPotentialU::from_potential(V);
    const double h = 1e-4;
    for (int i = 0; i < 10; ++i) {
        const double a = rng.uniform(-3, 3), b = rng.uniform(0.5, 1.5), c = rng.uniform(-3, 3);
        CHECK(U.U(a, b, c) == doctest::Approx(V.V(a - c, b)));
        // mixed partials in x3 by central differences of the closed-form V
        const double u13 = -(V.V1(a - c + h, b) - V.V1(a - c - h, b)) / (2 * h);
        CHECK(U.U13(a, b, c) == doctest::Approx(u13).epsilon(1e-6));
        const double u23 = -(V.V2(a - c + h, b) - V.V2(a - c - h, b)) / (2 * h);
        CHECK(U.U23(a, b, c) == doctest::Approx(u23).epsilon(1e-6));
    }
}

TEST_CASE("H on closed forms") {
    const auto V = PotentialV::builtin(1, 1, 0);
    CHECK(eval_H({CircleDiffeo::identity(64), 2.5}, V) == doctest::Approx(6.25).epsilon(1e-15));
    CHECK(std::abs(eval_H(VirasoroElement::identity(64), PotentialV::builtin(1.3, 0.7, 0.2))) <= 1e-15);

    const std::size_t n = 256;
    const VirasoroElement X{CircleDiffeo(PeriodicField::sample(n, [](double x) { return 0.2 * std::sin(x); })), 1.0};
    const double ref = 1.0 + oracle::quadrature(
                                 [](double x) {
                                     const double u = 0.2 * std::sin(x), up = 0.2 * std::cos(x);
                                     return (1 - std::cos(u)) + 0.5 * up * up;
                                 },
                                 8192);
    CHECK(std::abs(eval_H(X, V) - ref) <= 1e-9);
}

TEST_CASE("two-point Lagrangian") {
    oracle::Rng rng(8);
    const std::size_t n = 256;
    const auto V = PotentialV::builtin(1, 1, 0.3);
    const VirasoroElement X{oracle::random_diffeo(rng, 0.3).sample(n), 0.7};
    CHECK(std::abs(eval_L(X, X, V)) <= 1e-9);
    CHECK(eval_L(X, VirasoroElement::identity(n), V) == doctest::Approx(eval_H(X, V)).epsilon(1e-12));
}

TEST_CASE("right invariance") {
    oracle::Rng rng(13);
    const std::size_t n = 256;
    const auto V = oracle::random_v_family(rng).potential();
    for (int trial = 0; trial < 5; ++trial) {
        const VirasoroElement X{oracle::random_diffeo(rng, 0.3).sample(n), rng.uniform(-1, 1)};
        const VirasoroElement Y{oracle::random_diffeo(rng, 0.3).sample(n), rng.uniform(-1, 1)};
        const VirasoroElement g{oracle::random_diffeo(rng, 0.3).sample(n), rng.uniform(-1, 1)};
        const double base = eval_L(X, Y, V);
        CHECK(std::abs(eval_L(vir_product(X, g), vir_product(Y, g), V) - base) <= 1e-8);
    }
}
