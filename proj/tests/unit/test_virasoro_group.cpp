#include "doctest.h"
#include "oracles.hpp"

#include "virasoro/virasoro_group.hpp"

#include <cmath>

using namespace vir;

TEST_CASE("cocycle vanishes against the identity") {
    oracle::Rng rng(3);
    const auto f = oracle::random_diffeo(rng, 0.3).sample(128);
    const auto id = CircleDiffeo::identity(128);
    CHECK(std::abs(bott_cocycle(f, id)) <= 1e-14);
    CHECK(std::abs(bott_cocycle(id, f)) <= 1e-12);
}

TEST_CASE("cocycle against fine quadrature") {
    oracle::SmoothDiffeo f, g;
    f.p.b[1] = 0.3;  // 0.3 sin x
    g.p.a[1] = 0.3;  // 0.3 cos x
    const double ref = oracle::bott_reference(f, g, 8192);
    CHECK(std::abs(ref) > 1e-3);
    CHECK(std::abs(bott_cocycle(f.sample(256), g.sample(256)) - ref) <= 1e-8);

    oracle::Rng rng(5);
    for (int trial = 0; trial < 3; ++trial) {
        const auto a = oracle::random_diffeo(rng, 0.4);
        const auto b = oracle::random_diffeo(rng, 0.4);
        CHECK(std::abs(bott_cocycle(a.sample(256), b.sample(256)) - oracle::bott_reference(a, b, 8192)) <= 1e-8);
    }
}

TEST_CASE("identity and inverse laws") {
    oracle::Rng rng(17);
    const std::size_t n = 256;
    for (int trial = 0; trial < 5; ++trial) {
        const VirasoroElement X{oracle::random_diffeo(rng, 0.4).sample(n), rng.uniform(-2, 2)};
        const auto e = VirasoroElement::identity(n);
        const auto xe = vir_product(X, e);
        CHECK(oracle::circle_distance(xe.f.displacement(), X.f.displacement()) <= 1e-12);
        CHECK(std::abs(xe.F - X.F) <= 1e-12);

        for (const auto& p : {vir_product(X, vir_inverse(X)), vir_product(vir_inverse(X), X)}) {
            CHECK(oracle::circle_distance(p.f.displacement(), PeriodicField::zeros(n)) <= 1e-9);
            CHECK(std::abs(p.F) <= 1e-9);
        }
        const auto back = vir_inverse(vir_inverse(X));
        CHECK(oracle::circle_distance(back.f.displacement(), X.f.displacement()) <= 1e-10);
        CHECK(std::abs(back.F - X.F) <= 1e-10);
    }
    const auto inv = vir_inverse({CircleDiffeo::identity(32), 3.5});
    CHECK(inv.F == -3.5);
    CHECK(inv.f.displacement().max_abs() == 0.0);
}

TEST_CASE("product is associative, including the central part") {
    oracle::Rng rng(23);
    const std::size_t n = 256;
    for (int trial = 0; trial < 5; ++trial) {
        const VirasoroElement X{oracle::random_diffeo(rng, 0.4).sample(n), rng.uniform(-1, 1)};
        const VirasoroElement Y{oracle::random_diffeo(rng, 0.4).sample(n), rng.uniform(-1, 1)};
        const VirasoroElement Z{oracle::random_diffeo(rng, 0.4).sample(n), rng.uniform(-1, 1)};
        const auto l = vir_product(vir_product(X, Y), Z);
        const auto r = vir_product(X, vir_product(Y, Z));
        CHECK(oracle::circle_distance(l.f.displacement(), r.f.displacement()) <= 1e-8);
        CHECK(std::abs(l.F - r.F) <= 1e-8);
    }
}
