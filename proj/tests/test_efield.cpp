// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ebloch/function_ops.hpp"

using namespace ebloch;

namespace {
std::shared_ptr<const theta_context> make_ctx(cplx tau = {0.1, 1.1}) {
    return std::make_shared<theta_context>(lattice(tau));
}
}  // namespace

TEST_CASE("constants") {
    auto ctx = make_ctx();
    auto f = elliptic_function::constant({5.0, 0.0}, ctx);
    CHECK(f.degree() == 0);
    CHECK(f({0.37, 0.21}).value() == cplx(5.0, 0.0));
    CHECK_THROWS_AS(elliptic_function::constant({0.0, 0.0}, ctx), std::invalid_argument);
}

TEST_CASE("from_divisor realizes wp(z) - wp(a)") {
    auto ctx = make_ctx({0.0, 1.0});
    const lattice& L = ctx->lat();
    cplx a{0.31, 0.42};
    // zeros {a, -a}, double pole at 0
    std::vector<cplx> avoid = {a, -a, {0.0, 0.0}};
    cplx probe = pick_probe(L, avoid);
    cplx target = wp(probe, *ctx) - wp(a, *ctx);
    auto f = elliptic_function::from_divisor({a, -a}, {{0.0, 0.0}, {0.0, 0.0}},
                                             elliptic_function::norm_probe{probe, target}, ctx);
    CHECK(f.degree() == 2);
    for (int k = 1; k <= 10; ++k) {
        cplx z = pick_probe(L, avoid, unsigned(k));
        cplx want = wp(z, *ctx) - wp(a, *ctx);
        CHECK(std::abs(f(z).value() - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
    // declared zeros are zeros, declared poles blow up
    CHECK(std::abs(f.raw_value(a)) < 1e-9 * std::abs(target));
    CHECK(f(cplx(0.0, 0.0)).is_inf());
}

TEST_CASE("from_divisor validation") {
    auto ctx = make_ctx();
    CHECK_THROWS_AS(elliptic_function::from_divisor({{0.1, 0.2}}, {{0.3, 0.1}, {0.2, 0.2}},
                                                    elliptic_function::norm_scale{{1.0, 0.0}}, ctx),
                    std::invalid_argument);
    // sums differing by a non-lattice vector: zeros sum 0.5, poles sum 0.2
    CHECK_THROWS_AS(elliptic_function::from_divisor({{0.5, 0.0}}, {{0.2, 0.0}},
                                                    elliptic_function::norm_scale{{1.0, 0.0}}, ctx),
                    numerical_error);
}

TEST_CASE("evaluate is doubly periodic") {
    auto ctx = make_ctx();
    auto f = random_function(3, 42, ctx);
    const cplx tau = ctx->lat().tau();
    cplx z = pick_probe(ctx->lat(), f.supports());
    cplx v0 = f(z).value();
    CHECK(std::abs(f(z + 1.0).value() - v0) < 1e-9 * std::max(1.0, std::abs(v0)));
    CHECK(std::abs(f(z + tau).value() - v0) < 1e-9 * std::max(1.0, std::abs(v0)));
    CHECK(std::abs(f(z - 3.0 + 2.0 * tau).value() - v0) < 1e-9 * std::max(1.0, std::abs(v0)));
}

TEST_CASE("algebra coherence") {
    auto ctx = make_ctx();
    auto f = random_function(3, 1, ctx);
    auto g = random_function(2, 2, ctx);
    auto fg = mul(f, g);
    CHECK(fg.degree() <= f.degree() + g.degree());
    std::vector<cplx> avoid = f.supports();
    auto gs = g.supports();
    avoid.insert(avoid.end(), gs.begin(), gs.end());
    for (int k = 0; k < 8; ++k) {
        cplx z = pick_probe(ctx->lat(), avoid, unsigned(k + 10));
        cplx want = f(z).value() * g(z).value();
        CHECK(std::abs(fg(z).value() - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
    auto one = div(f, f);
    CHECK(one.is_constant());
    CHECK(std::abs(one.scale() - 1.0) < 1e-10);

    auto sf = scalar_mul({2.0, -1.0}, f);
    cplx z = pick_probe(ctx->lat(), f.supports(), 77);
    CHECK(std::abs(sf(z).value() - cplx(2.0, -1.0) * f(z).value()) < 1e-10 * std::abs(f(z).value()));
}

TEST_CASE("mul cancels shared zero/pole pairs") {
    auto ctx = make_ctx();
    const lattice& L = ctx->lat();
    // f has a zero where g has a pole: product degree drops
    cplx shared{0.31, 0.52};
    cplx fz2{0.6, 0.3}, fp1{0.2, 0.2};
    auto f = elliptic_function::from_divisor({shared, fz2}, {fp1, shared + fz2 - fp1},
                                             elliptic_function::norm_scale{{1.0, 0.0}}, ctx);
    cplx gz1{0.1, 0.8}, gz2{0.41, 0.02};
    auto g = elliptic_function::from_divisor({gz1, gz2}, {shared, gz1 + gz2 - shared},
                                             elliptic_function::norm_scale{{1.0, 0.0}}, ctx);
    auto fg = mul(f, g);
    CHECK(fg.degree() == 3);
    std::vector<cplx> avoid = f.supports();
    auto gs = g.supports();
    avoid.insert(avoid.end(), gs.begin(), gs.end());
    cplx z = pick_probe(L, avoid, 5);
    cplx want = f(z).value() * g(z).value();
    CHECK(std::abs(fg(z).value() - want) < 1e-9 * std::max(1.0, std::abs(want)));
}

TEST_CASE("translate") {
    auto ctx = make_ctx();
    const lattice& L = ctx->lat();
    auto f = random_function(3, 99, ctx);
    torus_point rho(L.from_coords(0.27, 0.61), L);
    auto g = translate(f, rho);
    CHECK(g.degree() == f.degree());
    for (int k = 0; k < 5; ++k) {
        cplx z = pick_probe(L, g.supports(), unsigned(k + 30));
        cplx want = f(z + rho.lift()).value();
        CHECK(std::abs(g(z).value() - want) < 1e-8 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("random_function contract") {
    auto ctx = make_ctx();
    for (std::uint64_t seed : {1ULL, 5ULL, 9ULL}) {
        auto f = random_function(5, seed, ctx);
        CHECK(f.degree() == 5);
        cplx sz{0.0, 0.0}, sp{0.0, 0.0};
        for (const auto& z : f.zero_lifts()) sz += z;
        for (const auto& p : f.pole_lifts()) sp += p;
        CHECK(std::abs(sz - sp) < 1e-12);
        // distinct support
        auto all = f.supports();
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                CHECK(torus_dist(all[i], all[j], ctx->lat()) > 1e-8);
        // determinism
        auto f2 = random_function(5, seed, ctx);
        CHECK(f2.scale() == f.scale());
        CHECK(f2.zero_lifts() == f.zero_lifts());
    }
    CHECK_THROWS_AS((void)random_function(1, 0, ctx), std::invalid_argument);
}

TEST_CASE("one_minus") {
    auto ctx = make_ctx();
    auto f = random_function(3, 4, ctx);
    auto om = one_minus(f);
    CHECK(om.degree() == f.degree());
    std::vector<cplx> avoid = f.supports();
    auto oms = om.supports();
    avoid.insert(avoid.end(), oms.begin(), oms.end());
    for (int k = 0; k < 10; ++k) {
        cplx z = pick_probe(ctx->lat(), avoid, unsigned(k + 50));
        cplx want = 1.0 - f(z).value();
        CHECK(std::abs(om(z).value() - want) < 1e-8 * std::max(1.0, std::abs(want)));
    }
    // involution up to function equality
    CHECK(functions_equal(one_minus(om), f));
    // constants
    auto c = elliptic_function::constant({3.0, 1.0}, ctx);
    CHECK(one_minus(c).scale() == cplx(-2.0, -1.0));
    CHECK_THROWS_AS((void)one_minus(elliptic_function::constant({1.0, 0.0}, ctx)),
                    std::invalid_argument);
}

TEST_CASE("one_minus of the degree-2 h from four points") {
    // 1 - h keeps the poles and has the fiber h = 1 as zeros
    auto ctx = make_ctx();
    auto h = random_function(2, 12, ctx);
    auto om = one_minus(h);
    CHECK(om.degree() == 2);
    CHECK(divisors_match(om.pole_divisor(), h.pole_divisor(), 1e-8));
}

TEST_CASE("one_minus_reciprocal") {
    auto ctx = make_ctx();
    auto f = random_function(2, 31, ctx);
    auto omr = one_minus_reciprocal(f);
    // poles of 1 - 1/f are the zeros of f
    CHECK(divisors_match(omr.pole_divisor(), f.zero_divisor(), 1e-7));
    CHECK(omr.degree() <= 2 * f.degree());
    std::vector<cplx> avoid = f.supports();
    auto os = omr.supports();
    avoid.insert(avoid.end(), os.begin(), os.end());
    for (int k = 0; k < 6; ++k) {
        cplx z = pick_probe(ctx->lat(), avoid, unsigned(k + 3));
        cplx want = 1.0 - 1.0 / f(z).value();
        CHECK(std::abs(omr(z).value() - want) < 1e-8 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("functions_equal") {
    auto ctx = make_ctx();
    auto f = random_function(3, 8, ctx);
    CHECK(functions_equal(f, f));
    CHECK_FALSE(functions_equal(f, scalar_mul({1.0 + 1e-4, 0.0}, f)));
    CHECK(functions_equal(f, scalar_mul({1.0 + 1e-12, 0.0}, f)));
    auto g = random_function(3, 9, ctx);
    CHECK_FALSE(functions_equal(f, g));
    CHECK_FALSE(functions_equal(f, random_function(4, 8, ctx)));
}
