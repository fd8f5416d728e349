// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ebloch/rootfind.hpp"

using namespace ebloch;

namespace {
std::shared_ptr<const theta_context> make_ctx(cplx tau = {0.1, 1.1}) {
    return std::make_shared<theta_context>(lattice(tau));
}

// wp(z) - wp(a) in divisor form: zeros {a, -a}, double pole at 0.
elliptic_function wp_shift(const cplx& a, std::shared_ptr<const theta_context> ctx) {
    const lattice& L = ctx->lat();
    cplx probe = pick_probe(L, {a, -a, {0.0, 0.0}});
    cplx target = wp(probe, *ctx) - wp(a, *ctx);
    return elliptic_function::from_divisor({a, -a}, {{0.0, 0.0}, {0.0, 0.0}},
                                           elliptic_function::norm_probe{probe, target}, ctx);
}
}  // namespace

TEST_CASE("fiber of wp(z) - wp(a) at 0 is {a, -a}") {
    auto ctx = make_ctx({0.0, 1.0});
    cplx a{0.31, 0.42};
    auto f = wp_shift(a, ctx);
    divisor fib = f.zero_divisor();
    // the evenness oracle: solving afresh at a nearby value recovers both points
    cplx c = wp(cplx(0.11, 0.21), *ctx) - wp(a, *ctx);
    divisor d = solve_fiber(f, proj_value(c));
    CHECK(d.degree() == 2);
    // direct residual oracle on each returned point
    for (const auto& e : d.entries()) {
        cplx r = e.point.lift();
        CHECK(std::abs((wp(r, *ctx) - wp(a, *ctx)) - c) < 1e-9 * std::max(1.0, std::abs(c)));
    }
    // and the two points are +-z0 of each other
    auto pts = d.expand_positive();
    REQUIRE(pts.size() == 2);
    CHECK(points_equal(pts[0], -pts[1], 1e-7));
}

TEST_CASE("double root at a half period") {
    // wp - wp(1/2) has a double zero at 1/2: 2-torsion is critical for wp
    auto ctx = make_ctx({0.0, 1.0});
    cplx half{0.5, 0.0};
    auto f = wp_shift(cplx(0.31, 0.42), ctx);
    cplx c = wp(half, *ctx) - wp(cplx(0.31, 0.42), *ctx);
    divisor d = solve_fiber(f, proj_value(c));
    CHECK(d.degree() == 2);
    REQUIRE(d.entries().size() == 1);
    CHECK(d.entries()[0].mult == 2);
    CHECK(points_equal(d.entries()[0].point, torus_point(half, ctx->lat()), 1e-6));
}

TEST_CASE("random fibers close: count, residual, Abel") {
    auto ctx = make_ctx();
    const lattice& L = ctx->lat();
    rng gen(100);
    for (int trial = 0; trial < 10; ++trial) {
        int deg = 2 + int(gen.next_u64() % 4);
        auto f = random_function(deg, 500 + std::uint64_t(trial), ctx);
        cplx c{gen.uniform(-2.0, 2.0), gen.uniform(-2.0, 2.0)};
        divisor d = solve_fiber(f, proj_value(c));
        CHECK(d.degree() == deg);
        cplx root_sum{0.0, 0.0};
        for (const auto& e : d.entries()) {
            CHECK(std::abs(f.raw_value(e.point.lift()) - c) < 1e-10 * std::max(1.0, std::abs(c)));
            root_sum += double(e.mult) * e.point.lift();
        }
        cplx pole_sum{0.0, 0.0};
        for (const auto& p : f.pole_lifts()) pole_sum += p;
        cplx gap = root_sum - pole_sum;
        CHECK(std::abs(gap - nearest_lattice_vector(gap, L)) < 1e-8);
        CHECK(count_zeros(f, proj_value(c)) == deg);
    }
}

TEST_CASE("fiber at infinity and zero are the declared divisors") {
    auto ctx = make_ctx();
    auto f = random_function(4, 77, ctx);
    CHECK(divisors_match(solve_fiber(f, proj_value::infinity()), f.pole_divisor(), 1e-9));
    CHECK(divisors_match(solve_fiber(f, proj_value(cplx(0.0, 0.0))), f.zero_divisor(), 1e-9));
    CHECK(count_zeros(f, proj_value::infinity()) == 4);
}

TEST_CASE("fibers of f and 1/f agree through c -> 1/c") {
    auto ctx = make_ctx();
    auto f = random_function(3, 321, ctx);
    auto g = reciprocal(f);
    cplx c{1.3, -0.4};
    divisor df = solve_fiber(f, proj_value(c));
    divisor dg = solve_fiber(g, proj_value(1.0 / c));
    CHECK(divisors_match(df, dg, 1e-7));
}

TEST_CASE("determinism: identical inputs, identical output order") {
    auto ctx = make_ctx();
    auto f = random_function(4, 55, ctx);
    cplx c{0.7, 0.3};
    divisor d1 = solve_fiber(f, proj_value(c));
    divisor d2 = solve_fiber(f, proj_value(c));
    REQUIRE(d1.entries().size() == d2.entries().size());
    for (std::size_t i = 0; i < d1.entries().size(); ++i) {
        CHECK(d1.entries()[i].point.lift() == d2.entries()[i].point.lift());
        CHECK(d1.entries()[i].mult == d2.entries()[i].mult);
    }
    // sorted by (u, v)
    for (std::size_t i = 1; i < d1.entries().size(); ++i) {
        const auto& a = d1.entries()[i - 1].point;
        const auto& b = d1.entries()[i].point;
        CHECK((a.u() < b.u() || (a.u() == b.u() && a.v() <= b.v())));
    }
}

TEST_CASE("count_zeros rejects constants") {
    auto ctx = make_ctx();
    auto c = elliptic_function::constant({2.0, 0.0}, ctx);
    CHECK_THROWS_AS((void)count_zeros(c, proj_value(cplx(1.0, 0.0))), std::invalid_argument);
    CHECK_THROWS_AS((void)solve_fiber(c, proj_value(cplx(1.0, 0.0))), std::invalid_argument);
}
