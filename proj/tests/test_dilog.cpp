// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ebloch/dilog.hpp"
#include "oracles.hpp"

using namespace ebloch;

TEST_CASE("li2 ground values against summation oracles") {
    CHECK(std::abs(li2({0.0, 0.0})) == 0.0);

    double pi2_6 = oracles::li2_one_series();
    CHECK(std::abs(li2({1.0, 0.0}).real() - pi2_6) < 1e-13);
    CHECK(std::abs(li2({1.0, 0.0}).real() - pi * pi / 6.0) < 1e-14);

    cplx li2_i = oracles::li2_i_series();
    CHECK(std::abs(li2({0.0, 1.0}) - li2_i) < 1e-13);
    CHECK(std::abs(li2_i.real() + pi * pi / 48.0) < 1e-13);
    // Catalan's constant
    CHECK(std::abs(li2_i.imag() - 0.9159655941772190) < 1e-13);
}

TEST_CASE("bernoulli literals against the zeta oracle") {
    // B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
    double fact = 1.0;
    for (int k = 1; k <= 18; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        double zeta = oracles::zeta_even(2 * k);
        double expect = ((k % 2 == 1) ? 2.0 : -2.0) * fact * zeta / std::pow(2.0 * pi, 2.0 * k);
        double got = detail::bernoulli_even(k);
        CHECK(std::abs(got - expect) < 1e-9 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("bloch-wigner ground values") {
    CHECK(bloch_wigner({0.5, 0.0}) == 0.0);
    CHECK(bloch_wigner({0.0, 0.0}) == 0.0);
    CHECK(bloch_wigner({1.0, 0.0}) == 0.0);
    CHECK(bloch_wigner({-3.7, 0.0}) == 0.0);
    // D(i) = Catalan, from the li2(i) oracle; arg(1-i) ln|i| = 0.
    CHECK(std::abs(bloch_wigner({0.0, 1.0}) - oracles::li2_i_series().imag()) < 1e-13);
}

TEST_CASE("bloch-wigner symmetry identities") {
    rng gen(2024);
    double worst_inv = 0.0, worst_conj = 0.0;
    for (int k = 0; k < 1000; ++k) {
        double r = 0.1 * std::pow(100.0, gen.next_double());
        cplx z = r * gen.unit_complex();
        if (std::abs(z) < 1e-6) continue;
        worst_inv = std::max(worst_inv, std::abs(bloch_wigner(z) + bloch_wigner(1.0 / z)));
        worst_conj = std::max(worst_conj, std::abs(bloch_wigner(std::conj(z)) + bloch_wigner(z)));
    }
    CHECK(worst_inv < 1e-11);
    CHECK(worst_conj < 1e-12);
    cplx z{2.0, 3.0};
    CHECK(std::abs(bloch_wigner(z) + bloch_wigner(1.0 / z)) < 1e-12);
}

TEST_CASE("five-term relation") {
    CHECK(five_term_residual_d({2.0, 1.0}, {3.0, -1.0}) < 1e-10);
    CHECK(five_term_residual_d({0.3, 0.0}, {0.7, 0.0}) < 1e-12);

    rng gen(7);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        double r1 = 0.1 * std::pow(100.0, gen.next_double());
        double r2 = 0.1 * std::pow(100.0, gen.next_double());
        cplx x = r1 * gen.unit_complex(), y = r2 * gen.unit_complex();
        if (std::abs(x - y) < 1e-4 || std::abs(x) < 1e-3 || std::abs(x - 1.0) < 1e-3 ||
            std::abs(y) < 1e-3 || std::abs(y - 1.0) < 1e-3)
            continue;
        worst = std::max(worst, five_term_residual_d(x, y));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("branch-transformation consistency on the overlap annulus") {
    rng gen(11);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        double r = gen.uniform(0.4, 0.6);
        cplx z = r * gen.unit_complex();
        if (std::abs(z.imag()) < 0.01) continue;  // keep off both log cuts
        cplx direct = detail::li2_series(z);
        cplx lm = std::log(-z);
        cplx via_inversion = -pi * pi / 6.0 - 0.5 * lm * lm - li2(1.0 / z);
        worst = std::max(worst, std::abs(direct - via_inversion));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("error paths") {
    double nan = std::numeric_limits<double>::quiet_NaN();
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)li2({nan, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)bloch_wigner({0.0, inf}), std::invalid_argument);
    CHECK_THROWS_AS((void)five_term_residual_d({0.0, 0.0}, {2.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)five_term_residual_d({1.0, 0.0}, {2.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)five_term_residual_d({2.0, 1.0}, {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("accuracy far from the unit circle") {
    cplx big{1.0e6, 1.0e6};
    CHECK(std::abs(bloch_wigner(big) + bloch_wigner(1.0 / big)) < 1e-12);
    cplx small{1.0e-7, 3.0e-7};
    CHECK(std::abs(bloch_wigner(small) + bloch_wigner(1.0 / small)) < 1e-11);
}
