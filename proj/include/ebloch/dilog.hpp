// SPDX-License-Identifier: Apache-2.0
//
// Complex dilogarithm Li2 (principal branch) and the Bloch-Wigner function
//
//     D(z) = Im Li2(z) + arg(1-z) log|z|,
//
// the single-valued real-analytic companion of Li2 on C \ {0,1}. D vanishes
// identically on the real axis and satisfies D(z) = -D(1/z) = -D(conj z) as
// well as the Abel five-term relation; those identities back most of the
// self-checks in this library.

#ifndef EBLOCH_DILOG_HPP
#define EBLOCH_DILOG_HPP

#include <array>
#include <cmath>
#include <complex>

#include "ebloch/core.hpp"

namespace ebloch {

namespace detail {

// Li2 by the defining power series; callers guarantee |z| <= ~0.55 so the
// tail decays geometrically. Truncation when the term drops below 1e-17.
inline cplx li2_series(const cplx& z) {
    cplx term = z;
    cplx sum = z;
    for (int k = 2; k < 400; ++k) {
        term *= z;
        cplx add = term / double(k * k);
        sum += add;
        if (std::abs(add) < 1e-17) break;
    }
    return sum;
}

// Even Bernoulli numbers B_2..B_36 as exact rationals. The recurrence is
// numerically unstable past n ~ 16, so these stay literal; the unit tests
// cross-check each one against a zeta(2k) summation oracle.
inline double bernoulli_even(int k) {
    static const std::array<double, 18> b = {
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
        854513.0 / 138.0,
        -236364091.0 / 2730.0,
        8553103.0 / 6.0,
        -23749461029.0 / 870.0,
        8615841276005.0 / 14322.0,
        -7709321041217.0 / 510.0,
        2577687858367.0 / 6.0,
        -26315271553053477373.0 / 1919190.0,
    };
    return b[std::size_t(k - 1)];
}

// Li2 as a series in u = -log(1-z):
//
//   Li2(z) = sum_{n>=0} B_n u^{n+1} / (n+1)!
//
// with B_n the Bernoulli numbers (B_1 = -1/2). Converges for |u| < 2pi;
// callers keep |u| <= ~1.95 (Re z <= 1 inside the middle annulus), where
// 18 even-order terms reach 1e-17.
inline cplx li2_log_series(const cplx& z) {
    static const std::array<double, 19> coeff = [] {
        std::array<double, 19> c{};
        c[0] = 1.0;  // B_0 / 1!
        double fact = 1.0;
        for (int k = 1; k <= 18; ++k) {
            // (2k+1)! / (2k-1)! accumulated stepwise
            fact *= double(2 * k) * double(2 * k + 1);
            c[std::size_t(k)] = bernoulli_even(k) / fact;
        }
        return c;
    }();
    cplx u = -std::log(1.0 - z);
    cplx u2 = u * u;
    cplx sum = u + (-0.25) * u2;  // B_0 u / 1! + B_1 u^2 / 2!, B_1 = -1/2
    cplx upow = u;
    for (int k = 1; k <= 18; ++k) {
        upow *= u2;
        cplx add = coeff[std::size_t(k)] * upow;
        sum += add;
        if (std::abs(add) < 1e-18) break;
    }
    return sum;
}

}  // namespace detail

/// Principal-branch dilogarithm. Region dispatch: defining series on
/// |z| <= 1/2, reflection across 1-z on |1-z| <= 1/2, inversion for |z| > 2,
/// log-argument series on the left middle annulus (Re z <= 1, where the
/// series argument stays well inside its disk of convergence), one more
/// reflection on the right half of the annulus.
inline cplx li2(const cplx& z) {
    require_finite(z, "li2");
    const double pi2_6 = pi * pi / 6.0;
    if (z == cplx(0.0, 0.0)) return {0.0, 0.0};
    if (z == cplx(1.0, 0.0)) return {pi2_6, 0.0};
    double az = std::abs(z);
    if (az <= 0.5) return detail::li2_series(z);
    if (std::abs(1.0 - z) <= 0.5) {
        // Li2(z) + Li2(1-z) = pi^2/6 - log(z) log(1-z)
        return pi2_6 - std::log(z) * std::log(1.0 - z) - detail::li2_series(1.0 - z);
    }
    if (az > 2.0) {
        // Li2(z) + Li2(1/z) = -pi^2/6 - log(-z)^2 / 2
        cplx lm = std::log(-z);
        return -pi2_6 - 0.5 * lm * lm - li2(1.0 / z);
    }
    if (z.real() <= 1.0) return detail::li2_log_series(z);
    // Re z > 1: reflect; 1-z lands in Re <= 0, handled by the cases above.
    return pi2_6 - std::log(z) * std::log(1.0 - z) - li2(1.0 - z);
}

/// Bloch-Wigner function D(z). Exactly 0 for real z (including z = 0, 1).
inline double bloch_wigner(const cplx& z) {
    require_finite(z, "bloch_wigner");
    if (z.imag() == 0.0) return 0.0;
    double correction = std::arg(1.0 - z) * std::log(std::abs(z));
    return li2(z).imag() + correction;
}

/// |D(x) - D(y) + D(y/x) + D((1-x)/(1-y)) - D((1-x^-1)/(1-y^-1))|.
/// Identically zero in exact arithmetic; the returned residual is a direct
/// probe of evaluation accuracy.
inline double five_term_residual_d(const cplx& x, const cplx& y) {
    require_finite(x, "five_term_residual_d");
    require_finite(y, "five_term_residual_d");
    auto forbidden = [](const cplx& z) { return z == cplx(0.0, 0.0) || z == cplx(1.0, 0.0); };
    if (forbidden(x) || forbidden(y) || x == y)
        throw std::invalid_argument("five_term_residual_d: arguments must avoid {0,1} and differ");
    double s = bloch_wigner(x) - bloch_wigner(y) + bloch_wigner(y / x) +
               bloch_wigner((1.0 - x) / (1.0 - y)) -
               bloch_wigner((1.0 - 1.0 / x) / (1.0 - 1.0 / y));
    return std::abs(s);
}

}  // namespace ebloch

#endif
