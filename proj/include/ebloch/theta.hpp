// SPDX-License-Identifier: Apache-2.0
//
// q-series machinery on a fixed lattice: the odd Jacobi theta function
//
//   theta1(z) = 2 sum_{k>=0} (-1)^k hq^{(k+1/2)^2} sin((2k+1) pi z),
//   hq = exp(i pi tau),
//
// in the convention with simple zeros exactly on <1, tau> and
// theta1(z+1) = -theta1(z), theta1(z+tau) = -exp(-i pi tau - 2 pi i z) theta1(z),
// plus the Weierstrass p-function normalized by p(z) = z^-2 + o(z).
// Arguments are reduced to the centered cell before summing; the removed
// lattice vector re-enters through the quasi-periodicity factor (kept in log
// form where overflow matters).

#ifndef EBLOCH_THETA_HPP
#define EBLOCH_THETA_HPP

#include <vector>

#include "ebloch/divisor.hpp"
#include "ebloch/torus.hpp"

namespace ebloch {

class theta_context {
  public:
    explicit theta_context(const lattice& L) : lat_(L) {
        double aq = std::exp(-pi * L.tau().imag());  // |hq|
        int n = 1;
        while (std::pow(aq, (n + 0.5) * (n + 0.5)) >= 1e-18 && n < 64) ++n;
        trunc_ = n;
        int terms = n + 4;  // margin for the sin growth inside the cell
        coeff_.reserve(std::size_t(terms));
        for (int k = 0; k < terms; ++k) {
            cplx a = std::exp(cplx(0.0, pi) * L.tau() * double(2 * k + 1) * double(2 * k + 1) / 4.0);
            if (k % 2 == 1) a = -a;
            coeff_.push_back(a);
        }
        // theta1'(0) = 2 pi sum a_k (2k+1), theta1'''(0) = -2 pi^3 sum a_k (2k+1)^3
        cplx d1{0.0, 0.0}, d3{0.0, 0.0};
        for (int k = 0; k < terms; ++k) {
            double m = 2.0 * k + 1.0;
            d1 += coeff_[std::size_t(k)] * m;
            d3 += coeff_[std::size_t(k)] * m * m * m;
        }
        dtheta0_ = 2.0 * pi * d1;
        wp_const_ = (-2.0 * pi * pi * pi * d3) / (3.0 * dtheta0_);
    }

    const lattice& lat() const { return lat_; }
    int truncation() const { return trunc_; }
    cplx dtheta0() const { return dtheta0_; }

    /// Raw series value at an unreduced argument (no quasi-periodicity
    /// compensation); accurate only near the fundamental cell.
    cplx series(const cplx& w) const {
        cplx s{0.0, 0.0};
        for (std::size_t k = 0; k < coeff_.size(); ++k)
            s += coeff_[k] * std::sin(pi * double(2 * k + 1) * w);
        return 2.0 * s;
    }

    cplx series_d1(const cplx& w) const {
        cplx s{0.0, 0.0};
        for (std::size_t k = 0; k < coeff_.size(); ++k) {
            double m = 2.0 * k + 1.0;
            s += coeff_[k] * m * std::cos(pi * m * w);
        }
        return 2.0 * pi * s;
    }

    cplx series_d2(const cplx& w) const {
        cplx s{0.0, 0.0};
        for (std::size_t k = 0; k < coeff_.size(); ++k) {
            double m = 2.0 * k + 1.0;
            s += coeff_[k] * m * m * std::sin(pi * m * w);
        }
        return -2.0 * pi * pi * s;
    }

    /// Lattice reduction of z to the centered cell: z = w + m + n*tau.
    struct reduced_arg {
        cplx w;
        double m, n;
    };
    reduced_arg reduce(const cplx& z) const {
        auto [u, v] = lat_.coords_of(z);
        double n = std::floor(v + 0.5), m = std::floor(u + 0.5);
        return {z - lat_.from_coords(m, n), m, n};
    }

    cplx wp_const() const { return wp_const_; }

  private:
    lattice lat_;
    int trunc_ = 1;
    std::vector<cplx> coeff_;
    cplx dtheta0_{0.0, 0.0};
    cplx wp_const_{0.0, 0.0};
};

/// theta1(z) with full quasi-periodicity compensation. The compensation is
/// exponentially large |n|^2 cells away from the real axis; use theta1_log
/// when that matters.
inline cplx theta1(const cplx& z, const theta_context& ctx) {
    require_finite(z, "theta1");
    auto r = ctx.reduce(z);
    cplx base = ctx.series(r.w);
    double sgn = (std::llround(r.m + r.n) % 2 == 0) ? 1.0 : -1.0;
    cplx expo = std::exp(cplx(0.0, -pi) * (r.n * r.n) * ctx.lat().tau() +
                         cplx(0.0, -2.0 * pi) * r.n * r.w);
    return sgn * expo * base;
}

/// log theta1(z) up to an irrelevant multiple of 2 pi i (consumers only ever
/// exponentiate sums of these, or difference them for ratios).
inline cplx theta1_log(const cplx& z, const theta_context& ctx) {
    auto r = ctx.reduce(z);
    cplx base = ctx.series(r.w);
    cplx lg = std::log(base);
    return lg + cplx(0.0, pi) * (r.m + r.n) + cplx(0.0, -pi) * (r.n * r.n) * ctx.lat().tau() +
           cplx(0.0, -2.0 * pi) * r.n * r.w;
}

/// theta1'(z)/theta1(z); elliptic up to the additive -2 pi i n from the
/// quasi-periodicity factor.
inline cplx theta1_dlog(const cplx& z, const theta_context& ctx) {
    auto r = ctx.reduce(z);
    return ctx.series_d1(r.w) / ctx.series(r.w) + cplx(0.0, -2.0 * pi) * r.n;
}

/// (log theta1)''(z); genuinely elliptic, computed on the reduced argument.
inline cplx theta1_d2log(const cplx& z, const theta_context& ctx) {
    auto r = ctx.reduce(z);
    cplx t = ctx.series(r.w);
    cplx d1 = ctx.series_d1(r.w);
    cplx d2 = ctx.series_d2(r.w);
    return d2 / t - (d1 / t) * (d1 / t);
}

/// Weierstrass p-function for <1, tau> with p(z) = z^-2 + o(z).
inline cplx wp(const cplx& z, const theta_context& ctx) {
    require_finite(z, "wp");
    if (lattice_dist(z, ctx.lat()) < 1e-6)
        throw pole_proximity_error("wp: argument within 1e-6 of a lattice point");
    return -theta1_d2log(z, ctx) + ctx.wp_const();
}

/// Divisor of p(z - alpha) - p(z - beta): zeros at the four halvings of
/// alpha + beta, double poles at alpha and beta.
inline divisor wp_diff_divisor(const torus_point& alpha, const torus_point& beta) {
    if (points_equal(alpha, beta))
        throw std::invalid_argument("wp_diff_divisor: alpha and beta must differ on E");
    divisor d;
    for (const auto& x : halvings(alpha + beta)) d.add(x, +1);
    d.add(alpha, -2);
    d.add(beta, -2);
    d.sort();
    return d;
}

}  // namespace ebloch

#endif
