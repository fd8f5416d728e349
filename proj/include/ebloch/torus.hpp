// SPDX-License-Identifier: Apache-2.0
//
// Arithmetic on the complex torus E = C / <1, tau>. Points carry an exact
// complex lift next to reduced coordinates (u, v) in [0,1)^2 with
// lift == u + v*tau (mod <1,tau>); all divisor bookkeeping downstream relies
// on the lifts, the coordinates serve matching and ordering.

#ifndef EBLOCH_TORUS_HPP
#define EBLOCH_TORUS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <iostream>
#include <utility>

#include "ebloch/core.hpp"

namespace ebloch {

class lattice {
  public:
    explicit lattice(cplx tau) : tau_(tau) {
        require_finite(tau, "lattice");
        if (tau.imag() < 0.2)
            throw std::invalid_argument("lattice: Im tau must be >= 0.2");
        if (tau.imag() < 0.5)
            std::cerr << "ebloch: warning: Im tau = " << tau.imag()
                      << " < 0.5, q-series converge slowly\n";
        nome_ = std::exp(cplx(0.0, 2.0 * pi) * tau);
    }

    cplx tau() const { return tau_; }
    /// q = exp(2 pi i tau), |q| < 1.
    cplx nome() const { return nome_; }

    /// Real coordinates (u, v) with z = u + v*tau, not yet reduced.
    std::pair<double, double> coords_of(const cplx& z) const {
        double v = z.imag() / tau_.imag();
        double u = z.real() - v * tau_.real();
        return {u, v};
    }

    cplx from_coords(double u, double v) const { return cplx(u, 0.0) + cplx(v, 0.0) * tau_; }

    bool operator==(const lattice& o) const { return tau_ == o.tau_; }

  private:
    cplx tau_;
    cplx nome_;
};

namespace detail {
inline double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guard against floor rounding at negative epsilons
    return f;
}
/// Reduce to [-1/2, 1/2).
inline double frac_centered(double x) { return x - std::floor(x + 0.5); }
}  // namespace detail

class torus_point {
  public:
    torus_point() : lat_(cplx(0.0, 1.0)) {}

    torus_point(cplx lift, const lattice& L) : lift_(lift), lat_(L) {
        require_finite(lift, "torus_point");
        auto [u, v] = L.coords_of(lift);
        u_ = detail::frac01(u);
        v_ = detail::frac01(v);
    }

    const cplx& lift() const { return lift_; }
    double u() const { return u_; }
    double v() const { return v_; }
    const lattice& lat() const { return lat_; }

    /// The reduced representative u + v*tau of the class.
    cplx reduced() const { return lat_.from_coords(u_, v_); }

    torus_point operator-() const { return torus_point(-lift_, lat_); }
    torus_point operator+(const torus_point& o) const { return torus_point(lift_ + o.lift_, lat_); }
    torus_point operator-(const torus_point& o) const { return torus_point(lift_ - o.lift_, lat_); }

  private:
    cplx lift_{0.0, 0.0};
    double u_ = 0.0, v_ = 0.0;
    lattice lat_;
};

inline torus_point normalize(const cplx& z, const lattice& L) { return torus_point(z, L); }

/// Distance in the flat metric after reducing the difference to the centered
/// fundamental domain.
inline double torus_dist(const torus_point& p, const torus_point& q) {
    double du = detail::frac_centered(p.u() - q.u());
    double dv = detail::frac_centered(p.v() - q.v());
    return std::abs(p.lat().from_coords(du, dv));
}

inline double torus_dist(const cplx& a, const cplx& b, const lattice& L) {
    return torus_dist(torus_point(a, L), torus_point(b, L));
}

inline bool points_equal(const torus_point& p, const torus_point& q, double eps) {
    return torus_dist(p, q) < eps;
}

inline bool points_equal(const torus_point& p, const torus_point& q) {
    return points_equal(p, q, tol().eps);
}

/// Distance from z to the lattice itself.
inline double lattice_dist(const cplx& z, const lattice& L) {
    return torus_dist(torus_point(z, L), torus_point(cplx(0.0, 0.0), L));
}

/// The nearest lattice vector m + n*tau to z, as a complex number.
inline cplx nearest_lattice_vector(const cplx& z, const lattice& L) {
    auto [u, v] = L.coords_of(z);
    double m = std::floor(u + 0.5), n = std::floor(v + 0.5);
    return L.from_coords(m, n);
}

/// The four solutions x of 2x = p, as lift/2 plus the half-lattice offsets.
inline std::array<torus_point, 4> halvings(const torus_point& p) {
    const lattice& L = p.lat();
    cplx h = p.lift() / 2.0;
    cplx t = L.tau();
    return {torus_point(h, L), torus_point(h + 0.5, L), torus_point(h + t / 2.0, L),
            torus_point(h + (1.0 + t) / 2.0, L)};
}

/// E[2] = {0, 1/2, tau/2, (1+tau)/2}.
inline std::array<torus_point, 4> two_torsion(const lattice& L) {
    return halvings(torus_point(cplx(0.0, 0.0), L));
}

inline bool is_two_torsion(const torus_point& p, double eps) {
    return points_equal(p, -p, eps);
}

/// One deterministic solution of 3*rho = p (the lift divided by 3).
inline torus_point third_point(const torus_point& p) {
    return torus_point(p.lift() / 3.0, p.lat());
}

/// Canonical representative of {p, -p}: the lexicographically smaller of the
/// reduced coordinate pairs, with the sign telling whether p itself was kept.
/// Two-torsion points are their own representative with sign +1.
inline std::pair<torus_point, int> neg_canonical(const torus_point& p) {
    if (is_two_torsion(p, tol().eps)) return {p, +1};
    torus_point q = torus_point(p.reduced(), p.lat());
    torus_point nq = torus_point(-p.reduced(), p.lat());
    if (q.u() < nq.u() || (q.u() == nq.u() && q.v() <= nq.v())) return {p, +1};
    return {-p, -1};
}

}  // namespace ebloch

#endif
