// SPDX-License-Identifier: Apache-2.0
//
// Shared scalar types, error categories and deterministic sampling helpers
// used across the library.

#ifndef EBLOCH_CORE_HPP
#define EBLOCH_CORE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ebloch {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Raised when a computation fails for numerical reasons (root counts do not
/// close, a divisor is not principal, an iteration budget is exhausted).
/// Distinct from std::invalid_argument, which flags malformed inputs.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an argument sits too close to a pole of the requested function.
class pole_proximity_error : public numerical_error {
  public:
    explicit pole_proximity_error(const std::string& what) : numerical_error(what) {}
};

/// Global tolerance ladder. `eps` governs point matching on the torus and
/// divisor cancellation; `tol_analytic` governs accumulated q-series sums.
struct tolerances {
    double eps = 1e-8;
    double tol_analytic = 1e-6;
};

inline tolerances& tol() {
    static tolerances t;
    return t;
}

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(const cplx& z, const char* who) {
    if (!is_finite(z)) throw std::invalid_argument(std::string(who) + ": non-finite argument");
}

/// A point of the projective line C u {inf}.
struct proj_value {
    cplx v{0.0, 0.0};
    bool inf = false;

    proj_value() = default;
    proj_value(cplx z) : v(z) {}
    proj_value(double x) : v(x, 0.0) {}
    static proj_value infinity() {
        proj_value p;
        p.inf = true;
        return p;
    }
    bool is_inf() const { return inf; }
    cplx value() const { return v; }
};

/// Chordal distance on the Riemann sphere; bounded by 2, treats inf smoothly.
inline double chordal(const proj_value& a, const proj_value& b) {
    if (a.inf && b.inf) return 0.0;
    auto lift = [](const proj_value& p) {
        if (p.inf) return std::pair<double, cplx>{0.0, cplx{1.0, 0.0}};
        double n = std::sqrt(1.0 + std::norm(p.v));
        return std::pair<double, cplx>{1.0 / n, p.v / n};
    };
    auto [wa, za] = lift(a);
    auto [wb, zb] = lift(b);
    return std::abs(za * wb - zb * wa);
}

/// Minimal deterministic generator (splitmix64). Used instead of <random>
/// distributions so that seeded runs are bit-identical across platforms.
class rng {
  public:
    explicit rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    cplx unit_complex() {
        double t = 2.0 * pi * next_double();
        return {std::cos(t), std::sin(t)};
    }

  private:
    std::uint64_t state_;
};

}  // namespace ebloch

#endif
