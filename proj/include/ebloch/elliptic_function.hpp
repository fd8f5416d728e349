// SPDX-License-Identifier: Apache-2.0
//
// The function field of E in computable form. A function is its divisor plus
// a scalar: multisets of zero and pole lifts with exactly equal complex sums,
// realized as the theta-quotient
//
//   f(z) = scale * prod theta1(z - a_i) / prod theta1(z - c_j).
//
// Equal lift sums make the quasi-periodicity factors cancel identically, so
// f is honestly elliptic; every constructor repairs the last pole lift by the
// lattice vector separating the sums and rejects non-lattice mismatches.
// All algebra (mul/div/translate) is divisor surgery followed by scale
// re-normalization at a deterministically drawn probe point.

#ifndef EBLOCH_ELLIPTIC_FUNCTION_HPP
#define EBLOCH_ELLIPTIC_FUNCTION_HPP

#include <algorithm>
#include <memory>
#include <vector>

#include "ebloch/theta.hpp"

namespace ebloch {

/// Deterministic low-discrepancy probe points, rejected near listed support
/// lifts. Prefers a comfortably clear point, falls back to the 10*eps floor.
inline cplx pick_probe(const lattice& L, const std::vector<cplx>& avoid, unsigned salt = 0) {
    auto candidate = [&](int k) {
        double u = std::fmod(0.318309886183790 + 0.754877666246693 * (k + 1) + 0.618033988749895 * salt, 1.0);
        double v = std::fmod(0.367879441171442 + 0.569840290998053 * (k + 1) + 0.414213562373095 * salt, 1.0);
        return L.from_coords(u, v);
    };
    auto clearance = [&](const cplx& p) {
        double d = 1e300;
        for (const auto& a : avoid) d = std::min(d, torus_dist(p, a, L));
        return d;
    };
    for (int k = 0; k < 64; ++k) {
        cplx p = candidate(k);
        if (clearance(p) >= 0.05) return p;
    }
    double floor_dist = 10.0 * tol().eps;
    for (int k = 0; k < 4096; ++k) {
        cplx p = candidate(k);
        if (clearance(p) >= floor_dist) return p;
    }
    throw numerical_error("pick_probe: no probe point clear of the divisor support");
}

class elliptic_function {
  public:
    /// The constant function c (c != 0).
    static elliptic_function constant(cplx c, std::shared_ptr<const theta_context> ctx) {
        if (c == cplx(0.0, 0.0)) throw std::invalid_argument("elliptic_function: zero constant");
        require_finite(c, "elliptic_function");
        elliptic_function f;
        f.ctx_ = std::move(ctx);
        f.scale_ = c;
        return f;
    }

    /// Normalization request: fixed scale, or a (probe, value) condition.
    struct norm_scale {
        cplx scale;
    };
    struct norm_probe {
        cplx at;
        cplx value;
    };

    static elliptic_function from_divisor(std::vector<cplx> zeros, std::vector<cplx> poles,
                                          norm_scale n, std::shared_ptr<const theta_context> ctx) {
        elliptic_function f = build(std::move(zeros), std::move(poles), std::move(ctx));
        if (n.scale == cplx(0.0, 0.0)) throw std::invalid_argument("from_divisor: zero scale");
        f.scale_ = n.scale;
        return f;
    }

    static elliptic_function from_divisor(std::vector<cplx> zeros, std::vector<cplx> poles,
                                          norm_probe n, std::shared_ptr<const theta_context> ctx) {
        elliptic_function f = build(std::move(zeros), std::move(poles), std::move(ctx));
        double clearance = 1e300;
        for (const auto& s : f.supports()) clearance = std::min(clearance, torus_dist(n.at, s, f.lat()));
        if (clearance < 10.0 * tol().eps)
            throw std::invalid_argument("from_divisor: probe point on the divisor support");
        if (n.value == cplx(0.0, 0.0) || !is_finite(n.value))
            throw std::invalid_argument("from_divisor: probe value must be finite nonzero");
        f.scale_ = n.value / f.bare(n.at);
        return f;
    }

    int degree() const { return int(zeros_.size()); }
    bool is_constant() const { return zeros_.empty(); }
    cplx scale() const { return scale_; }
    const std::vector<cplx>& zero_lifts() const { return zeros_; }
    const std::vector<cplx>& pole_lifts() const { return poles_; }
    const lattice& lat() const { return ctx_->lat(); }
    const theta_context& ctx() const { return *ctx_; }
    std::shared_ptr<const theta_context> ctx_ptr() const { return ctx_; }

    std::vector<cplx> supports() const {
        std::vector<cplx> s = zeros_;
        s.insert(s.end(), poles_.begin(), poles_.end());
        return s;
    }

    divisor zero_divisor() const { return to_divisor(zeros_, +1); }
    divisor pole_divisor() const { return to_divisor(poles_, +1); }

    /// Full divisor (f): zeros with +, poles with -.
    divisor full_divisor() const {
        divisor d = to_divisor(zeros_, +1);
        for (const auto& p : poles_) d.add(torus_point(p, lat()), -1);
        d.sort();
        return d;
    }

    divisor to_divisor(const std::vector<cplx>& lifts, int sign) const {
        divisor d;
        for (const auto& z : lifts) d.add(torus_point(z, lat()), sign);
        d.sort();
        return d;
    }

    /// Distance from z to the nearest pole (mod lattice); +inf for constants.
    double pole_distance(const cplx& z) const {
        double d = 1e300;
        for (const auto& p : poles_) d = std::min(d, torus_dist(z, p, lat()));
        return d;
    }

    /// f(z) as a point of P^1; inf when z is within eps of a pole.
    proj_value operator()(const cplx& z) const {
        require_finite(z, "evaluate");
        if (is_constant()) return proj_value(scale_);
        cplx zr = torus_point(z, lat()).reduced();
        if (pole_distance(zr) < tol().eps) return proj_value::infinity();
        return proj_value(scale_ * bare(zr));
    }

    /// Plain theta-quotient value without the pole cutoff.
    cplx raw_value(const cplx& z) const {
        if (is_constant()) return scale_;
        return scale_ * bare(torus_point(z, lat()).reduced());
    }

    /// f'(z)/f(z), the analytic logarithmic derivative of the theta quotient.
    cplx log_deriv(const cplx& z) const {
        cplx zr = torus_point(z, lat()).reduced();
        cplx s{0.0, 0.0};
        for (const auto& a : zeros_) s += theta1_dlog(zr - a, *ctx_);
        for (const auto& c : poles_) s -= theta1_dlog(zr - c, *ctx_);
        return s;
    }

    friend elliptic_function mul(const elliptic_function& f, const elliptic_function& g);
    friend elliptic_function div(const elliptic_function& f, const elliptic_function& g);
    friend elliptic_function translate(const elliptic_function& f, const torus_point& rho);

  private:
    elliptic_function() = default;

    /// Validates counts, repairs the last pole so that the lift sums agree
    /// exactly, leaves the scale for the caller.
    static elliptic_function build(std::vector<cplx> zeros, std::vector<cplx> poles,
                                   std::shared_ptr<const theta_context> ctx);

    /// prod theta(z - a) / prod theta(z - c), via accumulated logs.
    cplx bare(const cplx& z) const {
        cplx acc{0.0, 0.0};
        for (const auto& a : zeros_) acc += theta1_log(z - a, *ctx_);
        for (const auto& c : poles_) acc -= theta1_log(z - c, *ctx_);
        return std::exp(acc);
    }

    std::vector<cplx> zeros_, poles_;
    cplx scale_{1.0, 0.0};
    std::shared_ptr<const theta_context> ctx_;
};

inline elliptic_function elliptic_function::build(std::vector<cplx> zeros, std::vector<cplx> poles,
                                                  std::shared_ptr<const theta_context> ctx) {
    if (!ctx) throw std::invalid_argument("from_divisor: missing theta context");
    if (zeros.size() != poles.size())
        throw std::invalid_argument("from_divisor: zero and pole counts differ");
    for (const auto& z : zeros) require_finite(z, "from_divisor");
    for (const auto& p : poles) require_finite(p, "from_divisor");
    elliptic_function f;
    f.ctx_ = std::move(ctx);
    if (zeros.empty()) return f;
    const lattice& L = f.ctx_->lat();
    cplx sz{0.0, 0.0}, sp{0.0, 0.0};
    for (const auto& z : zeros) sz += z;
    for (const auto& p : poles) sp += p;
    cplx d = sz - sp;
    cplx lv = nearest_lattice_vector(d, L);
    if (std::abs(d - lv) > tol().eps)
        throw numerical_error("from_divisor: divisor sums differ by a non-lattice vector");
    poles.back() += d;
    // Reject zero == pole after the repair; such pairs must be cancelled by
    // the caller (mul/div do), a raw constructor call with them is an error.
    for (const auto& z : zeros)
        for (const auto& p : poles)
            if (torus_dist(z, p, L) < tol().eps)
                throw std::invalid_argument("from_divisor: a zero coincides with a pole");
    f.zeros_ = std::move(zeros);
    f.poles_ = std::move(poles);
    return f;
}

inline proj_value evaluate(const elliptic_function& f, const cplx& z) { return f(z); }
inline int degree(const elliptic_function& f) { return f.degree(); }

inline elliptic_function scalar_mul(const cplx& c, const elliptic_function& f) {
    if (c == cplx(0.0, 0.0)) throw std::invalid_argument("scalar_mul: zero scalar");
    require_finite(c, "scalar_mul");
    if (f.is_constant()) return elliptic_function::constant(c * f.scale(), f.ctx_ptr());
    return elliptic_function::from_divisor(f.zero_lifts(), f.pole_lifts(),
                                           elliptic_function::norm_scale{c * f.scale()}, f.ctx_ptr());
}

/// 1/f: zeros and poles swap, the scale inverts. Exact.
inline elliptic_function reciprocal(const elliptic_function& f) {
    if (f.is_constant()) return elliptic_function::constant(1.0 / f.scale(), f.ctx_ptr());
    return elliptic_function::from_divisor(f.pole_lifts(), f.zero_lifts(),
                                           elliptic_function::norm_scale{1.0 / f.scale()}, f.ctx_ptr());
}

inline elliptic_function mul(const elliptic_function& f, const elliptic_function& g) {
    if (!(f.lat() == g.lat())) throw std::invalid_argument("mul: lattice mismatch");
    const lattice& L = f.lat();
    std::vector<cplx> zeros = f.zeros_, poles = f.poles_;
    zeros.insert(zeros.end(), g.zeros_.begin(), g.zeros_.end());
    poles.insert(poles.end(), g.poles_.begin(), g.poles_.end());
    // Cancel matching zero/pole pairs (mod lattice, within eps).
    for (std::size_t i = 0; i < zeros.size();) {
        bool cancelled = false;
        for (std::size_t j = 0; j < poles.size(); ++j) {
            if (torus_dist(zeros[i], poles[j], L) < tol().eps) {
                zeros.erase(zeros.begin() + std::ptrdiff_t(i));
                poles.erase(poles.begin() + std::ptrdiff_t(j));
                cancelled = true;
                break;
            }
        }
        if (!cancelled) ++i;
    }
    // Probe away from every original support; its target value fixes the scale.
    std::vector<cplx> avoid = f.supports();
    auto gs = g.supports();
    avoid.insert(avoid.end(), gs.begin(), gs.end());
    cplx probe = pick_probe(L, avoid);
    cplx target = f(probe).value() * g(probe).value();
    if (zeros.empty()) return elliptic_function::constant(target, f.ctx_ptr());
    return elliptic_function::from_divisor(std::move(zeros), std::move(poles),
                                           elliptic_function::norm_probe{probe, target}, f.ctx_ptr());
}

inline elliptic_function div(const elliptic_function& f, const elliptic_function& g) {
    return mul(f, reciprocal(g));
}

/// translate(f, rho)(z) = f(z + rho); every divisor lift shifts by -rho.
inline elliptic_function translate(const elliptic_function& f, const torus_point& rho) {
    if (f.is_constant()) return f;
    const lattice& L = f.lat();
    std::vector<cplx> zeros = f.zeros_, poles = f.poles_;
    for (auto& z : zeros) z -= rho.lift();
    for (auto& p : poles) p -= rho.lift();
    std::vector<cplx> avoid = zeros;
    avoid.insert(avoid.end(), poles.begin(), poles.end());
    cplx probe = pick_probe(L, avoid);
    proj_value tv = f(probe + rho.lift());
    if (tv.is_inf() || tv.value() == cplx(0.0, 0.0))
        throw numerical_error("translate: probe landed on the shifted support");
    return elliptic_function::from_divisor(std::move(zeros), std::move(poles),
                                           elliptic_function::norm_probe{probe, tv.value()},
                                           f.ctx_ptr());
}

/// n random zeros, n-1 random poles, last pole forced by the Abel condition,
/// value of unit modulus and random phase at a probe point. (A literal
/// unit-modulus scale would leave the function's typical magnitude at the
/// mercy of the balancing lift, exponentially skewing every fiber; the probe
/// normalization puts the unit circle where the values are.) Deterministic
/// per seed; redraws on near-collisions.
inline elliptic_function random_function(int n, std::uint64_t seed,
                                         std::shared_ptr<const theta_context> ctx) {
    if (n < 2) throw std::invalid_argument("random_function: degree must be >= 2");
    const lattice& L = ctx->lat();
    rng gen(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<cplx> zeros, poles;
        for (int i = 0; i < n; ++i) zeros.push_back(L.from_coords(gen.next_double(), gen.next_double()));
        cplx sz{0.0, 0.0};
        for (const auto& z : zeros) sz += z;
        cplx sp{0.0, 0.0};
        for (int i = 0; i + 1 < n; ++i) {
            cplx p = L.from_coords(gen.next_double(), gen.next_double());
            poles.push_back(p);
            sp += p;
        }
        poles.push_back(sz - sp);
        std::vector<cplx> all = zeros;
        all.insert(all.end(), poles.begin(), poles.end());
        bool collision = false;
        for (std::size_t i = 0; i < all.size() && !collision; ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                if (torus_dist(all[i], all[j], L) < 1e-2) {
                    collision = true;
                    break;
                }
        if (collision) continue;
        cplx probe = pick_probe(L, all);
        return elliptic_function::from_divisor(std::move(zeros), std::move(poles),
                                               elliptic_function::norm_probe{probe, gen.unit_complex()},
                                               ctx);
    }
    throw numerical_error("random_function: could not draw a collision-free divisor");
}

/// THE function-equality predicate: same degree, matching divisors as
/// multisets mod the lattice, and agreeing values at one probe point.
inline bool functions_equal(const elliptic_function& f, const elliptic_function& g,
                            double rtol = 1e-8) {
    if (!(f.lat() == g.lat())) return false;
    if (f.degree() != g.degree()) return false;
    if (f.is_constant() && g.is_constant())
        return std::abs(f.scale() - g.scale()) <=
               rtol * std::max(1.0, std::max(std::abs(f.scale()), std::abs(g.scale())));
    if (!divisors_match(f.zero_divisor(), g.zero_divisor(), tol().eps)) return false;
    if (!divisors_match(f.pole_divisor(), g.pole_divisor(), tol().eps)) return false;
    std::vector<cplx> avoid = f.supports();
    auto gs = g.supports();
    avoid.insert(avoid.end(), gs.begin(), gs.end());
    cplx probe = pick_probe(f.lat(), avoid);
    cplx fv = f(probe).value(), gv = g(probe).value();
    return std::abs(fv - gv) <= rtol * std::max(1.0, std::max(std::abs(fv), std::abs(gv)));
}

}  // namespace ebloch

#endif
