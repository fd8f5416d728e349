// SPDX-License-Identifier: Apache-2.0
//
// The formal layer: Z[E]^- (points of E modulo [xi] + [-xi], two-torsion
// classes carrying Z/2 coefficients), the pairing
//
//   beta(f ^ g) = sum n_i m_j [x_i - y_j]
//
// over divisor entries, its composition with delta([f]) = f ^ (1 - f), the
// elliptic dilogarithm D_tau as a function on E and on Z[E]^-, the literal
// zero-sum relation for function divisors, and Abel five-term sums in
// Z[K \ {0,1}].

#ifndef EBLOCH_BLOCH_HPP
#define EBLOCH_BLOCH_HPP

#include <vector>

#include "ebloch/dilog.hpp"
#include "ebloch/function_ops.hpp"

namespace ebloch {

/// Element of Z[E]^- in canonical form. Matching is eps-aware against both a
/// point and its negative, so numerically recomputed points cancel exactly.
class ze_minus_sum {
  public:
    struct term {
        torus_point point;
        int coeff;
        bool torsion;
    };

    explicit ze_minus_sum(const lattice& L) : lat_(L) {}

    const lattice& lat() const { return lat_; }
    const std::vector<term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const torus_point& p, int k) {
        if (k == 0) return;
        for (auto it = terms_.begin(); it != terms_.end(); ++it) {
            if (points_equal(it->point, p)) {
                it->coeff += k;
                reduce_and_prune(it);
                return;
            }
            if (!it->torsion && points_equal(it->point, -p)) {
                it->coeff -= k;
                reduce_and_prune(it);
                return;
            }
        }
        term t;
        if (is_two_torsion(p, tol().eps)) {
            int c = ((k % 2) + 2) % 2;
            if (c == 0) return;
            t = {p, c, true};
        } else {
            auto [rep, sign] = neg_canonical(p);
            t = {rep, sign * k, false};
        }
        terms_.push_back(t);
    }

    void accumulate(const ze_minus_sum& other, int sign) {
        for (const auto& t : other.terms_) add(t.point, sign * t.coeff);
    }

    /// D~_tau of the sum (declared below, needs edilog).
    double dilog_value() const;

  private:
    void reduce_and_prune(std::vector<term>::iterator it) {
        if (it->torsion) it->coeff = ((it->coeff % 2) + 2) % 2;
        if (it->coeff == 0) terms_.erase(it);
    }

    lattice lat_;
    std::vector<term> terms_;
};

inline bool ze_minus_equal(const ze_minus_sum& a, const ze_minus_sum& b) {
    ze_minus_sum d = a;
    d.accumulate(b, -1);
    return d.is_zero();
}

/// D_tau(xi) = sum_n D(exp(2 pi i xi) q^n), folded through D(z) = -D(1/z)
/// into D(x) + sum_{n>=1} [D(x q^n) - D(x^-1 q^n)].
inline double edilog(const torus_point& xi) {
    const lattice& L = xi.lat();
    cplx q = L.nome();
    double aq = std::abs(q);
    cplx x = std::exp(cplx(0.0, 2.0 * pi) * xi.reduced());
    double total = bloch_wigner(x);
    cplx xi_inv = 1.0 / x;
    cplx qn{1.0, 0.0};
    for (int n = 1; n < 512; ++n) {
        qn *= q;
        total += bloch_wigner(x * qn) - bloch_wigner(xi_inv * qn);
        if (std::pow(aq, n - 1) * (1.0 + 2.0 * pi * n * L.tau().imag()) < 1e-15) break;
    }
    return total;
}

inline double edilog_sum(const ze_minus_sum& s) {
    double total = 0.0;
    for (const auto& t : s.terms()) total += double(t.coeff) * edilog(t.point);
    return total;
}

inline double ze_minus_sum::dilog_value() const { return edilog_sum(*this); }

struct wedge_pair {
    elliptic_function left;
    elliptic_function right;
};

/// beta(f ^ g): the double sum of divisor-point differences in Z[E]^-.
inline ze_minus_sum beta(const wedge_pair& w) {
    if (!(w.left.lat() == w.right.lat())) throw std::invalid_argument("beta: lattice mismatch");
    ze_minus_sum out(w.left.lat());
    divisor dl = w.left.full_divisor(), dr = w.right.full_divisor();
    for (const auto& a : dl.entries())
        for (const auto& b : dr.entries()) out.add(a.point - b.point, a.mult * b.mult);
    return out;
}

/// beta(f ^ (1-f)); zero for constants. Pass a precomputed 1 - f to skip the
/// fiber solve.
inline ze_minus_sum delta_beta(const elliptic_function& f,
                               const elliptic_function* om_precomputed = nullptr) {
    if (f.is_constant()) return ze_minus_sum(f.lat());
    elliptic_function om = om_precomputed ? *om_precomputed : one_minus(f);
    return beta(wedge_pair{f, om});
}

/// Signed list of elliptic functions: an element of Z[K \ {0,1}]. Terms are
/// collected under functions_equal; constants other than 0, 1 are allowed.
class function_sum {
  public:
    struct term {
        int coeff;
        elliptic_function fn;
    };

    void add(const elliptic_function& f, int coeff) {
        if (coeff == 0) return;
        if (f.is_constant() && std::abs(f.scale() - 1.0) < 1e-12)
            throw std::invalid_argument("function_sum: the constant 1 is not a generator");
        for (auto it = terms_.begin(); it != terms_.end(); ++it) {
            if (functions_equal(it->fn, f)) {
                it->coeff += coeff;
                if (it->coeff == 0) terms_.erase(it);
                return;
            }
        }
        terms_.push_back({coeff, f});
    }

    void accumulate(const function_sum& other, int sign) {
        for (const auto& t : other.terms_) add(t.fn, sign * t.coeff);
    }

    const std::vector<term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

  private:
    std::vector<term> terms_;
};

/// delta_beta extended linearly over a function sum.
inline ze_minus_sum delta_beta(const function_sum& s, const lattice& L) {
    ze_minus_sum out(L);
    for (const auto& t : s.terms()) {
        if (t.fn.is_constant()) continue;
        out.accumulate(delta_beta(t.fn), t.coeff);
    }
    return out;
}

/// The five signed terms [x] - [y] + [y/x] + [(1-x)/(1-y)] - [(1-x^-1)/(1-y^-1)]
/// with certified divisors.
inline function_sum five_term_sum(const elliptic_function& x, const elliptic_function& y) {
    auto near_const = [](const elliptic_function& f, double c) {
        return f.is_constant() && std::abs(f.scale() - c) < 1e-12;
    };
    if (near_const(x, 0.0) || near_const(x, 1.0) || near_const(y, 0.0) || near_const(y, 1.0))
        throw std::invalid_argument("five_term_sum: arguments must avoid 0 and 1");
    if (functions_equal(x, y)) throw std::invalid_argument("five_term_sum: x = y");
    elliptic_function om_x = one_minus(x);
    elliptic_function om_y = one_minus(y);
    function_sum out;
    out.add(x, +1);
    out.add(y, -1);
    out.add(div(y, x), +1);
    out.add(div(om_x, om_y), +1);
    out.add(div(one_minus_reciprocal(x, &om_x), one_minus_reciprocal(y, &om_y)), -1);
    return out;
}

/// The literal zero-sum relation for a function divisor: with alpha the zeros
/// of f, beta the zeros of 1 - f and gamma the poles (each expanded with
/// multiplicity to n = deg f points),
///
///   sum_{i,j} D_tau(alpha_i - beta_j) + D_tau(beta_i - gamma_j)
///           + D_tau(gamma_i - alpha_j)
///
/// vanishes. Returns the signed value together with the Z[E]^- shadow.
struct bloch_relation_report {
    double relation_value = 0.0;   // the n^2 triple sum, signed
    double shadow_value = 0.0;     // edilog_sum(delta_beta(f))
    ze_minus_sum shadow;
};

inline bloch_relation_report bloch_relation_check(const elliptic_function& f,
                                                  const elliptic_function* om_precomputed = nullptr) {
    if (f.is_constant()) throw std::invalid_argument("bloch_relation: constant function");
    elliptic_function om = om_precomputed ? *om_precomputed : one_minus(f);
    auto alphas = f.zero_divisor().expand_positive();
    auto betas = om.zero_divisor().expand_positive();
    auto gammas = f.pole_divisor().expand_positive();
    const std::size_t n = alphas.size();
    if (betas.size() != n || gammas.size() != n)
        throw numerical_error("bloch_relation: fiber sizes disagree with the degree");
    double val = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            val += edilog(alphas[i] - betas[j]);
            val += edilog(betas[i] - gammas[j]);
            val += edilog(gammas[i] - alphas[j]);
        }
    bloch_relation_report rep{val, 0.0, delta_beta(f, &om)};
    rep.shadow_value = edilog_sum(rep.shadow);
    if (std::abs(rep.relation_value - rep.shadow_value) > 1e-8)
        throw numerical_error("bloch_relation: triple sum and Z[E]^- shadow disagree");
    return rep;
}

inline double bloch_relation_residual(const elliptic_function& f) {
    return std::abs(bloch_relation_check(f).relation_value);
}

}  // namespace ebloch

#endif
