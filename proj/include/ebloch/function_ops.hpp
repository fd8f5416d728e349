// SPDX-License-Identifier: Apache-2.0
//
// Operations on elliptic functions that need the root finder: 1 - f with a
// certified divisor, and 1 - 1/f assembled from known pieces.

#ifndef EBLOCH_FUNCTION_OPS_HPP
#define EBLOCH_FUNCTION_OPS_HPP

#include "ebloch/rootfind.hpp"

namespace ebloch {

/// 1 - f in divisor form. Poles are shared with f, zeros are the solutions
/// of f(z) = 1 (count certified against deg f by solve_fiber), the scale is
/// fixed by matching 1 - f at a probe.
inline elliptic_function one_minus(const elliptic_function& f) {
    if (f.is_constant()) {
        if (std::abs(f.scale() - 1.0) < 1e-14)
            throw std::invalid_argument("one_minus: constant 1");
        return elliptic_function::constant(1.0 - f.scale(), f.ctx_ptr());
    }
    divisor ones = solve_fiber(f, proj_value(cplx(1.0, 0.0)));
    std::vector<cplx> zeros;
    for (const auto& p : ones.expand_positive()) zeros.push_back(p.lift());
    std::vector<cplx> poles = f.pole_lifts();
    std::vector<cplx> avoid = f.supports();
    avoid.insert(avoid.end(), zeros.begin(), zeros.end());
    cplx probe = pick_probe(f.lat(), avoid);
    cplx target = 1.0 - f(probe).value();
    return elliptic_function::from_divisor(std::move(zeros), std::move(poles),
                                           elliptic_function::norm_probe{probe, target},
                                           f.ctx_ptr());
}

/// 1 - 1/f = -(1 - f)/f. Reuses a precomputed 1 - f when the caller has one;
/// no rootfinding beyond that.
inline elliptic_function one_minus_reciprocal(const elliptic_function& f,
                                              const elliptic_function* om_precomputed = nullptr) {
    if (f.is_constant()) {
        cplx c = f.scale();
        if (std::abs(c - 1.0) < 1e-14) throw std::invalid_argument("one_minus_reciprocal: constant 1");
        return elliptic_function::constant(1.0 - 1.0 / c, f.ctx_ptr());
    }
    elliptic_function om = om_precomputed ? *om_precomputed : one_minus(f);
    return scalar_mul(cplx(-1.0, 0.0), div(om, f));
}

}  // namespace ebloch

#endif
