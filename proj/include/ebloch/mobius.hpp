// SPDX-License-Identifier: Apache-2.0
//
// Mobius transformations of P^1 as 2x2 complex matrices, built from three
// point correspondences, plus the cross-ratio. Infinity is a first-class
// value throughout.

#ifndef EBLOCH_MOBIUS_HPP
#define EBLOCH_MOBIUS_HPP

#include "ebloch/core.hpp"

namespace ebloch {

struct mobius {
    // w -> (a w + b) / (c w + d)
    cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    proj_value operator()(const proj_value& w) const {
        if (w.is_inf()) {
            if (c == cplx(0.0, 0.0)) return proj_value::infinity();
            return proj_value(a / c);
        }
        cplx num = a * w.value() + b;
        cplx den = c * w.value() + d;
        double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}) *
                       std::max(1.0, std::abs(w.value()));
        if (std::abs(den) <= 1e-14 * scale) return proj_value::infinity();
        return proj_value(num / den);
    }

    mobius inverse() const { return mobius{d, -b, -c, a}; }

    mobius compose(const mobius& o) const {  // (*this) after o
        return mobius{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

namespace detail {

// Matrix sending (w1, w2, w3) to (0, 1, inf).
inline mobius to_standard_triple(const proj_value& w1, const proj_value& w2, const proj_value& w3) {
    if (w1.is_inf()) {
        // (w2 - w3) / (w - w3)
        return mobius{{0.0, 0.0}, w2.value() - w3.value(), {1.0, 0.0}, -w3.value()};
    }
    if (w2.is_inf()) {
        // (w - w1) / (w - w3)
        return mobius{{1.0, 0.0}, -w1.value(), {1.0, 0.0}, -w3.value()};
    }
    if (w3.is_inf()) {
        // (w - w1) / (w2 - w1)
        return mobius{{1.0, 0.0}, -w1.value(), {0.0, 0.0}, w2.value() - w1.value()};
    }
    cplx f23 = w2.value() - w3.value();
    cplx f21 = w2.value() - w1.value();
    return mobius{f23, -w1.value() * f23, f21, -w3.value() * f21};
}

}  // namespace detail

/// The unique Mobius map with w_i -> v_i for three mutually different source
/// and target triples.
inline mobius mobius_from_three(const proj_value& w1, const proj_value& w2, const proj_value& w3,
                                const proj_value& v1, const proj_value& v2, const proj_value& v3) {
    auto distinct = [](const proj_value& x, const proj_value& y) { return chordal(x, y) > 1e-12; };
    if (!distinct(w1, w2) || !distinct(w2, w3) || !distinct(w1, w3) || !distinct(v1, v2) ||
        !distinct(v2, v3) || !distinct(v1, v3))
        throw std::invalid_argument("mobius_from_three: triples must be mutually different");
    mobius s = detail::to_standard_triple(w1, w2, w3);
    mobius t = detail::to_standard_triple(v1, v2, v3);
    return t.inverse().compose(s);
}

/// [a,b,c,d] = (a-c)(b-d) / ((b-c)(a-d)), with the usual limits at infinity.
inline proj_value cross_ratio(const proj_value& a, const proj_value& b, const proj_value& c,
                              const proj_value& d) {
    // Send (a, d, b) -> (0, 1, inf); the cross-ratio is the image of c.
    // Check against the affine formula: image of c is ((c-a)(d-b))/((d-a)(c-b)),
    // and [a,b,c,d] = (a-c)(b-d)/((b-c)(a-d)) is the same expression.
    mobius m = detail::to_standard_triple(a, d, b);
    return m(c);
}

}  // namespace ebloch

#endif
