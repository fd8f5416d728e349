// SPDX-License-Identifier: Apache-2.0
//
// Formal Z-combinations of torus points, merged within the global matching
// tolerance. Principal divisors additionally keep their mult-weighted lift
// sums exactly equal between zeros and poles; that discipline lives in
// elliptic_function.hpp, the container here is neutral.

#ifndef EBLOCH_DIVISOR_HPP
#define EBLOCH_DIVISOR_HPP

#include <algorithm>
#include <vector>

#include "ebloch/torus.hpp"

namespace ebloch {

struct divisor_entry {
    torus_point point;
    int mult;
};

class divisor {
  public:
    divisor() = default;

    void add(const torus_point& p, int m) {
        if (m == 0) return;
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (points_equal(it->point, p)) {
                it->mult += m;
                if (it->mult == 0) entries_.erase(it);
                return;
            }
        }
        entries_.push_back({p, m});
    }

    const std::vector<divisor_entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// Number of zeros counted with multiplicity (sum of positive mults).
    int degree() const {
        int d = 0;
        for (const auto& e : entries_)
            if (e.mult > 0) d += e.mult;
        return d;
    }

    /// Sum of all multiplicities (0 for a principal divisor).
    int total() const {
        int d = 0;
        for (const auto& e : entries_) d += e.mult;
        return d;
    }

    /// Mult-weighted sum of the exact lifts.
    cplx lift_sum() const {
        cplx s{0.0, 0.0};
        for (const auto& e : entries_) s += double(e.mult) * e.point.lift();
        return s;
    }

    /// Positive part expanded with multiplicity, sorted by (u, v).
    std::vector<torus_point> expand_positive() const { return expand(+1); }
    std::vector<torus_point> expand_negative() const { return expand(-1); }

    void sort() {
        std::sort(entries_.begin(), entries_.end(), [](const divisor_entry& a, const divisor_entry& b) {
            if (a.point.u() != b.point.u()) return a.point.u() < b.point.u();
            return a.point.v() < b.point.v();
        });
    }

    divisor operator-() const {
        divisor d = *this;
        for (auto& e : d.entries_) e.mult = -e.mult;
        return d;
    }

  private:
    std::vector<torus_point> expand(int sign) const {
        std::vector<torus_point> out;
        for (const auto& e : entries_) {
            int m = sign * e.mult;
            for (int i = 0; i < m; ++i) out.push_back(e.point);
        }
        std::sort(out.begin(), out.end(), [](const torus_point& a, const torus_point& b) {
            if (a.u() != b.u()) return a.u() < b.u();
            return a.v() < b.v();
        });
        return out;
    }

    std::vector<divisor_entry> entries_;
};

/// Multiset match of two divisors modulo the lattice, within eps.
inline bool divisors_match(const divisor& a, const divisor& b, double eps) {
    std::vector<divisor_entry> rest(b.entries().begin(), b.entries().end());
    for (const auto& ea : a.entries()) {
        auto it = std::find_if(rest.begin(), rest.end(), [&](const divisor_entry& eb) {
            return eb.mult == ea.mult && points_equal(ea.point, eb.point, eps);
        });
        if (it == rest.end()) return false;
        rest.erase(it);
    }
    return rest.empty();
}

}  // namespace ebloch

#endif
