// SPDX-License-Identifier: Apache-2.0
//
// All solutions of f(z) = c on the torus, with multiplicities. A coarse grid
// pass locates basins (local minima of |f - c|), Newton refines them using
// the analytic logarithmic derivative of the theta quotient, and each root
// cluster is certified by a small-circle argument-principle integral that
// supplies both the multiplicity and (through the first moment) the exact
// cluster centroid. Global closure: multiplicities sum to deg f and the root
// sum satisfies the Abel condition modulo the lattice.

#ifndef EBLOCH_ROOTFIND_HPP
#define EBLOCH_ROOTFIND_HPP

#include <optional>
#include <vector>

#include "ebloch/elliptic_function.hpp"

namespace ebloch {

namespace detail {

// Continuous winding of g along the segment [a, b] (in units of full turns).
// Bisects whenever a step turns by more than pi/2. Returns nullopt when the
// curve passes too close to zero or recursion bottoms out.
template <typename G>
std::optional<double> phase_sweep(const G& g, cplx va, cplx vb, const cplx& a, const cplx& b,
                                  double floor, int depth) {
    if (std::abs(va) < floor || std::abs(vb) < floor) return std::nullopt;
    double d = std::arg(vb / va);
    if (std::abs(d) <= 1.5707963267948966) return d / (2.0 * pi);
    if (depth <= 0) return std::nullopt;
    cplx mid = (a + b) / 2.0;
    cplx vm = g(mid);
    auto left = phase_sweep(g, va, vm, a, mid, floor, depth - 1);
    if (!left) return std::nullopt;
    auto right = phase_sweep(g, vm, vb, mid, b, floor, depth - 1);
    if (!right) return std::nullopt;
    return *left + *right;
}

// Winding number of g around the closed polyline through the given corners,
// sampled then refined adaptively.
template <typename G>
std::optional<double> contour_winding(const G& g, const std::vector<cplx>& corners, int samples,
                                      double floor) {
    double total = 0.0;
    for (std::size_t e = 0; e < corners.size(); ++e) {
        cplx a = corners[e];
        cplx b = corners[(e + 1) % corners.size()];
        cplx prev_pt = a;
        cplx prev_val = g(a);
        for (int i = 1; i <= samples; ++i) {
            cplx pt = a + (b - a) * (double(i) / samples);
            cplx val = g(pt);
            auto seg = phase_sweep(g, prev_val, val, prev_pt, pt, floor, 36);
            if (!seg) return std::nullopt;
            total += *seg;
            prev_pt = pt;
            prev_val = val;
        }
    }
    return total;
}

struct cluster {
    std::vector<cplx> members;  // reduced representatives
    cplx center{0.0, 0.0};
    double spread = 0.0;
    int mult = 0;

    void finalize(const lattice& L) {
        // Average the members after aligning them with the first (they can
        // straddle the cell boundary).
        cplx base = members.front();
        cplx acc{0.0, 0.0};
        for (const auto& m : members) acc += base + (m - base - nearest_lattice_vector(m - base, L));
        center = acc / double(members.size());
        spread = 0.0;
        for (const auto& m : members) spread = std::max(spread, torus_dist(m, center, L));
    }
};

}  // namespace detail

/// Zeros of f - c inside a (shifted) fundamental cell, counted by the
/// argument principle with the pole multiset accounted. c = inf counts poles.
inline int count_zeros(const elliptic_function& f, const proj_value& c) {
    if (f.is_constant()) throw std::invalid_argument("count_zeros: constant function");
    if (c.is_inf()) return f.degree();
    const lattice& L = f.lat();
    auto g = [&](const cplx& z) { return f.raw_value(z) - c.value(); };
    double floor = 1e-13 * std::max(1.0, std::abs(c.value()));
    for (int attempt = 0; attempt < 5; ++attempt) {
        double s = 0.01 + 0.17 * attempt + 0.003 * attempt * attempt;
        cplx z0 = L.from_coords(s, s * 0.7 + 0.013);
        std::vector<cplx> corners = {z0, z0 + 1.0, z0 + 1.0 + L.tau(), z0 + L.tau()};
        // Skip shifts that park a support point near the boundary.
        bool clean = true;
        for (const auto& p : f.supports()) {
            auto [u, v] = L.coords_of(p - z0);
            u -= std::floor(u);
            v -= std::floor(v);
            if (std::min({u, 1.0 - u, v, 1.0 - v}) < 1e-3) clean = false;
        }
        if (!clean) continue;
        auto w = detail::contour_winding(g, corners, 256, floor);
        if (!w) continue;
        long wi = std::llround(*w);
        if (std::abs(*w - double(wi)) > 0.05) continue;
        return int(wi) + f.degree();
    }
    throw numerical_error("count_zeros: contour kept hitting the fiber after 5 shifts");
}

/// All solutions of f(z) = c with multiplicities (a divisor of positive
/// entries summing to deg f), sorted by reduced coordinates.
inline divisor solve_fiber(const elliptic_function& f, const proj_value& c) {
    if (f.is_constant()) throw std::invalid_argument("solve_fiber: constant function");
    const lattice& L = f.lat();
    if (c.is_inf()) {
        divisor d = f.pole_divisor();
        d.sort();
        return d;
    }
    if (c.value() == cplx(0.0, 0.0)) {
        divisor d = f.zero_divisor();
        d.sort();
        return d;
    }
    const cplx cv = c.value();
    const double cmag = std::max(1.0, std::abs(cv));
    const int deg = f.degree();
    const double eps = tol().eps;

    auto newton = [&](cplx z) -> std::optional<cplx> {
        for (int it = 0; it < 80; ++it) {
            cplx fv = f.raw_value(z);
            if (!is_finite(fv)) return std::nullopt;
            cplx gv = fv - cv;
            if (f.pole_distance(z) < 1e-10) return std::nullopt;
            cplx dv = fv * f.log_deriv(z);
            if (dv == cplx(0.0, 0.0) || !is_finite(dv)) return std::nullopt;
            cplx step = gv / dv;
            double cap = 0.2 * std::abs(1.0 + L.tau());
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            z -= step;
            if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
        }
        cplx res = f.raw_value(z) - cv;
        if (!is_finite(res) || std::abs(res) > 1e-11 * cmag) return std::nullopt;
        return torus_point(z, L).reduced();
    };

    for (int level = 0; level < 4; ++level) {
        const int grid = level < 3 ? (64 << level) : 96;
        const bool dense = level == 3;  // last resort: Newton from every grid point
        // |f - c| on the grid; Newton from every torus-wrapped local minimum.
        std::vector<double> mag(std::size_t(grid) * std::size_t(grid));
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                cplx z = L.from_coords((i + 0.5) / grid, (j + 0.5) / grid);
                cplx fv = f.raw_value(z);
                mag[std::size_t(i) * std::size_t(grid) + std::size_t(j)] =
                    is_finite(fv) ? std::abs(fv - cv) : 1e300;
            }
        std::vector<cplx> found;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                bool is_min = true;
                if (!dense) {
                    double m0 = mag[std::size_t(i) * std::size_t(grid) + std::size_t(j)];
                    for (int di = -1; di <= 1 && is_min; ++di)
                        for (int dj = -1; dj <= 1; ++dj) {
                            if (di == 0 && dj == 0) continue;
                            int ii = (i + di + grid) % grid, jj = (j + dj + grid) % grid;
                            if (mag[std::size_t(ii) * std::size_t(grid) + std::size_t(jj)] < m0) {
                                is_min = false;
                                break;
                            }
                        }
                }
                if (!is_min) continue;
                auto root = newton(L.from_coords((i + 0.5) / grid, (j + 0.5) / grid));
                if (root) found.push_back(*root);
            }
        // Roots love to hide right next to poles, where f sweeps through
        // every value inside a single grid cell and no grid point becomes a
        // local minimum; rings of extra seeds cover those basins. Same near
        // the zeros when c is small.
        std::vector<cplx> ring_centers = f.pole_lifts();
        if (std::abs(cv) < 0.1) {
            auto zl = f.zero_lifts();
            ring_centers.insert(ring_centers.end(), zl.begin(), zl.end());
        }
        for (const auto& p : ring_centers)
            for (double r : {0.002, 0.005, 0.01, 0.02, 0.05})
                for (int a = 0; a < 8; ++a) {
                    auto root = newton(p + r * std::exp(cplx(0.0, 2.0 * pi * a / 8.0)));
                    if (root) found.push_back(*root);
                }
        if (found.empty()) continue;
        std::sort(found.begin(), found.end(), [](const cplx& a, const cplx& b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });

        // Newton stalls at distance ~eps_machine^(1/m) from an m-fold root,
        // so the stall points of a multiple root scatter well beyond the
        // base matching radius. Climb a cluster-radius ladder until the
        // winding numbers account for the whole degree.
        auto g = [&](const cplx& z) { return f.raw_value(z) - cv; };
        for (double crad : {10.0 * eps, 1e-6, 1e-5, 1e-4, 1e-3}) {
            std::vector<detail::cluster> clusters;
            for (const auto& r : found) {
                bool placed = false;
                for (auto& cl : clusters)
                    if (torus_dist(r, cl.members.front(), L) < crad) {
                        cl.members.push_back(r);
                        placed = true;
                        break;
                    }
                if (!placed) clusters.push_back({{r}, {0.0, 0.0}, 0.0, 0});
            }
            for (auto& cl : clusters) cl.finalize(L);
            bool merged = true;
            while (merged && clusters.size() > 1) {
                merged = false;
                for (std::size_t i = 0; i < clusters.size() && !merged; ++i)
                    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                        double d = torus_dist(clusters[i].center, clusters[j].center, L);
                        if (d < 4.0 * (clusters[i].spread + clusters[j].spread) + 2.0 * crad) {
                            auto mem = clusters[j].members;
                            clusters[i].members.insert(clusters[i].members.end(), mem.begin(),
                                                       mem.end());
                            clusters[i].finalize(L);
                            clusters.erase(clusters.begin() + std::ptrdiff_t(j));
                            merged = true;
                            break;
                        }
                    }
            }

            // Multiplicity and refined center by the argument principle on a
            // small circle around each cluster; zero-winding clusters are
            // Newton stalls with no root inside and get dropped.
            bool level_ok = true;
            int mult_total = 0;
            std::vector<detail::cluster> roots;
            for (auto& cl : clusters) {
                double nearest = 1e300;
                for (const auto& other : clusters)
                    if (&other != &cl)
                        nearest = std::min(nearest, torus_dist(cl.center, other.center, L));
                nearest = std::min(nearest, f.pole_distance(cl.center));
                // The circle wants room: |f - c| ~ |a_m| r^m on it, and the
                // first moment inherits the relative cancellation noise
                // 1e-16/|f - c|, so small circles drown multiple roots.
                double radius = std::max(3.0 * cl.spread + 10.0 * eps,
                                         std::min(2e-3, nearest / 3.0));
                if (radius > nearest / 2.0) {
                    level_ok = false;
                    break;
                }
                const int M = 192;
                double turns = 0.0;
                cplx moment{0.0, 0.0};
                cplx prev_pt = cl.center + radius;
                cplx prev_val = g(prev_pt);
                bool circle_ok = is_finite(prev_val);
                for (int k = 1; k <= M && circle_ok; ++k) {
                    double t = 2.0 * pi * k / M;
                    cplx pt = cl.center + radius * cplx(std::cos(t), std::sin(t));
                    cplx val = g(pt);
                    if (!is_finite(val)) {
                        circle_ok = false;
                        break;
                    }
                    auto seg = detail::phase_sweep(g, prev_val, val, prev_pt, pt, 0.0, 24);
                    if (!seg) {
                        circle_ok = false;
                        break;
                    }
                    turns += *seg;
                    // (1/2 pi i) * int z g'/g dz = sum of roots inside, with
                    // f' = f * dlog; the parametric trapezoid on the circle is
                    // spectrally accurate for the periodic integrand.
                    cplx fpt = f.raw_value(pt);
                    cplx tangent = radius * cplx(-std::sin(t), std::cos(t));
                    moment += pt * fpt * f.log_deriv(pt) / val * tangent * (2.0 * pi / M) /
                              cplx(0.0, 2.0 * pi);
                    prev_pt = pt;
                    prev_val = val;
                }
                long m = std::llround(turns);
                if (!circle_ok || m < 0 || std::abs(turns - double(m)) > 0.05) {
                    level_ok = false;
                    break;
                }
                if (m == 0) continue;
                cl.mult = int(m);
                mult_total += int(m);
                if (m >= 2) cl.center = moment / double(m);
                roots.push_back(cl);
            }
            if (!level_ok || mult_total != deg) continue;

            // Residuals and the Abel condition close the certificate.
            divisor out;
            cplx root_sum{0.0, 0.0};
            bool sound = true;
            for (const auto& cl : roots) {
                cplx res = f.raw_value(cl.center) - cv;
                if (!is_finite(res) || std::abs(res) > 1e-10 * cmag) {
                    sound = false;
                    break;
                }
                out.add(torus_point(cl.center, L), cl.mult);
                root_sum += double(cl.mult) * cl.center;
            }
            if (!sound) continue;
            cplx pole_sum{0.0, 0.0};
            for (const auto& p : f.pole_lifts()) pole_sum += p;
            cplx gap = root_sum - pole_sum;
            if (std::abs(gap - nearest_lattice_vector(gap, L)) > 1e-8) continue;
            out.sort();
            return out;
        }
    }
    throw numerical_error("solve_fiber: fiber multiplicity failed to close after grid refinement");
}

}  // namespace ebloch

#endif
