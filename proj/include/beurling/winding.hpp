#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "certified.hpp"

namespace beurling {

struct WalkOptions {
    double initial_fraction = 1.0 / 16.0;  // first step as a fraction of the edge length
    double grow = 1.5;
    double min_step = 1e-11;
};

struct WindingResult {
    long winding = 0;
    double total_arg = 0.0;
    double residual = 0.0;  // |total_arg / 2pi - winding|
    std::uint64_t steps = 0;
};

/// Cache of certified samples keyed by exact coordinates.
class SampleMemo {
public:
    template <class F>
    const CertifiedValue& get(F& f, cplx s) {
        const auto key = std::make_pair(s.real(), s.imag());
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        return map_.emplace(key, f(s)).first->second;
    }
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::pair<double, double>, CertifiedValue> map_;
};

namespace detail {

/// Step test: the exact values at both ends lie in a common half-plane through 0.
inline bool step_safe(const CertifiedValue& a, const CertifiedValue& b) {
    const double la = std::abs(a.value) - a.radius;
    const double lb = std::abs(b.value) - b.radius;
    if (!(la > 0.0) || !(lb > 0.0)) return false;
    return std::abs(b.value - a.value) + a.radius + b.radius < std::min(la, lb);
}

inline double arg_ratio(const CertifiedValue& a, const CertifiedValue& b) { return std::arg(b.value / a.value); }

/// Accumulate the argument change of f along path(u), u in [u0,u1].
template <class F, class P>
double walk(F& f, P& path, double u0, double u1, double length, SampleMemo& memo, const WalkOptions& opt,
            std::uint64_t& steps) {
    double total = 0.0;
    double u = u0;
    double h = (u1 - u0) * opt.initial_fraction;
    const double hmin = opt.min_step / std::max(length, 1e-300);
    cplx sa = path(u);
    CertifiedValue wa = memo.get(f, sa);
    if (!(wa.lower() > 0.0)) throw BoundaryZeroError("certificate cannot exclude a zero on the boundary", sa);
    while (u < u1) {
        double ub = std::min(u + h, u1);
        if (u1 - ub < 1e-3 * h) ub = u1;
        const double um = 0.5 * (u + ub);
        const cplx sb = path(ub);
        const cplx sm = path(um);
        const CertifiedValue wb = memo.get(f, sb);
        bool ok = step_safe(wa, wb);
        CertifiedValue wm;
        if (ok) {
            wm = memo.get(f, sm);
            ok = step_safe(wa, wm) && step_safe(wm, wb);
        }
        if (!ok) {
            h *= 0.5;
            if (h < hmin) throw BoundaryZeroError("boundary refinement exhausted near a possible zero", sa);
            continue;
        }
        total += arg_ratio(wa, wm) + arg_ratio(wm, wb);
        ++steps;
        u = ub;
        sa = sb;
        wa = wb;
        h *= opt.grow;
    }
    return total;
}

inline WindingResult finish_winding(double total, std::uint64_t steps) {
    WindingResult r;
    r.total_arg = total;
    r.steps = steps;
    const double turns = total / (2.0 * std::numbers::pi);
    r.winding = std::lround(turns);
    r.residual = std::abs(turns - static_cast<double>(r.winding));
    if (r.residual > 1e-6) throw BoundaryZeroError("accumulated argument is not a multiple of 2 pi", cplx{});
    return r;
}

}  // namespace detail

/// Winding number of f around a closed polygon (vertices in order, last joined to first).
template <class F>
WindingResult wind_polygon(F&& f, const std::vector<cplx>& vertices, SampleMemo& memo, const WalkOptions& opt = {}) {
    double total = 0.0;
    std::uint64_t steps = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const cplx a = vertices[i];
        const cplx b = vertices[(i + 1) % vertices.size()];
        auto path = [a, b](double u) { return u == 1.0 ? b : a + (b - a) * u; };
        total += detail::walk(f, path, 0.0, 1.0, std::abs(b - a), memo, opt, steps);
    }
    return detail::finish_winding(total, steps);
}

/// Winding number of f around the circle |s - center| = radius, counterclockwise.
template <class F>
WindingResult wind_circle(F&& f, cplx center, double radius, const WalkOptions& opt = {}) {
    SampleMemo memo;
    auto path = [center, radius](double u) {
        if (u == 1.0) u = 0.0;
        const double a = 2.0 * std::numbers::pi * u;
        return center + radius * cplx(std::cos(a), std::sin(a));
    };
    std::uint64_t steps = 0;
    double total = 0.0;
    for (int q = 0; q < 4; ++q) {
        total += detail::walk(f, path, q * 0.25, (q + 1) * 0.25, 2.0 * std::numbers::pi * radius, memo, opt, steps);
    }
    return detail::finish_winding(total, steps);
}

}  // namespace beurling
