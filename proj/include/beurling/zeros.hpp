#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certified.hpp"
#include "evaluator.hpp"
#include "winding.hpp"

namespace beurling {

struct Rectangle {
    double sigma_lo = 0.0, sigma_hi = 0.0, t_lo = 0.0, t_hi = 0.0;

    double width() const { return sigma_hi - sigma_lo; }
    double height() const { return t_hi - t_lo; }
    double diameter() const { return std::hypot(width(), height()); }
    cplx center() const { return {0.5 * (sigma_lo + sigma_hi), 0.5 * (t_lo + t_hi)}; }
    bool contains(cplx s) const {
        return s.real() >= sigma_lo && s.real() <= sigma_hi && s.imag() >= t_lo && s.imag() <= t_hi;
    }
    Rectangle mirrored() const { return {sigma_lo, sigma_hi, -t_hi, -t_lo}; }
    std::vector<cplx> corners() const {
        return {{sigma_lo, t_lo}, {sigma_hi, t_lo}, {sigma_hi, t_hi}, {sigma_lo, t_hi}};
    }
    void validate(double theta) const {
        if (!(sigma_lo < sigma_hi) || !(t_lo < t_hi)) throw DomainError("rectangle must have positive width and height");
        if (!(sigma_lo > theta)) throw DomainError("rectangle must lie in Re s > theta");
    }
};

struct Zero {
    double beta = 0.0, gamma = 0.0;
    int multiplicity = 1;
    Rectangle box;

    cplx rho() const { return {beta, gamma}; }
    /// Half-diagonal of the error box: the true zero lies within this distance of rho().
    double uncertainty() const { return 0.5 * box.diameter(); }
};

struct Certificate {
    Rectangle rect;
    long count = 0;  // zeros inside, with multiplicity
};

struct Nudge {
    cplx where;
    double offset;
};

struct ZeroList {
    std::vector<Zero> zeros;  // ascending by gamma
    std::vector<Certificate> certificates;
    std::vector<Nudge> nudges;

    void seal() {
        std::stable_sort(zeros.begin(), zeros.end(), [](const Zero& a, const Zero& b) {
            return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
        });
    }

    /// True when the closed region is contained in the union of certified rectangles.
    bool covers(const Rectangle& q) const {
        std::vector<double> xs{q.sigma_lo, q.sigma_hi}, ys{q.t_lo, q.t_hi};
        for (const auto& c : certificates) {
            for (double x : {c.rect.sigma_lo, c.rect.sigma_hi}) {
                if (x > q.sigma_lo && x < q.sigma_hi) xs.push_back(x);
            }
            for (double y : {c.rect.t_lo, c.rect.t_hi}) {
                if (y > q.t_lo && y < q.t_hi) ys.push_back(y);
            }
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        auto inside = [&](double x, double y) {
            for (const auto& c : certificates) {
                if (c.rect.contains({x, y})) return true;
            }
            return false;
        };
        // Every cell (interior point) and every breakpoint pair must be covered.
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
                if (!inside(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))) return false;
            }
        }
        for (double x : xs) {
            for (double y : ys) {
                if (!inside(x, y)) return false;
            }
        }
        return true;
    }

    void require_coverage(const Rectangle& q) const {
        if (!covers(q)) throw CoverageGapError("zero list is not certified complete on the queried region");
    }
};

struct LocateOptions {
    double tol = 1e-3;
    int max_depth = 60;
    double nudge = 1e-4;
    int max_nudges = 6;
};

namespace detail {

inline double nudge_offset(int k, double base) {
    const int m = (k + 1) / 2;
    return (k % 2 == 1 ? 1.0 : -1.0) * m * base;
}

template <ZetaEvaluator E>
struct Locator {
    const E& ev;
    LocateOptions opt;
    SampleMemo memo;
    ZeroList out;

    long wind(const Rectangle& r) {
        auto f = [this](cplx s) { return ev.zeta(s); };
        return wind_polygon(f, r.corners(), memo).winding;
    }

    /// Winding with the rectangle nudged outward on boundary failures.
    std::pair<Rectangle, long> wind_outer(Rectangle r) {
        for (int k = 0;; ++k) {
            const double off = k == 0 ? 0.0 : std::abs(nudge_offset(k, opt.nudge));
            Rectangle q{r.sigma_lo - off, r.sigma_hi + off, r.t_lo - off, r.t_hi + off};
            try {
                const long w = wind(q);
                if (k > 0) out.nudges.push_back({q.center(), off});
                return {q, w};
            } catch (const BoundaryZeroError&) {
                if (k >= opt.max_nudges) throw;
            }
        }
    }

    std::vector<Rectangle> split(const Rectangle& r, double ds, double dt) const {
        const double W = r.width(), H = r.height();
        const double sm = 0.5 * (r.sigma_lo + r.sigma_hi) + ds;
        const double tm = 0.5 * (r.t_lo + r.t_hi) + dt;
        if (W > 2.0 * H) return {{r.sigma_lo, sm, r.t_lo, r.t_hi}, {sm, r.sigma_hi, r.t_lo, r.t_hi}};
        if (H > 2.0 * W) return {{r.sigma_lo, r.sigma_hi, r.t_lo, tm}, {r.sigma_lo, r.sigma_hi, tm, r.t_hi}};
        return {{r.sigma_lo, sm, r.t_lo, tm}, {sm, r.sigma_hi, r.t_lo, tm}, {r.sigma_lo, sm, tm, r.t_hi}, {sm, r.sigma_hi, tm, r.t_hi}};
    }

    void refine(const Rectangle& r, long count, int depth) {
        if (count == 0) return;
        if (r.diameter() <= opt.tol) {
            const cplx c = r.center();
            out.zeros.push_back({c.real(), c.imag(), static_cast<int>(count), r});
            return;
        }
        if (depth >= opt.max_depth) throw BoundaryZeroError("maximum subdivision depth exceeded", r.center());
        for (int k = 0;; ++k) {
            const double base = std::min(opt.nudge, 0.05 * std::min(r.width(), r.height()));
            const double off = k == 0 ? 0.0 : nudge_offset(k, base);
            const auto kids = split(r, off, off);
            try {
                std::vector<long> counts;
                long total = 0;
                for (const auto& kid : kids) {
                    counts.push_back(wind(kid));
                    total += counts.back();
                }
                if (total != count) throw CoverageGapError("subdivision windings do not add up");
                if (k > 0) out.nudges.push_back({r.center(), off});
                for (std::size_t i = 0; i < kids.size(); ++i) refine(kids[i], counts[i], depth + 1);
                return;
            } catch (const BoundaryZeroError&) {
                if (k >= opt.max_nudges) throw;
            }
        }
    }
};

}  // namespace detail

/// Zeros minus poles of zeta inside the rectangle.
template <ZetaEvaluator E>
long winding_count(const E& ev, const Rectangle& rect) {
    rect.validate(ev.params().theta);
    SampleMemo memo;
    auto f = [&ev](cplx s) { return ev.zeta(s); };
    return wind_polygon(f, rect.corners(), memo).winding;
}

template <ZetaEvaluator E>
ZeroList locate_zeros(const E& ev, const Rectangle& rect, const LocateOptions& opt = {}) {
    rect.validate(ev.params().theta);
    if (rect.contains({1.0, 0.0})) throw DomainError("search rectangle must exclude the pole at s = 1");
    detail::Locator<E> loc{ev, opt, {}, {}};
    auto [outer, count] = loc.wind_outer(rect);
    if (count < 0) throw DomainError("negative winding in a pole-free rectangle");
    loc.out.certificates.push_back({outer, count});
    loc.refine(outer, count, 0);
    loc.out.seal();
    return loc.out;
}

/// Complete zero list on [sigma_lo, sigma_hi] x [-t_max, t_max], closed under conjugation.
/// The strip near the real axis is certified separately, accounting for the pole when enclosed.
template <ZetaEvaluator E>
ZeroList survey_zeros(const E& ev, double sigma_lo, double sigma_hi, double t_max, const LocateOptions& opt = {},
                      double axis_half_height = 0.5) {
    const auto& p = ev.params();
    ZeroList all;
    const double h = std::min(axis_half_height, 0.5 * t_max);
    const Rectangle axis{sigma_lo, sigma_hi, -h, h};
    axis.validate(p.theta);
    {
        detail::Locator<E> loc{ev, opt, {}, {}};
        auto [outer, w] = loc.wind_outer(axis);
        const long poles = outer.contains({1.0, 0.0}) ? 1 : 0;
        const long zeros = w + poles;
        if (zeros > 0) {
            // Real-axis zeros lie left of the zero-free disk around 1.
            const double r0 = p.kappa * (1.0 - p.theta) / (p.a_const + p.kappa);
            const Rectangle left{outer.sigma_lo, std::min(outer.sigma_hi, 1.0 - 0.5 * r0), outer.t_lo, outer.t_hi};
            ZeroList sub = locate_zeros(ev, left, opt);
            long found = 0;
            for (const auto& z : sub.zeros) found += z.multiplicity;
            if (found != zeros) throw CoverageGapError("near-axis zeros not all located");
            all.zeros.insert(all.zeros.end(), sub.zeros.begin(), sub.zeros.end());
            all.nudges.insert(all.nudges.end(), sub.nudges.begin(), sub.nudges.end());
        }
        all.certificates.push_back({outer, zeros});
        all.nudges.insert(all.nudges.end(), loc.out.nudges.begin(), loc.out.nudges.end());
    }
    if (t_max > h) {
        const Rectangle upper{sigma_lo, sigma_hi, h, t_max};
        ZeroList up = locate_zeros(ev, upper, opt);
        for (const auto& z : up.zeros) {
            all.zeros.push_back(z);
            all.zeros.push_back({z.beta, -z.gamma, z.multiplicity, z.box.mirrored()});
        }
        for (const auto& c : up.certificates) {
            all.certificates.push_back(c);
            all.certificates.push_back({c.rect.mirrored(), c.count});
        }
        all.nudges.insert(all.nudges.end(), up.nudges.begin(), up.nudges.end());
    }
    all.seal();
    return all;
}

namespace detail {

enum class Side { Inside, Outside, Ambiguous };

inline Side classify(const Zero& z, double b, double t_lo, double t_hi, bool open_t) {
    const Rectangle& bx = z.box;
    auto t_in = [&](double t) { return open_t ? (t > t_lo && t < t_hi) : (t >= t_lo && t <= t_hi); };
    const bool all_in = bx.sigma_lo >= b && bx.sigma_hi <= 1.0 && t_in(bx.t_lo) && t_in(bx.t_hi);
    const bool all_out = bx.sigma_hi < b || bx.sigma_lo > 1.0 || bx.t_hi < t_lo || bx.t_lo > t_hi ||
                         (open_t && (bx.t_hi <= t_lo || bx.t_lo >= t_hi));
    if (all_in) return Side::Inside;
    if (all_out) return Side::Outside;
    return Side::Ambiguous;
}

inline long count_region(const ZeroList& zl, double b, double t_lo, double t_hi, bool open_t) {
    zl.require_coverage({b, 1.0, t_lo, t_hi});
    long n = 0;
    for (const auto& z : zl.zeros) {
        switch (classify(z, b, t_lo, t_hi, open_t)) {
            case Side::Inside: n += z.multiplicity; break;
            case Side::Outside: break;
            case Side::Ambiguous: throw IndeterminateError("a zero box straddles the query boundary");
        }
    }
    return n;
}

}  // namespace detail

/// N(b,T): zeros with beta >= b and |gamma| <= T.
inline long count_in_rectangle(const ZeroList& zl, double b, double T) {
    if (T < 0.0) throw DomainError("T must be >= 0");
    if (T == 0.0) {
        long n = 0;
        for (const auto& z : zl.zeros) {
            if (z.gamma == 0.0 && z.beta >= b) n += z.multiplicity;
        }
        return n;
    }
    return detail::count_region(zl, b, -T, T, false);
}

/// N(b,R,T): zeros with beta >= b and R < gamma < T.
inline long count_in_band(const ZeroList& zl, double b, double R, double T) {
    if (!(T > R)) throw DomainError("count_in_band requires T > R");
    return detail::count_region(zl, b, R, T, true);
}

// ---------------------------------------------------------------------------
// Zero-count inequalities.

enum class CountDisplay { ZerosInH, ZerosInHSmallT, ZerosHighT, NTest, ZerosInThCorr, ZerosBetween, ZerosBetweenOne };

inline const char* to_string(CountDisplay d) {
    switch (d) {
        case CountDisplay::ZerosInH: return "zerosinH";
        case CountDisplay::ZerosInHSmallT: return "zerosinH-smallt";
        case CountDisplay::ZerosHighT: return "zeroshightt";
        case CountDisplay::NTest: return "NTest";
        case CountDisplay::ZerosInThCorr: return "zerosinth-corr";
        case CountDisplay::ZerosBetween: return "zerosbetween";
        case CountDisplay::ZerosBetweenOne: return "zerosbetweenone";
    }
    return "?";
}

inline constexpr double kJensenHeight = 5.2224;  // e^{5/4} + sqrt(3), rounded up

struct CountGeometry {
    double b = 0.45;
    double T = 20.0;
    double R = 5.0;  // lower height for the band display
};

struct CountCheck {
    CountDisplay display;
    long count = 0;
    double rhs = 0.0;
    bool pass = false;
};

inline double jensen_h(double b, double theta) { return std::sqrt(7.0) / 3.0 * std::sqrt((b - theta) * (1.0 - theta)); }

/// Hypotheses of each display; the small-T Jensen form is selected for |T| <= 5.222.
inline bool count_applicable(CountDisplay d, const AxiomAParams& p, const CountGeometry& g) {
    if (!(p.theta < g.b && g.b < 1.0)) return false;
    const double T = std::abs(g.T);
    switch (d) {
        case CountDisplay::ZerosInH: return T >= std::exp(1.25) + std::sqrt(3.0);
        case CountDisplay::ZerosInHSmallT: return T <= 5.222;
        case CountDisplay::ZerosHighT: return T >= 6.3;
        case CountDisplay::NTest: return g.T >= 1.0;
        case CountDisplay::ZerosInThCorr: return g.T >= 5.0;
        case CountDisplay::ZerosBetween: return g.T > g.R && g.R >= 5.0;
        case CountDisplay::ZerosBetweenOne: return g.T >= 6.0;
    }
    return false;
}

inline double count_rhs(CountDisplay d, const AxiomAParams& p, const CountGeometry& g) {
    if (!count_applicable(d, p, g)) throw DomainError(std::string("hypotheses of ") + to_string(d) + " not met");
    const double th = p.theta, b = g.b, bt = b - th, ak = p.a_const + p.kappa;
    const double T = std::abs(g.T);
    const double l1t = std::log(1.0 / (1.0 - th));
    switch (d) {
        case CountDisplay::ZerosInH:
            return (1.0 - th) / bt * (0.654 * std::log(T) + std::log(std::log(T)) + 6.0 * std::log(ak) + 6.0 * l1t + 12.5);
        case CountDisplay::ZerosInHSmallT:
            return (1.0 - th) / bt * (6.0 * std::log(ak) + 6.0 * l1t + 14.0);
        case CountDisplay::ZerosHighT:
            return std::sqrt(1.0 - th) / std::sqrt(bt * bt * bt) * (2.0 * std::log(T) + 12.0 * std::log(ak) + 12.0 * l1t + 25.0);
        case CountDisplay::NTest: {
            const double logp = std::max(0.0, std::log(T));
            return std::sqrt(1.0 - th) / std::sqrt(bt * bt * bt) * (2.0 * T * logp + (12.0 * std::log(ak) + 12.0 * l1t + 28.0) * T);
        }
        case CountDisplay::ZerosInThCorr:
            return 1.0 / bt * (0.5 * T * std::log(T) + (2.0 * std::log(ak) + std::log(1.0 / bt) + 3.0) * T);
        case CountDisplay::ZerosBetween:
            return 1.0 / bt *
                   (4.0 / (3.0 * std::numbers::pi) * (g.T - g.R) * (std::log(g.T) + std::log(11.4 * ak * ak / bt)) +
                    16.0 / 3.0 * std::log(60.0 * ak * ak / bt));
        case CountDisplay::ZerosBetweenOne:
            return 1.0 / bt * (0.85 * std::log(T) + 6.2 * std::log(ak * ak / bt) + 24.0);
    }
    return 0.0;
}

/// Count in the region each display is about.
inline long count_for(CountDisplay d, const ZeroList& zl, const AxiomAParams& p, const CountGeometry& g) {
    switch (d) {
        case CountDisplay::ZerosInH:
        case CountDisplay::ZerosInHSmallT: {
            const double h = jensen_h(g.b, p.theta);
            return detail::count_region(zl, g.b, g.T - h, g.T + h, false);
        }
        case CountDisplay::ZerosHighT:
        case CountDisplay::ZerosBetweenOne: return detail::count_region(zl, g.b, g.T - 1.0, g.T + 1.0, true);
        case CountDisplay::NTest: return count_in_rectangle(zl, g.b, g.T);
        case CountDisplay::ZerosInThCorr: return detail::count_region(zl, g.b, -g.T, g.T, true);
        case CountDisplay::ZerosBetween: return count_in_band(zl, g.b, g.R, g.T);
    }
    return 0;
}

inline CountCheck check_count(CountDisplay d, const ZeroList& zl, const AxiomAParams& p, const CountGeometry& g) {
    CountCheck c{d, 0, 0.0, false};
    c.rhs = count_rhs(d, p, g);
    c.count = count_for(d, zl, p, g);
    c.pass = static_cast<double>(c.count) <= c.rhs;
    return c;
}

/// Every display whose hypotheses hold at the geometry.
inline std::vector<CountCheck> check_count_bounds(const ZeroList& zl, const AxiomAParams& p, const CountGeometry& g) {
    std::vector<CountCheck> out;
    for (auto d : {CountDisplay::ZerosInH, CountDisplay::ZerosInHSmallT, CountDisplay::ZerosHighT, CountDisplay::NTest,
                   CountDisplay::ZerosInThCorr, CountDisplay::ZerosBetween, CountDisplay::ZerosBetweenOne}) {
        if (count_applicable(d, p, g)) out.push_back(check_count(d, zl, p, g));
    }
    return out;
}

}  // namespace beurling
