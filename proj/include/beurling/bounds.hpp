#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "certified.hpp"
#include "evaluator.hpp"
#include "numsys.hpp"
#include "parallel.hpp"
#include "winding.hpp"
#include "zeros.hpp"
#include "zeta.hpp"

namespace beurling {

enum class BoundCase {
    ZXESTI,
    ZXRLARGE,
    ZXRLOW,
    ZSGENERAL,
    ZSGENLARGET,
    ZSSMIN1,
    ZSINTHERIGHT,
    RECIPROK,
    ZSINTHERIGHTLARGET,
    ZESTITNEARZERO,
    ZESTITSMALL,
    ZESTITNOTLARGE,
    ZSINTHELEFT,
    ZSLOGOS,
    ZSLOGOSKIST,
};

inline constexpr std::array<BoundCase, 15> kAllBoundCases = {
    BoundCase::ZXESTI,         BoundCase::ZXRLARGE,       BoundCase::ZXRLOW,      BoundCase::ZSGENERAL,
    BoundCase::ZSGENLARGET,    BoundCase::ZSSMIN1,        BoundCase::ZSINTHERIGHT, BoundCase::RECIPROK,
    BoundCase::ZSINTHERIGHTLARGET, BoundCase::ZESTITNEARZERO, BoundCase::ZESTITSMALL, BoundCase::ZESTITNOTLARGE,
    BoundCase::ZSINTHELEFT,    BoundCase::ZSLOGOS,        BoundCase::ZSLOGOSKIST,
};

inline const char* to_string(BoundCase c) {
    switch (c) {
        case BoundCase::ZXESTI: return "ZXESTI";
        case BoundCase::ZXRLARGE: return "ZXRLARGE";
        case BoundCase::ZXRLOW: return "ZXRLOW";
        case BoundCase::ZSGENERAL: return "ZSGENERAL";
        case BoundCase::ZSGENLARGET: return "ZSGENLARGET";
        case BoundCase::ZSSMIN1: return "ZSSMIN1";
        case BoundCase::ZSINTHERIGHT: return "ZSINTHERIGHT";
        case BoundCase::RECIPROK: return "RECIPROK";
        case BoundCase::ZSINTHERIGHTLARGET: return "ZSINTHERIGHTLARGET";
        case BoundCase::ZESTITNEARZERO: return "ZESTITNEARZERO";
        case BoundCase::ZESTITSMALL: return "ZESTITSMALL";
        case BoundCase::ZESTITNOTLARGE: return "ZESTITNOTLARGE";
        case BoundCase::ZSINTHELEFT: return "ZSINTHELEFT";
        case BoundCase::ZSLOGOS: return "ZSLOGOS";
        case BoundCase::ZSLOGOSKIST: return "ZSLOGOSKIST";
    }
    return "?";
}

inline std::optional<BoundCase> bound_case_from_string(const std::string& s) {
    for (auto c : kAllBoundCases) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

/// Auxiliary parameters: X for the partial-sum cases, tau for the small-t cases.
struct BoundAux {
    double X = 1000.0;
    double tau = 1.0;
    double extra_radius = 0.0;  // added to every LHS radius (soundness experiments)
};

/// The RHS is a lower bound (|zeta| >= rhs) rather than an upper bound.
inline bool is_lower_bound(BoundCase c) { return c == BoundCase::RECIPROK; }

/// Hypothesis of each display, shrunk by margin on every inequality.
inline bool in_domain(BoundCase c, const AxiomAParams& p, cplx s, const BoundAux& aux, double margin = 0.0) {
    const double sg = s.real(), t = std::abs(s.imag()), th = p.theta;
    if (!(sg > th + margin)) return false;
    const bool off_pole = std::abs(s - 1.0) > std::max(margin, kPoleExclusion);
    const double e54 = std::exp(1.25);
    switch (c) {
        case BoundCase::ZXESTI:
        case BoundCase::ZXRLARGE:
        case BoundCase::ZXRLOW: return aux.X >= 1.0;
        case BoundCase::ZSGENERAL: return off_pole;
        case BoundCase::ZSGENLARGET: return sg <= t - margin;
        case BoundCase::ZSSMIN1: return sg <= 4.0 - margin && t <= 9.0 - margin;
        case BoundCase::ZSINTHERIGHT:
        case BoundCase::RECIPROK: return sg > 1.0 + margin;
        case BoundCase::ZSINTHERIGHTLARGET: return sg > 1.0 + margin && t >= 4.0 + margin;
        case BoundCase::ZESTITNEARZERO: return aux.tau >= 1.0 && t <= aux.tau - margin && off_pole;
        case BoundCase::ZESTITSMALL: return aux.tau >= 1.0 && t >= 1.0 / (aux.tau + 1.0) + margin && t <= aux.tau - margin;
        case BoundCase::ZESTITNOTLARGE:
            return aux.tau >= 1.0 && t <= aux.tau - margin && std::abs(sg - 1.0) > std::max(margin, 0.0) && sg != 1.0;
        case BoundCase::ZSINTHELEFT: return sg < 1.0 - margin && t >= 4.0 + margin;
        case BoundCase::ZSLOGOS: return sg < 1.0 - margin && t >= e54 + margin;
        case BoundCase::ZSLOGOSKIST: return sg < 1.0 - margin && t >= 1.0 + margin && t <= e54 - margin;
    }
    return false;
}

/// Closed-form right-hand side of each display (its outermost form).
inline double rhs_bound(BoundCase c, const AxiomAParams& p, cplx s, const BoundAux& aux) {
    if (!in_domain(c, p, s, aux)) throw DomainError(std::string("point outside the domain of ") + to_string(c));
    const double sg = s.real(), t = std::abs(s.imag()), th = p.theta, A = p.a_const, k = p.kappa;
    const double c_ = sg - th, X = aux.X, tau = aux.tau;
    const double ex = (1.0 - sg) / (1.0 - th);
    switch (c) {
        case BoundCase::ZXESTI:
            if (sg < 1.0) {
                return std::min(k * std::pow(X, 1.0 - sg) / (1.0 - sg) + A / c_, k * std::pow(X, 1.0 - sg) * std::log(X) + A / c_);
            }
            if (sg == 1.0) return k * std::log(X) + A / (1.0 - th);
            return std::min(sg * (A + k) / (sg - 1.0), k * std::log(X) + sg * A / c_);
        case BoundCase::ZXRLARGE: return zeta_tail_bound(p, s, X);
        case BoundCase::ZXRLOW: return A * std::min(std::abs(s) / c_, std::abs(s) * std::log(X) + std::pow(X, -c_));
        case BoundCase::ZSGENERAL: return A * std::abs(s) / c_;
        case BoundCase::ZSGENLARGET: return std::numbers::sqrt2 * (A + k) * t / c_;
        case BoundCase::ZSSMIN1: return 100.0 * A / c_;
        case BoundCase::ZSINTHERIGHT: return (A + k) * sg / (sg - 1.0);
        case BoundCase::RECIPROK: return (sg - 1.0) / ((A + k) * sg);
        case BoundCase::ZSINTHERIGHTLARGET: return k / c_ * std::log(t) + 7.0 / 3.0 * sg * (A + k) / c_;
        case BoundCase::ZESTITNEARZERO: return (tau + 1.0) * A * std::max(1.0, sg) / c_;
        case BoundCase::ZESTITSMALL: return (tau + 1.0) * (A + k) * std::max(1.0, sg) / c_;
        case BoundCase::ZESTITNOTLARGE:
            return (tau + 1.0) * (A + k) * std::max(1.0, sg) * std::max(1.0 / c_, 1.0 / std::abs(1.0 - sg));
        case BoundCase::ZSINTHELEFT: return 2.0 * (A + k) * std::max(1.0 / c_, 1.0 / (1.0 - sg)) * std::pow(t, ex);
        case BoundCase::ZSLOGOS: return 2.0 * (A + k) / c_ * std::pow(t, ex) * std::log(t);
        case BoundCase::ZSLOGOSKIST: return 2.5 * (A + k) / c_ * std::pow(t, ex);
    }
    return 0.0;
}

enum class Outcome { Pass, Fail, Indeterminate };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct PointResult {
    BoundCase bound_case = BoundCase::ZSGENERAL;
    cplx s;
    double lhs = 0.0;     // |certified value|
    double radius = 0.0;  // certificate radius
    double rhs = 0.0;
    double x_used = 0.0;  // partial-sum length behind the certificate
    Outcome outcome = Outcome::Indeterminate;
    std::string reason;
};

inline Outcome decide(BoundCase c, double lhs, double radius, double rhs) {
    if (is_lower_bound(c)) {
        if (lhs - radius >= rhs) return Outcome::Pass;
        if (lhs + radius < rhs) return Outcome::Fail;
        return Outcome::Indeterminate;
    }
    if (lhs + radius <= rhs) return Outcome::Pass;
    if (lhs - radius > rhs) return Outcome::Fail;
    return Outcome::Indeterminate;
}

/// Default ladder of partial-sum lengths used before a check is declared indeterminate.
inline std::vector<double> x_ladder(double cutoff) {
    std::vector<double> out;
    for (double x = 100.0; x < cutoff; x *= 10.0) out.push_back(x);
    out.push_back(cutoff);
    return out;
}

/// Certified left-hand sides at one point. Partial sums are extended lazily along the ladder
/// and shared between cases; the point is moved to the upper half-plane (all LHS are moduli).
class PointCertifier {
public:
    PointCertifier(const ElementTable& table, const AxiomAParams& params, cplx s)
        : table_(&table), p_(params), s_(s.imag() < 0.0 ? std::conj(s) : s), cur_(table, s_), ladder_(x_ladder(table.cutoff_x())) {}

    PointResult check(BoundCase c, const BoundAux& aux) {
        PointResult r;
        r.bound_case = c;
        r.s = s_;
        r.rhs = rhs_bound(c, p_, s_, aux);
        switch (c) {
            case BoundCase::ZXESTI: {
                if (aux.X > table_->cutoff_x()) throw DomainError("X beyond table cutoff");
                PartialSumCursor cs(*table_, s_), cr(*table_, cplx(s_.real(), 0.0));
                cs.advance_to(aux.X);
                cr.advance_to(aux.X);
                const double a = std::abs(cs.sum()) + cs.sum_slack();
                const double b = cr.sum().real() + cr.sum_slack();
                if (a >= b) {
                    r.lhs = std::abs(cs.sum());
                    r.radius = cs.sum_slack();
                } else {
                    r.lhs = cr.sum().real();
                    r.radius = cr.sum_slack();
                }
                r.x_used = aux.X;
                return finish(c, r, aux);
            }
            case BoundCase::ZXRLOW: {
                const CertifiedValue v = remainder_integral(*table_, p_, s_, aux.X);
                r.lhs = std::abs(v.value);
                r.radius = v.radius;
                r.x_used = aux.X;
                return finish(c, r, aux);
            }
            case BoundCase::ZXRLARGE: {
                if (aux.X > table_->cutoff_x()) throw DomainError("X beyond table cutoff");
                PartialSumCursor base(*table_, s_);
                base.advance_to(aux.X);
                for (double X2 : ladder_) {
                    if (X2 <= aux.X || X2 < cur_.x()) continue;
                    advance(X2);
                    // int_X^{X2} x^{-s} dR = (S_{X2} - S_X) - kappa (X2^{1-s} - X^{1-s})/(1-s)
                    const CertifiedValue g2 = remainder_integral_from(cur_, p_, X2);
                    const CertifiedValue g1 = remainder_integral_from(base, p_, aux.X);
                    const CertifiedValue d = g2 - g1;
                    r.lhs = std::abs(d.value);
                    r.radius = d.radius + zeta_tail_bound(p_, s_, X2);
                    r.x_used = X2;
                    if (finish(c, r, aux).outcome != Outcome::Indeterminate) break;
                }
                return finish(c, r, aux);
            }
            default: break;
        }
        for (double X : ladder_) {
            if (X < cur_.x()) continue;
            advance(X);
            const CertifiedValue v = lhs_value(c, X);
            r.lhs = std::abs(v.value);
            r.radius = v.radius;
            r.x_used = X;
            if (finish(c, r, aux).outcome != Outcome::Indeterminate) break;
        }
        return finish(c, r, aux);
    }

private:
    void advance(double X) { cur_.advance_to(X); }

    CertifiedValue lhs_value(BoundCase c, double X) const {
        const CertifiedValue g = pole_subtracted_from(cur_, p_, X);
        switch (c) {
            case BoundCase::ZSGENERAL:
            case BoundCase::ZESTITNEARZERO: return g;
            case BoundCase::ZSSMIN1: return (s_ - 1.0) * g;
            default: detail::check_pole(s_); return pole_term(p_, s_) + g;
        }
    }

    static PointResult finish(BoundCase c, PointResult r, const BoundAux& aux) {
        r.radius += aux.extra_radius;
        r.outcome = decide(c, r.lhs, r.radius, r.rhs);
        return r;
    }

    const ElementTable* table_;
    AxiomAParams p_;
    cplx s_;
    PartialSumCursor cur_;
    std::vector<double> ladder_;
};

inline PointResult check_point(BoundCase c, const ElementTable& table, const AxiomAParams& params, cplx s, const BoundAux& aux) {
    PointCertifier pc(table, params, s);
    return pc.check(c, aux);
}

struct BoundReport {
    BoundCase bound_case = BoundCase::ZSGENERAL;
    std::size_t points = 0, passes = 0, indeterminates = 0, failures = 0;
    std::vector<PointResult> results;  // every tested point, in grid order
};

struct Grid {
    double sigma_lo = 0.1, sigma_hi = 3.0;
    double t_lo = -30.0, t_hi = 30.0;
    int sigma_steps = 50, t_steps = 60;
    double X = 1000.0;    // aux X for the partial-sum cases
    double margin = 1e-3;  // distance kept from every hypothesis boundary

    std::vector<cplx> points() const {
        std::vector<cplx> out;
        if (sigma_steps <= 0 || t_steps <= 0) return out;
        for (int i = 0; i < sigma_steps; ++i) {
            const double sg = sigma_steps == 1 ? sigma_lo : sigma_lo + (sigma_hi - sigma_lo) * i / (sigma_steps - 1);
            for (int j = 0; j < t_steps; ++j) {
                const double t = t_steps == 1 ? t_lo : t_lo + (t_hi - t_lo) * j / (t_steps - 1);
                out.push_back({sg, t});
            }
        }
        return out;
    }
};

/// tau chosen per point so the small-t displays apply wherever they can.
inline BoundAux aux_for(const Grid& g, cplx s) {
    BoundAux a;
    a.X = g.X;
    a.tau = std::max(1.0, std::abs(s.imag()) + 0.01);
    return a;
}

inline std::vector<BoundReport> sweep_grid(const std::vector<BoundCase>& cases, const ElementTable& table, const AxiomAParams& params,
                                           const Grid& grid, int jobs = 1) {
    const auto pts = grid.points();
    std::vector<BoundReport> reports(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) reports[i].bound_case = cases[i];
    if (pts.empty() || cases.empty()) return reports;

    std::vector<std::vector<std::optional<PointResult>>> per_point(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t k) {
        const cplx s = pts[k];
        const BoundAux aux = aux_for(grid, s);
        auto& row = per_point[k];
        row.resize(cases.size());
        std::optional<PointCertifier> pc;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            if (!in_domain(cases[i], params, s, aux, grid.margin)) continue;
            if (!pc) pc.emplace(table, params, s);
            try {
                PointResult r = pc->check(cases[i], aux);
                r.s = s;
                row[i] = r;
            } catch (const BeurlingError& e) {
                PointResult r;
                r.bound_case = cases[i];
                r.s = s;
                r.rhs = rhs_bound(cases[i], params, s, aux);
                r.outcome = Outcome::Indeterminate;
                r.reason = e.what();
                row[i] = r;
            }
        }
    });
    for (std::size_t k = 0; k < pts.size(); ++k) {
        for (std::size_t i = 0; i < cases.size(); ++i) {
            if (!per_point[k][i]) continue;
            auto& rep = reports[i];
            const PointResult& r = *per_point[k][i];
            ++rep.points;
            switch (r.outcome) {
                case Outcome::Pass: ++rep.passes; break;
                case Outcome::Fail: ++rep.failures; break;
                case Outcome::Indeterminate: ++rep.indeterminates; break;
            }
            rep.results.push_back(r);
        }
    }
    return reports;
}

// ---------------------------------------------------------------------------
// Zero-free disk around the pole.

struct ZeroFreeDiskReport {
    double radius = 0.0;
    long winding = 0;
    double residual = 0.0;
    std::uint64_t steps = 0;
    bool vacuous = false;
    bool pass = false;
};

/// Winds (s-1) zeta(s) = kappa + (s-1)(zeta(s) - kappa/(s-1)) around |s-1| = kappa(1-theta)/(A+kappa).
template <ZetaEvaluator E>
ZeroFreeDiskReport verify_zero_free_disk(const E& ev) {
    const auto& p = ev.params();
    ZeroFreeDiskReport rep;
    rep.radius = p.kappa * (1.0 - p.theta) / (p.a_const + p.kappa);
    if (rep.radius < 1e-12) {
        rep.vacuous = rep.pass = true;
        return rep;
    }
    auto f = [&](cplx s) {
        const cplx d = s - 1.0;
        const CertifiedValue g = ev.pole_subtracted(s);
        const CertifiedValue kap{p.kappa, 0.0};
        return kap + d * g;
    };
    const WindingResult w = wind_circle(f, {1.0, 0.0}, rep.radius);
    rep.winding = w.winding;
    rep.residual = w.residual;
    rep.steps = w.steps;
    rep.pass = w.winding == 0;
    return rep;
}

inline ZeroFreeDiskReport verify_zero_free_disk(const ElementTable& table, const AxiomAParams& params, double target_epsilon = 1e-6) {
    return verify_zero_free_disk(AxiomAEvaluator(table, params, target_epsilon));
}

// ---------------------------------------------------------------------------
// Local log-derivative decomposition.

inline constexpr double kLocalLargeT = 5.2224;  // e^{5/4} + sqrt(3), rounded up
inline constexpr double kLocalSmallT = 5.23;

enum class LocalBranch { LargeT, SmallT };

struct LocalBranchResult {
    LocalBranch branch;
    double lhs = 0.0, radius = 0.0, rhs = 0.0;
    Outcome outcome = Outcome::Indeterminate;
};

struct LocalLogDerivReport {
    cplx z;
    double delta = 0.0;
    std::vector<Zero> nearby;  // the multiset S
    std::vector<LocalBranchResult> branches;
    bool pass = false;
};

inline double local_rhs(LocalBranch b, const AxiomAParams& p, cplx z) {
    const double a = z.real(), th = p.theta, ak = p.a_const + p.kappa;
    const double pre = 9.0 * (1.0 - th) / ((a - th) * (a - th));
    if (b == LocalBranch::LargeT) {
        return pre * (22.5 + 14.0 * std::log(ak) + 14.0 * std::log(1.0 / (a - th)) + 5.0 * std::log(std::abs(z.imag())));
    }
    return pre * (34.0 + 14.0 * std::log(ak) + 18.0 * std::log(1.0 / (a - th)));
}

/// Compares |zeta'/zeta(z) - sum_{rho in S} 1/(z-rho) [+ 1/(z-1)]| with the closed forms;
/// both branches are checked where their height ranges overlap.
template <ZetaEvaluator E>
LocalLogDerivReport verify_logderiv_local(const E& ev, cplx z, const ZeroList& zeros) {
    const auto& p = ev.params();
    const double a = z.real();
    if (!(a > p.theta && a <= 1.0)) throw DomainError("requires theta < Re z <= 1");
    LocalLogDerivReport rep;
    rep.z = z;
    rep.delta = (a - p.theta) / 3.0;
    const double d = rep.delta;
    zeros.require_coverage({a - d, a + d, z.imag() - d, z.imag() + d});

    CertifiedValue sum{0.0, 0.0};
    for (const auto& zr : zeros.zeros) {
        const double dist = std::abs(z - zr.rho());
        const double u = zr.uncertainty();
        if (dist + u <= d) {
            rep.nearby.push_back(zr);
            const cplx inv = 1.0 / (z - zr.rho());
            if (!(dist > u)) throw IndeterminateError("z lies inside a zero's error box");
            const double r = u / (dist * (dist - u)) + 4.0 * kUnitRoundoff * std::abs(inv);
            sum = sum + CertifiedValue{static_cast<double>(zr.multiplicity) * inv, zr.multiplicity * r};
        } else if (dist - u <= d) {
            throw IndeterminateError("a zero box straddles the delta-circle");
        }
    }
    const CertifiedValue ld = logderiv(ev, z);
    const double t0 = std::abs(z.imag());
    std::vector<LocalBranch> branches;
    if (t0 >= kLocalLargeT) branches.push_back(LocalBranch::LargeT);
    if (t0 <= kLocalSmallT) branches.push_back(LocalBranch::SmallT);
    for (auto b : branches) {
        CertifiedValue v = ld - sum;
        if (b == LocalBranch::SmallT) {
            const cplx pole = 1.0 / (z - 1.0);
            v = v + CertifiedValue{pole, 4.0 * kUnitRoundoff * std::abs(pole)};
        }
        LocalBranchResult br{b, std::abs(v.value), v.radius, local_rhs(b, p, z), Outcome::Indeterminate};
        // The large-t display is strict.
        if (b == LocalBranch::LargeT) {
            br.outcome = br.lhs + br.radius < br.rhs ? Outcome::Pass : (br.lhs - br.radius >= br.rhs ? Outcome::Fail : Outcome::Indeterminate);
        } else {
            br.outcome = decide(BoundCase::ZSGENERAL, br.lhs, br.radius, br.rhs);
        }
        rep.branches.push_back(br);
    }
    rep.pass = !rep.branches.empty() &&
               std::all_of(rep.branches.begin(), rep.branches.end(), [](const auto& b) { return b.outcome == Outcome::Pass; });
    return rep;
}

/// Zero list certified complete on the delta-neighbourhood of z, for use with verify_logderiv_local.
template <ZetaEvaluator E>
ZeroList local_zero_search(const E& ev, cplx z, double tol = 1e-4) {
    const auto& p = ev.params();
    const double d = (z.real() - p.theta) / 3.0;
    const double m = 0.01 * d;
    Rectangle r{z.real() - d - m, z.real() + d + m, z.imag() - d - m, z.imag() + d + m};
    LocateOptions opt;
    opt.tol = tol;
    if (r.contains({1.0, 0.0})) {
        // Split around the pole: the winding there counts zeros minus one.
        ZeroList out;
        SampleMemo memo;
        auto f = [&ev](cplx s) { return ev.zeta(s); };
        const long w = wind_polygon(f, r.corners(), memo).winding + 1;
        if (w != 0) throw IndeterminateError("zeros near the pole cannot be isolated");
        out.certificates.push_back({r, 0});
        return out;
    }
    return locate_zeros(ev, r, opt);
}

}  // namespace beurling
