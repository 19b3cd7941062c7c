#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "certified.hpp"
#include "evaluator.hpp"
#include "zeros.hpp"

namespace beurling {

struct TranslateSet {
    std::vector<double> shifts;  // ascending, symmetric about 0
    double B = 0.0;
    int n = 1;

    static TranslateSet make(std::vector<double> shifts) {
        if (shifts.empty()) throw DomainError("translate set must be nonempty");
        std::sort(shifts.begin(), shifts.end());
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            if (shifts[i] != -shifts[shifts.size() - 1 - i]) throw DomainError("translate set must be symmetric about 0");
        }
        TranslateSet ts;
        ts.B = std::max(std::abs(shifts.front()), std::abs(shifts.back()));
        ts.n = static_cast<int>(shifts.size());
        ts.shifts = std::move(shifts);
        return ts;
    }
};

inline double distance_budget(double b, double theta, int n, double B, double a_plus_kappa, double t) {
    if (!(theta < b && b < 1.0) || n < 1 || !(B >= 0.0) || !(a_plus_kappa > 0.0)) {
        throw DomainError("distance budget parameters out of range");
    }
    const double bt = b - theta;
    return bt * bt /
           (4.0 * n * (4.4 * std::log(std::abs(t) + B + 5.0) + 51.0 * std::log(a_plus_kappa) + 31.0 * std::log(1.0 / bt) + 113.0));
}

struct DistanceBudget {
    double b = 0.45, theta = 0.4;
    int n = 1;
    double B = 0.0;
    double a_plus_kappa = 2.0;
    double operator()(double t) const { return distance_budget(b, theta, n, B, a_plus_kappa, t); }
};

struct Segment {
    cplx from, to;
};

struct GammaPath {
    double b = 0.45, theta = 0.4;
    std::vector<double> t_seq;      // t_0 = 0, t_1, ..., t_K
    std::vector<double> sigma_seq;  // sigma_0, ..., sigma_K
    double height = 0.0;            // t_K
    TranslateSet translates;
    double a_plus_kappa = 2.0;

    double a() const { return 0.5 * (b + theta); }
    DistanceBudget budget() const { return {b, theta, translates.n, translates.B, a_plus_kappa}; }
    std::size_t k_of(double T) const {
        for (std::size_t k = 1; k < t_seq.size(); ++k) {
            if (t_seq[k] == T) return k;
        }
        throw DomainError("height is not one of the path's t_k");
    }

    /// Upper half of the broken line, from sigma_0 on the real axis up to height t_k (k >= 1).
    std::vector<Segment> upper(std::size_t k) const {
        std::vector<Segment> out;
        for (std::size_t j = 1; j <= k; ++j) {
            out.push_back({{sigma_seq[j - 1], t_seq[j - 1]}, {sigma_seq[j - 1], t_seq[j]}});
            if (j < k) out.push_back({{sigma_seq[j - 1], t_seq[j]}, {sigma_seq[j], t_seq[j]}});
        }
        return out;
    }
    /// Full upper half including the final horizontal piece to sigma_K.
    std::vector<Segment> upper_full() const {
        auto out = upper(t_seq.size() - 1);
        const std::size_t K = t_seq.size() - 1;
        out.push_back({{sigma_seq[K - 1], t_seq[K]}, {sigma_seq[K], t_seq[K]}});
        return out;
    }
    /// Horizontal segments H_k = [a + i t_k, 2 + i t_k], k = 1..K.
    std::vector<Segment> horizontals() const {
        std::vector<Segment> out;
        for (std::size_t k = 1; k < t_seq.size(); ++k) out.push_back({{a(), t_seq[k]}, {2.0, t_seq[k]}});
        return out;
    }
};

struct Interval {
    double lo, hi;
};

namespace detail {

/// Midpoint of the largest gap of [lo,hi] left by the union of the prohibited intervals.
inline double largest_gap_midpoint(double lo, double hi, std::vector<Interval> bad, const std::string& what) {
    if (!(lo < hi)) throw NoAdmissibleChoiceError(what + ": empty window");
    std::sort(bad.begin(), bad.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    double best_len = -1.0, best_mid = 0.0;
    double cursor = lo;
    auto consider = [&](double a, double b) {
        if (b - a > best_len) {
            best_len = b - a;
            best_mid = 0.5 * (a + b);
        }
    };
    for (const auto& iv : bad) {
        if (iv.hi < cursor) continue;
        if (iv.lo > hi) break;
        if (iv.lo > cursor) consider(cursor, std::min(iv.lo, hi));
        cursor = std::max(cursor, iv.hi);
        if (cursor >= hi) break;
    }
    if (cursor < hi) consider(cursor, hi);
    if (!(best_len > 0.0)) {
        std::string msg = what + ": every point of [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is blocked by";
        for (const auto& iv : bad) {
            if (iv.hi >= lo && iv.lo <= hi) msg += " [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]";
        }
        throw NoAdmissibleChoiceError(msg);
    }
    return best_mid;
}

struct Translated {
    cplx where;
    double half_w, half_h;  // error box half-extents
};

inline std::vector<Translated> translated_zeros(const ZeroList& zl, const TranslateSet& ts, double min_beta) {
    std::vector<Translated> out;
    for (const auto& z : zl.zeros) {
        if (z.beta + 0.5 * z.box.width() < min_beta) continue;
        for (double a : ts.shifts) out.push_back({{z.beta, z.gamma + a}, 0.5 * z.box.width(), 0.5 * z.box.height()});
    }
    return out;
}

}  // namespace detail

/// The zero-avoiding broken line, built inductively up to height t_K >= t_max.
inline GammaPath build_gamma(const ZeroList& zl, const AxiomAParams& params, double b, const TranslateSet& ts, double t_max) {
    const double th = params.theta;
    if (!(th < b && b < 1.0)) throw DomainError("need theta < b < 1");
    GammaPath g;
    g.b = b;
    g.theta = th;
    g.translates = ts;
    g.a_plus_kappa = params.a_const + params.kappa;
    const DistanceBudget d = g.budget();
    const double a = g.a();
    const double p = 0.51 * th + 0.49 * b;
    zl.require_coverage({p, 1.0, 0.0, t_max + ts.B + 5.0});
    const auto tz = detail::translated_zeros(zl, ts, p);

    auto t_prohibited = [&](double dd) {
        std::vector<Interval> bad;
        for (const auto& q : tz) bad.push_back({q.where.imag() - dd - q.half_h, q.where.imag() + dd + q.half_h});
        for (double al : ts.shifts) bad.push_back({al - dd, al + dd});  // |t + alpha| < d and poles 1 + i alpha
        return bad;
    };

    g.t_seq.push_back(0.0);
    {
        const double dd = d(4.0);
        g.t_seq.push_back(detail::largest_gap_midpoint(4.0 + dd, 5.0 - dd, t_prohibited(dd), "t_1"));
    }
    while (g.t_seq.back() < t_max) {
        const double prev = g.t_seq.back();
        const double dd = d(prev + 1.0);
        g.t_seq.push_back(detail::largest_gap_midpoint(prev + 1.0 + dd, prev + 2.0 - dd, t_prohibited(dd),
                                                       "t_" + std::to_string(g.t_seq.size())));
    }
    g.height = g.t_seq.back();

    const std::size_t K = g.t_seq.size() - 1;
    for (std::size_t k = 0; k <= K; ++k) {
        const double lo = k == 0 ? -g.t_seq[1] : g.t_seq[k];
        const double hi = k == K ? g.t_seq[K] + 2.0 : g.t_seq[k + 1];
        const double dd = d(k == 0 ? 0.0 : lo);
        std::vector<Interval> bad;
        for (const auto& q : tz) {
            const double h = q.where.imag();
            if (h + q.half_h >= lo - dd && h - q.half_h <= hi + dd) {
                bad.push_back({q.where.real() - dd - q.half_w, q.where.real() + dd + q.half_w});
            }
        }
        for (double al : ts.shifts) {
            if (al >= lo - dd && al <= hi + dd) bad.push_back({1.0 - dd, 1.0 + dd});
        }
        g.sigma_seq.push_back(detail::largest_gap_midpoint(a, b - dd, bad, "sigma_" + std::to_string(k)));
    }
    return g;
}

inline double point_segment_distance(cplx q, const Segment& s) {
    const cplx d = s.to - s.from;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(q - s.from);
    double u = ((q - s.from).real() * d.real() + (q - s.from).imag() * d.imag()) / len2;
    u = std::clamp(u, 0.0, 1.0);
    return std::abs(q - (s.from + u * d));
}

/// Smallest |Im s| over the segment.
inline double min_abs_height(const Segment& s) {
    const double y0 = s.from.imag(), y1 = s.to.imag();
    if ((y0 <= 0.0 && y1 >= 0.0) || (y1 <= 0.0 && y0 >= 0.0)) return 0.0;
    return std::min(std::abs(y0), std::abs(y1));
}

struct SeparationReport {
    double min_ratio = std::numeric_limits<double>::infinity();       // over translated zeros
    double min_pole_ratio = std::numeric_limits<double>::infinity();  // over translated poles
    cplx worst_point;
    std::size_t segments = 0;
    std::vector<cplx> samples;  // reporting only
    bool pass = false;
};

/// Exact separation check of Gamma (both halves) and every H_k against translated zeros and poles.
inline SeparationReport verify_separation(const GammaPath& g, const ZeroList& zl, const TranslateSet& ts, double sample_spacing = 0.5) {
    zl.require_coverage({0.51 * g.theta + 0.49 * g.b, 1.0, 0.0, g.height + ts.B + 2.0});
    SeparationReport rep;
    const DistanceBudget d = g.budget();
    std::vector<Segment> segs = g.upper_full();
    for (const auto& h : g.horizontals()) segs.push_back(h);
    const std::size_t n_up = segs.size();
    for (std::size_t i = 0; i < n_up; ++i) segs.push_back({std::conj(segs[i].from), std::conj(segs[i].to)});
    rep.segments = segs.size();
    const auto tz = detail::translated_zeros(zl, ts, -std::numeric_limits<double>::infinity());
    for (const auto& s : segs) {
        const double dd = d(min_abs_height(s));
        for (const auto& q : tz) {
            const double dist = point_segment_distance(q.where, s) - std::hypot(q.half_w, q.half_h);
            const double r = dist / dd;
            if (r < rep.min_ratio) {
                rep.min_ratio = r;
                rep.worst_point = q.where;
            }
        }
        for (double al : ts.shifts) {
            rep.min_pole_ratio = std::min(rep.min_pole_ratio, point_segment_distance({1.0, al}, s) / dd);
        }
        if (sample_spacing > 0.0) {
            const int m = std::max(1, static_cast<int>(std::ceil(std::abs(s.to - s.from) / sample_spacing)));
            for (int j = 0; j < m; ++j) rep.samples.push_back(s.from + (s.to - s.from) * (static_cast<double>(j) / m));
        }
    }
    rep.pass = rep.min_ratio >= 1.0 && rep.min_pole_ratio >= 1.0;
    return rep;
}

struct GammaLogDerivSample {
    cplx s;
    double alpha = 0.0;
    double lhs = 0.0, radius = 0.0, rhs = 0.0;
    Outcome outcome = Outcome::Indeterminate;
    std::string reason;
};

struct GammaLogDerivReport {
    std::size_t points = 0, passes = 0, indeterminates = 0, failures = 0;
    std::vector<GammaLogDerivSample> samples;
};

inline double gamma_logderiv_rhs(const GammaPath& g, const AxiomAParams& p, double t) {
    const double bt = g.b - g.theta;
    const double inner = 6.0 * std::log(std::abs(t) + g.translates.B + 5.0) + 60.0 * std::log(p.a_const + p.kappa) +
                         40.0 * std::log(1.0 / bt) + 140.0;
    return g.translates.n * (1.0 - p.theta) / (bt * bt * bt) * inner * inner;
}

/// Points spread evenly by arc length over Gamma_+ and the H_k.
inline std::vector<cplx> gamma_sample_points(const GammaPath& g, std::size_t count) {
    std::vector<Segment> segs = g.upper_full();
    for (const auto& h : g.horizontals()) segs.push_back(h);
    double total = 0.0;
    for (const auto& s : segs) total += std::abs(s.to - s.from);
    std::vector<cplx> out;
    if (count == 0) return out;
    const double step = total / static_cast<double>(count);
    double along = 0.5 * step, offset = 0.0;
    for (const auto& s : segs) {
        const double len = std::abs(s.to - s.from);
        while (along <= offset + len && out.size() < count) {
            out.push_back(s.from + (s.to - s.from) * ((along - offset) / len));
            along += step;
        }
        offset += len;
    }
    return out;
}

template <ZetaEvaluator E>
GammaLogDerivReport verify_logderiv_on_gamma(const E& ev, const GammaPath& g, const TranslateSet& ts, std::size_t samples) {
    GammaLogDerivReport rep;
    const auto& p = ev.params();
    for (const cplx s : gamma_sample_points(g, samples)) {
        for (double al : ts.shifts) {
            GammaLogDerivSample smp;
            smp.s = s;
            smp.alpha = al;
            smp.rhs = gamma_logderiv_rhs(g, p, s.imag());
            try {
                const CertifiedValue v = logderiv(ev, s + cplx(0.0, al));
                smp.lhs = std::abs(v.value);
                smp.radius = v.radius;
                smp.outcome = decide(BoundCase::ZSGENERAL, smp.lhs, smp.radius, smp.rhs);
            } catch (const BeurlingError& e) {
                smp.reason = e.what();
            }
            ++rep.points;
            switch (smp.outcome) {
                case Outcome::Pass: ++rep.passes; break;
                case Outcome::Fail: ++rep.failures; break;
                case Outcome::Indeterminate: ++rep.indeterminates; break;
            }
            rep.samples.push_back(smp);
        }
    }
    return rep;
}

}  // namespace beurling
