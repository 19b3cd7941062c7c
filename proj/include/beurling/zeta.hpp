#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "certified.hpp"
#include "numsys.hpp"

namespace beurling {

inline constexpr double kPoleExclusion = 1e-9;

struct EvalConfig {
    double cutoff_x = 0.0;  // 0 means the table cutoff
    double rounding_slack_per_term = kSlackUlpsPerTerm;
    double target_epsilon = 1e-6;
};

/// Incremental partial sums over the distinct-norm view of a table:
/// S = sum c n^{-s}, D = sum c log(n) n^{-s}, P = sum Lambda n^{-s}, with rounding slack.
class PartialSumCursor {
public:
    PartialSumCursor(const ElementTable& table, cplx s) : table_(&table), s_(s) {}

    void advance_to(double x) {
        if (x > table_->cutoff_x()) throw DomainError("X beyond table cutoff");
        const auto& xs = table_->distinct_norms();
        const auto& cs = table_->distinct_counts();
        const auto& ls = table_->distinct_logs();
        const auto& lam = table_->distinct_lambda();
        const double u4 = 4.0 * kUnitRoundoff;
        while (next_ < xs.size() && xs[next_] <= x) {
            const double L = ls[next_];
            const cplx e = pow_neg(L, s_);
            const double mag = std::abs(e);
            const double rel = term_slack(L, s_);
            const cplx t = cs[next_] * e;
            sum_.add(t);
            abs_ += cs[next_] * mag;
            slack_ += rel * cs[next_] * mag;
            const cplx dt = (cs[next_] * L) * e;
            dsum_.add(dt);
            dabs_ += cs[next_] * L * mag;
            dslack_ += (rel + u4) * cs[next_] * L * mag;
            if (lam[next_] != 0.0) {
                psum_.add(lam[next_] * e);
                pabs_ += lam[next_] * mag;
                pslack_ += (rel + u4) * lam[next_] * mag;
            }
            ++next_;
        }
        x_ = std::max(x_, x);
    }

    double x() const { return x_; }
    cplx s() const { return s_; }
    cplx sum() const { return sum_.value(); }
    cplx dsum() const { return dsum_.value(); }
    cplx psum() const { return psum_.value(); }
    double sum_slack() const { return slack_ + 4.0 * kUnitRoundoff * abs_; }
    double dsum_slack() const { return dslack_ + 4.0 * kUnitRoundoff * dabs_; }
    double psum_slack() const { return pslack_ + 4.0 * kUnitRoundoff * pabs_; }
    double abs_sum() const { return abs_; }

private:
    const ElementTable* table_;
    cplx s_;
    std::size_t next_ = 0;
    double x_ = 1.0;
    CompensatedSum sum_, dsum_, psum_;
    double abs_ = 0.0, dabs_ = 0.0, pabs_ = 0.0;
    double slack_ = 0.0, dslack_ = 0.0, pslack_ = 0.0;
};

/// Sum over elements with norm <= X of norm^{-s}.
inline cplx zeta_partial(const ElementTable& table, cplx s, double X) {
    if (X > table.cutoff_x()) throw DomainError("X beyond table cutoff");
    PartialSumCursor c(table, s);
    c.advance_to(X);
    return c.sum();
}

namespace detail {

inline void check_half_plane(const AxiomAParams& p, cplx s) {
    if (!(s.real() > p.theta)) throw DomainError("evaluation requires Re s > theta");
}

inline void check_pole(cplx s) {
    if (std::abs(s - 1.0) < kPoleExclusion) throw PoleProximityError("s lies inside the pole exclusion ball");
}

/// Normalise results at real s and restore conjugate symmetry.
inline CertifiedValue finish(CertifiedValue v, bool conjugated, bool real_axis) {
    if (real_axis) v.value = {v.value.real(), 0.0};
    return conjugated ? v.conj() : v;
}

}  // namespace detail

/// Tail bound for the remainder integral beyond X.
inline double zeta_tail_bound(const AxiomAParams& p, cplx s, double X) {
    const double c = s.real() - p.theta;
    return p.a_const * (std::abs(s) + c) / c * std::pow(X, -c);
}

/// Tail bound for the derivative of the remainder integral beyond X:
/// A X^{theta-sigma} (log X + 1/c + |s| (log X / c + 1/c^2)).
inline double zeta_prime_tail_bound(const AxiomAParams& p, cplx s, double X) {
    const double c = s.real() - p.theta;
    const double L = std::log(X);
    return p.a_const * std::pow(X, -c) * (L + 1.0 / c + std::abs(s) * (L / c + 1.0 / (c * c)));
}

/// Smallest X for which zeta_tail_bound <= eps.
inline double zeta_required_x(const AxiomAParams& p, cplx s, double eps) {
    const double c = s.real() - p.theta;
    return std::max(1.0, std::pow(p.a_const * (std::abs(s) + c) / (c * eps), 1.0 / c));
}

/// Smallest X (found by doubling then bisection) for which zeta_prime_tail_bound <= eps.
inline double zeta_prime_required_x(const AxiomAParams& p, cplx s, double eps) {
    double lo = 1.0, hi = 2.0;
    while (zeta_prime_tail_bound(p, s, hi) > eps) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (zeta_prime_tail_bound(p, s, mid) > eps ? lo : hi) = mid;
    }
    return hi;
}

/// The exact remainder integral over [1,X]: S_X(s) - kappa (X^{1-s} - 1)/(1-s).
inline CertifiedValue remainder_integral_from(const PartialSumCursor& cur, const AxiomAParams& p, double X) {
    const cplx s = cur.s();
    const double L = std::log(X);
    const cplx w = (1.0 - s) * L;
    const cplx main = p.kappa * L * expm1_over(w);
    const double main_slack = 8.0 * kUnitRoundoff * (1.0 + std::abs(w)) * std::abs(main);
    const cplx v = cur.sum() - main;
    return {v, cur.sum_slack() + main_slack + 2.0 * kUnitRoundoff * std::abs(v)};
}

/// Derivative of the remainder integral over [1,X]: -D_X(s) + kappa log^2 X * m1((1-s) log X).
inline CertifiedValue remainder_integral_prime_from(const PartialSumCursor& cur, const AxiomAParams& p, double X) {
    const cplx s = cur.s();
    const double L = std::log(X);
    const cplx w = (1.0 - s) * L;
    const cplx main = p.kappa * L * L * moment1_exp(w);
    const double main_slack = 8.0 * kUnitRoundoff * (2.0 + std::abs(w)) * std::abs(main);
    const cplx v = -cur.dsum() + main;
    return {v, cur.dsum_slack() + main_slack + 2.0 * kUnitRoundoff * std::abs(v)};
}

inline CertifiedValue remainder_integral(const ElementTable& table, const AxiomAParams& p, cplx s, double X) {
    PartialSumCursor cur(table, s);
    cur.advance_to(X);
    return remainder_integral_from(cur, p, X);
}

/// zeta(s) - kappa/(s-1) certified from the partial sums up to X.
inline CertifiedValue pole_subtracted_from(const PartialSumCursor& cur, const AxiomAParams& p, double X) {
    CertifiedValue g = remainder_integral_from(cur, p, X);
    g.radius += zeta_tail_bound(p, cur.s(), X);
    return g;
}

inline CertifiedValue pole_term(const AxiomAParams& p, cplx s) {
    const cplx v = p.kappa / (s - 1.0);
    return {v, 4.0 * kUnitRoundoff * std::abs(v)};
}

inline CertifiedValue pole_term_prime(const AxiomAParams& p, cplx s) {
    const cplx v = -p.kappa / ((s - 1.0) * (s - 1.0));
    return {v, 6.0 * kUnitRoundoff * std::abs(v)};
}

inline CertifiedValue zeta_from(const PartialSumCursor& cur, const AxiomAParams& p, double X) {
    return pole_term(p, cur.s()) + pole_subtracted_from(cur, p, X);
}

inline CertifiedValue zeta_prime_from(const PartialSumCursor& cur, const AxiomAParams& p, double X) {
    CertifiedValue g = remainder_integral_prime_from(cur, p, X);
    g.radius += zeta_prime_tail_bound(p, cur.s(), X);
    return pole_term_prime(p, cur.s()) + g;
}

/// Certified zeta(s) and zeta'(s) using partial sums up to a fixed X (no accuracy target).
inline CertifiedValue zeta_at(const ElementTable& table, const AxiomAParams& p, cplx s, double X) {
    detail::check_half_plane(p, s);
    detail::check_pole(s);
    const bool flip = s.imag() < 0.0;
    const cplx z = flip ? std::conj(s) : s;
    PartialSumCursor cur(table, z);
    cur.advance_to(X);
    return detail::finish(zeta_from(cur, p, X), flip, s.imag() == 0.0);
}

inline CertifiedValue zeta_prime_at(const ElementTable& table, const AxiomAParams& p, cplx s, double X) {
    detail::check_half_plane(p, s);
    detail::check_pole(s);
    const bool flip = s.imag() < 0.0;
    const cplx z = flip ? std::conj(s) : s;
    PartialSumCursor cur(table, z);
    cur.advance_to(X);
    return detail::finish(zeta_prime_from(cur, p, X), flip, s.imag() == 0.0);
}

inline CertifiedValue pole_subtracted_at(const ElementTable& table, const AxiomAParams& p, cplx s, double X) {
    detail::check_half_plane(p, s);
    const bool flip = s.imag() < 0.0;
    const cplx z = flip ? std::conj(s) : s;
    PartialSumCursor cur(table, z);
    cur.advance_to(X);
    return detail::finish(pole_subtracted_from(cur, p, X), flip, s.imag() == 0.0);
}

inline double checked_required_x(const ElementTable& table, double required) {
    if (required > table.cutoff_x()) {
        throw InfeasibleError("requested accuracy needs elements beyond the table cutoff", required);
    }
    return required;
}

/// Share of the requested radius given to the analytic tail; the rest absorbs rounding slack.
inline constexpr double kTailShare = 0.999;

inline CertifiedValue zeta_certified(const ElementTable& table, const AxiomAParams& p, cplx s, double epsilon) {
    detail::check_half_plane(p, s);
    detail::check_pole(s);
    const double X = checked_required_x(table, zeta_required_x(p, s, kTailShare * epsilon));
    return zeta_at(table, p, s, X);
}

inline CertifiedValue zeta_prime_certified(const ElementTable& table, const AxiomAParams& p, cplx s, double epsilon) {
    detail::check_half_plane(p, s);
    detail::check_pole(s);
    const double X = checked_required_x(table, zeta_prime_required_x(p, s, kTailShare * epsilon));
    return zeta_prime_at(table, p, s, X);
}

/// zeta'/zeta as a certified quotient; both factors evaluated to the requested tail accuracy.
inline CertifiedValue logderiv_certified(const ElementTable& table, const AxiomAParams& p, cplx s, double epsilon) {
    detail::check_half_plane(p, s);
    detail::check_pole(s);
    const double X = checked_required_x(
        table, std::max(zeta_required_x(p, s, kTailShare * epsilon), zeta_prime_required_x(p, s, kTailShare * epsilon)));
    const bool flip = s.imag() < 0.0;
    const cplx z = flip ? std::conj(s) : s;
    PartialSumCursor cur(table, z);
    cur.advance_to(X);
    return detail::finish(divide(zeta_prime_from(cur, p, X), zeta_from(cur, p, X)), flip, s.imag() == 0.0);
}

/// Bound for the tail beyond X of sum Lambda(g) |g|^{-sigma}, valid for sigma > 1.
inline double logderiv_series_tail(const AxiomAParams& p, cplx s, double X) {
    const double sigma = s.real();
    if (!(sigma > 1.0)) throw DomainError("series tail requires Re s > 1");
    const double L = std::log(X);
    const double e = sigma - 1.0;
    const double c = sigma - p.theta;
    const double main = p.kappa * std::pow(X, -e) * (L / e + 1.0 / (e * e));
    const double rem = p.a_const * std::pow(X, -c) * (L + 1.0 / c + sigma * (L / c + 1.0 / (c * c)));
    return main + rem;
}

/// zeta'/zeta = -sum Lambda(g) |g|^{-s} over norms <= X, with the series tail folded into the radius.
inline CertifiedValue logderiv_series(const ElementTable& table, const AxiomAParams& p, cplx s, double X) {
    const double tail = logderiv_series_tail(p, s, X);
    const bool flip = s.imag() < 0.0;
    const cplx z = flip ? std::conj(s) : s;
    PartialSumCursor cur(table, z);
    cur.advance_to(X);
    CertifiedValue v{-cur.psum(), cur.psum_slack() + tail};
    return detail::finish(v, flip, s.imag() == 0.0);
}

struct EulerProductReport {
    cplx series;
    cplx product;
    double gap = 0.0;
    double series_tail = 0.0;   // bound on |zeta(s) - series|
    double product_tail = 0.0;  // bound on |zeta(s) - product|
    double slack = 0.0;
    bool consistent = false;
};

inline EulerProductReport euler_product_check(const ElementTable& table, const PrimeSystem& system, cplx s, double X) {
    const double sigma = s.real();
    if (!(sigma > 1.0)) throw DomainError("Euler product check requires Re s > 1");
    if (X > table.cutoff_x()) throw DomainError("X beyond table cutoff");
    EulerProductReport rep;
    PartialSumCursor cur(table, s);
    cur.advance_to(X);
    rep.series = cur.sum();
    rep.slack = cur.sum_slack();

    cplx prod = 1.0;
    double prod_rel = 0.0;
    const auto primes = expanded_primes(system, X);
    for (double pn : primes) {
        const double L = std::log(pn);
        prod /= (1.0 - pow_neg(L, s));
        prod_rel += term_slack(L, s) + 6.0 * kUnitRoundoff;
    }
    rep.product = prod;
    rep.slack += prod_rel * std::abs(prod);
    if (s.imag() == 0.0) {
        rep.series = {rep.series.real(), 0.0};
        rep.product = {rep.product.real(), 0.0};
    }
    rep.gap = std::abs(rep.series - rep.product);

    if (system.axiom_a) {
        const auto& p = *system.axiom_a;
        const double c = sigma - p.theta;
        const double tail_sigma = p.kappa * std::pow(X, 1.0 - sigma) / (sigma - 1.0) + p.a_const * (sigma + c) / c * std::pow(X, -c);
        rep.series_tail = tail_sigma;
        rep.product_tail = std::abs(prod) * std::expm1(tail_sigma);
    } else {
        rep.series_tail = rep.product_tail = std::numeric_limits<double>::infinity();
    }
    rep.consistent = rep.gap <= rep.series_tail + rep.product_tail + rep.slack;
    return rep;
}

}  // namespace beurling
