#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "contour.hpp"
#include "evaluator.hpp"
#include "numsys.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "zeros.hpp"

namespace beurling {

struct ExplicitFormulaReport {
    double x = 0.0;
    double T = 0.0;
    double psi_direct = 0.0;
    double main_term = 0.0;
    double zero_sum = 0.0;
    double deviation = 0.0;
    double envelope = 0.0;
    double implied_constant = 0.0;  // deviation / envelope
    bool on_jump = false;
    std::size_t zeros_used = 0;
};

namespace detail {

/// Real part of the path at height |gamma| (the vertical run covering that height).
inline double gamma_sigma_at(const GammaPath& g, double height) {
    const double h = std::abs(height);
    for (std::size_t j = 1; j < g.t_seq.size(); ++j) {
        if (h < g.t_seq[j]) return g.sigma_seq[j - 1];
    }
    throw DomainError("height beyond the built path");
}

inline void check_T(const GammaPath& g, double T) { (void)g.k_of(T); }

}  // namespace detail

/// Sum of x^rho/rho over zeros right of the path with |gamma| <= T, conjugates paired.
inline double zero_sum(const ZeroList& zl, const GammaPath& g, double x, double T, std::size_t* used = nullptr) {
    if (!(x > 1.0)) throw DomainError("x must exceed 1");
    detail::check_T(g, T);
    double smin = g.sigma_seq.front();
    for (std::size_t j = 0; j < g.k_of(T); ++j) smin = std::min(smin, g.sigma_seq[j]);
    zl.require_coverage({smin, 1.0, 0.0, T});
    const double lx = std::log(x);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& z : zl.zeros) {
        if (z.gamma < 0.0 || z.gamma > T) continue;
        const double sig = detail::gamma_sigma_at(g, z.gamma);
        const double hw = 0.5 * z.box.width();
        if (z.beta + hw <= sig) continue;
        if (z.beta - hw <= sig) throw IndeterminateError("zero box straddles the path");
        const double mag = std::exp(z.beta * lx);
        const double c = std::cos(z.gamma * lx), s = std::sin(z.gamma * lx);
        const double re = mag * (z.beta * c + z.gamma * s) / (z.beta * z.beta + z.gamma * z.gamma);
        sum += (z.gamma == 0.0 ? 1.0 : 2.0) * z.multiplicity * re;
        n += z.gamma == 0.0 ? 1 : 2;
    }
    if (used) *used = n;
    return sum;
}

inline double explicit_envelope(double b, double theta, double a_plus_kappa, double x) {
    const double bt = b - theta;
    const double inner = a_plus_kappa + std::log(x / bt);
    return (1.0 - theta) / (bt * bt * bt) * inner * inner * inner * std::pow(x, b);
}

inline ExplicitFormulaReport explicit_formula_compare(const ElementTable& table, const ZeroList& zl, const GammaPath& g,
                                                      double x, double T) {
    if (!(T >= 4.0 && T < x)) throw DomainError("need 4 <= T < x");
    if (x > table.cutoff_x()) throw DomainError("x beyond the element table");
    ExplicitFormulaReport r;
    r.x = x;
    r.T = T;
    r.psi_direct = psi_midpoint(table, x, &r.on_jump);
    r.main_term = x;
    r.zero_sum = zero_sum(zl, g, x, T, &r.zeros_used);
    r.deviation = std::abs(r.psi_direct - (x - r.zero_sum));
    r.envelope = explicit_envelope(g.b, g.theta, g.a_plus_kappa, x);
    r.implied_constant = r.deviation / r.envelope;
    return r;
}

struct PerronReport {
    double x = 0.0, T = 0.0, p = 0.0;
    double integral = 0.0;       // real part of (1/2 pi i) * contour integral
    double integral_imag = 0.0;  // vanishes up to quadrature error by symmetry
    double quad_error = 0.0;
    double zero_sum = 0.0;
    double estimate = 0.0;  // x - zero_sum + integral
    double psi = 0.0;
    double gap = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Closed path p - iT -> q - iT -> Gamma (upwards) -> q + iT -> p + iT.
inline std::vector<Segment> perron_path(const GammaPath& g, double T, double p) {
    const std::size_t k = g.k_of(T);
    const auto up = g.upper(k);
    const double q = g.sigma_seq[k - 1];
    std::vector<Segment> path;
    path.push_back({{p, -T}, {q, -T}});
    for (auto it = up.rbegin(); it != up.rend(); ++it) path.push_back({std::conj(it->to), std::conj(it->from)});
    for (const auto& s : up) path.push_back(s);
    path.push_back({{q, T}, {p, T}});
    return path;
}

template <ZetaEvaluator E>
PerronReport perron_check(const ElementTable& table, const E& ev, const ZeroList& zl, const GammaPath& g, double x, double T,
                          double p = 0.0) {
    if (p == 0.0) p = 1.0 + 1.0 / std::log(x);
    if (!(p > 1.0 && p < 2.0)) throw DomainError("need 1 < p < 2");
    if (!(T >= 4.0 && T < x)) throw DomainError("need 4 <= T < x");
    if (x > table.cutoff_x()) throw DomainError("x beyond the element table");
    {
        const auto& norms = table.distinct_norms();
        const std::size_t j = table.distinct_upper(x);
        if ((j > 0 && x - norms[j - 1] < 1e-3) || (j < norms.size() && norms[j] - x < 1e-3)) {
            throw DomainError("x lies within 1e-3 of an element norm");
        }
    }
    PerronReport r;
    r.x = x;
    r.T = T;
    r.p = p;
    const double lx = std::log(x);
    auto integrand = [&](cplx s) {
        const CertifiedValue ld = logderiv(ev, s);
        const cplx w = std::exp(s * lx) / s;
        return CertifiedValue{-ld.value * w, ld.radius * std::abs(w) * (1.0 + 8.0 * kUnitRoundoff)};
    };
    const double tol = 1e-4 * std::pow(x, g.b);
    cplx total = 0.0;
    for (const auto& seg : perron_path(g, T, p)) {
        QuadResult q;
        try {
            q = integrate_segment(integrand, seg.from, seg.to, tol);
        } catch (const BeurlingError& e) {
            throw IndeterminateError(std::string("integrand infeasible on segment [") + std::to_string(seg.from.real()) + "+" +
                                     std::to_string(seg.from.imag()) + "i, " + std::to_string(seg.to.real()) + "+" +
                                     std::to_string(seg.to.imag()) + "i]: " + e.what());
        }
        total += q.value;
        r.quad_error += q.error;
        r.evaluations += q.evaluations;
        r.converged = r.converged && q.converged;
    }
    const cplx I = total / cplx(0.0, 2.0 * std::numbers::pi);
    r.integral = I.real();
    r.integral_imag = I.imag();
    r.quad_error /= 2.0 * std::numbers::pi;
    r.zero_sum = zero_sum(zl, g, x, T);
    r.estimate = x - r.zero_sum + r.integral;
    r.psi = psi_midpoint(table, x);
    r.gap = std::abs(r.psi - r.estimate);
    return r;
}

struct ConvergenceStudy {
    std::vector<double> x_grid, T_grid;
    std::vector<ExplicitFormulaReport> cells;  // row-major: x outer, T inner

    const ExplicitFormulaReport& at(std::size_t ix, std::size_t iT) const { return cells[ix * T_grid.size() + iT]; }
    double rms_at(std::size_t iT) const {
        double s = 0.0;
        for (std::size_t ix = 0; ix < x_grid.size(); ++ix) s += at(ix, iT).deviation * at(ix, iT).deviation;
        return std::sqrt(s / static_cast<double>(x_grid.size()));
    }
};

inline ConvergenceStudy convergence_study(const ElementTable& table, const ZeroList& zl, const GammaPath& g,
                                          const std::vector<double>& x_grid, const std::vector<double>& T_grid, int jobs = 1) {
    ConvergenceStudy st;
    st.x_grid = x_grid;
    st.T_grid = T_grid;
    st.cells.resize(x_grid.size() * T_grid.size());
    parallel_for(st.cells.size(), jobs, [&](std::size_t i) {
        st.cells[i] = explicit_formula_compare(table, zl, g, x_grid[i / T_grid.size()], T_grid[i % T_grid.size()]);
    });
    return st;
}

/// The path heights t_k (k >= 1) lying in [lo, hi].
inline std::vector<double> path_heights(const GammaPath& g, double lo, double hi) {
    std::vector<double> out;
    for (std::size_t k = 1; k < g.t_seq.size(); ++k) {
        if (g.t_seq[k] >= lo && g.t_seq[k] <= hi) out.push_back(g.t_seq[k]);
    }
    return out;
}

}  // namespace beurling
