#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <string>
#include <variant>

#include "certified.hpp"
#include "euler_maclaurin.hpp"
#include "numsys.hpp"
#include "zeta.hpp"

namespace beurling {

/// Anything that produces certified zeta, zeta' and zeta - kappa/(s-1) for Re s > theta.
template <class E>
concept ZetaEvaluator = requires(const E& e, cplx s) {
    { e.zeta(s) } -> std::convertible_to<CertifiedValue>;
    { e.zeta_prime(s) } -> std::convertible_to<CertifiedValue>;
    { e.pole_subtracted(s) } -> std::convertible_to<CertifiedValue>;
    { e.params() } -> std::convertible_to<AxiomAParams>;
    { e.name() } -> std::convertible_to<std::string>;
};

template <ZetaEvaluator E>
CertifiedValue logderiv(const E& e, cplx s) {
    return divide(e.zeta_prime(s), e.zeta(s));
}

/// Evaluator using only the table and Axiom A. Partial sums are taken up to the X that
/// meets target_epsilon, capped at the table cutoff; the radius stays rigorous either way.
class AxiomAEvaluator {
public:
    AxiomAEvaluator(const ElementTable& table, AxiomAParams params, double target_epsilon = 1e-8, double max_x = 0.0)
        : table_(&table), params_(params), eps_(target_epsilon), max_x_(max_x > 0.0 ? std::min(max_x, table.cutoff_x()) : table.cutoff_x()) {
        params_.validate();
    }

    const AxiomAParams& params() const { return params_; }
    std::string name() const { return "axiom-a"; }
    const ElementTable& table() const { return *table_; }

    double x_for(cplx s, bool derivative) const {
        const double need = derivative ? std::max(zeta_required_x(params_, s, kTailShare * eps_), zeta_prime_required_x(params_, s, kTailShare * eps_))
                                       : zeta_required_x(params_, s, kTailShare * eps_);
        return std::min(need, max_x_);
    }

    CertifiedValue zeta(cplx s) const { return zeta_at(*table_, params_, s, x_for(s, false)); }
    CertifiedValue zeta_prime(cplx s) const { return zeta_prime_at(*table_, params_, s, x_for(s, true)); }
    CertifiedValue pole_subtracted(cplx s) const { return pole_subtracted_at(*table_, params_, s, x_for(s, false)); }

private:
    const ElementTable* table_;
    AxiomAParams params_;
    double eps_;
    double max_x_;
};

/// Euler-Maclaurin evaluator for the rational integers.
class RationalEMEvaluator {
public:
    explicit RationalEMEvaluator(AxiomAParams params) : params_(params) { params_.validate(); }

    const AxiomAParams& params() const { return params_; }
    std::string name() const { return "euler-maclaurin"; }

    CertifiedValue zeta(cplx s) const { return eval(s, false).value; }
    CertifiedValue zeta_prime(cplx s) const { return eval(s, false).derivative; }
    CertifiedValue pole_subtracted(cplx s) const { return eval(s, true).value; }

private:
    HurwitzResult eval(cplx s, bool subtract) const {
        detail::check_half_plane(params_, s);
        if (!subtract) detail::check_pole(s);
        const bool flip = s.imag() < 0.0;
        HurwitzResult r = hurwitz_certified(flip ? std::conj(s) : s, 1.0, 1e-15, subtract);
        const bool real = s.imag() == 0.0;
        r.value = detail::finish(r.value, flip, real);
        r.derivative = detail::finish(r.derivative, flip, real);
        return r;
    }
    AxiomAParams params_;
};

/// Dedekind zeta of Z[i] as zeta(s) L(s, chi_4), with L(s, chi_4) = 4^{-s} (zeta(s,1/4) - zeta(s,3/4)).
class GaussianEMEvaluator {
public:
    explicit GaussianEMEvaluator(AxiomAParams params) : params_(params) { params_.validate(); }

    const AxiomAParams& params() const { return params_; }
    std::string name() const { return "euler-maclaurin"; }

    CertifiedValue zeta(cplx s) const {
        const Parts p = parts(s);
        return p.z.value * p.l;
    }
    CertifiedValue zeta_prime(cplx s) const {
        const Parts p = parts(s);
        return p.z.derivative * p.l + p.z.value * p.dl;
    }
    CertifiedValue pole_subtracted(cplx s) const {
        detail::check_half_plane(params_, s);
        const CertifiedValue z = zeta(s);
        return z - pole_term(params_, s);
    }

private:
    struct Parts {
        HurwitzResult z;
        CertifiedValue l, dl;
    };
    Parts parts(cplx s) const {
        detail::check_half_plane(params_, s);
        detail::check_pole(s);
        const bool flip = s.imag() < 0.0;
        const cplx w = flip ? std::conj(s) : s;
        Parts p;
        p.z = hurwitz_certified(w, 1.0);
        const HurwitzResult h1 = hurwitz_certified(w, 0.25);
        const HurwitzResult h3 = hurwitz_certified(w, 0.75);
        const double log4 = std::log(4.0);
        const cplx f = pow_neg(log4, w);
        const CertifiedValue four{f, term_slack(log4, w) * std::abs(f)};
        const CertifiedValue diff = h1.value - h3.value;
        const CertifiedValue ddiff = h1.derivative - h3.derivative;
        p.l = four * diff;
        p.dl = four * ddiff - (log4 * (four * diff));
        const bool real = s.imag() == 0.0;
        p.z.value = detail::finish(p.z.value, flip, real);
        p.z.derivative = detail::finish(p.z.derivative, flip, real);
        p.l = detail::finish(p.l, flip, real);
        p.dl = detail::finish(p.dl, flip, real);
        return p;
    }
    AxiomAParams params_;
};

static_assert(ZetaEvaluator<AxiomAEvaluator>);
static_assert(ZetaEvaluator<RationalEMEvaluator>);
static_assert(ZetaEvaluator<GaussianEMEvaluator>);

/// Runtime choice among the shipped evaluators.
using AnyEvaluator = std::variant<AxiomAEvaluator, RationalEMEvaluator, GaussianEMEvaluator>;

enum class EvaluatorChoice { Auto, AxiomA, EulerMaclaurin };

/// Pick an evaluator for a system; Auto prefers Euler-Maclaurin where one exists.
inline AnyEvaluator make_evaluator(const PrimeSystem& system, const ElementTable& table, const AxiomAParams& params,
                                   EvaluatorChoice choice, double target_epsilon = 1e-8) {
    const bool has_em = system.kind == SystemKind::RationalIntegers || system.kind == SystemKind::GaussianIdeals;
    if (choice == EvaluatorChoice::EulerMaclaurin && !has_em) {
        throw DomainError(std::string("no Euler-Maclaurin evaluator for ") + to_string(system.kind));
    }
    if (choice == EvaluatorChoice::AxiomA || !has_em) return AxiomAEvaluator(table, params, target_epsilon);
    if (system.kind == SystemKind::RationalIntegers) return RationalEMEvaluator(params);
    return GaussianEMEvaluator(params);
}

}  // namespace beurling
