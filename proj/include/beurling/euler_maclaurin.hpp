#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "certified.hpp"

namespace beurling {

namespace detail {

/// B_{2k}/(2k)! for k = 1..kMaxBernoulli, via (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
inline constexpr int kMaxBernoulli = 60;

inline const std::array<double, kMaxBernoulli + 1>& bernoulli_scaled() {
    static const std::array<double, kMaxBernoulli + 1> table = [] {
        std::array<double, kMaxBernoulli + 1> b{};
        const double two_pi = 2.0 * std::numbers::pi;
        for (int k = 1; k <= kMaxBernoulli; ++k) {
            const int m = 2 * k;
            long double z;
            if (k == 1) {
                z = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L;
            } else if (k == 2) {
                const long double p2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double>;
                z = p2 * p2 / 90.0L;
            } else {
                z = 0.0L;
                const int n_max = 200;
                for (int n = n_max; n >= 1; --n) z += std::pow(static_cast<long double>(n), -m);
                z += std::pow(static_cast<long double>(n_max) + 0.5L, 1 - m) / (m - 1);
            }
            const double mag = static_cast<double>(2.0L * z / std::pow(static_cast<long double>(two_pi), m));
            b[k] = (k % 2 == 1) ? mag : -mag;
        }
        return b;
    }();
    return table;
}

/// Upper bound for zeta(m), m >= 2.
inline double zeta_upper(int m) { return 1.0 + std::pow(2.0, -m) + std::pow(2.0, 1 - m) / (m - 1); }

}  // namespace detail

struct HurwitzResult {
    CertifiedValue value;
    CertifiedValue derivative;
};

/// Certified Hurwitz zeta(s, a) and its s-derivative for 0 < a <= 1 by Euler-Maclaurin
/// summation with an explicit Bernoulli remainder. With pole_subtracted set, the
/// term 1/(s-1) is removed analytically (value and derivative).
inline HurwitzResult hurwitz_certified(cplx s, double a, double rel_target = 1e-15, bool pole_subtracted = false) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("Hurwitz parameter must lie in (0,1]");
    if (!pole_subtracted && std::abs(s - 1.0) < 1e-9) throw PoleProximityError("s lies inside the pole exclusion ball");
    const double u = kUnitRoundoff;
    const auto& bern = detail::bernoulli_scaled();
    const double sigma = s.real();
    int N = 10 + static_cast<int>(std::ceil(std::abs(s) / std::numbers::pi));
    if (sigma < 0.0) N += static_cast<int>(std::ceil(-sigma));

    for (int attempt = 0; attempt < 12; ++attempt, N *= 2) {
        CompensatedSum val, der;
        double slack = 0.0, dslack = 0.0, abs_sum = 0.0, dabs_sum = 0.0;
        for (int n = 0; n < N; ++n) {
            const double L = std::log(n + a);
            const cplx e = pow_neg(L, s);
            const double m = std::abs(e);
            val.add(e);
            der.add(-L * e);
            slack += term_slack(L, s) * m;
            dslack += (term_slack(L, s) + 2.0 * u) * L * m;
            abs_sum += m;
            dabs_sum += L * m;
        }
        const double Na = N + a;
        const double L = std::log(Na);
        const cplx e = pow_neg(L, s);  // (N+a)^{-s}
        const double em = std::abs(e);
        const double rel = term_slack(L, s) + 8.0 * u;

        // (N+a)^{1-s}/(s-1) and its derivative.
        if (pole_subtracted) {
            // [(N+a)^{1-s} - 1]/(s-1) = -L phi((1-s)L); derivative L^2 m1((1-s)L).
            const cplx w = (1.0 - s) * L;
            const cplx t0 = -L * expm1_over(w);
            const cplx t1 = L * L * moment1_exp(w);
            val.add(t0);
            der.add(t1);
            slack += 8.0 * u * (1.0 + std::abs(w)) * std::abs(t0);
            dslack += 8.0 * u * (2.0 + std::abs(w)) * std::abs(t1);
            abs_sum += std::abs(t0);
            dabs_sum += std::abs(t1);
        } else {
            const cplx inv = 1.0 / (s - 1.0);
            const cplx t0 = Na * e * inv;
            const cplx t1 = -L * t0 - t0 * inv;
            val.add(t0);
            der.add(t1);
            slack += rel * std::abs(t0);
            dslack += (rel + 4.0 * u) * std::abs(t1);
            abs_sum += std::abs(t0);
            dabs_sum += std::abs(t1);
        }
        val.add(0.5 * e);
        der.add(-0.5 * L * e);
        slack += rel * 0.5 * em;
        dslack += (rel + 2.0 * u) * 0.5 * L * em;
        abs_sum += 0.5 * em;
        dabs_sum += 0.5 * L * em;

        // Bernoulli terms: B_{2k}/(2k)! (s)_{2k-1} (N+a)^{-s-2k+1}.
        cplx P = s, dP = 1.0;  // (s)_1 and derivative
        cplx pw = e / Na;      // (N+a)^{-s-1}
        double remainder = 0.0, dremainder = 0.0;
        bool done = false;
        for (int k = 1; k <= detail::kMaxBernoulli; ++k) {
            const cplx term = bern[k] * P * pw;
            const cplx dterm = bern[k] * (dP * pw - L * P * pw);
            const double tr = (term_slack(L, s) + 8.0 * u * (2 * k + 1) + 1e-15) * std::abs(term);
            val.add(term);
            der.add(dterm);
            slack += tr;
            dslack += (term_slack(L, s) + 8.0 * u * (2 * k + 2) + 1e-15) * std::abs(dterm);
            abs_sum += std::abs(term);
            dabs_sum += std::abs(dterm);
            // Advance to (s)_{2k+1}.
            cplx P1 = P * (s + static_cast<double>(2 * k - 1));
            cplx dP1 = dP * (s + static_cast<double>(2 * k - 1)) + P;
            cplx P2 = P1 * (s + static_cast<double>(2 * k));
            cplx dP2 = dP1 * (s + static_cast<double>(2 * k)) + P1;
            const int M = k;
            const double sp = sigma + 2.0 * M;
            if (sp > 0.0) {
                const double c = 2.0 * detail::zeta_upper(2 * M + 1) / std::pow(2.0 * std::numbers::pi, 2 * M + 1);
                const double decay = std::pow(Na, -sp);
                remainder = c * std::abs(P2) * decay / sp;
                dremainder = c * (std::abs(dP2) * decay / sp + std::abs(P2) * decay * (L / sp + 1.0 / (sp * sp)));
                const double scale = std::max(std::abs(val.value()), 1.0);
                if (remainder <= rel_target * scale && dremainder <= rel_target * std::max(std::abs(der.value()), 1.0)) {
                    done = true;
                    break;
                }
            }
            P = P2;
            dP = dP2;
            pw /= (Na * Na);
        }
        if (!done && attempt < 11) continue;
        HurwitzResult out;
        const cplx v = val.value(), d = der.value();
        out.value = {v, remainder + slack + 4.0 * u * abs_sum};
        out.derivative = {d, dremainder + dslack + 4.0 * u * dabs_sum};
        return out;
    }
    throw InfeasibleError("Euler-Maclaurin did not converge", 0.0);
}

}  // namespace beurling
