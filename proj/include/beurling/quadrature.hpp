#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "certified.hpp"

namespace beurling {

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;  // Kronrod/Gauss difference plus integrated certificate radii
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7/15 on [-1,1]; nodes listed from the centre outwards.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
// Gauss weights for the even-indexed Kronrod nodes 0, 2, 4, 6.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

template <class F>
QuadResult gk15(F& f, cplx a, cplx b) {
    const cplx mid = 0.5 * (a + b);
    const cplx half = 0.5 * (b - a);
    const double jac = std::abs(half);
    QuadResult r;
    cplx k = 0.0, g = 0.0;
    double rad = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const int signs = i == 0 ? 1 : 2;
        for (int sgn = 0; sgn < signs; ++sgn) {
            const double x = sgn == 0 ? kKronrodNodes[i] : -kKronrodNodes[i];
            const CertifiedValue v = f(mid + half * x);
            ++r.evaluations;
            k += kKronrodWeights[i] * v.value;
            rad += kKronrodWeights[i] * v.radius;
            if (i % 2 == 0) g += kGaussWeights[i / 2] * v.value;
        }
    }
    r.value = half * k;
    r.error = jac * (std::abs(k - g) + rad);
    return r;
}

template <class F>
QuadResult adapt(F& f, cplx a, cplx b, double tol, int depth) {
    QuadResult whole = gk15(f, a, b);
    if (whole.error <= tol) return whole;
    if (depth <= 0) {
        whole.converged = false;
        return whole;
    }
    const cplx m = 0.5 * (a + b);
    QuadResult l = adapt(f, a, m, 0.5 * tol, depth - 1);
    QuadResult r = adapt(f, m, b, 0.5 * tol, depth - 1);
    QuadResult out;
    out.value = l.value + r.value;
    out.error = l.error + r.error;
    out.evaluations = whole.evaluations + l.evaluations + r.evaluations;
    out.converged = l.converged && r.converged;
    return out;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of a certified integrand f along the segment [a,b].
template <class F>
QuadResult integrate_segment(F&& f, cplx a, cplx b, double tol, int max_depth = 30) {
    if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    return detail::adapt(f, a, b, tol, max_depth);
}

}  // namespace beurling
