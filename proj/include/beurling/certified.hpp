#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace beurling {

using cplx = std::complex<double>;

/// Unit roundoff of binary64.
inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

/// Number of units in the last place charged to every summed term.
inline constexpr double kSlackUlpsPerTerm = 4.0;

/// A complex value together with a rigorous bound on its distance to the
/// exact quantity it stands for.
struct CertifiedValue {
    cplx value{0.0, 0.0};
    double radius{0.0};

    double upper() const { return std::abs(value) + radius; }
    double lower() const { return std::abs(value) - radius; }
    bool excludes_zero() const { return lower() > 0.0; }
    CertifiedValue conj() const { return {std::conj(value), radius}; }
};

inline CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
    const cplx v = a.value + b.value;
    return {v, a.radius + b.radius + 2.0 * kUnitRoundoff * std::abs(v)};
}

inline CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b) {
    const cplx v = a.value - b.value;
    return {v, a.radius + b.radius + 2.0 * kUnitRoundoff * std::abs(v)};
}

inline CertifiedValue operator*(const CertifiedValue& a, const CertifiedValue& b) {
    const cplx v = a.value * b.value;
    const double r = std::abs(a.value) * b.radius + std::abs(b.value) * a.radius + a.radius * b.radius;
    return {v, r + 4.0 * kUnitRoundoff * std::abs(v)};
}

inline CertifiedValue operator*(cplx exact, const CertifiedValue& b) {
    const cplx v = exact * b.value;
    return {v, std::abs(exact) * b.radius + 4.0 * kUnitRoundoff * std::abs(v)};
}

/// Quotient with a non-linearised radius; throws when the denominator
/// certificate cannot exclude zero.
CertifiedValue divide(const CertifiedValue& num, const CertifiedValue& den);

// ---------------------------------------------------------------------------
// Errors. Every analytic routine reports failure through one of these.

class BeurlingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

class InvalidSystemError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

class ResourceError : public BeurlingError {
public:
    ResourceError(const std::string& what, double count_bound)
        : BeurlingError(what), count_bound_(count_bound) {}
    double count_bound() const { return count_bound_; }

private:
    double count_bound_;
};

class AxiomAFailure : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

class PoleProximityError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

/// The requested accuracy would need elements beyond the table cutoff.
class InfeasibleError : public BeurlingError {
public:
    InfeasibleError(const std::string& what, double required_x)
        : BeurlingError(what), required_x_(required_x) {}
    double required_x() const { return required_x_; }

private:
    double required_x_;
};

/// A certified value whose disk contains zero was used as a divisor.
class IndeterminateError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

class BoundaryZeroError : public BeurlingError {
public:
    BoundaryZeroError(const std::string& what, cplx where) : BeurlingError(what), where_(where) {}
    cplx where() const { return where_; }

private:
    cplx where_;
};

class CoverageGapError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

class NoAdmissibleChoiceError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

class ConfigError : public BeurlingError {
public:
    using BeurlingError::BeurlingError;
};

inline CertifiedValue divide(const CertifiedValue& num, const CertifiedValue& den) {
    const double mag = std::abs(den.value);
    if (!(mag - den.radius > 0.0)) {
        throw IndeterminateError("denominator certificate does not exclude zero");
    }
    const cplx v = num.value / den.value;
    const double r = (num.radius * mag + std::abs(num.value) * den.radius) / (mag * (mag - den.radius));
    return {v, r + 8.0 * kUnitRoundoff * std::abs(v)};
}

// ---------------------------------------------------------------------------
// Numerical helpers shared by the evaluators.

/// Neumaier compensated accumulator for complex sums.
class CompensatedSum {
public:
    void add(cplx term) {
        add_part(term.real(), re_, re_c_);
        add_part(term.imag(), im_, im_c_);
    }
    cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double x, double& sum, double& comp) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

/// (e^w - 1) / w, accurate near w = 0.
inline cplx expm1_over(cplx w) {
    if (std::abs(w) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 40; ++k) {
            term *= w / static_cast<double>(k + 1);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(w) - 1.0) / w;
}

/// Integral of v e^{wv} over [0,1], i.e. (e^w (w-1) + 1) / w^2.
inline cplx moment1_exp(cplx w) {
    if (std::abs(w) < 0.5) {
        // sum_k w^k / (k! (k+2))
        cplx fact = 1.0, sum = 0.5;
        for (int k = 1; k < 40; ++k) {
            fact *= w / static_cast<double>(k);
            const cplx term = fact / static_cast<double>(k + 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(w) * (w - 1.0) + 1.0) / (w * w);
}

/// u^{-s} for u > 0 given log u, as exp(-sigma log u) (cos(t log u) - i sin(t log u)).
inline cplx pow_neg(double log_u, cplx s) {
    const double mag = std::exp(-s.real() * log_u);
    const double ph = s.imag() * log_u;
    return {mag * std::cos(ph), -mag * std::sin(ph)};
}

/// Relative rounding slack of one evaluated term u^{-s}.
inline double term_slack(double log_u, cplx s) {
    return kSlackUlpsPerTerm * kUnitRoundoff * (1.0 + std::abs(s) * log_u);
}

}  // namespace beurling
