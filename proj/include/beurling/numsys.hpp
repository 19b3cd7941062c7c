#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "certified.hpp"

namespace beurling {

enum class SystemKind { RationalIntegers, GaussianIdeals, RandomBeurling, ExplicitList };
enum class Provenance { Declared, Fitted };

inline const char* to_string(SystemKind k) {
    switch (k) {
        case SystemKind::RationalIntegers: return "rational-integers";
        case SystemKind::GaussianIdeals: return "gaussian-ideals";
        case SystemKind::RandomBeurling: return "random-beurling";
        case SystemKind::ExplicitList: return "explicit-list";
    }
    return "?";
}

inline const char* to_string(Provenance p) { return p == Provenance::Declared ? "declared" : "fitted"; }

struct AxiomAParams {
    double kappa = 1.0;
    double theta = 0.05;
    double a_const = 1.0;
    Provenance provenance = Provenance::Declared;

    void validate() const {
        if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be > 0");
        if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
        if (!(a_const > 0.0) || !std::isfinite(a_const)) throw DomainError("a_const must be > 0");
    }
};

/// Margin applied to empirically fitted A before any bound is checked.
inline constexpr double kFitMargin = 0.05;

/// Parameters to use in inequality checks: fitted A is inflated by the fit margin.
inline AxiomAParams effective(const AxiomAParams& p) {
    AxiomAParams q = p;
    if (p.provenance == Provenance::Fitted) q.a_const = p.a_const * (1.0 + kFitMargin);
    return q;
}

struct PrimeNorm {
    double norm;
    int multiplicity;
};

struct PrimeSystem {
    SystemKind kind = SystemKind::RationalIntegers;
    std::vector<PrimeNorm> primes;  // ascending; complete up to prime_cutoff
    double prime_cutoff = 0.0;
    std::uint64_t seed = 0;
    std::optional<AxiomAParams> axiom_a;

    const AxiomAParams& params() const {
        if (!axiom_a) throw AxiomAFailure(std::string(to_string(kind)) + " system carries no Axiom-A parameters");
        return *axiom_a;
    }
};

struct SystemSpec {
    SystemKind kind = SystemKind::RationalIntegers;
    double theta = 0.05;
    std::uint64_t seed = 0;
    double cutoff = 1e5;  // prime range for random systems, fitting range for fitted ones
    std::vector<double> norms;  // explicit-list only
    std::optional<double> kappa;
    std::optional<double> a_const;
};

/// Element norms with von Mangoldt weights, plus a compressed distinct-norm view.
class ElementTable {
public:
    ElementTable() = default;
    ElementTable(double cutoff, std::vector<double> norms, std::vector<double> lambda);

    double cutoff_x() const { return cutoff_; }
    std::size_t size() const { return norms_.size(); }
    const std::vector<double>& norms() const { return norms_; }
    const std::vector<double>& lambda() const { return lambda_; }

    // Distinct-norm view: norm, multiplicity, summed weight, log norm,
    // cumulative count and cumulative psi through this norm.
    std::size_t distinct_size() const { return dnorm_.size(); }
    const std::vector<double>& distinct_norms() const { return dnorm_; }
    const std::vector<double>& distinct_counts() const { return dcount_; }
    const std::vector<double>& distinct_lambda() const { return dlambda_; }
    const std::vector<double>& distinct_logs() const { return dlog_; }
    const std::vector<double>& cumulative_counts() const { return cum_count_; }
    const std::vector<double>& cumulative_psi() const { return cum_psi_; }

    /// Index one past the last distinct norm <= x.
    std::size_t distinct_upper(double x) const {
        return static_cast<std::size_t>(std::upper_bound(dnorm_.begin(), dnorm_.end(), x) - dnorm_.begin());
    }
    /// Index of the first distinct norm >= x.
    std::size_t distinct_lower(double x) const {
        return static_cast<std::size_t>(std::lower_bound(dnorm_.begin(), dnorm_.end(), x) - dnorm_.begin());
    }

private:
    double cutoff_ = 1.0;
    std::vector<double> norms_, lambda_;
    std::vector<double> dnorm_, dcount_, dlambda_, dlog_, cum_count_, cum_psi_;
};

inline ElementTable::ElementTable(double cutoff, std::vector<double> norms, std::vector<double> lambda)
    : cutoff_(cutoff), norms_(std::move(norms)), lambda_(std::move(lambda)) {
    double count = 0.0;
    CompensatedSum psi;
    for (std::size_t i = 0; i < norms_.size(); ++i) {
        count += 1.0;
        psi.add(lambda_[i]);
        if (dnorm_.empty() || norms_[i] != dnorm_.back()) {
            dnorm_.push_back(norms_[i]);
            dcount_.push_back(1.0);
            dlambda_.push_back(lambda_[i]);
            dlog_.push_back(std::log(norms_[i]));
            cum_count_.push_back(count);
            cum_psi_.push_back(psi.value().real());
        } else {
            dcount_.back() += 1.0;
            dlambda_.back() += lambda_[i];
            cum_count_.back() = count;
            cum_psi_.back() = psi.value().real();
        }
    }
}

/// Maximum number of table entries generate_elements will allocate.
inline constexpr double kMaxTableEntries = 4.0e7;

namespace detail {

inline std::vector<std::uint32_t> sieve_primes(std::uint64_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

/// Uniform double in [0,1) from the top 53 bits; portable across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::vector<PrimeNorm> primes_for(SystemKind kind, double limit) {
    std::vector<PrimeNorm> out;
    const auto lim = static_cast<std::uint64_t>(std::floor(limit));
    if (kind == SystemKind::RationalIntegers) {
        for (auto p : sieve_primes(lim)) out.push_back({static_cast<double>(p), 1});
    } else {
        for (auto p : sieve_primes(lim)) {
            const double pd = static_cast<double>(p);
            if (p == 2) {
                out.push_back({2.0, 1});
            } else if (p % 4 == 1) {
                out.push_back({pd, 2});
            } else if (pd * pd <= limit) {
                out.push_back({pd * pd, 1});
            }
        }
        std::stable_sort(out.begin(), out.end(), [](const PrimeNorm& a, const PrimeNorm& b) { return a.norm < b.norm; });
    }
    return out;
}

inline std::vector<PrimeNorm> random_primes(std::uint64_t seed, double cutoff) {
    std::mt19937_64 rng(seed);
    std::vector<PrimeNorm> out;
    double u = std::numbers::e;
    for (;;) {
        u += -std::log(1.0 - uniform01(rng));
        if (u > cutoff) break;
        if (uniform01(rng) * std::log(u) < 1.0) out.push_back({u, 1});
    }
    return out;
}

}  // namespace detail

ElementTable generate_elements(const PrimeSystem& system, double cutoff_x);
AxiomAParams fit_axiom_a(const ElementTable& table, double theta);

/// Fitted A for a fixed kappa: max of |R|/x^theta over both one-sided limits of every jump.
inline double fit_a_const(const ElementTable& table, double kappa, double theta) {
    const auto& xs = table.distinct_norms();
    const auto& cum = table.cumulative_counts();
    double best = 0.0, prev = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double main = kappa * (xs[j] - 1.0);
        const double w = std::pow(xs[j], theta);
        best = std::max({best, std::abs(prev - main) / w, std::abs(cum[j] - main) / w});
        prev = cum[j];
    }
    const double xc = table.cutoff_x();
    best = std::max(best, std::abs(prev - kappa * (xc - 1.0)) / std::pow(xc, theta));
    return best;
}

/// Prime norms of the system up to x, each multiplicity expanded to separate primes.
inline std::vector<double> expanded_primes(const PrimeSystem& system, double x) {
    std::vector<PrimeNorm> src;
    if (system.kind == SystemKind::RationalIntegers || system.kind == SystemKind::GaussianIdeals) {
        if (x <= system.prime_cutoff) {
            src = system.primes;
        } else {
            src = detail::primes_for(system.kind, x);
        }
    } else {
        if (system.kind == SystemKind::RandomBeurling && x > system.prime_cutoff) {
            throw DomainError("random-beurling system is only sampled up to its cutoff");
        }
        src = system.primes;
    }
    std::vector<double> out;
    for (const auto& p : src) {
        if (p.norm > x) break;
        for (int m = 0; m < p.multiplicity; ++m) out.push_back(p.norm);
    }
    return out;
}

inline PrimeSystem build_system(const SystemSpec& spec) {
    PrimeSystem sys;
    sys.kind = spec.kind;
    sys.seed = spec.seed;
    switch (spec.kind) {
        case SystemKind::RationalIntegers: {
            sys.prime_cutoff = std::max(spec.cutoff, 2.0);
            sys.primes = detail::primes_for(spec.kind, sys.prime_cutoff);
            AxiomAParams p{spec.kappa.value_or(1.0), spec.theta, spec.a_const.value_or(1.0), Provenance::Declared};
            p.validate();
            sys.axiom_a = p;
            break;
        }
        case SystemKind::GaussianIdeals: {
            sys.prime_cutoff = std::max(spec.cutoff, 2.0);
            sys.primes = detail::primes_for(spec.kind, sys.prime_cutoff);
            const double kappa = spec.kappa.value_or(std::numbers::pi / 4.0);
            AxiomAParams p{kappa, spec.theta, 1.0, Provenance::Declared};
            if (spec.a_const) {
                p.a_const = *spec.a_const;
            } else {
                p.a_const = fit_a_const(generate_elements(sys, sys.prime_cutoff), kappa, spec.theta);
                p.provenance = Provenance::Fitted;
            }
            p.validate();
            sys.axiom_a = p;
            break;
        }
        case SystemKind::RandomBeurling: {
            if (!(spec.cutoff > std::numbers::e)) throw DomainError("random-beurling cutoff must exceed e");
            sys.prime_cutoff = spec.cutoff;
            sys.primes = detail::random_primes(spec.seed, spec.cutoff);
            if (sys.primes.empty()) throw InvalidSystemError("random-beurling sample produced no primes");
            sys.axiom_a = fit_axiom_a(generate_elements(sys, spec.cutoff), spec.theta);
            break;
        }
        case SystemKind::ExplicitList: {
            if (spec.norms.empty()) throw InvalidSystemError("explicit-list needs at least one prime norm");
            std::vector<double> norms = spec.norms;
            for (double n : norms) {
                if (!(n > 1.0) || !std::isfinite(n)) throw InvalidSystemError("prime norms must be > 1");
            }
            std::sort(norms.begin(), norms.end());
            for (double n : norms) {
                if (!sys.primes.empty() && sys.primes.back().norm == n) {
                    ++sys.primes.back().multiplicity;
                } else {
                    sys.primes.push_back({n, 1});
                }
            }
            sys.prime_cutoff = std::numeric_limits<double>::infinity();
            if (spec.kappa && spec.a_const) {
                AxiomAParams p{*spec.kappa, spec.theta, *spec.a_const, Provenance::Declared};
                p.validate();
                sys.axiom_a = p;
            } else {
                try {
                    sys.axiom_a = fit_axiom_a(generate_elements(sys, spec.cutoff), spec.theta);
                } catch (const AxiomAFailure&) {
                    sys.axiom_a.reset();
                }
            }
            break;
        }
    }
    return sys;
}

inline ElementTable generate_elements(const PrimeSystem& system, double cutoff_x) {
    if (!(cutoff_x >= 1.0)) throw DomainError("cutoff_x must be >= 1");
    if (system.axiom_a) {
        const auto& p = *system.axiom_a;
        const double est = p.kappa * (cutoff_x - 1.0) + p.a_const * std::pow(cutoff_x, p.theta) + 1.0;
        if (est > kMaxTableEntries) throw ResourceError("element table exceeds memory budget", est);
    }
    const std::vector<double> primes = expanded_primes(system, cutoff_x);
    std::vector<double> logs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) logs[i] = std::log(primes[i]);

    struct Entry {
        double norm;
        double lambda;
    };
    std::vector<Entry> out;
    out.push_back({1.0, 0.0});

    // Explicit stack of (next prime index, value, sole prime index or -1 when mixed, -2 for the unit).
    struct Frame {
        std::size_t start;
        double value;
        long sole;
    };
    std::vector<Frame> stack{{0, 1.0, -2}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        // Push in reverse so primes are visited in ascending order.
        std::size_t end = f.start;
        while (end < primes.size() && f.value * primes[end] <= cutoff_x) ++end;
        for (std::size_t i = end; i-- > f.start;) {
            const double v = f.value * primes[i];
            const long sole = (f.sole == -2 || f.sole == static_cast<long>(i)) ? static_cast<long>(i) : -1;
            out.push_back({v, sole >= 0 ? logs[static_cast<std::size_t>(sole)] : 0.0});
            if (static_cast<double>(out.size()) > kMaxTableEntries) {
                throw ResourceError("element table exceeds memory budget", static_cast<double>(out.size()));
            }
            stack.push_back({i, v, sole});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.norm < b.norm; });
    std::vector<double> norms(out.size()), lambda(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        norms[i] = out[i].norm;
        lambda[i] = out[i].lambda;
    }
    return ElementTable(cutoff_x, std::move(norms), std::move(lambda));
}

inline void check_range(const ElementTable& table, double x) {
    if (!(x >= 1.0)) throw DomainError("x must be >= 1");
    if (x > table.cutoff_x()) throw DomainError("x beyond table cutoff");
}

/// N(x), right-continuous.
inline std::uint64_t counting_N(const ElementTable& table, double x) {
    check_range(table, x);
    const std::size_t j = table.distinct_upper(x);
    return j == 0 ? 0 : static_cast<std::uint64_t>(table.cumulative_counts()[j - 1]);
}

inline double remainder_R(const ElementTable& table, const AxiomAParams& params, double x) {
    return static_cast<double>(counting_N(table, x)) - params.kappa * (x - 1.0);
}

inline double psi_direct(const ElementTable& table, double x) {
    check_range(table, x);
    const std::size_t j = table.distinct_upper(x);
    return j == 0 ? 0.0 : table.cumulative_psi()[j - 1];
}

/// psi at x with the midpoint convention at jumps; sets on_jump when x is an element norm.
inline double psi_midpoint(const ElementTable& table, double x, bool* on_jump = nullptr) {
    check_range(table, x);
    const std::size_t j = table.distinct_upper(x);
    const double right = j == 0 ? 0.0 : table.cumulative_psi()[j - 1];
    const bool jump = j > 0 && table.distinct_norms()[j - 1] == x && table.distinct_lambda()[j - 1] > 0.0;
    if (on_jump) *on_jump = jump;
    if (!jump) return right;
    return right - 0.5 * table.distinct_lambda()[j - 1];
}

/// Relative residual above which a fitted system is rejected.
inline constexpr double kFitRejectRelative = 0.25;

inline AxiomAParams fit_axiom_a(const ElementTable& table, double theta) {
    if (table.size() == 0) throw DomainError("empty table");
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    const auto& xs = table.distinct_norms();
    const auto& cum = table.cumulative_counts();
    long double num = 0.0L, den = 0.0L;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const long double u = xs[j] - 1.0;
        num += static_cast<long double>(cum[j]) * u;
        den += u * u;
    }
    if (den <= 0.0L) throw AxiomAFailure("degenerate fit: no jumps beyond the unit");
    const double kappa = static_cast<double>(num / den);
    if (!(kappa > 0.0)) throw AxiomAFailure("degenerate fit: kappa <= 0");
    const double from = std::sqrt(table.cutoff_x());
    double worst = 0.0;
    for (std::size_t j = table.distinct_lower(from); j < xs.size(); ++j) {
        worst = std::max(worst, std::abs(cum[j] - kappa * (xs[j] - 1.0)) / (kappa * (xs[j] - 1.0)));
    }
    if (worst > kFitRejectRelative) {
        throw AxiomAFailure("N(x) is not asymptotically linear over the sampled range");
    }
    AxiomAParams p{kappa, theta, fit_a_const(table, kappa, theta), Provenance::Fitted};
    p.validate();
    return p;
}

struct AxiomAReport {
    double max_ratio = 0.0;
    double worst_x = 1.0;
    bool pass = false;
};

inline AxiomAReport verify_axiom_a(const ElementTable& table, const AxiomAParams& params) {
    AxiomAReport rep;
    const auto& xs = table.distinct_norms();
    const auto& cum = table.cumulative_counts();
    double prev = 0.0;
    auto consider = [&](double n, double x) {
        const double r = std::abs(n - params.kappa * (x - 1.0)) / std::pow(x, params.theta);
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.worst_x = x;
        }
    };
    for (std::size_t j = 0; j < xs.size(); ++j) {
        consider(prev, xs[j]);
        consider(cum[j], xs[j]);
        prev = cum[j];
    }
    consider(prev, table.cutoff_x());
    rep.pass = rep.max_ratio <= params.a_const;
    return rep;
}

}  // namespace beurling
