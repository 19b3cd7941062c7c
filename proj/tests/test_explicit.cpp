#include <gtest/gtest.h>

#include <cmath>

#include <beurling/explicit.hpp>

using namespace beurling;

namespace {

const AxiomAParams kTheta04{1.0, 0.4, 1.0, Provenance::Declared};

struct Fixture {
    ElementTable table;
    ZeroList zeros;
    GammaPath path;
};

const Fixture& fx() {
    static const Fixture f = [] {
        Fixture f;
        f.table = generate_elements(build_system({SystemKind::RationalIntegers}), 2e4);
        LocateOptions o;
        o.tol = 1e-3;
        f.zeros = survey_zeros(RationalEMEvaluator(kTheta04), 0.41, 1.2, 70.0, o);
        f.path = build_gamma(f.zeros, kTheta04, 0.45, TranslateSet::make({0.0}), 62.0);
        return f;
    }();
    return f;
}

double nearest_height(double want) {
    double best = fx().path.t_seq[1];
    for (double t : fx().path.t_seq) {
        if (t > 0 && std::abs(t - want) < std::abs(best - want)) best = t;
    }
    return best;
}

}  // namespace

TEST(ZeroSum, EmptyAndSinglePair) {
    ZeroList zl;
    zl.certificates.push_back({{0.3, 1.5, -60, 60}, 0});
    EXPECT_EQ(zero_sum(zl, fx().path, 100.0, fx().path.t_seq[3]), 0.0);
    const double beta = 0.5, gamma = 14.134725141734693, x = 100.0;
    zl.zeros.push_back({beta, gamma, 1, {beta, beta, gamma, gamma}});
    zl.zeros.push_back({beta, -gamma, 1, {beta, beta, -gamma, -gamma}});
    zl.seal();
    const double T = nearest_height(20.0);
    const double got = zero_sum(zl, fx().path, x, T);
    const double lx = std::log(x);
    const double closed = 2.0 * std::pow(x, beta) * (beta * std::cos(gamma * lx) + gamma * std::sin(gamma * lx)) / (beta * beta + gamma * gamma);
    const cplx rho{beta, gamma};
    const cplx direct = std::exp(rho * lx) / rho + std::exp(std::conj(rho) * lx) / std::conj(rho);
    EXPECT_NEAR(got, closed, 1e-12);
    EXPECT_NEAR(got, direct.real(), 1e-12);
    EXPECT_NEAR(direct.imag(), 0.0, 1e-12);
}

TEST(ZeroSum, MatchesComplexSummation) {
    const double T = nearest_height(30.0);
    const double x = 100.0;
    cplx direct = 0.0;
    for (const auto& z : fx().zeros.zeros) {
        if (std::abs(z.gamma) <= T && z.beta > 0.45) direct += std::exp(z.rho() * std::log(x)) / z.rho();
    }
    EXPECT_NEAR(zero_sum(fx().zeros, fx().path, x, T), direct.real(), 1e-10);
}

TEST(ZeroSum, HeightMustBePathHeight) {
    EXPECT_THROW(zero_sum(fx().zeros, fx().path, 100.0, 30.0), DomainError);
}

TEST(Envelope, ClosedForm) {
    EXPECT_NEAR(explicit_envelope(0.6, 0.05, 2.0, 1000.0), 309437.59978759766, 1e-6);
}

TEST(ExplicitFormula, DeviationDropsWithHeight) {
    const double hi = nearest_height(60.0);
    const auto lo_rep = explicit_formula_compare(fx().table, fx().zeros, fx().path, 1000.5, fx().path.t_seq[1]);
    const auto hi_rep = explicit_formula_compare(fx().table, fx().zeros, fx().path, 1000.5, hi);
    EXPECT_LT(hi_rep.deviation, lo_rep.deviation);
    EXPECT_LE(hi_rep.deviation, hi_rep.envelope);
    EXPECT_FALSE(hi_rep.on_jump);
    EXPECT_EQ(lo_rep.zeros_used, 0u);
}

TEST(ExplicitFormula, JumpPointUsesMidpoint) {
    const auto rep = explicit_formula_compare(fx().table, fx().zeros, fx().path, 1009.0, fx().path.t_seq[1]);
    EXPECT_TRUE(rep.on_jump);
    EXPECT_NEAR(rep.psi_direct, psi_direct(fx().table, 1009.0) - 0.5 * std::log(1009.0), 1e-9);
}

TEST(ExplicitFormula, Preconditions) {
    EXPECT_THROW(explicit_formula_compare(fx().table, fx().zeros, fx().path, 1.000001, fx().path.t_seq[1]), DomainError);
    EXPECT_THROW(explicit_formula_compare(fx().table, fx().zeros, fx().path, 5e4, fx().path.t_seq[1]), DomainError);
}

TEST(ConvergenceStudy, GridAndDeterminism) {
    const std::vector<double> xs{100.5, 500.5, 1000.5};
    const std::vector<double> Ts{fx().path.t_seq[1], nearest_height(60.0)};
    const ConvergenceStudy a = convergence_study(fx().table, fx().zeros, fx().path, xs, Ts, 1);
    const ConvergenceStudy b = convergence_study(fx().table, fx().zeros, fx().path, xs, Ts, 3);
    ASSERT_EQ(a.cells.size(), 6u);
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].deviation, b.cells[i].deviation);
    EXPECT_LT(a.rms_at(1), a.rms_at(0));
    const ConvergenceStudy one = convergence_study(fx().table, fx().zeros, fx().path, {100.5}, {Ts[0]});
    EXPECT_EQ(one.cells.size(), 1u);
}

TEST(Perron, GapShrinksAndIntegralIsReal) {
    const RationalEMEvaluator em(kTheta04);
    const PerronReport a = perron_check(fx().table, em, fx().zeros, fx().path, 100.5, nearest_height(30.0));
    const PerronReport b = perron_check(fx().table, em, fx().zeros, fx().path, 100.5, nearest_height(60.0));
    EXPECT_LT(b.gap, a.gap);
    EXPECT_LT(std::abs(a.integral_imag), 1e-6 + a.quad_error);
    EXPECT_TRUE(a.converged);
    EXPECT_NEAR(a.p, 1.0 + 1.0 / std::log(100.5), 1e-15);
    EXPECT_DOUBLE_EQ(a.estimate, 100.5 - a.zero_sum + a.integral);
}

TEST(Perron, Preconditions) {
    const RationalEMEvaluator em(kTheta04);
    EXPECT_THROW(perron_check(fx().table, em, fx().zeros, fx().path, 1.000001, fx().path.t_seq[1]), DomainError);
    EXPECT_THROW(perron_check(fx().table, em, fx().zeros, fx().path, 101.0005, fx().path.t_seq[1]), DomainError);
    EXPECT_THROW(perron_check(fx().table, em, fx().zeros, fx().path, 100.5, fx().path.t_seq[1], 2.5), DomainError);
}

TEST(Quadrature, PolynomialAndOscillatory) {
    auto f = [](cplx s) { return CertifiedValue{s * s, 0.0}; };
    const QuadResult r = integrate_segment(f, {0.0, 0.0}, {1.0, 1.0}, 1e-12);
    EXPECT_LT(std::abs(r.value - cplx(1.0, 1.0) * cplx(1.0, 1.0) * cplx(1.0, 1.0) / 3.0), 1e-14);
    auto g = [](cplx s) { return CertifiedValue{std::exp(cplx(0.0, 40.0) * s), 0.0}; };
    const QuadResult q = integrate_segment(g, 0.0, 1.0, 1e-10);
    const cplx want = (std::exp(cplx(0.0, 40.0)) - 1.0) / cplx(0.0, 40.0);
    EXPECT_LT(std::abs(q.value - want), 1e-10);
    EXPECT_TRUE(q.converged);
}
