#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <beurling/numsys.hpp>

using namespace beurling;

namespace {

PrimeSystem two_three(double cutoff = 12.0) {
    SystemSpec spec;
    spec.kind = SystemKind::ExplicitList;
    spec.norms = {2.0, 3.0};
    spec.cutoff = cutoff;
    spec.theta = 0.5;
    return build_system(spec);
}

const ElementTable& rational_table() {
    static const ElementTable t = generate_elements(build_system({SystemKind::RationalIntegers}), 1e5);
    return t;
}

}  // namespace

TEST(NumberSystems, TwoGeneratorEnumeration) {
    const ElementTable t = generate_elements(two_three(), 12.0);
    const std::vector<double> want = {1, 2, 3, 4, 6, 8, 9, 12};
    EXPECT_EQ(t.norms(), want);
    EXPECT_EQ(counting_N(t, 12.0), 8u);
}

TEST(NumberSystems, TwoGeneratorPsi) {
    const ElementTable t = generate_elements(two_three(), 12.0);
    EXPECT_NEAR(psi_direct(t, 9.0), 3.0 * std::log(2.0) + 2.0 * std::log(3.0), 1e-14);
    EXPECT_NEAR(psi_direct(t, 9.0), 4.27667, 1e-5);
}

TEST(NumberSystems, TwoGeneratorFitRejected) {
    const PrimeSystem sys = two_three(1e6);
    EXPECT_FALSE(sys.axiom_a.has_value());
    EXPECT_THROW(fit_axiom_a(generate_elements(sys, 1e6), 0.5), AxiomAFailure);
}

TEST(NumberSystems, RationalCountingIsFloor) {
    const ElementTable& t = rational_table();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const double x = 1.0 + 99998.0 * detail::uniform01(rng);
        EXPECT_EQ(counting_N(t, x), static_cast<std::uint64_t>(std::floor(x)));
    }
    EXPECT_EQ(counting_N(t, 1.0), 1u);
    EXPECT_EQ(counting_N(t, 10.0), 10u);
}

TEST(NumberSystems, RationalPsiAtTen) {
    // log lcm(1..10) = log 2520
    EXPECT_NEAR(psi_direct(rational_table(), 10.0), 7.8320141805054693, 1e-13);
}

TEST(NumberSystems, PsiMidpointAtJumps) {
    bool jump = false;
    const double mid = psi_midpoint(rational_table(), 7.0, &jump);
    EXPECT_TRUE(jump);
    EXPECT_NEAR(mid, psi_direct(rational_table(), 7.0) - 0.5 * std::log(7.0), 1e-14);
    psi_midpoint(rational_table(), 7.5, &jump);
    EXPECT_FALSE(jump);
}

TEST(NumberSystems, LambdaWeightsAreLogsOfPrimes) {
    const ElementTable& t = rational_table();
    for (std::size_t i = 0; i < 2000; ++i) {
        const double n = t.norms()[i], w = t.lambda()[i];
        if (w == 0.0) continue;
        const double p = std::exp(w);
        const double r = std::round(p);
        EXPECT_NEAR(p, r, 1e-9 * r);
        double m = n;
        while (m > 1.0) m /= r;
        EXPECT_DOUBLE_EQ(m, 1.0) << n;
    }
}

TEST(NumberSystems, AxiomAVerificationRational) {
    for (double th : {0.05, 0.4, 0.5}) {
        const AxiomAReport r = verify_axiom_a(rational_table(), {1.0, th, 1.0, Provenance::Declared});
        EXPECT_TRUE(r.pass);
        EXPECT_DOUBLE_EQ(r.max_ratio, 1.0);
        EXPECT_DOUBLE_EQ(r.worst_x, 1.0);
    }
    const AxiomAReport bad = verify_axiom_a(rational_table(), {1.0, 0.5, 0.5, Provenance::Declared});
    EXPECT_FALSE(bad.pass);
}

TEST(NumberSystems, GaussianIdealsCountAndFit) {
    SystemSpec spec;
    spec.kind = SystemKind::GaussianIdeals;
    spec.theta = 0.5;
    spec.cutoff = 1e4;
    const PrimeSystem sys = build_system(spec);
    const ElementTable t = generate_elements(sys, 1e4);
    // ideal norms up to 5: 1, 2, 4, 5, 5
    EXPECT_EQ(counting_N(t, 5.0), 5u);
    ASSERT_TRUE(sys.axiom_a.has_value());
    EXPECT_DOUBLE_EQ(sys.axiom_a->kappa, std::numbers::pi / 4.0);
    EXPECT_EQ(sys.axiom_a->provenance, Provenance::Fitted);
    EXPECT_TRUE(verify_axiom_a(t, sys.params()).pass);
}

TEST(NumberSystems, MultiplicativeClosure) {
    const ElementTable& t = rational_table();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const std::size_t a = 1 + rng() % 300, b = 1 + rng() % 300;
        const double u = t.norms()[a], v = t.norms()[b];
        const std::size_t j = t.distinct_lower(u * v);
        ASSERT_LT(j, t.distinct_size());
        EXPECT_EQ(t.distinct_norms()[j], u * v);
    }
}

TEST(NumberSystems, RandomSystemDeterministic) {
    SystemSpec spec;
    spec.kind = SystemKind::RandomBeurling;
    spec.seed = 42;
    spec.cutoff = 2e4;
    spec.theta = 0.6;
    const PrimeSystem a = build_system(spec), b = build_system(spec);
    ASSERT_EQ(a.primes.size(), b.primes.size());
    for (std::size_t i = 0; i < a.primes.size(); ++i) EXPECT_EQ(a.primes[i].norm, b.primes[i].norm);
    spec.seed = 43;
    const PrimeSystem c = build_system(spec);
    EXPECT_NE(a.primes.front().norm, c.primes.front().norm);
    const ElementTable t1 = generate_elements(a, 2e4), t2 = generate_elements(b, 2e4);
    EXPECT_EQ(t1.norms(), t2.norms());
    EXPECT_EQ(t1.lambda(), t2.lambda());
}

TEST(NumberSystems, InvalidExplicitNorms) {
    SystemSpec spec;
    spec.kind = SystemKind::ExplicitList;
    spec.norms = {1.0, 3.0};
    EXPECT_THROW(build_system(spec), InvalidSystemError);
    spec.norms = {};
    EXPECT_THROW(build_system(spec), InvalidSystemError);
}

TEST(NumberSystems, RemainderDefinition) {
    const AxiomAParams p{1.0, 0.05, 1.0, Provenance::Declared};
    EXPECT_DOUBLE_EQ(remainder_R(rational_table(), p, 10.5), 10.0 - 9.5);
}
