#include <gtest/gtest.h>

#include <cmath>

#include <beurling/zeros.hpp>

using namespace beurling;

namespace {

const AxiomAParams kTheta04{1.0, 0.4, 1.0, Provenance::Declared};
const AxiomAParams kTheta005{1.0, 0.05, 1.0, Provenance::Declared};

const ZeroList& survey() {
    static const ZeroList zl = [] {
        LocateOptions o;
        o.tol = 1e-3;
        return survey_zeros(RationalEMEvaluator(kTheta04), 0.41, 1.2, 55.0, o);
    }();
    return zl;
}

}  // namespace

TEST(Winding, ClassicalRectangles) {
    const RationalEMEvaluator em(kTheta005);
    EXPECT_EQ(winding_count(em, {0.3, 0.7, 13.0, 15.0}), 1);
    EXPECT_EQ(winding_count(em, {0.3, 0.7, 2.0, 5.0}), 0);
    EXPECT_EQ(winding_count(em, {0.8, 1.2, -0.1, 0.1}), -1);
}

TEST(Winding, Additivity) {
    const RationalEMEvaluator em(kTheta005);
    const long whole = winding_count(em, {0.3, 0.7, 10.0, 26.0});
    const long parts = winding_count(em, {0.3, 0.7, 10.0, 17.3}) + winding_count(em, {0.3, 0.7, 17.3, 26.0});
    EXPECT_EQ(whole, 3);
    EXPECT_EQ(whole, parts);
}

TEST(Winding, RectangleBelowThetaRejected) {
    const RationalEMEvaluator em(kTheta04);
    EXPECT_THROW(winding_count(em, {0.3, 0.7, 10.0, 20.0}), DomainError);
}

TEST(Locate, FirstZero) {
    LocateOptions o;
    o.tol = 1e-3;
    const ZeroList zl = locate_zeros(RationalEMEvaluator(kTheta005), {0.3, 0.7, 10.0, 20.0}, o);
    ASSERT_EQ(zl.zeros.size(), 1u);
    EXPECT_NEAR(zl.zeros[0].gamma, 14.134725141734693, 1e-3);
    EXPECT_NEAR(zl.zeros[0].beta, 0.5, 1e-3);
    EXPECT_EQ(zl.zeros[0].multiplicity, 1);
    EXPECT_LE(zl.zeros[0].box.diameter(), 1e-3);
    ASSERT_EQ(zl.certificates.size(), 1u);
    EXPECT_EQ(zl.certificates[0].count, 1);
}

TEST(Locate, EmptyRectangleHasCertificate) {
    const ZeroList zl = locate_zeros(RationalEMEvaluator(kTheta005), {0.3, 0.7, 2.0, 5.0});
    EXPECT_TRUE(zl.zeros.empty());
    ASSERT_EQ(zl.certificates.size(), 1u);
    EXPECT_EQ(zl.certificates[0].count, 0);
}

TEST(Locate, PoleRectangleRejected) {
    EXPECT_THROW(locate_zeros(RationalEMEvaluator(kTheta005), {0.8, 1.2, -0.1, 0.1}), DomainError);
}

TEST(Locate, OrdinatesToFiftyFive) {
    const double classical[] = {14.134725, 21.022040, 25.010858, 30.424876, 32.935062, 37.586178,
                                40.918719, 43.327073, 48.005151, 49.773832, 52.970321};
    LocateOptions o;
    o.tol = 1e-2;
    const ZeroList zl = locate_zeros(RationalEMEvaluator(kTheta005), {0.3, 0.7, 10.0, 55.0}, o);
    ASSERT_EQ(zl.zeros.size(), 11u);
    for (std::size_t i = 0; i < 11; ++i) EXPECT_NEAR(zl.zeros[i].gamma, classical[i], 1e-2);
}

TEST(Survey, ConjugateClosedAndCovering) {
    const ZeroList& zl = survey();
    EXPECT_TRUE(zl.covers({0.45, 1.0, -50.0, 50.0}));
    EXPECT_FALSE(zl.covers({0.45, 1.0, -60.0, 50.0}));
    std::size_t pos = 0, neg = 0;
    for (const auto& z : zl.zeros) (z.gamma > 0 ? pos : neg) += 1;
    EXPECT_EQ(pos, neg);
}

TEST(Counts, RectangleAndBand) {
    const ZeroList& zl = survey();
    EXPECT_EQ(count_in_rectangle(zl, 0.45, 50.0), 20);
    EXPECT_EQ(count_in_rectangle(zl, 0.55, 50.0), 0);
    EXPECT_EQ(count_in_rectangle(zl, 0.45, 0.0), 0);
    EXPECT_EQ(count_in_band(zl, 0.45, 10.0, 20.0), 1);
    EXPECT_THROW(count_in_rectangle(zl, 0.45, 80.0), CoverageGapError);
    long prev = 0;
    for (double T : {10.0, 20.0, 30.0, 40.0, 50.0}) {
        const long n = count_in_rectangle(zl, 0.45, T);
        EXPECT_GE(n, prev);
        prev = n;
    }
}

TEST(Counts, DisplaysHold) {
    const ZeroList& zl = survey();
    for (double T : {6.0, 20.0, 50.0}) {
        const auto checks = check_count_bounds(zl, kTheta04, {0.45, T, 5.0});
        EXPECT_FALSE(checks.empty());
        for (const auto& c : checks) EXPECT_TRUE(c.pass) << to_string(c.display) << " T=" << T;
    }
}

TEST(Counts, HalfPlaneCountRhs) {
    const CountCheck c = check_count(CountDisplay::ZerosInThCorr, survey(), kTheta04, {0.45, 50.0, 5.0});
    EXPECT_EQ(c.count, 20);
    EXPECT_NEAR(c.rhs, 9338.0381373879546, 1e-6);
    EXPECT_TRUE(c.pass);
}

TEST(Counts, SmallHeightSelectsJensenBranch) {
    const CountGeometry g{0.45, 4.0, 5.0};
    EXPECT_TRUE(count_applicable(CountDisplay::ZerosInHSmallT, kTheta04, g));
    EXPECT_FALSE(count_applicable(CountDisplay::ZerosInH, kTheta04, g));
}

TEST(Counts, BandDisplay) {
    const CountCheck c = check_count(CountDisplay::ZerosBetween, survey(), kTheta04, {0.45, 20.0, 10.0});
    EXPECT_TRUE(c.pass);
}
