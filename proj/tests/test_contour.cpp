#include <gtest/gtest.h>

#include <cmath>

#include <beurling/contour.hpp>

using namespace beurling;

namespace {

const AxiomAParams kTheta04{1.0, 0.4, 1.0, Provenance::Declared};

const ZeroList& survey() {
    static const ZeroList zl = [] {
        LocateOptions o;
        o.tol = 1e-3;
        return survey_zeros(RationalEMEvaluator(kTheta04), 0.41, 1.2, 40.0, o);
    }();
    return zl;
}

ZeroList empty_certified(double height) {
    ZeroList zl;
    zl.certificates.push_back({{0.3, 1.5, -height, height}, 0});
    return zl;
}

}  // namespace

TEST(DistanceBudget, ClosedForm) {
    EXPECT_NEAR(distance_budget(0.65, 0.4, 1, 0.0, 2.0, 5.0), 7.755997334015059e-5, 1e-17);
    EXPECT_LT(distance_budget(0.65, 0.4, 1, 0.0, 2.0, 50.0), distance_budget(0.65, 0.4, 1, 0.0, 2.0, 5.0));
    EXPECT_DOUBLE_EQ(distance_budget(0.65, 0.4, 2, 0.0, 2.0, 5.0), 0.5 * distance_budget(0.65, 0.4, 1, 0.0, 2.0, 5.0));
    EXPECT_THROW(distance_budget(0.4, 0.4, 1, 0.0, 2.0, 5.0), DomainError);
    EXPECT_THROW(distance_budget(0.5, 0.4, 0, 0.0, 2.0, 5.0), DomainError);
}

TEST(TranslateSets, Symmetry) {
    const TranslateSet ts = TranslateSet::make({1.0, -1.0, 0.0});
    EXPECT_EQ(ts.n, 3);
    EXPECT_EQ(ts.B, 1.0);
    EXPECT_THROW(TranslateSet::make({0.0, 1.0}), DomainError);
}

TEST(BuildGamma, EmptyZeroListMidpoints) {
    const TranslateSet ts = TranslateSet::make({0.0});
    const GammaPath g = build_gamma(empty_certified(50.0), kTheta04, 0.45, ts, 10.0);
    EXPECT_DOUBLE_EQ(g.t_seq[1], 4.5);
    const double d0 = g.budget()(0.0);
    EXPECT_DOUBLE_EQ(g.sigma_seq[0], 0.5 * (g.a() + 0.45 - d0));
    const SeparationReport sep = verify_separation(g, empty_certified(50.0), ts);
    EXPECT_TRUE(std::isinf(sep.min_ratio));
    EXPECT_TRUE(sep.pass);
}

TEST(BuildGamma, StructuralInvariants) {
    const TranslateSet ts = TranslateSet::make({0.0});
    const GammaPath g = build_gamma(survey(), kTheta04, 0.45, ts, 30.0);
    ASSERT_GE(g.t_seq.size(), 3u);
    EXPECT_EQ(g.t_seq[0], 0.0);
    EXPECT_GE(g.t_seq[1], 4.0);
    EXPECT_LE(g.t_seq[1], 5.0);
    for (std::size_t k = 2; k < g.t_seq.size(); ++k) {
        EXPECT_GE(g.t_seq[k] - g.t_seq[k - 1], 1.0);
        EXPECT_LE(g.t_seq[k] - g.t_seq[k - 1], 2.0);
    }
    for (double s : g.sigma_seq) {
        EXPECT_GE(s, g.a());
        EXPECT_LE(s, g.b);
    }
    EXPECT_GE(g.height, 30.0);
    const GammaPath again = build_gamma(survey(), kTheta04, 0.45, ts, 30.0);
    EXPECT_EQ(g.t_seq, again.t_seq);
    EXPECT_EQ(g.sigma_seq, again.sigma_seq);
}

TEST(BuildGamma, SeparationAndLogDerivative) {
    const TranslateSet ts = TranslateSet::make({0.0});
    const GammaPath g = build_gamma(survey(), kTheta04, 0.45, ts, 30.0);
    const SeparationReport sep = verify_separation(g, survey(), ts);
    EXPECT_TRUE(sep.pass);
    EXPECT_GE(sep.min_ratio, 1.0);
    const auto rep = verify_logderiv_on_gamma(RationalEMEvaluator(kTheta04), g, ts, 100);
    EXPECT_EQ(rep.points, 100u);
    EXPECT_EQ(rep.failures, 0u);
    EXPECT_EQ(rep.passes, 100u);
}

TEST(BuildGamma, SymmetricTranslates) {
    const TranslateSet ts = TranslateSet::make({-0.5, 0.0, 0.5});
    const GammaPath g = build_gamma(survey(), kTheta04, 0.45, ts, 20.0);
    EXPECT_TRUE(verify_separation(g, survey(), ts).pass);
}

TEST(BuildGamma, ForcedOntoZeroFails) {
    const TranslateSet ts = TranslateSet::make({0.0});
    GammaPath g = build_gamma(survey(), kTheta04, 0.45, ts, 30.0);
    // move the vertical run through the first zero
    ZeroList zl = survey();
    zl.zeros.push_back({g.sigma_seq[5], 0.5 * (g.t_seq[5] + g.t_seq[6]), 1, {}});
    zl.zeros.back().box = {zl.zeros.back().beta, zl.zeros.back().beta, zl.zeros.back().gamma, zl.zeros.back().gamma};
    const SeparationReport sep = verify_separation(g, zl, ts);
    EXPECT_FALSE(sep.pass);
    EXPECT_LT(sep.min_ratio, 1.0);
}

TEST(BuildGamma, AdversarialWindowStillAdmissible) {
    // prohibited intervals of total measure below 1/2 packed into [4,5]
    ZeroList zl = empty_certified(50.0);
    const double d = distance_budget(0.45, 0.4, 1, 0.0, 2.0, 4.0);
    const int n = static_cast<int>(0.45 / (2.0 * d));
    for (int i = 0; i < n; ++i) {
        const double gamma = 4.0 + (i + 0.5) / n;
        zl.zeros.push_back({0.49, gamma, 1, {0.49, 0.49, gamma, gamma}});
        zl.zeros.push_back({0.49, -gamma, 1, {0.49, 0.49, -gamma, -gamma}});
    }
    zl.seal();
    const TranslateSet ts = TranslateSet::make({0.0});
    const GammaPath g = build_gamma(zl, kTheta04, 0.45, ts, 6.0);
    EXPECT_TRUE(verify_separation(g, zl, ts).pass);
}

TEST(BuildGamma, NoAdmissibleChoiceReported) {
    ZeroList zl = empty_certified(50.0);
    for (int i = 0; i <= 2000; ++i) {
        const double gamma = 4.0 + i * 0.0005;
        zl.zeros.push_back({0.49, gamma, 1, {0.49, 0.49, gamma - 0.0005, gamma + 0.0005}});
    }
    EXPECT_THROW(build_gamma(zl, kTheta04, 0.45, TranslateSet::make({0.0}), 6.0), NoAdmissibleChoiceError);
}

TEST(BuildGamma, RequiresCoverage) {
    EXPECT_THROW(build_gamma(ZeroList{}, kTheta04, 0.45, TranslateSet::make({0.0}), 10.0), CoverageGapError);
}

TEST(GammaLogDerivative, FarRightHasHugeMargin) {
    const TranslateSet ts = TranslateSet::make({0.0});
    const GammaPath g = build_gamma(survey(), kTheta04, 0.45, ts, 10.0);
    const RationalEMEvaluator em(kTheta04);
    const double lhs = std::abs(logderiv(em, {2.0, g.t_seq[1]}).value);
    EXPECT_LT(lhs * 1e6, gamma_logderiv_rhs(g, kTheta04, g.t_seq[1]));
}

TEST(GammaLogDerivative, RhsGrowsAsBApproachesTheta) {
    GammaPath g;
    g.theta = 0.4;
    g.translates = TranslateSet::make({0.0});
    double prev = 0.0;
    for (double b : {0.6, 0.5, 0.45, 0.42, 0.41}) {
        g.b = b;
        const double r = gamma_logderiv_rhs(g, kTheta04, 10.0);
        EXPECT_GT(r, prev);
        prev = r;
    }
}

TEST(Geometry, PointSegmentDistance) {
    const Segment s{{0.0, 0.0}, {0.0, 2.0}};
    EXPECT_DOUBLE_EQ(point_segment_distance({1.0, 1.0}, s), 1.0);
    EXPECT_DOUBLE_EQ(point_segment_distance({0.0, 3.0}, s), 1.0);
    EXPECT_DOUBLE_EQ(point_segment_distance({3.0, -4.0}, s), 5.0);
}
