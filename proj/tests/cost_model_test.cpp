#include <gtest/gtest.h>

#include <sstream>

#include "rpq/cost_model.hpp"
#include "rpq/error.hpp"

namespace rpq {
namespace {

const NetworkParams kAlice{150, Rational(3), Rational(1, 5)};
const CostInputs kLow{18, 1800, 70, 15};
const CostInputs kHigh{18, 1800, 8000, 1800};

TEST(CostModelTest, ScenarioCosts) {
    EXPECT_EQ(cost_s1(kAlice, kLow), Rational(70200));
    EXPECT_EQ(cost_s2(kAlice, kLow), Rational(63450));
    EXPECT_EQ(cost_s1(kAlice, {0, 0, 0, 0}), Rational(0));
    auto doubled = kAlice;
    doubled.n_p *= 2;
    EXPECT_EQ(cost_s1(doubled, kLow), 2 * cost_s1(kAlice, kLow));
    EXPECT_EQ(cost_s2(doubled, kLow), 2 * cost_s2(kAlice, kLow));
}

TEST(CostModelTest, SymmetricInputsCostTheSame) {
    const CostInputs c{5, 40, 5, 40};
    EXPECT_EQ(cost_s1(kAlice, c), cost_s2(kAlice, c));
}

TEST(CostModelTest, ZeroReplicationLeavesBroadcastTerms) {
    const NetworkParams p{150, Rational(3), Rational(0)};
    EXPECT_EQ(cost_s1(p, kLow), Rational(150 * 2 * 3 * 18));
    EXPECT_EQ(cost_s2(p, kLow), Rational(150 * 2 * 3 * 70));
}

TEST(CostModelTest, ScenarioDiscriminant) {
    const auto d = discriminant(kLow);
    ASSERT_EQ(d.kind, Discriminant::Kind::value);
    EXPECT_EQ(d.value, Rational(104, 1785));
    EXPECT_NEAR(to_double(d.value), 0.0583, 0.0005);
    EXPECT_NEAR(to_double(kAlice.k / kAlice.d), 0.0667, 0.0001);
    EXPECT_EQ(region(kLow), Region::s2_triangle);
    EXPECT_EQ(classify(kAlice, kLow), Strategy::s2);
}

TEST(CostModelTest, DiscriminantSpecialCases) {
    EXPECT_EQ(discriminant({10, 100, 10, 50}).kind, Discriminant::Kind::s2_dominant);
    EXPECT_EQ(region({10, 100, 10, 50}), Region::s2_dominant);
    EXPECT_EQ(discriminant({10, 100, 20, 100}).kind, Discriminant::Kind::equal_data);
    // 2 * 60 / 100 > 1: S1 whatever k and d are.
    EXPECT_EQ(region({10, 110, 70, 10}), Region::s1_dominant);
    EXPECT_EQ(classify({10, Rational(2), Rational(99, 100)}, {10, 110, 70, 10}), Strategy::s1);
}

TEST(CostModelTest, ClassifyEdgeCases) {
    EXPECT_EQ(classify(kAlice, {10, 100, 20, 100}), Strategy::s1);
    EXPECT_EQ(classify(kAlice, {20, 100, 10, 50}), Strategy::s2);
    EXPECT_THROW(classify({150, Rational(1), Rational(1, 5)}, kLow), ConfigError);
    EXPECT_THROW(classify({150, Rational(3), Rational(1)}, kLow), ConfigError);
    EXPECT_THROW(classify({150, Rational(3), Rational(0)}, kLow), ConfigError);
}

TEST(CostModelTest, ScenarioRecommendation) {
    const auto r = recommend(kAlice, kLow, kHigh, 0.9);
    EXPECT_EQ(r.low.winner, Strategy::s2);
    EXPECT_EQ(r.high.winner, Strategy::s1);
    EXPECT_EQ(r.strategy, Strategy::s2);
    EXPECT_DOUBLE_EQ(r.confidence, 0.9);
}

TEST(CostModelTest, RecommendationDegenerateCases) {
    const auto certain = recommend(kAlice, kLow, kHigh, 1.0);
    EXPECT_EQ(certain.strategy, classify(kAlice, kLow));
    EXPECT_DOUBLE_EQ(certain.confidence, 1.0);
    for (const double p : {0.0, 0.3, 0.7}) {
        const auto same = recommend(kAlice, kHigh, kHigh, p);
        EXPECT_EQ(same.strategy, classify(kAlice, kHigh));
        EXPECT_DOUBLE_EQ(same.confidence, 1.0);
    }
    EXPECT_THROW(recommend(kAlice, kLow, kHigh, 1.5), ConfigError);
}

TEST(CostModelTest, ReportMentionsVerdict) {
    std::ostringstream out;
    write_report(out, kAlice, kLow);
    const auto text = out.str();
    EXPECT_NE(text.find("discriminant: 104/1785"), std::string::npos) << text;
    EXPECT_NE(text.find("winner: S2"), std::string::npos) << text;
    EXPECT_NE(text.find("s2-triangle"), std::string::npos) << text;
}

// When D_s1 > D_s2, S2 is cheaper exactly when k/d exceeds the
// discriminant; the comparison flips when D_s1 < D_s2.
TEST(CostModelProperty, ClassifyAgreesWithDiscriminant) {
    SplitMix64 rng(12);
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
        const CostInputs c{static_cast<std::int64_t>(uniform_below(rng, 200)),
                           static_cast<std::int64_t>(uniform_below(rng, 5000)),
                           static_cast<std::int64_t>(uniform_below(rng, 400)),
                           static_cast<std::int64_t>(uniform_below(rng, 5000))};
        const auto den = 2 + static_cast<std::int64_t>(uniform_below(rng, 200));
        const NetworkParams p{1 + static_cast<std::int64_t>(uniform_below(rng, 500)),
                              Rational(den + 1 + static_cast<std::int64_t>(uniform_below(rng, 2000)), den),
                              Rational(1 + static_cast<std::int64_t>(uniform_below(rng, den - 1)), den)};
        const auto verdict = classify(p, c);
        EXPECT_EQ(verdict == Strategy::s2, cost_s2(p, c) < cost_s1(p, c));
        const auto d = discriminant(c);
        if (d.kind != Discriminant::Kind::value || d.value <= Rational(0)) continue;
        ++checked;
        const auto ratio = p.k / p.d;
        if (c.d_s1 > c.d_s2) {
            EXPECT_EQ(verdict == Strategy::s2, ratio > d.value);
        } else {
            EXPECT_EQ(verdict == Strategy::s2, ratio < d.value);
        }
        // Scaling every factor leaves the discriminant alone.
        const CostInputs scaled{3 * c.q_lbl, 3 * c.d_s1, 3 * c.q_bc, 3 * c.d_s2};
        EXPECT_EQ(discriminant(scaled).value, d.value);
    }
    EXPECT_GT(checked, 1000);
}

TEST(RationalTest, Parse) {
    EXPECT_EQ(parse_rational("3"), Rational(3));
    EXPECT_EQ(parse_rational("0.2"), Rational(1, 5));
    EXPECT_EQ(parse_rational("-1.25"), Rational(-5, 4));
    EXPECT_EQ(parse_rational("2/3"), Rational(2, 3));
    EXPECT_THROW(parse_rational("x"), ConfigError);
    EXPECT_THROW(parse_rational("1/0"), ConfigError);
    EXPECT_THROW(parse_rational(""), ConfigError);
    EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
    EXPECT_EQ(to_string(Rational(4, 2)), "2");
}

} // namespace
} // namespace rpq
