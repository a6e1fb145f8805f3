// Copyright 2026 The strassen Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "strassen/generators.hpp"
#include "strassen/orders.hpp"
#include "test_support.hpp"

using namespace strassen;

namespace {

const auto kSym1 = new_measure_1d({-1.0, 1.0}, {0.5, 0.5});
const auto kSym2 = new_measure_1d({-2.0, 2.0}, {0.5, 0.5});
const auto kDelta0 = dirac({0.0});
const auto kDelta1 = dirac({1.0});
const auto kCoin = new_measure_1d({0.0, 1.0}, {0.5, 0.5});

/// Univariate pair on the grid k/4 with up to 8 atoms each, ordered or not.
MeasurePair any_pair(Rng& rng, OrderKind kind) {
    switch (rng.uniform_int(0, 2)) {
        case 0: return ordered_pair(rng, kind, 1 + rng.uniform_int(0, 3));
        case 1: return broken_pair(rng, kind, 1 + rng.uniform_int(0, 3));
        default:
            return {random_measure(rng, 1 + rng.uniform_int(0, 7)), random_measure(rng, 1 + rng.uniform_int(0, 7))};
    }
}

}  // namespace

TEST(CxUnivariate, Examples) {
    EXPECT_TRUE(check_cx_univariate(kSym1, kSym2).holds);
    EXPECT_TRUE(check_cx_univariate(kDelta0, kDelta0).holds);
    const auto v = check_cx_univariate(kDelta0, kDelta1);
    ASSERT_FALSE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->kind, WitnessKind::Mean);
    EXPECT_EQ(v.method, Method::UnivariateBreakpoint);
}

TEST(CxUnivariate, BreakpointWitness) {
    const auto v = check_cx_univariate(kSym2, kSym1);
    ASSERT_FALSE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->kind, WitnessKind::Breakpoint);
    EXPECT_GT(v.witness->lhs, v.witness->rhs + 1e-12);
    const double t = v.witness->t;
    auto phi = [t](PointView x) { return std::abs(x[0] - t); };
    EXPECT_DOUBLE_EQ(expect(kSym2, phi), v.witness->lhs);
    EXPECT_DOUBLE_EQ(expect(kSym1, phi), v.witness->rhs);
}

TEST(CxUnivariate, NeedsUnivariateInput) {
    const auto m = dirac({0.0, 0.0});
    EXPECT_ERROR_CODE(check_cx_univariate(m, m), ErrorCode::DimensionError);
    EXPECT_ERROR_CODE(check_icx_univariate(m, m), ErrorCode::DimensionError);
}

TEST(IcxUnivariate, Examples) {
    EXPECT_TRUE(check_icx_univariate(kDelta0, kCoin).holds);
    const auto v = check_icx_univariate(kDelta1, kDelta0);
    ASSERT_FALSE(v.holds);
    EXPECT_EQ(v.witness->kind, WitnessKind::Mean);
    EXPECT_TRUE(check_icx_univariate(kSym1, kSym2).holds);
}

TEST(CheckCx, Examples) {
    const auto origin = dirac({0.0, 0.0});
    const auto corners = new_measure({{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}, {0.25, 0.25, 0.25, 0.25});
    EXPECT_TRUE(check_cx(origin, corners).holds);
    const auto off = check_cx(dirac({1.0, 0.0}), corners);
    EXPECT_FALSE(off.holds);
    ASSERT_TRUE(off.witness);
    EXPECT_EQ(off.witness->kind, WitnessKind::InfeasibilityGap);
    EXPECT_GT(off.witness->gap, 1e-9);
    const auto a = check_cx(kSym1, kSym2);
    EXPECT_TRUE(a.holds);
    EXPECT_EQ(a.method, Method::LpFeasibility);
}

TEST(CheckCx, DimensionMismatch) {
    EXPECT_ERROR_CODE(check_cx(kDelta0, dirac({0.0, 0.0})), ErrorCode::DimensionError);
}

TEST(CheckIcx, Examples) {
    EXPECT_TRUE(check_icx(kDelta0, kCoin).holds);
    EXPECT_FALSE(check_icx(kDelta1, kDelta0).holds);
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = ordered_pair(rng, OrderKind::Cx, 1 + trial % 4, 1 + trial % 2);
        ASSERT_TRUE(check_cx(p.mu, p.nu).holds);
        EXPECT_TRUE(check_icx(p.mu, p.nu).holds);
    }
}

TEST(Agreement, UnivariateAgainstLpAndDirectOracle) {
    Rng rng(101);
    int disagreements = 0;
    int ordered = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto kind = trial % 2 ? OrderKind::Icx : OrderKind::Cx;
        const auto p = any_pair(rng, kind);
        const bool fast = kind == OrderKind::Cx ? check_cx_univariate(p.mu, p.nu).holds
                                                : check_icx_univariate(p.mu, p.nu).holds;
        const bool lp = check_order(p.mu, p.nu, kind).holds;
        const bool direct = oracle::univariate_order(p.mu, p.nu, kind == OrderKind::Icx);
        disagreements += (fast != lp) + (fast != direct);
        ordered += lp;
    }
    EXPECT_EQ(disagreements, 0);
    EXPECT_GT(ordered, 200);
    EXPECT_LT(ordered, 800);
}

TEST(Properties, CxImpliesEqualMeansAndIcx) {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + trial % 2;
        const MeasurePair p{random_measure(rng, 1 + trial % 4, d), random_measure(rng, 1 + trial % 5, d)};
        const auto q = trial % 3 ? ordered_pair(rng, OrderKind::Cx, 2, d) : p;
        if (!check_cx(q.mu, q.nu).holds) continue;
        EXPECT_TRUE(check_icx(q.mu, q.nu).holds);
        const auto a = mean(q.mu);
        const auto b = mean(q.nu);
        for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
    }
}

TEST(Properties, ReflexiveAndTransitive) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto kind = trial % 2 ? OrderKind::Icx : OrderKind::Cx;
        const std::size_t d = 1 + trial % 2;
        const auto chain = ordered_chain(rng, kind, 2, 1 + trial % 3, d);
        for (const auto& m : chain) EXPECT_TRUE(check_order(m, m, kind).holds);
        ASSERT_TRUE(check_order(chain[0], chain[1], kind).holds);
        ASSERT_TRUE(check_order(chain[1], chain[2], kind).holds);
        EXPECT_TRUE(check_order(chain[0], chain[2], kind).holds);
    }
}

TEST(GenerateFamily, SingleAffineFunction) {
    const auto fam = generate_family(FamilyKind::MaxAffine, 1, 1, 1, 4.0, 9);
    ASSERT_EQ(fam.members.size(), 1u);
    EXPECT_EQ(fam.members[0].affine.size(), 1u);
}

TEST(GenerateFamily, DeterministicAndPrefixStable) {
    for (auto kind : {FamilyKind::MaxAffine, FamilyKind::MaxAffineIncreasing, FamilyKind::LipschitzMin}) {
        const auto a = generate_family(kind, 2, 50, 5, 4.0, 3);
        const auto b = generate_family(kind, 2, 50, 5, 4.0, 3);
        EXPECT_EQ(a, b);
        const auto big = generate_family(kind, 2, 80, 5, 4.0, 3);
        for (std::size_t i = 0; i < a.members.size(); ++i) EXPECT_EQ(a.members[i], big.members[i]);
        EXPECT_NE(a, generate_family(kind, 2, 50, 5, 4.0, 4));
    }
}

TEST(GenerateFamily, RationalCoefficientsWithSmallDenominators) {
    const auto fam = generate_family(FamilyKind::MaxAffine, 3, 100, 5, 2.0, 1);
    for (const auto& f : fam.members) {
        EXPECT_GE(f.affine.size(), 1u);
        EXPECT_LE(f.affine.size(), 5u);
        for (const auto& p : f.affine) {
            for (const auto& a : p.slope) {
                EXPECT_GE(a.den, 1);
                EXPECT_LE(a.den, kMaxDenominator);
                EXPECT_LE(std::abs(a.value()), 2.0);
            }
        }
    }
}

TEST(GenerateFamily, IncreasingMembersAreMonotone) {
    const auto fam = generate_family(FamilyKind::MaxAffineIncreasing, 2, 200, 5, 4.0, 5);
    Rng rng(6);
    for (const auto& f : fam.members) {
        for (const auto& p : f.affine) {
            for (const auto& a : p.slope) EXPECT_GE(a.num, 0);
        }
        const Point x{rng.uniform01() * 4 - 2, rng.uniform01() * 4 - 2};
        const Point y{x[0] + rng.uniform01(), x[1] + rng.uniform01()};
        EXPECT_LE(f(x), f(y));
    }
}

TEST(GenerateFamily, LipschitzMembersAreOneLipschitz) {
    const auto fam = generate_family(FamilyKind::LipschitzMin, 2, 100, 4, 3.0, 2);
    Rng rng(1);
    for (const auto& f : fam.members) {
        const Point x{rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3};
        const Point y{rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3};
        EXPECT_LE(std::abs(f(x) - f(y)), distance(x, y) + 1e-12);
    }
}

TEST(GenerateFamily, JsonRoundTrip) {
    for (auto kind : {FamilyKind::MaxAffine, FamilyKind::LipschitzMin}) {
        const auto fam = generate_family(kind, 2, 20, 3, 4.0, 12);
        const nlohmann::json j = fam;
        EXPECT_EQ(nlohmann::json::parse(j.dump()).get<TestFamily>(), fam);
    }
}

TEST(Screen, Examples) {
    TestFamily minus_x{FamilyKind::MaxAffine, 1, 0, {}};
    TestFunction f;
    f.affine.push_back({{Rational{-1, 1}}, Rational{0, 1}});
    minus_x.members.push_back(f);
    const auto v = screen_order(kDelta0, kDelta1, minus_x, OrderKind::Cx);
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->kind, WitnessKind::TestFunction);
    EXPECT_EQ(v.witness->member, 0u);

    Rng rng(3);
    const auto fam = generate_family(FamilyKind::MaxAffine, 1, 200, 5, 4.0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_measure(rng, 4);
        EXPECT_TRUE(screen_order(m, m, fam, OrderKind::Cx).holds);
    }
    const auto rev = screen_order(kSym2, kSym1, fam, OrderKind::Cx);
    EXPECT_FALSE(rev.holds);
    EXPECT_EQ(rev.method, Method::FamilyScreen);
}

TEST(Screen, WitnessIsAGenuineViolation) {
    Rng rng(44);
    const auto fam = generate_family(FamilyKind::MaxAffine, 1, 300, 5, 4.0, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = broken_pair(rng, OrderKind::Cx, 3);
        const auto v = screen_order(p.mu, p.nu, fam, OrderKind::Cx);
        if (v.holds) continue;
        const auto& phi = fam.members[v.witness->member];
        EXPECT_GT(expect(p.mu, phi), expect(p.nu, phi) + 1e-12);
    }
}

TEST(Screen, KindMismatch) {
    const auto fam = generate_family(FamilyKind::MaxAffine, 1, 5, 2, 4.0, 1);
    EXPECT_ERROR_CODE(screen_order(kDelta0, kDelta1, fam, OrderKind::Icx), ErrorCode::KindMismatch);
    const auto lip = generate_family(FamilyKind::LipschitzMin, 1, 5, 2, 4.0, 1);
    EXPECT_ERROR_CODE(screen_order(kDelta0, kDelta1, lip, OrderKind::Cx), ErrorCode::KindMismatch);
}

TEST(Screen, SoundOnOrderedPairs) {
    Rng rng(9);
    const auto cx = generate_family(FamilyKind::MaxAffine, 2, 200, 5, 4.0, 10);
    const auto icx = generate_family(FamilyKind::MaxAffineIncreasing, 2, 200, 5, 4.0, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = ordered_pair(rng, OrderKind::Cx, 1 + trial % 4, 2);
        EXPECT_TRUE(screen_order(p.mu, p.nu, cx, OrderKind::Cx).holds);
        const auto q = ordered_pair(rng, OrderKind::Icx, 1 + trial % 4, 2);
        EXPECT_TRUE(screen_order(q.mu, q.nu, icx, OrderKind::Icx).holds);
    }
}

TEST(Rationals, Parse) {
    EXPECT_EQ(parse_rational("3/4"), (Rational{3, 4}));
    EXPECT_EQ(parse_rational("-5"), (Rational{-5, 1}));
    EXPECT_EQ((Rational{-1, 2}).str(), "-1/2");
    EXPECT_ERROR_CODE(parse_rational("1/0"), ErrorCode::NonFiniteInput);
}
