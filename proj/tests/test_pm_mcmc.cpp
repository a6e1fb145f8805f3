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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "strassen/generators.hpp"
#include "strassen/pm_mcmc.hpp"
#include "test_support.hpp"

using namespace strassen;

namespace {

const DiscreteMeasure kOne = dirac({1.0});
const DiscreteMeasure kSplit = new_measure_1d({0.5, 1.5}, {0.5, 0.5});

/// Two states, uniform target, independent uniform proposal.
PmChainSpec two_state(const DiscreteMeasure& q) {
    return PmChainSpec{{"a", "b"}, {0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}, {q, q}};
}

std::vector<std::vector<double>> rows(const ChainMatrix& cm) {
    std::vector<std::vector<double>> t(cm.size(), std::vector<double>(cm.size()));
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t b = 0; b < cm.size(); ++b) t[a][b] = cm.at(a, b);
    }
    return t;
}

const std::vector<double> kIndicator{0.0, 1.0};

}  // namespace

TEST(Validate, RejectsBadSpecs) {
    auto s = two_state(kOne);
    s.target = {0.6, 0.6};
    EXPECT_ERROR_CODE(build_pm_kernel(s), ErrorCode::InvalidSpec);
    s = two_state(kOne);
    s.proposal = {0.5, 0.6, 0.5, 0.5};
    EXPECT_ERROR_CODE(build_pm_kernel(s), ErrorCode::InvalidSpec);
    s = two_state(new_measure_1d({0.5, 1.0}, {0.5, 0.5}));
    EXPECT_ERROR_CODE(build_pm_kernel(s), ErrorCode::InvalidSpec);
    s = two_state(new_measure_1d({0.0, 2.0}, {0.5, 0.5}));
    EXPECT_ERROR_CODE(build_pm_kernel(s), ErrorCode::InvalidSpec);
    s = two_state(kOne);
    s.weights.pop_back();
    EXPECT_ERROR_CODE(build_pm_kernel(s), ErrorCode::InvalidSpec);
}

TEST(BuildPmKernel, UnitWeightsGiveMetropolisHastings) {
    PmChainSpec s{{"a", "b", "c"}, {0.2, 0.3, 0.5}, {0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0}, {kOne, kOne, kOne}};
    const auto cm = build_pm_kernel(s);
    ASSERT_EQ(cm.size(), 3u);
    for (std::size_t x = 0; x < 3; ++x) {
        double off = 0.0;
        for (std::size_t y = 0; y < 3; ++y) {
            if (x == y) continue;
            const double expected = s.q(x, y) * std::min(1.0, s.target[y] / s.target[x]);
            EXPECT_NEAR(cm.at(x, y), expected, 1e-15);
            off += expected;
        }
        EXPECT_NEAR(cm.at(x, x), 1.0 - off, 1e-15);
    }
    EXPECT_LE(stationary_check(cm), 1e-10);
}

TEST(BuildPmKernel, IidTwoStateChain) {
    const auto cm = build_pm_kernel(two_state(kOne));
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(cm.at(a, b), 0.5);
    }
    EXPECT_EQ(stationary_check(cm), 0.0);
    EXPECT_EQ(row_sum_residual(cm), 0.0);
}

TEST(BuildPmKernel, RandomSpecsAreReversibleAndStochastic) {
    Rng rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pair = random_pm_pair(rng, 2 + trial % 3, 1 + trial % 3);
        for (const auto* s : {&pair.spec, &pair.spec_prime}) {
            const auto cm = build_pm_kernel(*s);
            EXPECT_LE(stationary_check(cm), 1e-10);
            EXPECT_LE(row_sum_residual(cm), 1e-10);
            double total = 0.0;
            for (double l : cm.law) total += l;
            EXPECT_NEAR(total, 1.0, 1e-12);
            for (double t : cm.transition) EXPECT_GE(t, 0.0);
        }
    }
}

TEST(StationaryCheck, PerturbationAndIdentity) {
    auto cm = build_pm_kernel(two_state(kOne));
    cm.at(0, 1) += 1e-3;
    cm.at(0, 0) -= 1e-3;
    EXPECT_NEAR(stationary_check(cm), 0.5e-3, 1e-15);
    ChainMatrix id{{{0, 1.0}, {1, 1.0}, {2, 1.0}}, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0.2, 0.3, 0.5}};
    EXPECT_EQ(stationary_check(id), 0.0);
}

TEST(AsymptoticVariance, Examples) {
    const auto iid = build_pm_kernel(two_state(kOne));
    EXPECT_NEAR(asymptotic_variance(iid, kIndicator), 0.25, 1e-12);
    EXPECT_NEAR(asymptotic_variance(iid, {3.0, 3.0}), 0.0, 1e-15);
    // Stay with probability 1/2 in each state: also iid uniform.
    ChainMatrix lazy{{{0, 1.0}, {1, 1.0}}, {0.5, 0.5, 0.5, 0.5}, {0.5, 0.5}};
    EXPECT_NEAR(asymptotic_variance(lazy, kIndicator), 0.25, 1e-12);
}

TEST(AsymptoticVariance, ClosedFormForTwoStateChain) {
    // Flip with probability p: sigma^2 = (1/4) (1 - p') / p' with p' = 2p.
    for (double p : {0.1, 0.25, 0.4}) {
        ChainMatrix cm{{{0, 1.0}, {1, 1.0}}, {1 - p, p, p, 1 - p}, {0.5, 0.5}};
        const double lambda = 1.0 - 2.0 * p;
        EXPECT_NEAR(asymptotic_variance(cm, kIndicator), 0.25 * (1 + lambda) / (1 - lambda), 1e-12);
    }
}

TEST(AsymptoticVariance, Errors) {
    ChainMatrix id{{{0, 1.0}, {1, 1.0}}, {1, 0, 0, 1}, {0.5, 0.5}};
    EXPECT_ERROR_CODE(asymptotic_variance(id, kIndicator), ErrorCode::Reducible);
    const auto iid = build_pm_kernel(two_state(kOne));
    EXPECT_ERROR_CODE(asymptotic_variance(iid, {1.0}), ErrorCode::DimensionMismatch);
}

TEST(AsymptoticVariance, MatchesAutocovarianceSum) {
    Rng rng(107);
    for (int trial = 0; trial < 30; ++trial) {
        const auto pair = random_pm_pair(rng, 2 + trial % 2, 1 + trial % 2);
        const auto cm = build_pm_kernel(pair.spec_prime);
        const auto f = lift(cm, random_state_function(rng, pair.spec.size()));
        const double exact = asymptotic_variance(cm, f);
        const double truncated = oracle::truncated_variance(rows(cm), cm.law, f, 20000);
        EXPECT_NEAR(exact, truncated, 1e-7 * (1.0 + std::abs(exact))) << "trial " << trial;
        EXPECT_GE(exact, -1e-9);
    }
}

TEST(Breve, IdenticalUnitWeightsCollapse) {
    const auto s = two_state(kOne);
    const std::vector<Coupling> rs{identity_coupling(kOne), identity_coupling(kOne)};
    const auto b = build_breve_kernels(s, s, rs);
    ASSERT_EQ(b.k.size(), 2u);
    for (std::size_t a = 0; a < 2; ++a) {
        EXPECT_EQ(b.k.states[a].w, 1.0);
        EXPECT_EQ(b.k.states[a].v, 1.0);
        EXPECT_EQ(b.k.law[a], 0.5);
    }
    EXPECT_EQ(b.k.transition, b.k_prime.transition);
}

TEST(Breve, SplitWeightsIdentity) {
    const auto s = two_state(kOne);
    const auto sp = two_state(kSplit);
    const Coupling r(kOne, kSplit, {0.5, 0.5});
    const auto b = build_breve_kernels(s, sp, {r, r});
    ASSERT_EQ(b.k.size(), 4u);
    // pi^ = pi(x) R(1, v) v: 1/8 at v = 1/2 and 3/8 at v = 3/2.
    for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(b.k.law[a], 0.5 * 0.5 * b.k.states[a].v, 1e-15);
    EXPECT_LE(b.residuals.law_vs_pi_tilde, 1e-12);
    EXPECT_LE(b.residuals.law_vs_pi_tilde_prime, 1e-12);
    EXPECT_LE(b.residuals.reversibility, 1e-10);
    EXPECT_LE(b.residuals.reversibility_prime, 1e-10);
    EXPECT_LE(b.residuals.kernel_vs_k, 1e-10);
    EXPECT_LE(b.residuals.kernel_vs_k_prime, 1e-10);
}

TEST(Breve, Errors) {
    const auto s = two_state(kOne);
    const auto sp = two_state(kSplit);
    auto other = sp;
    other.target = {0.25, 0.75};
    const Coupling r(kOne, kSplit, {0.5, 0.5});
    EXPECT_ERROR_CODE(build_breve_kernels(s, other, {r, r}), ErrorCode::SpecMismatch);
    const Coupling skew(kSplit, kSplit, {0.0, 0.5, 0.5, 0.0});
    EXPECT_ERROR_CODE(build_breve_kernels(sp, sp, {skew, skew}), ErrorCode::CouplingInvalid);
    EXPECT_ERROR_CODE(build_breve_kernels(s, sp, {r}), ErrorCode::CouplingInvalid);
    EXPECT_ERROR_CODE(build_breve_kernels(s, sp, {identity_coupling(kOne), r}), ErrorCode::CouplingInvalid);
}

TEST(Breve, RandomTriplesSatisfyIdentities) {
    Rng rng(109);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pair = random_pm_pair(rng, 2 + trial % 3, 1 + trial % 3);
        std::vector<Coupling> rs;
        for (std::size_t x = 0; x < pair.spec.size(); ++x) {
            auto c = martingale_coupling(pair.spec.weights[x], pair.spec_prime.weights[x]);
            ASSERT_TRUE(c);
            rs.push_back(*c.coupling);
        }
        const auto b = build_breve_kernels(pair.spec, pair.spec_prime, rs);
        EXPECT_LE(b.residuals.reversibility, 1e-10);
        EXPECT_LE(b.residuals.reversibility_prime, 1e-10);
        EXPECT_LE(b.residuals.law_vs_pi_tilde, 1e-10);
        EXPECT_LE(b.residuals.law_vs_pi_tilde_prime, 1e-10);
        EXPECT_LE(b.residuals.kernel_vs_k, 1e-10);
        EXPECT_LE(b.residuals.kernel_vs_k_prime, 1e-10);
        EXPECT_LE(row_sum_residual(b.k), 1e-10);
        EXPECT_LE(row_sum_residual(b.k_prime), 1e-10);
    }
}

// Reference values from tests/oracles/pm_two_state.py (exact rational arithmetic).
TEST(CompareVariances, TwoStateExactValues) {
    const auto cmp = compare_variances(two_state(kOne), two_state(kSplit), kIndicator);
    EXPECT_NEAR(cmp.sigma2, 0.25, 1e-12);
    EXPECT_NEAR(cmp.sigma2_prime, 7.0 / 16.0, 1e-12);
    EXPECT_TRUE(cmp.ordered);
    EXPECT_NEAR(cmp.gap, 3.0 / 16.0, 1e-12);
    EXPECT_NEAR(cmp.sigma2_breve, cmp.sigma2, 1e-10);
    EXPECT_NEAR(cmp.sigma2_breve_prime, cmp.sigma2_prime, 1e-10);
}

TEST(CompareVariances, SameWeightsGiveEqualVariances) {
    const auto s = two_state(kSplit);
    const auto cmp = compare_variances(s, s, kIndicator);
    EXPECT_NEAR(cmp.sigma2, cmp.sigma2_prime, 1e-12);
    EXPECT_TRUE(cmp.ordered);
}

TEST(CompareVariances, Errors) {
    EXPECT_ERROR_CODE(compare_variances(two_state(kSplit), two_state(kOne), kIndicator), ErrorCode::NotOrderedWeights);
    EXPECT_ERROR_CODE(compare_variances(two_state(kOne), two_state(kSplit), {1.0}), ErrorCode::DimensionMismatch);
}

TEST(CompareVariances, RandomSpreadsAreOrdered) {
    Rng rng(113);
    int comparisons = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto pair = random_pm_pair(rng, 3, 1 + trial % 3);
        for (int k = 0; k < 5; ++k) {
            const auto cmp = compare_variances(pair.spec, pair.spec_prime, random_state_function(rng, 3));
            EXPECT_TRUE(cmp.ordered) << "trial " << trial << " gap " << cmp.gap;
            EXPECT_NEAR(cmp.sigma2_breve, cmp.sigma2, 1e-8);
            EXPECT_NEAR(cmp.sigma2_breve_prime, cmp.sigma2_prime, 1e-8);
            ++comparisons;
        }
    }
    EXPECT_EQ(comparisons, 1000);
}

TEST(Simulate, IidChainWithinCltBand) {
    const auto cm = build_pm_kernel(two_state(kOne));
    const auto r = simulate(cm, kIndicator, 100000, 1);
    EXPECT_LE(std::abs(r.average - 0.5), 3.0 * std::sqrt(0.25 / 1e5));
    EXPECT_EQ(r.steps, 100000u);
    EXPECT_EQ(r.batches, 316u);
    EXPECT_NEAR(r.batch_means_variance, 0.25, 0.1);
}

TEST(Simulate, DeterministicAndConstant) {
    const auto pair = [] {
        Rng rng(127);
        return random_pm_pair(rng, 3, 2);
    }();
    const auto cm = build_pm_kernel(pair.spec_prime);
    const auto f = lift(cm, {1.0, -2.0, 0.5});
    const auto a = simulate(cm, f, 5000, 9);
    const auto b = simulate(cm, f, 5000, 9);
    EXPECT_EQ(a.average, b.average);
    EXPECT_EQ(a.batch_means_variance, b.batch_means_variance);
    const auto c = simulate(cm, std::vector<double>(cm.size(), 2.5), 1000, 3);
    EXPECT_EQ(c.average, 2.5);
}

TEST(Simulate, Reducible) {
    ChainMatrix id{{{0, 1.0}, {1, 1.0}}, {1, 0, 0, 1}, {0.5, 0.5}};
    EXPECT_ERROR_CODE(simulate(id, kIndicator, 10, 1), ErrorCode::Reducible);
}

// Statistical smoke test: 3-sigma CLT band should catch at least 95 of 100 seeds.
TEST(Simulate, CltBandAcrossSeeds) {
    Rng rng(131);
    const auto pair = random_pm_pair(rng, 3, 2);
    const auto cm = build_pm_kernel(pair.spec_prime);
    const auto f = lift(cm, {1.0, 0.0, -1.0});
    const double sigma2 = asymptotic_variance(cm, f);
    double mean = 0.0;
    for (std::size_t a = 0; a < cm.size(); ++a) mean += cm.law[a] * f[a];
    const std::size_t n = 20000;
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = simulate(cm, f, n, seed);
        inside += std::abs(r.average - mean) <= 3.0 * std::sqrt(sigma2 / static_cast<double>(n));
    }
    EXPECT_GE(inside, 95);
}

TEST(PmJson, RoundTrip) {
    const auto s = two_state(kSplit);
    const nlohmann::json j = s;
    const auto back = pm_spec_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.states, s.states);
    EXPECT_EQ(back.target, s.target);
    EXPECT_EQ(back.proposal, s.proposal);
    EXPECT_EQ(back.weights, s.weights);
}
