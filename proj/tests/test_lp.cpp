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

#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "strassen/coupling.hpp"
#include "strassen/lp.hpp"
#include "strassen/rng.hpp"
#include "test_support.hpp"

using namespace strassen;

namespace {

LinearProgram make(std::size_t n, std::vector<double> c) {
    LinearProgram lp;
    lp.num_vars = n;
    lp.objective = std::move(c);
    return lp;
}

/// Random bounded LP: a box row sum(x) <= B keeps it bounded, the rest are
/// random rows with small integer coefficients.
LinearProgram random_lp(Rng& rng, std::size_t n, std::size_t m) {
    LinearProgram lp;
    lp.num_vars = n;
    for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(static_cast<double>(rng.uniform_int(-5, 5)));
    const auto box = lp.add_row(RowSense::Le, static_cast<double>(rng.uniform_int(1, 6)));
    for (std::size_t j = 0; j < n; ++j) lp.coeff(box, j) = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        const auto sense = static_cast<RowSense>(rng.uniform_int(0, 2));
        const auto r = lp.add_row(sense, static_cast<double>(rng.uniform_int(-3, 3)));
        for (std::size_t j = 0; j < n; ++j) lp.coeff(r, j) = static_cast<double>(rng.uniform_int(-3, 3));
    }
    return lp;
}

}  // namespace

TEST(Solve, MinFirstCoordinateOnSimplex) {
    auto lp = make(2, {1.0, 0.0});
    const auto r = lp.add_row(RowSense::Eq, 1.0);
    lp.coeff(r, 0) = lp.coeff(r, 1) = 1.0;
    const auto out = solve(lp);
    ASSERT_EQ(out.status, LpStatus::Optimal);
    EXPECT_EQ(out.value, 0.0);
    EXPECT_EQ(out.solution, (std::vector<double>{0.0, 1.0}));
}

TEST(Solve, InfeasibleNegativeRhs) {
    auto lp = make(1, {0.0});
    const auto r = lp.add_row(RowSense::Eq, -1.0);
    lp.coeff(r, 0) = 1.0;
    const auto out = solve(lp);
    ASSERT_EQ(out.status, LpStatus::Infeasible);
    EXPECT_DOUBLE_EQ(out.infeasibility_gap, 1.0);
}

TEST(Solve, SmallTransportation) {
    const auto mu = new_measure_1d({0.0, 1.0}, {0.5, 0.5});
    auto lp = coupling_program(mu, mu, std::nullopt);
    lp.objective = {0.0, 1.0, 1.0, 0.0};
    const auto out = solve(lp);
    ASSERT_EQ(out.status, LpStatus::Optimal);
    EXPECT_EQ(out.value, 0.0);
    EXPECT_EQ(out.solution, (std::vector<double>{0.5, 0.0, 0.0, 0.5}));
}

TEST(Solve, Unbounded) {
    auto lp = make(2, {-1.0, 0.0});
    const auto r = lp.add_row(RowSense::Ge, 1.0);
    lp.coeff(r, 0) = 1.0;
    EXPECT_EQ(solve(lp).status, LpStatus::Unbounded);
}

TEST(Solve, RedundantEqualityRows) {
    auto lp = make(2, {1.0, 2.0});
    for (int k = 0; k < 3; ++k) {
        const auto r = lp.add_row(RowSense::Eq, 2.0);
        lp.coeff(r, 0) = lp.coeff(r, 1) = 2.0;
    }
    const auto out = solve(lp);
    ASSERT_EQ(out.status, LpStatus::Optimal);
    EXPECT_NEAR(out.value, 1.0, 1e-12);
}

TEST(Solve, ValidatesShapes) {
    auto lp = make(2, {1.0});
    lp.add_row(RowSense::Eq, 1.0);
    EXPECT_ERROR_CODE(solve(lp), ErrorCode::DimensionMismatch);
    auto empty = make(1, {1.0});
    EXPECT_ERROR_CODE(solve(empty), ErrorCode::DimensionMismatch);
    auto bad = make(1, {NAN});
    bad.add_row(RowSense::Eq, 1.0);
    EXPECT_ERROR_CODE(solve(bad), ErrorCode::NonFiniteInput);
}

TEST(Solve, IterationLimitIsAnError) {
    const auto mu = new_measure_1d({-1.0, 1.0}, {0.5, 0.5});
    const auto nu = new_measure_1d({-2.0, 2.0}, {0.5, 0.5});
    const auto lp = coupling_program(mu, nu, OrderKind::Cx);
    LpOptions opts;
    opts.max_pivots = 1;
    EXPECT_ERROR_CODE(solve(lp, opts), ErrorCode::IterationLimit);
    EXPECT_GT(solve(lp).pivots, 1u);
}

TEST(Feasibility, Examples) {
    const std::vector<double> a{1.0, 1.0};
    const std::vector<double> b{1.0};
    const std::vector<RowSense> s{RowSense::Eq};
    EXPECT_EQ(feasibility(2, a, b, s).status, LpStatus::Optimal);
    const std::vector<double> a2{1.0};
    const std::vector<double> b2{-1.0};
    EXPECT_EQ(feasibility(1, a2, b2, s).status, LpStatus::Infeasible);
}

TEST(Feasibility, ExampleAMartingaleSystem) {
    const auto mu = new_measure_1d({-1.0, 1.0}, {0.5, 0.5});
    const auto nu = new_measure_1d({-2.0, 2.0}, {0.5, 0.5});
    const auto lp = coupling_program(mu, nu, OrderKind::Cx);
    const auto out = feasibility(lp.num_vars, lp.matrix, lp.rhs, lp.senses);
    ASSERT_EQ(out.status, LpStatus::Optimal);
    const std::vector<double> expected{0.375, 0.125, 0.125, 0.375};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(out.solution[k], expected[k], 1e-12);
}

TEST(Solve, AgreesWithVertexEnumeration) {
    Rng rng(17);
    int optimal = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 3));
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(7 - n)));
        const auto lp = random_lp(rng, n, m);
        const auto out = solve(lp);
        const auto oracle = oracle::vertex_minimum(lp);
        ASSERT_NE(out.status, LpStatus::Unbounded);
        if (!oracle) {
            EXPECT_EQ(out.status, LpStatus::Infeasible) << "trial " << trial;
            ++infeasible;
            continue;
        }
        ASSERT_EQ(out.status, LpStatus::Optimal) << "trial " << trial;
        EXPECT_NEAR(out.value, *oracle, 1e-8) << "trial " << trial;
        ++optimal;
    }
    EXPECT_GT(optimal, 50);
    EXPECT_GT(infeasible, 5);
}

TEST(Solve, OptimalPointsAreFeasibleAndBasic) {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const auto lp = random_lp(rng, 3 + trial % 5, 2 + trial % 4);
        const auto out = solve(lp);
        if (out.status != LpStatus::Optimal) continue;
        std::size_t nonzero = 0;
        for (double x : out.solution) {
            EXPECT_GE(x, -1e-9);
            nonzero += x != 0.0;
        }
        EXPECT_LE(nonzero, lp.num_rows());
        for (std::size_t i = 0; i < lp.num_rows(); ++i) {
            double ax = 0.0;
            for (std::size_t j = 0; j < lp.num_vars; ++j) ax += lp.coeff(i, j) * out.solution[j];
            switch (lp.senses[i]) {
                case RowSense::Eq: EXPECT_NEAR(ax, lp.rhs[i], 1e-8); break;
                case RowSense::Ge: EXPECT_GE(ax, lp.rhs[i] - 1e-8); break;
                case RowSense::Le: EXPECT_LE(ax, lp.rhs[i] + 1e-8); break;
            }
        }
    }
}

TEST(Solve, WeakDualityWithSimplexMultipliers) {
    Rng rng(29);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto lp = random_lp(rng, 3 + trial % 5, 2 + trial % 4);
        const auto out = solve(lp);
        if (out.status != LpStatus::Optimal) continue;
        ASSERT_EQ(out.duals.size(), lp.num_rows());
        double by = 0.0;
        for (std::size_t i = 0; i < lp.num_rows(); ++i) {
            by += lp.rhs[i] * out.duals[i];
            if (lp.senses[i] == RowSense::Ge) {
                EXPECT_GE(out.duals[i], -1e-8);
            }
            if (lp.senses[i] == RowSense::Le) {
                EXPECT_LE(out.duals[i], 1e-8);
            }
        }
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            double aty = 0.0;
            for (std::size_t i = 0; i < lp.num_rows(); ++i) aty += lp.coeff(i, j) * out.duals[i];
            EXPECT_LE(aty, lp.objective[j] + 1e-8);
        }
        EXPECT_GE(out.value, by - 1e-8);
        EXPECT_NEAR(out.value, by, 1e-8);
        ++checked;
    }
    EXPECT_GT(checked, 50);
}

TEST(Solve, DeterministicOutcome) {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto lp = random_lp(rng, 5, 4);
        const auto a = solve(lp);
        const auto b = solve(lp);
        EXPECT_EQ(a.status, b.status);
        EXPECT_EQ(a.solution, b.solution);
        EXPECT_EQ(a.duals, b.duals);
        EXPECT_EQ(a.pivots, b.pivots);
        EXPECT_EQ(a.infeasibility_gap, b.infeasibility_gap);
    }
}

TEST(Solve, TraceDumpsPivots) {
    auto lp = make(2, {1.0, 0.0});
    const auto r = lp.add_row(RowSense::Eq, 1.0);
    lp.coeff(r, 0) = lp.coeff(r, 1) = 1.0;
    std::ostringstream os;
    LpOptions opts;
    opts.trace = &os;
    solve(lp, opts);
    EXPECT_NE(os.str().find("pivot"), std::string::npos);
}
