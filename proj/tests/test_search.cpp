// Copyright 2026 The eaqmac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "eaqmac/problems.hpp"
#include "eaqmac/search.hpp"
#include "random_problems.hpp"

using namespace eaqmac;

namespace {

std::vector<MatF> scalars(const Field &f, std::vector<std::int64_t> values) {
    std::vector<MatF> out;
    for (auto v : values) out.push_back(MatF::from_rows(f, {{v}}));
    return out;
}

}  // namespace

TEST(Objective, Example1Precoders) {
    const auto problem = problems::example1();
    const auto f = problem.field();
    EXPECT_EQ(objective_c(problem, identity_precoders(problem)), 2u);
    EXPECT_EQ(objective_c(problem, scalars(f, {2, 2, 1, 1})), 1u);
    EXPECT_EQ(objective_c(problem, scalars(f, {2, 1, 1, 1})), 2u);
}

TEST(Objective, Example2IdentityDependsOnCharacteristic) {
    EXPECT_EQ(objective_c(problems::example2(2), identity_precoders(problems::example2(2))), 0u);
    EXPECT_EQ(objective_c(problems::example2(3), identity_precoders(problems::example2(3))), 2u);
    EXPECT_EQ(objective_c(problems::example2(5), identity_precoders(problems::example2(5))), 2u);
}

TEST(Objective, RejectsBadPrecoders) {
    const auto problem = problems::example1();
    EXPECT_THROW(objective_c(problem, scalars(problem.field(), {1, 0, 1, 1})), Error);
    EXPECT_THROW(objective_c(problem, scalars(problem.field(), {1, 1})), Error);
}

TEST(GeneralLinear, OrderAndEnumeration) {
    EXPECT_EQ(gl_order(1, 5), 4u);
    EXPECT_EQ(gl_order(2, 3), 48u);
    EXPECT_EQ(gl_order(3, 2), 168u);
    EXPECT_EQ(gl_order(2, 4), 180u);
    for (auto [p, m] : {std::pair{3u, 2u}, {2u, 3u}, {5u, 1u}}) {
        const auto f = FieldSpec::make(p);
        const auto all = enumerate_gl(f, m);
        EXPECT_EQ(all.size(), gl_order(m, p));
        EXPECT_EQ(all.size(), oracle::all_invertible(support::naive(*f), m).size());
        std::set<std::vector<std::vector<std::int64_t>>> distinct;
        for (const auto &a : all) {
            EXPECT_TRUE(is_invertible(a));
            distinct.insert(a.to_rows());
        }
        EXPECT_EQ(distinct.size(), all.size());
    }
}

TEST(BruteForce, MatchesOracleOnRandomProblems) {
    std::mt19937_64 rng(31);
    for (std::uint32_t d : {2u, 3u}) {
        for (int t = 0; t < 8; ++t) {
            const auto rp = support::random_problem(d, rng, 5'000);
            const auto result = brute_force_c(rp.problem, 1'000'000);
            EXPECT_EQ(result.c_min, oracle::brute_force_min_c(support::naive(*rp.problem.field()), rp.blocks));
            EXPECT_EQ(objective_c(rp.problem, result.argmin), result.c_min);
        }
    }
}

TEST(BruteForce, Example1Optimum) {
    const auto result = brute_force_c(problems::example1(), 1'000);
    EXPECT_EQ(result.c_min, 1u);
    EXPECT_LE(result.evaluated, 16u);
}

TEST(BruteForce, BudgetExceeded) {
    try {
        brute_force_c(problems::example3(4), 100);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
}

TEST(LowerBound, KnownProblems) {
    EXPECT_EQ(lower_bound_c(problems::example1()), 1u);
    EXPECT_EQ(lower_bound_c(problems::example2(5)), 0u);
    for (std::size_t s = 2; s <= 5; ++s) EXPECT_EQ(lower_bound_c(problems::example3(s)), s - 1);
    EXPECT_EQ(lower_bound_c(problems::sigma(4)), 0u);
}

TEST(LowerBound, NeverExceedsExactMinimum) {
    std::mt19937_64 rng(37);
    for (std::uint32_t d : {2u, 3u, 5u}) {
        for (int t = 0; t < 10; ++t) {
            const auto rp = support::random_problem(d, rng, 20'000);
            EXPECT_LE(lower_bound_c(rp.problem), brute_force_c(rp.problem, 1'000'000).c_min);
        }
    }
}

TEST(Search, StrategiesAreSoundAndDeterministic) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 12; ++t) {
        const auto rp = support::random_problem(t % 2 ? 3 : 5, rng, 20'000);
        const auto exact = brute_force_c(rp.problem, 1'000'000).c_min;
        for (auto strategy : {Strategy::Exhaustive, Strategy::Diagonal, Strategy::Random, Strategy::Portfolio}) {
            SearchOptions options;
            options.strategy = strategy;
            options.seed = 5;
            options.random_samples = 500;
            const auto a = min_aux_qudits(rp.problem, options);
            const auto b = min_aux_qudits(rp.problem, options);
            EXPECT_GE(a.c_best, exact);
            EXPECT_EQ(objective_c(rp.problem, a.precoders), a.c_best);
            EXPECT_EQ(a.c_best, b.c_best);
            EXPECT_EQ(a.candidates_evaluated, b.candidates_evaluated);
            if (a.proven_optimal) {
                EXPECT_EQ(a.c_best, exact);
            }
            if (strategy == Strategy::Exhaustive || strategy == Strategy::Portfolio) {
                EXPECT_EQ(a.c_best, exact);
            }
        }
    }
}

TEST(Search, ExhaustiveOverBudgetFallsBack) {
    SearchOptions options;
    options.strategy = Strategy::Exhaustive;
    options.budget = 3;
    const auto out = min_aux_qudits(problems::example1(), options);
    EXPECT_TRUE(out.budget_exceeded);
    EXPECT_FALSE(out.proven_optimal && out.c_best != 1u);
}

TEST(Search, StrategyNames) {
    for (auto s : {Strategy::Exhaustive, Strategy::Diagonal, Strategy::Random, Strategy::Portfolio})
        EXPECT_EQ(parse_strategy(to_string(s)), s);
    EXPECT_FALSE(parse_strategy("annealing").has_value());
}

TEST(Rate, ExactFractions) {
    EXPECT_EQ(rate_of(problems::example1(), 1), Rational(4, 5));
    EXPECT_EQ(rate_of(problems::example3(4), 3), Rational(4, 5));
    EXPECT_EQ(rate_of(problems::sigma(6), 0), Rational(1, 3));
}

TEST(Region, Example1Point) {
    const auto problem = problems::example1();
    const std::vector<Rational> delta{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1)};
    const auto region = cost_region(problem, 1);
    EXPECT_EQ(region.sum_bound(), 5u);
    EXPECT_TRUE(region.contains(delta));
    EXPECT_TRUE(region.sum_tight(delta));
    EXPECT_TRUE(region_check(problem, 1, delta));
    for (std::size_t s = 0; s < 4; ++s) {
        auto low = delta;
        low[s] = low[s] - Rational(1, 4);
        EXPECT_FALSE(region.contains(low)) << "server " << s;
    }
    EXPECT_THROW(region.contains(std::vector<Rational>{Rational(1)}), Error);
}
