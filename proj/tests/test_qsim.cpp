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

#include "eaqmac/problems.hpp"
#include "eaqmac/qsim.hpp"
#include "random_problems.hpp"

using namespace eaqmac;

namespace {

constexpr double kTol = 1e-9;

double diff(const CMatrix &a, const oracle::CMat &b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j) out = std::max(out, std::abs(a(i, j) - b[i][j]));
    return out;
}

std::vector<FieldElem> random_vector(const FieldSpec &f, std::size_t n, std::mt19937_64 &rng) {
    std::vector<FieldElem> out(n);
    for (auto &v : out) v = FieldElem{static_cast<std::uint32_t>(rng() % f.order())};
    return out;
}

Field field_of(std::uint32_t d) { return d == 4 ? FieldSpec::make(2, 2) : d == 9 ? FieldSpec::make(3, 2) : FieldSpec::make(d); }

}  // namespace

TEST(Weyl, SingleQuditMatchesOracle) {
    for (std::uint32_t d : {2u, 3u, 4u, 5u, 9u}) {
        const auto f = field_of(d);
        const auto o = support::naive(*f);
        for (std::uint32_t x = 0; x < d; ++x)
            for (std::uint32_t z = 0; z < d; ++z)
                EXPECT_LT(diff(weyl(*f, FieldElem{x}, FieldElem{z}), oracle::single_weyl(o, x, z)), kTol);
    }
}

TEST(Weyl, TensorProductMatchesOracle) {
    std::mt19937_64 rng(43);
    for (std::uint32_t d : {2u, 3u, 4u}) {
        const auto f = field_of(d);
        const auto o = support::naive(*f);
        for (std::size_t n : {1u, 2u, 3u}) {
            for (int t = 0; t < 5; ++t) {
                const auto x = random_vector(*f, 2 * n, rng);
                std::vector<int> xi(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) xi[k] = static_cast<int>(x[k].value);
                EXPECT_LT(diff(big_weyl(*f, x), oracle::tensor_weyl(o, xi)), kTol);
            }
        }
    }
}

TEST(Weyl, CommutationAndUnitarityExhaustiveQubits) {
    const auto f = FieldSpec::make(2);
    std::vector<std::vector<FieldElem>> all;
    for (std::uint32_t code = 0; code < 16; ++code)
        all.push_back({FieldElem{code & 1}, FieldElem{(code >> 1) & 1}, FieldElem{(code >> 2) & 1}, FieldElem{(code >> 3) & 1}});
    for (const auto &u : all) {
        const auto wu = big_weyl(*f, u);
        EXPECT_LT((wu * wu.adjoint()).max_abs_diff(CMatrix::identity(4)), 1e-12);
        for (const auto &v : all) {
            const auto wv = big_weyl(*f, v);
            const auto phase = omega_power(*f, f->trace(symplectic_form(*f, v, u)).value);
            EXPECT_LT((wu * wv).max_abs_diff((wv * wu).scaled(phase)), kTol);
        }
    }
}

TEST(Weyl, SymplecticFormConvention) {
    const auto f = FieldSpec::make(3);
    const std::vector<FieldElem> u{FieldElem{1}, FieldElem{0}}, v{FieldElem{0}, FieldElem{1}};
    EXPECT_EQ(symplectic_form(*f, u, v).value, 1u);
    EXPECT_EQ(symplectic_form(*f, v, u).value, 2u);
    EXPECT_THROW(symplectic_form(*f, u, std::vector<FieldElem>{FieldElem{0}}), Error);
}

TEST(Weyl, ApplyMatchesDenseProduct) {
    std::mt19937_64 rng(47);
    for (std::uint32_t d : {2u, 3u, 4u}) {
        const auto f = field_of(d);
        QuditState s(f, 2);
        std::normal_distribution<double> g;
        for (auto &a : s.amplitudes()) a = Complex(g(rng), g(rng));
        s.normalize();
        const auto x = random_vector(*f, 4, rng);
        QuditState moved = s;
        apply_weyl(moved, x);
        const auto w = big_weyl(*f, x);
        for (std::size_t i = 0; i < s.dimension(); ++i) {
            Complex want = 0.0;
            for (std::size_t j = 0; j < s.dimension(); ++j) want += w(i, j) * s.amplitudes()[j];
            EXPECT_LT(std::abs(moved.amplitudes()[i] - want), kTol);
        }
    }
}

TEST(Simulator, DimensionCap) {
    try {
        QuditState s(FieldSpec::make(3), 9, 4096);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::StateTooLarge);
    }
    EXPECT_NO_THROW(QuditState(FieldSpec::make(3), 7, 4096));
}

TEST(Completion, ProducesLagrangianExtension) {
    const std::vector<EncodingPlan> plans{
        build_plan(problems::example1(), problems::example1_reference_precoders()),
        build_plan(problems::example2(2), identity_precoders(problems::example2(2))),
        build_plan(problems::example2(5), problems::example2_reference_precoders(5)),
        build_plan(problems::example3(3), identity_precoders(problems::example3(3)))};
    for (const auto &plan : plans) {
        const auto basis = lagrangian_completion(plan.so);
        EXPECT_EQ(basis.vectors.size(), plan.qudits());
        EXPECT_TRUE(is_isotropic(*plan.problem.field(), basis.vectors));
        const auto rows = plan.so.combined();
        for (std::size_t i = 0; i < rows.rows(); ++i)
            for (std::size_t j = 0; j < rows.cols(); ++j) EXPECT_EQ(basis.vectors[i].components[j], rows(i, j));
        std::vector<std::vector<std::int64_t>> all;
        for (const auto &v : basis.vectors) {
            all.emplace_back();
            for (auto e : v.components) all.back().push_back(e.value);
        }
        EXPECT_EQ(mat_rank(MatF::from_rows(plan.problem.field(), all)), plan.qudits());
    }
}

TEST(Completion, RejectsNonIsotropicInput) {
    const auto f = FieldSpec::make(3);
    try {
        lagrangian_completion(f, MatF::from_rows(f, {{1, 0}, {0, 1}}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::CompletionFailure);
    }
}

TEST(Stabilizer, GeneratorsHaveUnitExpectation) {
    for (std::uint32_t d : {2u, 3u, 4u, 5u}) {
        const auto f = field_of(d);
        // X-type on qudit 1 and Z-type on qudit 2, then completed.
        MatF rows(f, 2, 6);
        rows(0, 0) = f->one();
        rows(1, 4) = f->one();
        rows(1, 1) = f->one();
        const auto prepared = stabilizer_state(lagrangian_completion(f, rows));
        EXPECT_NEAR(prepared.state.norm(), 1.0, kTol);
        EXPECT_NEAR(joint_projector_trace(prepared.basis), 1.0, 1e-9);
        const auto m = measure_rows(prepared.state, prepared.basis, prepared.basis.vectors.size());
        EXPECT_NEAR(m.min_modulus, 1.0, kTol);
        for (auto y : m.y) EXPECT_EQ(y.value, 0u);
    }
}

TEST(Stabilizer, NonEigenstateIsNondeterministic) {
    const auto f = FieldSpec::make(3);
    const auto basis = lagrangian_completion(f, MatF::from_rows(f, {{1, 0}}));
    try {
        measure_rows(QuditState(f, 1), basis, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NondeterministicOutcome);
    }
}

TEST(EndToEnd, DecodesBothInstances) {
    std::mt19937_64 rng(53);
    struct Case {
        LCProblem problem;
        std::vector<MatF> precoders;
    };
    std::vector<Case> cases{{problems::example1(), problems::example1_reference_precoders()},
                            {problems::example2(2), problems::example2_reference_precoders(2)},
                            {problems::example2(3), problems::example2_reference_precoders(3)},
                            {problems::sigma(3, 5), identity_precoders(problems::sigma(3, 5))}};
    const auto f4 = FieldSpec::make(2, 2);
    auto f4_problem = validate_problem(f4, 2, {MatF::from_rows(f4, {{1}, {2}}), MatF::from_rows(f4, {{3}, {1}}),
                                                 MatF::from_rows(f4, {{1}, {1}})});
    cases.push_back({f4_problem, identity_precoders(f4_problem)});
    for (const auto &c : cases) {
        const auto plan = build_plan(c.problem, c.precoders);
        const PlanSimulator sim(plan);
        for (int sign : sim.calibration()) EXPECT_TRUE(sign == 1 || sign == -1);
        for (int t = 0; t < 10; ++t) {
            const auto w1 = random_vector(*c.problem.field(), c.problem.total_width(), rng);
            const auto w2 = random_vector(*c.problem.field(), c.problem.total_width(), rng);
            const auto result = sim.run(w1, w2);
            EXPECT_EQ(result.first, mat_apply(c.problem.matrix(), w1));
            EXPECT_EQ(result.second, mat_apply(c.problem.matrix(), w2));
            EXPECT_EQ(result.y, apply_transfer(plan.so, plan_input(plan, w1, w2)));
            EXPECT_NEAR(result.min_modulus, 1.0, kTol);
        }
    }
}

TEST(EndToEnd, RejectsOversizedPlan) {
    const auto plan = build_plan(problems::example1(), problems::example1_reference_precoders());
    try {
        PlanSimulator sim(plan, 100);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::StateTooLarge);
    }
}
