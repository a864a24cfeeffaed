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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eaqmac/error.hpp"
#include "eaqmac/gf.hpp"
#include "eaqmac/matf.hpp"
#include "eaqmac/rational.hpp"

namespace eaqmac {

/// A linear computation task: the user wants Y = sum_s V_s W_s (K outputs)
/// where server s holds W_s of length m_s. Only `validate_problem` creates one,
/// so every instance satisfies the rank assumptions.
class LCProblem {
  public:
    const Field &field() const noexcept { return field_; }
    std::size_t outputs() const noexcept { return k_; }
    std::size_t servers() const noexcept { return blocks_.size(); }
    const std::vector<MatF> &blocks() const noexcept { return blocks_; }
    const MatF &block(std::size_t s) const { return blocks_.at(s); }
    std::size_t width(std::size_t s) const { return blocks_.at(s).cols(); }
    std::size_t total_width() const noexcept { return v_.cols(); }
    std::size_t offset(std::size_t s) const { return offsets_.at(s); }
    std::vector<std::size_t> widths() const {
        std::vector<std::size_t> out;
        for (const auto &b : blocks_) out.push_back(b.cols());
        return out;
    }
    /// V = [V_1 | ... | V_S]
    const MatF &matrix() const noexcept { return v_; }
    const std::string &name() const noexcept { return name_; }

  private:
    friend LCProblem validate_problem(Field, std::size_t, std::vector<MatF>, std::string);
    LCProblem() = default;

    Field field_;
    std::size_t k_ = 0;
    std::vector<MatF> blocks_;
    std::vector<std::size_t> offsets_;
    MatF v_;
    std::string name_;
};

/// Checks the problem assumptions in a fixed order: shapes, m_s <= K,
/// K <= sum m_s, rank(V_s) = m_s, rank(V) = K.
inline LCProblem validate_problem(Field field, std::size_t k, std::vector<MatF> blocks, std::string name = {}) {
    if (k == 0) throw Error(ErrorKind::DimensionMismatch, "K must be at least 1");
    if (blocks.empty()) throw Error(ErrorKind::DimensionMismatch, "problem has no servers");
    std::size_t m = 0;
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        require_same_field(*field, *blocks[s].field());
        if (blocks[s].rows() != k || blocks[s].cols() == 0) {
            std::ostringstream os;
            os << "server " << s + 1 << " block is " << blocks[s].rows() << 'x' << blocks[s].cols() << ", expected K=" << k
               << " rows and at least one column";
            throw Error(ErrorKind::DimensionMismatch, os.str());
        }
        m += blocks[s].cols();
    }
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        if (blocks[s].cols() > k) {
            std::ostringstream os;
            os << "server " << s + 1 << " has m_s = " << blocks[s].cols() << " > K = " << k
               << " (each server's data must satisfy m_s <= K)";
            throw Error(ErrorKind::BlockTooWide, os.str());
        }
    }
    if (k > m) {
        std::ostringstream os;
        os << "K = " << k << " exceeds the total data width sum m_s = " << m << " (requires K <= sum m_s)";
        throw Error(ErrorKind::KTooLarge, os.str());
    }
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        const auto rk = mat_rank(blocks[s]);
        if (rk != blocks[s].cols()) {
            std::ostringstream os;
            os << "server " << s + 1 << " block has rank " << rk << " < m_s = " << blocks[s].cols()
               << " (V_s must have full column rank, no redundant data)";
            throw Error(ErrorKind::RedundantBlock, os.str());
        }
    }
    LCProblem problem;
    problem.field_ = std::move(field);
    problem.k_ = k;
    problem.v_ = blocks.front();
    problem.offsets_.push_back(0);
    for (std::size_t s = 1; s < blocks.size(); ++s) {
        problem.offsets_.push_back(problem.v_.cols());
        problem.v_ = hstack(problem.v_, blocks[s]);
    }
    const auto rv = mat_rank(problem.v_);
    if (rv != k) {
        std::ostringstream os;
        os << "rank(V) = " << rv << " < K = " << k << " (the K requested combinations must be linearly independent)";
        throw Error(ErrorKind::RankDeficientV, os.str());
    }
    problem.blocks_ = std::move(blocks);
    problem.name_ = std::move(name);
    return problem;
}

/// Transfer matrix M = [Ml, Mr], each kappa x N.
struct SOMatrix {
    MatF left;
    MatF right;

    std::size_t kappa() const noexcept { return left.rows(); }
    std::size_t qudits() const noexcept { return left.cols(); }
    MatF combined() const { return hstack(left, right); }
};

struct SOCheck {
    bool rank_ok = false;
    bool symmetric_ok = false;
    std::size_t rank = 0;
    std::size_t kappa = 0;
    // First (row, col) where Mr*Ml^T differs from its transpose.
    std::size_t row = 0;
    std::size_t col = 0;
    std::string message;

    bool ok() const noexcept { return rank_ok && symmetric_ok; }
    explicit operator bool() const noexcept { return ok(); }
};

/// rank([Ml, Mr]) = kappa and Mr * Ml^T = Ml * Mr^T.
inline SOCheck check_so(const MatF &ml, const MatF &mr) {
    require_same_field(*ml.field(), *mr.field());
    if (ml.rows() != mr.rows() || ml.cols() != mr.cols())
        throw Error(ErrorKind::DimensionMismatch, "check_so: Ml and Mr must have the same shape");
    SOCheck out;
    out.kappa = ml.rows();
    out.rank = mat_rank(hstack(ml, mr));
    out.rank_ok = out.rank == out.kappa;
    const MatF prod = mat_mul(mr, mat_transpose(ml));
    out.symmetric_ok = true;
    for (std::size_t i = 0; i < prod.rows() && out.symmetric_ok; ++i)
        for (std::size_t j = 0; j < prod.cols(); ++j)
            if (prod(i, j) != prod(j, i)) {
                out.symmetric_ok = false;
                out.row = i;
                out.col = j;
                break;
            }
    std::ostringstream os;
    if (!out.rank_ok) os << "rank([Ml, Mr]) = " << out.rank << " < kappa = " << out.kappa << ". ";
    if (!out.symmetric_ok)
        os << "Mr*Ml^T is not symmetric: entry (" << out.row << ", " << out.col << ") = " << prod(out.row, out.col).value
           << " but (" << out.col << ", " << out.row << ") = " << prod(out.col, out.row).value << ".";
    out.message = out.ok() ? "ok" : os.str();
    return out;
}

inline SOCheck check_so(const SOMatrix &so) { return check_so(so.left, so.right); }

/// B1, B2 with (B1 H)(B2 G)^T = diag(lambda_1..lambda_c, 0, ..., 0).
struct PairTransform {
    MatF b1;
    MatF b2;
    std::size_t c = 0;
    std::vector<FieldElem> pairings;  // nonzero h_i^T g_i for i < c
};

namespace detail {

inline void require_full_row_rank_pair(const MatF &h, const MatF &g) {
    require_same_field(*h.field(), *g.field());
    if (h.rows() != g.rows() || h.cols() != g.cols())
        throw Error(ErrorKind::DimensionMismatch, "H and G must have the same shape");
    if (h.rows() > h.cols() || mat_rank(h) != h.rows() || mat_rank(g) != g.rows())
        throw Error(ErrorKind::RankDeficientInput, "H and G must both have full row rank K <= m");
}

}  // namespace detail

/// Diagonalizes the pairing H G^T through its rank normal form:
/// U1 (H G^T) U2 = Lambda gives B1 = U1, B2 = U2^T.
inline PairTransform pair_transform(const MatF &h, const MatF &g) {
    detail::require_full_row_rank_pair(h, g);
    const auto rnf = rank_normal_form(mat_mul(h, mat_transpose(g)));
    PairTransform out{rnf.u1, mat_transpose(rnf.u2), rnf.rank, {}};
    for (std::size_t i = 0; i < rnf.rank; ++i) out.pairings.push_back(rnf.lambda(i, i));
    return out;
}

struct SOExpansion {
    MatF h_extra;  // K x c, appended to H
    MatF g_extra;  // K x c, appended to G
    std::size_t c = 0;
    PairTransform transform;
};

/// Finds K x c blocks with H G^T + H' G'^T = 0 and c = rank(H G^T).
///
/// In the transformed basis the added columns are H̄' = [diag(-lambda); 0] and
/// Ḡ' = [I_c; 0]; they are pulled back with B1^{-1} and B2^{-1}, which is the
/// direction under which H G^T = B1^{-1} (H̄ Ḡ^T) B2^{-T} cancels.
inline SOExpansion expand_to_so(const MatF &h, const MatF &g) {
    auto transform = pair_transform(h, g);
    const auto &field = h.field();
    const std::size_t k = h.rows();
    const std::size_t c = transform.c;
    MatF hbar(field, k, c), gbar(field, k, c);
    for (std::size_t i = 0; i < c; ++i) {
        hbar(i, i) = field->neg(transform.pairings[i]);
        gbar(i, i) = field->one();
    }
    SOExpansion out;
    out.h_extra = mat_mul(mat_inverse(transform.b1), hbar);
    out.g_extra = mat_mul(mat_inverse(transform.b2), gbar);
    out.c = c;
    out.transform = std::move(transform);
    return out;
}

/// [[H H' | 0 0], [0 0 | G G']]
inline SOMatrix assemble_so(const MatF &h, const MatF &h_extra, const MatF &g, const MatF &g_extra) {
    const auto &field = h.field();
    const std::size_t k = h.rows();
    const MatF top = hstack(h, h_extra);
    const MatF bottom = hstack(g, g_extra);
    const MatF zero(field, k, top.cols());
    return SOMatrix{vstack(top, zero), vstack(zero, bottom)};
}

struct AllocationPolicy {
    enum class Kind { Balanced, SingleServer, Explicit };

    Kind kind = Kind::Balanced;
    std::size_t server = 0;  // zero-based, SingleServer only
    std::vector<std::size_t> counts;  // Explicit only

    static AllocationPolicy balanced() { return {}; }
    static AllocationPolicy single_server(std::size_t s) { return {Kind::SingleServer, s, {}}; }
    static AllocationPolicy explicit_counts(std::vector<std::size_t> c) { return {Kind::Explicit, 0, std::move(c)}; }
};

/// Places the c auxiliary qudits on servers. Balanced: each qudit goes to the
/// server minimizing the resulting max_s (m_s + a_s), lowest index on ties.
inline std::vector<std::size_t> allocate_aux(const LCProblem &problem, std::size_t c, const AllocationPolicy &policy) {
    const std::size_t s_count = problem.servers();
    std::vector<std::size_t> alloc(s_count, 0);
    switch (policy.kind) {
        case AllocationPolicy::Kind::Balanced:
            for (std::size_t q = 0; q < c; ++q) {
                std::size_t best = 0, best_load = 0;
                for (std::size_t s = 0; s < s_count; ++s) {
                    std::size_t load = 0;
                    for (std::size_t t = 0; t < s_count; ++t)
                        load = std::max(load, problem.width(t) + alloc[t] + (t == s ? 1 : 0));
                    if (s == 0 || load < best_load) {
                        best = s;
                        best_load = load;
                    }
                }
                ++alloc[best];
            }
            break;
        case AllocationPolicy::Kind::SingleServer:
            if (policy.server >= s_count)
                throw Error(ErrorKind::InvalidAllocation, "server " + std::to_string(policy.server + 1) + " does not exist");
            alloc[policy.server] = c;
            break;
        case AllocationPolicy::Kind::Explicit: {
            if (policy.counts.size() != s_count)
                throw Error(ErrorKind::InvalidAllocation, "explicit allocation needs one count per server");
            std::size_t total = 0;
            for (auto a : policy.counts) total += a;
            if (total != c)
                throw Error(ErrorKind::InvalidAllocation,
                            "explicit allocation sums to " + std::to_string(total) + ", expected c = " + std::to_string(c));
            alloc = policy.counts;
            break;
        }
    }
    return alloc;
}

namespace detail {

inline Rational scheme_rate(std::size_t k, std::size_t m, std::size_t c) {
    return Rational(static_cast<std::int64_t>(2 * k), static_cast<std::int64_t>(m + c));
}

inline void require_precoders(const LCProblem &problem, const std::vector<MatF> &precoders) {
    if (precoders.size() != problem.servers())
        throw Error(ErrorKind::DimensionMismatch, "expected one precoder per server");
    for (std::size_t s = 0; s < precoders.size(); ++s) {
        require_same_field(*problem.field(), *precoders[s].field());
        if (precoders[s].rows() != problem.width(s) || precoders[s].cols() != problem.width(s))
            throw Error(ErrorKind::DimensionMismatch, "precoder " + std::to_string(s + 1) + " must be m_s x m_s");
        if (!is_invertible(precoders[s]))
            throw Error(ErrorKind::SingularPrecoder, "precoder " + std::to_string(s + 1) + " is singular");
    }
}

}  // namespace detail

/// The two-instance scheme: instance 1 is precoded by P = blkdiag(P_s), instance 2
/// is not, and c auxiliary qudits are appended so that
///   Ml = [[V P, V̄'], [0, 0]],  Mr = [[0, 0], [V, V']]
/// is self-orthogonal.
struct EncodingPlan {
    LCProblem problem;
    std::vector<MatF> precoders;
    std::size_t c = 0;
    MatF vbar_prime;  // K x c, instance-1 auxiliary columns
    MatF v_prime;     // K x c, instance-2 auxiliary columns
    SOMatrix so;
    std::vector<std::size_t> allocation;
    Rational rate;

    std::size_t qudits() const noexcept { return problem.total_width() + c; }
    MatF precoder_block() const { return blkdiag(precoders); }
};

inline std::vector<MatF> identity_precoders(const LCProblem &problem) {
    std::vector<MatF> out;
    for (std::size_t s = 0; s < problem.servers(); ++s) out.push_back(MatF::identity(problem.field(), problem.width(s)));
    return out;
}

inline EncodingPlan build_plan(const LCProblem &problem, std::vector<MatF> precoders,
                               const AllocationPolicy &policy = AllocationPolicy::balanced()) {
    detail::require_precoders(problem, precoders);
    const MatF &v = problem.matrix();
    const MatF h = mat_mul(v, blkdiag(precoders));
    auto expansion = expand_to_so(h, v);
    EncodingPlan plan{problem, std::move(precoders), expansion.c, expansion.h_extra, expansion.g_extra,
                      assemble_so(h, expansion.h_extra, v, expansion.g_extra), {}, {}};
    plan.allocation = allocate_aux(problem, plan.c, policy);
    plan.rate = detail::scheme_rate(problem.outputs(), problem.total_width(), plan.c);
    return plan;
}

/// x = [P^{-1} W1; 0_c; W2; 0_c], the Pauli exponents each qudit applies.
inline std::vector<FieldElem> plan_input(const EncodingPlan &plan, std::span<const FieldElem> w1,
                                         std::span<const FieldElem> w2) {
    const std::size_t m = plan.problem.total_width();
    if (w1.size() != m || w2.size() != m)
        throw Error(ErrorKind::DimensionMismatch, "data vectors must have length sum m_s = " + std::to_string(m));
    const auto precoded = mat_apply(mat_inverse(plan.precoder_block()), w1);
    const std::size_t n = plan.qudits();
    std::vector<FieldElem> x(2 * n);
    std::copy(precoded.begin(), precoded.end(), x.begin());
    std::copy(w2.begin(), w2.end(), x.begin() + static_cast<std::ptrdiff_t>(n));
    return x;
}

/// y = Ml x_X + Mr x_Z
inline std::vector<FieldElem> apply_transfer(const SOMatrix &so, std::span<const FieldElem> x) {
    const std::size_t n = so.qudits();
    if (x.size() != 2 * n) throw Error(ErrorKind::DimensionMismatch, "apply_transfer: x must have length 2N");
    const auto yl = mat_apply(so.left, x.subspan(0, n));
    const auto yr = mat_apply(so.right, x.subspan(n, n));
    const auto &f = *so.left.field();
    std::vector<FieldElem> y(yl.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = f.add(yl[i], yr[i]);
    return y;
}

struct DecodedOutputs {
    std::vector<FieldElem> first;   // Y^(1)
    std::vector<FieldElem> second;  // Y^(2)
};

inline DecodedOutputs classical_decode(const EncodingPlan &plan, std::span<const FieldElem> y) {
    const std::size_t k = plan.problem.outputs();
    if (y.size() != 2 * k) throw Error(ErrorKind::DimensionMismatch, "outcome vector must have length 2K");
    for (auto v : y)
        if (!plan.problem.field()->is_valid(v)) throw Error(ErrorKind::InvalidElement, "outcome entry outside the field");
    return {{y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k)}, {y.begin() + static_cast<std::ptrdiff_t>(k), y.end()}};
}

struct PlanFinding {
    std::string condition;
    std::size_t row = 0;
    std::size_t col = 0;
    std::string detail;
};

struct PlanVerification {
    SOCheck so;
    std::vector<PlanFinding> findings;

    bool ok() const noexcept { return so.ok() && findings.empty(); }
};

namespace detail {

inline void compare_block(std::vector<PlanFinding> &findings, const std::string &name, const MatF &actual,
                          std::size_t row0, std::size_t col0, const MatF &expected) {
    for (std::size_t i = 0; i < expected.rows(); ++i)
        for (std::size_t j = 0; j < expected.cols(); ++j)
            if (actual(row0 + i, col0 + j) != expected(i, j)) {
                std::ostringstream os;
                os << name << " differs at (" << row0 + i << ", " << col0 + j << "): found "
                   << actual(row0 + i, col0 + j).value << ", expected " << expected(i, j).value;
                findings.push_back({"structure", row0 + i, col0 + j, os.str()});
                return;
            }
}

}  // namespace detail

/// Checks the SO condition, the block layout against V and the precoders, and
/// the transfer identity M x = [V W1; V W2] on `draws` random data pairs.
inline PlanVerification verify_plan(const EncodingPlan &plan, std::size_t draws = 16, std::uint64_t seed = 1) {
    PlanVerification out;
    const auto &problem = plan.problem;
    const auto &field = problem.field();
    const std::size_t k = problem.outputs(), m = problem.total_width(), c = plan.c, n = m + c;

    if (plan.so.left.rows() != 2 * k || plan.so.left.cols() != n || plan.so.right.rows() != 2 * k ||
        plan.so.right.cols() != n) {
        std::ostringstream os;
        os << "SO matrix must be " << 2 * k << 'x' << n << " per side";
        out.findings.push_back({"shape", 0, 0, os.str()});
        if (plan.so.left.rows() == plan.so.right.rows() && plan.so.left.cols() == plan.so.right.cols())
            out.so = check_so(plan.so);
        return out;
    }
    out.so = check_so(plan.so);
    if (plan.vbar_prime.rows() != k || plan.vbar_prime.cols() != c || plan.v_prime.rows() != k ||
        plan.v_prime.cols() != c) {
        out.findings.push_back({"shape", 0, 0, "expansion blocks must be K x c"});
        return out;
    }
    bool precoders_ok = true;
    try {
        detail::require_precoders(problem, plan.precoders);
    } catch (const Error &e) {
        out.findings.push_back({"precoder", 0, 0, e.what()});
        precoders_ok = false;
    }
    const auto alloc_sum = std::accumulate(plan.allocation.begin(), plan.allocation.end(), std::size_t{0});
    if (plan.allocation.size() != problem.servers() || alloc_sum != c)
        out.findings.push_back({"allocation", 0, 0, "allocation must list one count per server summing to c"});
    if (plan.rate != detail::scheme_rate(k, m, c))
        out.findings.push_back({"rate", 0, 0, "rate must equal 2K/(m + c) = " + detail::scheme_rate(k, m, c).to_string()});
    if (!precoders_ok) return out;

    const MatF zero_top(field, k, n);
    detail::compare_block(out.findings, "Ml[V P]", plan.so.left, 0, 0, mat_mul(problem.matrix(), plan.precoder_block()));
    detail::compare_block(out.findings, "Ml[Vbar']", plan.so.left, 0, m, plan.vbar_prime);
    detail::compare_block(out.findings, "Ml[lower zero]", plan.so.left, k, 0, zero_top);
    detail::compare_block(out.findings, "Mr[upper zero]", plan.so.right, 0, 0, zero_top);
    detail::compare_block(out.findings, "Mr[V]", plan.so.right, k, 0, problem.matrix());
    detail::compare_block(out.findings, "Mr[V']", plan.so.right, k, m, plan.v_prime);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> digit(0, field->order() - 1);
    for (std::size_t t = 0; t < draws; ++t) {
        std::vector<FieldElem> w1(m), w2(m);
        for (auto &v : w1) v = FieldElem{digit(rng)};
        for (auto &v : w2) v = FieldElem{digit(rng)};
        const auto y = apply_transfer(plan.so, plan_input(plan, w1, w2));
        const auto y1 = mat_apply(problem.matrix(), w1);
        const auto y2 = mat_apply(problem.matrix(), w2);
        for (std::size_t i = 0; i < 2 * k; ++i) {
            const FieldElem want = i < k ? y1[i] : y2[i - k];
            if (y[i] != want) {
                std::ostringstream os;
                os << "draw " << t << ": output " << i << " is " << y[i].value << ", expected " << want.value;
                out.findings.push_back({"transfer", i, t, os.str()});
                return out;
            }
        }
    }
    return out;
}

}  // namespace eaqmac
