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
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/error.hpp"
#include "eaqmac/matf.hpp"
#include "eaqmac/rational.hpp"

namespace eaqmac {

enum class Strategy { Exhaustive, Diagonal, Random, Portfolio };

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Exhaustive: return "exhaustive";
        case Strategy::Diagonal: return "diagonal";
        case Strategy::Random: return "random";
        case Strategy::Portfolio: return "portfolio";
    }
    return "portfolio";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
    for (auto s : {Strategy::Exhaustive, Strategy::Diagonal, Strategy::Random, Strategy::Portfolio})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

struct SearchOptions {
    Strategy strategy = Strategy::Portfolio;
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000;
    std::size_t random_samples = 10'000;
    std::size_t local_rounds = 3;
};

struct SearchOutcome {
    std::size_t c_best = 0;
    std::vector<MatF> precoders;
    bool proven_optimal = false;
    std::size_t lower_bound = 0;
    std::uint64_t candidates_evaluated = 0;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Portfolio;
    std::string found_by;  // "identity", "diagonal", "exhaustive" or "random"
    bool budget_exceeded = false;
};

/// rank(sum_s V_s P_s V_s^T)
inline std::size_t objective_c(const LCProblem &problem, const std::vector<MatF> &precoders) {
    detail::require_precoders(problem, precoders);
    MatF sum(problem.field(), problem.outputs(), problem.outputs());
    for (std::size_t s = 0; s < problem.servers(); ++s) {
        const MatF &v = problem.block(s);
        sum = mat_add(sum, mat_mul(mat_mul(v, precoders[s]), mat_transpose(v)));
    }
    return mat_rank(sum);
}

namespace detail {

// Matrix whose row-major entries are the base-d digits of `code`, most
// significant first, so ascending codes order matrices lexicographically.
inline MatF decode_matrix(const Field &field, std::size_t m, std::uint64_t code) {
    MatF out(field, m, m);
    const std::uint64_t d = field->order();
    for (std::size_t idx = m * m; idx-- > 0;) {
        out(idx / m, idx % m) = FieldElem{static_cast<std::uint32_t>(code % d)};
        code /= d;
    }
    return out;
}

inline MatF random_invertible(const Field &field, std::size_t m, std::mt19937_64 &rng) {
    std::uniform_int_distribution<std::uint32_t> digit(0, field->order() - 1);
    for (;;) {
        MatF p(field, m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) p(i, j) = FieldElem{digit(rng)};
        if (is_invertible(p)) return p;
    }
}

// Sums of per-server contributions V_s P V_s^T with evaluation counting.
class Objective {
  public:
    explicit Objective(const LCProblem &problem) : problem_(problem) {}

    MatF contribution(std::size_t s, const MatF &p) const {
        const MatF &v = problem_.block(s);
        return mat_mul(mat_mul(v, p), mat_transpose(v));
    }

    std::size_t operator()(const std::vector<MatF> &precoders) {
        ++evaluated;
        MatF sum(problem_.field(), problem_.outputs(), problem_.outputs());
        for (std::size_t s = 0; s < precoders.size(); ++s) sum = mat_add(sum, contribution(s, precoders[s]));
        return mat_rank(sum);
    }

    std::uint64_t evaluated = 0;

  private:
    const LCProblem &problem_;
};

struct Candidate {
    std::size_t c = std::numeric_limits<std::size_t>::max();
    std::vector<MatF> precoders;
};

// Lexicographic odometer over prod_s GL(m_s, d); stops once c <= stop_at.
inline Candidate exhaustive_scan(const LCProblem &problem, std::size_t stop_at, std::uint64_t &evaluated);

}  // namespace detail

/// |GL(m, d)| = prod_{i<m} (d^m - d^i), saturating at UINT64_MAX.
inline std::uint64_t gl_order(std::size_t m, std::uint64_t d) {
    std::uint64_t dm = 1;
    for (std::size_t k = 0; k < m; ++k) dm = detail::saturating_mul(dm, d);
    std::uint64_t out = 1, di = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (dm == std::numeric_limits<std::uint64_t>::max()) return dm;
        out = detail::saturating_mul(out, dm - di);
        di *= d;
    }
    return out;
}

/// prod_s |GL(m_s, d)|
inline std::uint64_t precoder_space_size(const LCProblem &problem) {
    std::uint64_t total = 1;
    for (std::size_t s = 0; s < problem.servers(); ++s)
        total = detail::saturating_mul(total, gl_order(problem.width(s), problem.field()->order()));
    return total;
}

/// All invertible m x m matrices in ascending order of their flattened encoding.
inline std::vector<MatF> enumerate_gl(const Field &field, std::size_t m) {
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < m * m; ++k) count = detail::saturating_mul(count, field->order());
    if (count > (1ull << 32)) throw Error(ErrorKind::BudgetExceeded, "GL enumeration is too large");
    std::vector<MatF> out;
    for (std::uint64_t code = 0; code < count; ++code) {
        MatF p = detail::decode_matrix(field, m, code);
        if (is_invertible(p)) out.push_back(std::move(p));
    }
    return out;
}

namespace detail {

inline Candidate exhaustive_scan(const LCProblem &problem, std::size_t stop_at, std::uint64_t &evaluated) {
    const std::size_t s_count = problem.servers();
    const Objective objective(problem);
    std::vector<std::vector<MatF>> groups, contributions;
    for (std::size_t s = 0; s < s_count; ++s) {
        groups.push_back(enumerate_gl(problem.field(), problem.width(s)));
        std::vector<MatF> contrib;
        for (const auto &p : groups.back()) contrib.push_back(objective.contribution(s, p));
        contributions.push_back(std::move(contrib));
    }
    std::vector<std::size_t> index(s_count, 0);
    // partial[s] = sum of contributions of servers 0..s at the current index
    std::vector<MatF> partial(s_count);
    auto refresh_from = [&](std::size_t s0) {
        for (std::size_t s = s0; s < s_count; ++s)
            partial[s] = s == 0 ? contributions[0][index[0]] : mat_add(partial[s - 1], contributions[s][index[s]]);
    };
    refresh_from(0);
    Candidate best;
    for (;;) {
        ++evaluated;
        const std::size_t c = mat_rank(partial[s_count - 1]);
        if (c < best.c) {
            best.c = c;
            best.precoders.clear();
            for (std::size_t s = 0; s < s_count; ++s) best.precoders.push_back(groups[s][index[s]]);
            if (c <= stop_at) return best;
        }
        std::size_t pos = s_count;
        while (pos > 0) {
            --pos;
            if (++index[pos] < groups[pos].size()) break;
            index[pos] = 0;
            if (pos == 0) return best;
        }
        refresh_from(pos);
    }
}

}  // namespace detail

struct BruteForceResult {
    std::size_t c_min = 0;
    std::vector<MatF> argmin;
    std::uint64_t evaluated = 0;
};

/// Exact minimum of rank(sum_s V_s P_s V_s^T) over all invertible P_s.
/// The argmin is the lexicographically smallest minimizer (P_1 most significant).
inline BruteForceResult brute_force_c(const LCProblem &problem, std::uint64_t budget) {
    const auto space = precoder_space_size(problem);
    if (space > budget)
        throw Error(ErrorKind::BudgetExceeded,
                    "exhaustive search needs " + std::to_string(space) + " candidates, budget is " + std::to_string(budget));
    BruteForceResult out;
    auto best = detail::exhaustive_scan(problem, 0, out.evaluated);
    out.c_min = best.c;
    out.argmin = std::move(best.precoders);
    return out;
}

/// max over server subsets T with [V_s]_{s in T} of full column rank of
///   sum_{s in T} m_s - rank([V_s]_{s not in T}),
/// from rank(A + B) >= rank(A) - rank(B). Never negative.
inline std::size_t lower_bound_c(const LCProblem &problem) {
    const std::size_t s_count = problem.servers();
    std::vector<std::uint64_t> subsets;
    if (s_count <= 16) {
        for (std::uint64_t mask = 1; mask < (1ull << s_count); ++mask) subsets.push_back(mask);
    } else {
        for (std::size_t s = 0; s < s_count; ++s) subsets.push_back(1ull << s);
    }
    std::size_t best = 0;
    for (const auto mask : subsets) {
        std::optional<MatF> inside, outside;
        std::size_t width = 0;
        for (std::size_t s = 0; s < s_count; ++s) {
            auto &target = (mask >> s) & 1 ? inside : outside;
            target = target ? hstack(*target, problem.block(s)) : problem.block(s);
            if ((mask >> s) & 1) width += problem.width(s);
        }
        if (mat_rank(*inside) != width) continue;
        const std::size_t rest = outside ? mat_rank(*outside) : 0;
        if (width > rest) best = std::max(best, width - rest);
    }
    return best;
}

inline Rational rate_of(const LCProblem &problem, std::size_t c) {
    return detail::scheme_rate(problem.outputs(), problem.total_width(), c);
}

/// Achievable normalized download costs: 2 Delta_s >= m_s and
/// sum_s 2 Delta_s >= sum_s m_s + c.
struct CostRegion {
    std::vector<std::size_t> widths;
    std::size_t c = 0;

    std::size_t sum_bound() const {
        std::size_t m = 0;
        for (auto w : widths) m += w;
        return m + c;
    }

    bool contains(std::span<const Rational> delta) const {
        if (delta.size() != widths.size()) throw Error(ErrorKind::DimensionMismatch, "one cost per server expected");
        Rational total(0);
        for (std::size_t s = 0; s < widths.size(); ++s) {
            if (delta[s] < Rational(0)) return false;
            const Rational twice = Rational(2) * delta[s];
            if (twice < Rational(static_cast<std::int64_t>(widths[s]))) return false;
            total = total + twice;
        }
        return total >= Rational(static_cast<std::int64_t>(sum_bound()));
    }

    bool sum_tight(std::span<const Rational> delta) const {
        Rational total(0);
        for (const auto &q : delta) total = total + Rational(2) * q;
        return total == Rational(static_cast<std::int64_t>(sum_bound()));
    }
};

inline CostRegion cost_region(const LCProblem &problem, std::size_t c) { return {problem.widths(), c}; }

inline bool region_check(const LCProblem &problem, std::size_t c, std::span<const Rational> delta) {
    return cost_region(problem, c).contains(delta);
}

namespace detail {

inline void diagonal_search(const LCProblem &problem, const SearchOptions &options, std::size_t stop_at,
                            Candidate &best, std::uint64_t &evaluated) {
    const auto &field = problem.field();
    const std::uint32_t d = field->order();
    const MatF &v = problem.matrix();
    const std::size_t m = v.cols(), k = v.rows();
    std::vector<MatF> outer;  // v_j v_j^T for each column j of V
    for (std::size_t j = 0; j < m; ++j) {
        const MatF col = submatrix(v, 0, j, k, 1);
        outer.push_back(mat_mul(col, mat_transpose(col)));
    }
    auto to_precoders = [&](const std::vector<std::uint32_t> &diag) {
        std::vector<MatF> out;
        for (std::size_t s = 0; s < problem.servers(); ++s) {
            MatF p(field, problem.width(s), problem.width(s));
            for (std::size_t i = 0; i < problem.width(s); ++i) p(i, i) = FieldElem{diag[problem.offset(s) + i]};
            out.push_back(std::move(p));
        }
        return out;
    };
    auto score = [&](const std::vector<std::uint32_t> &diag) {
        ++evaluated;
        MatF sum(field, k, k);
        for (std::size_t j = 0; j < m; ++j) sum = mat_add(sum, mat_scale(outer[j], FieldElem{diag[j]}));
        return mat_rank(sum);
    };
    auto consider = [&](const std::vector<std::uint32_t> &diag) {
        const std::size_t c = score(diag);
        if (c < best.c) {
            best.c = c;
            best.precoders = to_precoders(diag);
        }
        return best.c <= stop_at;
    };

    std::uint64_t count = 1;
    for (std::size_t j = 0; j < m; ++j) count = saturating_mul(count, d - 1);
    if (count <= options.budget) {
        std::vector<std::uint32_t> diag(m, 1);
        for (;;) {
            if (consider(diag)) return;
            std::size_t pos = m;
            while (pos > 0) {
                --pos;
                if (++diag[pos] < d) break;
                diag[pos] = 1;
                if (pos == 0) return;
            }
        }
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint32_t> nonzero(1, d - 1);
    std::vector<std::uint32_t> diag(m);
    for (std::uint64_t t = 0; t < options.budget; ++t) {
        for (auto &x : diag) x = nonzero(rng);
        if (consider(diag)) return;
    }
}

inline void random_search(const LCProblem &problem, const SearchOptions &options, std::size_t stop_at, Candidate &best,
                          std::uint64_t &evaluated) {
    const auto &field = problem.field();
    std::mt19937_64 rng(options.seed);
    Objective objective(problem);
    const std::uint64_t start = evaluated;
    auto remaining = [&] { return evaluated - start + objective.evaluated < options.budget; };
    auto try_candidate = [&](std::vector<MatF> &&candidate) {
        const std::size_t c = objective(candidate);
        if (c < best.c) {
            best.c = c;
            best.precoders = std::move(candidate);
        }
        return best.c <= stop_at;
    };
    if (best.precoders.empty()) {
        if (try_candidate(identity_precoders(problem))) {
            evaluated += objective.evaluated;
            return;
        }
    }
    bool done = false;
    for (std::size_t t = 0; t < options.random_samples && remaining() && !done; ++t) {
        std::vector<MatF> candidate;
        for (std::size_t s = 0; s < problem.servers(); ++s)
            candidate.push_back(random_invertible(field, problem.width(s), rng));
        done = try_candidate(std::move(candidate));
    }
    for (std::size_t round = 0; round < options.local_rounds && !done; ++round) {
        for (std::size_t s = 0; s < problem.servers() && !done; ++s) {
            for (std::size_t t = 0; t < options.random_samples && remaining() && !done; ++t) {
                auto candidate = best.precoders;
                candidate[s] = random_invertible(field, problem.width(s), rng);
                done = try_candidate(std::move(candidate));
            }
            const std::size_t w = problem.width(s);
            for (std::size_t i = 0; i < w && !done; ++i)
                for (std::size_t j = 0; j < w && !done; ++j)
                    for (std::uint32_t value = 0; value < field->order() && remaining() && !done; ++value) {
                        if (best.precoders[s](i, j).value == value) continue;
                        auto candidate = best.precoders;
                        candidate[s](i, j) = FieldElem{value};
                        if (!is_invertible(candidate[s])) continue;
                        done = try_candidate(std::move(candidate));
                    }
        }
    }
    evaluated += objective.evaluated;
}

}  // namespace detail

/// Minimizes the auxiliary-qudit count over invertible per-server precoders.
///
/// Every strategy starts from the identity precoders. `proven_optimal` is set
/// only after a completed exhaustive scan or when the best value meets
/// `lower_bound_c`.
inline SearchOutcome min_aux_qudits(const LCProblem &problem, const SearchOptions &options = {}) {
    SearchOutcome out;
    out.strategy = options.strategy;
    out.seed = options.seed;
    out.lower_bound = lower_bound_c(problem);

    detail::Candidate best;
    best.precoders = identity_precoders(problem);
    best.c = objective_c(problem, best.precoders);
    out.candidates_evaluated = 1;
    out.found_by = "identity";
    const std::size_t lb = out.lower_bound;
    const bool exhaustive_feasible = precoder_space_size(problem) <= options.budget;

    auto adopt = [&](detail::Candidate &&candidate, const char *name) {
        if (candidate.c < best.c) {
            best = std::move(candidate);
            out.found_by = name;
        }
    };

    switch (options.strategy) {
        case Strategy::Exhaustive:
            if (exhaustive_feasible) {
                auto result = brute_force_c(problem, options.budget);
                out.candidates_evaluated += result.evaluated;
                best = {result.c_min, std::move(result.argmin)};
                out.found_by = "exhaustive";
                out.proven_optimal = true;
            } else {
                out.budget_exceeded = true;
            }
            break;
        case Strategy::Diagonal: {
            detail::Candidate candidate;
            detail::diagonal_search(problem, options, lb, candidate, out.candidates_evaluated);
            adopt(std::move(candidate), "diagonal");
            break;
        }
        case Strategy::Random: {
            detail::Candidate candidate;
            detail::random_search(problem, options, lb, candidate, out.candidates_evaluated);
            adopt(std::move(candidate), "random");
            break;
        }
        case Strategy::Portfolio: {
            if (best.c > lb) {
                detail::Candidate candidate;
                detail::diagonal_search(problem, options, lb, candidate, out.candidates_evaluated);
                adopt(std::move(candidate), "diagonal");
            }
            if (best.c > lb && exhaustive_feasible) {
                adopt(detail::exhaustive_scan(problem, lb, out.candidates_evaluated), "exhaustive");
                out.proven_optimal = true;
            } else if (best.c > lb) {
                detail::Candidate candidate;
                detail::random_search(problem, options, lb, candidate, out.candidates_evaluated);
                adopt(std::move(candidate), "random");
            }
            break;
        }
    }
    out.c_best = best.c;
    out.precoders = std::move(best.precoders);
    if (out.c_best <= lb) out.proven_optimal = true;
    return out;
}

}  // namespace eaqmac
