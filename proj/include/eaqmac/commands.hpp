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

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/error.hpp"
#include "eaqmac/io.hpp"
#include "eaqmac/problems.hpp"
#include "eaqmac/qsim.hpp"
#include "eaqmac/search.hpp"

// Subcommand bodies for the eaqmac tool. Each writes its JSON artifact to `out`,
// diagnostics to `err`, and returns the process exit code.
namespace eaqmac::cli {

using io::json;

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 1,
    kExitVerification = 2,
    kExitBudget = 3,
    kExitStateTooLarge = 4,
};

inline constexpr std::string_view kToolVersion = "0.1.0";

struct SearchFlags {
    Strategy strategy = Strategy::Portfolio;
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000;

    SearchOptions options() const {
        SearchOptions o;
        o.strategy = strategy;
        o.seed = seed;
        o.budget = budget;
        return o;
    }
};

/// "balanced", "server=<s>" (1-based) or "explicit=<a1>,<a2>,...".
inline AllocationPolicy parse_allocation(std::string_view spec) {
    if (spec == "balanced") return AllocationPolicy::balanced();
    auto parse_count = [&](std::string_view text) -> std::size_t {
        if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos)
            throw Error(ErrorKind::InvalidAllocation, "bad allocation spec \"" + std::string(spec) + "\"");
        return static_cast<std::size_t>(std::stoull(std::string(text)));
    };
    if (spec.starts_with("server=")) {
        const auto s = parse_count(spec.substr(7));
        if (s == 0) throw Error(ErrorKind::InvalidAllocation, "servers are numbered from 1");
        return AllocationPolicy::single_server(s - 1);
    }
    if (spec.starts_with("explicit=")) {
        std::vector<std::size_t> counts;
        std::string_view rest = spec.substr(9);
        while (true) {
            const auto comma = rest.find(',');
            counts.push_back(parse_count(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return AllocationPolicy::explicit_counts(std::move(counts));
    }
    throw Error(ErrorKind::InvalidAllocation, "bad allocation spec \"" + std::string(spec) + "\"");
}

inline json analyze_report(const LCProblem &problem, const SearchOutcome &outcome, const SearchFlags &flags,
                           const std::optional<EncodingPlan> &plan) {
    json search = io::to_json(outcome);
    search["budget"] = flags.budget;
    json report{{"schema_version", io::kSchemaVersion},
                {"kind", "report"},
                {"tool_version", std::string(kToolVersion)},
                {"seed", flags.seed},
                {"problem", io::to_json(problem)},
                {"search", std::move(search)},
                {"rate", io::to_json(rate_of(problem, outcome.c_best))},
                {"rate_label", outcome.proven_optimal ? "achievable (c is minimal)" : "achievable (possibly improvable)"},
                {"region", io::to_json(cost_region(problem, outcome.c_best))}};
    if (plan) report["plan"] = io::to_json(*plan);
    return report;
}

inline int exit_code_for(const Error &e) {
    switch (e.kind()) {
        case ErrorKind::BudgetExceeded: return kExitBudget;
        case ErrorKind::StateTooLarge: return kExitStateTooLarge;
        default: return kExitInput;
    }
}

inline int cmd_analyze(const std::string &problem_path, const SearchFlags &flags, bool with_plan,
                       const std::string &alloc, std::ostream &out, std::ostream &err) {
    try {
        const LCProblem problem = io::problem_from_json(io::read_json_file(problem_path));
        const SearchOutcome outcome = min_aux_qudits(problem, flags.options());
        std::optional<EncodingPlan> plan;
        if (with_plan) plan = build_plan(problem, outcome.precoders, parse_allocation(alloc));
        out << analyze_report(problem, outcome, flags, plan).dump(2) << '\n';
        if (outcome.budget_exceeded) {
            err << "exhaustive search exceeds the budget of " << flags.budget << " candidates ("
                << precoder_space_size(problem) << " needed)\n";
            return kExitBudget;
        }
        return kExitOk;
    } catch (const Error &e) {
        err << e.what() << '\n';
        return exit_code_for(e);
    }
}

inline int cmd_construct(const std::string &problem_path, const SearchFlags &flags, const std::string &alloc,
                         std::ostream &out, std::ostream &err) {
    try {
        const LCProblem problem = io::problem_from_json(io::read_json_file(problem_path));
        const SearchOutcome outcome = min_aux_qudits(problem, flags.options());
        if (outcome.budget_exceeded) {
            err << "exhaustive search exceeds the budget of " << flags.budget << " candidates\n";
            return kExitBudget;
        }
        const EncodingPlan plan = build_plan(problem, outcome.precoders, parse_allocation(alloc));
        out << io::to_json(plan).dump(2) << '\n';
        return kExitOk;
    } catch (const Error &e) {
        err << e.what() << '\n';
        return exit_code_for(e);
    }
}

inline json verification_report(const PlanVerification &v) {
    json findings = json::array();
    if (!v.so.rank_ok)
        findings.push_back(json{{"condition", "so_rank"}, {"row", 0}, {"col", 0}, {"detail", v.so.message}});
    if (!v.so.symmetric_ok)
        findings.push_back(
            json{{"condition", "so_symmetry"}, {"row", v.so.row}, {"col", v.so.col}, {"detail", v.so.message}});
    for (const auto &f : v.findings)
        findings.push_back(json{{"condition", f.condition}, {"row", f.row}, {"col", f.col}, {"detail", f.detail}});
    return json{{"schema_version", io::kSchemaVersion},
                {"kind", "verification"},
                {"ok", v.ok()},
                {"so", json{{"rank_ok", v.so.rank_ok},
                            {"symmetric_ok", v.so.symmetric_ok},
                            {"rank", v.so.rank},
                            {"kappa", v.so.kappa}}},
                {"findings", std::move(findings)}};
}

inline int cmd_verify(const std::string &plan_path, std::ostream &out, std::ostream &err) {
    try {
        const EncodingPlan plan = io::plan_from_json(io::read_json_file(plan_path));
        const auto verification = verify_plan(plan);
        out << verification_report(verification).dump(2) << '\n';
        return verification.ok() ? kExitOk : kExitVerification;
    } catch (const Error &e) {
        err << e.what() << '\n';
        return kExitInput;
    }
}

struct SimulateFlags {
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::optional<std::string> data_path;
    std::size_t max_dim = kDefaultMaxDim;
};

namespace detail {

struct DataPair {
    std::vector<FieldElem> w1;
    std::vector<FieldElem> w2;
};

// {"W1": [...], "W2": [...]} or {"trials": [{"W1": ..., "W2": ...}, ...]}
inline std::vector<DataPair> read_data(const std::string &path, const FieldSpec &field) {
    const json j = io::read_json_file(path);
    auto one = [&](const json &entry) {
        DataPair pair;
        for (auto v : io::detail::require(entry, "W1").get<std::vector<std::uint64_t>>()) pair.w1.push_back(field.elem(v));
        for (auto v : io::detail::require(entry, "W2").get<std::vector<std::uint64_t>>()) pair.w2.push_back(field.elem(v));
        return pair;
    };
    return io::detail::guarded("data", [&] {
        std::vector<DataPair> out;
        if (j.contains("trials"))
            for (const auto &entry : j.at("trials")) out.push_back(one(entry));
        else
            out.push_back(one(j));
        return out;
    });
}

inline std::uint64_t required_dimension(const FieldSpec &field, std::size_t qudits) {
    std::uint64_t dim = 1;
    for (std::size_t n = 0; n < qudits; ++n) dim = eaqmac::detail::saturating_mul(dim, field.order());
    return dim;
}

inline json to_json(const std::vector<FieldElem> &v) {
    json out = json::array();
    for (auto x : v) out.push_back(x.value);
    return out;
}

}  // namespace detail

/// Runs the plan on the dense simulator; returns the summary JSON and whether
/// every trial decoded V W exactly.
inline json simulate_plan(const EncodingPlan &plan, const SimulateFlags &flags, bool &all_passed) {
    const auto &field = *plan.problem.field();
    const PlanSimulator simulator(plan, flags.max_dim);
    std::vector<detail::DataPair> data;
    if (flags.data_path) {
        data = detail::read_data(*flags.data_path, field);
    } else {
        std::mt19937_64 rng(flags.seed);
        std::uniform_int_distribution<std::uint32_t> digit(0, field.order() - 1);
        const std::size_t m = plan.problem.total_width();
        for (std::size_t t = 0; t < flags.trials; ++t) {
            detail::DataPair pair{std::vector<FieldElem>(m), std::vector<FieldElem>(m)};
            for (auto &v : pair.w1) v = FieldElem{digit(rng)};
            for (auto &v : pair.w2) v = FieldElem{digit(rng)};
            data.push_back(std::move(pair));
        }
    }
    json results = json::array();
    std::size_t passes = 0;
    double min_modulus = 1.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto result = simulator.run(data[t].w1, data[t].w2);
        const auto want1 = mat_apply(plan.problem.matrix(), data[t].w1);
        const auto want2 = mat_apply(plan.problem.matrix(), data[t].w2);
        const bool pass = result.first == want1 && result.second == want2 && result.min_modulus >= 1.0 - 1e-9;
        min_modulus = std::min(min_modulus, result.min_modulus);
        passes += pass ? 1 : 0;
        results.push_back(json{{"trial", t},
                               {"pass", pass},
                               {"Y1", detail::to_json(result.first)},
                               {"Y2", detail::to_json(result.second)}});
    }
    all_passed = passes == data.size();
    return json{{"schema_version", io::kSchemaVersion},
                {"kind", "simulation"},
                {"dimension", simulator.dimension()},
                {"qudits", plan.qudits()},
                {"calibration", simulator.calibration()},
                {"trials", data.size()},
                {"passes", passes},
                {"failures", data.size() - passes},
                {"min_modulus", min_modulus},
                {"results", std::move(results)}};
}

inline int cmd_simulate(const std::string &plan_path, const SimulateFlags &flags, std::ostream &out, std::ostream &err) {
    try {
        const EncodingPlan plan = io::plan_from_json(io::read_json_file(plan_path));
        const auto needed = detail::required_dimension(*plan.problem.field(), plan.qudits());
        if (needed > flags.max_dim) {
            err << "state dimension " << needed << " exceeds --max-dim " << flags.max_dim << "; rerun with --max-dim "
                << needed << '\n';
            out << json{{"error", "StateTooLarge"}, {"required_dim", needed}, {"max_dim", flags.max_dim}}.dump(2) << '\n';
            return kExitStateTooLarge;
        }
        const auto verification = verify_plan(plan);
        if (!verification.ok()) {
            err << "plan fails verification; run `eaqmac verify` for details\n";
            return kExitVerification;
        }
        bool all_passed = false;
        out << simulate_plan(plan, flags, all_passed).dump(2) << '\n';
        return all_passed ? kExitOk : kExitVerification;
    } catch (const Error &e) {
        err << e.what() << '\n';
        return exit_code_for(e);
    }
}

struct ReproduceFlags {
    std::string target = "example1";
    std::size_t servers = 4;
    std::optional<std::uint32_t> d;
    SearchFlags search;
    std::size_t trials = 20;
    std::size_t max_dim = kDefaultMaxDim;
};

struct ReproductionTarget {
    LCProblem problem;
    std::size_t expected_c;
    Rational expected_rate;
    std::optional<std::vector<MatF>> reference_precoders;
    std::optional<SOMatrix> reference_so;
};

/// Problem plus the expected constants for each named target.
inline ReproductionTarget reproduction_target(const ReproduceFlags &flags) {
    const auto s = static_cast<std::int64_t>(flags.servers);
    if (flags.target == "example1") {
        const std::uint32_t d = flags.d.value_or(3);
        ReproductionTarget t{problems::example1(d), 1, Rational(4, 5), std::nullopt, std::nullopt};
        if (d == 3) {
            t.reference_precoders = problems::example1_reference_precoders();
            t.reference_so = problems::example1_reference_so();
        }
        return t;
    }
    if (flags.target == "example2") {
        const std::uint32_t d = flags.d.value_or(5);
        return {problems::example2(d), 0, Rational(1, 1), problems::example2_reference_precoders(d),
                problems::example2_reference_so(d)};
    }
    if (flags.target == "example3") {
        if (flags.servers < 2) throw Error(ErrorKind::DimensionMismatch, "example3 needs --S >= 2");
        return {problems::example3(flags.servers, flags.d.value_or(3)), flags.servers - 1, Rational(2 * s, 3 * s - 2),
                std::nullopt, std::nullopt};
    }
    if (flags.target == "sigma") {
        if (flags.servers < 2) throw Error(ErrorKind::DimensionMismatch, "sigma needs --S >= 2");
        return {problems::sigma(flags.servers, flags.d.value_or(3)), 0, Rational(2, s), std::nullopt, std::nullopt};
    }
    throw Error(ErrorKind::ParseError, "unknown target \"" + flags.target + "\" (example1, example2, example3, sigma)");
}

inline int cmd_reproduce(const ReproduceFlags &flags, std::ostream &out, std::ostream &err) {
    try {
        const auto target = reproduction_target(flags);
        const auto &problem = target.problem;
        const SearchOutcome outcome = min_aux_qudits(problem, flags.search.options());
        const EncodingPlan plan = build_plan(problem, outcome.precoders);
        const auto verification = verify_plan(plan);

        json checks = json::array();
        bool all_ok = true;
        auto check = [&](const std::string &name, json expected, json actual, bool pass) {
            checks.push_back(json{{"name", name}, {"expected", std::move(expected)}, {"actual", std::move(actual)}, {"pass", pass}});
            all_ok = all_ok && pass;
        };
        check("c", target.expected_c, outcome.c_best, outcome.c_best == target.expected_c);
        check("rate", io::to_json(target.expected_rate), io::to_json(plan.rate), plan.rate == target.expected_rate);
        check("verify", true, verification.ok(), verification.ok());
        if (target.reference_precoders && target.reference_so) {
            const auto reference = build_plan(problem, *target.reference_precoders);
            const bool same = reference.so.left == target.reference_so->left && reference.so.right == target.reference_so->right;
            check("reference_transfer_matrix", io::to_json(target.reference_so->combined()),
                  io::to_json(reference.so.combined()), same);
        }
        json simulation = nullptr;
        const auto needed = detail::required_dimension(*problem.field(), plan.qudits());
        if (needed <= flags.max_dim) {
            bool passed = false;
            SimulateFlags sim_flags;
            sim_flags.trials = flags.trials;
            sim_flags.seed = flags.search.seed;
            sim_flags.max_dim = flags.max_dim;
            simulation = simulate_plan(plan, sim_flags, passed);
            simulation.erase("results");
            check("simulation", flags.trials, simulation["passes"], passed);
        }
        json report = analyze_report(problem, outcome, flags.search, plan);
        report["kind"] = "reproduction";
        report["target"] = flags.target;
        report["checks"] = std::move(checks);
        report["simulation"] = std::move(simulation);
        report["match"] = all_ok;
        out << report.dump(2) << '\n';
        if (!all_ok) err << "reproduction mismatch for " << flags.target << '\n';
        return all_ok ? kExitOk : kExitVerification;
    } catch (const Error &e) {
        err << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace eaqmac::cli
