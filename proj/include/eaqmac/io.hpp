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
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/error.hpp"
#include "eaqmac/gf.hpp"
#include "eaqmac/matf.hpp"
#include "eaqmac/rational.hpp"
#include "eaqmac/search.hpp"
#include "json.hpp"

namespace eaqmac::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json to_json(const FieldSpec &field) {
    json out{{"p", field.p()}, {"r", field.r()}};
    if (field.r() > 1) out["poly"] = field.poly();
    return out;
}

inline json to_json(const MatF &m) { return m.to_rows(); }

inline json to_json(const Rational &q) { return json{{"num", q.num()}, {"den", q.den()}}; }

inline json to_json(const std::vector<MatF> &ms) {
    json out = json::array();
    for (const auto &m : ms) out.push_back(to_json(m));
    return out;
}

inline json to_json(const LCProblem &problem) {
    json servers = json::array();
    for (const auto &block : problem.blocks()) servers.push_back(json{{"V", to_json(block)}});
    json out{{"schema_version", kSchemaVersion},
             {"field", to_json(*problem.field())},
             {"K", problem.outputs()},
             {"servers", std::move(servers)}};
    if (!problem.name().empty()) out["name"] = problem.name();
    return out;
}

inline json to_json(const EncodingPlan &plan) {
    json out = to_json(plan.problem);
    out["kind"] = "plan";
    out["precoders"] = to_json(plan.precoders);
    out["c"] = plan.c;
    out["expansion"] = json{{"Vbar_prime", to_json(plan.vbar_prime)}, {"V_prime", to_json(plan.v_prime)}};
    out["Ml"] = to_json(plan.so.left);
    out["Mr"] = to_json(plan.so.right);
    out["allocation"] = plan.allocation;
    out["rate"] = to_json(plan.rate);
    return out;
}

inline json to_json(const SearchOutcome &outcome) {
    return json{{"strategy", std::string(to_string(outcome.strategy))},
                {"seed", outcome.seed},
                {"c", outcome.c_best},
                {"c_label", outcome.proven_optimal ? "exact" : "upper_bound"},
                {"precoders", to_json(outcome.precoders)},
                {"proven_optimal", outcome.proven_optimal},
                {"lower_bound", outcome.lower_bound},
                {"candidates_evaluated", outcome.candidates_evaluated},
                {"found_by", outcome.found_by},
                {"budget_exceeded", outcome.budget_exceeded}};
}

inline json to_json(const CostRegion &region) {
    json per_server = json::array();
    for (std::size_t s = 0; s < region.widths.size(); ++s)
        per_server.push_back(json{{"server", s + 1}, {"min_two_delta", region.widths[s]}});
    return json{{"c", region.c}, {"per_server", std::move(per_server)}, {"sum_min_two_delta", region.sum_bound()}};
}

namespace detail {

template <typename F>
auto guarded(const char *what, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
    }
}

inline const json &require(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

inline void check_schema(const json &j) {
    if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion)
        throw Error(ErrorKind::ParseError, "unsupported schema_version");
}

}  // namespace detail

inline Field field_from_json(const json &j) {
    return detail::guarded("field", [&] {
        const auto p = detail::require(j, "p").get<std::uint32_t>();
        const auto r = j.contains("r") ? j.at("r").get<std::uint32_t>() : 1u;
        std::optional<std::vector<std::uint32_t>> poly;
        if (j.contains("poly") && !j.at("poly").is_null()) poly = j.at("poly").get<std::vector<std::uint32_t>>();
        return FieldSpec::make(p, r, std::move(poly));
    });
}

/// Parses an array of arrays of canonical element encodings.
inline MatF matrix_from_json(const Field &field, const json &j) {
    return detail::guarded("matrix", [&] {
        if (!j.is_array()) throw Error(ErrorKind::ParseError, "matrix must be an array of arrays");
        return MatF::from_rows(field, j.get<std::vector<std::vector<std::int64_t>>>());
    });
}

inline LCProblem problem_from_json(const json &j) {
    detail::check_schema(j);
    const Field field = field_from_json(detail::require(j, "field"));
    const auto k = detail::guarded("K", [&] { return detail::require(j, "K").get<std::size_t>(); });
    const json &servers = detail::require(j, "servers");
    if (!servers.is_array()) throw Error(ErrorKind::ParseError, "\"servers\" must be an array");
    std::vector<MatF> blocks;
    for (const auto &server : servers) blocks.push_back(matrix_from_json(field, detail::require(server, "V")));
    const std::string name = j.contains("name") ? j.at("name").get<std::string>() : std::string{};
    return validate_problem(field, k, std::move(blocks), name);
}

inline EncodingPlan plan_from_json(const json &j) {
    LCProblem problem = problem_from_json(j);
    const Field &field = problem.field();
    return detail::guarded("plan", [&] {
        std::vector<MatF> precoders;
        for (const auto &p : detail::require(j, "precoders")) precoders.push_back(matrix_from_json(field, p));
        const auto c = detail::require(j, "c").get<std::size_t>();
        const json &expansion = detail::require(j, "expansion");
        MatF vbar = matrix_from_json(field, detail::require(expansion, "Vbar_prime"));
        MatF vprime = matrix_from_json(field, detail::require(expansion, "V_prime"));
        // K x 0 blocks serialize as K empty rows
        if (c == 0) {
            vbar = MatF(field, problem.outputs(), 0);
            vprime = MatF(field, problem.outputs(), 0);
        }
        SOMatrix so{matrix_from_json(field, detail::require(j, "Ml")), matrix_from_json(field, detail::require(j, "Mr"))};
        const auto allocation = detail::require(j, "allocation").get<std::vector<std::size_t>>();
        const json &rate = detail::require(j, "rate");
        const Rational q(detail::require(rate, "num").get<std::int64_t>(), detail::require(rate, "den").get<std::int64_t>());
        return EncodingPlan{problem, std::move(precoders), c, std::move(vbar), std::move(vprime), std::move(so),
                            allocation, q};
    });
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

}  // namespace eaqmac::io
