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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eaqmac/commands.hpp"

using namespace eaqmac;
using io::json;

namespace {

const std::string kProblems = EAQMAC_PROBLEMS_DIR;

std::string temp_file(const std::string &name, const json &content) {
    const auto path = std::filesystem::temp_directory_path() / ("eaqmac_test_" + name);
    std::ofstream(path) << content.dump(2);
    return path.string();
}

struct Run {
    int code;
    json out;
    std::string err;
};

template <typename F>
Run run(F &&command) {
    std::ostringstream out, err;
    const int code = command(out, err);
    json parsed = out.str().empty() ? json() : json::parse(out.str());
    return {code, std::move(parsed), err.str()};
}

}  // namespace

TEST(Json, ProblemRoundTrip) {
    for (const auto &problem : {problems::example1(), problems::example3(3), problems::sigma(4)}) {
        const auto back = io::problem_from_json(io::to_json(problem));
        EXPECT_EQ(back.matrix(), problem.matrix());
        EXPECT_EQ(back.widths(), problem.widths());
        EXPECT_EQ(back.name(), problem.name());
    }
}

TEST(Json, PlanRoundTripIncludingEmptyExpansion) {
    for (const auto &plan : {build_plan(problems::example1(), problems::example1_reference_precoders()),
                             build_plan(problems::example2(5), problems::example2_reference_precoders(5))}) {
        const auto back = io::plan_from_json(json::parse(io::to_json(plan).dump()));
        EXPECT_EQ(back.c, plan.c);
        EXPECT_EQ(back.so.left, plan.so.left);
        EXPECT_EQ(back.so.right, plan.so.right);
        EXPECT_EQ(back.vbar_prime.rows(), plan.problem.outputs());
        EXPECT_EQ(back.vbar_prime.cols(), plan.c);
        EXPECT_EQ(back.rate, plan.rate);
        EXPECT_TRUE(verify_plan(back).ok());
    }
}

TEST(Json, ExtensionFieldRoundTrip) {
    const auto f = FieldSpec::make(3, 2, std::vector<std::uint32_t>{2, 1, 1});
    const auto back = io::field_from_json(io::to_json(*f));
    EXPECT_TRUE(back->same_as(*f));
}

TEST(Json, MalformedInputsAreParseErrors) {
    const auto expect_parse_error = [](const json &j) {
        try {
            io::problem_from_json(j);
            ADD_FAILURE() << j.dump();
        } catch (const Error &e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << e.what();
        }
    };
    expect_parse_error(json{{"K", 1}, {"servers", json::array()}});
    expect_parse_error(json{{"field", {{"p", 3}}}, {"K", "two"}, {"servers", json::array()}});
    expect_parse_error(json{{"field", {{"p", 3}}}, {"K", 1}, {"servers", 5}});
    expect_parse_error(json{{"schema_version", 9}, {"field", {{"p", 3}}}, {"K", 1}, {"servers", json::array()}});
    try {
        io::read_json_file("/nonexistent/problem.json");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    }
}

TEST(Json, FixturesLoad) {
    for (const char *name : {"example1", "example2", "sigma_qmac_S4", "example3_S3", "f4_mixed"}) {
        const auto problem = io::problem_from_json(io::read_json_file(kProblems + "/" + name + ".json"));
        EXPECT_EQ(problem.name(), name);
    }
}

TEST(Cli, ParseAllocation) {
    EXPECT_EQ(cli::parse_allocation("balanced").kind, AllocationPolicy::Kind::Balanced);
    const auto single = cli::parse_allocation("server=3");
    EXPECT_EQ(single.kind, AllocationPolicy::Kind::SingleServer);
    EXPECT_EQ(single.server, 2u);
    const auto expl = cli::parse_allocation("explicit=0,2,1");
    EXPECT_EQ(expl.counts, (std::vector<std::size_t>{0, 2, 1}));
    for (const char *bad : {"server=0", "server=x", "explicit=1,,2", "greedy"}) EXPECT_THROW(cli::parse_allocation(bad), Error) << bad;
}

TEST(Cli, AnalyzeFixtures) {
    struct Expect {
        const char *file;
        std::size_t c;
        std::int64_t num, den;
    };
    for (const auto &e : {Expect{"example1", 1, 4, 5}, Expect{"example2", 0, 1, 1}, Expect{"sigma_qmac_S4", 0, 1, 2},
                          Expect{"example3_S3", 2, 6, 7}}) {
        const auto r = run([&](auto &out, auto &err) {
            return cli::cmd_analyze(kProblems + "/" + e.file + ".json", {}, true, "balanced", out, err);
        });
        ASSERT_EQ(r.code, cli::kExitOk) << r.err;
        EXPECT_EQ(r.out["kind"], "report");
        EXPECT_EQ(r.out["search"]["c"], e.c) << e.file;
        EXPECT_EQ(r.out["rate"]["num"], e.num);
        EXPECT_EQ(r.out["rate"]["den"], e.den);
        EXPECT_TRUE(r.out["search"]["proven_optimal"].get<bool>());
        EXPECT_TRUE(r.out.contains("plan"));
    }
}

TEST(Cli, ExitCodes) {
    const auto bad_field = temp_file("bad_field.json", json{{"field", {{"p", 4}}}, {"K", 1}, {"servers", json::array()}});
    EXPECT_EQ(run([&](auto &o, auto &e) { return cli::cmd_analyze(bad_field, {}, false, "balanced", o, e); }).code,
              cli::kExitInput);

    cli::SearchFlags tight;
    tight.strategy = Strategy::Exhaustive;
    tight.budget = 3;
    EXPECT_EQ(run([&](auto &o, auto &e) {
                  return cli::cmd_analyze(kProblems + "/example1.json", tight, false, "balanced", o, e);
              }).code,
              cli::kExitBudget);

    EXPECT_EQ(run([&](auto &o, auto &e) {
                  return cli::cmd_construct(kProblems + "/example1.json", {}, "explicit=1,1,0,0", o, e);
              }).code,
              cli::kExitInput);
}

TEST(Cli, ConstructVerifySimulate) {
    const auto built = run([&](auto &o, auto &e) { return cli::cmd_construct(kProblems + "/example1.json", {}, "server=4", o, e); });
    ASSERT_EQ(built.code, cli::kExitOk) << built.err;
    EXPECT_EQ(built.out["allocation"], json({0, 0, 0, 1}));
    const auto plan_path = temp_file("plan.json", built.out);

    const auto verified = run([&](auto &o, auto &e) { return cli::cmd_verify(plan_path, o, e); });
    EXPECT_EQ(verified.code, cli::kExitOk);
    EXPECT_TRUE(verified.out["ok"].get<bool>());

    json tampered = built.out;
    tampered["Mr"][2][0] = (tampered["Mr"][2][0].get<int>() + 1) % 3;
    const auto bad = run([&](auto &o, auto &e) { return cli::cmd_verify(temp_file("tampered.json", tampered), o, e); });
    EXPECT_EQ(bad.code, cli::kExitVerification);
    EXPECT_FALSE(bad.out["ok"].get<bool>());
    EXPECT_EQ(bad.out["findings"][0]["condition"], "so_symmetry");

    cli::SimulateFlags sim;
    sim.trials = 5;
    const auto simulated = run([&](auto &o, auto &e) { return cli::cmd_simulate(plan_path, sim, o, e); });
    EXPECT_EQ(simulated.code, cli::kExitOk) << simulated.err;
    EXPECT_EQ(simulated.out["passes"], 5);
    EXPECT_EQ(simulated.out["dimension"], 243);

    sim.max_dim = 100;
    const auto capped = run([&](auto &o, auto &e) { return cli::cmd_simulate(plan_path, sim, o, e); });
    EXPECT_EQ(capped.code, cli::kExitStateTooLarge);
    EXPECT_EQ(capped.out["required_dim"], 243);
    EXPECT_NE(capped.err.find("243"), std::string::npos);
}

TEST(Cli, SimulateWithDataFile) {
    const auto built = run([&](auto &o, auto &e) { return cli::cmd_construct(kProblems + "/example1.json", {}, "balanced", o, e); });
    cli::SimulateFlags sim;
    sim.data_path = temp_file("data.json", json{{"W1", {1, 2, 0, 1}}, {"W2", {2, 2, 2, 1}}});
    const auto r = run([&](auto &o, auto &e) { return cli::cmd_simulate(temp_file("plan2.json", built.out), sim, o, e); });
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    // V W1 = (1 + 0 + 1, 2 + 0 + 1) mod 3, V W2 = (2 + 2 + 1, 2 + 2 + 1) mod 3
    EXPECT_EQ(r.out["results"][0]["Y1"], json({2, 0}));
    EXPECT_EQ(r.out["results"][0]["Y2"], json({2, 2}));
}

TEST(Cli, Reproduce) {
    for (const auto &[target, servers] : {std::pair{"example1", 4}, {"example2", 4}, {"example3", 3}, {"sigma", 4}}) {
        cli::ReproduceFlags flags;
        flags.target = target;
        flags.servers = servers;
        flags.trials = 5;
        const auto r = run([&](auto &o, auto &e) { return cli::cmd_reproduce(flags, o, e); });
        EXPECT_EQ(r.code, cli::kExitOk) << target << ": " << r.err;
        EXPECT_TRUE(r.out["match"].get<bool>());
    }
    cli::ReproduceFlags unknown;
    unknown.target = "example9";
    EXPECT_EQ(run([&](auto &o, auto &e) { return cli::cmd_reproduce(unknown, o, e); }).code, cli::kExitInput);
}
