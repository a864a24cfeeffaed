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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "eaqmac/commands.hpp"

namespace {

void add_search_flags(CLI::App *cmd, eaqmac::cli::SearchFlags &flags, std::string &strategy) {
    cmd->add_option("--strategy", strategy, "exhaustive | diagonal | random | portfolio")
        ->check(CLI::IsMember({"exhaustive", "diagonal", "random", "portfolio"}));
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--budget", flags.budget, "maximum candidate evaluations per strategy");
}

}  // namespace

int main(int argc, char **argv) {
    using namespace eaqmac::cli;
    CLI::App app{"Entanglement-assisted coding plans for linear computation over a quantum MAC"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    app.add_option("--out", out_path, "write the JSON result to this file instead of stdout");

    SearchFlags search;
    std::string strategy = "portfolio";
    std::string problem_path, plan_path, alloc = "balanced";
    bool with_plan = false;

    auto *analyze = app.add_subcommand("analyze", "minimize auxiliary qudits and report rate and region");
    analyze->add_option("problem", problem_path, "problem JSON file")->required();
    add_search_flags(analyze, search, strategy);
    analyze->add_flag("--with-plan", with_plan, "embed the constructed plan in the report");
    analyze->add_option("--alloc", alloc, "balanced | server=<s> | explicit=<a1,...>");

    auto *construct = app.add_subcommand("construct", "build the self-orthogonal encoding plan");
    construct->add_option("problem", problem_path, "problem JSON file")->required();
    add_search_flags(construct, search, strategy);
    construct->add_option("--alloc", alloc, "balanced | server=<s> | explicit=<a1,...>");

    auto *verify = app.add_subcommand("verify", "check the SO condition and transfer identity of a plan");
    verify->add_option("plan", plan_path, "plan JSON file")->required();

    SimulateFlags sim;
    std::string data_path;
    auto *simulate = app.add_subcommand("simulate", "run a plan on the dense qudit simulator");
    simulate->add_option("plan", plan_path, "plan JSON file")->required();
    simulate->add_option("--trials", sim.trials, "random data draws");
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--data", data_path, "JSON file with W1/W2 data instead of random draws");
    simulate->add_option("--max-dim", sim.max_dim, "largest allowed state dimension d^N");

    ReproduceFlags repro;
    std::uint32_t d = 0;
    auto *reproduce = app.add_subcommand("reproduce", "rebuild a named example and compare with its reference constants");
    reproduce->add_option("target", repro.target, "example1 | example2 | example3 | sigma")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "example3", "sigma"}));
    reproduce->add_option("--S", repro.servers, "server count for example3 / sigma");
    reproduce->add_option("--d", d, "field order (prime)");
    reproduce->add_option("--trials", repro.trials, "simulation trials");
    reproduce->add_option("--max-dim", repro.max_dim, "largest allowed state dimension d^N");
    add_search_flags(reproduce, search, strategy);

    CLI11_PARSE(app, argc, argv);

    search.strategy = *eaqmac::parse_strategy(strategy);
    std::ostringstream buffer;
    int code = kExitOk;
    if (*analyze) {
        code = cmd_analyze(problem_path, search, with_plan, alloc, buffer, std::cerr);
    } else if (*construct) {
        code = cmd_construct(problem_path, search, alloc, buffer, std::cerr);
    } else if (*verify) {
        code = cmd_verify(plan_path, buffer, std::cerr);
    } else if (*simulate) {
        if (!data_path.empty()) sim.data_path = data_path;
        code = cmd_simulate(plan_path, sim, buffer, std::cerr);
    } else if (*reproduce) {
        if (d != 0) repro.d = d;
        repro.search = search;
        code = cmd_reproduce(repro, buffer, std::cerr);
    }

    if (out_path.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream file(out_path);
        if (!file) {
            std::cerr << "cannot write " << out_path << '\n';
            return kExitInput;
        }
        file << buffer.str();
    }
    return code;
}
