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

#include <random>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/search.hpp"
#include "support.hpp"

namespace support {

struct RandomProblem {
    eaqmac::LCProblem problem;
    std::vector<oracle::IntMat> blocks;
};

// Valid problems with K <= 3, up to 4 servers and a precoder space of at most `max_space`.
inline RandomProblem random_problem(std::uint32_t d, std::mt19937_64 &rng, std::uint64_t max_space = 100'000) {
    const auto f = eaqmac::FieldSpec::make(d);
    const auto o = naive(*f);
    while (true) {
        const std::size_t k = 1 + rng() % 3, servers = 2 + rng() % 3;
        std::vector<oracle::IntMat> blocks;
        std::vector<eaqmac::MatF> mats;
        for (std::size_t s = 0; s < servers; ++s) {
            const std::size_t m = 1 + rng() % k;
            blocks.push_back(oracle::transpose(random_full_row_rank(o, m, k, rng)));
            mats.push_back(to_matf(f, blocks.back()));
        }
        try {
            auto problem = eaqmac::validate_problem(f, k, mats, "random");
            if (eaqmac::precoder_space_size(problem) > max_space) continue;
            return {std::move(problem), std::move(blocks)};
        } catch (const eaqmac::Error &) {
        }
    }
}

}  // namespace support
