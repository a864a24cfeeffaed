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
#include <random>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/gf.hpp"
#include "eaqmac/matf.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::NaiveField naive(const eaqmac::FieldSpec &f) {
    std::vector<int> poly(f.poly().begin(), f.poly().end());
    return oracle::NaiveField(static_cast<int>(f.p()), poly);
}

inline eaqmac::MatF to_matf(const eaqmac::Field &f, const oracle::IntMat &a, std::size_t cols_if_empty = 0) {
    if (a.empty()) return eaqmac::MatF(f, 0, cols_if_empty);
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto &r : a) rows.emplace_back(r.begin(), r.end());
    return eaqmac::MatF::from_rows(f, rows);
}

inline oracle::IntMat to_int(const eaqmac::MatF &m) {
    oracle::IntMat out(m.rows(), std::vector<int>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = static_cast<int>(m(i, j).value);
    return out;
}

// Random K x m matrix of full row rank, checked with the span oracle.
inline oracle::IntMat random_full_row_rank(const oracle::NaiveField &f, std::size_t k, std::size_t m,
                                           std::mt19937_64 &rng) {
    while (true) {
        auto a = oracle::random_matrix(f, k, m, rng);
        if (oracle::span_rank(f, a) == k) return a;
    }
}

}  // namespace support
