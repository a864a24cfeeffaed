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
#include <string>
#include <vector>

#include "eaqmac/construct.hpp"
#include "eaqmac/gf.hpp"
#include "eaqmac/matf.hpp"

// Named problem families used by the reproduce command, the tests and the
// bundled fixtures under problems/.
namespace eaqmac::problems {

namespace detail {

inline std::vector<MatF> split_columns(const MatF &v) {
    std::vector<MatF> out;
    for (std::size_t j = 0; j < v.cols(); ++j) out.push_back(submatrix(v, 0, j, v.rows(), 1));
    return out;
}

inline std::vector<MatF> scalar_precoders(const Field &field, const std::vector<std::int64_t> &values) {
    std::vector<MatF> out;
    for (auto v : values) out.push_back(MatF::from_rows(field, {{v}}));
    return out;
}

}  // namespace detail

/// Four single-symbol servers A, B, C, D; Y = (A + C + D, B + C + D).
inline LCProblem example1(std::uint32_t d = 3) {
    const Field f = FieldSpec::make(d);
    const MatF v = MatF::from_rows(f, {{1, 0, 1, 1}, {0, 1, 1, 1}});
    return validate_problem(f, 2, detail::split_columns(v), "example1");
}

/// Y = (W1 + W3, W2 + W4).
inline LCProblem example2(std::uint32_t d = 5) {
    const Field f = FieldSpec::make(d);
    const MatF v = MatF::from_rows(f, {{1, 0, 1, 0}, {0, 1, 0, 1}});
    return validate_problem(f, 2, detail::split_columns(v), "example2");
}

/// V_1 = I_S and V_s = e_1 for s = 2..S.
inline LCProblem example3(std::size_t servers, std::uint32_t d = 3) {
    const Field f = FieldSpec::make(d);
    std::vector<MatF> blocks{MatF::identity(f, servers)};
    MatF e1(f, servers, 1);
    e1(0, 0) = f->one();
    for (std::size_t s = 1; s < servers; ++s) blocks.push_back(e1);
    return validate_problem(f, servers, std::move(blocks), "example3_S" + std::to_string(servers));
}

/// The single sum W_1 + ... + W_S.
inline LCProblem sigma(std::size_t servers, std::uint32_t d = 3) {
    const Field f = FieldSpec::make(d);
    MatF one(f, 1, 1);
    one(0, 0) = f->one();
    return validate_problem(f, 1, std::vector<MatF>(servers, one), "sigma_qmac_S" + std::to_string(servers));
}

/// Precoders p = (2, 2, 1, 1): p_1 = p_3 + p_4 and 2 p_2 + p_3 + p_4 = 0 over F_3.
inline std::vector<MatF> example1_reference_precoders() {
    return detail::scalar_precoders(FieldSpec::make(3), {2, 2, 1, 1});
}

/// Reference 4 x 10 transfer matrix for example1 over F_3, as (Ml, Mr).
inline SOMatrix example1_reference_so() {
    const Field f = FieldSpec::make(3);
    return SOMatrix{MatF::from_rows(f, {{2, 0, 1, 1, 2}, {0, 2, 1, 1, 1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}),
                    MatF::from_rows(f, {{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {1, 0, 1, 1, 1}, {0, 1, 1, 1, 2}})};
}

/// p = (d - 1, d - 1, 1, 1)
inline std::vector<MatF> example2_reference_precoders(std::uint32_t d) {
    const std::int64_t top = d - 1;
    return detail::scalar_precoders(FieldSpec::make(d), {top, top, 1, 1});
}

/// Reference 4 x 8 transfer matrix for example2 (no auxiliary qudits).
inline SOMatrix example2_reference_so(std::uint32_t d) {
    const Field f = FieldSpec::make(d);
    const std::int64_t top = d - 1;
    return SOMatrix{MatF::from_rows(f, {{top, 0, 1, 0}, {0, top, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}}),
                    MatF::from_rows(f, {{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}})};
}

}  // namespace eaqmac::problems
