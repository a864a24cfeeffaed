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

#include <stdexcept>
#include <string>
#include <string_view>

namespace eaqmac {

enum class ErrorKind {
    InvalidField,
    InvalidElement,
    DimensionMismatch,
    FieldMismatch,
    SingularMatrix,
    RankDeficientV,
    RedundantBlock,
    BlockTooWide,
    KTooLarge,
    RankDeficientInput,
    SingularPrecoder,
    BudgetExceeded,
    InvalidAllocation,
    StateTooLarge,
    CompletionFailure,
    PhaseAssignmentFailure,
    NondeterministicOutcome,
    AmbiguousCharacter,
    CalibrationFailure,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidField: return "InvalidField";
        case ErrorKind::InvalidElement: return "InvalidElement";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::RankDeficientV: return "RankDeficientV";
        case ErrorKind::RedundantBlock: return "RedundantBlock";
        case ErrorKind::BlockTooWide: return "BlockTooWide";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::RankDeficientInput: return "RankDeficientInput";
        case ErrorKind::SingularPrecoder: return "SingularPrecoder";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InvalidAllocation: return "InvalidAllocation";
        case ErrorKind::StateTooLarge: return "StateTooLarge";
        case ErrorKind::CompletionFailure: return "CompletionFailure";
        case ErrorKind::PhaseAssignmentFailure: return "PhaseAssignmentFailure";
        case ErrorKind::NondeterministicOutcome: return "NondeterministicOutcome";
        case ErrorKind::AmbiguousCharacter: return "AmbiguousCharacter";
        case ErrorKind::CalibrationFailure: return "CalibrationFailure";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// All library failures are reported through this exception; `kind()` is
/// stable and meant for programmatic dispatch, `what()` for humans.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace eaqmac
