// Copyright 2026 The strassen Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace strassen {

enum class ErrorCode {
    EmptySupport,
    WeightSumError,
    NegativeWeight,
    NonFiniteInput,
    NonFiniteValue,
    DimensionMismatch,
    DimensionError,
    IterationLimit,
    KindMismatch,
    ParamMismatch,
    CostBoundViolation,
    InvalidSpec,
    SpecMismatch,
    CouplingInvalid,
    NotOrderedWeights,
    Reducible,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptySupport: return "EmptySupport";
        case ErrorCode::WeightSumError: return "WeightSumError";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::IterationLimit: return "IterationLimit";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::ParamMismatch: return "ParamMismatch";
        case ErrorCode::CostBoundViolation: return "CostBoundViolation";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::SpecMismatch: return "SpecMismatch";
        case ErrorCode::CouplingInvalid: return "CouplingInvalid";
        case ErrorCode::NotOrderedWeights: return "NotOrderedWeights";
        case ErrorCode::Reducible: return "Reducible";
    }
    return "Unknown";
}

/// Every library failure is reported through this exception; `code()` is
/// stable and suitable for branching, `what()` is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
            : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace strassen
