/*
 * Copyright 2026 The grroor Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "grroor/common.hpp"

namespace grroor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::SubsetTooSmall: return "SubsetTooSmall";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::DegenerateRanks: return "DegenerateRanks";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownAttributeType: return "UnknownAttributeType";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SplitMissing: return "SplitMissing";
    case ErrorCode::IncompatibleReports: return "IncompatibleReports";
  }
  return "Unknown";
}

std::string_view to_string(WarningCode code) {
  switch (code) {
    case WarningCode::RankDeficient: return "RankDeficient";
    case WarningCode::NearSingularPencil: return "NearSingularPencil";
    case WarningCode::DegenerateInstances: return "DegenerateInstances";
    case WarningCode::ConstantFeature: return "ConstantFeature";
    case WarningCode::EmptyLabel: return "EmptyLabel";
    case WarningCode::LabelRelevanceRepaired: return "LabelRelevanceRepaired";
    case WarningCode::GpiStall: return "GpiStall";
    case WarningCode::AlmNoConverge: return "AlmNoConverge";
    case WarningCode::NotConverged: return "NotConverged";
    case WarningCode::SkippedInstances: return "SkippedInstances";
    case WarningCode::ZeroDenominator: return "ZeroDenominator";
  }
  return "Unknown";
}

}  // namespace grroor
