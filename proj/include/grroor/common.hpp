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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace grroor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
  ShapeMismatch,
  InvalidArgument,
  NonFinite,
  TooFewInstances,
  SubsetTooSmall,
  WrongLength,
  DegenerateRanks,
  ParseError,
  UnknownAttributeType,
  MissingValue,
  IoError,
  SplitMissing,
  IncompatibleReports,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal conditions. Operations append these to a caller-supplied sink and
// still return a usable result.
enum class WarningCode {
  RankDeficient,
  NearSingularPencil,
  DegenerateInstances,
  ConstantFeature,
  EmptyLabel,
  LabelRelevanceRepaired,
  GpiStall,
  AlmNoConverge,
  NotConverged,
  SkippedInstances,
  ZeroDenominator,
};

std::string_view to_string(WarningCode code);

struct Warning {
  WarningCode code;
  std::string message;
};

class Diagnostics {
 public:
  void warn(WarningCode code, std::string message) {
    warnings_.push_back({code, std::move(message)});
  }

  bool has(WarningCode code) const {
    for (const auto& w : warnings_) {
      if (w.code == code) return true;
    }
    return false;
  }

  bool empty() const { return warnings_.empty(); }
  const std::vector<Warning>& warnings() const { return warnings_; }
  void merge(const Diagnostics& other) {
    warnings_.insert(warnings_.end(), other.warnings_.begin(),
                     other.warnings_.end());
  }

  // Keeps only the first warning of each code.
  void merge_unique(const Diagnostics& other) {
    for (const auto& w : other.warnings_) {
      if (!has(w.code)) warnings_.push_back(w);
    }
  }

 private:
  std::vector<Warning> warnings_;
};

inline void warn(Diagnostics* sink, WarningCode code, std::string message) {
  if (sink != nullptr) sink->warn(code, std::move(message));
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace grroor
