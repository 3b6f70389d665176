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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grroor/common.hpp"

namespace grroor::io {

struct Split {
  std::vector<Index> train;
  std::vector<Index> test;
};

/// Features are stored d x n (one column per instance); labels n x k.
/// {0,1} is the on-disk encoding, {-1,+1} is derived.
struct Dataset {
  Matrix x;
  Matrix y01;
  Matrix y_pm;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;
  std::optional<Split> split;

  Index d() const { return x.rows(); }
  Index n() const { return x.cols(); }
  Index k() const { return y01.cols(); }

  /// Throws on shape, encoding, name or split violations.
  void validate() const;
};

/// How label attributes are identified in an ARFF file: by the names listed
/// in a MULAN XML file, or as the trailing `count` attributes.
struct LabelSpec {
  std::vector<std::string> names;
  Index trailing_count = 0;
};

std::vector<std::string> read_label_xml(const std::filesystem::path& path);

Dataset parse_arff(std::istream& in, const LabelSpec& labels,
                   const std::string& source = "<stream>");

Dataset load_arff(const std::filesystem::path& path, const LabelSpec& labels);

/// Dense ARFF with labels as trailing {0,1} attributes.
void write_arff(const Dataset& data, const std::filesystem::path& path,
                const std::string& relation = "dataset");

void write_label_xml(const Dataset& data, const std::filesystem::path& path);

/// Features CSV (header of feature names, one row per instance) and labels
/// CSV (header of label names, same row order).
Dataset load_csv(const std::filesystem::path& features_path,
                 const std::filesystem::path& labels_path);

/// Appends `test` after `train` and records the split.
Dataset concatenate(const Dataset& train, const Dataset& test);

/// Seeded shuffle; the first round(ratio * n) instances form the train set.
Split random_split(Index n, double train_ratio, std::uint64_t seed);

Dataset select_instances(const Dataset& data, const std::vector<Index>& rows);

struct Standardization {
  Vector mean;
  Vector stddev;  // population; 0 for constant features
};

/// Per-feature z-scores; constant features become zero. Statistics come from
/// `fit_rows` when given (e.g. the training split), else all instances.
Standardization standardize(Dataset& data,
                            const std::vector<Index>* fit_rows = nullptr);

/// Formats with 10 significant digits.
std::string format_real(double value);

/// Rounds to the value `format_real` would print.
double round_real(double value);

struct RankingFile {
  std::vector<Index> order;
  std::vector<std::string> names;  // by original feature index
  Vector scores;
  std::vector<double> objective_trace;
  std::vector<std::pair<std::string, double>> hyperparams;
  std::vector<std::string> warnings;
  bool converged = false;
  int iterations = 0;
};

void write_ranking(const RankingFile& ranking, const std::filesystem::path& path);
RankingFile read_ranking(const std::filesystem::path& path);

struct EvaluationRow {
  Index subset_size = 0;
  double hamming_loss = 0.0;
  double coverage = 0.0;
  double average_precision = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double ranking_loss = 0.0;
  std::optional<double> redundancy;  // undefined for a single feature
  Index coverage_skipped = 0;
  Index ranking_loss_skipped = 0;
};

struct EvaluationReport {
  int schema_version = 1;
  std::string method = "grroor";
  std::string dataset;
  std::uint64_t seed = 0;
  bool standardized = true;
  std::vector<std::pair<std::string, double>> hyperparams;
  std::vector<EvaluationRow> rows;
};

/// Metric names in report column order.
const std::vector<std::string>& metric_names();

/// Looks up a metric by name in a row (nullopt for an undefined redundancy).
std::optional<double> metric_value(const EvaluationRow& row,
                                   const std::string& name);

bool lower_is_better(const std::string& metric);

enum class ReportFormat { Json, Csv };

void write_report(const EvaluationReport& report,
                  const std::filesystem::path& path, ReportFormat format);

EvaluationReport read_report(const std::filesystem::path& path);

/// Serialized text exactly as write_report would produce it.
std::string report_to_string(const EvaluationReport& report,
                             ReportFormat format);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace grroor::io
