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

// Batch commands behind the `grroor` executable. Each returns a process exit
// code: 0 success, 1 usage or configuration error, 2 data error, 3 numerical
// trouble reported under --strict.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "grroor/io.hpp"
#include "grroor/metrics.hpp"
#include "grroor/mlknn.hpp"
#include "grroor/solver.hpp"

namespace grroor::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

struct RunConfig {
  std::string data;         // ARFF file, or features CSV
  std::string labels;       // labels CSV (format csv)
  std::string labels_xml;   // MULAN label XML (format arff)
  Index label_count = 0;    // trailing label attributes (format arff)
  std::string format = "arff";
  // Empty: no split. "random:<ratio>": seeded random train fraction.
  // Otherwise the held-out test file(s): an ARFF path, or for CSV
  // "<features.csv>,<labels.csv>".
  std::string split;
  bool standardize = true;
  std::string dataset_name;  // defaults to the data file stem
  std::string method = "grroor";

  solver::Hyperparams hp;
  mlknn::MlknnParams knn;

  std::string grid;  // grid-search JSON file
  Index sweep_min = 1;
  Index sweep_max = 50;
  std::size_t acr_length = 30;
  int threads = 1;

  std::string ranking;  // evaluate: ranking file (default <out>/ranking.json)
  std::vector<std::string> reports;  // stats / report inputs
  double q_alpha = 0.0;  // stats: 0 picks the alpha = 0.05 table value
  std::string control;   // stats: control method (default: first)
  std::string metric_filter;  // stats: restrict to one metric

  std::string out_dir = "out";
  bool strict = false;
};

/// Hyperparameters as ordered (name, value) pairs for reports.
std::vector<std::pair<std::string, double>> hyperparam_pairs(
    const solver::Hyperparams& hp);

/// Loads the configured dataset, applies the split and (optionally)
/// standardization using training-split statistics.
io::Dataset load_dataset(const RunConfig& cfg);

/// Training rows of a dataset: the split's train part, or every instance.
std::vector<Index> training_rows(const io::Dataset& data);

/// Metrics of ML-KNN trained on `train_rows` and tested on `test_rows`
/// using only the `features` listed.
metrics::MetricReport evaluate_subset(const io::Dataset& data,
                                      const std::vector<Index>& features,
                                      const std::vector<Index>& train_rows,
                                      const std::vector<Index>& test_rows,
                                      const mlknn::MlknnParams& knn,
                                      Diagnostics* diag = nullptr);

struct GridPoint {
  double lambda = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  Index latent_dim = 0;
};

struct GridResult {
  GridPoint point;
  double acr = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// Reads {"lambda": [...], "beta": [...], "eta": [...], "c": [...]}. Entries
/// of "c" are counts or strings like "0.25k" (fraction of the label count,
/// rounded, at least 1). Points come back in lexicographic
/// (lambda, beta, eta, c) order with each axis sorted ascending.
std::vector<GridPoint> read_grid(const std::string& path, Index label_count);

/// Index of the smallest ACR; the earliest point wins ties.
std::size_t best_grid_index(const std::vector<GridResult>& results);

int cmd_select(const RunConfig& cfg, std::ostream& log);
int cmd_evaluate(const RunConfig& cfg, std::ostream& log);
int cmd_grid_search(const RunConfig& cfg, std::ostream& log);
int cmd_stats(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

/// Full command-line entry point (argument parsing, config file, dispatch
/// and error-to-exit-code mapping).
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace grroor::cli
