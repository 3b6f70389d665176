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

// ML-KNN: per-label Bayesian decision from the number of positive labels
// among an instance's k nearest training neighbors.

#pragma once

#include "grroor/common.hpp"

namespace grroor::mlknn {

struct MlknnParams {
  Index k_neighbors = 10;
  double smooth = 1.0;
};

struct MlknnModel {
  MlknnParams params;
  Vector prior_positive;  // P(H_j), length k
  Vector prior_negative;  // P(not H_j) = 1 - P(H_j)
  // (k_neighbors + 1) x labels; row m is P(E_m | H_j), resp. P(E_m | not H_j).
  Matrix cond_positive;
  Matrix cond_negative;
  // Raw tallies behind the conditionals: instances with / without label j
  // whose neighbor set holds exactly m positives for j.
  Matrix count_positive;
  Matrix count_negative;
  Matrix x_train;  // instances x features
  Matrix y_train;  // instances x labels, {0,1}
};

struct Prediction {
  Matrix labels;  // n_test x k, {0,1}
  Matrix scores;  // posterior P(H_j | E_m), in [0,1]
};

/// `x` is instances x features (row per instance), `y01` instances x labels.
MlknnModel fit(const Matrix& x, const Matrix& y01, const MlknnParams& params = {});

/// Number of positive-neighbor counts for each query row and label.
Matrix neighbor_label_counts(const MlknnModel& model, const Matrix& x_query,
                             bool exclude_self);

Prediction predict(const MlknnModel& model, const Matrix& x_test);

}  // namespace grroor::mlknn
