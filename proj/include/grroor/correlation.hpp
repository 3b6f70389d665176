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

#include "grroor/common.hpp"

namespace grroor::correlation {

/// Squared Pearson correlation between every pair of features. Constant
/// features get an all-zero row and column, diagonal included.
struct RedundancyMatrix {
  Matrix a;
  std::vector<Index> constant_features;
};

/// Label co-occurrence cosine Z over {0,1} columns and its complement
/// R = 1 - Z. `penalty` keeps R exactly (zero diagonal); `penalty_psd` is R
/// with negative eigenvalues clipped, which is what the optimizer uses.
struct LabelRelevance {
  Matrix z;
  Matrix penalty;
  Matrix penalty_psd;
  double min_eigenvalue = 0.0;
  bool repaired = false;
  std::vector<Index> empty_labels;
};

RedundancyMatrix build_redundancy(const Matrix& x, Diagnostics* diag = nullptr);

/// `y01` is n x k with entries in {0,1}.
LabelRelevance build_label_relevance(const Matrix& y01,
                                     Diagnostics* diag = nullptr);

}  // namespace grroor::correlation
