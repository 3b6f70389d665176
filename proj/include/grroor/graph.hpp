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

namespace grroor::graph {

struct GraphParams {
  Index neighbor_count = 5;
  double sigma_sq = 1.0;
};

/// Heat-kernel kNN affinity over instances (columns of X). S_ij is nonzero
/// when i is among j's nearest neighbors or j among i's; S_ii = 0.
struct AffinityGraph {
  Matrix s;
  Index neighbor_count = 0;
  double sigma_sq = 0.0;
};

struct Laplacian {
  Matrix l;
  Vector degree;
};

AffinityGraph build_affinity(const Matrix& x, Index neighbor_count,
                             double sigma_sq, Diagnostics* diag = nullptr);

inline AffinityGraph build_affinity(const Matrix& x, const GraphParams& p,
                                    Diagnostics* diag = nullptr) {
  return build_affinity(x, p.neighbor_count, p.sigma_sq, diag);
}

Laplacian build_laplacian(const AffinityGraph& graph);

/// Squared Euclidean distances between the columns of X.
Matrix pairwise_sq_distances(const Matrix& x);

/// Indices of the `count` nearest columns to column `j` by distance row,
/// excluding j itself; ties go to the lower index.
std::vector<Index> nearest_neighbors(const Matrix& sq_dist, Index j,
                                     Index count);

}  // namespace grroor::graph
