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

#include "grroor/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace grroor::graph {

Matrix pairwise_sq_distances(const Matrix& x) {
  const Index n = x.cols();
  Matrix dist(n, n);
  for (Index j = 0; j < n; ++j) {
    dist(j, j) = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      const double d = (x.col(i) - x.col(j)).squaredNorm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

std::vector<Index> nearest_neighbors(const Matrix& sq_dist, Index j,
                                     Index count) {
  const Index n = sq_dist.rows();
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    if (i != j) order.push_back(i);
  }
  count = std::min<Index>(count, static_cast<Index>(order.size()));
  auto closer = [&](Index a, Index b) {
    const double da = sq_dist(a, j);
    const double db = sq_dist(b, j);
    return da < db || (da == db && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + count, order.end(), closer);
  order.resize(static_cast<std::size_t>(count));
  return order;
}

AffinityGraph build_affinity(const Matrix& x, Index neighbor_count,
                             double sigma_sq, Diagnostics* diag) {
  const Index n = x.cols();
  require(neighbor_count >= 1 && neighbor_count < n,
          ErrorCode::InvalidArgument,
          "build_affinity: need 1 <= neighbor_count < n");
  require(sigma_sq > 0.0 && std::isfinite(sigma_sq),
          ErrorCode::InvalidArgument, "build_affinity: sigma_sq must be > 0");

  const Matrix dist = pairwise_sq_distances(x);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> linked =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n,
                                                                    false);
  for (Index j = 0; j < n; ++j) {
    for (Index i : nearest_neighbors(dist, j, neighbor_count)) {
      linked(i, j) = true;
      linked(j, i) = true;
    }
  }

  Index duplicates = 0;
  AffinityGraph graph{Matrix::Zero(n, n), neighbor_count, sigma_sq};
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      if (i > j && dist(i, j) == 0.0) ++duplicates;
      if (linked(i, j)) graph.s(i, j) = std::exp(-dist(i, j) / sigma_sq);
    }
  }
  if (duplicates > 0) {
    warn(diag, WarningCode::DegenerateInstances,
         "build_affinity: " + std::to_string(duplicates) +
             " duplicate instance pair(s); neighbor ties broken by index");
  }
  return graph;
}

Laplacian build_laplacian(const AffinityGraph& graph) {
  Laplacian lap;
  lap.degree = graph.s.rowwise().sum();
  lap.l = -graph.s;
  lap.l.diagonal() += lap.degree;
  return lap;
}

}  // namespace grroor::graph
