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

#include "grroor/mlknn.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace grroor::mlknn {

namespace {

// Indices of the `count` training rows closest to `query`; ties go to the
// lower training index. `skip` (if >= 0) is left out.
std::vector<Index> nearest_rows(const Matrix& train, const Eigen::RowVectorXd& query,
                                Index count, Index skip) {
  const Index n = train.rows();
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    dist[static_cast<std::size_t>(i)] = (train.row(i) - query).squaredNorm();
  }
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (i != skip) order.push_back(i);
  }
  count = std::min<Index>(count, static_cast<Index>(order.size()));
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [&dist](Index a, Index b) {
                      const double da = dist[static_cast<std::size_t>(a)];
                      const double db = dist[static_cast<std::size_t>(b)];
                      return da < db || (da == db && a < b);
                    });
  order.resize(static_cast<std::size_t>(count));
  return order;
}

}  // namespace

Matrix neighbor_label_counts(const MlknnModel& model, const Matrix& x_query,
                             bool exclude_self) {
  require(x_query.cols() == model.x_train.cols(), ErrorCode::ShapeMismatch,
          "mlknn: query has " + std::to_string(x_query.cols()) +
              " features, model has " + std::to_string(model.x_train.cols()));
  Matrix counts = Matrix::Zero(x_query.rows(), model.y_train.cols());
  for (Index q = 0; q < x_query.rows(); ++q) {
    const auto neighbors =
        nearest_rows(model.x_train, x_query.row(q), model.params.k_neighbors,
                     exclude_self ? q : -1);
    for (Index i : neighbors) counts.row(q) += model.y_train.row(i);
  }
  return counts;
}

MlknnModel fit(const Matrix& x, const Matrix& y01, const MlknnParams& params) {
  require(x.rows() == y01.rows(), ErrorCode::ShapeMismatch,
          "mlknn: X and Y instance counts differ");
  require(params.k_neighbors >= 1 && params.smooth > 0.0,
          ErrorCode::InvalidArgument, "mlknn: bad parameters");
  require(x.rows() > params.k_neighbors, ErrorCode::TooFewInstances,
          "mlknn: need more than " + std::to_string(params.k_neighbors) +
              " training instances, got " + std::to_string(x.rows()));

  const Index n = x.rows();
  const Index labels = y01.cols();
  const Index kk = params.k_neighbors;
  const double s = params.smooth;

  MlknnModel model;
  model.params = params;
  model.x_train = x;
  model.y_train = y01;

  model.prior_positive =
      ((s + y01.colwise().sum().array()) / (2.0 * s + double(n))).transpose();
  model.prior_negative = (1.0 - model.prior_positive.array()).matrix();

  const Matrix counts = neighbor_label_counts(model, x, /*exclude_self=*/true);
  model.count_positive = Matrix::Zero(kk + 1, labels);
  model.count_negative = Matrix::Zero(kk + 1, labels);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < labels; ++j) {
      const auto m = static_cast<Index>(counts(i, j));
      if (y01(i, j) == 1.0) {
        model.count_positive(m, j) += 1.0;
      } else {
        model.count_negative(m, j) += 1.0;
      }
    }
  }
  const double cells = double(kk + 1);
  model.cond_positive = model.count_positive;
  model.cond_negative = model.count_negative;
  for (Index j = 0; j < labels; ++j) {
    const double pos_total = model.count_positive.col(j).sum();
    const double neg_total = model.count_negative.col(j).sum();
    model.cond_positive.col(j) =
        (s + model.count_positive.col(j).array()) / (s * cells + pos_total);
    model.cond_negative.col(j) =
        (s + model.count_negative.col(j).array()) / (s * cells + neg_total);
  }
  return model;
}

Prediction predict(const MlknnModel& model, const Matrix& x_test) {
  const Matrix counts = neighbor_label_counts(model, x_test, false);
  Prediction out;
  out.labels = Matrix::Zero(counts.rows(), counts.cols());
  out.scores = Matrix::Zero(counts.rows(), counts.cols());
  for (Index i = 0; i < counts.rows(); ++i) {
    for (Index j = 0; j < counts.cols(); ++j) {
      const auto m = static_cast<Index>(counts(i, j));
      const double pos = model.prior_positive(j) * model.cond_positive(m, j);
      const double neg = model.prior_negative(j) * model.cond_negative(m, j);
      out.labels(i, j) = pos >= neg ? 1.0 : 0.0;
      out.scores(i, j) = pos / (pos + neg);
    }
  }
  return out;
}

}  // namespace grroor::mlknn
