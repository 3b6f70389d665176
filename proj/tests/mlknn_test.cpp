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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"

namespace grroor::mlknn {
namespace {

using testing::gaussian;

// Six 1-D points in two clusters, K = 2, smooth = 1. With ties broken by
// the lower index the neighbour sets are
//   0:{1,2} 1:{0,2} 2:{1,0} 3:{4,5} 4:{3,5} 5:{4,3}.
// Label a = (1,1,0,0,0,1) gives positive-neighbour counts (1,1,2,1,1,0);
// label b = (0,0,0,1,1,1) gives (0,0,0,2,2,2).
struct Toy {
  Matrix x;
  Matrix y;
};

Toy toy() {
  Toy t;
  t.x.resize(6, 1);
  t.x << 0, 1, 2, 10, 11, 12;
  t.y.resize(6, 2);
  t.y << 1, 0,
         1, 0,
         0, 0,
         0, 1,
         0, 1,
         1, 1;
  return t;
}

MlknnParams toy_params() { return MlknnParams{2, 1.0}; }

TEST(MlknnFit, HandTalliedTables) {
  const Toy t = toy();
  const MlknnModel model = fit(t.x, t.y, toy_params());
  EXPECT_DOUBLE_EQ(model.prior_positive(0), 0.5);
  EXPECT_DOUBLE_EQ(model.prior_positive(1), 0.5);
  EXPECT_DOUBLE_EQ(model.prior_negative(0), 0.5);

  // Label a: positives {0,1,5} have counts {1,1,0}; negatives {2,3,4} have
  // counts {2,1,1}.
  EXPECT_EQ(model.count_positive.col(0), (Vector(3) << 1, 2, 0).finished());
  EXPECT_EQ(model.count_negative.col(0), (Vector(3) << 0, 2, 1).finished());
  EXPECT_DOUBLE_EQ(model.cond_positive(0, 0), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_positive(1, 0), 3.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_positive(2, 0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_negative(0, 0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_negative(1, 0), 3.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_negative(2, 0), 2.0 / 6.0);

  // Label b: every positive sees 2, every negative sees 0.
  EXPECT_EQ(model.count_positive.col(1), (Vector(3) << 0, 0, 3).finished());
  EXPECT_EQ(model.count_negative.col(1), (Vector(3) << 3, 0, 0).finished());
  EXPECT_DOUBLE_EQ(model.cond_positive(2, 1), 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_negative(0, 1), 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(model.cond_negative(1, 1), 1.0 / 6.0);
}

TEST(MlknnPredict, HandDecisions) {
  const Toy t = toy();
  const MlknnModel model = fit(t.x, t.y, toy_params());
  Matrix query(2, 1);
  query << 11.5, 0.4;
  const Prediction p = predict(model, query);
  // 11.5: neighbours {4,5}. Label a sees 1 positive: equal evidence, tie
  // resolves to relevant. Label b sees 2: posterior 4/(4+1).
  EXPECT_EQ(p.labels(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.scores(0, 0), 0.5);
  EXPECT_EQ(p.labels(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(p.scores(0, 1), 0.8);
  // 0.4: neighbours {0,1}. Label a sees 2: posterior 1/(1+2).
  // Label b sees 0: posterior 1/(1+4).
  EXPECT_EQ(p.labels(1, 0), 0.0);
  EXPECT_NEAR(p.scores(1, 0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(p.labels(1, 1), 0.0);
  EXPECT_NEAR(p.scores(1, 1), 0.2, 1e-15);
}

TEST(MlknnFit, PriorFormula) {
  Matrix x(4, 1);
  x << 0, 1, 2, 3;
  Matrix y(4, 2);
  y << 1, 1, 1, 1, 0, 1, 0, 1;
  const MlknnModel model = fit(x, y, MlknnParams{1, 1.0});
  EXPECT_DOUBLE_EQ(model.prior_positive(0), 0.5);
  EXPECT_DOUBLE_EQ(model.prior_positive(1), 5.0 / 6.0);

  std::mt19937_64 rng(3);
  const MlknnModel all = fit(gaussian(10, 2, rng), Matrix::Ones(10, 1),
                             MlknnParams{3, 1.0});
  EXPECT_DOUBLE_EQ(all.prior_positive(0), 11.0 / 12.0);
}

TEST(MlknnFit, TooFewInstances) {
  try {
    fit(Matrix::Zero(5, 2), Matrix::Ones(5, 1), MlknnParams{5, 1.0});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewInstances);
  }
}

TEST(MlknnFit, TalliesCoverTrainingSet) {
  std::mt19937_64 rng(4);
  const Matrix x = gaussian(25, 3, rng);
  const Matrix y = testing::random_labels(25, 4, 0.4, rng);
  const MlknnModel model = fit(x, y, MlknnParams{5, 1.0});
  for (Index j = 0; j < 4; ++j) {
    EXPECT_EQ(model.count_positive.col(j).sum(), y.col(j).sum());
    EXPECT_EQ(model.count_positive.col(j).sum() +
                  model.count_negative.col(j).sum(),
              25.0);
    EXPECT_DOUBLE_EQ(model.prior_positive(j) + model.prior_negative(j), 1.0);
    EXPECT_GT(model.cond_positive.col(j).minCoeff(), 0.0);
    EXPECT_LT(model.cond_positive.col(j).maxCoeff(), 1.0);
    EXPECT_NEAR(model.cond_positive.col(j).sum(), 1.0, 1e-12);
    EXPECT_NEAR(model.cond_negative.col(j).sum(), 1.0, 1e-12);
  }
}

// Brute-force neighbour counts, written independently of the library.
Matrix brute_counts(const Matrix& train, const Matrix& y, const Matrix& query,
                    Index k) {
  Matrix counts(query.rows(), y.cols());
  for (Index q = 0; q < query.rows(); ++q) {
    std::vector<Index> idx(train.rows());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
      return (train.row(a) - query.row(q)).squaredNorm() <
             (train.row(b) - query.row(q)).squaredNorm();
    });
    for (Index j = 0; j < y.cols(); ++j) {
      double c = 0;
      for (Index r = 0; r < k; ++r) c += y(idx[r], j);
      counts(q, j) = c;
    }
  }
  return counts;
}

TEST(MlknnPredict, ReplaysMapFromTables) {
  std::mt19937_64 rng(5);
  const Matrix x = gaussian(10, 3, rng);
  const Matrix y = testing::random_labels(10, 3, 0.5, rng);
  const MlknnModel model = fit(x, y, MlknnParams{3, 1.0});
  const Matrix query = gaussian(15, 3, rng);
  const Prediction p = predict(model, query);
  const Matrix counts = brute_counts(x, y, query, 3);
  EXPECT_EQ(neighbor_label_counts(model, query, false), counts);
  for (Index q = 0; q < query.rows(); ++q) {
    for (Index j = 0; j < 3; ++j) {
      const Index m = static_cast<Index>(counts(q, j));
      const double pos = model.prior_positive(j) * model.cond_positive(m, j);
      const double neg = model.prior_negative(j) * model.cond_negative(m, j);
      EXPECT_EQ(p.labels(q, j), pos >= neg ? 1.0 : 0.0);
      EXPECT_NEAR(p.scores(q, j), pos / (pos + neg), 1e-15);
      EXPECT_GE(p.scores(q, j), 0.0);
      EXPECT_LE(p.scores(q, j), 1.0);
    }
  }
}

TEST(MlknnPredict, DominantPositiveCluster) {
  Matrix x(6, 1);
  x << 0, 0.1, 0.2, 0.3, 5, 9;
  Matrix y(6, 1);
  y << 1, 1, 1, 1, 1, 0;
  const MlknnModel model = fit(x, y, MlknnParams{3, 1.0});
  Matrix query(1, 1);
  query << 0.15;
  EXPECT_EQ(predict(model, query).labels(0, 0), 1.0);
}

TEST(MlknnPredict, FeaturePermutationInvariant) {
  std::mt19937_64 rng(6);
  const Matrix x = gaussian(20, 4, rng);
  const Matrix y = testing::random_labels(20, 3, 0.4, rng);
  const Matrix query = gaussian(8, 4, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
  perm.indices() << 2, 0, 3, 1;
  const Prediction a = predict(fit(x, y, {5, 1.0}), query);
  const Prediction b = predict(fit(x * perm, y, {5, 1.0}), query * perm);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_LE((a.scores - b.scores).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MlknnPredict, IdenticalInstancesGiveEqualPosteriors) {
  const Matrix x = Matrix::Ones(6, 2);
  std::mt19937_64 rng(7);
  const Matrix y = testing::random_labels(6, 3, 0.5, rng);
  const MlknnModel model = fit(x, y, MlknnParams{5, 1.0});
  const Prediction p = predict(model, gaussian(4, 2, rng));
  for (Index j = 0; j < 3; ++j)
    EXPECT_EQ(p.scores.col(j).maxCoeff(), p.scores.col(j).minCoeff());
}

}  // namespace
}  // namespace grroor::mlknn
