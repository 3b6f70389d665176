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

#include "grroor/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grroor/linalg.hpp"

namespace grroor::correlation {

namespace {

constexpr double kPsdTolerance = 1e-8;

std::string index_list(const std::vector<Index>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size() && i < 10; ++i) {
    if (i > 0) out += ",";
    out += std::to_string(idx[i]);
  }
  if (idx.size() > 10) out += ",...";
  return out;
}

}  // namespace

RedundancyMatrix build_redundancy(const Matrix& x, Diagnostics* diag) {
  require(x.rows() >= 1 && x.cols() >= 2, ErrorCode::InvalidArgument,
          "build_redundancy: need d >= 1 and n >= 2");
  const Matrix f = linalg::centering_apply(x);  // n x d
  const Index d = f.cols();

  RedundancyMatrix out;
  Vector inv_norm(d);
  for (Index i = 0; i < d; ++i) {
    const double norm = f.col(i).norm();
    const double scale = x.row(i).cwiseAbs().maxCoeff();
    if (norm <= 1e-12 * (1.0 + scale) * std::sqrt(double(x.cols()))) {
      inv_norm(i) = 0.0;
      out.constant_features.push_back(i);
    } else {
      inv_norm(i) = 1.0 / norm;
    }
  }
  const Matrix fd = f * inv_norm.asDiagonal();
  Matrix o = fd.transpose() * fd;
  o.triangularView<Eigen::StrictlyUpper>() = o.transpose();  // exact symmetry
  out.a = o.cwiseProduct(o).cwiseMin(1.0);
  for (Index i = 0; i < d; ++i) {
    if (inv_norm(i) != 0.0) out.a(i, i) = 1.0;
  }
  if (!out.constant_features.empty()) {
    warn(diag, WarningCode::ConstantFeature,
         "build_redundancy: constant feature(s) " +
             index_list(out.constant_features));
  }
  return out;
}

LabelRelevance build_label_relevance(const Matrix& y01, Diagnostics* diag) {
  const Index k = y01.cols();
  require(k >= 2, ErrorCode::InvalidArgument,
          "build_label_relevance: need at least 2 labels");
  LabelRelevance out;
  Vector norm(k);
  for (Index j = 0; j < k; ++j) {
    norm(j) = y01.col(j).norm();
    if (norm(j) == 0.0) out.empty_labels.push_back(j);
  }
  const Matrix gram = y01.transpose() * y01;
  out.z = Matrix::Zero(k, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k; ++i) {
      if (norm(i) > 0.0 && norm(j) > 0.0) {
        out.z(i, j) = std::clamp(gram(i, j) / (norm(i) * norm(j)), 0.0, 1.0);
      }
    }
    out.z(j, j) = 1.0;
  }
  if (!out.empty_labels.empty()) {
    warn(diag, WarningCode::EmptyLabel,
         "build_label_relevance: label(s) with no positives " +
             index_list(out.empty_labels));
  }

  out.penalty = Matrix::Ones(k, k) - out.z;
  const linalg::SymEig eig = linalg::sym_eig(out.penalty);
  out.min_eigenvalue = eig.values(0);
  if (out.min_eigenvalue < -kPsdTolerance) {
    out.repaired = true;
    const Vector clipped = eig.values.cwiseMax(0.0);
    out.penalty_psd =
        eig.vectors * clipped.asDiagonal() * eig.vectors.transpose();
    out.penalty_psd = 0.5 * (out.penalty_psd + out.penalty_psd.transpose());
    warn(diag, WarningCode::LabelRelevanceRepaired,
         "build_label_relevance: R had eigenvalue " +
             std::to_string(out.min_eigenvalue) + "; negative part clipped");
  } else {
    out.penalty_psd = out.penalty;
  }
  return out;
}

}  // namespace grroor::correlation
