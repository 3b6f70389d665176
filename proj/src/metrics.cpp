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

#include "grroor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace grroor::metrics {

namespace {

// rank[j] = 1-based position of label j when labels are sorted by
// descending score, ties by ascending index.
std::vector<Index> label_ranks(const Eigen::RowVectorXd& scores) {
  const Index k = scores.size();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&scores](Index a, Index b) {
    return scores(a) > scores(b);
  });
  std::vector<Index> rank(static_cast<std::size_t>(k));
  for (Index pos = 0; pos < k; ++pos) {
    rank[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] =
        pos + 1;
  }
  return rank;
}

double mean_or_zero(double sum, Index count) {
  return count > 0 ? sum / double(count) : 0.0;
}

}  // namespace

void PredictionSet::validate() const {
  require(y_true.rows() == y_pred.rows() && y_true.cols() == y_pred.cols() &&
              y_true.rows() == scores.rows() && y_true.cols() == scores.cols(),
          ErrorCode::ShapeMismatch, "PredictionSet: inconsistent shapes");
  require(y_true.size() > 0, ErrorCode::InvalidArgument,
          "PredictionSet: empty");
  require(scores.allFinite(), ErrorCode::NonFinite,
          "PredictionSet: non-finite scores");
}

double hamming_loss(const PredictionSet& p) {
  p.validate();
  const double wrong = (p.y_true.array() != p.y_pred.array()).count();
  return wrong / double(p.y_true.size());
}

double coverage(const PredictionSet& p, Index* skipped) {
  p.validate();
  const Index k = p.y_true.cols();
  double sum = 0.0;
  Index used = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i) {
    const auto rank = label_ranks(p.scores.row(i));
    Index worst = 0;
    for (Index j = 0; j < k; ++j) {
      if (p.y_true(i, j) == 1.0) {
        worst = std::max(worst, rank[static_cast<std::size_t>(j)]);
      }
    }
    if (worst == 0) continue;
    sum += double(worst - 1);
    ++used;
  }
  if (skipped != nullptr) *skipped = p.y_true.rows() - used;
  return mean_or_zero(sum, used) / double(k);
}

double average_precision(const PredictionSet& p, Index* skipped) {
  p.validate();
  const Index k = p.y_true.cols();
  double sum = 0.0;
  Index used = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i) {
    const auto rank = label_ranks(p.scores.row(i));
    std::vector<Index> relevant_ranks;
    for (Index j = 0; j < k; ++j) {
      if (p.y_true(i, j) == 1.0) {
        relevant_ranks.push_back(rank[static_cast<std::size_t>(j)]);
      }
    }
    if (relevant_ranks.empty()) continue;
    std::sort(relevant_ranks.begin(), relevant_ranks.end());
    double precision_sum = 0.0;
    for (std::size_t r = 0; r < relevant_ranks.size(); ++r) {
      precision_sum += double(r + 1) / double(relevant_ranks[r]);
    }
    sum += precision_sum / double(relevant_ranks.size());
    ++used;
  }
  if (skipped != nullptr) *skipped = p.y_true.rows() - used;
  return mean_or_zero(sum, used);
}

double macro_f1(const PredictionSet& p, Diagnostics* diag) {
  p.validate();
  const Index k = p.y_true.cols();
  double sum = 0.0;
  Index zero_labels = 0;
  for (Index j = 0; j < k; ++j) {
    const double tp = p.y_true.col(j).cwiseProduct(p.y_pred.col(j)).sum();
    const double denom = p.y_true.col(j).sum() + p.y_pred.col(j).sum();
    if (denom == 0.0) {
      ++zero_labels;
      continue;
    }
    sum += 2.0 * tp / denom;
  }
  if (zero_labels > 0) {
    warn(diag, WarningCode::ZeroDenominator,
         "macro_f1: " + std::to_string(zero_labels) +
             " label(s) absent from truth and prediction");
  }
  return sum / double(k);
}

double micro_f1(const PredictionSet& p) {
  p.validate();
  const double tp = p.y_true.cwiseProduct(p.y_pred).sum();
  const double denom = p.y_true.sum() + p.y_pred.sum();
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

double ranking_loss(const PredictionSet& p, Index* skipped) {
  p.validate();
  const Index k = p.y_true.cols();
  double sum = 0.0;
  Index used = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i) {
    double wrong = 0.0;
    Index pos = 0;
    Index neg = 0;
    for (Index t = 0; t < k; ++t) {
      if (p.y_true(i, t) == 1.0) {
        ++pos;
      } else {
        ++neg;
      }
    }
    if (pos == 0 || neg == 0) continue;
    for (Index t = 0; t < k; ++t) {
      if (p.y_true(i, t) != 1.0) continue;
      for (Index f = 0; f < k; ++f) {
        if (p.y_true(i, f) == 1.0) continue;
        if (p.scores(i, t) < p.scores(i, f)) {
          wrong += 1.0;
        } else if (p.scores(i, t) == p.scores(i, f)) {
          wrong += 0.5;
        }
      }
    }
    sum += wrong / double(pos * neg);
    ++used;
  }
  if (skipped != nullptr) *skipped = p.y_true.rows() - used;
  return mean_or_zero(sum, used);
}

double redundancy_score(std::span<const Index> selected, const Matrix& a) {
  const auto m = static_cast<Index>(selected.size());
  require(m >= 2, ErrorCode::SubsetTooSmall,
          "redundancy_score: need at least 2 features");
  double sum = 0.0;
  for (Index i : selected) {
    for (Index j : selected) {
      require(i >= 0 && j >= 0 && i < a.rows() && j < a.cols(),
              ErrorCode::InvalidArgument,
              "redundancy_score: feature index out of range");
      if (i != j) sum += a(i, j);
    }
  }
  return sum / double(m * (m - 1));
}

MetricReport evaluate(const PredictionSet& p, Diagnostics* diag) {
  MetricReport r;
  r.hamming_loss = hamming_loss(p);
  r.coverage = coverage(p, &r.coverage_skipped);
  Index ap_skipped = 0;
  r.average_precision = average_precision(p, &ap_skipped);
  r.macro_f1 = macro_f1(p, diag);
  r.micro_f1 = micro_f1(p);
  r.ranking_loss = ranking_loss(p, &r.ranking_loss_skipped);
  if (r.coverage_skipped > 0 || r.ranking_loss_skipped > 0) {
    warn(diag, WarningCode::SkippedInstances,
         "evaluate: skipped " + std::to_string(r.coverage_skipped) +
             " instance(s) for coverage/AP and " +
             std::to_string(r.ranking_loss_skipped) + " for ranking loss");
  }
  return r;
}

double acr(std::span<const HlRl> runs, std::size_t expected_length) {
  require(runs.size() == expected_length, ErrorCode::WrongLength,
          "acr: expected " + std::to_string(expected_length) +
              " (HL, RL) pairs, got " + std::to_string(runs.size()));
  double total = 0.0;
  for (const auto& r : runs) total += r.hamming_loss + r.ranking_loss;
  return total;
}

double nemenyi_cd(Index methods, Index datasets, double q_alpha) {
  require(methods >= 2 && datasets >= 1, ErrorCode::InvalidArgument,
          "nemenyi_cd: need >= 2 methods and >= 1 dataset");
  const double nc = double(methods);
  return q_alpha * std::sqrt(nc * (nc + 1.0) / (6.0 * double(datasets)));
}

double nemenyi_q_alpha_005(Index methods) {
  static constexpr double kTable[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                                      2.949, 3.031, 3.102, 3.164};
  require(methods >= 2 && methods <= 10, ErrorCode::InvalidArgument,
          "nemenyi_q_alpha_005: tabulated for 2..10 methods");
  return kTable[methods - 2];
}

FriedmanResult friedman_stat(const Matrix& ranks) {
  const Index nd = ranks.rows();
  const Index nc = ranks.cols();
  require(nd >= 1 && nc >= 2, ErrorCode::InvalidArgument,
          "friedman_stat: need >= 1 dataset and >= 2 methods");
  require(ranks.allFinite(), ErrorCode::NonFinite,
          "friedman_stat: non-finite rank");
  FriedmanResult out;
  out.average_ranks = ranks.colwise().mean().transpose();
  const double k = double(nc);
  const double n = double(nd);
  out.chi_sq = 12.0 * n / (k * (k + 1.0)) *
               (out.average_ranks.squaredNorm() - k * (k + 1.0) * (k + 1.0) / 4.0);
  if (std::abs(out.chi_sq) < 1e-12) out.chi_sq = 0.0;
  const double denom = n * (k - 1.0) - out.chi_sq;
  require(std::abs(denom) > 1e-12 * n * k, ErrorCode::DegenerateRanks,
          "friedman_stat: chi-square equals nd (nc - 1); F_F undefined");
  out.f_f = (n - 1.0) * out.chi_sq / denom;
  return out;
}

Matrix rank_rows(const Matrix& scores, bool lower_is_better) {
  Matrix ranks(scores.rows(), scores.cols());
  const Index nc = scores.cols();
  for (Index r = 0; r < scores.rows(); ++r) {
    std::vector<Index> order(static_cast<std::size_t>(nc));
    std::iota(order.begin(), order.end(), Index{0});
    auto better = [&](Index a, Index b) {
      return lower_is_better ? scores(r, a) < scores(r, b)
                             : scores(r, a) > scores(r, b);
    };
    std::stable_sort(order.begin(), order.end(), better);
    Index start = 0;
    while (start < nc) {
      Index end = start + 1;
      while (end < nc && scores(r, order[static_cast<std::size_t>(end)]) ==
                             scores(r, order[static_cast<std::size_t>(start)])) {
        ++end;
      }
      const double avg = 0.5 * double(start + 1 + end);
      for (Index t = start; t < end; ++t) {
        ranks(r, order[static_cast<std::size_t>(t)]) = avg;
      }
      start = end;
    }
  }
  return ranks;
}

}  // namespace grroor::metrics
