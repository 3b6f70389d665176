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

// Multi-label evaluation measures and the rank statistics used to compare
// methods across datasets.
//
// Ranking-based measures order labels by descending score; equal scores are
// ordered by ascending label index. Instances a ranking measure cannot score
// (no relevant label, or for ranking loss no irrelevant label either) are
// left out of the mean and counted in `skipped`.

#pragma once

#include <span>
#include <utility>

#include "grroor/common.hpp"

namespace grroor::metrics {

struct PredictionSet {
  Matrix y_true;  // n x k, {0,1}
  Matrix y_pred;  // n x k, {0,1}
  Matrix scores;  // n x k, higher = more relevant

  void validate() const;
};

struct MetricReport {
  double hamming_loss = 0.0;
  double coverage = 0.0;
  double average_precision = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double ranking_loss = 0.0;
  double redundancy = 0.0;  // needs a feature subset; see redundancy_score
  Index coverage_skipped = 0;
  Index ranking_loss_skipped = 0;
};

double hamming_loss(const PredictionSet& p);

/// Averaged (max rank of a relevant label - 1), divided by k.
double coverage(const PredictionSet& p, Index* skipped = nullptr);

double average_precision(const PredictionSet& p, Index* skipped = nullptr);

/// A label with no positives in either truth or prediction contributes 0
/// (ZeroDenominator warning).
double macro_f1(const PredictionSet& p, Diagnostics* diag = nullptr);

double micro_f1(const PredictionSet& p);

/// Fraction of (relevant, irrelevant) label pairs ordered wrongly; a tie
/// counts one half.
double ranking_loss(const PredictionSet& p, Index* skipped = nullptr);

/// Mean pairwise redundancy A_ij over i != j in the subset. Needs >= 2
/// features (SubsetTooSmall otherwise).
double redundancy_score(std::span<const Index> selected, const Matrix& a);

/// Every measure except redundancy.
MetricReport evaluate(const PredictionSet& p, Diagnostics* diag = nullptr);

struct HlRl {
  double hamming_loss = 0.0;
  double ranking_loss = 0.0;
};

inline constexpr std::size_t kDefaultAcrLength = 30;

/// Sum of hamming loss + ranking loss over the top-1..top-L feature subsets.
/// Smaller is better. WrongLength unless exactly `expected_length` entries.
double acr(std::span<const HlRl> runs,
           std::size_t expected_length = kDefaultAcrLength);

/// Nemenyi critical difference q_alpha * sqrt(nc (nc + 1) / (6 nd)).
double nemenyi_cd(Index methods, Index datasets, double q_alpha);

/// Two-tailed Nemenyi q at alpha = 0.05 for 2..10 methods.
double nemenyi_q_alpha_005(Index methods);

struct FriedmanResult {
  double chi_sq = 0.0;
  double f_f = 0.0;  // Iman-Davenport
  Vector average_ranks;
};

/// `ranks` is datasets x methods; each row holds the methods' ranks on one
/// dataset (1 = best, ties averaged). Throws DegenerateRanks when the
/// Iman-Davenport denominator vanishes.
FriedmanResult friedman_stat(const Matrix& ranks);

/// Converts a datasets x methods score table to per-row ranks, 1 = best,
/// ties given their average rank.
Matrix rank_rows(const Matrix& scores, bool lower_is_better);

}  // namespace grroor::metrics
