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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_support.hpp"

namespace grroor::metrics {
namespace {

// ---------------------------------------------------------------------------
// Independent oracles, written from the definitions with plain loops.

Index oracle_rank(const Matrix& s, Index i, Index l) {
  Index rank = 1;
  for (Index o = 0; o < s.cols(); ++o) {
    if (o == l) continue;
    if (s(i, o) > s(i, l) || (s(i, o) == s(i, l) && o < l)) ++rank;
  }
  return rank;
}

double oracle_hamming(const PredictionSet& p) {
  double wrong = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i)
    for (Index j = 0; j < p.y_true.cols(); ++j)
      wrong += p.y_true(i, j) != p.y_pred(i, j);
  return wrong / double(p.y_true.size());
}

double oracle_coverage(const PredictionSet& p) {
  double total = 0;
  int used = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i) {
    Index worst = 0;
    for (Index l = 0; l < p.y_true.cols(); ++l)
      if (p.y_true(i, l) == 1) worst = std::max(worst, oracle_rank(p.scores, i, l));
    if (worst == 0) continue;
    total += double(worst - 1);
    ++used;
  }
  return used == 0 ? 0.0 : total / used / double(p.y_true.cols());
}

double oracle_ap(const PredictionSet& p) {
  double total = 0;
  int used = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i) {
    double sum = 0;
    int relevant = 0;
    for (Index l = 0; l < p.y_true.cols(); ++l) {
      if (p.y_true(i, l) != 1) continue;
      ++relevant;
      const Index r = oracle_rank(p.scores, i, l);
      int above = 0;
      for (Index o = 0; o < p.y_true.cols(); ++o)
        if (p.y_true(i, o) == 1 && oracle_rank(p.scores, i, o) <= r) ++above;
      sum += double(above) / double(r);
    }
    if (relevant == 0) continue;
    total += sum / relevant;
    ++used;
  }
  return used == 0 ? 0.0 : total / used;
}

double oracle_rl(const PredictionSet& p) {
  double total = 0;
  int used = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i) {
    double bad = 0;
    int pairs = 0;
    for (Index a = 0; a < p.y_true.cols(); ++a) {
      if (p.y_true(i, a) != 1) continue;
      for (Index b = 0; b < p.y_true.cols(); ++b) {
        if (p.y_true(i, b) != 0) continue;
        ++pairs;
        if (p.scores(i, a) < p.scores(i, b)) bad += 1.0;
        else if (p.scores(i, a) == p.scores(i, b)) bad += 0.5;
      }
    }
    if (pairs == 0) continue;
    total += bad / pairs;
    ++used;
  }
  return used == 0 ? 0.0 : total / used;
}

double oracle_macro_f1(const PredictionSet& p) {
  double total = 0;
  for (Index j = 0; j < p.y_true.cols(); ++j) {
    double tp = 0, t = 0, h = 0;
    for (Index i = 0; i < p.y_true.rows(); ++i) {
      tp += p.y_true(i, j) * p.y_pred(i, j);
      t += p.y_true(i, j);
      h += p.y_pred(i, j);
    }
    if (t + h > 0) total += 2 * tp / (t + h);
  }
  return total / double(p.y_true.cols());
}

double oracle_micro_f1(const PredictionSet& p) {
  double tp = 0, t = 0, h = 0;
  for (Index i = 0; i < p.y_true.rows(); ++i)
    for (Index j = 0; j < p.y_true.cols(); ++j) {
      tp += p.y_true(i, j) * p.y_pred(i, j);
      t += p.y_true(i, j);
      h += p.y_pred(i, j);
    }
  return t + h > 0 ? 2 * tp / (t + h) : 0.0;
}

double oracle_redundancy(const std::vector<Index>& s, const Matrix& a) {
  double total = 0;
  for (Index i : s)
    for (Index j : s)
      if (i != j) total += a(i, j);
  const double m = double(s.size());
  return total / (m * (m - 1));
}

PredictionSet random_set(std::mt19937_64& rng, Index n, Index k, int levels) {
  std::bernoulli_distribution coin(0.4);
  std::uniform_int_distribution<int> level(0, levels - 1);
  PredictionSet p;
  p.y_true.resize(n, k);
  p.y_pred.resize(n, k);
  p.scores.resize(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) {
      p.y_true(i, j) = coin(rng);
      p.y_pred(i, j) = coin(rng);
      // Few levels so that ties are common.
      p.scores(i, j) = double(level(rng)) / levels;
    }
  return p;
}

PredictionSet make_set(const Matrix& truth, const Matrix& pred,
                       const Matrix& scores) {
  return PredictionSet{truth, pred, scores};
}

// ---------------------------------------------------------------------------

TEST(HammingLoss, Examples) {
  const Matrix t = (Matrix(2, 2) << 1, 0, 0, 1).finished();
  EXPECT_EQ(hamming_loss(make_set(t, t, t)), 0.0);
  EXPECT_EQ(hamming_loss(make_set(t, Matrix::Ones(2, 2) - t, t)), 1.0);
  Matrix one_wrong = t;
  one_wrong(0, 1) = 1;
  EXPECT_EQ(hamming_loss(make_set(t, one_wrong, t)), 0.25);
}

TEST(Coverage, Examples) {
  const Matrix first = (Matrix(2, 3) << 1, 0, 0, 0, 1, 0).finished();
  const Matrix s1 = (Matrix(2, 3) << 0.9, 0.2, 0.1, 0.1, 0.9, 0.3).finished();
  EXPECT_EQ(coverage(make_set(first, first, s1)), 0.0);
  const Matrix s2 = (Matrix(2, 3) << 0.1, 0.5, 0.9, 0.9, 0.1, 0.5).finished();
  EXPECT_DOUBLE_EQ(coverage(make_set(first, first, s2)), 2.0 / 3.0);
}

TEST(Coverage, HandEnumeration) {
  // Row 0: label 1 is ranked 4th. Row 1: the tie between labels 1 and 2
  // puts 1 first, so labels {0,2} sit at ranks 3 and 2. Row 2: all tied,
  // label 3 is 4th.
  const Matrix t =
      (Matrix(3, 4) << 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1).finished();
  const Matrix s = (Matrix(3, 4) << 0.9, 0.1, 0.5, 0.3, 0.2, 0.8, 0.8, 0.1,
                    0.4, 0.4, 0.4, 0.4)
                       .finished();
  EXPECT_DOUBLE_EQ(coverage(make_set(t, t, s)), (3.0 + 2.0 + 3.0) / 3.0 / 4.0);
}

TEST(Coverage, SkipsInstancesWithoutRelevantLabels) {
  const Matrix t = (Matrix(2, 2) << 0, 0, 1, 0).finished();
  const Matrix s = (Matrix(2, 2) << 0.3, 0.7, 0.2, 0.8).finished();
  Index skipped = 0;
  EXPECT_DOUBLE_EQ(coverage(make_set(t, t, s), &skipped), 0.5);
  EXPECT_EQ(skipped, 1);
}

TEST(AveragePrecision, Examples) {
  const Matrix t = (Matrix(1, 4) << 1, 1, 0, 0).finished();
  const Matrix s = (Matrix(1, 4) << 0.9, 0.8, 0.1, 0.2).finished();
  EXPECT_EQ(average_precision(make_set(t, t, s)), 1.0);
  const Matrix t2 = (Matrix(1, 2) << 0, 1).finished();
  const Matrix s2 = (Matrix(1, 2) << 0.9, 0.1).finished();
  EXPECT_EQ(average_precision(make_set(t2, t2, s2)), 0.5);
}

TEST(MacroF1, Examples) {
  const Matrix t = (Matrix(3, 2) << 1, 0, 0, 1, 1, 1).finished();
  EXPECT_EQ(macro_f1(make_set(t, t, t)), 1.0);
  EXPECT_EQ(macro_f1(make_set(t, Matrix::Ones(3, 2) - t, t)), 0.0);
  // One label: TP = 1, FP = 1, FN = 1.
  const Matrix truth = (Matrix(3, 1) << 1, 1, 0).finished();
  const Matrix pred = (Matrix(3, 1) << 1, 0, 1).finished();
  EXPECT_DOUBLE_EQ(macro_f1(make_set(truth, pred, pred)), 0.5);
}

TEST(MacroF1, ZeroDenominatorWarns) {
  const Matrix t = (Matrix(2, 2) << 1, 0, 1, 0).finished();
  Diagnostics diag;
  EXPECT_DOUBLE_EQ(macro_f1(make_set(t, t, t), &diag), 0.5);
  EXPECT_TRUE(diag.has(WarningCode::ZeroDenominator));
}

TEST(MicroF1, Examples) {
  const Matrix t = (Matrix(2, 2) << 1, 0, 1, 1).finished();
  EXPECT_EQ(micro_f1(make_set(t, t, t)), 1.0);
  EXPECT_EQ(micro_f1(make_set(t, Matrix::Zero(2, 2), t)), 0.0);
  // TP = 3, FP = 1, FN = 2.
  const Matrix truth = (Matrix(2, 3) << 1, 1, 1, 1, 1, 0).finished();
  const Matrix pred = (Matrix(2, 3) << 1, 1, 0, 1, 0, 1).finished();
  EXPECT_DOUBLE_EQ(micro_f1(make_set(truth, pred, pred)), 6.0 / 9.0);
}

TEST(RankingLoss, Examples) {
  const Matrix t = (Matrix(2, 3) << 1, 0, 0, 0, 1, 1).finished();
  const Matrix good = (Matrix(2, 3) << 0.9, 0.1, 0.2, 0.1, 0.8, 0.9).finished();
  const Matrix bad = (Matrix(2, 3) << 0.1, 0.8, 0.9, 0.9, 0.2, 0.1).finished();
  EXPECT_EQ(ranking_loss(make_set(t, t, good)), 0.0);
  EXPECT_EQ(ranking_loss(make_set(t, t, bad)), 1.0);
  const Matrix tied = Matrix::Constant(2, 3, 0.5);
  EXPECT_EQ(ranking_loss(make_set(t, t, tied)), 0.5);
}

TEST(RankingLoss, SkipsDegenerateInstances) {
  const Matrix t = (Matrix(3, 2) << 1, 1, 0, 0, 1, 0).finished();
  const Matrix s = (Matrix(3, 2) << 0.1, 0.2, 0.3, 0.4, 0.2, 0.9).finished();
  Index skipped = 0;
  EXPECT_EQ(ranking_loss(make_set(t, t, s), &skipped), 1.0);
  EXPECT_EQ(skipped, 2);
}

TEST(Metrics, MatchBruteForceOracles) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = testing::uniform_int(1, 20, rng);
    const Index k = testing::uniform_int(2, 8, rng);
    const PredictionSet p = random_set(rng, n, k, trial % 2 == 0 ? 4 : 1000);
    EXPECT_NEAR(hamming_loss(p), oracle_hamming(p), 1e-12);
    EXPECT_NEAR(coverage(p), oracle_coverage(p), 1e-12);
    EXPECT_NEAR(average_precision(p), oracle_ap(p), 1e-12);
    EXPECT_NEAR(ranking_loss(p), oracle_rl(p), 1e-12);
    EXPECT_NEAR(macro_f1(p), oracle_macro_f1(p), 1e-12);
    EXPECT_NEAR(micro_f1(p), oracle_micro_f1(p), 1e-12);
  }
}

TEST(Metrics, RangesHold) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const PredictionSet p = random_set(rng, testing::uniform_int(1, 20, rng),
                                       testing::uniform_int(1, 8, rng), 5);
    const MetricReport r = evaluate(p);
    for (double v : {r.hamming_loss, r.coverage, r.average_precision,
                     r.macro_f1, r.micro_f1, r.ranking_loss}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Metrics, MonotoneScoreTransformInvariance) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const PredictionSet p = random_set(rng, 10, 5, 4);
    PredictionSet q = p;
    q.scores = (3.0 * p.scores.array()).exp() - 7.0;
    EXPECT_EQ(coverage(p), coverage(q));
    EXPECT_EQ(average_precision(p), average_precision(q));
    EXPECT_EQ(ranking_loss(p), ranking_loss(q));
  }
}

TEST(Metrics, PermutationInvariance) {
  std::mt19937_64 rng(44);
  const PredictionSet p = random_set(rng, 12, 5, 1000);
  Eigen::PermutationMatrix<Eigen::Dynamic> rows(12), cols(5);
  rows.setIdentity();
  cols.setIdentity();
  std::shuffle(rows.indices().data(), rows.indices().data() + 12, rng);
  std::shuffle(cols.indices().data(), cols.indices().data() + 5, rng);
  PredictionSet q{rows * p.y_true, rows * p.y_pred, rows * p.scores};
  EXPECT_NEAR(hamming_loss(q), hamming_loss(p), 1e-15);
  EXPECT_NEAR(micro_f1(q), micro_f1(p), 1e-15);
  PredictionSet c{p.y_true * cols, p.y_pred * cols, p.scores * cols};
  EXPECT_NEAR(macro_f1(c), macro_f1(p), 1e-15);
  EXPECT_NEAR(hamming_loss(c), hamming_loss(p), 1e-15);
}

TEST(Metrics, EvaluateAgreesWithParts) {
  std::mt19937_64 rng(45);
  const PredictionSet p = random_set(rng, 15, 6, 7);
  const MetricReport r = evaluate(p);
  EXPECT_EQ(r.hamming_loss, hamming_loss(p));
  EXPECT_EQ(r.coverage, coverage(p));
  EXPECT_EQ(r.average_precision, average_precision(p));
  EXPECT_EQ(r.macro_f1, macro_f1(p));
  EXPECT_EQ(r.micro_f1, micro_f1(p));
  EXPECT_EQ(r.ranking_loss, ranking_loss(p));
}

TEST(PredictionSet, ValidatesShapesAndValues) {
  PredictionSet p{Matrix::Ones(2, 2), Matrix::Ones(2, 3), Matrix::Ones(2, 2)};
  EXPECT_THROW(p.validate(), Error);
  p.y_pred = Matrix::Ones(2, 2);
  EXPECT_NO_THROW(p.validate());
  p.scores(0, 0) = std::nan("");
  EXPECT_THROW(p.validate(), Error);
}

TEST(RedundancyScore, Examples) {
  EXPECT_EQ(redundancy_score(std::vector<Index>{0, 1, 2}, Matrix::Identity(3, 3)),
            0.0);
  const std::vector<Index> all{0, 1, 2};
  EXPECT_EQ(redundancy_score(all, Matrix::Ones(3, 3)), 1.0);
  const Matrix a =
      (Matrix(3, 3) << 1, 0.2, 0.5, 0.2, 1, 0.8, 0.5, 0.8, 1).finished();
  EXPECT_DOUBLE_EQ(redundancy_score(all, a), (0.2 + 0.5 + 0.8) * 2 / 6.0);
  const std::vector<Index> reversed{2, 1, 0};
  EXPECT_DOUBLE_EQ(redundancy_score(reversed, a), redundancy_score(all, a));
  EXPECT_DOUBLE_EQ(redundancy_score(std::vector<Index>{1, 2}, a), 0.8);
}

TEST(RedundancyScore, MatchesOracleAndRejectsTinySubset) {
  std::mt19937_64 rng(46);
  const Matrix g = testing::gaussian(9, 9, rng);
  const Matrix a = (g * g.transpose()).cwiseAbs();
  const std::vector<Index> subset{4, 0, 7, 2};
  EXPECT_NEAR(redundancy_score(subset, a), oracle_redundancy(subset, a), 1e-12);
  try {
    redundancy_score(std::vector<Index>{3}, a);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SubsetTooSmall);
  }
}

TEST(Acr, Examples) {
  std::vector<HlRl> zero(30);
  EXPECT_EQ(acr(zero), 0.0);
  std::vector<HlRl> tenth(30, HlRl{0.1, 0.1});
  EXPECT_NEAR(acr(tenth), 6.0, 1e-12);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<HlRl> random(30);
  double expected = 0;
  for (auto& r : random) {
    r = {unit(rng), unit(rng)};
    expected += r.hamming_loss + r.ranking_loss;
  }
  EXPECT_NEAR(acr(random), expected, 1e-12);
  std::vector<HlRl> five(5, HlRl{0.2, 0.0});
  EXPECT_NEAR(acr(five, 5), 1.0, 1e-12);
}

TEST(Acr, WrongLength) {
  try {
    acr(std::vector<HlRl>(29));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongLength);
  }
}

TEST(Nemenyi, CriticalDifference) {
  const double cd = nemenyi_cd(10, 10, 3.164);
  EXPECT_EQ(std::round(cd * 1e4) / 1e4, 4.2841);
  EXPECT_NEAR(nemenyi_cd(2, 6, 1.0), std::sqrt(6.0 / 36.0), 1e-15);
  EXPECT_NEAR(nemenyi_cd(2, 6, 1.0), 0.4082, 1e-4);
  for (Index nd = 1; nd < 20; ++nd)
    EXPECT_GT(nemenyi_cd(5, nd, 2.728), nemenyi_cd(5, nd + 1, 2.728));
  EXPECT_EQ(nemenyi_q_alpha_005(10), 3.164);
  EXPECT_EQ(nemenyi_q_alpha_005(2), 1.960);
  EXPECT_THROW(nemenyi_q_alpha_005(11), Error);
  EXPECT_THROW(nemenyi_cd(1, 5, 2.0), Error);
}

TEST(Friedman, IdenticalRanksGiveZero) {
  const Matrix ranks = Matrix::Constant(6, 4, 2.5);
  const FriedmanResult r = friedman_stat(ranks);
  EXPECT_NEAR(r.chi_sq, 0.0, 1e-12);
  EXPECT_NEAR(r.f_f, 0.0, 1e-12);
  EXPECT_EQ(r.average_ranks, Vector::Constant(4, 2.5));
}

TEST(Friedman, TwoMethodsMatchSignTestForm) {
  // Every 3-dataset table of two methods: each row is a win, loss or tie.
  const double rows[3][2] = {{1, 2}, {2, 1}, {1.5, 1.5}};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        Matrix ranks(3, 2);
        int wins = 0, losses = 0;
        for (int i = 0; i < 3; ++i) {
          const int pick = i == 0 ? a : i == 1 ? b : c;
          ranks(i, 0) = rows[pick][0];
          ranks(i, 1) = rows[pick][1];
          wins += pick == 0;
          losses += pick == 1;
        }
        const double expected = double((wins - losses) * (wins - losses)) / 3.0;
        if (std::abs(wins - losses) == 3) {
          EXPECT_THROW(friedman_stat(ranks), Error);
          continue;
        }
        EXPECT_NEAR(friedman_stat(ranks).chi_sq, expected, 1e-12);
      }
}

TEST(Friedman, FormulaReplay) {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix scores = testing::gaussian(5, 4, rng);
    const Matrix ranks = rank_rows(scores, true);
    const double nd = 5, nc = 4;
    Vector mean = ranks.colwise().mean();
    const double chi = 12 * nd / (nc * (nc + 1)) *
                       (mean.squaredNorm() - nc * (nc + 1) * (nc + 1) / 4);
    const double ff = (nd - 1) * chi / (nd * (nc - 1) - chi);
    const FriedmanResult r = friedman_stat(ranks);
    EXPECT_NEAR(r.chi_sq, chi, 1e-10);
    EXPECT_NEAR(r.f_f, ff, 1e-10);
  }
}

TEST(Friedman, DegenerateRanks) {
  Matrix ranks(4, 3);
  for (Index i = 0; i < 4; ++i) ranks.row(i) << 1, 2, 3;
  try {
    friedman_stat(ranks);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateRanks);
  }
}

TEST(RankRows, TiesAveragedAndDirection) {
  const Matrix scores = (Matrix(2, 4) << 0.3, 0.1, 0.3, 0.5, 1, 2, 3, 4).finished();
  const Matrix low = rank_rows(scores, true);
  EXPECT_EQ(low.row(0), (Eigen::RowVectorXd(4) << 2.5, 1, 2.5, 4).finished());
  EXPECT_EQ(low.row(1), (Eigen::RowVectorXd(4) << 1, 2, 3, 4).finished());
  const Matrix high = rank_rows(scores, false);
  EXPECT_EQ(high.row(0), (Eigen::RowVectorXd(4) << 2.5, 4, 2.5, 1).finished());
  for (Index i = 0; i < 2; ++i) EXPECT_DOUBLE_EQ(low.row(i).sum(), 10.0);
}

}  // namespace
}  // namespace grroor::metrics
