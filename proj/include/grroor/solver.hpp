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

// Alternating minimization of the orthogonal-regression feature-selection
// objective
//
//   ||H X^T Theta W - H V||_F^2 + alpha ||Y - V B||_F^2 + eta tr(V^T L V)
//     + lambda theta^T A theta + beta tr(R B^T B)
//
// subject to W^T W = I_c, theta on the probability simplex, Theta =
// diag(theta). Each outer iteration updates W (generalized power iteration),
// theta (augmented Lagrangian), V and B (Sylvester equations) in that order.

#pragma once

#include <cstdint>
#include <functional>

#include "grroor/common.hpp"
#include "grroor/correlation.hpp"
#include "grroor/graph.hpp"
#include "grroor/linalg.hpp"

namespace grroor::solver {

struct Hyperparams {
  double alpha = 1.0;
  double beta = 0.1;
  double eta = 0.1;
  double lambda = 0.1;
  Index latent_dim = 2;

  double alm_mu0 = 1.0;
  double alm_growth = 1.1;
  double alm_inner_tol = 1e-8;
  int alm_inner_max = 200;

  double gpi_tol = 1e-10;
  int gpi_max = 200;
  int gpi_power_iterations = 50;

  double outer_tol = 1e-5;
  int outer_max = 50;

  std::uint64_t seed = 0;
  graph::GraphParams graph;

  /// Throws InvalidArgument on a non-positive alpha or tolerance, a negative
  /// beta, eta or lambda, alm_growth <= 1, or latent_dim < 1.
  void validate() const;

  /// Also checks latent_dim <= min(d, k).
  void validate(Index d, Index k) const;
};

/// Everything about the data that stays fixed across iterations.
struct Problem {
  Matrix x;          // d x n
  Matrix x_centered; // d x n, each feature mean-free
  Matrix gram;       // X H X^T, d x d
  Matrix y01;        // n x k in {0,1}
  Matrix y;          // n x k in {-1,+1}, the regression target
  graph::Laplacian laplacian;
  correlation::RedundancyMatrix redundancy;
  correlation::LabelRelevance relevance;
  linalg::SymEig v_lhs_eig;  // eigendecomposition of H + eta L
  linalg::SymEig relevance_eig;  // eigendecomposition of R (PSD-repaired)
  double eta = 0.0;              // the eta baked into v_lhs_eig

  Index d() const { return x.rows(); }
  Index n() const { return x.cols(); }
  Index k() const { return y.cols(); }
};

/// Validates inputs and precomputes the graph, the redundancy and relevance
/// matrices and the fixed factorizations. The neighbor count is capped at
/// n - 1 for tiny inputs.
Problem make_problem(const Matrix& x, const Matrix& y01, const Hyperparams& hp,
                     Diagnostics* diag = nullptr);

struct ModelState {
  Matrix w;      // d x c, orthonormal columns
  Vector theta;  // d, on the simplex
  Matrix v;      // n x c
  Matrix b;      // c x k
  Vector bias;   // c
  std::vector<double> objective_trace;
};

struct ObjectiveTerms {
  double fit = 0.0;
  double label = 0.0;
  double graph = 0.0;
  double redundancy = 0.0;
  double relevance = 0.0;

  double total() const { return fit + label + graph + redundancy + relevance; }
};

struct FeatureRanking {
  std::vector<Index> order;  // feature indices, best first
  Vector scores;             // theta, in original feature order
};

ModelState init_state(Index d, Index n, Index k, const Hyperparams& hp);

/// Closed-form optimal bias b = (V^T 1 - W^T Theta X 1) / n.
Vector update_bias(const ModelState& state, const Matrix& x);

/// tr(W^T J W - 2 W^T M).
double qpsm_objective(const Matrix& j, const Matrix& m, const Matrix& w);

/// Minimizes tr(W^T J W - 2 W^T M) over W^T W = I by generalized power
/// iteration started from `w0`. J must be symmetric PSD.
Matrix solve_qpsm(const Matrix& j, const Matrix& m, const Matrix& w0,
                  const Hyperparams& hp, Diagnostics* diag = nullptr);

/// The W step with theta and V fixed. J = Theta X H X^T Theta and
/// M = Theta X H V are applied as chained products, never formed.
Matrix update_W(const ModelState& state, const Problem& problem,
                const Hyperparams& hp, Diagnostics* diag = nullptr);

/// theta^T Q theta - theta^T s.
double simplex_qp_objective(const Matrix& q, const Vector& s,
                            const Vector& theta);

/// Augmented-Lagrangian solve of min theta^T Q theta - theta^T s over the
/// probability simplex, followed by clipping negatives and renormalizing.
Vector solve_simplex_qp(const Matrix& q, const Vector& s, const Vector& theta0,
                        const Hyperparams& hp, Diagnostics* diag = nullptr);

/// Q = (X H X^T) o (W W^T) + lambda A and s = diag(2 X H V W^T).
std::pair<Matrix, Vector> theta_subproblem(const ModelState& state,
                                           const Problem& problem,
                                           const Hyperparams& hp);

/// The theta step. Keeps the current theta if the solver's answer does not
/// improve the subproblem objective.
Vector update_theta(const ModelState& state, const Problem& problem,
                    const Hyperparams& hp, Diagnostics* diag = nullptr);

/// Solves (H + eta L) V + V (alpha B B^T) = H X^T Theta W + alpha Y B^T.
Matrix update_V(const ModelState& state, const Problem& problem,
                const Hyperparams& hp, Diagnostics* diag = nullptr);

/// Solves (alpha V^T V) B + B (beta R) = alpha V^T Y.
Matrix update_B(const ModelState& state, const Problem& problem,
                const Hyperparams& hp, Diagnostics* diag = nullptr);

ObjectiveTerms objective_terms(const ModelState& state, const Problem& problem,
                               const Hyperparams& hp);

inline double objective(const ModelState& state, const Problem& problem,
                        const Hyperparams& hp) {
  return objective_terms(state, problem, hp).total();
}

FeatureRanking rank_features(const Vector& theta);

enum class Stage { Init, W, Theta, V, B };

using FitObserver = std::function<void(Stage, const ModelState&)>;

struct FitResult {
  ModelState state;
  FeatureRanking ranking;
  ObjectiveTerms final_terms;
  int iterations = 0;
  bool converged = false;
  Diagnostics diagnostics;
};

/// Runs the alternating optimization on X (d x n) and Y (n x k, {0,1}).
/// The observer, if set, sees the state after initialization and after
/// every sub-update.
FitResult fit(const Matrix& x, const Matrix& y01, const Hyperparams& hp,
              const FitObserver& observer = {});

FitResult fit(const Problem& problem, const Hyperparams& hp,
              const FitObserver& observer = {});

}  // namespace grroor::solver
