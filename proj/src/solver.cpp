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

#include "grroor/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace grroor::solver {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

void require_positive(double value, const char* name) {
  require(value > 0.0 && std::isfinite(value), ErrorCode::InvalidArgument,
          std::string("hyperparameter ") + name + " must be positive");
}

void require_non_negative(double value, const char* name) {
  require(value >= 0.0 && std::isfinite(value), ErrorCode::InvalidArgument,
          std::string("hyperparameter ") + name + " must be non-negative");
}

bool improved_enough(double before, double after, double tol) {
  return std::abs(before - after) <= tol * std::max(std::abs(before), kTiny);
}

struct GpiRun {
  Matrix w;
  double value = 0.0;
  bool converged = false;
};

template <class ApplyJ>
GpiRun gpi_from(const ApplyJ& apply_j, double trace_bound, double gamma0,
                const Matrix& m, const Matrix& w0, const Hyperparams& hp,
                Diagnostics* diag) {
  auto value = [&](const Matrix& w, const Matrix& jw) {
    return w.cwiseProduct(jw).sum() - 2.0 * w.cwiseProduct(m).sum();
  };
  double gamma = gamma0;
  bool gamma_bumped = false;

  GpiRun run{w0, 0.0, false};
  Matrix jw = apply_j(run.w);
  run.value = value(run.w, jw);
  for (int it = 0; it < hp.gpi_max; ++it) {
    Matrix candidate =
        linalg::polar_orthonormal(gamma * run.w - jw + m, diag);
    Matrix j_candidate = apply_j(candidate);
    const double f_candidate = value(candidate, j_candidate);
    const double slack = 1e-13 * (std::abs(run.value) + std::abs(f_candidate));
    if (f_candidate > run.value + slack) {
      if (!gamma_bumped) {
        gamma = std::max(gamma, 1.01 * trace_bound);
        gamma_bumped = true;
        continue;
      }
      run.converged = true;  // no further progress possible at this precision
      break;
    }
    const double previous = run.value;
    run.w = std::move(candidate);
    jw = std::move(j_candidate);
    run.value = f_candidate;
    if (improved_enough(previous, run.value, hp.gpi_tol)) {
      run.converged = true;
      break;
    }
  }
  return run;
}

// Generalized power iteration for min tr(W^T J W - 2 W^T M) on the Stiefel
// manifold. `apply_j` computes J * W. Each step takes the polar factor of
// (gamma I - J) W + M; with gamma >= lambda_max(J) the objective cannot
// increase. gamma starts from a power-iteration estimate and falls back to
// the trace bound if a step ever goes uphill. The iteration only finds a
// local minimum, so it runs from the warm start and from the polar factor
// of M and keeps the better end point; the warm-start run alone already
// guarantees descent.
template <class ApplyJ>
Matrix generalized_power_iteration(const ApplyJ& apply_j, double trace_bound,
                                   const Matrix& m, const Matrix& w0,
                                   const Hyperparams& hp, Diagnostics* diag) {
  const Index d = w0.rows();
  Matrix probe = Matrix::Constant(d, 1, 1.0 / std::sqrt(double(d)));
  double rayleigh = 0.0;
  for (int it = 0; it < hp.gpi_power_iterations; ++it) {
    const Matrix next = apply_j(probe);
    rayleigh = probe.col(0).dot(next.col(0));
    const double norm = next.norm();
    if (norm <= kTiny) break;
    probe = next / norm;
  }
  const double gamma = 1.01 * std::max(rayleigh, 0.0);

  GpiRun best = gpi_from(apply_j, trace_bound, gamma, m, w0, hp, diag);
  if (m.norm() > kTiny) {
    Diagnostics scratch;
    GpiRun other = gpi_from(apply_j, trace_bound, gamma, m,
                            linalg::polar_orthonormal(m, &scratch), hp, diag);
    if (other.value < best.value) best = std::move(other);
  }
  if (!best.converged) {
    warn(diag, WarningCode::GpiStall,
         "update_W: generalized power iteration hit " +
             std::to_string(hp.gpi_max) + " iterations");
  }
  return best.w;
}

Matrix center_columns(const Matrix& v) {
  return v.rowwise() - v.colwise().mean();
}

}  // namespace

void Hyperparams::validate() const {
  require_positive(alpha, "alpha");
  require_non_negative(beta, "beta");
  require_non_negative(eta, "eta");
  require_non_negative(lambda, "lambda");
  require(latent_dim >= 1, ErrorCode::InvalidArgument,
          "latent_dim must be at least 1");
  require_positive(alm_mu0, "alm_mu0");
  require(alm_growth > 1.0 && std::isfinite(alm_growth),
          ErrorCode::InvalidArgument, "alm_growth must exceed 1");
  require_positive(alm_inner_tol, "alm_inner_tol");
  require_positive(gpi_tol, "gpi_tol");
  require_positive(outer_tol, "outer_tol");
  require(alm_inner_max >= 1 && gpi_max >= 1 && outer_max >= 1 &&
              gpi_power_iterations >= 1,
          ErrorCode::InvalidArgument, "iteration caps must be at least 1");
  require(graph.neighbor_count >= 1, ErrorCode::InvalidArgument,
          "neighbor_count must be at least 1");
  require_positive(graph.sigma_sq, "sigma_sq");
}

void Hyperparams::validate(Index d, Index k) const {
  validate();
  require(latent_dim <= std::min(d, k), ErrorCode::InvalidArgument,
          "latent_dim must not exceed min(d, k) = " +
              std::to_string(std::min(d, k)));
}

Problem make_problem(const Matrix& x, const Matrix& y01, const Hyperparams& hp,
                     Diagnostics* diag) {
  require(x.rows() >= 2 && x.cols() >= 3, ErrorCode::InvalidArgument,
          "fit: need at least 2 features and 3 instances");
  require(y01.rows() == x.cols(), ErrorCode::ShapeMismatch,
          "fit: X has " + std::to_string(x.cols()) + " instances but Y has " +
              std::to_string(y01.rows()));
  require(y01.cols() >= 2, ErrorCode::InvalidArgument,
          "fit: need at least 2 labels");
  require(x.allFinite(), ErrorCode::NonFinite, "fit: X has non-finite entries");
  require((y01.array() == 0.0 || y01.array() == 1.0).all(),
          ErrorCode::InvalidArgument, "fit: Y must be binary {0,1}");
  hp.validate(x.rows(), y01.cols());

  const Index n = x.cols();
  Problem p;
  p.x = x;
  p.x_centered = linalg::center_rows(x);
  p.gram = p.x_centered * p.x_centered.transpose();
  p.y01 = y01;
  p.y = 2.0 * y01.array() - 1.0;

  const Index neighbors = std::min<Index>(hp.graph.neighbor_count, n - 1);
  p.laplacian = graph::build_laplacian(
      graph::build_affinity(x, neighbors, hp.graph.sigma_sq, diag));
  p.redundancy = correlation::build_redundancy(x, diag);
  p.relevance = correlation::build_label_relevance(y01, diag);

  Matrix lhs = hp.eta * p.laplacian.l;
  lhs.diagonal().array() += 1.0;
  lhs.array() -= 1.0 / double(n);
  p.v_lhs_eig = linalg::sym_eig(0.5 * (lhs + lhs.transpose()));
  p.relevance_eig = linalg::sym_eig(p.relevance.penalty_psd);
  p.eta = hp.eta;
  return p;
}

ModelState init_state(Index d, Index n, Index k, const Hyperparams& hp) {
  hp.validate(d, k);
  const Index c = hp.latent_dim;
  std::mt19937_64 rng(hp.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Index rows, Index cols, double scale) {
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) out(i, j) = scale * normal(rng);
    }
    return out;
  };

  ModelState s;
  s.w = linalg::polar_orthonormal(gaussian(d, c, 1.0));
  s.theta = Vector::Constant(d, 1.0 / double(d));
  const double scale = 1.0 / std::sqrt(double(c));
  s.v = gaussian(n, c, scale);
  s.b = gaussian(c, k, scale);
  s.bias = Vector::Zero(c);
  return s;
}

Vector update_bias(const ModelState& state, const Matrix& x) {
  const double n = double(x.cols());
  const Vector x_sum = x.rowwise().sum();
  return (state.v.colwise().sum().transpose() -
          state.w.transpose() * state.theta.cwiseProduct(x_sum)) /
         n;
}

double qpsm_objective(const Matrix& j, const Matrix& m, const Matrix& w) {
  return w.cwiseProduct(j * w).sum() - 2.0 * w.cwiseProduct(m).sum();
}

Matrix solve_qpsm(const Matrix& j, const Matrix& m, const Matrix& w0,
                  const Hyperparams& hp, Diagnostics* diag) {
  require(j.rows() == j.cols() && j.rows() == w0.rows() &&
              m.rows() == w0.rows() && m.cols() == w0.cols(),
          ErrorCode::ShapeMismatch, "solve_qpsm: inconsistent shapes");
  return generalized_power_iteration(
      [&j](const Matrix& w) -> Matrix { return j * w; }, j.trace(), m, w0, hp,
      diag);
}

Matrix update_W(const ModelState& state, const Problem& problem,
                const Hyperparams& hp, Diagnostics* diag) {
  const Matrix& xc = problem.x_centered;
  const Vector& theta = state.theta;
  auto apply_j = [&](const Matrix& w) -> Matrix {
    const Matrix projected = xc.transpose() * (theta.asDiagonal() * w);
    return theta.asDiagonal() * (xc * projected);
  };
  const Matrix m = theta.asDiagonal() * (xc * state.v);
  const double trace_bound =
      theta.cwiseAbs2().dot(xc.rowwise().squaredNorm());
  return generalized_power_iteration(apply_j, trace_bound, m, state.w, hp,
                                     diag);
}

double simplex_qp_objective(const Matrix& q, const Vector& s,
                            const Vector& theta) {
  return theta.dot(q * theta) - theta.dot(s);
}

Vector solve_simplex_qp(const Matrix& q, const Vector& s, const Vector& theta0,
                        const Hyperparams& hp, Diagnostics* diag) {
  const Index d = q.rows();
  require(q.cols() == d && s.size() == d && theta0.size() == d,
          ErrorCode::ShapeMismatch, "solve_simplex_qp: inconsistent shapes");

  // E = 2Q + mu I + mu 1 1^T. With Q = U diag(q) U^T the first two terms are
  // diagonal in U, and the rank-one term is handled by Sherman-Morrison, so
  // each inner solve costs O(d^2) after one eigendecomposition.
  const linalg::SymEig eig = linalg::sym_eig(0.5 * (q + q.transpose()));
  const Vector q_values = eig.values.cwiseMax(0.0);
  const Matrix& u = eig.vectors;
  const Vector ones = Vector::Ones(d);
  const Vector ones_rot = u.transpose() * ones;

  Vector theta = theta0;
  Vector v = theta0;
  Vector delta1 = Vector::Zero(d);
  double delta2 = 0.0;
  double mu = hp.alm_mu0;
  bool converged = false;
  for (int it = 0; it < hp.alm_inner_max; ++it) {
    const Vector f = mu * v + (mu - delta2) * ones - delta1 + s;
    const Vector inv_diag = (2.0 * q_values.array() + mu).inverse().matrix();
    const Vector d_inv_f = u * inv_diag.cwiseProduct(u.transpose() * f);
    const Vector d_inv_1 = u * inv_diag.cwiseProduct(ones_rot);
    theta = d_inv_f - d_inv_1 * (mu * d_inv_f.sum() / (1.0 + mu * d_inv_1.sum()));

    v = (theta + delta1 / mu).cwiseMax(0.0);
    delta1 += mu * (theta - v);
    const double sum_gap = theta.sum() - 1.0;
    delta2 += mu * sum_gap;
    mu *= hp.alm_growth;

    const double residual =
        std::max((theta - v).cwiseAbs().maxCoeff(), std::abs(sum_gap));
    if (residual < hp.alm_inner_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    warn(diag, WarningCode::AlmNoConverge,
         "update_theta: ALM feasibility residual above tolerance after " +
             std::to_string(hp.alm_inner_max) + " iterations");
  }

  theta = theta.cwiseMax(0.0);
  const double total = theta.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    return Vector::Constant(d, 1.0 / double(d));
  }
  return theta / total;
}

std::pair<Matrix, Vector> theta_subproblem(const ModelState& state,
                                           const Problem& problem,
                                           const Hyperparams& hp) {
  Matrix q = problem.gram.cwiseProduct(state.w * state.w.transpose());
  if (hp.lambda != 0.0) q += hp.lambda * problem.redundancy.a;
  const Matrix xv = problem.x_centered * state.v;  // d x c
  Vector s = 2.0 * xv.cwiseProduct(state.w).rowwise().sum();
  return {std::move(q), std::move(s)};
}

Vector update_theta(const ModelState& state, const Problem& problem,
                    const Hyperparams& hp, Diagnostics* diag) {
  const auto [q, s] = theta_subproblem(state, problem, hp);
  Vector theta = solve_simplex_qp(q, s, state.theta, hp, diag);
  if (simplex_qp_objective(q, s, theta) >
      simplex_qp_objective(q, s, state.theta)) {
    return state.theta;
  }
  return theta;
}

Matrix update_V(const ModelState& state, const Problem& problem,
                const Hyperparams& hp, Diagnostics* diag) {
  require(hp.eta == problem.eta, ErrorCode::InvalidArgument,
          "update_V: problem was built with a different eta");
  const Matrix p =
      problem.x_centered.transpose() * (state.theta.asDiagonal() * state.w) +
      hp.alpha * problem.y * state.b.transpose();
  const Matrix n_sym = hp.alpha * state.b * state.b.transpose();
  const linalg::SymEig n_eig = linalg::sym_eig(0.5 * (n_sym + n_sym.transpose()));
  return linalg::solve_sylvester_sym(problem.v_lhs_eig, n_eig, p, diag);
}

Matrix update_B(const ModelState& state, const Problem& problem,
                const Hyperparams& hp, Diagnostics* diag) {
  const Matrix m_sym = hp.alpha * state.v.transpose() * state.v;
  const linalg::SymEig m_eig = linalg::sym_eig(0.5 * (m_sym + m_sym.transpose()));
  const linalg::SymEig n_eig{hp.beta * problem.relevance_eig.values,
                             problem.relevance_eig.vectors};
  const Matrix p = hp.alpha * state.v.transpose() * problem.y;
  return linalg::solve_sylvester_sym(m_eig, n_eig, p, diag);
}

ObjectiveTerms objective_terms(const ModelState& state, const Problem& problem,
                               const Hyperparams& hp) {
  ObjectiveTerms t;
  const Matrix projected =
      problem.x_centered.transpose() * (state.theta.asDiagonal() * state.w);
  t.fit = (projected - center_columns(state.v)).squaredNorm();
  t.label = hp.alpha * (problem.y - state.v * state.b).squaredNorm();
  t.graph = hp.eta * state.v.cwiseProduct(problem.laplacian.l * state.v).sum();
  t.redundancy =
      hp.lambda * state.theta.dot(problem.redundancy.a * state.theta);
  t.relevance = hp.beta * problem.relevance.penalty_psd
                              .cwiseProduct(state.b.transpose() * state.b)
                              .sum();
  return t;
}

FeatureRanking rank_features(const Vector& theta) {
  FeatureRanking r;
  r.scores = theta;
  r.order.resize(static_cast<std::size_t>(theta.size()));
  std::iota(r.order.begin(), r.order.end(), Index{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&theta](Index a, Index b) { return theta(a) > theta(b); });
  return r;
}

FitResult fit(const Matrix& x, const Matrix& y01, const Hyperparams& hp,
              const FitObserver& observer) {
  Diagnostics setup;
  const Problem problem = make_problem(x, y01, hp, &setup);
  FitResult result = fit(problem, hp, observer);
  Diagnostics merged = setup;
  merged.merge_unique(result.diagnostics);
  result.diagnostics = std::move(merged);
  return result;
}

FitResult fit(const Problem& problem, const Hyperparams& hp,
              const FitObserver& observer) {
  hp.validate(problem.d(), problem.k());
  FitResult result;
  ModelState& state = result.state;
  state = init_state(problem.d(), problem.n(), problem.k(), hp);
  state.objective_trace.push_back(objective(state, problem, hp));
  if (observer) observer(Stage::Init, state);

  for (int it = 0; it < hp.outer_max; ++it) {
    Diagnostics step;
    state.w = update_W(state, problem, hp, &step);
    if (observer) observer(Stage::W, state);
    state.theta = update_theta(state, problem, hp, &step);
    if (observer) observer(Stage::Theta, state);
    state.v = update_V(state, problem, hp, &step);
    if (observer) observer(Stage::V, state);
    state.b = update_B(state, problem, hp, &step);
    if (observer) observer(Stage::B, state);
    result.diagnostics.merge_unique(step);

    const double previous = state.objective_trace.back();
    const double current = objective(state, problem, hp);
    state.objective_trace.push_back(current);
    result.iterations = it + 1;
    if (improved_enough(previous, current, hp.outer_tol)) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    result.diagnostics.warn(WarningCode::NotConverged,
                            "fit: outer loop reached " +
                                std::to_string(hp.outer_max) + " iterations");
  }
  state.bias = update_bias(state, problem.x);
  result.final_terms = objective_terms(state, problem, hp);
  result.ranking = rank_features(state.theta);
  return result;
}

}  // namespace grroor::solver
