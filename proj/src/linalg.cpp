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

#include "grroor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace grroor::linalg {

namespace {

constexpr double kPencilFloor = 1e-10;

}  // namespace

SymEig sym_eig(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::ShapeMismatch,
          "sym_eig: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  require(solver.info() == Eigen::Success, ErrorCode::NonFinite,
          "sym_eig: eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix center_rows(const Matrix& x) {
  require(x.size() > 0, ErrorCode::InvalidArgument,
          "center_rows: empty matrix");
  const Vector mean = x.rowwise().mean();
  return x.colwise() - mean;
}

Matrix centering_apply(const Matrix& x) { return center_rows(x).transpose(); }

Matrix polar_orthonormal(const Matrix& m, Diagnostics* diag) {
  require(m.rows() >= m.cols() && m.cols() >= 1, ErrorCode::ShapeMismatch,
          "polar_orthonormal: need d >= c >= 1");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double floor = 1e-12 * sigma(0);
  const Index deficient =
      std::count_if(sigma.begin(), sigma.end(),
                    [floor](double s) { return s < floor || s == 0.0; });
  if (deficient > 0) {
    // Thin U stays orthonormal for rank-deficient input: the trailing columns
    // are the completion Jacobi produced from the preconditioner's Q factor.
    warn(diag, WarningCode::RankDeficient,
         "polar_orthonormal: " + std::to_string(deficient) +
             " singular value(s) below tolerance");
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix solve_sylvester_sym(const Matrix& m_sym, const Matrix& n_sym,
                           const Matrix& p, Diagnostics* diag) {
  require(m_sym.rows() == m_sym.cols() && n_sym.rows() == n_sym.cols(),
          ErrorCode::ShapeMismatch, "solve_sylvester_sym: non-square operand");
  require(p.rows() == m_sym.rows() && p.cols() == n_sym.rows(),
          ErrorCode::ShapeMismatch, "solve_sylvester_sym: rhs shape");
  require(is_symmetric(m_sym, 1e-10) && is_symmetric(n_sym, 1e-10),
          ErrorCode::InvalidArgument,
          "solve_sylvester_sym: coefficient matrix not symmetric");
  return solve_sylvester_sym(sym_eig(m_sym), sym_eig(n_sym), p, diag);
}

Matrix solve_sylvester_sym(const SymEig& m_eig, const SymEig& n_eig,
                           const Matrix& p, Diagnostics* diag) {
  require(p.rows() == m_eig.values.size() && p.cols() == n_eig.values.size(),
          ErrorCode::ShapeMismatch, "solve_sylvester_sym: rhs shape");
  // PSD by contract: round-off negatives are clamped.
  const Vector lambda = m_eig.values.cwiseMax(0.0);
  const Vector xi = n_eig.values.cwiseMax(0.0);
  const double eps_reg = 1e-12 * (1.0 + lambda.maxCoeff() + xi.maxCoeff());
  const double rhs_floor = 1e-12 * (1.0 + p.norm());

  Matrix rotated = m_eig.vectors.transpose() * p * n_eig.vectors;
  Index near_singular = 0;
  for (Index j = 0; j < rotated.cols(); ++j) {
    for (Index i = 0; i < rotated.rows(); ++i) {
      const double denom = lambda(i) + xi(j);
      if (denom < kPencilFloor) {
        ++near_singular;
        if (std::abs(rotated(i, j)) <= rhs_floor) {
          rotated(i, j) = 0.0;
          continue;
        }
      }
      rotated(i, j) /= denom + eps_reg;
    }
  }
  if (near_singular > 0) {
    warn(diag, WarningCode::NearSingularPencil,
         "solve_sylvester_sym: " + std::to_string(near_singular) +
             " eigenvalue pair(s) below 1e-10");
  }
  return m_eig.vectors * rotated * n_eig.vectors.transpose();
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorCode::ShapeMismatch, "hadamard: operand shapes differ");
  return a.cwiseProduct(b);
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

double orthonormality_error(const Matrix& w) {
  const Matrix gram = w.transpose() * w;
  return (gram - Matrix::Identity(gram.rows(), gram.cols()))
      .cwiseAbs()
      .maxCoeff();
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <=
         tol * (1.0 + a.cwiseAbs().maxCoeff());
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace grroor::linalg
