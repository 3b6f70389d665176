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

// Dense linear-algebra kernels used by the solver. Eigen provides the
// factorizations; everything here is a pure function of its inputs.

#pragma once

#include "grroor/common.hpp"

namespace grroor::linalg {

/// Symmetric eigendecomposition A = U diag(values) U^T, values ascending.
struct SymEig {
  Vector values;
  Matrix vectors;
};

SymEig sym_eig(const Matrix& a);

/// Subtracts each feature's (row's) mean from X (d x n) and returns the
/// transpose, so column i of the n x d result is the centered i-th feature.
/// The n x n centering matrix is never formed.
Matrix centering_apply(const Matrix& x);

/// Same as centering_apply without the transpose: d x n, rows mean-free.
Matrix center_rows(const Matrix& x);

/// Nearest matrix with orthonormal columns to M (d x c, d >= c): the polar
/// factor U V^T of the thin SVD. It maximizes tr(W^T M) over the Stiefel
/// manifold. Directions with singular value below 1e-12 * sigma_max are
/// completed from the remaining left singular vectors (RankDeficient).
Matrix polar_orthonormal(const Matrix& m, Diagnostics* diag = nullptr);

/// Solves M V + V N = P for symmetric PSD M (m x m) and N (q x q) via their
/// eigendecompositions. Pairs with lambda_i + xi_j < 1e-10 raise
/// NearSingularPencil; such components are regularized by
/// eps = 1e-12 * (1 + max lambda + max xi), and set to zero when the
/// right-hand side has no component there (minimum-norm solution).
Matrix solve_sylvester_sym(const Matrix& m_sym, const Matrix& n_sym,
                           const Matrix& p, Diagnostics* diag = nullptr);

/// Overload reusing precomputed factorizations of the coefficient matrices.
Matrix solve_sylvester_sym(const SymEig& m_eig, const SymEig& n_eig,
                           const Matrix& p, Diagnostics* diag = nullptr);

Matrix hadamard(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);

/// max |W^T W - I|, the orthonormality defect of W's columns.
double orthonormality_error(const Matrix& w);

bool is_symmetric(const Matrix& a, double tol);

bool all_finite(const Matrix& a);

}  // namespace grroor::linalg
