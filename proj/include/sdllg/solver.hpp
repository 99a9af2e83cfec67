#pragma once

#include "sdllg/types.hpp"

namespace sdllg {

struct SolverConfig {
  double tol = 1e-10;          ///< relative residual ||b - Ax|| / ||b||
  int max_iter_factor = 10;    ///< iteration cap = factor * dimension
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Krylov solve (ILUT-preconditioned BiCGSTAB) for the nonsymmetric positive
/// definite systems of both half-steps. Checks the true residual and restarts
/// from the current iterate until it meets the tolerance or the cap is spent.
Eigen::VectorXd solve_krylov(const SparseMatrix& A, const Eigen::VectorXd& b, const SolverConfig& cfg,
                             SolveStats* stats = nullptr);

}  // namespace sdllg
