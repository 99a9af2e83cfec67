#include "sdllg/solver.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <sstream>

namespace sdllg {

Eigen::VectorXd solve_krylov(const SparseMatrix& A, const Eigen::VectorXd& b, const SolverConfig& cfg,
                             SolveStats* stats) {
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return Eigen::VectorXd::Zero(n);
  }
  // Column-major copy for the ILUT factorisation.
  const Eigen::SparseMatrix<double> Ac = A;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
  solver.preconditioner().setDroptol(1e-6);
  solver.preconditioner().setFillfactor(20);
  solver.compute(Ac);
  if (solver.info() != Eigen::Success) throw SolverError("preconditioner setup failed", 1.0, 0);

  const int cap = std::max<int>(1, cfg.max_iter_factor * static_cast<int>(n));
  // Ask for slightly more than needed; the recursive residual may drift from
  // the true one.
  solver.setTolerance(0.5 * cfg.tol);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  int used = 0;
  double rel = 1.0;
  while (used < cap) {
    solver.setMaxIterations(cap - used);
    x = solver.solveWithGuess(b, x);
    used += std::max<int>(1, static_cast<int>(solver.iterations()));
    rel = (b - Ac * x).norm() / bnorm;
    if (rel <= cfg.tol) break;
  }
  if (stats) *stats = {used, rel};
  if (!(rel <= cfg.tol)) {
    std::ostringstream os;
    os << "Krylov solve did not converge: relative residual " << rel << " after " << used << " iterations";
    throw SolverError(os.str(), rel, used);
  }
  return x;
}

}  // namespace sdllg
