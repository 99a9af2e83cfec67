#pragma once

#include "sdllg/fem.hpp"
#include "sdllg/params.hpp"
#include "sdllg/solver.hpp"

namespace sdllg {

/// Per omega-node orthonormal frame (t1, t2) of the plane orthogonal to m(z).
/// Coefficient vectors x of length 2N encode tangent fields
/// v(z) = x[2z] t1(z) + x[2z+1] t2(z).
struct TangentBasis {
  std::vector<Vec3> t1;
  std::vector<Vec3> t2;

  Index size() const { return static_cast<Index>(t1.size()); }
};

/// t1 = normalize(m x e_j) with e_j the axis of the smallest |m_j|,
/// t2 = normalize(m x t1). Throws ConstraintViolation on a zero vector.
TangentBasis build_tangent_basis(const NodalField3& m);

/// Sparse 3N x 2N matrix P with v = P x.
SparseMatrix tangent_prolongation(const TangentBasis& basis);

NodalField3 expand_tangent(const TangentBasis& basis, const Eigen::VectorXd& x);

/// Tangent-space linear system for the discrete time derivative v.
struct LlgSystem {
  SparseMatrix matrix;  ///< 2N x 2N
  Eigen::VectorXd rhs;
};

/// Builds, for phi, psi in the discrete tangent space of m,
///   psi^T A phi = alpha (phi, psi) + (m x phi, psi) + C_exch theta k (grad phi, grad psi)
/// over omega, and the right-hand side
///   -C_exch (grad m, grad psi) + (pi_m, psi) + (f, psi) + c (s, psi).
/// All fields live on the omega nodes.
LlgSystem assemble_llg_system(const FemSpace& space, const NodalField3& m, const TangentBasis& basis,
                              const NodalField3& f, const NodalField3& pi_m, const NodalField3& s_omega,
                              const MaterialParams& params, double k);

NodalField3 solve_v(const LlgSystem& system, const TangentBasis& basis, const SolverConfig& cfg,
                    SolveStats* stats = nullptr);

/// m + k v, without renormalisation.
NodalField3 update_m(const NodalField3& m, const NodalField3& v, double k);

}  // namespace sdllg
