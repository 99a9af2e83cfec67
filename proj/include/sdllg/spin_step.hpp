#pragma once

#include "sdllg/fem.hpp"
#include "sdllg/params.hpp"
#include "sdllg/solver.hpp"

namespace sdllg {

/// Selects the terms of the spin-diffusion form. Everything is on by default;
/// diagnostics switch terms off to isolate them.
struct SpinFormTerms {
  bool time = true;         ///< (1/k)(z1, z2)_Omega
  bool diffusion = true;    ///< (D0 grad z1, grad z2)_Omega
  bool anisotropic = true;  ///< -beta beta' (D0 m (x) (grad z1 . m), grad z2)_omega
  bool reaction = true;     ///< (D0 z1, z2)_Omega
  bool cross = true;        ///< (D0 (z1 x m), z2)_omega
};

/// Matrix of size 3 N_Omega (components interleaved per node) realising
/// (1/k)(.,.) + a_h(.,.) with the projected magnetization m_proj (unit nodal
/// vectors on the omega nodes). The m-dependent anisotropic block is
/// integrated with the degree-2 tet rule.
SparseMatrix assemble_spin_form(const FemSpace& space, const NodalField3& m_proj, const MaterialParams& params,
                                double k, SpinFormTerms terms = {});

/// Right-hand side (1/k) M s_prev + beta (m (x) j, grad zeta)_omega
///   - beta (j . n, m . zeta)_{dOmega cap domega}.
/// m_proj is the new projected magnetization, s_prev the old spin
/// accumulation, j_next the current density at the new time (on all nodes).
Eigen::VectorXd assemble_spin_rhs(const FemSpace& space, const NodalField3& s_prev, const NodalField3& m_proj,
                                  const NodalField3& j_next, const MaterialParams& params, double k);

/// Just the current-driven part (volume and boundary terms).
Eigen::VectorXd assemble_current_load(const FemSpace& space, const NodalField3& m_proj, const NodalField3& j,
                                      const MaterialParams& params);

struct SpinSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

SpinSystem assemble_spin_system(const FemSpace& space, const NodalField3& s_prev, const NodalField3& m_proj,
                                const NodalField3& j_next, const MaterialParams& params, double k);

NodalField3 solve_s(const SpinSystem& system, const SolverConfig& cfg, SolveStats* stats = nullptr);

/// Outward unit normal of a boundary facet with respect to its owning tet.
Vec3 facet_outward_normal(const TetMesh& mesh, const BoundaryFacet& facet);

}  // namespace sdllg
