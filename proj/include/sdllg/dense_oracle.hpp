#pragma once

#include "sdllg/fem.hpp"
#include "sdllg/fields.hpp"
#include "sdllg/params.hpp"

namespace sdllg {

struct OracleStep {
  NodalField3 v;       ///< omega
  NodalField3 m_next;  ///< omega
  NodalField3 s_next;  ///< Omega
};

/// Largest mesh (node count) the dense oracle accepts.
inline constexpr Index kOracleMaxNodes = 500;

/// One full time step with dense matrices and direct factorisations. The
/// tangent constraint is imposed with one Lagrange multiplier per omega node,
/// so no tangent frame is involved. Shares only the element formulas with the
/// production path. Throws DomainError for meshes above kOracleMaxNodes.
OracleStep dense_oracle_step(const TetMesh& mesh, const NodalField3& m, const NodalField3& s, const NodalField3& f,
                             const NodalField3& j_next, const PiOperator& pi, const MaterialParams& params, double k);

}  // namespace sdllg
