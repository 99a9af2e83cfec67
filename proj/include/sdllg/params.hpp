#pragma once

#include "sdllg/mesh.hpp"
#include "sdllg/types.hpp"

#include <algorithm>

namespace sdllg {

/// Nondimensional material and scheme constants.
struct MaterialParams {
  double alpha = 1.0;       ///< Gilbert damping
  double c = 1.0;           ///< spin-magnetization coupling
  double beta = 0.5;        ///< spin polarisation
  double beta_prime = 0.5;  ///< spin polarisation (diffusion anisotropy)
  double theta = 1.0;       ///< implicitness of the exchange term, in (1/2, 1]
  double C_exch = 1.0;
  double C_ani = 0.0;
  Vec3 easy_axis = Vec3::UnitZ();
  double D0_magnetic = 1.0;  ///< diffusion coefficient in magnetic tets
  double D0_conductor = 1.0; ///< diffusion coefficient in conducting tets
  /// L^2/lambda_sf^2 and L^2/lambda_J^2; both 1 when lambda_sf = lambda_J = L.
  double reaction_scale = 1.0;
  double precession_scale = 1.0;

  double D0(Region r) const { return r == Region::Magnetic ? D0_magnetic : D0_conductor; }
  /// Lower bound D_* of the piecewise-constant D0.
  double D_star() const { return std::min(D0_magnetic, D0_conductor); }

  /// Throws ConfigError when a scheme or material contract is broken.
  void validate() const;
};

}  // namespace sdllg
