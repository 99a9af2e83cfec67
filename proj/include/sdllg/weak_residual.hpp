#pragma once

#include "sdllg/fem.hpp"
#include "sdllg/fields.hpp"
#include "sdllg/params.hpp"

namespace sdllg {

/// Closed-form space-time test function with its spatial Jacobian
/// (grad(i, l) = d phi_i / d x_l).
struct SpaceTimeTest {
  std::string name;
  std::function<Vec3(const Vec3&, double)> value;
  std::function<Mat3(const Vec3&, double)> grad;
};

/// Five fixed polynomial test functions of degree <= 3 in space and <= 1 in t,
/// written in coordinates scaled by the given box (so they stay O(1)).
std::vector<SpaceTimeTest> polynomial_test_family(const Vec3& box);

/// Stored discrete trajectory. m and v on omega, s on Omega; m_traj and
/// s_traj hold N+1 levels, v_traj holds N.
struct Trajectory {
  double k = 0.0;
  std::vector<NodalField3> m;
  std::vector<NodalField3> v;
  std::vector<NodalField3> s;
};

struct WeakResidual {
  std::vector<double> llg;        ///< one entry per test function
  std::vector<double> diffusion;  ///< one entry per test function
  double llg_norm = 0.0;          ///< Euclidean norm over the family
  double diffusion_norm = 0.0;
};

/// Evaluates both weak-form residuals over [0, N k]. The LLG residual uses
/// the left values m^i, s^i, f^i with d_t m = v^i on each interval; the
/// diffusion residual uses the right values s^{i+1}, Pi m^{i+1}, j^{i+1} with
/// d_t s = (s^{i+1} - s^i)/k. Quadrature is Grundmann-Moeller in space and
/// two-point Gauss in time.
WeakResidual weak_residual_probe(const FemSpace& space, const Trajectory& traj, const SourceField& f,
                                 const SourceField& j, const PiOperator& pi, const MaterialParams& params,
                                 const std::vector<SpaceTimeTest>& tests);

}  // namespace sdllg
