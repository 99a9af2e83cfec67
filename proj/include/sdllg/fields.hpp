#pragma once

#include "sdllg/fem.hpp"

namespace sdllg {

/// Lower-order field contribution pi(m) added to the effective field.
/// UNIAXIAL evaluates 2 C_ani (e . m(z)) m(z) nodewise. The stray field is not
/// provided; the interface takes any nodal map.
struct PiOperator {
  enum class Kind : std::uint8_t { Zero, Uniaxial };
  Kind kind = Kind::Zero;
  Vec3 easy_axis = Vec3::UnitZ();
  double C_ani = 0.0;

  static PiOperator zero() { return {}; }
  static PiOperator uniaxial(const Vec3& e, double C_ani);

  /// Advertised bound C_pi; holds for fields with nodal modulus <= 1.
  double bound() const { return kind == Kind::Zero ? 0.0 : 2.0 * C_ani; }
};

NodalField3 apply_pi(const PiOperator& op, const NodalField3& m);

/// Empirical operator norm max ||pi(w)|| / ||w|| (L2 over omega) over probes.
double verify_pi_bound(const FemSpace& space, const PiOperator& op, const std::vector<NodalField3>& probes);

/// Spatially uniform, time-dependent data: the applied field f or the
/// current density j.
struct SourceField {
  enum class Kind : std::uint8_t { Constant, Ramp };
  enum class Target : std::uint8_t { AppliedF, CurrentJ };
  Kind kind = Kind::Constant;
  Target target = Target::AppliedF;
  Vec3 value0 = Vec3::Zero();
  Vec3 value1 = Vec3::Zero();
  double t_ramp = 0.0;

  static SourceField constant(Target target, const Vec3& v);
  static SourceField ramp(Target target, const Vec3& v0, const Vec3& v1, double t_ramp);

  /// Value at time t (no range check).
  Vec3 value(double t) const;
};

/// Nodal field of the source at time t on the given node set. Throws
/// DomainError when t lies outside [0, t_final] (up to rounding of t_j = j k).
NodalField3 sample_source(const SourceField& field, double t, double t_final, const TetMesh& mesh, Support support);

}  // namespace sdllg
