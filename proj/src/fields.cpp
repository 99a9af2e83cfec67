#include "sdllg/fields.hpp"

#include <cmath>
#include <sstream>

namespace sdllg {

PiOperator PiOperator::uniaxial(const Vec3& e, double C_ani) {
  if (std::abs(e.norm() - 1.0) > 1e-12) throw ConfigError("easy axis must be a unit vector");
  if (!(C_ani > 0.0)) throw ConfigError("uniaxial anisotropy needs C_ani > 0");
  PiOperator op;
  op.kind = Kind::Uniaxial;
  op.easy_axis = e;
  op.C_ani = C_ani;
  return op;
}

NodalField3 apply_pi(const PiOperator& op, const NodalField3& m) {
  NodalField3 out(m.support(), m.size());
  if (op.kind == PiOperator::Kind::Zero) return out;
  for (Index z = 0; z < m.size(); ++z) {
    const Vec3 mz = m[z];
    out.set(z, 2.0 * op.C_ani * op.easy_axis.dot(mz) * mz);
  }
  return out;
}

double verify_pi_bound(const FemSpace& space, const PiOperator& op, const std::vector<NodalField3>& probes) {
  double worst = 0.0;
  for (const auto& w : probes) {
    const double wn = std::sqrt(l2_norm_sq(space, w));
    if (!(wn > 0.0)) throw DomainError("pi bound probes must be nonzero");
    worst = std::max(worst, std::sqrt(l2_norm_sq(space, apply_pi(op, w))) / wn);
  }
  return worst;
}

SourceField SourceField::constant(Target target, const Vec3& v) {
  SourceField s;
  s.kind = Kind::Constant;
  s.target = target;
  s.value0 = s.value1 = v;
  return s;
}

SourceField SourceField::ramp(Target target, const Vec3& v0, const Vec3& v1, double t_ramp) {
  if (!(t_ramp > 0.0)) throw ConfigError("ramp time must be positive");
  SourceField s;
  s.kind = Kind::Ramp;
  s.target = target;
  s.value0 = v0;
  s.value1 = v1;
  s.t_ramp = t_ramp;
  return s;
}

Vec3 SourceField::value(double t) const {
  if (kind == Kind::Constant || t >= t_ramp) return kind == Kind::Constant ? value0 : value1;
  const double w = t / t_ramp;
  return (1.0 - w) * value0 + w * value1;
}

NodalField3 sample_source(const SourceField& field, double t, double t_final, const TetMesh& mesh, Support support) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t_final));
  if (!(t >= -slack && t <= t_final + slack)) {
    std::ostringstream os;
    os << "source sampled at t=" << t << " outside [0, " << t_final << "]";
    throw DomainError(os.str());
  }
  const Vec3 v = field.value(t);
  return nodal_interpolate(mesh, support, [&](const Vec3&) { return v; });
}

}  // namespace sdllg
