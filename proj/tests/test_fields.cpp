#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace sdllg;
using sdllg::testing::tiny_trilayer;

TEST_CASE("uniaxial pi on aligned and orthogonal vectors") {
  const PiOperator pi = PiOperator::uniaxial(Vec3::UnitZ(), 0.5);
  NodalField3 m(Support::OmegaMagnetic, 3);
  m.set(0, Vec3::UnitZ());
  m.set(1, Vec3::UnitX());
  m.set(2, Vec3(0.6, 0.0, 0.8));
  const NodalField3 p = apply_pi(pi, m);
  CHECK((p[0] - Vec3::UnitZ()).norm() < 1e-16);
  CHECK(p[1].norm() == 0.0);
  // Parallel to m nodewise.
  CHECK(p[2].cross(m[2]).norm() < 1e-16);
  CHECK(p[2].norm() == doctest::Approx(0.8));
  CHECK(pi.bound() == 1.0);
}

TEST_CASE("zero pi") {
  NodalField3 m(Support::OmegaMagnetic, 4);
  for (Index i = 0; i < 4; ++i) m.set(i, Vec3(i, 1, -i));
  CHECK(apply_pi(PiOperator::zero(), m).data().isZero(0.0));
}

TEST_CASE("uniaxial parameters are checked") {
  CHECK_THROWS_AS(PiOperator::uniaxial(Vec3(0, 0, 3), 0.5), ConfigError);
  CHECK_THROWS_AS(PiOperator::uniaxial(Vec3::UnitX(), 0.0), ConfigError);
}

TEST_CASE("pi bound on unit probes and scale dependence") {
  const FemSpace space(build_mesh(tiny_trilayer()));
  const PiOperator pi = PiOperator::uniaxial(Vec3(1, 1, 0).normalized(), 0.5);
  const auto probes = random_unit_fields(space.mesh().num_omega_nodes(), 100, 3);
  const double r1 = verify_pi_bound(space, pi, probes);
  CHECK(r1 <= 1.0 + 1e-12);
  CHECK(r1 > 0.0);
  CHECK(verify_pi_bound(space, PiOperator::zero(), probes) == 0.0);

  std::vector<NodalField3> doubled = probes;
  for (auto& p : doubled) p.data() *= 2.0;
  CHECK(verify_pi_bound(space, pi, doubled) == doctest::Approx(2.0 * r1).epsilon(1e-12));
}

TEST_CASE("pi commutes with the triple product") {
  const FemSpace space(build_mesh(tiny_trilayer()));
  const PiOperator pi = PiOperator::uniaxial(Vec3(0.2, 0.3, 1.0).normalized(), 0.7);
  const auto fields = random_unit_fields(space.mesh().num_omega_nodes(), 2, 11);
  const NodalField3& m = fields[0];
  const NodalField3& phi = fields[1];
  const NodalField3 p = apply_pi(pi, m);
  NodalField3 m_x_phi(Support::OmegaMagnetic, m.size()), p_x_m(Support::OmegaMagnetic, m.size());
  for (Index i = 0; i < m.size(); ++i) {
    m_x_phi.set(i, m[i].cross(phi[i]));
    p_x_m.set(i, p[i].cross(m[i]));
  }
  // (pi(m), m x phi) = (pi(m) x m, phi), summed over the nodes.
  double lhs = 0.0, rhs = 0.0;
  for (Index i = 0; i < m.size(); ++i) {
    lhs += p[i].dot(m_x_phi[i]);
    rhs += p_x_m[i].dot(phi[i]);
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("source sampling") {
  const TetMesh mesh = build_mesh(tiny_trilayer());
  const SourceField c = SourceField::constant(SourceField::Target::CurrentJ, Vec3(0, 0, 1));
  const NodalField3 cj = sample_source(c, 0.3, 1.0, mesh, Support::OmegaAll);
  CHECK(cj.size() == mesh.num_nodes());
  for (Index i = 0; i < cj.size(); ++i) CHECK(cj[i] == Vec3(0, 0, 1));

  const SourceField r = SourceField::ramp(SourceField::Target::AppliedF, Vec3::Zero(), Vec3(1, 0, 0), 1.0);
  const NodalField3 rf = sample_source(r, 0.5, 1.0, mesh, Support::OmegaMagnetic);
  CHECK(rf.size() == mesh.num_omega_nodes());
  CHECK((rf[0] - Vec3(0.5, 0, 0)).norm() < 1e-16);
  CHECK(r.value(0.0) == Vec3::Zero());
  CHECK(r.value(3.0) == Vec3(1, 0, 0));

  // Lipschitz in t with constant |v1 - v0| / t_ramp.
  for (double t : {0.0, 0.2, 0.7, 0.95, 1.5})
    CHECK((r.value(t + 0.05) - r.value(t)).norm() <= 0.05 + 1e-15);

  CHECK_THROWS_AS(sample_source(r, -0.1, 1.0, mesh, Support::OmegaAll), DomainError);
  CHECK_THROWS_AS(sample_source(r, 1.1, 1.0, mesh, Support::OmegaAll), DomainError);
  CHECK_NOTHROW(sample_source(r, 20 * 0.05, 1.0, mesh, Support::OmegaAll));
}
