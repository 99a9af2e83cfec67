#include "fixtures.hpp"

#include "sdllg/llg_step.hpp"

#include <doctest.h>

#include <sstream>

using namespace sdllg;
using sdllg::testing::tiny_trilayer;

namespace {

NodalField3 uniform(Support s, Index n, const Vec3& v) {
  NodalField3 f(s, n);
  for (Index i = 0; i < n; ++i) f.set(i, v);
  return f;
}

FemSpace unit_cube() { return FemSpace(build_multilayer_mesh({{1.0, Region::Magnetic}}, 1.0, 1.0, {2, 2, 2})); }

}  // namespace

TEST_CASE("energy of uniform fields") {
  const FemSpace space = unit_cube();
  const Index n = space.mesh().num_omega_nodes();
  const Vec3 e = Vec3(1, 1, 1).normalized();
  MaterialParams p;
  p.C_ani = 0.5;
  p.easy_axis = e;
  const NodalField3 m = uniform(Support::OmegaMagnetic, n, e);
  const NodalField3 s0(Support::OmegaAll, space.mesh().num_nodes());
  const PiOperator pi = PiOperator::uniaxial(e, 0.5);
  CHECK(energy(space, m, s0, m, pi, p) == doctest::Approx(-1.5).epsilon(1e-13));

  const NodalField3 f0(Support::OmegaMagnetic, n);
  CHECK(std::abs(energy(space, m, s0, f0, PiOperator::zero(), p)) <= 1e-15);
}

TEST_CASE("energy is linear in c and scales per term") {
  const SimConfig cfg = tiny_trilayer();
  const FemSpace space(build_mesh(cfg));
  const TetMesh& mesh = space.mesh();
  const NodalField3 m = nodal_interpolate(mesh, Support::OmegaMagnetic,
                                          [](const Vec3& x) { return Vec3(x.x(), 1.0, x.y() * x.z()).normalized(); });
  const NodalField3 s = nodal_interpolate(mesh, Support::OmegaAll, [](const Vec3& x) { return Vec3(0.3, x.z(), -1); });
  const NodalField3 f = uniform(Support::OmegaMagnetic, mesh.num_omega_nodes(), Vec3(0.1, 0.2, 0.5));
  const NodalField3 f0(Support::OmegaMagnetic, mesh.num_omega_nodes());
  const PiOperator pi0 = PiOperator::zero();

  MaterialParams p = cfg.params;
  auto E_c = [&](double c) {
    p.c = c;
    return energy(space, m, s, f, pi0, p);
  };
  const double e0 = E_c(0.0), e1 = E_c(1.0), e2 = E_c(2.0);
  CHECK(e2 - e0 == doctest::Approx(2.0 * (e1 - e0)).epsilon(1e-13));

  p.c = 1.0;
  NodalField3 m2 = m, s2 = s;
  m2.data() *= 2.0;
  s2.data() *= 2.0;
  // Without Zeeman: exchange and coupling are both quadratic.
  CHECK(energy(space, m2, s2, f0, pi0, p) == doctest::Approx(4.0 * energy(space, m, s, f0, pi0, p)).epsilon(1e-13));
  // Zeeman alone is linear.
  MaterialParams z = p;
  z.C_exch = 0.0;
  z.c = 0.0;
  CHECK(energy(space, m2, s2, f, pi0, z) == doctest::Approx(2.0 * energy(space, m, s, f, pi0, z)).epsilon(1e-13));
}

TEST_CASE("nodewise modulus of a hand-made trajectory") {
  const double k = 0.1;
  NodalField3 m0(Support::OmegaMagnetic, 1), v0 = m0, v1 = m0;
  m0.set(0, Vec3::UnitZ());
  v0.set(0, Vec3(2, 0, 0));
  NodalField3 m1 = update_m(m0, v0, k);
  v1.set(0, m1[0].cross(Vec3::UnitX()).normalized());
  NodalField3 m2 = update_m(m1, v1, k);
  CHECK(m2[0].squaredNorm() == doctest::Approx(1.05).epsilon(1e-15));
  CHECK(nodewise_modulus_check({m0, m1, m2}, {v0, v1}, k) <= 1e-15);

  const NodalField3 zero(Support::OmegaMagnetic, 1);
  CHECK(nodewise_modulus_check({m0, m0, m0}, {zero, zero}, k) == 0.0);
}

TEST_CASE("step identity of a zero-data step") {
  const FemSpace space = unit_cube();
  const Index n = space.mesh().num_omega_nodes();
  const NodalField3 m = uniform(Support::OmegaMagnetic, n, Vec3::UnitY());
  const NodalField3 z(Support::OmegaMagnetic, n);
  const StepIdentity id = step_identity_check(space, m, m, z, z, z, z, MaterialParams{}, 0.1);
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs == 0.0);
  CHECK(id.residual == 0.0);
}

TEST_CASE("step identity is bounded by the solver residual") {
  SimConfig cfg = tiny_trilayer({3, 3, 5});
  cfg.params.theta = 0.6;
  cfg.params.C_ani = 0.5;
  cfg.pi = PiOperator::uniaxial(Vec3::UnitZ(), 0.5);
  cfg.T_final = cfg.k;
  for (double tol : {1e-6, 1e-12}) {
    cfg.solver.tol = tol;
    Simulation sim(cfg);
    const StepReport rep = sim.advance();
    CHECK(rep.identity.residual <= std::max(1e-10, 1e3 * rep.llg.relative_residual));
  }
}

TEST_CASE("ledger and telescoping with zero pi") {
  SimConfig cfg = tiny_trilayer();
  cfg.params.theta = 0.8;
  cfg.T_final = 10 * cfg.k;
  const RunResult res = run(cfg);
  REQUIRE(res.ledger.rows.size() == 11);
  CHECK(res.ledger.rows[0].dissipation == 0.0);
  CHECK(res.ledger.rows[0].E == res.E0);
  const EnergyMonitor mon = energy_estimate_monitor(res.ledger, res.E0, cfg.pi, cfg.k);
  CHECK(mon.corrected_residual <= 1e-8);
  CHECK(mon.slack_bound == 0.0);

  double s1 = 0.0, s2 = 0.0;
  for (const auto& r : res.ledger.rows) {
    s1 = std::max(s1, r.stability1());
    s2 = std::max(s2, r.stability2());
    CHECK(r.v_cumsum >= 0.0);
  }
  CHECK(res.ledger.max_stability1() == s1);
  CHECK(res.ledger.max_stability2() == s2);

  std::ostringstream os;
  res.ledger.write_csv(os);
  const std::string csv = os.str();
  CHECK(csv.rfind("step,t,E,dissipation,theta_term,f_work,s_work,pi_mismatch,s_L2,s_H1_cumsum,m_grad_L2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("uniaxial pi stays within the O(k) slack") {
  SimConfig cfg = tiny_trilayer();
  cfg.params.C_ani = 0.5;
  cfg.pi = PiOperator::uniaxial(Vec3::UnitZ(), 0.5);
  cfg.T_final = 10 * cfg.k;
  const RunResult res = run(cfg);
  const EnergyMonitor mon = energy_estimate_monitor(res.ledger, res.E0, cfg.pi, cfg.k);
  CHECK(mon.slack_bound > 0.0);
  CHECK(mon.max_excess <= mon.slack_bound + 1e-10);
}

TEST_CASE("projection probe") {
  const FemSpace space(build_mesh(tiny_trilayer()));
  const double c = projection_bound_probe(space, 50, 4);
  CHECK(c > 0.0);
  CHECK(c <= 1.0);
  CHECK(projection_bound_probe(space, 50, 4) == c);
}

TEST_CASE("random unit fields") {
  const auto f = random_unit_fields(30, 3, 99);
  REQUIRE(f.size() == 3);
  for (const auto& x : f)
    for (Index i = 0; i < x.size(); ++i) CHECK(x[i].norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(random_unit_fields(30, 3, 99)[2].data() == f[2].data());
  CHECK(random_unit_fields(30, 3, 98)[2].data() != f[2].data());
}

TEST_CASE("weak residual of the constant solution") {
  const FemSpace space = unit_cube();
  const TetMesh& mesh = space.mesh();
  Trajectory traj;
  traj.k = 0.1;
  const NodalField3 m = uniform(Support::OmegaMagnetic, mesh.num_omega_nodes(), Vec3(0, 0.6, 0.8));
  for (int i = 0; i < 4; ++i) {
    traj.m.push_back(m);
    traj.s.push_back(NodalField3(Support::OmegaAll, mesh.num_nodes()));
    if (i < 3) traj.v.push_back(NodalField3(Support::OmegaMagnetic, mesh.num_omega_nodes()));
  }
  const SourceField f = SourceField::constant(SourceField::Target::AppliedF, Vec3::Zero());
  const SourceField j = SourceField::constant(SourceField::Target::CurrentJ, Vec3::Zero());
  const auto tests = polynomial_test_family(Vec3(1, 1, 1));
  CHECK(tests.size() == 5);
  const WeakResidual r = weak_residual_probe(space, traj, f, j, PiOperator::zero(), MaterialParams{}, tests);
  CHECK(r.llg_norm == 0.0);
  CHECK(r.diffusion_norm == 0.0);

  traj.v.pop_back();
  CHECK_THROWS(weak_residual_probe(space, traj, f, j, PiOperator::zero(), MaterialParams{}, tests));
}

TEST_CASE("test family gradients match finite differences") {
  const auto tests = polynomial_test_family(Vec3(2.0, 1.0, 0.5));
  const Vec3 x(0.7, 0.3, 0.2);
  const double t = 0.4, h = 1e-6;
  for (const auto& tf : tests) {
    Mat3 fd;
    for (int l = 0; l < 3; ++l) {
      const Vec3 d = h * Vec3::Unit(l);
      fd.col(l) = (tf.value(x + d, t) - tf.value(x - d, t)) / (2 * h);
    }
    CHECK((fd - tf.grad(x, t)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}
