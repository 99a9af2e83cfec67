#include "fixtures.hpp"

#include "sdllg/spin_step.hpp"

#include <doctest.h>

#include <random>

using namespace sdllg;
using sdllg::testing::tiny_trilayer;

namespace {

SparseMatrix kron3(const SparseMatrix& A) {
  std::vector<Triplet> tr;
  for (Eigen::Index r = 0; r < A.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
      for (int c = 0; c < 3; ++c)
        tr.emplace_back(static_cast<Index>(3 * it.row() + c), static_cast<Index>(3 * it.col() + c), it.value());
  SparseMatrix out(3 * A.rows(), 3 * A.cols());
  out.setFromTriplets(tr.begin(), tr.end());
  return out;
}

NodalField3 uniform(Support s, Index n, const Vec3& v) {
  NodalField3 f(s, n);
  for (Index i = 0; i < n; ++i) f.set(i, v);
  return f;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(n);
  for (auto& c : x) c = nd(rng);
  return x;
}

/// 3x3x3 conductor cube whose central cell is magnetic.
TetMesh embedded_magnet() {
  TetMesh mesh = build_multilayer_mesh({{1.0, Region::Magnetic}}, 1.0, 1.0, {3, 3, 3});
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    Vec3 c = Vec3::Zero();
    for (Index n : mesh.tets[t]) c += 0.25 * mesh.nodes[n];
    const bool centre = (c.array() > 1.0 / 3).all() && (c.array() < 2.0 / 3).all();
    mesh.tet_region[t] = centre ? Region::Magnetic : Region::Conductor;
  }
  mesh.slabs.clear();
  finalize_mesh(mesh);
  return mesh;
}

/// Interleaved nodal coefficients of the affine field x -> G x.
Eigen::VectorXd affine(const TetMesh& mesh, const Mat3& G) {
  Eigen::VectorXd z(3 * mesh.num_nodes());
  for (Index n = 0; n < mesh.num_nodes(); ++n) z.segment<3>(3 * n) = G * mesh.nodes[n];
  return z;
}

}  // namespace

TEST_CASE("isotropic form with constant m") {
  const FemSpace space(build_mesh(tiny_trilayer()));
  MaterialParams p;
  p.beta_prime = 0.0;
  p.D0_magnetic = 1.5;
  p.D0_conductor = 1.5;
  const double k = 0.1;
  const Index n = space.mesh().num_omega_nodes();
  const NodalField3 m = uniform(Support::OmegaMagnetic, n, Vec3(0, 0.6, 0.8));
  SpinFormTerms no_cross;
  no_cross.cross = false;
  const SparseMatrix A = assemble_spin_form(space, m, p, k, no_cross);
  const SparseMatrix expect = kron3(space.mass(Support::OmegaAll)) * (1.0 / k + 1.5) +
                              kron3(space.stiffness(Support::OmegaAll)) * 1.5;
  CHECK(Eigen::MatrixXd(A - expect).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::MatrixXd full(assemble_spin_form(space, m, p, k));
  const Eigen::MatrixXd sym = 0.5 * (full + full.transpose());
  CHECK(Eigen::MatrixXd(sym - Eigen::MatrixXd(A)).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("cross block is skew and invisible in the quadratic form") {
  const SimConfig cfg = tiny_trilayer();
  const FemSpace space(build_mesh(cfg));
  const auto m = random_unit_fields(space.mesh().num_omega_nodes(), 1, 17)[0];
  SpinFormTerms only_cross{false, false, false, false, true};
  const Eigen::MatrixXd C(assemble_spin_form(space, m, cfg.params, 0.1, only_cross));
  CHECK(C.cwiseAbs().maxCoeff() > 0.0);
  CHECK((C + C.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * C.cwiseAbs().maxCoeff());

  SpinFormTerms no_cross;
  no_cross.cross = false;
  const SparseMatrix A = assemble_spin_form(space, m, cfg.params, 0.1);
  const SparseMatrix B = assemble_spin_form(space, m, cfg.params, 0.1, no_cross);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd z = random_vector(A.rows(), rng);
    CHECK(std::abs(z.dot((A - B) * z)) <= 1e-12 * z.dot(B * z));
  }
}

TEST_CASE("full system is positive definite") {
  SimConfig cfg = tiny_trilayer();
  cfg.params.beta = 0.9;
  cfg.params.beta_prime = 0.9;
  cfg.params.reaction_scale = 0.5;
  cfg.params.precession_scale = 3.0;
  const FemSpace space(build_mesh(cfg));
  const auto m = random_unit_fields(space.mesh().num_omega_nodes(), 1, 5)[0];
  const SparseMatrix A = assemble_spin_form(space, m, cfg.params, 0.05);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd z = random_vector(A.rows(), rng);
    CHECK(z.dot(A * z) > 0.0);
  }
}

TEST_CASE("coercivity floor (1 - beta beta') D_*") {
  SimConfig cfg = tiny_trilayer();
  cfg.params.beta = 0.5;
  cfg.params.beta_prime = 0.5;
  cfg.params.D0_magnetic = 2.0;
  cfg.params.D0_conductor = 2.0;
  const FemSpace space(build_mesh(cfg));
  const auto m = random_unit_fields(space.mesh().num_omega_nodes(), 1, 8)[0];
  CHECK(coercivity_probe(space, m, cfg.params, 100, 1) >= 1.5 - 1e-10);
}

TEST_CASE("form parameters are validated") {
  const SimConfig cfg = tiny_trilayer();
  const FemSpace space(build_mesh(cfg));
  const auto m = random_unit_fields(space.mesh().num_omega_nodes(), 1, 8)[0];
  MaterialParams p = cfg.params;
  CHECK_THROWS_AS(assemble_spin_form(space, m, p, 0.0), ConfigError);
  p.beta = 1.0;
  p.beta_prime = 1.0;
  CHECK_THROWS_AS(assemble_spin_form(space, m, p, 0.1), ConfigError);
  p = cfg.params;
  p.D0_conductor = 0.0;
  CHECK_THROWS_AS(assemble_spin_form(space, m, p, 0.1), ConfigError);
}

TEST_CASE("right-hand side without current") {
  const SimConfig cfg = tiny_trilayer();
  const FemSpace space(build_mesh(cfg));
  const TetMesh& mesh = space.mesh();
  const auto m = random_unit_fields(mesh.num_omega_nodes(), 1, 8)[0];
  const NodalField3 s = nodal_interpolate(mesh, Support::OmegaAll, [](const Vec3& x) { return Vec3(x.z(), 1, -x.x()); });
  const NodalField3 j0(Support::OmegaAll, mesh.num_nodes());
  const double k = 0.2;
  const Eigen::VectorXd rhs = assemble_spin_rhs(space, s, m, j0, cfg.params, k);
  const Eigen::VectorXd expect = kron3(space.mass(Support::OmegaAll)) * s.data() / k;
  CHECK((rhs - expect).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("current load for constant m and j") {
  MaterialParams p;
  p.beta = 0.4;
  const Vec3 mv = Vec3(1, 2, 2) / 3.0, jv(0.3, -0.5, 1.0);
  Mat3 G;
  G << 1, 2, 0, -1, 0.5, 3, 0.2, 0, -2;

  SUBCASE("omega interior: only the volume term") {
    const FemSpace space(embedded_magnet());
    const TetMesh& mesh = space.mesh();
    for (const auto& f : mesh.boundary_facets) CHECK(f.tag != FacetTag::Shared);
    const double vol = region_volume(mesh, Region::Magnetic);
    CHECK(vol == doctest::Approx(1.0 / 27));
    const NodalField3 m = uniform(Support::OmegaMagnetic, mesh.num_omega_nodes(), mv);
    const NodalField3 j = uniform(Support::OmegaAll, mesh.num_nodes(), jv);
    const Eigen::VectorXd load = assemble_current_load(space, m, j, p);
    CHECK(load.dot(affine(mesh, G)) == doctest::Approx(p.beta * vol * mv.dot(G * jv)).epsilon(1e-12));
  }

  SUBCASE("omega = Omega: boundary term cancels the volume term") {
    const FemSpace space(build_multilayer_mesh({{1.0, Region::Magnetic}}, 1.0, 1.0, {2, 2, 2}));
    const TetMesh& mesh = space.mesh();
    const NodalField3 m = uniform(Support::OmegaMagnetic, mesh.num_omega_nodes(), mv);
    const NodalField3 j = uniform(Support::OmegaAll, mesh.num_nodes(), jv);
    const Eigen::VectorXd load = assemble_current_load(space, m, j, p);
    // Divergence theorem: int_dOmega (j.n)(m.Gx) = |Omega| m.Gj.
    CHECK(std::abs(load.dot(affine(mesh, G))) <= 1e-13);
    // Constant test field: no volume part, and the net flux of j vanishes.
    const Eigen::VectorXd c = Vec3(0.2, 1.0, -0.7).replicate(mesh.num_nodes(), 1);
    CHECK(std::abs(load.dot(c)) <= 1e-13);
  }
}

TEST_CASE("outward normals point away from the owning tet") {
  const TetMesh mesh = build_mesh(tiny_trilayer());
  for (const auto& f : mesh.boundary_facets) {
    const Vec3 n = facet_outward_normal(mesh, f);
    CHECK(n.norm() == doctest::Approx(1.0));
    Vec3 fc = Vec3::Zero(), tc = Vec3::Zero();
    for (Index a : f.nodes) fc += mesh.nodes[a] / 3.0;
    for (Index a : mesh.tets[f.tet]) tc += mesh.nodes[a] / 4.0;
    CHECK(n.dot(fc - tc) > 0.0);
  }
}

TEST_CASE("zero right-hand side gives zero spin accumulation") {
  const SimConfig cfg = tiny_trilayer();
  const FemSpace space(build_mesh(cfg));
  const auto m = random_unit_fields(space.mesh().num_omega_nodes(), 1, 8)[0];
  SpinSystem sys;
  sys.matrix = assemble_spin_form(space, m, cfg.params, 0.1);
  sys.rhs = Eigen::VectorXd::Zero(sys.matrix.rows());
  const NodalField3 s = solve_s(sys, cfg.solver);
  CHECK(s.support() == Support::OmegaAll);
  CHECK(s.data().isZero(0.0));
}

TEST_CASE("spin accumulation decays without current") {
  SimConfig cfg = tiny_trilayer();
  cfg.j = SourceField::constant(SourceField::Target::CurrentJ, Vec3::Zero());
  cfg.s0.kind = InitialS::Kind::Uniform;
  cfg.s0.value = Vec3(0.3, -1.0, 0.5);
  cfg.T_final = 20 * cfg.k;
  Simulation sim(cfg);
  double prev = l2_norm_sq(sim.space(), sim.state().s);
  while (!sim.finished()) {
    sim.advance();
    const double cur = l2_norm_sq(sim.space(), sim.state().s);
    CHECK(cur <= prev * (1 + 1e-12));
    prev = cur;
  }
}
