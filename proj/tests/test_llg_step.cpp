#include "fixtures.hpp"

#include "sdllg/dense_oracle.hpp"
#include "sdllg/llg_step.hpp"
#include "sdllg/quadrature.hpp"

#include <doctest.h>

#include <random>

using namespace sdllg;
using sdllg::testing::tiny_trilayer;

namespace {

/// Scalar matrix expanded to interleaved 3-vector storage.
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

struct Setup {
  FemSpace space;
  NodalField3 m;
  NodalField3 zero;
  MaterialParams params;
};

Setup random_setup(std::uint64_t seed) {
  SimConfig cfg = tiny_trilayer();
  Setup s{FemSpace(build_mesh(cfg)), {}, {}, cfg.params};
  const Index n = s.space.mesh().num_omega_nodes();
  s.m = random_unit_fields(n, 1, seed)[0];
  s.zero = NodalField3(Support::OmegaMagnetic, n);
  s.params.theta = 0.75;
  return s;
}

TetMesh single_tet() {
  TetMesh mesh;
  mesh.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  mesh.tets = {{0, 1, 2, 3}};
  mesh.tet_region = {Region::Magnetic};
  finalize_mesh(mesh);
  return mesh;
}

}  // namespace

TEST_CASE("tangent frame of the z axis") {
  NodalField3 m(Support::OmegaMagnetic, 1);
  m.set(0, Vec3::UnitZ());
  const TangentBasis b = build_tangent_basis(m);
  // Ties go to the first axis: t1 = z x x, t2 = z x t1.
  CHECK(b.t1[0] == Vec3(0, 1, 0));
  CHECK(b.t2[0] == Vec3(-1, 0, 0));
}

TEST_CASE("tangent frames are orthonormal and sign independent") {
  const auto fields = random_unit_fields(200, 1, 9);
  const TangentBasis b = build_tangent_basis(fields[0]);
  NodalField3 neg = fields[0];
  neg.data() *= -1.0;
  const TangentBasis bn = build_tangent_basis(neg);
  for (Index i = 0; i < b.size(); ++i) {
    const Vec3 m = fields[0][i];
    CHECK(std::abs(b.t1[i].dot(m)) <= 1e-12);
    CHECK(std::abs(b.t2[i].dot(m)) <= 1e-12);
    CHECK(std::abs(b.t1[i].dot(b.t2[i])) <= 1e-12);
    CHECK(std::abs(b.t1[i].norm() - 1.0) <= 1e-12);
    CHECK(std::abs(b.t2[i].norm() - 1.0) <= 1e-12);
    // Same plane: the normals agree up to sign.
    CHECK(std::abs(std::abs(b.t1[i].cross(b.t2[i]).dot(bn.t1[i].cross(bn.t2[i]))) - 1.0) <= 1e-12);
  }
  NodalField3 bad(Support::OmegaMagnetic, 1);
  CHECK_THROWS_AS(build_tangent_basis(bad), ConstraintViolation);
}

TEST_CASE("symmetric and skew parts of the tangent system") {
  Setup s = random_setup(21);
  const double k = 0.1;
  const TangentBasis basis = build_tangent_basis(s.m);
  const LlgSystem sys = assemble_llg_system(s.space, s.m, basis, s.zero, s.zero, s.zero, s.params, k);
  const SparseMatrix P = tangent_prolongation(basis);
  const SparseMatrix Pt = P.transpose();
  const Eigen::MatrixXd M3 = Eigen::MatrixXd(Pt * kron3(s.space.mass(Support::OmegaMagnetic)) * P);
  const Eigen::MatrixXd K3 = Eigen::MatrixXd(Pt * kron3(s.space.stiffness(Support::OmegaMagnetic)) * P);
  const Eigen::MatrixXd A(sys.matrix);
  const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
  const Eigen::MatrixXd expect = s.params.alpha * M3 + s.params.C_exch * s.params.theta * k * K3;
  CHECK((sym - expect).cwiseAbs().maxCoeff() <= 1e-12 * expect.cwiseAbs().maxCoeff());

  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(A.rows());
    for (auto& c : x) c = nd(rng);
    CHECK(x.dot(A * x) >= s.params.alpha * x.dot(M3 * x) * (1 - 1e-12));
    CHECK(x.dot(M3 * x) > 0.0);
  }
}

TEST_CASE("skew part is the precession term") {
  Setup s = random_setup(30);
  const TangentBasis basis = build_tangent_basis(s.m);
  const Eigen::MatrixXd A(assemble_llg_system(s.space, s.m, basis, s.zero, s.zero, s.zero, s.params, 0.1).matrix);
  const TetMesh& mesh = s.space.mesh();
  const QuadratureRule rule = tet_rule_grundmann_moeller(1);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(A.rows()), y(A.rows());
    for (auto& c : x) c = nd(rng);
    for (auto& c : y) c = nd(rng);
    const NodalField3 phi = extend_by_zero(mesh, expand_tangent(basis, x));
    const NodalField3 psi = extend_by_zero(mesh, expand_tangent(basis, y));
    const NodalField3 m_all = extend_by_zero(mesh, s.m);
    // (m x phi, psi) over omega by a cubic-exact rule.
    double ref = 0.0;
    for (Index t = 0; t < mesh.num_tets(); ++t) {
      if (!mesh.is_magnetic(t)) continue;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Vec3 mq = evaluate_in_tet(mesh, m_all, t, rule.points[q]);
        ref += rule.weights[q] * s.space.geometry(t).volume *
               mq.cross(evaluate_in_tet(mesh, phi, t, rule.points[q])).dot(evaluate_in_tet(mesh, psi, t, rule.points[q]));
      }
    }
    const double skew = 0.5 * y.dot((A - A.transpose()) * x);
    CHECK(skew == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("constant m with no data gives v = 0") {
  Setup s = random_setup(1);
  for (Index i = 0; i < s.m.size(); ++i) s.m.set(i, Vec3(0.6, 0.0, 0.8));
  const TangentBasis basis = build_tangent_basis(s.m);
  const LlgSystem sys = assemble_llg_system(s.space, s.m, basis, s.zero, s.zero, s.zero, s.params, 0.1);
  CHECK(sys.rhs.cwiseAbs().maxCoeff() <= 1e-14);
  const NodalField3 v = solve_v(sys, basis, SolverConfig{});
  CHECK(v.data().cwiseAbs().maxCoeff() <= 1e-14);

  // An exactly zero right-hand side gives exactly zero.
  LlgSystem zero_sys = sys;
  zero_sys.rhs.setZero();
  const NodalField3 v0 = solve_v(zero_sys, basis, SolverConfig{});
  CHECK(v0.data().isZero(0.0));
  CHECK(update_m(s.m, v0, 0.1).data() == s.m.data());
}

TEST_CASE("v is tangent and linear in the data") {
  Setup s = random_setup(8);
  const TangentBasis basis = build_tangent_basis(s.m);
  const Index n = s.m.size();
  NodalField3 f(Support::OmegaMagnetic, n), sig(Support::OmegaMagnetic, n);
  for (Index i = 0; i < n; ++i) {
    f.set(i, Vec3(0.1, -0.3, 0.5));
    sig.set(i, Vec3(std::sin(i), 0.2, std::cos(i)));
  }
  SolverConfig tight;
  tight.tol = 1e-13;
  const NodalField3 v1 = solve_v(assemble_llg_system(s.space, s.m, basis, f, s.zero, sig, s.params, 0.05), basis, tight);
  NodalField3 f2 = f, s2 = sig;
  f2.data() *= 3.0;
  s2.data() *= 3.0;
  const NodalField3 v3 = solve_v(assemble_llg_system(s.space, s.m, basis, f2, s.zero, s2, s.params, 0.05), basis, tight);
  // Exchange of a non-constant m contributes a fixed offset.
  const NodalField3 v0 =
      solve_v(assemble_llg_system(s.space, s.m, basis, s.zero, s.zero, s.zero, s.params, 0.05), basis, tight);
  const Eigen::VectorXd d1 = v1.data() - v0.data(), d3 = v3.data() - v0.data();
  CHECK(d1.norm() > 0.0);
  CHECK((d3 - 3.0 * d1).norm() <= 1e-9 * d3.norm());
  for (Index i = 0; i < n; ++i) CHECK(std::abs(v1[i].dot(s.m[i])) <= 1e-14);
}

TEST_CASE("update adds k v without renormalising") {
  Setup s = random_setup(3);
  NodalField3 v(Support::OmegaMagnetic, s.m.size());
  for (Index i = 0; i < s.m.size(); ++i) v.set(i, s.m[i].cross(Vec3(0.3, 1.0, -0.2)));
  const double k = 0.2;
  const NodalField3 mp = update_m(s.m, v, k);
  for (Index i = 0; i < s.m.size(); ++i)
    CHECK(mp[i].squaredNorm() == doctest::Approx(1.0 + k * k * v[i].squaredNorm()).epsilon(1e-14));
}

TEST_CASE("single tet agrees with the dense oracle") {
  const TetMesh mesh = single_tet();
  const FemSpace space(mesh);
  MaterialParams params;
  params.alpha = 1.0;
  const double k = 1e-3;
  NodalField3 m(Support::OmegaMagnetic, 4), f(Support::OmegaMagnetic, 4), s(Support::OmegaAll, 4),
      j(Support::OmegaAll, 4);
  const std::array<Vec3, 4> dirs = {Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 1, 0.2), Vec3(-1, 0.5, 0.5)};
  for (Index i = 0; i < 4; ++i) {
    m.set(i, dirs[i].normalized());
    f.set(i, Vec3(0.2, 0, 1));
    s.set(i, Vec3(0, 0.1 * i, 0));
    j.set(i, Vec3(0, 0, 1));
  }
  const PiOperator pi = PiOperator::uniaxial(Vec3::UnitZ(), 0.3);
  const TangentBasis basis = build_tangent_basis(m);
  SolverConfig tight;
  tight.tol = 1e-13;
  const NodalField3 v =
      solve_v(assemble_llg_system(space, m, basis, f, apply_pi(pi, m), restrict_to_omega(mesh, s), params, k), basis,
              tight);
  const OracleStep o = dense_oracle_step(mesh, m, s, f, j, pi, params, k);
  CHECK((o.v.data() - v.data()).lpNorm<Eigen::Infinity>() <= 1e-9);
  for (Index i = 0; i < 4; ++i)
    CHECK(std::abs(o.m_next[i].squaredNorm() - 1.0 - k * k * o.v[i].squaredNorm()) <= 1e-14);
}

TEST_CASE("dense oracle: zero data and mesh size limit") {
  const TetMesh mesh = single_tet();
  MaterialParams params;
  NodalField3 m(Support::OmegaMagnetic, 4), f(Support::OmegaMagnetic, 4), s(Support::OmegaAll, 4),
      j(Support::OmegaAll, 4);
  for (Index i = 0; i < 4; ++i) m.set(i, Vec3::UnitX());
  const OracleStep o = dense_oracle_step(mesh, m, s, f, j, PiOperator::zero(), params, 0.1);
  CHECK(o.v.data().cwiseAbs().maxCoeff() <= 1e-14);

  const TetMesh big = build_mesh(tiny_trilayer({8, 8, 10}));
  REQUIRE(big.num_nodes() > kOracleMaxNodes);
  NodalField3 mb(Support::OmegaMagnetic, big.num_omega_nodes()), fb = mb;
  NodalField3 sb(Support::OmegaAll, big.num_nodes()), jb = sb;
  CHECK_THROWS_AS(dense_oracle_step(big, mb, sb, fb, jb, PiOperator::zero(), params, 0.1), DomainError);
}
