#include "sdllg/llg_step.hpp"

#include <cmath>
#include <sstream>

namespace sdllg {

TangentBasis build_tangent_basis(const NodalField3& m) {
  TangentBasis b;
  b.t1.resize(m.size());
  b.t2.resize(m.size());
  for (Index z = 0; z < m.size(); ++z) {
    const Vec3 mz = m[z];
    if (!mz.allFinite() || mz.squaredNorm() == 0.0) {
      std::ostringstream os;
      os << "cannot build tangent frame at node " << z << ": zero or non-finite magnetization";
      throw ConstraintViolation(os.str());
    }
    int j = 0;
    const Vec3 a = mz.cwiseAbs();
    if (a.y() < a[j]) j = 1;
    if (a.z() < a[j]) j = 2;
    const Vec3 t1 = mz.cross(Vec3::Unit(j)).normalized();
    b.t1[z] = t1;
    b.t2[z] = mz.cross(t1).normalized();
  }
  return b;
}

SparseMatrix tangent_prolongation(const TangentBasis& basis) {
  std::vector<Triplet> trips;
  trips.reserve(6 * basis.size());
  for (Index z = 0; z < basis.size(); ++z)
    for (int c = 0; c < 3; ++c) {
      trips.emplace_back(3 * z + c, 2 * z, basis.t1[z][c]);
      trips.emplace_back(3 * z + c, 2 * z + 1, basis.t2[z][c]);
    }
  SparseMatrix P(3 * basis.size(), 2 * basis.size());
  P.setFromTriplets(trips.begin(), trips.end());
  return P;
}

NodalField3 expand_tangent(const TangentBasis& basis, const Eigen::VectorXd& x) {
  NodalField3 v(Support::OmegaMagnetic, basis.size());
  for (Index z = 0; z < basis.size(); ++z) v.set(z, x[2 * z] * basis.t1[z] + x[2 * z + 1] * basis.t2[z]);
  return v;
}

LlgSystem assemble_llg_system(const FemSpace& space, const NodalField3& m, const TangentBasis& basis,
                              const NodalField3& f, const NodalField3& pi_m, const NodalField3& s_omega,
                              const MaterialParams& params, double k) {
  if (!(k > 0.0)) throw ConfigError("time step k must be positive");
  if (!(params.theta > 0.5 && params.theta <= 1.0)) throw ConfigError("theta must lie in (1/2, 1]");
  const TetMesh& mesh = space.mesh();
  const Index n = mesh.num_omega_nodes();
  if (m.size() != n || basis.size() != n || f.size() != n || pi_m.size() != n || s_omega.size() != n)
    throw std::invalid_argument("LLG system fields must live on the omega nodes");

  using Mat32 = Eigen::Matrix<double, 3, 2>;
  const double stiff_coeff = params.C_exch * params.theta * k;
  std::vector<Triplet> trips;
  for_each_tet_triplets(
      mesh, RegionFilter::Magnetic,
      [&](Index t, std::vector<Triplet>& out) {
        const TetGeometry& g = space.geometry(t);
        std::array<Index, 4> w;
        std::array<Mat32, 4> P;
        std::array<Mat3, 4> mx;
        for (int a = 0; a < 4; ++a) {
          w[a] = mesh.omega_index[mesh.tets[t][a]];
          P[a].col(0) = basis.t1[w[a]];
          P[a].col(1) = basis.t2[w[a]];
          mx[a] = cross_matrix(m[w[a]]);
        }
        const Mat4 Me = element_mass(g);
        const Mat4 Ke = element_stiffness(g);
        for (int c = 0; c < 4; ++c) {      // test node
          for (int b = 0; b < 4; ++b) {    // trial node
            Mat3 block = (params.alpha * Me(c, b) + stiff_coeff * Ke(c, b)) * Mat3::Identity();
            for (int a = 0; a < 4; ++a) block += g.volume * triple_weight(a, b, c) * mx[a];
            const Eigen::Matrix2d tb = P[c].transpose() * block * P[b];
            for (int r = 0; r < 2; ++r)
              for (int q = 0; q < 2; ++q) out.emplace_back(2 * w[c] + r, 2 * w[b] + q, tb(r, q));
          }
        }
      },
      trips);

  LlgSystem sys;
  sys.matrix.resize(2 * n, 2 * n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.matrix.makeCompressed();

  const SparseMatrix& M = space.mass(Support::OmegaMagnetic);
  const SparseMatrix& K = space.stiffness(Support::OmegaMagnetic);
  const Eigen::MatrixXd load = M * (pi_m.rows() + f.rows() + params.c * s_omega.rows()) - params.C_exch * (K * m.rows());
  sys.rhs.resize(2 * n);
  for (Index z = 0; z < n; ++z) {
    const Vec3 gz = load.row(z).transpose();
    sys.rhs[2 * z] = basis.t1[z].dot(gz);
    sys.rhs[2 * z + 1] = basis.t2[z].dot(gz);
  }
  return sys;
}

NodalField3 solve_v(const LlgSystem& system, const TangentBasis& basis, const SolverConfig& cfg, SolveStats* stats) {
  return expand_tangent(basis, solve_krylov(system.matrix, system.rhs, cfg, stats));
}

NodalField3 update_m(const NodalField3& m, const NodalField3& v, double k) {
  if (m.size() != v.size()) throw std::invalid_argument("update_m: size mismatch");
  return NodalField3(m.support(), m.data() + k * v.data());
}

}  // namespace sdllg
