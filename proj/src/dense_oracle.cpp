#include "sdllg/dense_oracle.hpp"

#include <Eigen/LU>

#include <sstream>

namespace sdllg {

namespace {

// (a x b)_r = eps_{rpq} a_p b_q
double levi_civita(int r, int p, int q) {
  if (r == p || p == q || r == q) return 0.0;
  return ((r + 1) % 3 == p) ? 1.0 : -1.0;
}

}  // namespace

OracleStep dense_oracle_step(const TetMesh& mesh, const NodalField3& m, const NodalField3& s, const NodalField3& f,
                             const NodalField3& j_next, const PiOperator& pi, const MaterialParams& params, double k) {
  if (mesh.num_nodes() > kOracleMaxNodes) {
    std::ostringstream os;
    os << "dense oracle refuses a mesh with " << mesh.num_nodes() << " nodes (limit " << kOracleMaxNodes << ")";
    throw DomainError(os.str());
  }
  const int nw = mesh.num_omega_nodes();
  const int na = mesh.num_nodes();
  const double C = params.C_exch;

  // LLG: saddle-point system [A B^T; B 0] over 3 nw unknowns plus nw multipliers.
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(4 * nw, 4 * nw);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * nw);
  Eigen::MatrixXd pim(nw, 3);
  for (int z = 0; z < nw; ++z) {
    const Vec3 mz = m[z];
    const Vec3 pz = pi.kind == PiOperator::Kind::Zero ? Vec3(Vec3::Zero()) : Vec3(2.0 * pi.C_ani * pi.easy_axis.dot(mz) * mz);
    pim.row(z) = pz.transpose();
  }
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    if (mesh.tet_region[t] != Region::Magnetic) continue;
    const TetGeometry g = tet_geometry(mesh, t);
    const Mat4 Me = element_mass(g);
    const Mat4 Ke = element_stiffness(g);
    std::array<int, 4> w;
    for (int a = 0; a < 4; ++a) w[a] = mesh.omega_index[mesh.tets[t][a]];
    for (int c = 0; c < 4; ++c) {
      for (int b = 0; b < 4; ++b) {
        const double diag = params.alpha * Me(c, b) + C * params.theta * k * Ke(c, b);
        for (int r = 0; r < 3; ++r) {
          kkt(3 * w[c] + r, 3 * w[b] + r) += diag;
          for (int q = 0; q < 3; ++q) {
            double cross = 0.0;
            for (int a = 0; a < 4; ++a)
              for (int p = 0; p < 3; ++p) cross += triple_weight(a, b, c) * levi_civita(r, p, q) * m[w[a]][p];
            kkt(3 * w[c] + r, 3 * w[b] + q) += g.volume * cross;
          }
          rhs(3 * w[c] + r) += Me(c, b) * (pim(w[b], r) + f[w[b]][r] + params.c * s[mesh.omega_nodes[w[b]]][r]) -
                               C * Ke(c, b) * m[w[b]][r];
        }
      }
    }
  }
  for (int z = 0; z < nw; ++z)
    for (int r = 0; r < 3; ++r) {
      kkt(3 * nw + z, 3 * z + r) = m[z][r];
      kkt(3 * z + r, 3 * nw + z) = m[z][r];
    }
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);

  OracleStep out;
  out.v = NodalField3(Support::OmegaMagnetic, sol.head(3 * nw));
  out.m_next = NodalField3(Support::OmegaMagnetic, m.data() + k * out.v.data());
  std::vector<Vec3> mp(nw);
  for (int z = 0; z < nw; ++z) mp[z] = out.m_next[z] / out.m_next[z].norm();

  // Spin diffusion: dense 3 na system.
  const double bb = params.beta * params.beta_prime;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(3 * na, 3 * na);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * na);
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const TetGeometry g = tet_geometry(mesh, t);
    const Mat4 Me = element_mass(g);
    const Mat4 Ke = element_stiffness(g);
    const auto& tet = mesh.tets[t];
    const bool magnetic = mesh.tet_region[t] == Region::Magnetic;
    const double D0 = magnetic ? params.D0_magnetic : params.D0_conductor;

    // int m m^T and int m j^T are exact through the mass matrix.
    Mat3 Q = Mat3::Zero(), G = Mat3::Zero();
    if (magnetic) {
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) {
          const Vec3& ma = mp[mesh.omega_index[tet[a]]];
          Q += Me(a, c) * ma * mp[mesh.omega_index[tet[c]]].transpose();
          G += Me(a, c) * ma * j_next[tet[c]].transpose();
        }
    }
    for (int c = 0; c < 4; ++c) {
      for (int bn = 0; bn < 4; ++bn) {
        const double diag = Me(c, bn) / k + D0 * Ke(c, bn) + D0 * params.reaction_scale * Me(c, bn);
        for (int r = 0; r < 3; ++r) {
          S(3 * tet[c] + r, 3 * tet[bn] + r) += diag;
          b(3 * tet[c] + r) += Me(c, bn) / k * s[tet[bn]][r];
          if (!magnetic) continue;
          for (int q = 0; q < 3; ++q) {
            double val = -bb * D0 * Ke(c, bn) / g.volume * Q(r, q);
            // (z1 x m) . z2 with z1 = e_q l_b, z2 = e_r l_c
            for (int a = 0; a < 4; ++a)
              for (int p = 0; p < 3; ++p)
                val += D0 * params.precession_scale * g.volume * triple_weight(a, bn, c) * levi_civita(r, q, p) *
                       mp[mesh.omega_index[tet[a]]][p];
            S(3 * tet[c] + r, 3 * tet[bn] + q) += val;
          }
        }
      }
      if (magnetic) b.segment<3>(3 * tet[c]) += params.beta * G * g.grad[c];
    }
  }
  for (const auto& fc : mesh.boundary_facets) {
    if (fc.tag != FacetTag::Shared) continue;
    const Vec3 p0 = mesh.nodes[fc.nodes[0]];
    Vec3 nrm = (mesh.nodes[fc.nodes[1]] - p0).cross(mesh.nodes[fc.nodes[2]] - p0);
    const double area = 0.5 * nrm.norm();
    nrm.normalize();
    Vec3 centroid = Vec3::Zero();
    for (Index v : mesh.tets[fc.tet]) centroid += 0.25 * mesh.nodes[v];
    if (nrm.dot(centroid - p0) > 0.0) nrm = -nrm;
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        for (int bn = 0; bn < 3; ++bn) {
          const double w = area * facet_triple_weight(a, bn, c) * j_next[fc.nodes[a]].dot(nrm);
          b.segment<3>(3 * fc.nodes[c]) -= params.beta * w * mp[mesh.omega_index[fc.nodes[bn]]];
        }
  }
  out.s_next = NodalField3(Support::OmegaAll, S.partialPivLu().solve(b));
  return out;
}

}  // namespace sdllg
