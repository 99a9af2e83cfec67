#include "sdllg/spin_step.hpp"

#include "sdllg/quadrature.hpp"

#include <algorithm>

namespace sdllg {

namespace {

// int_T a b^T for P1 fields a, b given by their nodal values, via the degree-2
// rule (exact for the quadratic integrand).
Mat3 tet_outer_integral(const TetGeometry& g, const std::array<Vec3, 4>& a, const std::array<Vec3, 4>& b) {
  const QuadratureRule& rule = tet_rule_degree2();
  Mat3 acc = Mat3::Zero();
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    Vec3 aq = Vec3::Zero(), bq = Vec3::Zero();
    for (int i = 0; i < 4; ++i) {
      aq += rule.points[q][i] * a[i];
      bq += rule.points[q][i] * b[i];
    }
    acc += rule.weights[q] * aq * bq.transpose();
  }
  return g.volume * acc;
}

}  // namespace

Vec3 facet_outward_normal(const TetMesh& mesh, const BoundaryFacet& facet) {
  const Vec3& x0 = mesh.nodes[facet.nodes[0]];
  Vec3 n = (mesh.nodes[facet.nodes[1]] - x0).cross(mesh.nodes[facet.nodes[2]] - x0).normalized();
  const auto& tet = mesh.tets[facet.tet];
  for (Index v : tet) {
    if (std::find(facet.nodes.begin(), facet.nodes.end(), v) == facet.nodes.end()) {
      if (n.dot(mesh.nodes[v] - x0) > 0.0) n = -n;
      break;
    }
  }
  return n;
}

SparseMatrix assemble_spin_form(const FemSpace& space, const NodalField3& m_proj, const MaterialParams& params,
                                double k, SpinFormTerms terms) {
  if (!(k > 0.0)) throw ConfigError("time step k must be positive");
  if (!(params.beta * params.beta_prime < 1.0)) throw ConfigError("beta * beta_prime >= 1: spin form not coercive");
  if (!(params.D_star() > 0.0)) throw ConfigError("D0 must be bounded below by a positive D_*");
  const TetMesh& mesh = space.mesh();
  if (m_proj.size() != mesh.num_omega_nodes()) throw std::invalid_argument("m_proj must live on the omega nodes");

  const double bb = params.beta * params.beta_prime;
  std::vector<Triplet> trips;
  for_each_tet_triplets(
      mesh, RegionFilter::All,
      [&](Index t, std::vector<Triplet>& out) {
        const TetGeometry& g = space.geometry(t);
        const auto& tet = mesh.tets[t];
        const double D0 = params.D0(mesh.tet_region[t]);
        const Mat4 Me = element_mass(g);
        const Mat4 Ke = element_stiffness(g);
        const bool magnetic = mesh.is_magnetic(t);

        std::array<Vec3, 4> mv;
        std::array<Mat3, 4> mx;
        Mat3 Q = Mat3::Zero();
        if (magnetic) {
          for (int a = 0; a < 4; ++a) {
            mv[a] = m_proj[mesh.omega_index[tet[a]]];
            mx[a] = cross_matrix(mv[a]);
          }
          if (terms.anisotropic) Q = tet_outer_integral(g, mv, mv) / g.volume;
        }

        for (int c = 0; c < 4; ++c) {
          for (int b = 0; b < 4; ++b) {
            double scalar = 0.0;
            if (terms.time) scalar += Me(c, b) / k;
            if (terms.diffusion) scalar += D0 * Ke(c, b);
            if (terms.reaction) scalar += D0 * params.reaction_scale * Me(c, b);
            Mat3 block = scalar * Mat3::Identity();
            if (magnetic) {
              // Ke already carries the volume; Q is the mean of m m^T.
              if (terms.anisotropic) block -= bb * D0 * Ke(c, b) * Q;
              if (terms.cross) {
                // (z1 x m) . z2 = -(m x z1) . z2
                for (int a = 0; a < 4; ++a)
                  block -= D0 * params.precession_scale * g.volume * triple_weight(a, b, c) * mx[a];
              }
            }
            for (int r = 0; r < 3; ++r)
              for (int q = 0; q < 3; ++q) out.emplace_back(3 * tet[c] + r, 3 * tet[b] + q, block(r, q));
          }
        }
      },
      trips);
  const Index n = 3 * mesh.num_nodes();
  SparseMatrix A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

Eigen::VectorXd assemble_current_load(const FemSpace& space, const NodalField3& m_proj, const NodalField3& j,
                                      const MaterialParams& params) {
  const TetMesh& mesh = space.mesh();
  if (j.size() != mesh.num_nodes()) throw std::invalid_argument("current density must live on all nodes");
  Eigen::VectorXd load = Eigen::VectorXd::Zero(3 * Eigen::Index(mesh.num_nodes()));
  if (params.beta == 0.0) return load;

  // beta (m (x) j, grad zeta)_omega: for zeta = e_p l_c the integrand is
  // m_p (j . grad l_c), so the nodal load is beta (int m j^T) grad l_c.
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    if (!mesh.is_magnetic(t)) continue;
    const TetGeometry& g = space.geometry(t);
    const auto& tet = mesh.tets[t];
    std::array<Vec3, 4> mv, jv;
    for (int a = 0; a < 4; ++a) {
      mv[a] = m_proj[mesh.omega_index[tet[a]]];
      jv[a] = j[tet[a]];
    }
    const Mat3 G = tet_outer_integral(g, mv, jv);
    for (int c = 0; c < 4; ++c) load.segment<3>(3 * tet[c]) += params.beta * G * g.grad[c];
  }

  // -beta (j . n, m . zeta) on facets shared by both boundaries; exact
  // integration of the three-fold P1 product.
  for (const auto& f : mesh.boundary_facets) {
    if (f.tag != FacetTag::Shared) continue;
    const Vec3 n = facet_outward_normal(mesh, f);
    const Vec3& x0 = mesh.nodes[f.nodes[0]];
    const double area = 0.5 * (mesh.nodes[f.nodes[1]] - x0).cross(mesh.nodes[f.nodes[2]] - x0).norm();
    std::array<double, 3> jn;
    std::array<Vec3, 3> mv;
    for (int a = 0; a < 3; ++a) {
      jn[a] = j[f.nodes[a]].dot(n);
      mv[a] = m_proj[mesh.omega_index[f.nodes[a]]];
    }
    for (int c = 0; c < 3; ++c) {
      Vec3 acc = Vec3::Zero();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += facet_triple_weight(a, b, c) * jn[a] * mv[b];
      load.segment<3>(3 * f.nodes[c]) -= params.beta * area * acc;
    }
  }
  return load;
}

Eigen::VectorXd assemble_spin_rhs(const FemSpace& space, const NodalField3& s_prev, const NodalField3& m_proj,
                                  const NodalField3& j_next, const MaterialParams& params, double k) {
  if (!(k > 0.0)) throw ConfigError("time step k must be positive");
  const SparseMatrix& M = space.mass(Support::OmegaAll);
  const Eigen::MatrixXd Ms = M * s_prev.rows() / k;
  Eigen::VectorXd rhs(3 * Eigen::Index(Ms.rows()));
  for (Eigen::Index z = 0; z < Ms.rows(); ++z) rhs.segment<3>(3 * z) = Ms.row(z).transpose();
  return rhs + assemble_current_load(space, m_proj, j_next, params);
}

SpinSystem assemble_spin_system(const FemSpace& space, const NodalField3& s_prev, const NodalField3& m_proj,
                                const NodalField3& j_next, const MaterialParams& params, double k) {
  return {assemble_spin_form(space, m_proj, params, k), assemble_spin_rhs(space, s_prev, m_proj, j_next, params, k)};
}

NodalField3 solve_s(const SpinSystem& system, const SolverConfig& cfg, SolveStats* stats) {
  return NodalField3(Support::OmegaAll, solve_krylov(system.matrix, system.rhs, cfg, stats));
}

}  // namespace sdllg
