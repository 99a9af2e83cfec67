#include "sdllg/fem.hpp"

#include "sdllg/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace sdllg {

NodalField3::NodalField3(Support support, Eigen::VectorXd data) : support_(support), data_(std::move(data)) {
  if (data_.size() % 3 != 0) throw std::invalid_argument("nodal field length must be a multiple of 3");
}

TetGeometry tet_geometry(const std::array<Vec3, 4>& x) {
  Mat3 J;
  J.col(0) = x[1] - x[0];
  J.col(1) = x[2] - x[0];
  J.col(2) = x[3] - x[0];
  const double det = J.determinant();
  const double scale = std::max({J.col(0).norm(), J.col(1).norm(), J.col(2).norm()});
  if (!(det > 1e-14 * scale * scale * scale)) {
    std::ostringstream os;
    os << "degenerate or inverted tetrahedron (det=" << det << ")";
    throw GeometryError(os.str());
  }
  TetGeometry g;
  g.volume = det / 6.0;
  const Mat3 inv = J.inverse();
  for (int a = 1; a < 4; ++a) g.grad[a] = inv.row(a - 1).transpose();
  g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
  return g;
}

TetGeometry tet_geometry(const TetMesh& mesh, Index tet) {
  const auto& t = mesh.tets[tet];
  return tet_geometry({mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]], mesh.nodes[t[3]]});
}

Mat4 element_stiffness(const TetGeometry& g) {
  Mat4 K;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) K(a, b) = g.volume * g.grad[a].dot(g.grad[b]);
  return K;
}

Mat4 element_stiffness(const std::array<Vec3, 4>& x) { return element_stiffness(tet_geometry(x)); }

Mat4 element_mass(const TetGeometry& g) {
  Mat4 M = Mat4::Constant(g.volume / 20.0);
  M.diagonal().setConstant(g.volume / 10.0);
  return M;
}

Mat4 element_mass(const std::array<Vec3, 4>& x) { return element_mass(tet_geometry(x)); }

double triple_weight(int a, int b, int c) {
  if (a == b && b == c) return 1.0 / 20.0;
  if (a == b || b == c || a == c) return 1.0 / 60.0;
  return 1.0 / 120.0;
}

double facet_triple_weight(int a, int b, int c) {
  if (a == b && b == c) return 1.0 / 10.0;
  if (a == b || b == c || a == c) return 1.0 / 30.0;
  return 1.0 / 60.0;
}

namespace {
std::atomic<int> g_threads{1};
}

void set_assembly_threads(int n) { g_threads = std::max(1, n); }
int assembly_threads() { return g_threads; }

void for_each_tet_triplets(const TetMesh& mesh, RegionFilter filter,
                           const std::function<void(Index, std::vector<Triplet>&)>& fill,
                           std::vector<Triplet>& out) {
  const Index n = mesh.num_tets();
  const int nthreads = std::min<int>(assembly_threads(), std::max<Index>(1, n / 64));
  auto run_range = [&](Index begin, Index end, std::vector<Triplet>& buf) {
    for (Index t = begin; t < end; ++t) {
      if (filter == RegionFilter::Magnetic && !mesh.is_magnetic(t)) continue;
      fill(t, buf);
    }
  };
  if (nthreads <= 1) {
    run_range(0, n, out);
    return;
  }
  std::vector<std::vector<Triplet>> bufs(nthreads);
  std::vector<std::thread> workers;
  const Index chunk = (n + nthreads - 1) / nthreads;
  for (int w = 0; w < nthreads; ++w) {
    const Index b = w * chunk, e = std::min<Index>(n, b + chunk);
    workers.emplace_back([&, b, e, w] { run_range(b, e, bufs[w]); });
  }
  for (auto& th : workers) th.join();
  for (auto& b : bufs) out.insert(out.end(), b.begin(), b.end());
}

SparseMatrix assemble(const TetMesh& mesh, RegionFilter filter, const ElementKernel& kernel,
                      const ElementCoefficient& coefficient) {
  const bool omega = filter == RegionFilter::Magnetic;
  const Index n = omega ? mesh.num_omega_nodes() : mesh.num_nodes();
  std::vector<Triplet> trips;
  for_each_tet_triplets(
      mesh, filter,
      [&](Index t, std::vector<Triplet>& out) {
        const Mat4 Ke = coefficient(t) * kernel(tet_geometry(mesh, t));
        std::array<Index, 4> idx;
        for (int a = 0; a < 4; ++a) idx[a] = omega ? mesh.omega_index[mesh.tets[t][a]] : mesh.tets[t][a];
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) out.emplace_back(idx[a], idx[b], Ke(a, b));
      },
      trips);
  SparseMatrix A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

FemSpace::FemSpace(TetMesh mesh) : mesh_(std::move(mesh)) {
  geom_.reserve(mesh_.tets.size());
  for (Index t = 0; t < mesh_.num_tets(); ++t) geom_.push_back(tet_geometry(mesh_, t));
  auto one = [](Index) { return 1.0; };
  auto mass = [](const TetGeometry& g) { return element_mass(g); };
  auto stiff = [](const TetGeometry& g) { return element_stiffness(g); };
  mass_all_ = assemble(mesh_, RegionFilter::All, mass, one);
  stiff_all_ = assemble(mesh_, RegionFilter::All, stiff, one);
  mass_omega_ = assemble(mesh_, RegionFilter::Magnetic, mass, one);
  stiff_omega_ = assemble(mesh_, RegionFilter::Magnetic, stiff, one);
}

double FemSpace::region_volume(RegionFilter f) const {
  double v = 0.0;
  for (Index t = 0; t < mesh_.num_tets(); ++t)
    if (f == RegionFilter::All || mesh_.is_magnetic(t)) v += geom_[t].volume;
  return v;
}

double component_form(const SparseMatrix& A, const NodalField3& a, const NodalField3& b) {
  const Eigen::MatrixXd Ab = A * b.rows();
  return a.rows().cwiseProduct(Ab).sum();
}

double l2_inner(const FemSpace& space, const NodalField3& a, const NodalField3& b) {
  return component_form(space.mass(a.support()), a, b);
}
double l2_norm_sq(const FemSpace& space, const NodalField3& a) { return l2_inner(space, a, a); }
double grad_inner(const FemSpace& space, const NodalField3& a, const NodalField3& b) {
  return component_form(space.stiffness(a.support()), a, b);
}
double grad_norm_sq(const FemSpace& space, const NodalField3& a) { return grad_inner(space, a, a); }
double h1_norm_sq(const FemSpace& space, const NodalField3& a) { return l2_norm_sq(space, a) + grad_norm_sq(space, a); }

NodalField3 nodal_interpolate(const TetMesh& mesh, Support support, const std::function<Vec3(const Vec3&)>& fn) {
  if (support == Support::OmegaAll) {
    NodalField3 f(support, mesh.num_nodes());
    for (Index z = 0; z < mesh.num_nodes(); ++z) f.set(z, fn(mesh.nodes[z]));
    return f;
  }
  NodalField3 f(support, mesh.num_omega_nodes());
  for (Index i = 0; i < mesh.num_omega_nodes(); ++i) f.set(i, fn(mesh.nodes[mesh.omega_nodes[i]]));
  return f;
}

NodalField3 nodal_projection(const NodalField3& field) {
  NodalField3 out(field.support(), field.size());
  for (Index z = 0; z < field.size(); ++z) {
    const Vec3 v = field[z];
    const double n = v.norm();
    if (!(n >= 1.0 - 1e-12)) {
      std::ostringstream os;
      os << "nodal projection needs |phi(z)| >= 1, node " << z << " has " << n;
      throw ConstraintViolation(os.str());
    }
    out.set(z, v / n);
  }
  return out;
}

NodalField3 restrict_to_omega(const TetMesh& mesh, const NodalField3& field) {
  NodalField3 out(Support::OmegaMagnetic, mesh.num_omega_nodes());
  for (Index i = 0; i < mesh.num_omega_nodes(); ++i) out.set(i, field[mesh.omega_nodes[i]]);
  return out;
}

NodalField3 extend_by_zero(const TetMesh& mesh, const NodalField3& field) {
  NodalField3 out(Support::OmegaAll, mesh.num_nodes());
  for (Index i = 0; i < mesh.num_omega_nodes(); ++i) out.set(mesh.omega_nodes[i], field[i]);
  return out;
}

Vec3 evaluate_in_tet(const TetMesh& mesh, const NodalField3& field, Index tet, const std::array<double, 4>& bary) {
  Vec3 v = Vec3::Zero();
  const bool omega = field.support() == Support::OmegaMagnetic;
  for (int a = 0; a < 4; ++a) {
    const Index g = mesh.tets[tet][a];
    v += bary[a] * field[omega ? mesh.omega_index[g] : g];
  }
  return v;
}

DiscreteNormCheck discrete_norm_check(const FemSpace& space, const NodalField3& field, double r) {
  if (!(r >= 1.0)) throw DomainError("discrete_norm_check needs r >= 1");
  const TetMesh& mesh = space.mesh();
  static const QuadratureRule rule = tet_rule_grundmann_moeller(4);
  const bool omega = field.support() == Support::OmegaMagnetic;
  double lr = 0.0;
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    if (omega && !mesh.is_magnetic(t)) continue;
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q)
      acc += rule.weights[q] * std::pow(evaluate_in_tet(mesh, field, t, rule.points[q]).norm(), r);
    lr += space.geometry(t).volume * acc;
  }
  const double h = mesh_size(mesh).h;
  double nodal = 0.0;
  for (Index z = 0; z < field.size(); ++z) nodal += std::pow(field[z].norm(), r);
  nodal *= h * h * h;
  return {lr, nodal, nodal / lr};
}

}  // namespace sdllg
