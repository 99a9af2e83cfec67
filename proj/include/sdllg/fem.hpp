#pragma once

#include "sdllg/mesh.hpp"
#include "sdllg/types.hpp"

#include <Eigen/Dense>

#include <functional>
#include <thread>

namespace sdllg {

/// Node set a nodal field lives on: all nodes of Omega, or the omega nodes
/// (numbered by their position in TetMesh::omega_nodes).
enum class Support : std::uint8_t { OmegaAll, OmegaMagnetic };

/// P1 vector field: one 3-vector per node of its support, stored interleaved
/// (x0 y0 z0 x1 y1 z1 ...).
class NodalField3 {
 public:
  using Rows = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>>;
  using ConstRows = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>>;

  NodalField3() = default;
  NodalField3(Support support, Index n) : support_(support), data_(Eigen::VectorXd::Zero(3 * Eigen::Index(n))) {}
  NodalField3(Support support, Eigen::VectorXd data);

  Support support() const { return support_; }
  Index size() const { return static_cast<Index>(data_.size() / 3); }

  Vec3 operator[](Index i) const { return data_.segment<3>(3 * Eigen::Index(i)); }
  void set(Index i, const Vec3& v) { data_.segment<3>(3 * Eigen::Index(i)) = v; }

  const Eigen::VectorXd& data() const { return data_; }
  Eigen::VectorXd& data() { return data_; }

  /// N x 3 view, one row per node.
  ConstRows rows() const { return ConstRows(data_.data(), size(), 3); }
  Rows rows() { return Rows(data_.data(), size(), 3); }

  bool all_finite() const { return data_.allFinite(); }

 private:
  Support support_ = Support::OmegaAll;
  Eigen::VectorXd data_;
};

/// Per-tet constants of the P1 basis.
struct TetGeometry {
  double volume;
  std::array<Vec3, 4> grad;  ///< gradients of the barycentric coordinates
};

TetGeometry tet_geometry(const std::array<Vec3, 4>& x);
TetGeometry tet_geometry(const TetMesh& mesh, Index tet);

using Mat4 = Eigen::Matrix4d;

/// K_ab = int grad(l_a) . grad(l_b).
Mat4 element_stiffness(const TetGeometry& g);
Mat4 element_stiffness(const std::array<Vec3, 4>& x);

/// M_ab = V (1 + delta_ab) / 20.
Mat4 element_mass(const TetGeometry& g);
Mat4 element_mass(const std::array<Vec3, 4>& x);

/// int l_a l_b l_c over the tet divided by its volume: 1/20 if a=b=c,
/// 1/60 if exactly two coincide, 1/120 if all distinct.
double triple_weight(int a, int b, int c);

/// Same for a triangle, divided by its area: 1/10, 1/30, 1/60.
double facet_triple_weight(int a, int b, int c);

enum class RegionFilter : std::uint8_t { All, Magnetic };

inline Support support_of(RegionFilter f) {
  return f == RegionFilter::All ? Support::OmegaAll : Support::OmegaMagnetic;
}

void set_assembly_threads(int n);
int assembly_threads();

/// Runs `fill(tet, out)` over the tets passing the filter, split across the
/// assembly threads. Triplets are concatenated in tet order, so the result is
/// independent of the thread count.
void for_each_tet_triplets(const TetMesh& mesh, RegionFilter filter,
                           const std::function<void(Index, std::vector<Triplet>&)>& fill,
                           std::vector<Triplet>& out);

using ElementKernel = std::function<Mat4(const TetGeometry&)>;
using ElementCoefficient = std::function<double(Index tet)>;

/// Global scalar matrix sum_T coeff(T) * kernel(T). Magnetic filter restricts
/// to magnetic tets and numbers rows/columns by omega node position.
SparseMatrix assemble(const TetMesh& mesh, RegionFilter filter, const ElementKernel& kernel,
                      const ElementCoefficient& coefficient);

/// Mesh plus cached geometry and the scalar mass/stiffness matrices on both
/// node sets.
class FemSpace {
 public:
  explicit FemSpace(TetMesh mesh);

  const TetMesh& mesh() const { return mesh_; }
  const TetGeometry& geometry(Index tet) const { return geom_[tet]; }
  Index size(Support s) const { return s == Support::OmegaAll ? mesh_.num_nodes() : mesh_.num_omega_nodes(); }

  /// Index of a global node within the given support (-1 if absent).
  Index local_index(Support s, Index global) const {
    return s == Support::OmegaAll ? global : mesh_.omega_index[global];
  }

  const SparseMatrix& mass(Support s) const { return s == Support::OmegaAll ? mass_all_ : mass_omega_; }
  const SparseMatrix& stiffness(Support s) const { return s == Support::OmegaAll ? stiff_all_ : stiff_omega_; }

  double region_volume(RegionFilter f) const;

 private:
  TetMesh mesh_;
  std::vector<TetGeometry> geom_;
  SparseMatrix mass_all_, stiff_all_, mass_omega_, stiff_omega_;
};

/// sum over components of a_c^T A b_c for fields on the same support.
double component_form(const SparseMatrix& A, const NodalField3& a, const NodalField3& b);

/// (a, b)_{L2} over the support's region.
double l2_inner(const FemSpace& space, const NodalField3& a, const NodalField3& b);
double l2_norm_sq(const FemSpace& space, const NodalField3& a);
/// (grad a, grad b)_{L2}.
double grad_inner(const FemSpace& space, const NodalField3& a, const NodalField3& b);
double grad_norm_sq(const FemSpace& space, const NodalField3& a);
double h1_norm_sq(const FemSpace& space, const NodalField3& a);

NodalField3 nodal_interpolate(const TetMesh& mesh, Support support, const std::function<Vec3(const Vec3&)>& fn);

/// Nodewise normalisation of a field whose nodal moduli are all >= 1.
/// Throws ConstraintViolation if a modulus is below 1 - 1e-12.
NodalField3 nodal_projection(const NodalField3& field);

NodalField3 restrict_to_omega(const TetMesh& mesh, const NodalField3& field);
NodalField3 extend_by_zero(const TetMesh& mesh, const NodalField3& field);

/// Value of a P1 field at barycentric coordinates inside a tet.
Vec3 evaluate_in_tet(const TetMesh& mesh, const NodalField3& field, Index tet, const std::array<double, 4>& bary);

struct DiscreteNormCheck {
  double lr_norm_pow;  ///< ||w||_{L^r}^r
  double nodal_sum;    ///< h^3 sum_z |w(z)|^r
  double ratio;        ///< nodal_sum / lr_norm_pow
};

DiscreteNormCheck discrete_norm_check(const FemSpace& space, const NodalField3& field, double r);

}  // namespace sdllg
