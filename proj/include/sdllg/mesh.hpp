#pragma once

#include "sdllg/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace sdllg {

enum class Region : std::uint8_t { Magnetic, Conductor };

/// Boundary facet classification.
///  OuterOnly: on the boundary of Omega but not of omega.
///  InterfaceOnly: on the boundary of omega, interior to Omega.
///  Shared: on both boundaries (the facets carrying the current boundary term).
enum class FacetTag : std::uint8_t { OuterOnly, InterfaceOnly, Shared };

struct BoundaryFacet {
  std::array<Index, 3> nodes;
  FacetTag tag;
  /// Tet owning the facet. For interface facets this is the magnetic side.
  Index tet;
};

/// Horizontal slab [z0, z1] of the layer stack; the geometric definition of
/// the regions, kept with the mesh so resolution of omega can be checked.
struct Slab {
  double z0;
  double z1;
  Region region;
};

struct TetMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<Index, 4>> tets;
  std::vector<Region> tet_region;
  std::vector<BoundaryFacet> boundary_facets;
  /// Sorted global indices of nodes touching a magnetic tet.
  std::vector<Index> omega_nodes;
  /// Global node index -> position in omega_nodes, or -1.
  std::vector<Index> omega_index;
  std::vector<Slab> slabs;

  Index num_nodes() const { return static_cast<Index>(nodes.size()); }
  Index num_tets() const { return static_cast<Index>(tets.size()); }
  Index num_omega_nodes() const { return static_cast<Index>(omega_nodes.size()); }
  bool is_magnetic(Index t) const { return tet_region[t] == Region::Magnetic; }
};

struct LayerSpec {
  double thickness;
  Region region;
};

struct Resolution {
  int nx = 1;
  int ny = 1;
  int nz = 1;
};

/// Structured cuboid mesh of a layer stack along z, each hex cell split into
/// six Kuhn tetrahedra sharing the (0,0,0)-(1,1,1) diagonal.
TetMesh build_multilayer_mesh(const std::vector<LayerSpec>& layers, double width, double depth,
                              Resolution resolution);

/// Fills boundary_facets, omega_nodes and omega_index from nodes, tets and
/// tet_region. Used by the generator and by hand-built meshes in tests.
void finalize_mesh(TetMesh& mesh);

enum class MeshInvariant {
  NegativeVolume,
  NonConforming,
  OmegaNotResolved,
  SharedFacetMisplaced,
  OmegaNodesInconsistent,
};

std::string to_string(MeshInvariant inv);

struct MeshViolation {
  MeshInvariant invariant;
  /// Offending tets, facets or nodes (meaning depends on the invariant).
  std::vector<Index> entities;
  std::string detail;
};

/// Empty iff every mesh invariant holds. One entry per broken invariant.
std::vector<MeshViolation> validate_mesh(const TetMesh& mesh);

struct MeshSize {
  double h;                 ///< max tet diameter
  double shape_regularity;  ///< max diameter / inradius
};

MeshSize mesh_size(const TetMesh& mesh);

double signed_volume(const TetMesh& mesh, Index tet);
double region_volume(const TetMesh& mesh, Region region);

}  // namespace sdllg
