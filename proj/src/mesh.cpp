#include "sdllg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sdllg {

namespace {

using FacetKey = std::array<Index, 3>;

FacetKey sorted_facet(Index a, Index b, Index c) {
  FacetKey f{a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

// Local facets of a tet, each listed with the opposite vertex last.
constexpr std::array<std::array<int, 4>, 4> kFacets = {{
    {1, 2, 3, 0},
    {0, 2, 3, 1},
    {0, 1, 3, 2},
    {0, 1, 2, 3},
}};

struct FacetUse {
  Index tet;
  int count;
  Index second_tet;
};

std::map<FacetKey, FacetUse> collect_facets(const TetMesh& mesh) {
  std::map<FacetKey, FacetUse> uses;
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets[t];
    for (const auto& lf : kFacets) {
      auto key = sorted_facet(tet[lf[0]], tet[lf[1]], tet[lf[2]]);
      auto [it, inserted] = uses.try_emplace(key, FacetUse{t, 1, -1});
      if (!inserted) {
        if (it->second.count == 1) it->second.second_tet = t;
        ++it->second.count;
      }
    }
  }
  return uses;
}

double tet_diameter(const TetMesh& mesh, Index t) {
  const auto& tet = mesh.tets[t];
  double d = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      d = std::max(d, (mesh.nodes[tet[a]] - mesh.nodes[tet[b]]).norm());
  return d;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

double signed_volume(const TetMesh& mesh, Index t) {
  const auto& tet = mesh.tets[t];
  const Vec3& x0 = mesh.nodes[tet[0]];
  return (mesh.nodes[tet[1]] - x0).dot((mesh.nodes[tet[2]] - x0).cross(mesh.nodes[tet[3]] - x0)) /
         6.0;
}

double region_volume(const TetMesh& mesh, Region region) {
  double v = 0.0;
  for (Index t = 0; t < mesh.num_tets(); ++t)
    if (mesh.tet_region[t] == region) v += signed_volume(mesh, t);
  return v;
}

void finalize_mesh(TetMesh& mesh) {
  const auto uses = collect_facets(mesh);
  mesh.boundary_facets.clear();
  for (const auto& [key, use] : uses) {
    if (use.count == 1) {
      FacetTag tag = mesh.is_magnetic(use.tet) ? FacetTag::Shared : FacetTag::OuterOnly;
      mesh.boundary_facets.push_back({key, tag, use.tet});
    } else if (use.count == 2) {
      const bool m0 = mesh.is_magnetic(use.tet);
      const bool m1 = mesh.is_magnetic(use.second_tet);
      if (m0 != m1)
        mesh.boundary_facets.push_back({key, FacetTag::InterfaceOnly, m0 ? use.tet : use.second_tet});
    }
  }

  mesh.omega_index.assign(mesh.nodes.size(), -1);
  std::vector<char> touched(mesh.nodes.size(), 0);
  for (Index t = 0; t < mesh.num_tets(); ++t)
    if (mesh.is_magnetic(t))
      for (Index n : mesh.tets[t]) touched[n] = 1;
  mesh.omega_nodes.clear();
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    if (touched[n]) {
      mesh.omega_index[n] = static_cast<Index>(mesh.omega_nodes.size());
      mesh.omega_nodes.push_back(n);
    }
  }
}

TetMesh build_multilayer_mesh(const std::vector<LayerSpec>& layers, double width, double depth,
                              Resolution res) {
  if (layers.empty()) throw GeometryError("layer stack is empty");
  if (!(width > 0.0) || !(depth > 0.0)) throw GeometryError("cross-section must be positive");
  if (res.nx < 1 || res.ny < 1 || res.nz < 1) throw GeometryError("resolution must be >= 1 per axis");
  double total = 0.0;
  bool any_magnetic = false;
  for (const auto& l : layers) {
    if (!(l.thickness > 0.0)) throw GeometryError("layer thickness must be positive");
    total += l.thickness;
    any_magnetic |= l.region == Region::Magnetic;
  }
  if (!any_magnetic) throw GeometryError("at least one magnetic layer is required");

  // Uniform z spacing; every layer must span a whole number of cells so the
  // interfaces lie on mesh planes.
  const double dz = total / res.nz;
  std::vector<int> layer_cells;
  int sum_cells = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const double ratio = layers[i].thickness / dz;
    const int cells = static_cast<int>(std::lround(ratio));
    if (cells < 1) {
      std::ostringstream os;
      os << "layer " << i << " gets zero cells at resolution nz=" << res.nz;
      throw GeometryError(os.str());
    }
    if (std::abs(ratio - cells) > 1e-9 * std::max(1.0, ratio)) {
      std::ostringstream os;
      os << "layer " << i << " thickness is not a multiple of dz=" << dz;
      throw GeometryError(os.str());
    }
    layer_cells.push_back(cells);
    sum_cells += cells;
  }
  if (sum_cells != res.nz) throw GeometryError("layer cells do not add up to nz");

  TetMesh mesh;
  std::vector<double> zplanes{0.0};
  std::vector<Region> cell_region;
  double z = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const double z0 = z;
    for (int c = 0; c < layer_cells[i]; ++c) {
      cell_region.push_back(layers[i].region);
      zplanes.push_back(c + 1 == layer_cells[i] ? z0 + layers[i].thickness : z0 + (c + 1) * dz);
    }
    z = z0 + layers[i].thickness;
    mesh.slabs.push_back({z0, z, layers[i].region});
  }

  const int nx = res.nx, ny = res.ny, nz = res.nz;
  auto node_id = [&](int i, int j, int k) { return static_cast<Index>((k * (ny + 1) + j) * (nx + 1) + i); };
  mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.nodes.emplace_back(width * i / nx, depth * j / ny, zplanes[k]);

  // Kuhn paths from corner 0 to corner 7 through the six axis permutations.
  constexpr std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
  }};
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        for (const auto& p : perms) {
          std::array<int, 3> off{0, 0, 0};
          std::array<Index, 4> tet;
          tet[0] = node_id(i, j, k);
          for (int s = 0; s < 3; ++s) {
            off[p[s]] = 1;
            tet[s + 1] = node_id(i + off[0], j + off[1], k + off[2]);
          }
          mesh.tets.push_back(tet);
          mesh.tet_region.push_back(cell_region[k]);
          if (signed_volume(mesh, mesh.num_tets() - 1) < 0.0) std::swap(mesh.tets.back()[2], mesh.tets.back()[3]);
        }
      }
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

std::string to_string(MeshInvariant inv) {
  switch (inv) {
    case MeshInvariant::NegativeVolume: return "negative volume";
    case MeshInvariant::NonConforming: return "non-conforming";
    case MeshInvariant::OmegaNotResolved: return "omega not resolved";
    case MeshInvariant::SharedFacetMisplaced: return "shared facet misplaced";
    case MeshInvariant::OmegaNodesInconsistent: return "omega nodes inconsistent";
  }
  return "unknown";
}

std::vector<MeshViolation> validate_mesh(const TetMesh& mesh) {
  std::vector<MeshViolation> out;
  auto report = [&](MeshInvariant inv, std::vector<Index> ents, std::string detail) {
    if (!ents.empty()) out.push_back({inv, std::move(ents), std::move(detail)});
  };

  std::vector<Index> bad;
  for (Index t = 0; t < mesh.num_tets(); ++t)
    if (!(signed_volume(mesh, t) > 0.0)) bad.push_back(t);
  report(MeshInvariant::NegativeVolume, std::move(bad), "tets with non-positive signed volume");

  // Conformity: no facet used more than twice, no duplicated tet, and the
  // boundary surface is closed (every boundary edge is used an even number of
  // times). A hanging node leaves an unmatched edge on the surface.
  const auto uses = collect_facets(mesh);
  std::vector<Index> nonconf;
  std::map<std::array<Index, 2>, int> edge_use;
  for (const auto& [key, use] : uses) {
    if (use.count > 2) nonconf.push_back(use.tet);
    if (use.count == 1) {
      for (int a = 0; a < 3; ++a) {
        std::array<Index, 2> e{key[a], key[(a + 1) % 3]};
        if (e[0] > e[1]) std::swap(e[0], e[1]);
        ++edge_use[e];
      }
    }
  }
  {
    std::map<std::array<Index, 4>, Index> seen;
    for (Index t = 0; t < mesh.num_tets(); ++t) {
      auto s = mesh.tets[t];
      std::sort(s.begin(), s.end());
      if (!seen.try_emplace(s, t).second) nonconf.push_back(t);
    }
  }
  for (const auto& [e, n] : edge_use)
    if (n % 2 != 0) nonconf.push_back(e[0]);
  std::sort(nonconf.begin(), nonconf.end());
  nonconf.erase(std::unique(nonconf.begin(), nonconf.end()), nonconf.end());
  report(MeshInvariant::NonConforming, std::move(nonconf), "facets shared by >2 tets, duplicate tets or open boundary edges");

  // Resolution of omega against the slab geometry.
  if (!mesh.slabs.empty()) {
    std::vector<Index> straddle;
    for (Index t = 0; t < mesh.num_tets(); ++t) {
      double zmin = 1e300, zmax = -1e300;
      for (Index n : mesh.tets[t]) {
        zmin = std::min(zmin, mesh.nodes[n].z());
        zmax = std::max(zmax, mesh.nodes[n].z());
      }
      const double tol = 1e-12 * std::max(1.0, std::abs(zmax));
      bool inside_own = false;
      for (const auto& s : mesh.slabs) {
        if (s.region == mesh.tet_region[t] && zmin >= s.z0 - tol && zmax <= s.z1 + tol) {
          inside_own = true;
          break;
        }
      }
      if (!inside_own) straddle.push_back(t);
    }
    report(MeshInvariant::OmegaNotResolved, std::move(straddle), "tets not contained in a slab of their own region");
  }

  std::vector<Index> misplaced;
  for (Index f = 0; f < static_cast<Index>(mesh.boundary_facets.size()); ++f) {
    const auto& bf = mesh.boundary_facets[f];
    if (bf.tag != FacetTag::Shared) continue;
    auto it = uses.find(sorted_facet(bf.nodes[0], bf.nodes[1], bf.nodes[2]));
    if (it == uses.end() || it->second.count != 1 || !mesh.is_magnetic(it->second.tet)) misplaced.push_back(f);
  }
  report(MeshInvariant::SharedFacetMisplaced, std::move(misplaced), "shared facets not on both boundaries");

  std::vector<Index> inconsistent;
  std::vector<char> touched(mesh.nodes.size(), 0);
  for (Index t = 0; t < mesh.num_tets(); ++t)
    if (mesh.is_magnetic(t))
      for (Index n : mesh.tets[t]) touched[n] = 1;
  std::vector<Index> expected;
  for (Index n = 0; n < mesh.num_nodes(); ++n)
    if (touched[n]) expected.push_back(n);
  if (expected != mesh.omega_nodes) {
    for (Index n : expected)
      if (!std::binary_search(mesh.omega_nodes.begin(), mesh.omega_nodes.end(), n)) inconsistent.push_back(n);
    for (Index n : mesh.omega_nodes)
      if (!std::binary_search(expected.begin(), expected.end(), n)) inconsistent.push_back(n);
    if (inconsistent.empty()) inconsistent.push_back(-1);
  }
  report(MeshInvariant::OmegaNodesInconsistent, std::move(inconsistent), "omega_nodes differs from magnetic incidence");
  return out;
}

MeshSize mesh_size(const TetMesh& mesh) {
  MeshSize ms{0.0, 0.0};
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets[t];
    const double diam = tet_diameter(mesh, t);
    double area = 0.0;
    for (const auto& lf : kFacets)
      area += triangle_area(mesh.nodes[tet[lf[0]]], mesh.nodes[tet[lf[1]]], mesh.nodes[tet[lf[2]]]);
    const double inradius = 3.0 * std::abs(signed_volume(mesh, t)) / area;
    ms.h = std::max(ms.h, diam);
    ms.shape_regularity = std::max(ms.shape_regularity, diam / inradius);
  }
  return ms;
}

}  // namespace sdllg
