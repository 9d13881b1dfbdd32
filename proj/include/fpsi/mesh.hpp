#pragma once

#include "fpsi/simplex.hpp"
#include "fpsi/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fpsi {

template <int Dim>
struct MarkedFacet {
  std::array<Index, Dim> vertices;
  Marker marker;
};

/// A fluid-structure interface facet with its reference normal pointing from
/// the fluid cell into the solid cell.
template <int Dim>
struct InterfaceFacet {
  std::array<Index, Dim> vertices;
  Index fluid_cell = -1;
  Index solid_cell = -1;
  Vec<Dim> normal;
  double measure = 0.0;
  double h = 0.0;
};

/// An outer boundary facet with its outward reference normal.
template <int Dim>
struct BoundaryFacet {
  std::array<Index, Dim> vertices;
  Index cell = -1;
  Marker marker;
  Vec<Dim> normal;
  double measure = 0.0;
};

/// Conforming simplicial mesh with subdomain tags and facet markers.
///
/// Construction validates every structural invariant and repairs negatively
/// oriented cells; the object is immutable afterwards.
template <int Dim>
class Mesh {
 public:
  static_assert(Dim == 2 || Dim == 3, "only triangles and tetrahedra are supported");
  static constexpr int kDim = Dim;
  static constexpr int kCellVertices = Dim + 1;
  using Topology = SimplexTopology<Dim>;
  using Cell = std::array<Index, Dim + 1>;
  using FacetKey = std::array<Index, Dim>;

  Mesh(std::vector<Vec<Dim>> vertices, std::vector<Cell> cells, std::vector<Subdomain> tags,
       std::vector<MarkedFacet<Dim>> facets)
      : vertices_(std::move(vertices)),
        cells_(std::move(cells)),
        tags_(std::move(tags)),
        facets_(std::move(facets)) {
    validate_and_build();
  }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_cells() const { return static_cast<Index>(cells_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }

  const Vec<Dim>& vertex(Index i) const { return vertices_[i]; }
  const std::vector<Vec<Dim>>& vertices() const { return vertices_; }
  const Cell& cell(Index c) const { return cells_[c]; }
  const std::vector<Cell>& cells() const { return cells_; }
  Subdomain tag(Index c) const { return tags_[c]; }
  const std::vector<MarkedFacet<Dim>>& facets() const { return facets_; }
  const std::array<Index, 2>& edge(Index e) const { return edges_[e]; }
  const std::array<Index, Topology::kEdges>& cell_edges(Index c) const { return cell_edges_[c]; }
  double cell_volume(Index c) const { return volumes_[c]; }

  std::array<Vec<Dim>, Dim + 1> cell_coordinates(Index c) const {
    std::array<Vec<Dim>, Dim + 1> x;
    for (int i = 0; i <= Dim; ++i) x[i] = vertices_[cells_[c][i]];
    return x;
  }

  std::array<Vec<Dim>, Dim> facet_coordinates(const std::array<Index, Dim>& f) const {
    std::array<Vec<Dim>, Dim> x;
    for (int i = 0; i < Dim; ++i) x[i] = vertices_[f[i]];
    return x;
  }

  AffineMap<Dim> cell_map(Index c) const {
    const auto x = cell_coordinates(c);
    return make_affine_map<Dim>(std::span<const Vec<Dim>, Dim + 1>(x));
  }

  Vec<Dim> cell_centroid(Index c) const {
    Vec<Dim> s = Vec<Dim>::Zero();
    for (Index v : cells_[c]) s += vertices_[v];
    return s / (Dim + 1);
  }

  Index count_cells(Subdomain s) const {
    return static_cast<Index>(std::count(tags_.begin(), tags_.end(), s));
  }

  double subdomain_volume(Subdomain s) const {
    double v = 0.0;
    for (Index c = 0; c < num_cells(); ++c)
      if (tags_[c] == s) v += volumes_[c];
    return v;
  }

  double total_volume() const {
    double v = 0.0;
    for (double x : volumes_) v += x;
    return v;
  }

  bool has_marker(Marker m) const {
    return std::any_of(facets_.begin(), facets_.end(),
                       [m](const MarkedFacet<Dim>& f) { return f.marker == m; });
  }

  /// Cells adjacent to the i-th marked facet (one or two entries).
  const std::vector<Index>& facet_cells(Index i) const { return facet_cells_[i]; }

  /// Outer boundary facets carrying marker m, with outward normals.
  std::vector<BoundaryFacet<Dim>> boundary_facets(Marker m) const {
    std::vector<BoundaryFacet<Dim>> out;
    for (Index i = 0; i < static_cast<Index>(facets_.size()); ++i) {
      const auto& f = facets_[i];
      if (f.marker != m || m == Marker::Interface) continue;
      BoundaryFacet<Dim> b;
      b.vertices = f.vertices;
      b.cell = facet_cells_[i].front();
      b.marker = m;
      const auto x = facet_coordinates(f.vertices);
      Vec<Dim> n = facet_normal_direction<Dim>(std::span<const Vec<Dim>, Dim>(x));
      if (n.dot(x[0] - cell_centroid(b.cell)) < 0.0) n = -n;
      b.normal = n.normalized();
      b.measure = facet_measure<Dim>(std::span<const Vec<Dim>, Dim>(x));
      out.push_back(b);
    }
    return out;
  }

  /// Cell containing x (reference configuration), or -1. Linear scan.
  Index locate(const Vec<Dim>& x, double tol = 1e-10) const {
    for (Index c = 0; c < num_cells(); ++c) {
      const Vec<Dim> xi = cell_map(c).to_reference(x);
      if (xi.minCoeff() >= -tol && xi.sum() <= 1.0 + tol) return c;
    }
    return -1;
  }

  static FacetKey facet_key(FacetKey f) {
    std::sort(f.begin(), f.end());
    return f;
  }

 private:
  void validate_and_build() {
    if (tags_.size() != cells_.size())
      throw MeshError("cell tag count does not match cell count");
    if (cells_.empty()) throw MeshError("mesh has no cells");
    const Index nv = num_vertices();

    // Orientation repair and zero-volume detection.
    volumes_.resize(cells_.size());
    double extent = 0.0;
    for (const auto& v : vertices_) extent = std::max(extent, v.cwiseAbs().maxCoeff());
    for (Index c = 0; c < num_cells(); ++c) {
      for (Index v : cells_[c])
        if (v < 0 || v >= nv)
          throw MeshError("cell " + std::to_string(c) + " references vertex out of range");
      double vol = signed_volume<Dim>(std::span<const Vec<Dim>, Dim + 1>(cell_coordinates(c)));
      double scale = 0.0;
      for (int i = 1; i <= Dim; ++i)
        scale = std::max(scale, (vertices_[cells_[c][i]] - vertices_[cells_[c][0]]).norm());
      if (std::abs(vol) <= 1e-14 * std::pow(std::max(scale, 1e-300), Dim))
        throw MeshError("cell " + std::to_string(c) + " has zero volume");
      if (vol < 0.0) {
        std::swap(cells_[c][0], cells_[c][1]);
        vol = -vol;
      }
      volumes_[c] = vol;
    }

    // Facet to cell adjacency.
    std::map<FacetKey, std::vector<Index>> adjacency;
    for (Index c = 0; c < num_cells(); ++c) {
      for (int skip = 0; skip <= Dim; ++skip) {
        FacetKey k{};
        int j = 0;
        for (int i = 0; i <= Dim; ++i)
          if (i != skip) k[j++] = cells_[c][i];
        auto& list = adjacency[facet_key(k)];
        list.push_back(c);
        if (list.size() > 2)
          throw MeshError("non-conforming mesh: a facet is shared by more than two cells");
      }
    }

    // Marked facets: deduplicate, reject contradictions.
    std::map<FacetKey, Marker> marker_of;
    std::vector<MarkedFacet<Dim>> unique;
    for (const auto& f : facets_) {
      for (Index v : f.vertices)
        if (v < 0 || v >= nv) throw MeshError("facet references vertex out of range");
      const FacetKey k = facet_key(f.vertices);
      auto [it, inserted] = marker_of.emplace(k, f.marker);
      if (!inserted) {
        if (it->second != f.marker) throw MeshError("facet with contradictory markers");
        continue;
      }
      if (!adjacency.count(k)) throw MeshError("marked facet is not a facet of any cell");
      unique.push_back(f);
    }
    facets_ = std::move(unique);

    for (const auto& [key, cells] : adjacency) {
      auto m = marker_of.find(key);
      const bool marked = m != marker_of.end();
      if (cells.size() == 2) {
        const bool mixed = tags_[cells[0]] != tags_[cells[1]];
        if (mixed && !marked)
          throw MeshError("missing marker: facet between FLUID and SOLID is not marked GAMMA_FS");
        if (!marked) continue;
        if (m->second == Marker::Interface && !mixed)
          throw MeshError("interface facet not between subdomains");
        if (m->second != Marker::Interface)
          throw MeshError("boundary marker " + std::string(to_string(m->second)) +
                          " on an interior facet");
      } else {
        if (!marked)
          throw MeshError(
              "missing marker on boundary facet (or non-conforming mesh with a hanging node)");
        const Subdomain owner = tags_[cells[0]];
        switch (m->second) {
          case Marker::Interface:
            throw MeshError("interface facet not between subdomains");
          case Marker::FluidInlet:
          case Marker::FluidOutlet:
            if (owner != Subdomain::Fluid)
              throw MeshError(std::string(to_string(m->second)) +
                              " facet does not belong to a FLUID cell");
            break;
          case Marker::SolidFixed:
            if (owner != Subdomain::Solid)
              throw MeshError("GAMMA_S0 facet does not belong to a SOLID cell");
            break;
        }
      }
    }

    facet_cells_.clear();
    facet_cells_.reserve(facets_.size());
    for (const auto& f : facets_) facet_cells_.push_back(adjacency.at(facet_key(f.vertices)));

    // Edge numbering in cell order, local edges in reference order.
    std::map<std::array<Index, 2>, Index> edge_id;
    cell_edges_.resize(cells_.size());
    for (Index c = 0; c < num_cells(); ++c) {
      for (int e = 0; e < Topology::kEdges; ++e) {
        const auto& lv = Topology::kEdgeVertices[e];
        std::array<Index, 2> key{cells_[c][lv[0]], cells_[c][lv[1]]};
        if (key[0] > key[1]) std::swap(key[0], key[1]);
        auto [it, inserted] = edge_id.emplace(key, static_cast<Index>(edges_.size()));
        if (inserted) edges_.push_back(key);
        cell_edges_[c][e] = it->second;
      }
    }
  }

  std::vector<Vec<Dim>> vertices_;
  std::vector<Cell> cells_;
  std::vector<Subdomain> tags_;
  std::vector<MarkedFacet<Dim>> facets_;
  std::vector<std::vector<Index>> facet_cells_;
  std::vector<double> volumes_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, SimplexTopology<Dim>::kEdges>> cell_edges_;
};

/// Local mesh size of an interface facet: its diameter.
template <int Dim>
double facet_local_size(const Mesh<Dim>& mesh, const typename Mesh<Dim>::FacetKey& facet) {
  const auto x = mesh.facet_coordinates(facet);
  return facet_diameter<Dim>(std::span<const Vec<Dim>, Dim>(x));
}

template <int Dim>
double facet_local_size(const Mesh<Dim>& mesh, const InterfaceFacet<Dim>& facet) {
  return facet_local_size(mesh, facet.vertices);
}

/// One entry per GAMMA_FS facet, in marked-facet order.
template <int Dim>
std::vector<InterfaceFacet<Dim>> extract_interface(const Mesh<Dim>& mesh) {
  std::vector<InterfaceFacet<Dim>> out;
  const auto& facets = mesh.facets();
  for (Index i = 0; i < static_cast<Index>(facets.size()); ++i) {
    if (facets[i].marker != Marker::Interface) continue;
    const auto& cells = mesh.facet_cells(i);
    InterfaceFacet<Dim> f;
    f.vertices = facets[i].vertices;
    const bool first_fluid = mesh.tag(cells[0]) == Subdomain::Fluid;
    f.fluid_cell = first_fluid ? cells[0] : cells[1];
    f.solid_cell = first_fluid ? cells[1] : cells[0];
    const auto x = mesh.facet_coordinates(f.vertices);
    Vec<Dim> n = facet_normal_direction<Dim>(std::span<const Vec<Dim>, Dim>(x));
    if (n.dot(mesh.cell_centroid(f.solid_cell) - mesh.cell_centroid(f.fluid_cell)) < 0.0) n = -n;
    f.normal = n.normalized();
    f.measure = facet_measure<Dim>(std::span<const Vec<Dim>, Dim>(x));
    f.h = facet_local_size(mesh, f.vertices);
    out.push_back(f);
  }
  return out;
}

}  // namespace fpsi
