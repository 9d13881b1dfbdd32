#pragma once

#include "fpsi/mesh.hpp"
#include "fpsi/reference_element.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fpsi {

/// Continuous scalar or vector Lagrange space restricted to one subdomain (or
/// the whole mesh when no tag is given).
///
/// Nodes are numbered subdomain vertices first (increasing global id), then
/// subdomain edges. Vector DOFs are interleaved: dof = node * rank + component.
template <int Dim>
class FunctionSpace {
 public:
  FunctionSpace(const Mesh<Dim>& mesh, std::optional<Subdomain> tag, int rank, int degree,
                const std::set<Marker>& dirichlet_markers = {})
      : mesh_(&mesh), tag_(tag), rank_(rank), element_(degree) {
    if (rank != 1 && rank != Dim) throw Error("space rank must be 1 or the mesh dimension");
    for (Marker m : dirichlet_markers)
      if (!mesh.has_marker(m))
        throw Error("unknown Dirichlet marker " + std::string(to_string(m)));

    const Index nv = mesh.num_vertices();
    const Index n_entities = nv + (degree == 2 ? mesh.num_edges() : 0);
    cell_slot_.assign(mesh.num_cells(), -1);
    for (Index c = 0; c < mesh.num_cells(); ++c)
      if (!tag || mesh.tag(c) == *tag) {
        cell_slot_[c] = static_cast<Index>(cells_.size());
        cells_.push_back(c);
      }
    if (cells_.empty()) throw Error("empty subdomain: no cells for function space");

    std::vector<char> used(n_entities, 0);
    for (Index c : cells_) {
      for (Index v : mesh.cell(c)) used[v] = 1;
      if (degree == 2)
        for (Index e : mesh.cell_edges(c)) used[nv + e] = 1;
    }
    entity_node_.assign(n_entities, -1);
    for (Index k = 0; k < n_entities; ++k)
      if (used[k]) {
        entity_node_[k] = static_cast<Index>(node_entity_.size());
        node_entity_.push_back(k);
      }

    const int npc = element_.num_nodes();
    cell_nodes_.resize(cells_.size() * npc);
    for (std::size_t s = 0; s < cells_.size(); ++s) {
      const Index c = cells_[s];
      for (int i = 0; i <= Dim; ++i) cell_nodes_[s * npc + i] = entity_node_[mesh.cell(c)[i]];
      if (degree == 2)
        for (int e = 0; e < SimplexTopology<Dim>::kEdges; ++e)
          cell_nodes_[s * npc + Dim + 1 + e] = entity_node_[nv + mesh.cell_edges(c)[e]];
    }

    node_coords_.resize(node_entity_.size());
    for (std::size_t n = 0; n < node_entity_.size(); ++n) {
      const Index k = node_entity_[n];
      if (k < nv) {
        node_coords_[n] = mesh.vertex(k);
      } else {
        const auto& e = mesh.edge(k - nv);
        node_coords_[n] = 0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1]));
      }
    }

    node_marker_.assign(node_entity_.size(), std::nullopt);
    const auto& facets = mesh.facets();
    for (Index f = 0; f < static_cast<Index>(facets.size()); ++f) {
      if (!dirichlet_markers.count(facets[f].marker)) continue;
      auto flag = [&](Index entity) {
        const Index n = entity_node_[entity];
        if (n >= 0 && !node_marker_[n]) node_marker_[n] = facets[f].marker;
      };
      for (Index v : facets[f].vertices) flag(v);
      if (degree == 2) {
        const Index c = mesh.facet_cells(f).front();
        const auto& fv = facets[f].vertices;
        for (int e = 0; e < SimplexTopology<Dim>::kEdges; ++e) {
          const auto& lv = SimplexTopology<Dim>::kEdgeVertices[e];
          const Index a = mesh.cell(c)[lv[0]], b = mesh.cell(c)[lv[1]];
          if (std::find(fv.begin(), fv.end(), a) != fv.end() &&
              std::find(fv.begin(), fv.end(), b) != fv.end())
            flag(nv + mesh.cell_edges(c)[e]);
        }
      }
    }
  }

  const Mesh<Dim>& mesh() const { return *mesh_; }
  std::optional<Subdomain> tag() const { return tag_; }
  int rank() const { return rank_; }
  int degree() const { return element_.degree(); }
  const ReferenceElement<Dim>& element() const { return element_; }
  int nodes_per_cell() const { return element_.num_nodes(); }
  int dofs_per_cell() const { return element_.num_nodes() * rank_; }

  Index num_nodes() const { return static_cast<Index>(node_entity_.size()); }
  Index num_dofs() const { return num_nodes() * rank_; }
  Index dof(Index node, int component) const { return node * rank_ + component; }

  const std::vector<Index>& cells() const { return cells_; }
  bool contains_cell(Index cell) const { return cell_slot_[cell] >= 0; }

  /// Node of local node i on a global cell.
  Index cell_node(Index cell, int i) const {
    return cell_nodes_[static_cast<std::size_t>(cell_slot_[cell]) * nodes_per_cell() + i];
  }

  /// Global DOF indices of a cell, node-major.
  void cell_dofs(Index cell, std::vector<Index>& out) const {
    const int npc = nodes_per_cell();
    out.resize(static_cast<std::size_t>(npc) * rank_);
    for (int i = 0; i < npc; ++i)
      for (int c = 0; c < rank_; ++c) out[i * rank_ + c] = dof(cell_node(cell, i), c);
  }

  /// Node carrying mesh entity k (vertex id, or num_vertices + edge id), or -1.
  Index entity_node(Index k) const {
    return k < static_cast<Index>(entity_node_.size()) ? entity_node_[k] : -1;
  }
  Index node_entity(Index n) const { return node_entity_[n]; }
  const Vec<Dim>& node_coordinates(Index n) const { return node_coords_[n]; }

  bool is_dirichlet_node(Index n) const { return node_marker_[n].has_value(); }
  bool is_dirichlet_dof(Index d) const { return is_dirichlet_node(d / rank_); }
  std::optional<Marker> dirichlet_marker(Index n) const { return node_marker_[n]; }

  std::vector<char> dirichlet_mask() const {
    std::vector<char> m(num_dofs(), 0);
    for (Index d = 0; d < num_dofs(); ++d) m[d] = is_dirichlet_dof(d);
    return m;
  }

  /// Nodal interpolation of f: X -> R^rank.
  Eigen::VectorXd interpolate(const std::function<Eigen::VectorXd(const Vec<Dim>&)>& f) const {
    Eigen::VectorXd out(num_dofs());
    for (Index n = 0; n < num_nodes(); ++n) {
      const Eigen::VectorXd v = f(node_coords_[n]);
      for (int c = 0; c < rank_; ++c) out[dof(n, c)] = v[c];
    }
    return out;
  }

  /// Value of a DOF vector at reference point xi of a cell.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& dofs, Index cell, const Vec<Dim>& xi) const {
    const auto b = element_.eval(xi);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(rank_);
    for (int i = 0; i < nodes_per_cell(); ++i)
      for (int c = 0; c < rank_; ++c) v[c] += b.values[i] * dofs[dof(cell_node(cell, i), c)];
    return v;
  }

 private:
  const Mesh<Dim>* mesh_;
  std::optional<Subdomain> tag_;
  int rank_;
  ReferenceElement<Dim> element_;
  std::vector<Index> cells_;
  std::vector<Index> cell_slot_;
  std::vector<Index> cell_nodes_;
  std::vector<Index> node_entity_;
  std::vector<Index> entity_node_;
  std::vector<Vec<Dim>> node_coords_;
  std::vector<std::optional<Marker>> node_marker_;
};

template <int Dim>
FunctionSpace<Dim> build_space(const Mesh<Dim>& mesh, std::optional<Subdomain> tag, int rank,
                               int degree, const std::set<Marker>& dirichlet_markers = {}) {
  return FunctionSpace<Dim>(mesh, tag, rank, degree, dirichlet_markers);
}

}  // namespace fpsi
