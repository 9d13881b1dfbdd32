#pragma once

#include "fpsi/discretization.hpp"
#include "fpsi/kinematics.hpp"

#include <limits>
#include <vector>

namespace fpsi {

template <int Dim>
struct PointGeometry {
  Mat<Dim> F = Mat<Dim>::Identity();
  Mat<Dim> Finv = Mat<Dim>::Identity();
  Mat<Dim> FinvT = Mat<Dim>::Identity();
  double J = 1.0;
};

/// A facet quadrature point with its images in the adjacent cells and the
/// pushed-forward normal data.
template <int Dim>
struct FacetPoint {
  Vec<Dim> x;     // reference position
  Vec<Dim> xi_f;  // reference coordinates in the fluid (or boundary) cell
  Vec<Dim> xi_s;  // reference coordinates in the solid cell (interface only)
  double weight = 0.0;  // quadrature weight times facet measure
  PointGeometry<Dim> g; // fluid-side deformation
  Vec<Dim> n;           // current unit normal
  double Js = 1.0;      // J |F^{-T} n_ref|
  Mat<Dim> P;           // I - n n^T
};

/// Geometric factors of the extrapolated displacement at every cell and facet
/// quadrature point.
template <int Dim>
struct GeometricFields {
  int points_per_cell = 0;
  std::vector<PointGeometry<Dim>> cell_points;
  std::vector<std::vector<FacetPoint<Dim>>> interface;  // per interface facet
  std::vector<std::vector<FacetPoint<Dim>>> boundary;   // per fluid boundary facet
  bool frozen = false;
  double min_J = std::numeric_limits<double>::infinity();

  const PointGeometry<Dim>& at(Index cell, int q) const {
    return cell_points[static_cast<std::size_t>(cell) * points_per_cell + q];
  }
};

/// Physical (reference-configuration) gradients of the P2 basis on one cell.
template <int Dim>
struct CellValues {
  AffineMap<Dim> map;
  std::vector<double> weights;                 // rule weight times |det|
  std::vector<NodeGradients<Dim>> p2_grads;    // per point, row i = grad phi_i
  const Tabulation<Dim>* p2 = nullptr;
  const Tabulation<Dim>* p1 = nullptr;
  const QuadratureRule<Dim>* rule = nullptr;

  void reinit(const Discretization<Dim>& d, Index cell) {
    map = d.mesh().cell_map(cell);
    rule = &d.cell_rule();
    p2 = &d.p2_table();
    p1 = &d.p1_table();
    const std::size_t nq = rule->size();
    weights.resize(nq);
    p2_grads.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
      weights[q] = rule->weights[q] * std::abs(map.det);
      p2_grads[q] = p2->at[q].gradients * map.inverse;
    }
  }
  std::size_t size() const { return weights.size(); }
  Vec<Dim> point(std::size_t q) const { return map.to_physical(rule->points[q]); }
};

namespace detail {

template <int Dim>
void gather_nodes(const FunctionSpace<Dim>& s, const Eigen::VectorXd& u, Index cell,
                  Eigen::Matrix<double, Eigen::Dynamic, Dim, 0, kMaxNodes, Dim>& out) {
  const int npc = s.nodes_per_cell();
  out.resize(npc, Dim);
  for (int i = 0; i < npc; ++i) {
    const Index n = s.cell_node(cell, i);
    for (int c = 0; c < Dim; ++c) out(i, c) = u[s.dof(n, c)];
  }
}

}  // namespace detail

/// Nodal values of a vector field on one cell, one row per node.
template <int Dim>
using CellNodalValues = Eigen::Matrix<double, Eigen::Dynamic, Dim, 0, kMaxNodes, Dim>;

template <int Dim>
CellNodalValues<Dim> cell_nodal_values(const FunctionSpace<Dim>& s, const Eigen::VectorXd& u,
                                       Index cell) {
  CellNodalValues<Dim> out;
  detail::gather_nodes(s, u, cell, out);
  return out;
}

/// Deformation at a reference point of a cell from nodal displacements and
/// physical basis gradients (rows).
template <int Dim>
PointGeometry<Dim> point_geometry(const CellNodalValues<Dim>& u, const NodeGradients<Dim>& grads,
                                  Index cell, double j_min) {
  const Mat<Dim> grad_u = u.transpose() * grads;
  const auto s = deformation_state<Dim>(grad_u, cell, j_min);
  return {s.F, s.Finv, s.FinvT, s.J};
}

template <int Dim>
FacetPoint<Dim> make_facet_point(const Vec<Dim>& x, double weight, const Vec<Dim>& n_ref,
                                 const PointGeometry<Dim>& g) {
  FacetPoint<Dim> p;
  p.x = x;
  p.weight = weight;
  p.g = g;
  const auto pn = pushforward_normal<Dim>(g.FinvT, g.J, n_ref);
  p.n = pn.n;
  p.Js = pn.area_factor;
  p.P = Mat<Dim>::Identity() - p.n * p.n.transpose();
  return p;
}

/// Reference points and weights of the facet rule mapped onto a facet.
template <int Dim>
std::vector<std::pair<Vec<Dim>, double>> facet_points(const Discretization<Dim>& d,
                                                      const typename Mesh<Dim>::FacetKey& vertices) {
  const auto x = d.mesh().facet_coordinates(vertices);
  const double measure = facet_measure<Dim>(std::span<const Vec<Dim>, Dim>(x));
  const double ref_measure = Dim == 2 ? 1.0 : 0.5;
  const auto& rule = d.facet_rule();
  std::vector<std::pair<Vec<Dim>, double>> out;
  out.reserve(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Vec<Dim> p = x[0];
    for (int j = 0; j < Dim - 1; ++j) p += rule.points[q][j] * (x[j + 1] - x[0]);
    out.emplace_back(p, rule.weights[q] * measure / ref_measure);
  }
  return out;
}

/// Evaluate F, J, F^{-1} of the displacement u (displacement-space DOFs) at all
/// quadrature points. With `frozen` every factor is the identity.
template <int Dim>
GeometricFields<Dim> build_geometric_fields(const Discretization<Dim>& d, const Eigen::VectorXd& u,
                                            bool frozen = false,
                                            double j_min = kDefaultMinJacobian) {
  const auto& mesh = d.mesh();
  const auto& disp = d.displacement_space();
  if (u.size() != disp.num_dofs()) throw Error("displacement vector has wrong length");
  GeometricFields<Dim> gf;
  gf.frozen = frozen;
  gf.points_per_cell = static_cast<int>(d.cell_rule().size());
  gf.cell_points.resize(static_cast<std::size_t>(mesh.num_cells()) * gf.points_per_cell);
  CellValues<Dim> cv;
  CellNodalValues<Dim> uc;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    if (frozen) {
      gf.min_J = 1.0;
      continue;
    }
    cv.reinit(d, c);
    detail::gather_nodes(disp, u, c, uc);
    for (int q = 0; q < gf.points_per_cell; ++q) {
      auto& g = gf.cell_points[static_cast<std::size_t>(c) * gf.points_per_cell + q];
      g = point_geometry<Dim>(uc, cv.p2_grads[q], c, j_min);
      gf.min_J = std::min(gf.min_J, g.J);
    }
  }

  auto geometry_at = [&](Index cell, const Vec<Dim>& xi) {
    if (frozen) return PointGeometry<Dim>{};
    const auto map = mesh.cell_map(cell);
    const auto b = d.p2().eval_unchecked(xi);
    const NodeGradients<Dim> grads = b.gradients * map.inverse;
    detail::gather_nodes(disp, u, cell, uc);
    return point_geometry<Dim>(uc, grads, cell, j_min);
  };

  for (const auto& f : d.interface()) {
    std::vector<FacetPoint<Dim>> pts;
    const auto mf = mesh.cell_map(f.fluid_cell);
    const auto ms = mesh.cell_map(f.solid_cell);
    for (const auto& [x, w] : facet_points(d, f.vertices)) {
      const Vec<Dim> xf = mf.to_reference(x);
      auto p = make_facet_point<Dim>(x, w, f.normal, geometry_at(f.fluid_cell, xf));
      p.xi_f = xf;
      p.xi_s = ms.to_reference(x);
      pts.push_back(p);
    }
    gf.interface.push_back(std::move(pts));
  }
  for (const auto& f : d.fluid_boundary()) {
    std::vector<FacetPoint<Dim>> pts;
    const auto mf = mesh.cell_map(f.cell);
    for (const auto& [x, w] : facet_points(d, f.vertices)) {
      const Vec<Dim> xf = mf.to_reference(x);
      auto p = make_facet_point<Dim>(x, w, f.normal, geometry_at(f.cell, xf));
      p.xi_f = xf;
      p.xi_s = xf;
      pts.push_back(p);
    }
    gf.boundary.push_back(std::move(pts));
  }
  return gf;
}

/// Smallest J(u) over the quadrature points of every cell.
template <int Dim>
double min_jacobian(const Discretization<Dim>& d, const Eigen::VectorXd& u) {
  const auto& disp = d.displacement_space();
  CellValues<Dim> cv;
  CellNodalValues<Dim> uc;
  double jmin = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < d.mesh().num_cells(); ++c) {
    cv.reinit(d, c);
    detail::gather_nodes(disp, u, c, uc);
    for (std::size_t q = 0; q < cv.size(); ++q) {
      const Mat<Dim> F = Mat<Dim>::Identity() + uc.transpose() * cv.p2_grads[q];
      jmin = std::min(jmin, F.determinant());
    }
  }
  return jmin;
}

}  // namespace fpsi
