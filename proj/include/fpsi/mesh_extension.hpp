#pragma once

#include "fpsi/block_system.hpp"
#include "fpsi/forms.hpp"
#include "fpsi/linear_solver.hpp"

#include <cmath>

namespace fpsi {

/// Stiffening law of the extension problem on a cell of deformed volume v.
struct ExtensionLame {
  double lambda;
  double mu;
};

inline ExtensionLame extension_lame(double mu_s, double volume) {
  const double mu = mu_s * std::pow(volume, -1.2);
  return {16.0 * mu, mu};
}

/// Mesh velocity w on the displacement space: w = v_s on solid nodes and, in
/// the fluid, the solution of the elasticity problem with data v_s on the
/// interface and zero on GAMMA_F0 / GAMMA_OUT. Coefficients and geometry come
/// from the previous displacement u_prev.
template <int Dim>
Eigen::VectorXd extend_mesh_velocity(const Discretization<Dim>& d, const Eigen::VectorXd& u_prev,
                                     const Eigen::VectorXd& vs, double mu_s,
                                     const SolverOptions& solver = {}, bool frozen = false) {
  const auto& disp = d.displacement_space();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(disp.num_dofs());
  std::vector<char> solid_node(disp.num_nodes(), 0);
  if (d.has_solid()) {
    const auto& S = d.space(Block::Vs);
    if (vs.size() != S.num_dofs()) throw Error("solid velocity has wrong length");
    for (Index n = 0; n < S.num_nodes(); ++n) {
      const Index m = d.displacement_node(S, n);
      solid_node[m] = 1;
      for (int c = 0; c < Dim; ++c) w[disp.dof(m, c)] = vs[S.dof(n, c)];
    }
  }
  if (frozen || !d.has_fluid()) return w;

  const auto& E = d.extension_space();
  const Index n = E.num_dofs();
  std::vector<char> mask = E.dirichlet_mask();
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (Index k = 0; k < E.num_nodes(); ++k)
    if (E.is_dirichlet_node(k)) {
      const Index m = d.displacement_node(E, k);
      for (int c = 0; c < Dim; ++c) values[E.dof(k, c)] = w[disp.dof(m, c)];
    }
  SystemBuilder sb(n, mask, values);
  const auto gf = build_geometric_fields(d, u_prev, false);
  CellValues<Dim> cv;
  std::vector<Index> dofs;
  for (Index c : E.cells()) {
    cv.reinit(d, c);
    const auto lame = extension_lame(mu_s, deformed_volume(cv, gf, c));
    E.cell_dofs(c, dofs);
    sb.add_block(dofs, dofs, extension_matrix(cv, gf, c, lame.lambda, lame.mu));
  }
  const auto sys = sb.finalize();
  const Eigen::VectorXd sol = Factorization(sys.A, solver).solve(sys.b);
  for (Index k = 0; k < E.num_nodes(); ++k) {
    const Index m = d.displacement_node(E, k);
    if (solid_node[m]) continue;
    for (int c = 0; c < Dim; ++c) w[disp.dof(m, c)] = sol[E.dof(k, c)];
  }
  return w;
}

}  // namespace fpsi
