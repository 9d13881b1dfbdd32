#pragma once

#include "fpsi/geometry.hpp"
#include "fpsi/state.hpp"

#include <string>
#include <vector>

namespace fpsi {

/// Terms of the energy balance at one time level. Stored energies first, then
/// rates (power) and the interface flux defect.
struct EnergyReport {
  double time = 0.0;
  double kinetic_solid = 0.0;
  double kinetic_mixture = 0.0;
  double kinetic_fluid = 0.0;
  double pressure_storage = 0.0;
  double elastic_energy = 0.0;
  double darcy_dissipation = 0.0;
  double viscous_dissipation = 0.0;
  double bjs_dissipation = 0.0;
  double elastic_power = 0.0;
  double penalty_defect = 0.0;

  double total() const {
    return kinetic_solid + kinetic_mixture + kinetic_fluid + pressure_storage + elastic_energy;
  }
  double dissipation() const { return darcy_dissipation + viscous_dissipation + bjs_dissipation; }

  static std::vector<std::string> names() {
    return {"kinetic_solid",       "kinetic_mixture", "kinetic_fluid",   "pressure_storage",
            "elastic_energy",      "E_total",         "darcy_dissipation",
            "viscous_dissipation", "bjs_dissipation", "elastic_power",   "penalty_defect"};
  }
  std::vector<double> values() const {
    return {kinetic_solid,       kinetic_mixture, kinetic_fluid,   pressure_storage,
            elastic_energy,      total(),         darcy_dissipation,
            viscous_dissipation, bjs_dissipation, elastic_power,   penalty_defect};
  }
};

/// Evaluate every term on the fields f, with the geometry of f.u (identity
/// when frozen). Uses the assembly quadrature.
template <int Dim>
EnergyReport evaluate_energy(const Discretization<Dim>& d, const MaterialParams<Dim>& m,
                             const Fields& f, bool frozen = false, double time = 0.0) {
  check_fields(d, f);
  EnergyReport r;
  r.time = time;
  const auto gf = build_geometric_fields(d, f.u, frozen);
  const auto& L = d.layout();
  const Mat<Dim> K_inv = m.K_inv();
  CellValues<Dim> cv;
  for (Index c = 0; c < d.mesh().num_cells(); ++c) {
    cv.reinit(d, c);
    if (d.mesh().tag(c) == Subdomain::Fluid) {
      const auto vf = cell_nodal_values(d.space(Block::Vf), L.extract(f.x, Block::Vf), c);
      for (std::size_t q = 0; q < cv.size(); ++q) {
        const auto& g = gf.at(c, static_cast<int>(q));
        const double w = g.J * cv.weights[q];
        const Vec<Dim> v = vf.transpose() * cv.p2->at[q].values;
        const Mat<Dim> D = sym<Dim>(vf.transpose() * cv.p2_grads[q] * g.Finv);
        r.kinetic_fluid += 0.5 * m.rho_f * v.squaredNorm() * w;
        r.viscous_dissipation += 2.0 * m.mu_f * D.squaredNorm() * w;
      }
    } else {
      const auto vs = cell_nodal_values(d.space(Block::Vs), L.extract(f.x, Block::Vs), c);
      const auto qd = cell_nodal_values(d.space(Block::Q), L.extract(f.x, Block::Q), c);
      const Eigen::VectorXd pd_all = L.extract(f.x, Block::Pd);
      const auto uc = cell_nodal_values(d.displacement_space(), f.u, c);
      const auto& P1 = d.space(Block::Pd);
      for (std::size_t q = 0; q < cv.size(); ++q) {
        const auto& g = gf.at(c, static_cast<int>(q));
        const double w = g.J * cv.weights[q];
        const Vec<Dim> v = vs.transpose() * cv.p2->at[q].values;
        const Vec<Dim> qq = qd.transpose() * cv.p2->at[q].values;
        double p = 0.0;
        for (int a = 0; a < P1.nodes_per_cell(); ++a)
          p += cv.p1->at[q].values[a] * pd_all[P1.cell_node(c, a)];
        r.kinetic_solid += 0.5 * (1.0 - m.phi) * m.rho_s * v.squaredNorm() * w;
        r.kinetic_mixture += 0.5 * m.phi * m.rho_f * (v + qq / m.phi).squaredNorm() * w;
        r.pressure_storage += 0.5 * m.s0 * p * p * w;
        r.darcy_dissipation += qq.dot(K_inv * qq) * w;
        // stored energy and stress power in the reference configuration
        const Mat<Dim> F = Mat<Dim>::Identity() + uc.transpose() * cv.p2_grads[q];
        const Mat<Dim> E = green_lagrange<Dim>(F, F);
        const Mat<Dim> S = svk_stress<Dim>(E, m.lambda_s, m.mu_s);
        const Mat<Dim> grad_v = vs.transpose() * cv.p2_grads[q];
        r.elastic_energy += svk_energy_density<Dim>(E, m.lambda_s, m.mu_s) * cv.weights[q];
        r.elastic_power += (F * S).cwiseProduct(grad_v).sum() * cv.weights[q];
      }
    }
  }
  if (d.has_fluid() && d.has_solid()) {
    const Mat<Dim> Kis = m.K_inv_sqrt();
    const auto vf_all = L.extract(f.x, Block::Vf);
    const auto vs_all = L.extract(f.x, Block::Vs);
    const auto q_all = L.extract(f.x, Block::Q);
    for (std::size_t i = 0; i < d.interface().size(); ++i) {
      const auto& fc = d.interface()[i];
      const auto vf = cell_nodal_values(d.space(Block::Vf), vf_all, fc.fluid_cell);
      const auto vs = cell_nodal_values(d.space(Block::Vs), vs_all, fc.solid_cell);
      const auto qd = cell_nodal_values(d.space(Block::Q), q_all, fc.solid_cell);
      for (const auto& p : gf.interface[i]) {
        const auto bf = d.p2().eval_unchecked(p.xi_f);
        const auto bs = d.p2().eval_unchecked(p.xi_s);
        const Vec<Dim> a = vf.transpose() * bf.values;
        const Vec<Dim> b = vs.transpose() * bs.values;
        const Vec<Dim> c = qd.transpose() * bs.values;
        const Vec<Dim> slip = p.P * (a - b);
        const double w = p.Js * p.weight;
        r.bjs_dissipation += m.gamma * slip.dot(Kis * slip) * w;
        r.penalty_defect += std::abs((a - b - c).dot(p.n)) * w;
      }
    }
  }
  return r;
}

struct DissipationCheck {
  bool pass = true;
  int worst_step = -1;   // index into the series with the largest rise
  double worst_rise = 0.0;
  double tolerance = 0.0;
};

/// E(k) <= E(k-1) + tol for every k > start, tol = relative_tol * E(start).
inline DissipationCheck dissipation_check(const std::vector<double>& total, std::size_t start,
                                          double relative_tol = 1e-3) {
  DissipationCheck out;
  if (start >= total.size()) return out;
  out.tolerance = relative_tol * total[start];
  for (std::size_t k = start + 1; k < total.size(); ++k) {
    const double rise = total[k] - total[k - 1];
    if (out.worst_step < 0 || rise > out.worst_rise) {
      out.worst_rise = rise;
      out.worst_step = static_cast<int>(k);
    }
  }
  out.pass = out.worst_step < 0 || out.worst_rise <= out.tolerance;
  return out;
}

}  // namespace fpsi
