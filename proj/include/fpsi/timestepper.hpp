#pragma once

#include "fpsi/mesh_extension.hpp"
#include "fpsi/problem.hpp"
#include "fpsi/state.hpp"
#include "fpsi/time_scheme.hpp"

#include <algorithm>

namespace fpsi {

struct StepReport {
  int order_used = 1;
  double relative_residual = 0.0;
  double min_jacobian = 1.0;
  Index dofs = 0;
};

/// Error raised while advancing; carries the failing step index.
class StepError : public Error {
 public:
  StepError(int step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

namespace detail {

template <int Dim>
AssemblyInput<Dim> base_input(const Problem<Dim>& p, const GeometricFields<Dim>& gf, double t) {
  AssemblyInput<Dim> in;
  in.disc = p.disc.get();
  in.geo = &gf;
  in.material = p.material;
  in.forms = p.forms;
  in.tau_scale = p.tau_scale;
  in.tau_constant = p.tau_constant;
  in.p_ext = p.p_ext ? p.p_ext(t) : 0.0;
  in.sign_pext = p.sign_pext;
  if (p.force) in.force = p.force(t);
  auto [mask, values] = constraints(p, t);
  in.constrained = std::move(mask);
  in.constrained_values = std::move(values);
  return in;
}

}  // namespace detail

/// One step of the semi-implicit scheme from the levels stored in s.
template <int Dim>
State advance_step(const Problem<Dim>& p, const State& s, StepReport* report = nullptr) {
  const auto& d = p.discretization();
  if (s.history.empty()) throw Error("state has no time levels");
  for (const auto& f : s.history) check_fields(d, f);
  const int step = s.step + 1;
  const double t = s.time + p.dt;
  const int levels = std::min<int>(p.order, static_cast<int>(s.history.size()));
  const SchemeOrder scheme = SchemeOrder::make(levels);

  std::vector<Eigen::VectorXd> xs, us, ws;
  for (int j = 0; j < levels; ++j) {
    xs.push_back(s.history[j].x);
    us.push_back(s.history[j].u);
    ws.push_back(s.history[j].w);
  }
  try {
    const Eigen::VectorXd u_tilde = extrapolate(us, scheme);
    const Eigen::VectorXd x_tilde = extrapolate(xs, scheme);
    const auto gf = build_geometric_fields(d, u_tilde, p.frozen, p.j_min);

    auto in = detail::base_input(p, gf, t);
    const auto bdf = bdf_apply(xs, scheme, p.dt);
    in.mass_coefficient = bdf.coefficient;
    in.history_rate = bdf.rhs;
    in.elastic_beta = p.dt / scheme.c0;
    in.u_hist = kinematic_update(Eigen::VectorXd::Zero(us[0].size()).eval(), us, scheme, p.dt);
    if (d.has_fluid()) in.vf_tilde = d.layout().extract(x_tilde, Block::Vf);
    if (!p.frozen) in.w_tilde = extrapolate(ws, scheme);

    const auto sys = assemble_system(in);
    SolveReport sr;
    Fields next;
    next.x = Factorization(sys.A, p.solver).solve(sys.b, &sr);

    const Eigen::VectorXd vs = d.has_solid() ? d.layout().extract(next.x, Block::Vs)
                                             : Eigen::VectorXd();
    next.w = extend_mesh_velocity(d, us[0], vs, p.material.mu_s, p.solver, p.frozen);
    next.u = kinematic_update(next.w, us, scheme, p.dt);
    double jmin = 1.0;
    if (!p.frozen) {
      jmin = min_jacobian(d, next.u);
      if (!(jmin > 0.0)) throw DegenerateDeformation(-1, jmin);
    }
    if (report) *report = {levels, sr.relative_residual, jmin, d.layout().total()};

    State out = s;
    out.step = step;
    out.time = t;
    out.push(std::move(next), std::max(p.order, 1));
    return out;
  } catch (const StepError&) {
    throw;
  } catch (const Error& e) {
    throw StepError(step, e.what());
  }
}

/// Steady problem at time t: no time derivative, elastic closure u = v_s,
/// no advection.
template <int Dim>
Fields solve_steady(const Problem<Dim>& p, double t = 0.0, SolveReport* report = nullptr) {
  const auto& d = p.discretization();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.displacement_space().num_dofs());
  const auto gf = build_geometric_fields(d, zero, true);
  auto in = detail::base_input(p, gf, t);
  in.mass_coefficient = 0.0;
  in.elastic_beta = 1.0;
  const auto sys = assemble_system(in);
  Fields f;
  f.x = Factorization(sys.A, p.solver).solve(sys.b, report);
  f.u = zero;
  f.w = zero;
  return f;
}

}  // namespace fpsi
