#pragma once

#include "fpsi/config.hpp"
#include "fpsi/generators.hpp"
#include "fpsi/mesh_io.hpp"
#include "fpsi/timestepper.hpp"

namespace fpsi {

/// A ready-to-run time-dependent problem.
struct Scenario {
  Problem<2> problem;
  State initial;
  /// Points on the upper fluid-structure wall; the middle one is the probe.
  std::vector<Vec<2>> wall_probes;
  std::size_t probe = 0;
  double t_end = 0.0;
};

inline std::shared_ptr<const Mesh<2>> scenario_mesh(const RunConfig& c) {
  if (c.mesh == "channel") return std::make_shared<const Mesh<2>>(channel_mesh(c.resolution));
  return std::make_shared<const Mesh<2>>(load_mesh<2>(c.mesh));
}

/// pressure_wave_2d and decay: the channel with poroelastic walls, driven by
/// the inlet pressure pulse. decay additionally starts from a parabolic
/// fluid velocity of amplitude initial_velocity.
inline Scenario channel_scenario(const RunConfig& c) {
  if (c.scenario != "pressure_wave_2d" && c.scenario != "decay")
    throw ConfigError("scenario '" + c.scenario + "' is not a channel scenario");
  Scenario s;
  DiscretizationOptions opt;
  opt.cell_quadrature_degree = c.quadrature_degree;
  opt.facet_quadrature_degree = c.quadrature_degree;
  const auto mesh = scenario_mesh(c);
  auto& p = s.problem;
  p.disc = std::make_shared<const Discretization<2>>(mesh, opt);
  p.material = c.material();
  p.order = c.order;
  p.dt = c.dt;
  p.tau_scale = c.tau_scale;
  p.tau_constant = c.tau;
  p.sign_pext = c.sign_pext;
  p.solver.residual_tolerance = c.residual_tolerance;
  const bool pulse = c.scenario == "pressure_wave_2d" || c.pulse_end > 0.0;
  if (pulse) p.p_ext = [c](double t) { return c.inlet_pressure(t); };
  s.initial = rest_state(*p.disc);
  if (c.scenario == "decay" && c.initial_velocity != 0.0) {
    ChannelGeometry g;
    const auto& L = p.disc->layout();
    const double a = c.initial_velocity;
    L.insert(s.initial.history[0].x, Block::Vf,
             p.disc->space(Block::Vf).interpolate([&](const Vec<2>& x) -> Eigen::VectorXd {
               const double eta = x[1] / g.height;
               return Eigen::Vector2d(4.0 * a * eta * (1.0 - eta), 0.0);
             }));
  }
  ChannelGeometry g;
  for (double f : {0.25, 0.5, 0.75}) s.wall_probes.emplace_back(f * g.length, g.height);
  s.probe = 1;
  s.t_end = c.t_end;
  return s;
}

}  // namespace fpsi
