#pragma once

#include "fpsi/convergence.hpp"
#include "fpsi/energy.hpp"
#include "fpsi/mms.hpp"
#include "fpsi/scenarios.hpp"
#include "fpsi/vtk.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace fpsi {

/// A fixed point located once in the mesh.
template <int Dim>
struct ProbePoint {
  Vec<Dim> x;
  Index cell = -1;
  Vec<Dim> xi;
};

template <int Dim>
ProbePoint<Dim> locate_probe(const Mesh<Dim>& mesh, const Vec<Dim>& x) {
  const Index c = mesh.locate(x);
  if (c < 0) throw ConfigError("probe point lies outside the mesh");
  return {x, c, mesh.cell_map(c).to_reference(x)};
}

template <int Dim>
Vec<Dim> probe_displacement(const Discretization<Dim>& d, const ProbePoint<Dim>& p,
                            const Eigen::VectorXd& u) {
  return d.displacement_space().evaluate(u, p.cell, p.xi);
}

/// One row of the probe series.
struct StepRecord {
  int step = 0;
  double time = 0.0;
  double ux_probe = 0.0;
  double ur_probe = 0.0;
  EnergyReport energy;
  StepReport report;
};

struct SimulateOptions {
  std::filesystem::path output_dir;  // empty: nothing written
  int output_every = 0;
  bool energies = true;
  /// Called after every step (and once for the initial state); returning
  /// false stops the run.
  std::function<bool(const State&, const StepRecord&)> observer;
};

struct SimulateResult {
  State final;
  std::vector<StepRecord> records;
  bool stopped = false;
};

inline std::vector<std::string> timeseries_header() {
  std::vector<std::string> h{"t", "ux_probe", "ur_probe"};
  for (const auto& n : EnergyReport::names()) h.push_back(n);
  return h;
}

inline void write_timeseries_row(std::ostream& out, const StepRecord& r) {
  out << std::setprecision(12) << r.time << ',' << r.ux_probe << ',' << r.ur_probe;
  for (double v : r.energy.values()) out << ',' << v;
  out << '\n';
}

/// Time loop from s.initial to s.t_end. The probe is wall-normal along +y
/// (upper wall). Throws StepError on failure; files written so far remain.
inline SimulateResult simulate(const Scenario& s, const SimulateOptions& o = {}) {
  const auto& p = s.problem;
  const auto& d = p.discretization();
  std::optional<ProbePoint<2>> probe;
  if (!s.wall_probes.empty()) probe = locate_probe(d.mesh(), s.wall_probes.at(s.probe));

  std::ofstream csv;
  if (!o.output_dir.empty()) {
    std::filesystem::create_directories(o.output_dir);
    csv.open(o.output_dir / "timeseries.csv");
    if (!csv) throw Error("cannot write timeseries.csv in '" + o.output_dir.string() + "'");
    const auto h = timeseries_header();
    for (std::size_t i = 0; i < h.size(); ++i) csv << h[i] << (i + 1 == h.size() ? '\n' : ',');
  }

  SimulateResult res;
  State st = s.initial;
  auto record = [&](const StepReport& rep) {
    StepRecord r;
    r.step = st.step;
    r.time = st.time;
    r.report = rep;
    if (probe) {
      const Vec<2> u = probe_displacement(d, *probe, st.current().u);
      r.ux_probe = u[0];
      r.ur_probe = u[1];
    }
    if (o.energies) r.energy = evaluate_energy(d, p.material, st.current(), p.frozen, st.time);
    r.energy.time = st.time;
    res.records.push_back(r);
    if (csv.is_open()) {
      write_timeseries_row(csv, r);
      csv.flush();
    }
    if (!o.output_dir.empty() && o.output_every > 0 && st.step % o.output_every == 0)
      write_vtk(d, st.current(), o.output_dir / vtk_step_name(st.step));
    return !o.observer || o.observer(st, r);
  };

  const int steps = static_cast<int>(std::llround((s.t_end - st.time) / p.dt));
  bool go = record(StepReport{});
  for (int k = 0; go && k < steps; ++k) {
    StepReport rep;
    st = advance_step(p, st, &rep);
    go = record(rep);
  }
  res.stopped = !go;
  if (!o.output_dir.empty()) save_checkpoint(st, o.output_dir / "checkpoint.txt");
  res.final = std::move(st);
  return res;
}

/// Index of the first record at or after t.
inline std::size_t first_record_after(const std::vector<StepRecord>& r, double t) {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i].time >= t - 1e-12) return i;
  return r.size();
}

inline DissipationCheck dissipation_after(const std::vector<StepRecord>& r, double t_off,
                                          double relative_tol) {
  std::vector<double> e;
  for (const auto& x : r) e.push_back(x.energy.total());
  return dissipation_check(e, first_record_after(r, t_off), relative_tol);
}

// mms drivers ----------------------------------------------------------------

inline mms::Study run_mms_study(const std::string& which, int levels, int base) {
  if (which == "stokes") return mms::stokes_study(base, levels);
  if (which == "biot") return mms::biot_study(base, levels);
  if (which == "time") {
    auto a = mms::time_study(1, levels);
    auto b = mms::time_study(2, levels);
    a.name = "time";
    a.tables.insert(a.tables.end(), b.tables.begin(), b.tables.end());
    a.tables[0].quantity = "BDF1 " + a.tables[0].quantity;
    a.tables.back().quantity = "BDF2 " + a.tables.back().quantity;
    return a;
  }
  throw ConfigError("unknown mms case '" + which + "' (stokes, biot, time)");
}

inline void write_study(std::ostream& out, const mms::Study& s) {
  out << "# mms " << s.name << "\n";
  const std::string size_name = s.name.rfind("time", 0) == 0 ? "dt" : "h";
  for (const auto& t : s.tables) {
    write_table(out, t, size_name);
    out << "\n";
  }
}

/// Full `run` command: validates, builds the scenario and writes every
/// artifact into c.output_dir.
inline void run(const RunConfig& c, std::ostream& log) {
  c.validate();
  const std::filesystem::path dir = c.output_dir;
  if (c.scenario.rfind("mms_", 0) == 0) {
    const auto study = run_mms_study(c.scenario.substr(4), c.levels, c.base_resolution);
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "convergence.txt");
    if (!out) throw Error("cannot write convergence.txt");
    write_study(out, study);
    write_study(log, study);
    return;
  }
  const Scenario s = channel_scenario(c);
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.ini");
    cfg << serialize_config(c);
  }
  log << "scenario " << c.scenario << ": " << s.problem.discretization().layout().total()
      << " dofs, " << static_cast<int>(std::llround(c.t_end / c.dt)) << " steps\n";
  SimulateOptions o;
  o.output_dir = dir;
  o.output_every = c.output_every;
  const auto r = simulate(s, o);
  const double t_off = c.scenario == "decay" && c.pulse_end <= 0.0 ? 0.0 : c.pulse_end;
  const auto chk = dissipation_after(r.records, t_off, c.energy_tolerance);
  log << "finished at t = " << r.final.time << "; energy after t = " << t_off << ": "
      << (chk.pass ? "non-increasing" : "rises") << " (worst rise " << chk.worst_rise
      << " at step " << chk.worst_step << ", tolerance " << chk.tolerance << ")\n";
}

}  // namespace fpsi
