#include "fpsi/fpsi.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

using namespace fpsi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fpsi_test_" + name);
  fs::remove_all(p);
  return p;
}

/// Point coordinates and named arrays of a legacy ASCII file written by
/// write_vtk.
struct VtkFile {
  std::string header, dataset;
  std::vector<double> points;
  std::vector<int> cell_types, subdomain;
  std::map<std::string, std::vector<double>> arrays;
};

VtkFile read_vtk(const fs::path& path) {
  std::ifstream in(path);
  VtkFile v;
  std::string title, line;
  std::getline(in, v.header);
  std::getline(in, title);
  std::getline(in, line);
  EXPECT_EQ(line, "ASCII");
  std::getline(in, v.dataset);
  std::string tok;
  std::size_t npts = 0, ncells = 0;
  while (in >> tok) {
    if (tok == "POINTS") {
      in >> npts >> tok;
      v.points.resize(3 * npts);
      for (auto& x : v.points) in >> x;
    } else if (tok == "CELLS") {
      std::size_t total = 0;
      in >> ncells >> total;
      for (std::size_t i = 0; i < total; ++i) in >> tok;
    } else if (tok == "CELL_TYPES") {
      in >> ncells;
      v.cell_types.resize(ncells);
      for (auto& t : v.cell_types) in >> t;
    } else if (tok == "CELL_DATA" || tok == "POINT_DATA") {
      in >> tok;
    } else if (tok == "SCALARS") {
      std::string name, type;
      int ncomp = 0;
      in >> name >> type >> ncomp >> tok >> tok;
      if (name == "subdomain") {
        v.subdomain.resize(ncells);
        for (auto& s : v.subdomain) in >> s;
      } else {
        auto& a = v.arrays[name];
        a.resize(npts);
        for (auto& x : a) in >> x;
      }
    } else if (tok == "VECTORS") {
      std::string name;
      in >> name >> tok;
      auto& a = v.arrays[name];
      a.resize(3 * npts);
      for (auto& x : a) in >> x;
    } else {
      ADD_FAILURE() << "unexpected token " << tok;
      break;
    }
  }
  return v;
}

}  // namespace

// config ---------------------------------------------------------------------

TEST(Config, Defaults) {
  RunConfig c;
  c.validate();
  EXPECT_EQ(c.scenario, "pressure_wave_2d");
  EXPECT_EQ(c.order, 1);
  EXPECT_DOUBLE_EQ(c.dt, 1e-4);
  EXPECT_DOUBLE_EQ(c.p_ext, 1333.0);
  EXPECT_DOUBLE_EQ(c.mu_f, 3e-3);
  const auto m = c.material();
  EXPECT_NEAR(m.mu_s, 1.1538e5, 1e1);
  EXPECT_NEAR(m.lambda_s, 1.7308e5, 1e1);
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.scenario = "decay";
  c.resolution = 12;
  c.order = 2;
  c.dt = 2.5e-5;
  c.t_end = 0.02;
  c.output_dir = "some/where";
  c.young = 1.234567890123e5;
  c.permeability = 1e-5;
  c.tau = 42.0;
  c.sign_pext = -1.0;
  c.levels = 5;
  const std::string text = serialize_config(c);
  const RunConfig r = parse_config(text);
  EXPECT_EQ(serialize_config(r), text);
  EXPECT_EQ(r.scenario, "decay");
  EXPECT_EQ(r.resolution, 12);
  EXPECT_EQ(r.young, c.young);
  ASSERT_TRUE(r.tau.has_value());
  EXPECT_EQ(*r.tau, 42.0);
  EXPECT_EQ(r.sign_pext, -1.0);
  EXPECT_FALSE(parse_config(serialize_config(RunConfig{})).tau.has_value());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[run]\nfoo = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[nope]\ndt = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ndt = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\nresolution = 4.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[run\n"), ConfigError);
  auto invalid = [](const std::string& text) {
    EXPECT_THROW(parse_config(text).validate(), ConfigError) << text;
  };
  invalid("[run]\nscenario = tube_3d\n");
  invalid("[run]\ndt = 0\n");
  invalid("[run]\nt_end = 1e-5\n");
  invalid("[run]\norder = 3\n");
  invalid("[material]\npoisson = 0.5\n");
  invalid("[load]\nsign_pext = 2\n");
  invalid("[mms]\nlevels = 2\n");
  EXPECT_NO_THROW(parse_config("[run]\nresolution = 8\n; comment\n[load]\np_ext = 0\n").validate());
}

TEST(Config, InletSchedule) {
  RunConfig c;
  EXPECT_EQ(c.inlet_pressure(0.0), 0.0);
  EXPECT_EQ(c.inlet_pressure(1e-4), 1333.0);
  EXPECT_EQ(c.inlet_pressure(2.9e-3), 1333.0);
  EXPECT_EQ(c.inlet_pressure(3e-3), 0.0);
  EXPECT_EQ(c.inlet_pressure(5e-3), 0.0);
}

// generators and scenarios ---------------------------------------------------

TEST(Generators, ChannelInvariantsAcrossResolutions) {
  ChannelGeometry g;
  for (int n : {2, 3, 4, 5, 7, 8, 10, 13, 16, 24, 32, 50, 64, 100, 128}) {
    SCOPED_TRACE(n);
    const auto m = channel_mesh(n);
    EXPECT_NEAR(m.subdomain_volume(Subdomain::Fluid), g.length * g.height, 1e-9);
    EXPECT_NEAR(m.subdomain_volume(Subdomain::Solid), 2 * g.length * g.thickness, 1e-9);
    for (Index c = 0; c < m.num_cells(); ++c) ASSERT_GT(m.cell_volume(c), 0.0);
    // Euler characteristic of a disc
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_cells(), 1);
    std::map<Marker, double> length;
    for (const auto& f : m.facets())
      length[f.marker] += (m.vertex(f.vertices[1]) - m.vertex(f.vertices[0])).norm();
    EXPECT_NEAR(length[Marker::FluidInlet], g.height, 1e-9);
    EXPECT_NEAR(length[Marker::FluidOutlet], g.height, 1e-9);
    EXPECT_NEAR(length[Marker::Interface], 2 * g.length, 1e-9);
    EXPECT_NEAR(length[Marker::SolidFixed], 2 * g.length + 4 * g.thickness, 1e-9);
    const auto iface = extract_interface(m);
    EXPECT_EQ(static_cast<int>(iface.size()), 2 * static_cast<int>(std::lround(5.0 * n)));
    for (const auto& f : iface) EXPECT_NEAR(std::abs(f.normal[1]), 1.0, 1e-14);
  }
  EXPECT_THROW(channel_mesh(1), MeshError);
}

TEST(Scenario, PressureWaveSetup) {
  RunConfig c;
  c.resolution = 4;
  const auto s = channel_scenario(c);
  ASSERT_EQ(s.wall_probes.size(), 3u);
  EXPECT_EQ(s.wall_probes[s.probe], Vec<2>(25.0, 10.0));
  EXPECT_EQ(s.problem.p_ext(1e-3), 1333.0);
  EXPECT_EQ(s.problem.p_ext(4e-3), 0.0);
  EXPECT_EQ(s.initial.current().x.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_THROW(channel_scenario([] {
                 RunConfig b;
                 b.scenario = "mms_biot";
                 return b;
               }()),
               ConfigError);
}

TEST(Scenario, DecayInitialProfile) {
  RunConfig c;
  c.scenario = "decay";
  c.resolution = 4;
  c.initial_velocity = 2.0;
  const auto s = channel_scenario(c);
  const auto& d = s.problem.discretization();
  const auto& V = d.space(Block::Vf);
  const auto vf = d.layout().extract(s.initial.current().x, Block::Vf);
  for (Index n = 0; n < V.num_nodes(); ++n) {
    const double y = V.node_coordinates(n)[1];
    EXPECT_NEAR(vf[V.dof(n, 0)], 8.0 * (y / 10.0) * (1.0 - y / 10.0), 1e-12);
    EXPECT_EQ(vf[V.dof(n, 1)], 0.0);
  }
}

// vtk and checkpoints -------------------------------------------------------

TEST(Vtk, RestStateIsReferenceGeometry) {
  RunConfig c;
  c.resolution = 2;
  const auto s = channel_scenario(c);
  const auto& d = s.problem.discretization();
  const auto dir = scratch("vtk_rest");
  fs::create_directories(dir);
  write_vtk(d, s.initial.current(), dir / vtk_step_name(0));
  const auto v = read_vtk(dir / "step_000000.vtk");
  EXPECT_EQ(v.header, "# vtk DataFile Version 3.0");
  EXPECT_EQ(v.dataset, "DATASET UNSTRUCTURED_GRID");
  const auto& m = d.mesh();
  ASSERT_EQ(v.points.size(), 3u * m.num_vertices());
  for (Index i = 0; i < m.num_vertices(); ++i) {
    EXPECT_EQ(v.points[3 * i], m.vertex(i)[0]);
    EXPECT_EQ(v.points[3 * i + 1], m.vertex(i)[1]);
    EXPECT_EQ(v.points[3 * i + 2], 0.0);
  }
  for (const char* name : {"v_f", "v_s", "q", "p_f", "p_d", "u"}) {
    ASSERT_TRUE(v.arrays.count(name)) << name;
    for (double x : v.arrays.at(name)) EXPECT_EQ(x, 0.0);
  }
  ASSERT_EQ(v.subdomain.size(), static_cast<std::size_t>(m.num_cells()));
  for (Index i = 0; i < m.num_cells(); ++i) EXPECT_EQ(v.subdomain[i], static_cast<int>(m.tag(i)));
  for (int t : v.cell_types) EXPECT_EQ(t, 5);
  fs::remove_all(dir);
}

TEST(Vtk, DisplacementAndZeroExtension) {
  RunConfig c;
  c.resolution = 2;
  const auto s = channel_scenario(c);
  const auto& d = s.problem.discretization();
  const auto& m = d.mesh();
  Fields f = zero_fields(d);
  f.u = d.displacement_space().interpolate([](const Vec<2>& x) -> Eigen::VectorXd {
    return Vec<2>(1.0 + 1e-3 * std::sin(x[0]), 1e-4 * x[1] * x[1] / 3.0);
  });
  d.layout().insert(f.x, Block::Vf,
                    d.space(Block::Vf).interpolate([](const Vec<2>&) -> Eigen::VectorXd {
                      return Vec<2>(1.0, 0.0);
                    }));
  d.layout().insert(f.x, Block::Pd,
                    d.space(Block::Pd).interpolate([](const Vec<2>& x) -> Eigen::VectorXd {
                      return Vec<1>(x[0] + 0.5);
                    }));
  const auto dir = scratch("vtk_u");
  fs::create_directories(dir);
  write_vtk(d, f, dir / "u.vtk");
  const auto v = read_vtk(dir / "u.vtk");
  const auto& vf = v.arrays.at("v_f");
  const auto& pd = v.arrays.at("p_d");
  const auto& u = v.arrays.at("u");
  for (Index i = 0; i < m.num_vertices(); ++i) {
    const Vec<2> x = m.vertex(i);
    const Vec<2> ue(1.0 + 1e-3 * std::sin(x[0]), 1e-4 * x[1] * x[1] / 3.0);
    EXPECT_NEAR(u[3 * i], ue[0], 1e-12);
    EXPECT_NEAR(u[3 * i + 1], ue[1], 1e-12);
    EXPECT_NEAR(v.points[3 * i], x[0] + ue[0], 1e-12);
    EXPECT_NEAR(v.points[3 * i + 1], x[1] + ue[1], 1e-12);
    const bool fluid = x[1] >= -1e-12 && x[1] <= 10.0 + 1e-12;
    const bool solid = x[1] <= 1e-12 || x[1] >= 10.0 - 1e-12;
    EXPECT_EQ(vf[3 * i], fluid ? 1.0 : 0.0);
    EXPECT_NEAR(pd[i], solid ? x[0] + 0.5 : 0.0, 1e-12);
  }
  fs::remove_all(dir);
}

TEST(Checkpoint, RoundTrip) {
  RunConfig c;
  c.resolution = 2;
  c.order = 2;
  auto s = channel_scenario(c);
  State st = s.initial;
  for (int k = 0; k < 2; ++k) st = advance_step(s.problem, st);
  const auto dir = scratch("ckpt");
  fs::create_directories(dir);
  save_checkpoint(st, dir / "c.txt");
  const State r = load_checkpoint(dir / "c.txt");
  EXPECT_EQ(r.step, 2);
  EXPECT_EQ(r.time, st.time);
  ASSERT_EQ(r.history.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(r.history[l].x, st.history[l].x);
    EXPECT_EQ(r.history[l].u, st.history[l].u);
    EXPECT_EQ(r.history[l].w, st.history[l].w);
  }
  // restart gives the same next step
  const State a = advance_step(s.problem, st), b = advance_step(s.problem, r);
  EXPECT_EQ(a.current().x, b.current().x);
  std::ofstream(dir / "bad.txt") << "something else\n";
  EXPECT_THROW(load_checkpoint(dir / "bad.txt"), Error);
  fs::remove_all(dir);
}

// convergence tables ---------------------------------------------------------

TEST(Convergence, ExactPowers) {
  const auto a = convergence_table_ratio({1.0, 0.25, 0.0625}, 2.0);
  ASSERT_EQ(a.order.size(), 2u);
  EXPECT_NEAR(a.order[0], 2.0, 1e-14);
  EXPECT_NEAR(a.order[1], 2.0, 1e-14);
  const auto b = convergence_table_ratio({8.0, 1.0, 0.125}, 2.0);
  EXPECT_NEAR(b.order[0], 3.0, 1e-14);
  EXPECT_NEAR(b.order[1], 3.0, 1e-14);
  EXPECT_NEAR(b.min_order(), 3.0, 1e-14);
  const auto h = convergence_table({0.3, 0.1, 0.05}, {9.0, 1.0, 0.25});
  EXPECT_NEAR(h.order[0], 2.0, 1e-14);
  EXPECT_NEAR(h.last_order(), 2.0, 1e-14);
}

TEST(Convergence, Errors) {
  try {
    convergence_table_ratio({1.0, 0.5}, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "need >= 3 levels");
  }
  EXPECT_THROW(convergence_table({0.1, 0.2, 0.05}, {1.0, 0.5, 0.25}), Error);
  EXPECT_THROW(convergence_table({0.1, 0.05, 0.025}, {1.0, 0.0, 0.25}), Error);
  std::ostringstream out;
  write_table(out, convergence_table_ratio({1.0, 0.25, 0.0625}, 2.0, "v"));
  EXPECT_NE(out.str().find("2.000"), std::string::npos);
}

// manufactured solutions -----------------------------------------------------

TEST(Mms, JetsMatchFiniteDifferences) {
  const auto s = mms::biot_trigonometric();
  const Vec<2> x(0.31, 0.77);
  const auto j = mms::vector_jet(s.u, x, 0.0);
  const double e = 1e-5;
  for (int c = 0; c < 2; ++c) {
    const Vec<2> dx(e * (c == 0), e * (c == 1));
    const Vec<2> fd = (mms::eval2(s.u, x + dx, 0) - mms::eval2(s.u, x - dx, 0)) / (2 * e);
    EXPECT_NEAR((j.grad().col(c) - fd).norm(), 0.0, 1e-8);
  }
  const auto p = mms::scalar_jet(s.p, x, 0.0);
  EXPECT_NEAR(p.value, std::sin(mms::kPi * 0.31) * std::sin(mms::kPi * 0.77), 1e-15);
}

TEST(Mms, StokesTrigIsDivergenceFree) {
  const auto s = mms::stokes_trigonometric();
  for (double a : {0.1, 0.45, 0.8})
    for (double b : {0.2, 0.6, 0.95}) EXPECT_NEAR(mms::vector_jet(s.v, {a, b}, 0.0).div(), 0.0, 1e-12);
}

TEST(Mms, ExactSolutionsInTheSpaceAreReproduced) {
  const auto e = mms::stokes_errors(4, mms::stokes_polynomial());
  EXPECT_LT(e.v, 1e-9);
  EXPECT_LT(e.p, 1e-9);
  EXPECT_THROW(mms::resolutions(4, 2), ConfigError);
}

// run command ----------------------------------------------------------------

TEST(Run, UnknownScenarioWritesNothing) {
  RunConfig c;
  c.scenario = "tube_3d";
  c.output_dir = scratch("unknown").string();
  std::ostringstream log;
  EXPECT_THROW(run(c, log), ConfigError);
  EXPECT_FALSE(fs::exists(c.output_dir));
}

TEST(Run, DecayFromRestWritesZeroArtifacts) {
  RunConfig c;
  c.scenario = "decay";
  c.resolution = 2;
  c.pulse_end = 0.0;
  c.t_end = 5e-4;
  c.output_every = 2;
  c.output_dir = scratch("decay").string();
  std::ostringstream log;
  run(c, log);
  const fs::path dir = c.output_dir;
  for (const char* f : {"timeseries.csv", "checkpoint.txt", "config.ini", "step_000000.vtk",
                        "step_000002.vtk", "step_000004.vtk"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_FALSE(fs::exists(dir / "step_000001.vtk"));
  std::ifstream csv(dir / "timeseries.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("t,ux_probe,ur_probe,", 0), 0u);
  EXPECT_NE(line.find(",penalty_defect"), std::string::npos);
  int rows = 0;
  double prev = -1.0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    const double t = std::stod(cell);
    if (rows > 0) EXPECT_NEAR(t - prev, c.dt, 1e-12);
    prev = t;
    while (std::getline(row, cell, ',')) EXPECT_EQ(std::stod(cell), 0.0);
    ++rows;
  }
  EXPECT_EQ(rows, 6);
  const auto st = load_checkpoint(dir / "checkpoint.txt");
  EXPECT_EQ(st.step, 5);
  EXPECT_EQ(st.current().x.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(load_config(dir / "config.ini").scenario, "decay");
  fs::remove_all(dir);
}

TEST(Run, MmsScenarioWritesConvergenceTable) {
  RunConfig c;
  c.scenario = "mms_stokes";
  c.levels = 3;
  c.base_resolution = 2;
  c.output_dir = scratch("mms").string();
  std::ostringstream log;
  run(c, log);
  std::ifstream in(fs::path(c.output_dir) / "convergence.txt");
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("# mms stokes"), std::string::npos);
  EXPECT_THROW(run_mms_study("navier", 3, 2), ConfigError);
  fs::remove_all(c.output_dir);
}
