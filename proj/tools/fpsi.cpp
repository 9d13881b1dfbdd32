#include "fpsi/fpsi.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int report(const std::exception& e, int code) {
  std::cerr << "fpsi: " << e.what() << "\n";
  return code;
}

void print_mesh_summary(const fpsi::Mesh<2>& m, std::ostream& out) {
  using fpsi::Marker;
  using fpsi::Subdomain;
  out << "vertices " << m.num_vertices() << "\n"
      << "cells " << m.num_cells() << " (fluid " << m.count_cells(Subdomain::Fluid) << ", solid "
      << m.count_cells(Subdomain::Solid) << ")\n"
      << "volume fluid " << m.subdomain_volume(Subdomain::Fluid) << ", solid "
      << m.subdomain_volume(Subdomain::Solid) << "\n";
  for (Marker mk : fpsi::kAllMarkers) {
    std::size_t n = 0;
    for (const auto& f : m.facets()) n += f.marker == mk;
    out << "facets " << fpsi::to_string(mk) << " " << n << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monolithic fluid / poroelastic structure solver"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", config_path, "INI config file")->required();

  std::string which;
  int levels = 4;
  int base = 0;
  std::string out_dir = ".";
  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("case", which, "stokes, biot or time")
      ->required()
      ->check(CLI::IsMember({"stokes", "biot", "time"}));
  mms->add_option("--levels", levels, "refinement levels (>= 3)");
  mms->add_option("--base", base, "coarsest resolution (default 8 for stokes, 4 for biot)");
  mms->add_option("--output", out_dir, "directory for convergence.txt");

  std::string mesh_path;
  auto* check = app.add_subcommand("check-mesh", "Load a mesh file and print a summary");
  check->add_option("path", mesh_path, "native or Gmsh 2.2 mesh")->required();

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      fpsi::RunConfig c;
      try {
        c = fpsi::load_config(config_path);
        c.validate();
      } catch (const fpsi::Error& e) {
        return report(e, 1);
      }
      fpsi::run(c, std::cout);
    } else if (*mms) {
      if (levels < 3) return report(fpsi::ConfigError("need >= 3 levels"), 1);
      if (base <= 0) base = which == "stokes" ? 8 : 4;
      const auto study = fpsi::run_mms_study(which, levels, base);
      std::filesystem::create_directories(out_dir);
      std::ofstream out(std::filesystem::path(out_dir) / "convergence.txt");
      if (!out) throw fpsi::Error("cannot write convergence.txt");
      fpsi::write_study(out, study);
      fpsi::write_study(std::cout, study);
    } else if (*check) {
      print_mesh_summary(fpsi::load_mesh<2>(mesh_path), std::cout);
    } else {
      std::cout << "fpsi " << FPSI_VERSION_STRING << "\n";
    }
  } catch (const fpsi::ConfigError& e) {
    return report(e, 1);
  } catch (const std::exception& e) {
    return report(e, 2);
  }
  return 0;
}
