#pragma once

#include "fpsi/discretization.hpp"
#include "fpsi/state.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

namespace fpsi {

/// Vertex values of one block, zero on vertices outside its subdomain. The
/// result has `rank` entries per mesh vertex.
template <int Dim>
Eigen::VectorXd vertex_values(const FunctionSpace<Dim>& s, const Eigen::VectorXd& dofs) {
  const Index nv = s.mesh().num_vertices();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nv * s.rank());
  for (Index v = 0; v < nv; ++v) {
    const Index n = s.entity_node(v);
    if (n < 0) continue;
    for (int c = 0; c < s.rank(); ++c) out[v * s.rank() + c] = dofs[s.dof(n, c)];
  }
  return out;
}

/// Legacy ASCII VTK (version 3.0) of one time level on the vertices of the
/// mesh. Points sit at x + u.
template <int Dim>
void write_vtk(const Discretization<Dim>& d, const Fields& f, std::ostream& out,
               const std::string& title = "fpsi") {
  static_assert(Dim == 2 || Dim == 3);
  check_fields(d, f);
  const auto& mesh = d.mesh();
  const Index nv = mesh.num_vertices();
  const Index nc = mesh.num_cells();
  const auto u = vertex_values(d.displacement_space(), f.u);

  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (Index v = 0; v < nv; ++v) {
    for (int c = 0; c < 3; ++c) {
      const double x = c < Dim ? mesh.vertex(v)[c] + u[v * Dim + c] : 0.0;
      out << x << (c == 2 ? '\n' : ' ');
    }
  }
  out << "CELLS " << nc << ' ' << nc * (Dim + 2) << '\n';
  for (Index c = 0; c < nc; ++c) {
    out << Dim + 1;
    for (Index v : mesh.cell(c)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << nc << '\n';
  for (Index c = 0; c < nc; ++c) out << (Dim == 2 ? 5 : 10) << '\n';
  out << "CELL_DATA " << nc << "\nSCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (Index c = 0; c < nc; ++c) out << static_cast<int>(mesh.tag(c)) << '\n';

  out << "POINT_DATA " << nv << '\n';
  auto vectors = [&](const std::string& name, const Eigen::VectorXd& vals) {
    out << "VECTORS " << name << " double\n";
    for (Index v = 0; v < nv; ++v)
      for (int c = 0; c < 3; ++c) out << (c < Dim ? vals[v * Dim + c] : 0.0) << (c == 2 ? '\n' : ' ');
  };
  auto scalars = [&](const std::string& name, const Eigen::VectorXd& vals) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Index v = 0; v < nv; ++v) out << vals[v] << '\n';
  };
  const auto& L = d.layout();
  for (Block b : kAllBlocks) {
    const std::string name(to_string(b));
    const bool vec = b == Block::Vf || b == Block::Vs || b == Block::Q;
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(nv * (vec ? Dim : 1));
    if (d.has(b)) vals = vertex_values(d.space(b), L.extract(f.x, b));
    if (vec) vectors(name, vals);
    else scalars(name, vals);
  }
  vectors("u", u);
}

template <int Dim>
void write_vtk(const Discretization<Dim>& d, const Fields& f, const std::filesystem::path& path,
               const std::string& title = "fpsi") {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_vtk(d, f, out, title);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string vtk_step_name(int step) {
  std::ostringstream s;
  s << "step_" << std::setw(6) << std::setfill('0') << step << ".vtk";
  return s.str();
}

}  // namespace fpsi
