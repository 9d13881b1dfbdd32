#pragma once

#include "fpsi/discretization.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace fpsi {

/// Unknowns of one time level: the monolithic vector (v_f, v_s, q, p_f, p_d in
/// block layout), the displacement u and the mesh velocity w, both on the
/// global P2 vector space.
struct Fields {
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd w;
};

/// Time history, newest first: history[0] is level k-1 before a step and the
/// latest solution after it.
struct State {
  int step = 0;
  double time = 0.0;
  std::vector<Fields> history;

  const Fields& current() const {
    if (history.empty()) throw Error("state has no time levels");
    return history.front();
  }
  void push(Fields f, int keep = 2) {
    history.insert(history.begin(), std::move(f));
    if (static_cast<int>(history.size()) > keep) history.resize(keep);
  }
};

template <int Dim>
Fields zero_fields(const Discretization<Dim>& d) {
  const Index nu = d.displacement_space().num_dofs();
  return {Eigen::VectorXd::Zero(d.layout().total()), Eigen::VectorXd::Zero(nu),
          Eigen::VectorXd::Zero(nu)};
}

template <int Dim>
State rest_state(const Discretization<Dim>& d) {
  State s;
  s.history.push_back(zero_fields(d));
  return s;
}

template <int Dim>
void check_fields(const Discretization<Dim>& d, const Fields& f) {
  const Index nu = d.displacement_space().num_dofs();
  if (f.x.size() != d.layout().total() || f.u.size() != nu || f.w.size() != nu)
    throw Error("field vectors do not match the discretization");
}

/// Plain-text checkpoint:
///   fpsi-checkpoint 1
///   step <k> time <t> levels <L>
///   then per level the lines "x <n>", "u <n>", "w <n>" each followed by n values.
inline void save_checkpoint(const State& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
  out << "fpsi-checkpoint 1\n"
      << "step " << s.step << " time " << std::setprecision(17) << s.time << " levels "
      << s.history.size() << "\n";
  auto put = [&](const char* name, const Eigen::VectorXd& v) {
    out << name << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << (i + 1 == v.size() ? "\n" : " ");
  };
  for (const auto& f : s.history) {
    put("x", f.x);
    put("u", f.u);
    put("w", f.w);
  }
  if (!out) throw Error("failed writing checkpoint '" + path.string() + "'");
}

inline State load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint '" + path.string() + "'");
  std::string magic, tag;
  int version = 0;
  in >> magic >> version;
  if (magic != "fpsi-checkpoint" || version != 1) throw Error("not a checkpoint file");
  State s;
  std::size_t levels = 0;
  in >> tag >> s.step;
  if (tag != "step") throw Error("malformed checkpoint header");
  in >> tag >> s.time;
  if (tag != "time") throw Error("malformed checkpoint header");
  in >> tag >> levels;
  if (tag != "levels" || !in) throw Error("malformed checkpoint header");
  auto get = [&](const char* name) {
    Eigen::Index n = 0;
    in >> tag >> n;
    if (tag != name || n < 0) throw Error(std::string("malformed checkpoint block ") + name);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) in >> v[i];
    if (!in) throw Error("truncated checkpoint");
    return v;
  };
  for (std::size_t l = 0; l < levels; ++l) {
    Fields f;
    f.x = get("x");
    f.u = get("u");
    f.w = get("w");
    s.history.push_back(std::move(f));
  }
  return s;
}

}  // namespace fpsi
