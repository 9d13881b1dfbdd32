#pragma once

#include "fpsi/types.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fpsi {

/// Errors against a refinement parameter (h or dt), coarsest first.
struct ConvergenceTable {
  std::string quantity;
  std::vector<double> size;
  std::vector<double> error;
  /// order[i] compares level i with level i+1.
  std::vector<double> order;

  double min_order() const {
    double m = INFINITY;
    for (double o : order) m = std::min(m, o);
    return m;
  }
  double last_order() const { return order.empty() ? NAN : order.back(); }
};

/// order_i = log(e_i / e_{i+1}) / log(s_i / s_{i+1}).
inline ConvergenceTable convergence_table(const std::vector<double>& size,
                                          const std::vector<double>& error,
                                          std::string quantity = "error") {
  if (size.size() != error.size()) throw Error("sizes and errors differ in length");
  if (size.size() < 3) throw Error("need >= 3 levels");
  for (std::size_t i = 0; i < size.size(); ++i) {
    if (!(size[i] > 0.0) || !(error[i] > 0.0) || !std::isfinite(error[i]))
      throw Error("refinement sizes and errors must be positive and finite");
    if (i > 0 && !(size[i] < size[i - 1])) throw Error("refinement is not monotone");
  }
  ConvergenceTable t{std::move(quantity), size, error, {}};
  for (std::size_t i = 0; i + 1 < size.size(); ++i)
    t.order.push_back(std::log(error[i] / error[i + 1]) / std::log(size[i] / size[i + 1]));
  return t;
}

inline ConvergenceTable convergence_table_ratio(const std::vector<double>& error, double ratio,
                                                std::string quantity = "error") {
  if (!(ratio > 1.0)) throw Error("refinement ratio must exceed 1");
  std::vector<double> size(error.size());
  for (std::size_t i = 0; i < size.size(); ++i) size[i] = std::pow(ratio, -static_cast<double>(i));
  return convergence_table(size, error, std::move(quantity));
}

inline void write_table(std::ostream& out, const ConvergenceTable& t, const std::string& size_name = "h") {
  out << "# " << t.quantity << "\n";
  out << std::setw(12) << size_name << std::setw(16) << "error" << std::setw(10) << "order" << "\n";
  for (std::size_t i = 0; i < t.size.size(); ++i) {
    out << std::setw(12) << std::setprecision(5) << t.size[i] << std::setw(16) << std::scientific
        << std::setprecision(6) << t.error[i] << std::defaultfloat;
    if (i > 0) out << std::setw(10) << std::fixed << std::setprecision(3) << t.order[i - 1] << std::defaultfloat;
    else out << std::setw(10) << "-";
    out << "\n";
  }
}

}  // namespace fpsi
