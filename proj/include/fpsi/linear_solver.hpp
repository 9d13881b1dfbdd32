#pragma once

#include "fpsi/types.hpp"

#include <Eigen/Sparse>
#include <umfpack.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

namespace fpsi {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct SolverOptions {
  /// Reciprocal pivot-growth threshold below which the matrix is declared
  /// numerically singular.
  double pivot_tolerance = 1e-14;
  /// Accepted relative residual |Ax - b| / max(|b|, eps).
  double residual_tolerance = 1e-9;
  /// Extra refinement sweeps with the stored factors before giving up.
  int max_refinement = 4;
};

struct SolveReport {
  double relative_residual = 0.0;
  int refinement_steps = 0;
};

/// Sparse LU factorization (UMFPACK, multifrontal with partial pivoting).
///
/// Solves are const and use per-call workspace, so several threads may solve
/// against one factorization concurrently.
class Factorization {
 public:
  Factorization(const SparseMatrix& a, SolverOptions options = {})
      : a_(a), options_(options) {
    if (a_.rows() != a_.cols()) throw SolverError("matrix is not square");
    a_.makeCompressed();
    if (a_.rows() == 0) return;
    umfpack_di_defaults(control_.data());
    std::array<double, UMFPACK_INFO> info{};
    void* symbolic = nullptr;
    int status = umfpack_di_symbolic(rows(), rows(), a_.outerIndexPtr(), a_.innerIndexPtr(),
                                     a_.valuePtr(), &symbolic, control_.data(), info.data());
    symbolic_.reset(symbolic);
    if (status == UMFPACK_WARNING_singular_matrix || status == UMFPACK_ERROR_invalid_matrix)
      throw SolverError("structurally singular matrix");
    if (status != UMFPACK_OK) throw SolverError("symbolic factorization failed: " + code(status));
    void* numeric = nullptr;
    status = umfpack_di_numeric(a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(),
                                symbolic_.get(), &numeric, control_.data(), info.data());
    numeric_.reset(numeric);
    if (status == UMFPACK_WARNING_singular_matrix) throw SolverError("numerically singular matrix");
    if (status != UMFPACK_OK) throw SolverError("numeric factorization failed: " + code(status));
    rcond_ = info[UMFPACK_RCOND];
    if (!(rcond_ >= options_.pivot_tolerance)) {
      std::ostringstream msg;
      msg << "numerically singular matrix (pivot ratio " << rcond_ << ")";
      throw SolverError(msg.str());
    }
  }

  int rows() const { return static_cast<int>(a_.rows()); }
  const SparseMatrix& matrix() const { return a_; }
  /// Ratio of smallest to largest pivot magnitude reported by UMFPACK.
  double pivot_ratio() const { return rcond_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveReport* report = nullptr) const {
    if (b.size() != rows()) throw SolverError("right-hand side has wrong length");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(rows());
    if (rows() == 0) return x;
    raw_solve(b, x);
    const double bnorm = std::max(b.norm(), std::numeric_limits<double>::min());
    Eigen::VectorXd r = b - a_ * x;
    double rel = r.norm() / bnorm;
    int steps = 0;
    Eigen::VectorXd dx(rows());
    while (rel > options_.residual_tolerance && steps < options_.max_refinement) {
      raw_solve(r, dx);
      x += dx;
      r = b - a_ * x;
      rel = r.norm() / bnorm;
      ++steps;
    }
    if (report) *report = {rel, steps};
    if (!(rel <= options_.residual_tolerance)) {
      std::ostringstream msg;
      msg << "linear solve residual " << rel << " exceeds tolerance "
          << options_.residual_tolerance;
      throw SolverError(msg.str());
    }
    return x;
  }

 private:
  struct SymbolicDeleter {
    void operator()(void* p) const { umfpack_di_free_symbolic(&p); }
  };
  struct NumericDeleter {
    void operator()(void* p) const { umfpack_di_free_numeric(&p); }
  };

  void raw_solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    std::array<double, UMFPACK_INFO> info{};
    const int status = umfpack_di_solve(UMFPACK_A, a_.outerIndexPtr(), a_.innerIndexPtr(),
                                        a_.valuePtr(), x.data(), b.data(), numeric_.get(),
                                        control_.data(), info.data());
    if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
      throw SolverError("triangular solve failed: " + code(status));
  }

  static std::string code(int status) { return "UMFPACK status " + std::to_string(status); }

  SparseMatrix a_;
  SolverOptions options_;
  std::array<double, UMFPACK_CONTROL> control_{};
  std::unique_ptr<void, SymbolicDeleter> symbolic_;
  std::unique_ptr<void, NumericDeleter> numeric_;
  double rcond_ = 1.0;
};

inline Factorization factorize(const SparseMatrix& a, SolverOptions options = {}) {
  return Factorization(a, options);
}

inline Eigen::VectorXd solve(const Factorization& f, const Eigen::VectorXd& b,
                             SolveReport* report = nullptr) {
  return f.solve(b, report);
}

}  // namespace fpsi
