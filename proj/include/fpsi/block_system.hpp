#pragma once

#include "fpsi/linear_solver.hpp"
#include "fpsi/types.hpp"

#include <unsupported/Eigen/SparseExtra>

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace fpsi {

/// Unknown blocks of the monolithic system, in layout order.
enum class Block : int { Vf = 0, Vs = 1, Q = 2, Pf = 3, Pd = 4 };
inline constexpr int kNumBlocks = 5;
inline constexpr std::array<Block, kNumBlocks> kAllBlocks{Block::Vf, Block::Vs, Block::Q,
                                                          Block::Pf, Block::Pd};

inline std::string_view to_string(Block b) {
  switch (b) {
    case Block::Vf: return "v_f";
    case Block::Vs: return "v_s";
    case Block::Q: return "q";
    case Block::Pf: return "p_f";
    case Block::Pd: return "p_d";
  }
  return "?";
}

/// Offsets of the (v_f, v_s, q, p_f, p_d) blocks in the global vector. Absent
/// blocks have size zero.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(const std::array<Index, kNumBlocks>& sizes) : sizes_(sizes) {
    Index off = 0;
    for (int i = 0; i < kNumBlocks; ++i) {
      if (sizes[i] < 0) throw Error("negative block size");
      offsets_[i] = off;
      off += sizes[i];
    }
    total_ = off;
  }

  Index size(Block b) const { return sizes_[static_cast<int>(b)]; }
  Index offset(Block b) const { return offsets_[static_cast<int>(b)]; }
  bool has(Block b) const { return size(b) > 0; }
  Index total() const { return total_; }
  Index global(Block b, Index local) const { return offset(b) + local; }

  Eigen::VectorXd extract(const Eigen::VectorXd& x, Block b) const {
    return x.segment(offset(b), size(b));
  }
  void insert(Eigen::VectorXd& x, Block b, const Eigen::VectorXd& part) const {
    if (part.size() != size(b)) throw Error("block vector has wrong length");
    x.segment(offset(b), size(b)) = part;
  }

 private:
  std::array<Index, kNumBlocks> sizes_{};
  std::array<Index, kNumBlocks> offsets_{};
  Index total_ = 0;
};

struct BlockSystem {
  SparseMatrix A;
  Eigen::VectorXd b;
};

/// Accumulates element contributions into triplets while eliminating
/// constrained DOFs: constrained rows are skipped (they become identity rows in
/// finalize) and constrained columns are moved to the right-hand side.
class SystemBuilder {
 public:
  SystemBuilder(Index n, std::vector<char> constrained, Eigen::VectorXd values)
      : n_(n), constrained_(std::move(constrained)), values_(std::move(values)),
        b_(Eigen::VectorXd::Zero(n)) {
    if (static_cast<Index>(constrained_.size()) != n || values_.size() != n)
      throw Error("constraint data has wrong length");
  }
  explicit SystemBuilder(Index n)
      : SystemBuilder(n, std::vector<char>(n, 0), Eigen::VectorXd::Zero(n)) {}

  Index size() const { return n_; }
  bool constrained(Index i) const { return constrained_[i] != 0; }

  void add(Index i, Index j, double v) {
    if (constrained_[i] || v == 0.0) return;
    if (constrained_[j]) {
      b_[i] -= v * values_[j];
      return;
    }
    triplets_.emplace_back(i, j, v);
  }

  void add_rhs(Index i, double v) {
    if (!constrained_[i]) b_[i] += v;
  }

  template <class Rows, class Cols, class Local>
  void add_block(const Rows& rows, const Cols& cols, const Local& local) {
    for (Eigen::Index r = 0; r < local.rows(); ++r)
      for (Eigen::Index c = 0; c < local.cols(); ++c) add(rows[r], cols[c], local(r, c));
  }

  template <class Rows, class Local>
  void add_rhs_block(const Rows& rows, const Local& local) {
    for (Eigen::Index r = 0; r < local.size(); ++r) add_rhs(rows[r], local[r]);
  }

  BlockSystem finalize() {
    for (Index i = 0; i < n_; ++i)
      if (constrained_[i]) {
        triplets_.emplace_back(i, i, 1.0);
        b_[i] = values_[i];
      }
    BlockSystem s;
    s.A.resize(n_, n_);
    s.A.setFromTriplets(triplets_.begin(), triplets_.end());
    s.A.prune(0.0);
    s.A.makeCompressed();
    s.b = std::move(b_);
    triplets_.clear();
    return s;
  }

 private:
  Index n_;
  std::vector<char> constrained_;
  Eigen::VectorXd values_;
  Eigen::VectorXd b_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

/// Matrix Market dump of A (and b as a dense vector next to it).
inline void save_market(const BlockSystem& s, const std::filesystem::path& matrix_path) {
  if (!Eigen::saveMarket(s.A, matrix_path.string()))
    throw Error("cannot write matrix file '" + matrix_path.string() + "'");
  auto rhs = matrix_path;
  rhs.replace_extension(".rhs.mtx");
  if (!Eigen::saveMarketVector(s.b, rhs.string()))
    throw Error("cannot write vector file '" + rhs.string() + "'");
}

}  // namespace fpsi
