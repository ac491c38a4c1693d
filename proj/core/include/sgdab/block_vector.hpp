#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace sgdab {

// Primal variable partitioned into N dense blocks.  Block dimensions are
// fixed at construction; entries must be finite.
class BlockVector {
 public:
  BlockVector() = default;

  explicit BlockVector(std::vector<Eigen::VectorXd> blocks)
      : blocks_(std::move(blocks)) {
    if (blocks_.empty())
      throw std::invalid_argument("BlockVector: need at least one block");
    for (const auto& b : blocks_) {
      if (b.size() == 0)
        throw std::invalid_argument("BlockVector: empty block");
      if (!b.allFinite())
        throw std::invalid_argument("BlockVector: non-finite entry");
    }
  }

  // All-zero vector with the given block dimensions.
  static BlockVector zero(const std::vector<int>& dims) {
    std::vector<Eigen::VectorXd> bs;
    bs.reserve(dims.size());
    for (int d : dims) bs.push_back(Eigen::VectorXd::Zero(d));
    return BlockVector(std::move(bs));
  }

  // Single-block vector.
  static BlockVector single(Eigen::VectorXd v) {
    std::vector<Eigen::VectorXd> bs;
    bs.push_back(std::move(v));
    return BlockVector(std::move(bs));
  }

  int num_blocks() const { return static_cast<int>(blocks_.size()); }

  Eigen::Index total_dim() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks_) n += b.size();
    return n;
  }

  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(blocks_.size());
    for (const auto& b : blocks_) d.push_back(static_cast<int>(b.size()));
    return d;
  }

  const Eigen::VectorXd& block(int i) const { return blocks_.at(i); }
  Eigen::VectorXd& block(int i) { return blocks_.at(i); }

  bool same_shape(const BlockVector& o) const {
    if (num_blocks() != o.num_blocks()) return false;
    for (int i = 0; i < num_blocks(); ++i)
      if (blocks_[i].size() != o.blocks_[i].size()) return false;
    return true;
  }

  Eigen::VectorXd flatten() const {
    Eigen::VectorXd v(total_dim());
    Eigen::Index at = 0;
    for (const auto& b : blocks_) {
      v.segment(at, b.size()) = b;
      at += b.size();
    }
    return v;
  }

  bool all_finite() const {
    for (const auto& b : blocks_)
      if (!b.allFinite()) return false;
    return true;
  }

 private:
  std::vector<Eigen::VectorXd> blocks_;
};

// alpha*u + v, blockwise.
inline BlockVector axpy_block(double alpha, const BlockVector& u,
                              const BlockVector& v) {
  if (!u.same_shape(v))
    throw std::invalid_argument("axpy_block: dimension mismatch");
  std::vector<Eigen::VectorXd> out;
  out.reserve(u.num_blocks());
  for (int i = 0; i < u.num_blocks(); ++i)
    out.push_back(alpha * u.block(i) + v.block(i));
  return BlockVector(std::move(out));
}

inline double norm_sq(const BlockVector& u) {
  double s = 0.0;
  for (int i = 0; i < u.num_blocks(); ++i) s += u.block(i).squaredNorm();
  return s;
}

inline double dot(const BlockVector& u, const BlockVector& v) {
  if (!u.same_shape(v)) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < u.num_blocks(); ++i) s += u.block(i).dot(v.block(i));
  return s;
}

}  // namespace sgdab
