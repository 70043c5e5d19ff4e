#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toombound/site.hpp"

namespace toombound {

enum class Boundary { Torus, AllOnes, AllZeros };

Boundary parse_boundary(const std::string& name);
std::string to_string(Boundary b);

/// A finite box of Z^d with a 0/1 state per cell, bit-packed. State 0 means
/// infected; a set bit marks a 0. Sites outside the box read as the boundary
/// value (torus: wrapped).
class LatticeState {
 public:
  /// All-ones box [lower, lower + extents).
  LatticeState(std::vector<int> extents, Boundary boundary, Site lower);
  /// Box centred on the origin: lower corner -extent/2 on every axis.
  static LatticeState centered(std::vector<int> extents, Boundary boundary);

  int dimension() const { return static_cast<int>(extents_.size()); }
  const std::vector<int>& extents() const { return extents_; }
  Boundary boundary() const { return boundary_; }
  const Site& lower() const { return lower_; }
  std::size_t size() const { return size_; }

  bool zero_at(std::size_t idx) const { return (bits_[idx >> 6] >> (idx & 63)) & 1U; }
  void set_zero(std::size_t idx) { bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63); }
  void set_one(std::size_t idx) { bits_[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63)); }

  /// Index of an in-box site; throws std::out_of_range otherwise.
  std::size_t index_of(const Site& s) const;
  bool in_box(const Site& s) const;
  Site site_of(std::size_t idx) const;

  /// State of any site of Z^d under the boundary convention.
  bool zero(const Site& s) const;
  void set_zero(const Site& s) { set_zero(index_of(s)); }

  std::size_t count_zeros() const;
  bool all_zero() const { return count_zeros() == size_; }
  std::vector<Site> zero_sites() const;

  /// Torus shift by `offset` (cells move from i to i + offset).
  LatticeState shifted(const Site& offset) const;

  bool same_cells(const LatticeState& o) const { return bits_ == o.bits_; }
  /// Every zero of *this is a zero of o.
  bool subset_of(const LatticeState& o) const;

  const std::vector<std::uint64_t>& words() const { return bits_; }

 private:
  std::vector<int> extents_;
  std::vector<std::size_t> strides_;
  Boundary boundary_;
  Site lower_;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace toombound
