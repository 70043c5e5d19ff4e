#include "toombound/lattice.hpp"

#include <bit>
#include <stdexcept>

namespace toombound {

Boundary parse_boundary(const std::string& name) {
  if (name == "torus") return Boundary::Torus;
  if (name == "all-ones" || name == "ones") return Boundary::AllOnes;
  if (name == "all-zeros" || name == "zeros") return Boundary::AllZeros;
  throw std::invalid_argument("unknown boundary '" + name + "' (torus, all-ones, all-zeros)");
}

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Torus: return "torus";
    case Boundary::AllOnes: return "all-ones";
    case Boundary::AllZeros: return "all-zeros";
  }
  return "?";
}

LatticeState::LatticeState(std::vector<int> extents, Boundary boundary, Site lower)
    : extents_(std::move(extents)), boundary_(boundary), lower_(lower) {
  if (extents_.empty() || static_cast<int>(extents_.size()) > kMaxDim) {
    throw std::invalid_argument("lattice dimension out of range");
  }
  if (lower_.dim() != dimension()) throw DimensionMismatch("lower corner has wrong dimension");
  size_ = 1;
  strides_.resize(extents_.size());
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    if (extents_[k] < 1) throw std::invalid_argument("lattice extents must be >= 1");
    strides_[k] = size_;
    size_ *= static_cast<std::size_t>(extents_[k]);
  }
  bits_.assign((size_ + 63) / 64, 0);
}

LatticeState LatticeState::centered(std::vector<int> extents, Boundary boundary) {
  Site lo(static_cast<int>(extents.size()));
  for (std::size_t k = 0; k < extents.size(); ++k) lo[static_cast<int>(k)] = -(extents[k] / 2);
  return LatticeState(std::move(extents), boundary, lo);
}

bool LatticeState::in_box(const Site& s) const {
  if (s.dim() != dimension()) throw DimensionMismatch("site " + s.str() + " has wrong dimension");
  for (int k = 0; k < dimension(); ++k) {
    Coord c = s[k] - lower_[k];
    if (c < 0 || c >= extents_[static_cast<std::size_t>(k)]) return false;
  }
  return true;
}

std::size_t LatticeState::index_of(const Site& s) const {
  if (!in_box(s)) throw std::out_of_range("site " + s.str() + " outside the lattice box");
  std::size_t idx = 0;
  for (int k = 0; k < dimension(); ++k) idx += static_cast<std::size_t>(s[k] - lower_[k]) * strides_[static_cast<std::size_t>(k)];
  return idx;
}

Site LatticeState::site_of(std::size_t idx) const {
  Site s(dimension());
  for (int k = 0; k < dimension(); ++k) {
    const auto e = static_cast<std::size_t>(extents_[static_cast<std::size_t>(k)]);
    s[k] = lower_[k] + static_cast<Coord>(idx % e);
    idx /= e;
  }
  return s;
}

bool LatticeState::zero(const Site& s) const {
  if (in_box(s)) return zero_at(index_of(s));
  switch (boundary_) {
    case Boundary::AllOnes: return false;
    case Boundary::AllZeros: return true;
    case Boundary::Torus: break;
  }
  Site w = s;
  for (int k = 0; k < dimension(); ++k) {
    const Coord e = extents_[static_cast<std::size_t>(k)];
    Coord c = (w[k] - lower_[k]) % e;
    if (c < 0) c += e;
    w[k] = lower_[k] + c;
  }
  return zero_at(index_of(w));
}

std::size_t LatticeState::count_zeros() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<Site> LatticeState::zero_sites() const {
  std::vector<Site> out;
  for (std::size_t i = 0; i < size_; ++i) {
    if (zero_at(i)) out.push_back(site_of(i));
  }
  return out;
}

LatticeState LatticeState::shifted(const Site& offset) const {
  if (boundary_ != Boundary::Torus) throw std::logic_error("shifted() needs a torus");
  LatticeState out(extents_, boundary_, lower_);
  for (std::size_t i = 0; i < size_; ++i) {
    if (!zero_at(i)) continue;
    Site s = site_of(i) + offset;
    for (int k = 0; k < dimension(); ++k) {
      const Coord e = extents_[static_cast<std::size_t>(k)];
      Coord c = (s[k] - lower_[k]) % e;
      if (c < 0) c += e;
      s[k] = lower_[k] + c;
    }
    out.set_zero(s);
  }
  return out;
}

bool LatticeState::subset_of(const LatticeState& o) const {
  if (o.bits_.size() != bits_.size()) return false;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    if (bits_[w] & ~o.bits_[w]) return false;
  }
  return true;
}

}  // namespace toombound
