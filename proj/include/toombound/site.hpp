#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace toombound {

using Coord = std::int64_t;

/// Largest lattice dimension supported by the fixed-capacity Site storage.
inline constexpr int kMaxDim = 6;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A lattice point of Z^d. Coordinates live inline so sets of sites stay
/// cache-friendly during enumeration.
class Site {
 public:
  Site() = default;

  explicit Site(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
      throw std::invalid_argument("site dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
  }

  Site(std::initializer_list<Coord> coords) : Site(static_cast<int>(coords.size())) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  static Site from_vector(const std::vector<Coord>& coords) {
    Site s(static_cast<int>(coords.size()));
    std::copy(coords.begin(), coords.end(), s.c_.begin());
    return s;
  }

  static Site origin(int dim) { return Site(dim); }

  int dim() const { return dim_; }
  Coord operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  Coord& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  bool is_origin() const {
    for (int i = 0; i < dim_; ++i) {
      if (c_[static_cast<std::size_t>(i)] != 0) return false;
    }
    return true;
  }

  std::vector<Coord> to_vector() const { return {c_.begin(), c_.begin() + dim_}; }

  /// Appends one coordinate (used when lifting to space-time).
  Site appended(Coord last) const {
    Site s(dim_ + 1);
    std::copy(c_.begin(), c_.begin() + dim_, s.c_.begin());
    s.c_[static_cast<std::size_t>(dim_)] = last;
    return s;
  }

  Site& operator+=(const Site& o) {
    check_dim(o);
    for (int i = 0; i < dim_; ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
    return *this;
  }
  Site& operator-=(const Site& o) {
    check_dim(o);
    for (int i = 0; i < dim_; ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
    return *this;
  }
  friend Site operator+(Site a, const Site& b) { return a += b; }
  friend Site operator-(Site a, const Site& b) { return a -= b; }
  friend Site operator-(Site a) {
    for (int i = 0; i < a.dim_; ++i) a.c_[static_cast<std::size_t>(i)] = -a.c_[static_cast<std::size_t>(i)];
    return a;
  }
  friend Site operator*(Coord k, Site a) {
    for (int i = 0; i < a.dim_; ++i) a.c_[static_cast<std::size_t>(i)] *= k;
    return a;
  }

  friend Coord dot(const Site& a, const Site& b) {
    a.check_dim(b);
    Coord s = 0;
    for (int i = 0; i < a.dim_; ++i) s += a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(i)];
    return s;
  }

  Coord max_norm() const {
    Coord m = 0;
    for (int i = 0; i < dim_; ++i) m = std::max(m, c_[static_cast<std::size_t>(i)] < 0 ? -c_[static_cast<std::size_t>(i)] : c_[static_cast<std::size_t>(i)]);
    return m;
  }

  // Unused trailing coordinates are always zero, so the defaulted
  // comparison is lexicographic on the live coordinates within one dimension.
  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim_; ++i) {
      if (i) s += ",";
      s += std::to_string(c_[static_cast<std::size_t>(i)]);
    }
    return s + ")";
  }

 private:
  void check_dim(const Site& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch("site dimensions differ: " + str() + " vs " + o.str());
  }

  int dim_ = 0;
  std::array<Coord, kMaxDim> c_{};
};

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(s.dim());
    for (int i = 0; i < s.dim(); ++i) {
      h ^= static_cast<std::uint64_t>(s[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Sorted, duplicate-free list of sites. This is the canonical form used for
/// rules, obstacles and every serialized site set.
using SiteSet = std::vector<Site>;

inline SiteSet canonical(SiteSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const SiteSet& canonical_set, const Site& x) {
  return std::binary_search(canonical_set.begin(), canonical_set.end(), x);
}

inline std::string str(const SiteSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += s[i].str();
  }
  return out + "}";
}

}  // namespace toombound
