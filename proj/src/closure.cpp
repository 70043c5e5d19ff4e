#include <limits>

#include "toombound/dynamics.hpp"

namespace toombound {

namespace {

constexpr std::size_t kOutsideOne = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kOutsideZero = kOutsideOne - 1;

// Index arithmetic for translates on the box.
class Geometry {
 public:
  explicit Geometry(const LatticeState& s) : boundary_(s.boundary()), d_(s.dimension()) {
    std::size_t stride = 1;
    for (int e : s.extents()) {
      ext_.push_back(e);
      stride_.push_back(stride);
      stride *= static_cast<std::size_t>(e);
    }
  }

  void coords(std::size_t idx, Coord* c) const {
    for (int k = 0; k < d_; ++k) {
      c[k] = static_cast<Coord>(idx % static_cast<std::size_t>(ext_[k]));
      idx /= static_cast<std::size_t>(ext_[k]);
    }
  }

  // Cell index of c + sign*off, or one of the outside markers.
  std::size_t shift(const Coord* c, const Site& off, Coord sign) const {
    std::size_t idx = 0;
    for (int k = 0; k < d_; ++k) {
      Coord x = c[k] + sign * off[k];
      if (x < 0 || x >= ext_[k]) {
        if (boundary_ == Boundary::AllOnes) return kOutsideOne;
        if (boundary_ == Boundary::AllZeros) return kOutsideZero;
        x %= ext_[k];
        if (x < 0) x += ext_[k];
      }
      idx += static_cast<std::size_t>(x) * stride_[k];
    }
    return idx;
  }

 private:
  Boundary boundary_;
  int d_;
  std::vector<Coord> ext_;
  std::vector<std::size_t> stride_;
};

bool reads_zero(const LatticeState& s, std::size_t idx) {
  if (idx == kOutsideOne) return false;
  if (idx == kOutsideZero) return true;
  return s.zero_at(idx);
}

bool fires(const LatticeState& s, const Geometry& g, const std::vector<SiteSet>& rules, const Coord* c) {
  for (const SiteSet& rule : rules) {
    bool all = true;
    for (const Site& u : rule) {
      if (!reads_zero(s, g.shift(c, u, 1))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

void check_dims(const LatticeState& s, const UpdateFamily& f) {
  if (s.dimension() != f.dimension()) {
    throw DimensionMismatch("lattice is " + std::to_string(s.dimension()) + "-dimensional, family is " +
                            std::to_string(f.dimension()) + "-dimensional");
  }
}

}  // namespace

ClosureResult closure_run(const LatticeState& initial, const UpdateFamily& family, int max_steps) {
  check_dims(initial, family);
  ClosureResult res{initial, 0, true};
  LatticeState& st = res.state;
  const Geometry geo(st);
  const auto& rules = family.rules();
  const SiteSet support = family.support();
  const std::size_t n = st.size();
  Coord c[kMaxDim];

  // Step 1 has no frontier to go by: every 1-cell is a candidate.
  std::vector<std::size_t> candidates;
  candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!st.zero_at(i)) candidates.push_back(i);
  }
  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t epoch = 0;
  std::vector<std::size_t> fresh;

  while (!candidates.empty()) {
    if (max_steps >= 0 && res.steps >= max_steps) {
      // One more probe decides whether the cap actually cut anything.
      for (std::size_t i : candidates) {
        geo.coords(i, c);
        if (!st.zero_at(i) && fires(st, geo, rules, c)) {
          res.converged = false;
          break;
        }
      }
      break;
    }
    fresh.clear();
    for (std::size_t i : candidates) {
      if (st.zero_at(i)) continue;
      geo.coords(i, c);
      if (fires(st, geo, rules, c)) fresh.push_back(i);
    }
    if (fresh.empty()) break;
    for (std::size_t i : fresh) st.set_zero(i);
    ++res.steps;

    // A site can only fire next if one of its translates covers a fresh zero.
    ++epoch;
    candidates.clear();
    for (std::size_t j : fresh) {
      geo.coords(j, c);
      for (const Site& u : support) {
        std::size_t i = geo.shift(c, u, -1);
        if (i >= n || st.zero_at(i) || seen[i] == epoch) continue;
        seen[i] = epoch;
        candidates.push_back(i);
      }
    }
  }
  return res;
}

LatticeState closure(const LatticeState& initial, const UpdateFamily& family) {
  return closure_run(initial, family).state;
}

ClosureResult closure_reference(const LatticeState& initial, const UpdateFamily& family, int max_steps) {
  check_dims(initial, family);
  ClosureResult res{initial, 0, true};
  while (true) {
    const LatticeState prev = res.state;
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (prev.zero_at(i)) continue;
      const Site site = prev.site_of(i);
      for (const SiteSet& rule : family.rules()) {
        if (std::all_of(rule.begin(), rule.end(), [&](const Site& u) { return prev.zero(site + u); })) {
          fresh.push_back(i);
          break;
        }
      }
    }
    if (fresh.empty()) break;
    if (max_steps >= 0 && res.steps >= max_steps) {
      res.converged = false;
      break;
    }
    for (std::size_t i : fresh) res.state.set_zero(i);
    ++res.steps;
  }
  return res;
}

}  // namespace toombound
