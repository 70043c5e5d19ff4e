#include "toombound/family.hpp"

#include <algorithm>
#include <numeric>

namespace toombound {

UpdateFamily UpdateFamily::make(int dimension, std::vector<SiteSet> rules) {
  if (dimension < 1 || dimension > kMaxDim) {
    throw FamilyError("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " + std::to_string(dimension));
  }
  if (rules.empty()) throw FamilyError("update family has no rules");
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (rules[r].empty()) throw FamilyError("rule " + std::to_string(r) + " is empty");
    for (const Site& s : rules[r]) {
      if (s.dim() != dimension) {
        throw FamilyError("rule " + std::to_string(r) + " has site " + s.str() + " of dimension " +
                          std::to_string(s.dim()) + ", expected " + std::to_string(dimension));
      }
      if (s.is_origin()) throw FamilyError("rule " + std::to_string(r) + " contains the origin");
    }
    rules[r] = canonical(std::move(rules[r]));
  }
  std::sort(rules.begin(), rules.end());
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());

  UpdateFamily f;
  f.dimension_ = dimension;
  f.rules_ = std::move(rules);
  return f;
}

SiteSet UpdateFamily::support() const {
  SiteSet all;
  for (const auto& r : rules_) all.insert(all.end(), r.begin(), r.end());
  return canonical(std::move(all));
}

ObstacleFamily::ObstacleFamily(int dimension, std::vector<SiteSet> obstacles) : dimension_(dimension) {
  for (auto& o : obstacles) {
    for (const Site& s : o) {
      if (s.dim() != dimension) throw DimensionMismatch("obstacle site " + s.str() + " has wrong dimension");
    }
    o = canonical(std::move(o));
  }
  std::sort(obstacles.begin(), obstacles.end());
  obstacles.erase(std::unique(obstacles.begin(), obstacles.end()), obstacles.end());
  obstacles_ = std::move(obstacles);
}

bool ObstacleFamily::contains(const SiteSet& obstacle) const {
  return std::binary_search(obstacles_.begin(), obstacles_.end(), canonical(obstacle));
}

ObstacleFamily build_obstacles(const UpdateFamily& family, bool minimal_only) {
  const auto& rules = family.rules();
  std::vector<SiteSet> picks;
  std::vector<std::size_t> idx(rules.size(), 0);
  // Odometer over the product of rules.
  while (true) {
    SiteSet pick;
    pick.reserve(rules.size());
    for (std::size_t r = 0; r < rules.size(); ++r) pick.push_back(rules[r][idx[r]]);
    picks.push_back(canonical(std::move(pick)));

    std::size_t r = 0;
    for (; r < rules.size(); ++r) {
      if (++idx[r] < rules[r].size()) break;
      idx[r] = 0;
    }
    if (r == rules.size()) break;
  }
  ObstacleFamily all(family.dimension(), std::move(picks));
  if (!minimal_only) return all;

  std::vector<SiteSet> minimal;
  for (const auto& a : all.obstacles()) {
    bool dominated = false;
    for (const auto& b : all.obstacles()) {
      if (b.size() < a.size() && std::includes(a.begin(), a.end(), b.begin(), b.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) minimal.push_back(a);
  }
  return ObstacleFamily(family.dimension(), std::move(minimal));
}

Direction Direction::from(const Site& v) {
  Coord g = 0;
  for (int i = 0; i < v.dim(); ++i) g = std::gcd(g, v[i]);
  if (g == 0) throw std::invalid_argument("direction must be non-zero");
  Direction d;
  d.v_ = v;
  for (int i = 0; i < v.dim(); ++i) d.v_[i] /= g;
  return d;
}

namespace {

void check_dims(const Direction& dir, int dim) {
  if (dir.dim() != dim) {
    throw DimensionMismatch("direction " + dir.vec().str() + " does not match dimension " + std::to_string(dim));
  }
}

}  // namespace

bool is_stable(const Direction& dir, const ObstacleFamily& obstacles) {
  check_dims(dir, obstacles.dimension());
  return std::any_of(obstacles.obstacles().begin(), obstacles.obstacles().end(), [&](const SiteSet& a) {
    return std::all_of(a.begin(), a.end(), [&](const Site& i) { return dot(i, dir.vec()) >= 0; });
  });
}

bool is_strictly_stable(const Direction& dir, const ObstacleFamily& obstacles) {
  return !strict_witnesses(dir, obstacles).empty();
}

std::vector<std::size_t> strict_witnesses(const Direction& dir, const ObstacleFamily& obstacles) {
  check_dims(dir, obstacles.dimension());
  std::vector<std::size_t> out;
  const auto& obs = obstacles.obstacles();
  for (std::size_t k = 0; k < obs.size(); ++k) {
    if (std::all_of(obs[k].begin(), obs[k].end(), [&](const Site& i) { return dot(i, dir.vec()) > 0; })) {
      out.push_back(k);
    }
  }
  return out;
}

bool is_stable_by_rules(const Direction& dir, const UpdateFamily& family) {
  check_dims(dir, family.dimension());
  return std::all_of(family.rules().begin(), family.rules().end(), [&](const SiteSet& u) {
    return std::any_of(u.begin(), u.end(), [&](const Site& i) { return dot(i, dir.vec()) >= 0; });
  });
}

std::vector<Direction> primitive_directions(int dimension, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<Direction> out;
  Site v(dimension);
  for (int i = 0; i < dimension; ++i) v[i] = -window;
  while (true) {
    Coord g = 0;
    for (int i = 0; i < dimension; ++i) g = std::gcd(g, v[i]);
    if (g == 1) out.push_back(Direction::from(v));

    // Odometer with the last coordinate fastest gives lexicographic order.
    int i = dimension - 1;
    for (; i >= 0; --i) {
      if (++v[i] <= window) break;
      v[i] = -window;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<StabilityRow> stability_profile(const ObstacleFamily& obstacles, int window) {
  std::vector<StabilityRow> rows;
  for (const Direction& d : primitive_directions(obstacles.dimension(), window)) {
    rows.push_back({d, is_stable(d, obstacles), is_strictly_stable(d, obstacles)});
  }
  return rows;
}

}  // namespace toombound
