#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toombound/site.hpp"

namespace toombound {

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bootstrap percolation update family: finite non-empty rule sets in
/// Z^d \ {o}. Rules are canonical site sets and the rule list is sorted and
/// deduplicated, so two families with the same rules compare equal.
class UpdateFamily {
 public:
  /// Throws FamilyError on an empty rule list, an empty rule, a rule
  /// containing the origin, or a site of the wrong dimension.
  static UpdateFamily make(int dimension, std::vector<SiteSet> rules);

  int dimension() const { return dimension_; }
  const std::vector<SiteSet>& rules() const { return rules_; }

  /// All sites occurring in some rule.
  SiteSet support() const;

  friend bool operator==(const UpdateFamily&, const UpdateFamily&) = default;

 private:
  int dimension_ = 0;
  std::vector<SiteSet> rules_;
};

/// The dual family of transversals: every set obtained by picking one site
/// from each rule. A state-1 obstacle at i+A blocks i from turning 0.
class ObstacleFamily {
 public:
  ObstacleFamily(int dimension, std::vector<SiteSet> obstacles);

  int dimension() const { return dimension_; }
  const std::vector<SiteSet>& obstacles() const { return obstacles_; }
  std::size_t size() const { return obstacles_.size(); }

  bool contains(const SiteSet& obstacle) const;

  friend bool operator==(const ObstacleFamily&, const ObstacleFamily&) = default;

 private:
  int dimension_ = 0;
  std::vector<SiteSet> obstacles_;
};

/// Pick-sets of the family, canonicalized and deduplicated. With
/// `minimal_only`, supersets of other obstacles are dropped.
ObstacleFamily build_obstacles(const UpdateFamily& family, bool minimal_only = false);

/// Primitive integer direction (gcd of coordinates is 1). Stability tests
/// only look at signs of scalar products, so the primitive representative
/// stands for the whole ray.
class Direction {
 public:
  /// Throws std::invalid_argument on the zero vector.
  static Direction from(const Site& v);

  const Site& vec() const { return v_; }
  int dim() const { return v_.dim(); }

  friend bool operator==(const Direction&, const Direction&) = default;
  friend auto operator<=>(const Direction&, const Direction&) = default;

 private:
  Site v_;
};

bool is_stable(const Direction& dir, const ObstacleFamily& obstacles);
bool is_strictly_stable(const Direction& dir, const ObstacleFamily& obstacles);

/// Indices of obstacles with strictly positive product against `dir` at
/// every site, in canonical obstacle order.
std::vector<std::size_t> strict_witnesses(const Direction& dir, const ObstacleFamily& obstacles);

/// Checks the rule-side characterization directly: every rule has a site with
/// non-negative product. Independent of the obstacle family.
bool is_stable_by_rules(const Direction& dir, const UpdateFamily& family);

struct StabilityRow {
  Direction direction;
  bool stable = false;
  bool strict = false;
};

/// Every primitive direction with max-norm <= window, lexicographic order.
std::vector<Direction> primitive_directions(int dimension, int window);

std::vector<StabilityRow> stability_profile(const ObstacleFamily& obstacles, int window);

}  // namespace toombound
