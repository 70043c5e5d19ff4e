#include <gtest/gtest.h>

#include <set>

#include "gen.hpp"
#include "toombound/builtins.hpp"
#include "toombound/family.hpp"
#include "toombound/json_io.hpp"

using namespace toombound;

namespace {

SiteSet S(std::initializer_list<Site> sites) { return canonical(SiteSet(sites)); }

// Independent transversal builder: every pick tuple, as a set of sets.
std::set<SiteSet> picks(const UpdateFamily& f) {
  std::set<SiteSet> out{SiteSet{}};
  for (const SiteSet& rule : f.rules()) {
    std::set<SiteSet> next;
    for (const SiteSet& partial : out) {
      for (const Site& s : rule) {
        SiteSet grown = partial;
        grown.push_back(s);
        next.insert(canonical(std::move(grown)));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST(Family, DtbpHasFourObstacles) {
  const ObstacleFamily obs = build_obstacles(builtins::dtbp());
  ASSERT_EQ(obs.size(), 4U);
  EXPECT_TRUE(obs.contains(S({{1, 0}, {0, 1}})));
  EXPECT_TRUE(obs.contains(S({{0, 1}, {-1, -1}})));
  EXPECT_TRUE(obs.contains(S({{1, 0}, {-1, -1}})));
  EXPECT_TRUE(obs.contains(S({{1, 0}, {0, 1}, {-1, -1}})));
  EXPECT_EQ(build_obstacles(builtins::dtbp(), true).size(), 3U);
}

TEST(Family, SingletonRules) {
  auto one = UpdateFamily::make(2, {S({{1, 0}})});
  ASSERT_EQ(build_obstacles(one).size(), 1U);
  EXPECT_EQ(build_obstacles(one).obstacles()[0], S({{1, 0}}));

  auto twice = UpdateFamily::make(2, {S({{0, 1}}), S({{0, 1}})});
  ASSERT_EQ(build_obstacles(twice).size(), 1U);
  EXPECT_EQ(build_obstacles(twice).obstacles()[0], S({{0, 1}}));
}

TEST(Family, RejectsBadRules) {
  EXPECT_THROW(UpdateFamily::make(2, {}), FamilyError);
  EXPECT_THROW(UpdateFamily::make(2, {SiteSet{}}), FamilyError);
  EXPECT_THROW(UpdateFamily::make(2, {S({{0, 0}, {1, 0}})}), FamilyError);
  EXPECT_THROW(UpdateFamily::make(2, {S({{1, 0, 0}})}), std::invalid_argument);
}

TEST(Family, DtbpStability) {
  const ObstacleFamily obs = build_obstacles(builtins::dtbp());
  auto dir = [](Coord x, Coord y) { return Direction::from(Site{x, y}); };
  EXPECT_TRUE(is_stable(dir(1, 1), obs));
  EXPECT_TRUE(is_strictly_stable(dir(1, 1), obs));
  EXPECT_FALSE(is_stable(dir(-1, -1), obs));
  EXPECT_TRUE(is_strictly_stable(dir(-2, 1), obs));
  EXPECT_TRUE(is_strictly_stable(dir(1, -2), obs));
  EXPECT_FALSE(is_strictly_stable(dir(1, 0), obs));
  EXPECT_THROW(Direction::from(Site{0, 0}), std::invalid_argument);
  EXPECT_EQ(Direction::from(Site{3, 3}), dir(1, 1));
}

TEST(Family, StabilityProfileWindowOne) {
  const auto rows = stability_profile(build_obstacles(builtins::dtbp()), 1);
  ASSERT_EQ(rows.size(), 8U);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].direction, rows[i].direction);
  for (const auto& r : rows) {
    if (r.strict) EXPECT_TRUE(r.stable);
    if (r.direction.vec() == Site{1, 1}) EXPECT_TRUE(r.strict);
    if (r.direction.vec() == Site{-1, -1}) EXPECT_FALSE(r.stable);
  }
}

TEST(Family, SingletonUpRuleProfile) {
  const auto fam = UpdateFamily::make(2, {S({{0, 1}})});
  for (const auto& r : stability_profile(build_obstacles(fam), 1)) {
    EXPECT_EQ(r.stable, r.direction.vec()[1] >= 0) << r.direction.vec().str();
  }
}

TEST(Family, NestedWindowsAgree) {
  gen::Engine rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto obs = build_obstacles(gen::family(rng, 2));
    const auto small = stability_profile(obs, 1);
    const auto big = stability_profile(obs, 2);
    for (const auto& r : small) {
      auto it = std::find_if(big.begin(), big.end(), [&](const StabilityRow& b) { return b.direction == r.direction; });
      ASSERT_NE(it, big.end());
      EXPECT_EQ(it->stable, r.stable);
      EXPECT_EQ(it->strict, r.strict);
    }
  }
}

TEST(Family, PrimitiveDirections) {
  const auto dirs = primitive_directions(2, 2);
  EXPECT_EQ(dirs.size(), 16U);  // 24 non-zero points, minus 8 non-primitive ones
  for (const auto& d : dirs) {
    Coord g = std::gcd(d.vec()[0], d.vec()[1]);
    EXPECT_EQ(std::abs(g), 1);
  }
  EXPECT_EQ(primitive_directions(1, 3).size(), 2U);
}

// Every obstacle meets every rule, and the obstacle set is exactly the
// deduplicated pick family.
TEST(FamilyProperty, TransversalsMatchPickFamily) {
  gen::Engine rng(2024);
  for (int round = 0; round < 300; ++round) {
    const int d = gen::uniform_int(rng, 1, 3);
    const auto fam = gen::family(rng, d);
    const auto obs = build_obstacles(fam);
    std::size_t product = 1;
    for (const SiteSet& u : fam.rules()) product *= u.size();
    EXPECT_LE(obs.size(), product);
    for (const SiteSet& a : obs.obstacles()) {
      for (const SiteSet& u : fam.rules()) {
        const bool meets = std::any_of(a.begin(), a.end(), [&](const Site& s) {
          return std::binary_search(u.begin(), u.end(), s);
        });
        EXPECT_TRUE(meets);
      }
    }
    const auto expected = picks(fam);
    EXPECT_EQ(std::set<SiteSet>(obs.obstacles().begin(), obs.obstacles().end()), expected);
  }
}

// Obstacle-side and rule-side stability agree on 500 random families.
TEST(FamilyProperty, DualCharacterization) {
  gen::Engine rng(500);
  std::size_t stable = 0, unstable = 0;
  for (int round = 0; round < 500; ++round) {
    const int d = gen::uniform_int(rng, 1, 3);
    const auto fam = gen::family(rng, d);
    const auto obs = build_obstacles(fam);
    const int window = d == 3 ? 2 : 3;
    for (const Direction& v : primitive_directions(d, window)) {
      const bool st = is_stable(v, obs);
      ASSERT_EQ(st, is_stable_by_rules(v, fam)) << "round " << round << " v=" << v.vec().str();
      (st ? stable : unstable) += 1;
    }
  }
  // Both answers occur often, so the agreement is not vacuous.
  EXPECT_GT(stable, 1000U);
  EXPECT_GT(unstable, 1000U);
}

TEST(FamilyProperty, ScaleInvarianceAndStrictImpliesStable) {
  gen::Engine rng(77);
  for (int round = 0; round < 200; ++round) {
    const int d = gen::uniform_int(rng, 2, 3);
    const auto obs = build_obstacles(gen::family(rng, d));
    for (const Direction& v : primitive_directions(d, 1)) {
      const bool st = is_stable(v, obs);
      const bool strict = is_strictly_stable(v, obs);
      if (strict) EXPECT_TRUE(st);
      for (Coord k = 2; k <= 4; ++k) {
        Site scaled = v.vec();
        for (int i = 0; i < d; ++i) scaled[i] *= k;
        // Sign checks on the raw multiple, bypassing the primitive rescale.
        bool st_k = false;
        bool strict_k = false;
        for (const SiteSet& a : obs.obstacles()) {
          bool nonneg = true;
          bool pos = true;
          for (const Site& s : a) {
            nonneg = nonneg && dot(s, scaled) >= 0;
            pos = pos && dot(s, scaled) > 0;
          }
          st_k = st_k || nonneg;
          strict_k = strict_k || pos;
        }
        EXPECT_EQ(st, st_k);
        EXPECT_EQ(strict, strict_k);
      }
    }
  }
}

TEST(FamilyIo, ParsesAndRoundTrips) {
  const std::string text = R"({"dimension": 2, "rules": [[[1,0],[0,1]], [[-1,-1],[0,1]], [[-1,-1],[1,0]]]})";
  const UpdateFamily f = parse_family(text);
  EXPECT_EQ(f, builtins::dtbp());
  EXPECT_EQ(parse_family(family_to_json(f).dump()), f);
}

TEST(FamilyIo, ErrorsCarryPositions) {
  try {
    parse_family("{\"dimension\": 2,\n \"rules\": [[[0,0],[1,0]]]}");
    FAIL() << "origin accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
    EXPECT_NE(std::string(e.what()).find("origin"), std::string::npos) << e.what();
  }
  try {
    parse_family("{\"dimension\": 2,\n \"rules\": [[[1,0,3]]]}");
    FAIL() << "wrong dimension accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
  }
  EXPECT_THROW(parse_family("{\"dimension\": 2, \"rules\": [[]]}"), ParseError);
  EXPECT_THROW(parse_family("{\"dimension\": 2, \"rules\": [[[1,0]]], \"extra\": 1}"), ParseError);
  try {
    parse_family("{\"dimension\": 2,\n\n \"rules\": [[[1,0]]");
    FAIL() << "truncated JSON accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
}
