#include <gtest/gtest.h>

#include <set>

#include "gen.hpp"
#include "toombound/builtins.hpp"
#include "toombound/noisy_ca.hpp"

using namespace toombound;

namespace {

SiteSet S(std::initializer_list<Site> sites) { return canonical(SiteSet(sites)); }

std::set<SiteSet> rule_set(const UpdateFamily& f) { return {f.rules().begin(), f.rules().end()}; }

}  // namespace

TEST(Lift, NecMatchesBuiltin) {
  const UpdateFamily lifted = lift_to_bootstrap(nec_rule());
  EXPECT_EQ(lifted, builtins::nec_lift());
  EXPECT_EQ(lifted.dimension(), 3);
  EXPECT_EQ(rule_set(lifted), (std::set<SiteSet>{S({{0, 0, -1}, {1, 0, -1}}), S({{0, 1, -1}, {0, 0, -1}}),
                                                  S({{1, 0, -1}, {0, 1, -1}})}));
}

TEST(Lift, LinearMapCarriesNecOntoDtbpShape) {
  const UpdateFamily nec = builtins::nec_lift();
  const UpdateFamily dtbp = builtins::dtbp();
  std::set<SiteSet> image;
  for (const SiteSet& u : nec.rules()) {
    SiteSet r;
    for (const Site& s : u) r.push_back(builtins::apply_t(s));
    image.insert(canonical(std::move(r)));
  }
  EXPECT_EQ(image, rule_set(builtins::nec_lift_prime()));
  for (const SiteSet& u : dtbp.rules()) {
    SiteSet r;
    for (const Site& s : u) r.push_back(s.appended(-1));
    EXPECT_TRUE(image.count(canonical(std::move(r))));
  }
}

TEST(Lift, SmallRules) {
  const auto identity = MonotoneRule::make(1, {S({Site{0}})});
  EXPECT_EQ(rule_set(lift_to_bootstrap(identity)), (std::set<SiteSet>{S({{0, -1}})}));
  const auto conj = MonotoneRule::make(2, {S({{0, 0}}), S({{1, 0}})});
  EXPECT_EQ(rule_set(lift_to_bootstrap(conj)), (std::set<SiteSet>{S({{0, 0, -1}}), S({{1, 0, -1}})}));
  EXPECT_THROW(MonotoneRule::make(2, {}), std::invalid_argument);
  EXPECT_THROW(MonotoneRule::make(2, {SiteSet{}}), std::invalid_argument);
}

// phi(x) = 1 iff some obstacle of the lifted family's time slice is all 1,
// over every input on the rule's cells.
TEST(LiftProperty, TruthTableDuality) {
  gen::Engine rng(12);
  std::vector<MonotoneRule> rules{nec_rule()};
  for (int i = 0; i < 60; ++i) {
    std::vector<SiteSet> zs;
    const int n = gen::uniform_int(rng, 1, 4);
    for (int k = 0; k < n; ++k) {
      SiteSet z;
      const int m = gen::uniform_int(rng, 1, 3);
      for (int j = 0; j < m; ++j) z.push_back(Site{gen::uniform_int(rng, 0, 3), gen::uniform_int(rng, 0, 2)});
      zs.push_back(canonical(std::move(z)));
    }
    rules.push_back(MonotoneRule::make(2, zs));
  }
  for (const MonotoneRule& rule : rules) {
    SiteSet cells;
    for (const auto& z : rule.zero_sets()) cells.insert(cells.end(), z.begin(), z.end());
    cells = canonical(std::move(cells));
    ASSERT_LE(cells.size(), 12U);
    const ObstacleFamily obs = build_obstacles(lift_to_bootstrap(rule));
    const Site o = Site::origin(2);
    for (std::uint32_t mask = 0; mask < (1U << cells.size()); ++mask) {
      auto is_zero = [&](const Site& s) {
        auto it = std::lower_bound(cells.begin(), cells.end(), s);
        return it != cells.end() && *it == s && ((mask >> (it - cells.begin())) & 1U);
      };
      const bool one = rule.output_one(o, is_zero);
      bool blocked = false;
      for (const SiteSet& a : obs.obstacles()) {
        bool all_one = true;
        for (const Site& s : a) {
          EXPECT_EQ(s[2], -1);
          all_one = all_one && !is_zero(Site{s[0], s[1]});
        }
        blocked = blocked || all_one;
      }
      ASSERT_EQ(one, blocked) << "mask " << mask;
    }
  }
}

TEST(NoisyCa, NoNoiseKeepsAllOnes) {
  NoisyPlan plan;
  plan.p = 0.0;
  plan.size = 64;
  plan.steps = 50;
  const auto c = noisy_ca_run(nec_rule(), plan);
  ASSERT_EQ(c.ones.size(), 51U);
  for (std::size_t t = 0; t < c.ones.size(); ++t) EXPECT_EQ(c.density(t), 1.0);
  EXPECT_EQ(c.csv().substr(0, 13), "step,density\n");
}

TEST(NoisyCa, PlanValidation) {
  NoisyPlan plan;
  plan.size = 48;
  EXPECT_THROW(plan.validate(true), std::invalid_argument);
  EXPECT_NO_THROW(plan.validate(false));
  plan.size = 64;
  plan.p = -0.1;
  EXPECT_THROW(plan.validate(true), std::invalid_argument);
  EXPECT_THROW(noisy_ca_run(MonotoneRule::make(3, {S({{1, 0, 0}})}), NoisyPlan{}), std::invalid_argument);
}

TEST(NoisyCa, PackedMatchesReference) {
  gen::Engine rng(8);
  std::vector<MonotoneRule> rules{nec_rule(), MonotoneRule::make(2, {S({{0, 0}, {-1, 0}}), S({{0, -1}, {2, 1}})})};
  for (int i = 0; i < 8; ++i) {
    NoisyPlan plan;
    plan.p = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    plan.size = 64 * gen::uniform_int(rng, 1, 2);
    plan.steps = gen::uniform_int(rng, 1, 40);
    plan.trials = gen::uniform_int(rng, 1, 2);
    plan.seed = rng();
    for (const auto& rule : rules) {
      const auto a = noisy_ca_run(rule, plan);
      const auto b = noisy_ca_run_reference(rule, plan);
      ASSERT_EQ(a.ones, b.ones) << i;
      ASSERT_EQ(a.final_state, b.final_state) << i;
    }
  }
}

TEST(NoisyCa, MonotoneInNoise) {
  NoisyPlan plan;
  plan.size = 64;
  plan.steps = 100;
  plan.seed = 3;
  std::vector<std::uint64_t> prev;
  for (double p : {0.0, 0.02, 0.05, 0.1, 0.3}) {
    plan.p = p;
    const auto c = noisy_ca_run(nec_rule(), plan);
    if (!prev.empty()) {
      for (std::size_t t = 0; t < c.ones.size(); ++t) EXPECT_LE(c.ones[t], prev[t]);
    }
    prev = c.ones;
  }
}

TEST(NoisyCa, NecSmallTorusRegimes) {
  NoisyPlan plan;
  plan.size = 64;
  plan.steps = 400;
  plan.seed = 1;
  plan.p = 0.01;
  EXPECT_GE(noisy_ca_run(nec_rule(), plan).terminal(), 0.5);
  plan.p = 0.3;
  EXPECT_LE(noisy_ca_run(nec_rule(), plan).terminal(), 0.01);
}

TEST(Eroder, Probes) {
  const auto nec = eroder_probe(nec_rule(), S({{0, 0}}), 4);
  EXPECT_TRUE(nec.erodes);
  EXPECT_LE(nec.steps, 4);
  const auto empty = eroder_probe(nec_rule(), {}, 4);
  EXPECT_TRUE(empty.erodes);
  EXPECT_EQ(empty.steps, 0);
  const auto identity = MonotoneRule::make(2, {S({{0, 0}})});
  const auto stuck = eroder_probe(identity, S({{0, 0}}), 50);
  EXPECT_FALSE(stuck.erodes);
  EXPECT_TRUE(stuck.stuck);
  // A larger NEC island still erodes.
  SiteSet block;
  for (Coord x = 0; x < 5; ++x) {
    for (Coord y = 0; y < 5; ++y) block.push_back(Site{x, y});
  }
  EXPECT_TRUE(eroder_probe(nec_rule(), canonical(block), 100).erodes);
}
