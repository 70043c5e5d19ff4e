#include "toombound/noisy_ca.hpp"

#include <bit>
#include <set>
#include <stdexcept>

#include "toombound/rng.hpp"

namespace toombound {

MonotoneRule MonotoneRule::make(int dimension, std::vector<SiteSet> zero_sets) {
  if (zero_sets.empty()) throw std::invalid_argument("a monotone rule needs at least one zero set");
  for (auto& z : zero_sets) {
    if (z.empty()) throw std::invalid_argument("zero sets must be non-empty");
    for (const Site& s : z) {
      if (s.dim() != dimension) throw DimensionMismatch("zero-set site " + s.str() + " has wrong dimension");
    }
    z = canonical(std::move(z));
  }
  std::sort(zero_sets.begin(), zero_sets.end());
  zero_sets.erase(std::unique(zero_sets.begin(), zero_sets.end()), zero_sets.end());
  MonotoneRule r;
  r.dimension_ = dimension;
  r.zero_sets_ = std::move(zero_sets);
  return r;
}

MonotoneRule nec_rule() {
  const Site o{0, 0};
  const Site e{1, 0};
  const Site n{0, 1};
  return MonotoneRule::make(2, {{o, e}, {o, n}, {e, n}});
}

UpdateFamily lift_to_bootstrap(const MonotoneRule& rule) {
  std::vector<SiteSet> rules;
  for (const SiteSet& z : rule.zero_sets()) {
    SiteSet r;
    for (const Site& s : z) r.push_back(s.appended(-1));
    rules.push_back(std::move(r));
  }
  return UpdateFamily::make(rule.dimension() + 1, std::move(rules));
}

void NoisyPlan::validate(bool packed) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (size < 1) throw std::invalid_argument("size must be >= 1");
  if (packed && size % 64 != 0) throw std::invalid_argument("packed kernel needs size divisible by 64");
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

std::string SurvivalCurve::csv() const {
  std::string out = "step,density\n";
  char buf[64];
  for (std::size_t t = 0; t < ones.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f\n", t, density(t));
    out += buf;
  }
  return out;
}

namespace {

void check_planar(const MonotoneRule& rule) {
  if (rule.dimension() != 2) throw DimensionMismatch("the noisy CA runs on a planar torus");
}

Coord wrap(Coord x, Coord n) {
  x %= n;
  return x < 0 ? x + n : x;
}

}  // namespace

SurvivalCurve noisy_ca_run(const MonotoneRule& rule, const NoisyPlan& plan) {
  check_planar(rule);
  plan.validate(true);
  const Coord side = plan.size;
  const std::size_t words = static_cast<std::size_t>(side / 64);
  const std::size_t cells = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  const BernoulliThreshold noise(plan.p);

  SurvivalCurve curve;
  curve.ones.assign(static_cast<std::size_t>(plan.steps) + 1, 0);
  curve.cells_per_step = static_cast<std::uint64_t>(cells) * static_cast<std::uint64_t>(plan.trials);

  // Bit set = state 1. Row y occupies words [y*words, (y+1)*words).
  std::vector<std::uint64_t> cur(words * static_cast<std::size_t>(side));
  std::vector<std::uint64_t> next(cur.size());
  for (int trial = 0; trial < plan.trials; ++trial) {
    std::fill(cur.begin(), cur.end(), ~std::uint64_t{0});
    curve.ones[0] += cells;
    for (int t = 1; t <= plan.steps; ++t) {
      const std::uint64_t prefix = counter_prefix(plan.seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(t));
      std::uint64_t ones = 0;
#pragma omp parallel for schedule(static) reduction(+ : ones)
      for (Coord y = 0; y < side; ++y) {
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t zero_any = 0;
          for (const SiteSet& z : rule.zero_sets()) {
            std::uint64_t all_zero = ~std::uint64_t{0};
            for (const Site& s : z) {
              // 64 cells starting at x = 64w + s[0] in row y + s[1]: a funnel
              // shift across two neighbouring words of that row.
              const std::uint64_t* row = cur.data() + static_cast<std::size_t>(wrap(y + s[1], side)) * words;
              const auto base = static_cast<std::size_t>(wrap(static_cast<Coord>(64 * w) + s[0], side));
              const std::size_t q = base / 64;
              const unsigned r = base % 64;
              std::uint64_t v = row[q] >> r;
              if (r) v |= row[(q + 1) % words] << (64 - r);
              all_zero &= ~v;
            }
            zero_any |= all_zero;
          }
          std::uint64_t forced = 0;
          if (plan.p > 0.0) {
            const std::uint64_t site0 = static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(side) + 64 * w;
            for (unsigned b = 0; b < 64; ++b) {
              if (noise.hit(counter_word(prefix, site0 + b))) forced |= std::uint64_t{1} << b;
            }
          }
          const std::uint64_t out = ~zero_any & ~forced;
          next[static_cast<std::size_t>(y) * words + w] = out;
          ones += static_cast<std::uint64_t>(std::popcount(out));
        }
      }
      curve.ones[static_cast<std::size_t>(t)] += ones;
      cur.swap(next);
    }
  }
  curve.final_state.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) curve.final_state[i] = (cur[i / 64] >> (i % 64)) & 1U;
  return curve;
}

SurvivalCurve noisy_ca_run_reference(const MonotoneRule& rule, const NoisyPlan& plan) {
  check_planar(rule);
  plan.validate(false);
  const Coord side = plan.size;
  const std::size_t cells = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  const BernoulliThreshold noise(plan.p);

  SurvivalCurve curve;
  curve.ones.assign(static_cast<std::size_t>(plan.steps) + 1, 0);
  curve.cells_per_step = static_cast<std::uint64_t>(cells) * static_cast<std::uint64_t>(plan.trials);
  std::vector<std::uint8_t> cur(cells);
  std::vector<std::uint8_t> next(cells);
  auto at = [&](Coord x, Coord y) { return cur[static_cast<std::size_t>(wrap(y, side) * side + wrap(x, side))]; };

  for (int trial = 0; trial < plan.trials; ++trial) {
    std::fill(cur.begin(), cur.end(), 1);
    curve.ones[0] += cells;
    for (int t = 1; t <= plan.steps; ++t) {
      std::uint64_t ones = 0;
      for (Coord y = 0; y < side; ++y) {
        for (Coord x = 0; x < side; ++x) {
          const auto site = static_cast<std::uint64_t>(y * side + x);
          std::uint8_t v = rule.output_one(Site{x, y}, [&](const Site& s) { return at(s[0], s[1]) == 0; }) ? 1 : 0;
          if (noise.hit(counter_hash(plan.seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(t), site))) v = 0;
          next[static_cast<std::size_t>(site)] = v;
          ones += v;
        }
      }
      curve.ones[static_cast<std::size_t>(t)] += ones;
      cur.swap(next);
    }
  }
  curve.final_state = cur;
  return curve;
}

ErodeResult eroder_probe(const MonotoneRule& rule, const SiteSet& island, int max_steps) {
  std::set<Site> zeros(island.begin(), island.end());
  ErodeResult res;
  while (!zeros.empty()) {
    if (res.steps >= max_steps) return res;
    // Only sites whose zero sets touch a current zero can output 0.
    std::set<Site> candidates;
    for (const Site& j : zeros) {
      for (const SiteSet& z : rule.zero_sets()) {
        for (const Site& s : z) candidates.insert(j - s);
      }
    }
    std::set<Site> next;
    for (const Site& i : candidates) {
      if (!rule.output_one(i, [&](const Site& s) { return zeros.count(s) > 0; })) next.insert(i);
    }
    ++res.steps;
    if (next == zeros) {
      res.stuck = true;
      return res;
    }
    zeros = std::move(next);
  }
  res.erodes = true;
  return res;
}

}  // namespace toombound
