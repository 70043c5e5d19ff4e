#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "toombound/dynamics.hpp"
#include "toombound/rng.hpp"

namespace toombound {

void SimPlan::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!inhomogeneous.empty()) {
    double total = 0.0;
    for (const auto& wf : inhomogeneous) {
      if (!(wf.weight >= 0.0)) throw std::invalid_argument("inhomogeneous weights must be non-negative");
      total += wf.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("inhomogeneous weights must sum to 1");
    if (max_steps <= 0) throw std::invalid_argument("inhomogeneous mode needs max_steps > 0");
  }
}

LatticeState sample_initial(const std::vector<int>& extents, Boundary boundary, double p, std::uint64_t seed, int trial) {
  LatticeState st = LatticeState::centered(extents, boundary);
  const BernoulliThreshold bern(p);
  const std::uint64_t prefix = counter_prefix(seed, static_cast<std::uint64_t>(trial), 0);
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (bern.hit(counter_word(prefix, i))) st.set_zero(i);
  }
  return st;
}

namespace {

// Family draws use their own stream so they never correlate with the
// initial-state uniforms of the same trial.
constexpr std::uint64_t kFamilyStream = 0x8000000000000000ULL;

UpdateFamily union_family(const std::vector<WeightedFamily>& families) {
  std::vector<SiteSet> rules;
  for (const auto& wf : families) rules.insert(rules.end(), wf.family.rules().begin(), wf.family.rules().end());
  return UpdateFamily::make(families.front().family.dimension(), std::move(rules));
}

bool rule_fires(const LatticeState& st, const Site& site, const std::vector<SiteSet>& rules) {
  for (const SiteSet& rule : rules) {
    if (std::all_of(rule.begin(), rule.end(), [&](const Site& u) { return st.zero(site + u); })) return true;
  }
  return false;
}

}  // namespace

ClosureResult inhomogeneous_closure(const LatticeState& initial, const std::vector<WeightedFamily>& families,
                                    std::uint64_t seed, int trial, int max_steps) {
  if (families.empty()) throw std::invalid_argument("inhomogeneous mode needs at least one family");
  const UpdateFamily uni = union_family(families);
  if (uni.dimension() != initial.dimension()) throw DimensionMismatch("family and lattice dimensions differ");
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& wf : families) cumulative.push_back(acc += wf.weight);

  ClosureResult res{initial, 0, true};
  for (int t = 1;; ++t) {
    const LatticeState prev = res.state;
    const std::uint64_t prefix = counter_prefix(seed, kFamilyStream | static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(t));
    bool changed = false;
    bool union_can_fire = false;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (prev.zero_at(i)) continue;
      const Site site = prev.site_of(i);
      const double u = static_cast<double>(counter_word(prefix, i) >> 11) * 0x1.0p-53;
      std::size_t k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u * acc) - cumulative.begin());
      k = std::min(k, families.size() - 1);
      if (rule_fires(prev, site, families[k].family.rules())) {
        res.state.set_zero(i);
        changed = true;
      } else if (!union_can_fire && rule_fires(prev, site, uni.rules())) {
        union_can_fire = true;
      }
    }
    if (changed) ++res.steps;
    if (!changed && !union_can_fire) break;
    if (max_steps > 0 && t >= max_steps) {
      res.converged = false;
      break;
    }
  }
  return res;
}

TrialOutcome percolation_trial(const UpdateFamily& family, const SimPlan& plan, const std::vector<int>& extents,
                               Boundary boundary, int trial) {
  LatticeState init = sample_initial(extents, boundary, plan.p, plan.seed, trial);
  plan.validate();
  const ClosureResult res = plan.inhomogeneous.empty()
                                ? closure_run(init, family, plan.max_steps > 0 ? plan.max_steps : -1)
                                : inhomogeneous_closure(init, plan.inhomogeneous, plan.seed, trial, plan.max_steps);
  TrialOutcome o;
  o.trial = trial;
  o.p = plan.p;
  o.cells = res.state.size();
  o.infected = res.state.count_zeros();
  const Site origin = Site::origin(res.state.dimension());
  o.origin_infected = res.state.zero(origin);
  o.steps = res.steps;
  o.converged = res.converged;
  return o;
}

std::vector<TrialOutcome> run_trials(const UpdateFamily& family, const SimPlan& plan, const std::vector<int>& extents,
                                     Boundary boundary) {
  plan.validate();
  std::vector<TrialOutcome> out(static_cast<std::size_t>(plan.trials));
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < plan.trials; ++t) {
    out[static_cast<std::size_t>(t)] = percolation_trial(family, plan, extents, boundary, t);
  }
  return out;
}

std::vector<TrialOutcome> run_trials_serial(const UpdateFamily& family, const SimPlan& plan,
                                            const std::vector<int>& extents, Boundary boundary) {
  plan.validate();
  std::vector<TrialOutcome> out;
  for (int t = 0; t < plan.trials; ++t) out.push_back(percolation_trial(family, plan, extents, boundary, t));
  return out;
}

std::string outcome_jsonl(const TrialOutcome& o) {
  nlohmann::ordered_json j{{"trial", o.trial},
                           {"p", o.p},
                           {"cells", o.cells},
                           {"infected", o.infected},
                           {"fraction_infected", o.fraction_infected()},
                           {"full", o.full()},
                           {"origin_infected", o.origin_infected},
                           {"steps", o.steps},
                           {"converged", o.converged}};
  return j.dump();
}

double SizeCrossing::fraction_full(double p) const {
  if (thresholds.empty()) return 0.0;
  auto n = std::count_if(thresholds.begin(), thresholds.end(), [p](double t) { return t <= p; });
  return static_cast<double>(n) / static_cast<double>(thresholds.size());
}

namespace {

bool percolates(const UpdateFamily& family, const std::vector<int>& extents, Boundary boundary, std::uint64_t seed,
                int trial, double p) {
  return closure_run(sample_initial(extents, boundary, p, seed, trial), family).state.all_zero();
}

}  // namespace

double trial_threshold(const UpdateFamily& family, const std::vector<int>& extents, Boundary boundary,
                       std::uint64_t seed, int trial, double resolution, bool* bracket_ok) {
  // Coupled uniforms make "fully infected at p" monotone in p for a fixed
  // trial, so the threshold is a single crossing.
  double lo = 0.0;
  double hi = 1.0;
  if (percolates(family, extents, boundary, seed, trial, 0.0)) {
    if (bracket_ok) *bracket_ok = true;
    return 0.0;
  }
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (percolates(family, extents, boundary, seed, trial, mid) ? hi : lo) = mid;
  }
  if (bracket_ok) {
    *bracket_ok = percolates(family, extents, boundary, seed, trial, hi) &&
                  !percolates(family, extents, boundary, seed, trial, lo);
  }
  return 0.5 * (lo + hi);
}

PcEstimate estimate_pc(const UpdateFamily& family, const PcOptions& opts) {
  if (opts.sizes.size() < 2) throw std::invalid_argument("estimate_pc needs a ladder of at least two sizes");
  if (opts.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(opts.resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  PcEstimate est;
  for (int size : opts.sizes) {
    if (size < 1) throw std::invalid_argument("sizes must be >= 1");
    const std::vector<int> extents(static_cast<std::size_t>(family.dimension()), size);
    SizeCrossing sc;
    sc.size = size;
    sc.thresholds.assign(static_cast<std::size_t>(opts.trials), 0.0);
    std::vector<char> ok(static_cast<std::size_t>(opts.trials), 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < opts.trials; ++t) {
      bool good = true;
      sc.thresholds[static_cast<std::size_t>(t)] =
          trial_threshold(family, extents, opts.boundary, opts.seed, t, opts.resolution, &good);
      ok[static_cast<std::size_t>(t)] = good;
    }
    const auto bad = std::count(ok.begin(), ok.end(), 0);
    if (bad > 0) {
      est.flags.push_back("size " + std::to_string(size) + ": " + std::to_string(bad) +
                          " trial(s) with a non-monotone bracket");
    }

    std::vector<double> sorted = sc.thresholds;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    const std::size_t mid = sorted.size() / 2;
    sc.crossing = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    // Ranks n/2 -+ 1.96 sqrt(n)/2 bracket the median with ~95% coverage.
    const double half = 1.96 * std::sqrt(n) / 2.0;
    const auto lo_rank = static_cast<long>(std::floor(n / 2.0 - half));
    const auto hi_rank = static_cast<long>(std::ceil(n / 2.0 + half));
    sc.ci_low = sorted[static_cast<std::size_t>(std::clamp(lo_rank - 1, 0L, static_cast<long>(n) - 1))];
    sc.ci_high = sorted[static_cast<std::size_t>(std::clamp(hi_rank - 1, 0L, static_cast<long>(n) - 1))];
    est.per_size.push_back(std::move(sc));
  }
  for (std::size_t k = 1; k < est.per_size.size(); ++k) {
    const auto& a = est.per_size[k - 1];
    const auto& b = est.per_size[k];
    if (b.ci_low > a.ci_high || b.ci_high < a.ci_low) {
      est.flags.push_back("crossings at sizes " + std::to_string(a.size) + " and " + std::to_string(b.size) +
                          " have disjoint intervals (finite-size drift)");
    }
  }
  return est;
}

}  // namespace toombound
