#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toombound/family.hpp"
#include "toombound/lattice.hpp"

namespace toombound {

struct ClosureResult {
  LatticeState state;
  /// Synchronous steps until the fixpoint (steps that added a zero).
  int steps = 0;
  /// False when max_steps cut the run short.
  bool converged = true;
};

/// Least fixpoint of X_{t+1} = X_t u {i : i + U in X_t for some rule U}.
/// Frontier-driven: after step 1 only translates covering a fresh zero are
/// re-examined. max_steps < 0 means run to the fixpoint.
ClosureResult closure_run(const LatticeState& initial, const UpdateFamily& family, int max_steps = -1);
LatticeState closure(const LatticeState& initial, const UpdateFamily& family);

/// Full synchronous sweeps until nothing changes. Slow; kept as the oracle
/// for closure_run.
ClosureResult closure_reference(const LatticeState& initial, const UpdateFamily& family, int max_steps = -1);

struct WeightedFamily {
  UpdateFamily family;
  double weight = 1.0;
};

struct SimPlan {
  double p = 0.0;
  int trials = 1;
  /// Cap on closure steps; <= 0 means run to the fixpoint.
  int max_steps = 0;
  std::uint64_t seed = 0;
  /// Space-time inhomogeneous mode: each (site, step) draws one family.
  std::vector<WeightedFamily> inhomogeneous;

  /// Throws std::invalid_argument on p outside [0,1], trials < 1, or
  /// inhomogeneous weights that are negative or do not sum to 1 (that mode
  /// also needs max_steps > 0).
  void validate() const;
};

struct TrialOutcome {
  int trial = 0;
  double p = 0.0;
  std::size_t cells = 0;
  std::size_t infected = 0;
  bool origin_infected = false;
  int steps = 0;
  bool converged = true;

  double fraction_infected() const { return cells ? static_cast<double>(infected) / static_cast<double>(cells) : 0.0; }
  bool full() const { return infected == cells; }
};

/// I.i.d. zeros with probability p on a centred box, uniforms from
/// counter_hash(seed, trial, 0, cell index).
LatticeState sample_initial(const std::vector<int>& extents, Boundary boundary, double p, std::uint64_t seed, int trial);

/// Space-time inhomogeneous closure: at step t the site i applies the family
/// drawn from counter_hash(seed, trial, t, i). Runs until no rule of the
/// union family can fire anywhere, or max_steps.
ClosureResult inhomogeneous_closure(const LatticeState& initial, const std::vector<WeightedFamily>& families,
                                    std::uint64_t seed, int trial, int max_steps);

TrialOutcome percolation_trial(const UpdateFamily& family, const SimPlan& plan, const std::vector<int>& extents,
                               Boundary boundary, int trial);

/// Trials 0..plan.trials-1, in parallel; results indexed by trial.
std::vector<TrialOutcome> run_trials(const UpdateFamily& family, const SimPlan& plan, const std::vector<int>& extents,
                                     Boundary boundary);

/// Same, one trial after another.
std::vector<TrialOutcome> run_trials_serial(const UpdateFamily& family, const SimPlan& plan,
                                            const std::vector<int>& extents, Boundary boundary);

std::string outcome_jsonl(const TrialOutcome& o);

struct PcOptions {
  /// Linear sizes; the box is size^d.
  std::vector<int> sizes;
  int trials = 100;
  std::uint64_t seed = 0;
  double resolution = 1.0 / 4096;
  Boundary boundary = Boundary::Torus;
};

struct SizeCrossing {
  int size = 0;
  /// Median of the per-trial thresholds: the p where half the coupled trials
  /// fully infect the box.
  double crossing = 0.0;
  /// ~95% interval from binomial order statistics of the thresholds.
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> thresholds;

  /// Fraction of trials fully infected at p.
  double fraction_full(double p) const;
};

struct PcEstimate {
  std::vector<SizeCrossing> per_size;
  /// Problems noticed on the way (never fatal): bracket checks that
  /// contradict monotonicity, crossings outside each other's interval, ...
  std::vector<std::string> flags;
};

/// Per-trial threshold of the full-infection proxy by bisection over coupled
/// uniforms. Needs at least two sizes.
PcEstimate estimate_pc(const UpdateFamily& family, const PcOptions& opts);

double trial_threshold(const UpdateFamily& family, const std::vector<int>& extents, Boundary boundary,
                       std::uint64_t seed, int trial, double resolution, bool* bracket_ok = nullptr);

}  // namespace toombound
