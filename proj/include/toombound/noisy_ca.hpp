#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toombound/family.hpp"

namespace toombound {

/// A monotone local map phi: the output is 0 iff some zero set is entirely 0
/// in the input (read relative to the updated site).
class MonotoneRule {
 public:
  /// Throws std::invalid_argument on an empty family or an empty zero set.
  static MonotoneRule make(int dimension, std::vector<SiteSet> zero_sets);

  int dimension() const { return dimension_; }
  const std::vector<SiteSet>& zero_sets() const { return zero_sets_; }

  /// Evaluates phi at i; `is_zero` answers for absolute sites.
  template <class IsZero>
  bool output_one(const Site& i, IsZero&& is_zero) const {
    for (const SiteSet& z : zero_sets_) {
      bool all = true;
      for (const Site& s : z) {
        if (!is_zero(i + s)) {
          all = false;
          break;
        }
      }
      if (all) return false;
    }
    return true;
  }

 private:
  int dimension_ = 0;
  std::vector<SiteSet> zero_sets_;
};

/// North-east-centre majority: zero sets are the pairs of {o, (1,0), (0,1)}.
MonotoneRule nec_rule();

/// {Z x {-1} : Z a zero set}: the (d+1)-dimensional bootstrap family whose
/// closure of space-time zeros contains the noisy trajectory's zeros.
UpdateFamily lift_to_bootstrap(const MonotoneRule& rule);

struct NoisyPlan {
  double p = 0.0;
  /// Torus side; the packed kernel needs a multiple of 64.
  int size = 64;
  int steps = 100;
  int trials = 1;
  std::uint64_t seed = 0;

  void validate(bool packed) const;
};

struct SurvivalCurve {
  /// ones[t]: number of 1-cells at time t summed over trials.
  std::vector<std::uint64_t> ones;
  std::uint64_t cells_per_step = 0;  // size^2 * trials
  /// Final configuration of the last trial, row-major, one byte per cell.
  std::vector<std::uint8_t> final_state;

  double density(std::size_t t) const {
    return static_cast<double>(ones[t]) / static_cast<double>(cells_per_step);
  }
  double terminal() const { return density(ones.size() - 1); }
  /// "step,density" lines with a header.
  std::string csv() const;
};

/// x_{t+1}(i) = phi(x_t(. + i)) except that each (i, t+1) is forced to 0 with
/// probability p (noise word counter_hash(seed, trial, t+1, y*size+x)).
/// All-ones start on a size x size torus. Bit-packed rows, parallel over rows.
SurvivalCurve noisy_ca_run(const MonotoneRule& rule, const NoisyPlan& plan);

/// Byte-per-cell serial version with the same randomness; bit-identical.
SurvivalCurve noisy_ca_run_reference(const MonotoneRule& rule, const NoisyPlan& plan);

struct ErodeResult {
  bool erodes = false;
  /// Steps taken until the zeros vanished, or until the run stopped.
  int steps = 0;
  /// True when a non-empty configuration repeated itself: definitely no erosion.
  bool stuck = false;
};

/// Noiseless run from an all-ones plane with zeros on `island`, tracked
/// sparsely on Z^d. erodes == false without `stuck` is inconclusive.
ErodeResult eroder_probe(const MonotoneRule& rule, const SiteSet& island, int max_steps);

}  // namespace toombound
