#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toombound/family.hpp"
#include "toombound/rational.hpp"
#include "toombound/site.hpp"

namespace toombound {

class CertificateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by optimize_certificate when the window holds no certificate.
class CertificateNotFound : public std::runtime_error {
 public:
  explicit CertificateNotFound(int window)
      : std::runtime_error("no drift certificate within window " + std::to_string(window) +
                           " (inconclusive within window)"),
        window_(window) {}
  int window() const { return window_; }

 private:
  int window_;
};

/// One strictly stable direction with its weight and witness obstacle. The
/// linear form attached to the entry is L(i) = mu * <i, v>.
struct DriftEntry {
  Direction v;
  Rational mu;
  SiteSet obstacle;

  Rational form(const Site& i) const { return mu * Rational(dot(i, v.vec())); }
};

/// Directions with positive weights summing to zero, each pointing into its
/// witness obstacle, together with the drift constants derived from them:
///   epsilon = min_s min_{i in A_s} L_s(i)
///   r_const = -sum_s min_{i in A} L_s(i),   A = union of the A_s
///   rho     = r_const / epsilon
/// The struct may hold invalid data (e.g. read from a file); validate() says
/// which conditions fail.
struct DriftCertificate {
  std::vector<DriftEntry> entries;
  Rational epsilon;
  Rational r_const;
  Rational rho;
  SiteSet union_a;

  int sigma() const { return static_cast<int>(entries.size()); }
  int dimension() const { return entries.empty() ? 0 : entries.front().v.dim(); }
  std::size_t max_obstacle_size() const;
  const SiteSet& obstacle(int charge) const { return entries[static_cast<std::size_t>(charge)].obstacle; }
};

struct DriftConstants {
  Rational epsilon;
  Rational r_const;
};

/// Exact epsilon and R. Throws CertificateError if entries is empty or some
/// witness site has a non-positive product with its direction.
DriftConstants drift_constants(std::span<const DriftEntry> entries, const SiteSet& union_a);

/// Fills union_a, epsilon, r_const and rho from the entries without judging
/// them (epsilon may come out non-positive; rho is then 0). Throws
/// DimensionMismatch when entries disagree on dimension.
DriftCertificate assemble_certificate(std::vector<DriftEntry> entries);

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks every certificate invariant in exact arithmetic. When `obstacles`
/// is given, each witness must also belong to it.
ValidationReport validate(const DriftCertificate& cert, const ObstacleFamily* obstacles = nullptr);

/// Positive integer weights (primitive, all > 0) with sum_j w_j v_j = 0 when
/// the vectors form a circuit (one-dimensional kernel) with a strictly
/// positive kernel vector; std::nullopt otherwise.
std::optional<std::vector<Coord>> positive_circuit(std::span<const Site> vectors);

/// First certificate in the window: subsets of strictly stable primitive
/// directions by size (2..d+1) and then lexicographically, canonical-first
/// witnesses. std::nullopt is inconclusive, not a proof of criticality.
std::optional<DriftCertificate> search_certificate(const ObstacleFamily& obstacles, int window);

/// Certificate in the window maximizing the main Peierls lower bound over all
/// positive circuits and all witness choices. Ties go to the canonically
/// smallest certificate. Throws CertificateNotFound.
DriftCertificate optimize_certificate(const ObstacleFamily& obstacles, int window, int precision_bits = 64);

/// Lexicographic order on (v, mu, obstacle) entry sequences.
bool canonical_less(const DriftCertificate& a, const DriftCertificate& b);

/// Multiplies every weight by `factor` (> 0) and recomputes the constants.
DriftCertificate scaled(const DriftCertificate& cert, const Rational& factor);

}  // namespace toombound
