#pragma once

#include <map>
#include <string>
#include <utility>

#include "toombound/certificate.hpp"
#include "toombound/rational.hpp"

namespace toombound {

struct BoundOptions {
  /// Mantissa bits for the directed-rounding path.
  int precision_bits = 64;
  /// Take the rounded path even when rho is an integer (used to test it).
  bool force_rounded = false;
};

/// A rigorous lower bound. When `exact`, lower == upper == the value.
/// Otherwise lower <= true value <= upper, both dyadic rationals obtained
/// with outward rounding.
struct BoundValue {
  bool exact = false;
  Rational lower;
  Rational upper;
  int precision_bits = 0;

  /// `lower` rounded down to 20 significant decimal digits.
  std::string decimal() const;
  double approx() const { return lower.get_d(); }
};

/// The combinatorial data the bounds depend on.
struct BoundParameters {
  int sigma = 0;
  Rational rho;
  std::size_t union_size = 0;          // |A|
  std::size_t max_obstacle_size = 0;   // max_s |A_s|

  friend bool operator<(const BoundParameters& a, const BoundParameters& b) {
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    if (a.rho != b.rho) return a.rho < b.rho;
    if (a.union_size != b.union_size) return a.union_size < b.union_size;
    return a.max_obstacle_size < b.max_obstacle_size;
  }
};

struct BoundReport {
  BoundValue main_bound;
  BoundValue simple_bound;
  BoundParameters params;
  std::string certificate_hash;
};

BoundParameters parameters_of(const DriftCertificate& cert);

/// 1 / (M^rho (2^(sigma-1)-1) |A|(|A|-1) (rho+sigma)^(rho+sigma) / (sigma^sigma rho^rho)),
/// M = max_s |A_s|, with 0^0 = 1. Throws CertificateError if sigma < 2 or
/// |A| < 2 (the base would vanish).
BoundValue main_bound(const BoundParameters& params, const BoundOptions& opts = {});

/// (2|A|)^-(rho+sigma).
BoundValue simple_bound(const BoundParameters& params, const BoundOptions& opts = {});

BoundReport bound(const DriftCertificate& cert, const BoundOptions& opts = {});

/// Stable 64-bit FNV-1a hash (hex) of the canonical entry serialization.
std::string certificate_hash(const DriftCertificate& cert);

/// Contour counts keyed by (n, m).
using ContourCounts = std::map<std::pair<int, int>, BigInt>;

class MissingCounts : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sum_{m<=m_max} p^(m+1) sum_{n<=floor(rho m)} |T_{n,m}|. A key absent from
/// `counts` is an error unless `counts_complete_through` >= m, in which case
/// absent keys mean zero contours.
Rational partial_peierls_sum(const DriftCertificate& cert, const Rational& p, int m_max, const ContourCounts& counts,
                             int counts_complete_through = -1);

/// Number of encodings with m fork symbols and n increments:
/// M^n ((2^sigma-2)|A|(|A|-1)/2)^m C(n+sigma(m+1)-1, sigma(m+1)-1).
BigInt encoding_count(const BoundParameters& params, int n, int m);

/// (2|A|)^(n + sigma(m+1)).
BigInt remark_count(const BoundParameters& params, int n, int m);

/// (2^sigma - 2)|A|(|A|-1)/2.
BigInt fork_alphabet_size(int sigma, std::size_t union_size);

}  // namespace toombound
