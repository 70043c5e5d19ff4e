#include "toombound/certificate.hpp"

#include <algorithm>
#include <numeric>

namespace toombound {

std::size_t DriftCertificate::max_obstacle_size() const {
  std::size_t m = 0;
  for (const auto& e : entries) m = std::max(m, e.obstacle.size());
  return m;
}

namespace {

SiteSet union_of(const std::vector<DriftEntry>& entries) {
  SiteSet all;
  for (const auto& e : entries) all.insert(all.end(), e.obstacle.begin(), e.obstacle.end());
  return canonical(std::move(all));
}

Rational raw_epsilon(std::span<const DriftEntry> entries) {
  std::optional<Rational> eps;
  for (const auto& e : entries) {
    for (const Site& i : e.obstacle) {
      Rational val = e.form(i);
      if (!eps || val < *eps) eps = val;
    }
  }
  return eps.value_or(Rational(0));
}

Rational raw_r_const(std::span<const DriftEntry> entries, const SiteSet& union_a) {
  Rational r = 0;
  for (const auto& e : entries) {
    if (union_a.empty()) continue;
    Rational lo = e.form(union_a.front());
    for (const Site& i : union_a) lo = std::min(lo, e.form(i));
    r -= lo;
  }
  return r;
}

}  // namespace

DriftConstants drift_constants(std::span<const DriftEntry> entries, const SiteSet& union_a) {
  if (entries.empty()) throw CertificateError("drift constants need at least one entry");
  for (std::size_t s = 0; s < entries.size(); ++s) {
    if (entries[s].obstacle.empty()) throw CertificateError("entry " + std::to_string(s) + " has an empty obstacle");
    for (const Site& i : entries[s].obstacle) {
      if (entries[s].form(i) <= 0) {
        throw CertificateError("entry " + std::to_string(s) + ": site " + i.str() + " has non-positive drift " +
                               to_string(entries[s].form(i)));
      }
    }
  }
  return {raw_epsilon(entries), raw_r_const(entries, union_a)};
}

DriftCertificate assemble_certificate(std::vector<DriftEntry> entries) {
  for (auto& e : entries) {
    if (!entries.empty() && e.v.dim() != entries.front().v.dim()) {
      throw DimensionMismatch("certificate entries disagree on dimension");
    }
    for (const Site& i : e.obstacle) {
      if (i.dim() != e.v.dim()) throw DimensionMismatch("obstacle site " + i.str() + " has wrong dimension");
    }
    e.obstacle = canonical(std::move(e.obstacle));
    e.mu.canonicalize();
  }
  DriftCertificate c;
  c.entries = std::move(entries);
  c.union_a = union_of(c.entries);
  c.epsilon = raw_epsilon(c.entries);
  c.r_const = raw_r_const(c.entries, c.union_a);
  c.rho = c.epsilon > 0 ? Rational(c.r_const / c.epsilon) : Rational(0);
  return c;
}

ValidationReport validate(const DriftCertificate& cert, const ObstacleFamily* obstacles) {
  ValidationReport rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };

  const int sigma = cert.sigma();
  const int d = cert.dimension();
  if (sigma < 2 || sigma > d + 1) {
    fail("sigma = " + std::to_string(sigma) + " outside [2, d+1] = [2, " + std::to_string(d + 1) + "]");
  }
  if (cert.entries.empty()) return rep;

  bool positive_products = true;
  for (std::size_t s = 0; s < cert.entries.size(); ++s) {
    const auto& e = cert.entries[s];
    const std::string tag = "entry " + std::to_string(s + 1) + ": ";
    if (e.v.dim() != d) {
      fail(tag + "direction dimension differs");
      return rep;
    }
    if (e.mu <= 0) fail(tag + "weight mu = " + to_string(e.mu) + " is not positive");
    if (e.obstacle.empty()) {
      fail(tag + "obstacle is empty");
      positive_products = false;
    }
    if (obstacles != nullptr && !obstacles->contains(e.obstacle)) {
      fail(tag + "obstacle " + str(e.obstacle) + " is not in the family's obstacle family");
    }
    for (const Site& i : e.obstacle) {
      Coord prod = dot(i, e.v.vec());
      if (prod <= 0) {
        positive_products = false;
        fail(tag + "<" + i.str() + ", " + e.v.vec().str() + "> = " + std::to_string(prod) + " is not positive");
      }
    }
  }

  // Sum of mu_s v_s must vanish exactly.
  std::vector<Rational> sum(static_cast<std::size_t>(d), Rational(0));
  for (const auto& e : cert.entries) {
    for (int k = 0; k < d; ++k) sum[static_cast<std::size_t>(k)] += e.mu * Rational(e.v.vec()[k]);
  }
  if (std::any_of(sum.begin(), sum.end(), [](const Rational& x) { return x != 0; })) {
    std::string v = "(";
    for (int k = 0; k < d; ++k) v += (k ? "," : "") + to_string(sum[static_cast<std::size_t>(k)]);
    fail("sum of mu_s v_s = " + v + ") is not zero");
  }

  SiteSet expected_union = union_of(cert.entries);
  if (expected_union != cert.union_a) fail("union_a " + str(cert.union_a) + " differs from " + str(expected_union));

  Rational eps = raw_epsilon(cert.entries);
  Rational r = raw_r_const(cert.entries, expected_union);
  if (eps != cert.epsilon) fail("epsilon " + to_string(cert.epsilon) + " differs from recomputed " + to_string(eps));
  if (eps <= 0 && positive_products) fail("epsilon is not positive");
  if (r != cert.r_const) fail("r_const " + to_string(cert.r_const) + " differs from recomputed " + to_string(r));
  if (eps > 0) {
    Rational rho = r / eps;
    if (rho != cert.rho) fail("rho " + to_string(cert.rho) + " differs from recomputed " + to_string(rho));
    if (rho < 0) fail("rho is negative");
  }
  return rep;
}

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::optional<std::vector<Coord>> positive_circuit(std::span<const Site> vectors) {
  const std::size_t k = vectors.size();
  if (k < 2) return std::nullopt;
  const int d = vectors.front().dim();
  // Rows are coordinates, columns are the vectors.
  std::vector<std::vector<i128>> m(static_cast<std::size_t>(d), std::vector<i128>(k));
  for (std::size_t c = 0; c < k; ++c) {
    if (vectors[c].dim() != d) throw DimensionMismatch("circuit vectors disagree on dimension");
    for (int r = 0; r < d; ++r) m[static_cast<std::size_t>(r)][c] = vectors[c][r];
  }

  // Fraction-free reduction to a reduced echelon form with integer rows.
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < static_cast<std::size_t>(d); ++col) {
    std::size_t p = row;
    while (p < static_cast<std::size_t>(d) && m[p][col] == 0) ++p;
    if (p == static_cast<std::size_t>(d)) continue;
    std::swap(m[p], m[row]);
    for (std::size_t r = 0; r < static_cast<std::size_t>(d); ++r) {
      if (r == row || m[r][col] == 0) continue;
      i128 a = m[row][col];
      i128 b = m[r][col];
      i128 g = 0;
      for (std::size_t c = 0; c < k; ++c) {
        m[r][c] = a * m[r][c] - b * m[row][c];
        g = gcd128(g, m[r][c]);
      }
      if (g > 1) {
        for (auto& x : m[r]) x /= g;
      }
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() + 1 != k) return std::nullopt;  // nullity must be exactly one

  std::size_t free_col = 0;
  for (std::size_t c = 0, pi = 0; c < k; ++c) {
    if (pi < pivot_col.size() && pivot_col[pi] == c) {
      ++pi;
    } else {
      free_col = c;
    }
  }
  i128 scale = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) {
    i128 a = abs128(m[r][pivot_col[r]]);
    scale = scale / gcd128(scale, a) * a;
  }
  std::vector<i128> x(k, 0);
  x[free_col] = scale;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) {
    x[pivot_col[r]] = -m[r][free_col] * scale / m[r][pivot_col[r]];
  }
  i128 g = 0;
  for (i128 v : x) g = gcd128(g, v);
  if (g == 0) return std::nullopt;
  if (x[0] < 0) g = -g;
  std::vector<Coord> w(k);
  for (std::size_t c = 0; c < k; ++c) {
    i128 v = x[c] / g;
    if (v <= 0) return std::nullopt;
    w[c] = static_cast<Coord>(v);
  }
  return w;
}

namespace {

// Calls visit(indices) for every combination of `size` indices out of n, in
// lexicographic order; stops early when visit returns true.
template <class Visit>
bool for_each_combination(std::size_t n, std::size_t size, Visit&& visit) {
  if (size > n) return false;
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (visit(std::as_const(idx))) return true;
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == n - size + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<DriftCertificate> search_certificate(const ObstacleFamily& obstacles, int window) {
  const int d = obstacles.dimension();
  std::vector<Direction> strict;
  std::vector<std::size_t> witness;
  for (const Direction& dir : primitive_directions(d, window)) {
    auto w = strict_witnesses(dir, obstacles);
    if (!w.empty()) {
      strict.push_back(dir);
      witness.push_back(w.front());
    }
  }

  std::optional<DriftCertificate> found;
  for (std::size_t size = 2; size <= static_cast<std::size_t>(d) + 1 && !found; ++size) {
    for_each_combination(strict.size(), size, [&](const std::vector<std::size_t>& idx) {
      std::vector<Site> vecs;
      for (std::size_t i : idx) vecs.push_back(strict[i].vec());
      auto weights = positive_circuit(vecs);
      if (!weights) return false;
      std::vector<DriftEntry> entries;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        entries.push_back({strict[idx[j]], Rational((*weights)[j]), obstacles.obstacles()[witness[idx[j]]]});
      }
      DriftCertificate cert = assemble_certificate(std::move(entries));
      if (!validate(cert, &obstacles).ok()) return false;
      found = std::move(cert);
      return true;
    });
  }
  return found;
}

bool canonical_less(const DriftCertificate& a, const DriftCertificate& b) {
  const std::size_t n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t s = 0; s < n; ++s) {
    const auto& x = a.entries[s];
    const auto& y = b.entries[s];
    if (x.v != y.v) return x.v < y.v;
    if (x.mu != y.mu) return x.mu < y.mu;
    if (x.obstacle != y.obstacle) return x.obstacle < y.obstacle;
  }
  return a.entries.size() < b.entries.size();
}

DriftCertificate scaled(const DriftCertificate& cert, const Rational& factor) {
  if (factor <= 0) throw std::invalid_argument("scale factor must be positive");
  std::vector<DriftEntry> entries = cert.entries;
  for (auto& e : entries) e.mu *= factor;
  return assemble_certificate(std::move(entries));
}

}  // namespace toombound
