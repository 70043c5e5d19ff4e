#pragma once

// Small hand-rolled generators for the property tests. Every generator takes
// the engine explicitly so a failing case can be replayed from its seed.

#include <random>
#include <vector>

#include "toombound/certificate.hpp"
#include "toombound/family.hpp"
#include "toombound/lattice.hpp"
#include "toombound/site.hpp"

namespace gen {

using Engine = std::mt19937_64;
using toombound::Coord;
using toombound::Site;
using toombound::SiteSet;

inline int uniform_int(Engine& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline bool coin(Engine& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Site site(Engine& rng, int dim, int radius) {
  Site s(dim);
  for (int k = 0; k < dim; ++k) s[k] = uniform_int(rng, -radius, radius);
  return s;
}

inline Site nonzero_site(Engine& rng, int dim, int radius) {
  while (true) {
    Site s = site(rng, dim, radius);
    if (!s.is_origin()) return s;
  }
}

inline SiteSet rule(Engine& rng, int dim, int radius, int max_size) {
  SiteSet r;
  const int n = uniform_int(rng, 1, max_size);
  for (int i = 0; i < n; ++i) r.push_back(nonzero_site(rng, dim, radius));
  return toombound::canonical(std::move(r));
}

/// 1..max_rules rules of 1..max_size sites each within the radius.
inline toombound::UpdateFamily family(Engine& rng, int dim, int radius = 2, int max_rules = 3, int max_size = 3) {
  std::vector<SiteSet> rules;
  const int n = uniform_int(rng, 1, max_rules);
  for (int i = 0; i < n; ++i) rules.push_back(rule(rng, dim, radius, max_size));
  return toombound::UpdateFamily::make(dim, std::move(rules));
}

inline toombound::LatticeState random_state(Engine& rng, const std::vector<int>& extents, toombound::Boundary b,
                                            double p) {
  auto st = toombound::LatticeState::centered(extents, b);
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (coin(rng, p)) st.set_zero(i);
  }
  return st;
}

/// A certificate with random positive weights built on a random positive
/// circuit in the plane: random directions, obstacles picked to be strictly
/// positive for each direction. Not tied to any family.
inline toombound::DriftCertificate certificate_2d(Engine& rng) {
  using namespace toombound;
  while (true) {
    std::vector<Site> vs;
    const int sigma = uniform_int(rng, 2, 3);
    for (int s = 0; s < sigma; ++s) vs.push_back(nonzero_site(rng, 2, 3));
    auto w = positive_circuit(vs);
    if (!w) continue;
    std::vector<DriftEntry> entries;
    bool ok = true;
    for (int s = 0; s < sigma; ++s) {
      const Direction d = Direction::from(vs[static_cast<std::size_t>(s)]);
      SiteSet a;
      for (int tries = 0; tries < 40 && static_cast<int>(a.size()) < 3; ++tries) {
        Site i = nonzero_site(rng, 2, 3);
        if (dot(i, d.vec()) > 0) a.push_back(i);
      }
      if (a.empty()) {
        ok = false;
        break;
      }
      const Rational mu((*w)[static_cast<std::size_t>(s)]);
      entries.push_back({d, mu, canonical(std::move(a))});
    }
    if (!ok) continue;
    // Directions were made primitive; rescale weights so the sum still
    // vanishes: mu_s must absorb the gcd removed from v_s.
    for (int s = 0; s < sigma; ++s) {
      const Site& raw = vs[static_cast<std::size_t>(s)];
      const Site& prim = entries[static_cast<std::size_t>(s)].v.vec();
      Coord factor = prim[0] != 0 ? raw[0] / prim[0] : raw[1] / prim[1];
      entries[static_cast<std::size_t>(s)].mu *= Rational(factor);
    }
    Rational scale(uniform_int(rng, 1, 7), uniform_int(rng, 1, 7));
    scale.canonicalize();
    for (auto& e : entries) e.mu *= scale;
    return assemble_certificate(std::move(entries));
  }
}

}  // namespace gen
