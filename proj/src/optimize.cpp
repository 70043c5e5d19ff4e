#include <algorithm>
#include <map>
#include <numeric>

#include "toombound/certificate.hpp"
#include "toombound/peierls.hpp"

namespace toombound {

namespace {

struct Circuit {
  std::vector<std::size_t> dirs;  // indices into the strict-direction list
  std::vector<Coord> weights;
};

struct Candidate {
  Rational key;  // certified lower bound
  std::size_t circuit = 0;
  std::vector<std::size_t> choice;  // obstacle index per entry
  bool valid = false;
};

// Mirrors canonical_less on the materialized certificates: directions are
// listed in lexicographic order, obstacles in canonical order.
bool candidate_order_less(const std::vector<Circuit>& circuits, const Candidate& a, const Candidate& b) {
  const Circuit& ca = circuits[a.circuit];
  const Circuit& cb = circuits[b.circuit];
  const std::size_t n = std::min(ca.dirs.size(), cb.dirs.size());
  for (std::size_t s = 0; s < n; ++s) {
    if (ca.dirs[s] != cb.dirs[s]) return ca.dirs[s] < cb.dirs[s];
    if (ca.weights[s] != cb.weights[s]) return ca.weights[s] < cb.weights[s];
    if (a.choice[s] != b.choice[s]) return a.choice[s] < b.choice[s];
  }
  return ca.dirs.size() < cb.dirs.size();
}

bool better(const std::vector<Circuit>& circuits, const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.key != b.key) return a.key > b.key;
  return candidate_order_less(circuits, a, b);
}

}  // namespace

DriftCertificate optimize_certificate(const ObstacleFamily& obstacles, int window, int precision_bits) {
  const int d = obstacles.dimension();
  const auto& obs = obstacles.obstacles();

  std::vector<Direction> strict;
  std::vector<std::vector<std::size_t>> witnesses;
  for (const Direction& dir : primitive_directions(d, window)) {
    auto w = strict_witnesses(dir, obstacles);
    if (!w.empty()) {
      strict.push_back(dir);
      witnesses.push_back(std::move(w));
    }
  }

  std::vector<Circuit> circuits;
  for (std::size_t size = 2; size <= static_cast<std::size_t>(d) + 1 && size <= strict.size(); ++size) {
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<Site> vecs;
      for (std::size_t i : idx) vecs.push_back(strict[i].vec());
      if (auto w = positive_circuit(vecs)) circuits.push_back({idx, *w});
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == strict.size() - size + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  if (circuits.empty()) throw CertificateNotFound(window);

  // Sites of the union are tracked as bitsets over the family support.
  SiteSet support;
  for (const auto& o : obs) support.insert(support.end(), o.begin(), o.end());
  support = canonical(std::move(support));
  const std::size_t words = (support.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> obstacle_bits(obs.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t k = 0; k < obs.size(); ++k) {
    for (const Site& s : obs[k]) {
      auto pos = static_cast<std::size_t>(std::lower_bound(support.begin(), support.end(), s) - support.begin());
      obstacle_bits[k][pos / 64] |= std::uint64_t{1} << (pos % 64);
    }
  }
  // min_{i in obstacle k} <i, v> for every strict direction.
  std::vector<std::vector<Coord>> min_prod(strict.size(), std::vector<Coord>(obs.size()));
  for (std::size_t j = 0; j < strict.size(); ++j) {
    for (std::size_t k = 0; k < obs.size(); ++k) {
      Coord lo = dot(obs[k].front(), strict[j].vec());
      for (const Site& s : obs[k]) lo = std::min(lo, dot(s, strict[j].vec()));
      min_prod[j][k] = lo;
    }
  }

  const BoundOptions opts{precision_bits, false};
  Candidate best;

#pragma omp parallel
  {
    Candidate local;
    std::map<BoundParameters, Rational> cache;
    std::vector<std::uint64_t> acc(words);

#pragma omp for schedule(dynamic, 16)
    for (std::size_t ci = 0; ci < circuits.size(); ++ci) {
      const Circuit& c = circuits[ci];
      const std::size_t sigma = c.dirs.size();
      std::vector<std::size_t> pos(sigma, 0);
      while (true) {
        std::vector<std::size_t> choice(sigma);
        for (std::size_t s = 0; s < sigma; ++s) choice[s] = witnesses[c.dirs[s]][pos[s]];

        Coord eps = 0;
        Coord r = 0;
        std::size_t max_size = 0;
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t s = 0; s < sigma; ++s) {
          const Coord e = c.weights[s] * min_prod[c.dirs[s]][choice[s]];
          eps = s == 0 ? e : std::min(eps, e);
          Coord lo = min_prod[c.dirs[s]][choice[0]];
          for (std::size_t t = 1; t < sigma; ++t) lo = std::min(lo, min_prod[c.dirs[s]][choice[t]]);
          r -= c.weights[s] * lo;
          max_size = std::max(max_size, obs[choice[s]].size());
          for (std::size_t w = 0; w < words; ++w) acc[w] |= obstacle_bits[choice[s]][w];
        }
        std::size_t union_size = 0;
        for (auto w : acc) union_size += static_cast<std::size_t>(__builtin_popcountll(w));

        BoundParameters params;
        params.sigma = static_cast<int>(sigma);
        params.rho = Rational(BigInt(r), BigInt(eps));
        params.rho.canonicalize();
        params.union_size = union_size;
        params.max_obstacle_size = max_size;
        auto it = cache.find(params);
        if (it == cache.end()) it = cache.emplace(params, main_bound(params, opts).lower).first;

        Candidate cand{it->second, ci, std::move(choice), true};
        if (better(circuits, cand, local)) local = std::move(cand);

        std::size_t s = 0;
        for (; s < sigma; ++s) {
          if (++pos[s] < witnesses[c.dirs[s]].size()) break;
          pos[s] = 0;
        }
        if (s == sigma) break;
      }
    }

#pragma omp critical
    {
      if (better(circuits, local, best)) best = std::move(local);
    }
  }

  const Circuit& c = circuits[best.circuit];
  std::vector<DriftEntry> entries;
  for (std::size_t s = 0; s < c.dirs.size(); ++s) {
    entries.push_back({strict[c.dirs[s]], Rational(c.weights[s]), obs[best.choice[s]]});
  }
  return assemble_certificate(std::move(entries));
}

}  // namespace toombound
