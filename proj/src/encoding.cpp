#include <deque>
#include <map>
#include <set>

#include "toombound/contours.hpp"

namespace toombound {

namespace {

std::size_t index_in(const SiteSet& set, const Site& s) {
  return static_cast<std::size_t>(std::lower_bound(set.begin(), set.end(), s) - set.begin());
}

// Rank of the pair (i, j), i < j, among all pairs of an n-element set.
int pair_rank(std::size_t i, std::size_t j, std::size_t n) {
  int rank = 0;
  for (std::size_t a = 0; a < i; ++a) rank += static_cast<int>(n - a - 1);
  return rank + static_cast<int>(j - i - 1);
}

std::pair<std::size_t, std::size_t> pair_unrank(int rank, std::size_t n) {
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int row = static_cast<int>(n - i - 1);
    if (rank < row) return {i, i + 1 + static_cast<std::size_t>(rank)};
    rank -= row;
  }
  throw DecodeError("fork pair out of range");
}

// The couple list of the traversal: (endpoint site, charge) still waiting.
class CoupleList {
 public:
  explicit CoupleList(int sigma) : sigma_(sigma) {}

  // Bookkeeping at a separator: charge c has just reached e.
  bool arrive(const Site& e, int c) {
    if (known_.insert(e).second) {
      for (int s = 0; s < sigma_; ++s) {
        if (s != c) list_.emplace_back(e, s);
      }
      return true;
    }
    auto it = std::find(list_.begin(), list_.end(), std::make_pair(e, c));
    if (it == list_.end()) return false;
    list_.erase(it);
    return true;
  }

  bool empty() const { return list_.empty(); }
  const std::pair<Site, int>& front() const { return list_.front(); }

 private:
  int sigma_;
  std::set<Site> known_;
  std::deque<std::pair<Site, int>> list_;
};

}  // namespace

ContourEncoding encode(const ShatteredContour& sc, const DriftCertificate& cert) {
  const int sigma = sc.sigma;
  if (sigma != cert.sigma()) throw std::invalid_argument("contour and certificate disagree on sigma");
  const SiteSet& a = cert.union_a;
  const int masks = (1 << sigma) - 2;

  std::map<std::pair<Site, int>, std::size_t> owner;
  for (std::size_t k = 1; k < sc.shards.size(); ++k) {
    for (int c = 0; c < sigma; ++c) owner[{sc.shards[k].endpoint(c), c}] = k;
  }

  ContourEncoding enc;
  CoupleList couples(sigma);
  std::vector<char> done(sc.shards.size(), 0);

  auto visit = [&](std::size_t k) {
    const Shard& sh = sc.shards[k];
    done[k] = 1;
    for (int c = 0; c < sigma; ++c) {
      const auto& path = sh.paths[static_cast<std::size_t>(c)];
      const SiteSet& as = cert.obstacle(c);
      for (std::size_t j = k == 0 ? 0 : 1; j < path.size(); ++j) {
        if (!contains(as, path[j])) throw std::invalid_argument("increment outside A_s");
        enc.increments.push_back(static_cast<int>(index_in(as, path[j])));
      }
      enc.separators.push_back(static_cast<int>(enc.increments.size()));
      if (!couples.arrive(sh.endpoint(c), c)) throw std::invalid_argument("a charge reaches an endpoint twice");
    }
  };

  visit(0);
  while (!couples.empty()) {
    const auto [site, charge] = couples.front();
    auto it = owner.find({site, charge});
    if (it == owner.end() || done[it->second]) throw std::invalid_argument("no unvisited shard closes a couple");
    const Shard& sh = sc.shards[it->second];
    std::set<Site> firsts;
    for (const auto& p : sh.paths) firsts.insert(p.front());
    if (firsts.size() != 2) throw std::invalid_argument("source is not a fork");
    const Site lo = *firsts.begin();
    const Site hi = *firsts.rbegin();
    int mask = 0;
    for (int c = 0; c < sigma; ++c) {
      if (sh.paths[static_cast<std::size_t>(c)].front() == hi) mask |= 1 << c;
    }
    enc.forks.push_back(pair_rank(index_in(a, lo), index_in(a, hi), a.size()) * masks + (mask - 1));
    visit(it->second);
  }
  if (std::count(done.begin(), done.end(), 0) != 0) throw std::invalid_argument("contour is not connected");
  enc.separators.pop_back();  // the last one is implied
  return enc;
}

ShatteredContour decode(const ContourEncoding& enc, const DriftCertificate& cert) {
  const int sigma = cert.sigma();
  const int masks = (1 << sigma) - 2;
  const SiteSet& a = cert.union_a;
  const std::size_t m = enc.forks.size();
  const std::size_t groups = static_cast<std::size_t>(sigma) * (m + 1);
  if (enc.separators.size() != groups - 1) {
    throw DecodeError("expected " + std::to_string(groups - 1) + " separators, got " +
                      std::to_string(enc.separators.size()));
  }
  std::vector<int> bounds{0};
  for (int s : enc.separators) {
    if (s < bounds.back() || s > static_cast<int>(enc.increments.size())) throw DecodeError("separators out of order");
    bounds.push_back(s);
  }
  bounds.push_back(static_cast<int>(enc.increments.size()));

  auto steps_of = [&](std::size_t group, int c) {
    const SiteSet& as = cert.obstacle(c);
    std::vector<Site> out;
    for (int j = bounds[group]; j < bounds[group + 1]; ++j) {
      const int sym = enc.increments[static_cast<std::size_t>(j)];
      if (sym < 0 || static_cast<std::size_t>(sym) >= as.size()) throw DecodeError("increment symbol out of range");
      out.push_back(as[static_cast<std::size_t>(sym)]);
    }
    return out;
  };

  ShatteredContour sc;
  sc.sigma = sigma;
  CoupleList couples(sigma);
  auto settle = [&](const Shard& sh) {
    for (int c = 0; c < sigma; ++c) {
      if (!couples.arrive(sh.endpoint(c), c)) throw DecodeError("a charge reaches an endpoint twice");
    }
  };

  Shard root{Site::origin(cert.dimension()), {}};
  for (int c = 0; c < sigma; ++c) root.paths.push_back(steps_of(static_cast<std::size_t>(c), c));
  sc.shards.push_back(root);
  settle(root);

  for (std::size_t k = 1; k <= m; ++k) {
    if (couples.empty()) throw DecodeError("couple list exhausted before all forks were used");
    const auto [site, charge] = couples.front();
    const int sym = enc.forks[k - 1];
    const auto pairs = static_cast<int>(a.size() * (a.size() - 1) / 2);
    if (sym < 0 || sym >= pairs * masks) {
      throw DecodeError("fork symbol out of range");
    }
    const auto [i, j] = pair_unrank(sym / masks, a.size());
    const int mask = sym % masks + 1;
    Shard sh;
    for (int c = 0; c < sigma; ++c) {
      std::vector<Site> path{(mask >> c) & 1 ? a[j] : a[i]};
      const auto tail = steps_of(k * static_cast<std::size_t>(sigma) + static_cast<std::size_t>(c), c);
      path.insert(path.end(), tail.begin(), tail.end());
      sh.paths.push_back(std::move(path));
    }
    Site offset = Site::origin(cert.dimension());
    for (const Site& s : sh.paths[static_cast<std::size_t>(charge)]) offset += s;
    sh.source = site - offset;
    sc.shards.push_back(sh);
    settle(sh);
  }
  if (!couples.empty()) throw DecodeError("couples left open after the last shard");
  sc.canonicalize();
  const ValidationReport rep = validate_shattered(sc, cert, Site::origin(cert.dimension()));
  if (!rep.ok()) throw DecodeError("decoded contour is invalid: " + rep.failures.front());
  return sc;
}

}  // namespace toombound
