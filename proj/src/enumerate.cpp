#include <atomic>
#include <bit>
#include <map>
#include <unordered_map>

#include "toombound/contours.hpp"

namespace toombound {

namespace {

using i64 = std::int64_t;

// Certificate data in integer form: L_c(p) = w_c <p, v_c> with the weights
// scaled to a common denominator.
struct Forms {
  int sigma = 0;
  std::vector<Site> v;
  std::vector<i64> w;
  std::vector<SiteSet> as;
  SiteSet a;
  std::vector<i64> min_step;  // min over A_c of L_c (> 0)
  std::vector<i64> max_step;  // max over A_c of L_c
  i64 r = 0;                  // -sum_c min over A of L_c

  explicit Forms(const DriftCertificate& cert) : sigma(cert.sigma()), a(cert.union_a) {
    BigInt den = 1;
    for (const auto& e : cert.entries) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.mu.get_den_mpz_t());
    for (const auto& e : cert.entries) {
      Rational scaled = e.mu * Rational(den);
      v.push_back(e.v.vec());
      w.push_back(scaled.get_num().get_si());
      as.push_back(e.obstacle);
    }
    for (int c = 0; c < sigma; ++c) {
      i64 lo = L(c, as[static_cast<std::size_t>(c)].front());
      i64 hi = lo;
      for (const Site& s : as[static_cast<std::size_t>(c)]) {
        lo = std::min(lo, L(c, s));
        hi = std::max(hi, L(c, s));
      }
      min_step.push_back(lo);
      max_step.push_back(hi);
      i64 m = L(c, a.front());
      for (const Site& s : a) m = std::min(m, L(c, s));
      r -= m;
    }
  }

  i64 L(int c, const Site& p) const { return w[static_cast<std::size_t>(c)] * dot(p, v[static_cast<std::size_t>(c)]); }

  // reach[c][d]: fewest A_c steps (>= 1) summing to d, for up to `limit`
  // steps. Left empty when the table would be too large.
  std::vector<std::unordered_map<Site, int, SiteHash>> reach;

  void build_reach(int limit) {
    constexpr std::size_t kMaxEntries = 1'000'000;
    reach.assign(static_cast<std::size_t>(sigma), {});
    std::size_t total = 0;
    for (int c = 0; c < sigma; ++c) {
      auto& table = reach[static_cast<std::size_t>(c)];
      std::vector<Site> layer{Site::origin(v.front().dim())};
      for (int k = 1; k <= limit && !layer.empty(); ++k) {
        std::vector<Site> next;
        for (const Site& q : layer) {
          for (const Site& s : as[static_cast<std::size_t>(c)]) {
            // Step lengths under L_c are positive, so a sum never repeats
            // at a smaller k once seen at this k.
            if (table.emplace(q + s, k).second) next.push_back(q + s);
          }
        }
        layer = std::move(next);
        total += layer.size();
        if (total > kMaxEntries) {
          reach.clear();
          return;
        }
      }
    }
  }
};

struct RootState {
  Shard root;
  std::map<Site, unsigned> ends;
  std::map<Site, int> inner;
  int n = 0;
};

class Search {
 public:
  Search(const Forms& f, const EnumerationOptions& opts, int n_max, std::atomic<std::size_t>& total,
         std::atomic<bool>& stop)
      : f_(f), opts_(opts), n_max_(n_max), total_(total), stop_(stop), full_((1U << f.sigma) - 1) {}

  // Collects every admissible non-trivial root shard.
  std::vector<RootState> roots() {
    collecting_ = true;
    const Site o = Site::origin(f_.v.front().dim());
    Shard root{o, std::vector<std::vector<Site>>(static_cast<std::size_t>(f_.sigma))};
    if (add_inner(o)) {
      shard_ = root;
      is_root_ = true;
      order_.clear();
      for (int c = 0; c < f_.sigma; ++c) order_.push_back(c);
      walk_from(0, o);
      drop_inner(o);
    }
    return std::move(collected_);
  }

  void run_from(const RootState& rs) {
    collecting_ = false;
    ends_ = rs.ends;
    inner_ = rs.inner;
    n_ = rs.n;
    shards_.assign(1, rs.root);
    close_next();
  }

  std::vector<ShatteredContour> found;
  std::map<std::pair<int, int>, std::uint64_t> counts;

 private:
  const Forms& f_;
  const EnumerationOptions& opts_;
  const int n_max_;
  std::atomic<std::size_t>& total_;
  std::atomic<bool>& stop_;
  const unsigned full_;

  std::map<Site, unsigned> ends_;  // endpoint site -> charges arrived
  std::map<Site, int> inner_;      // non-endpoint points with multiplicity
  int n_ = 0;
  std::vector<Shard> shards_;

  // Shard under construction.
  Shard shard_;
  bool is_root_ = false;
  std::vector<int> order_;  // charges still to walk, in order
  bool collecting_ = false;
  std::vector<RootState> collected_;

  bool allowed(const Site& p) const {
    return !opts_.allowed_endpoints || contains(*opts_.allowed_endpoints, p);
  }

  bool add_inner(const Site& p) {
    if (ends_.count(p)) return false;
    ++inner_[p];
    return true;
  }
  void drop_inner(const Site& p) {
    auto it = inner_.find(p);
    if (--it->second == 0) inner_.erase(it);
  }

  // 0: rejected, 1: joined an existing endpoint, 2: created a new endpoint.
  int add_end(const Site& p, int c) {
    if (inner_.count(p)) return 0;
    auto it = ends_.find(p);
    const unsigned bit = 1U << c;
    if (it != ends_.end()) {
      if (it->second & bit) return 0;
      it->second |= bit;
      return 1;
    }
    if (!allowed(p)) return 0;
    ends_.emplace(p, bit);
    return 2;
  }
  void drop_end(const Site& p, int c) {
    auto it = ends_.find(p);
    it->second &= ~(1U << c);
    if (it->second == 0) ends_.erase(it);
  }

  int open_count() const {
    int k = 0;
    for (const auto& [site, mask] : ends_) k += f_.sigma - std::popcount(mask);
    return k;
  }

  // Sum over open couples (e, c) of L_c(e).
  i64 omega() const {
    i64 total = 0;
    for (const auto& [site, mask] : ends_) {
      for (int c = 0; c < f_.sigma; ++c) {
        if (!(mask & (1U << c))) total += f_.L(c, site);
      }
    }
    return total;
  }

  // Shards that may still be added after the one under construction.
  int shards_left() const { return opts_.m_max + 1 - static_cast<int>(shards_.size()) - 1; }

  // Drift slack: every full endpoint has sum_c L_c = 0, a shard adds
  // sum_c L_c over its endpoints, each A_c step gains at least min_step[c]
  // and a shard's fork edges lose at most R. So the gain still available to
  // the path at p (charge order_[idx]) is omega, minus the L-values where the
  // unfinished paths of this shard stand, plus R per later shard.
  i64 slack(std::size_t idx, const Site& p) const {
    i64 s = omega() + std::max<i64>(f_.r, 0) * shards_left();
    for (std::size_t j = idx; j < order_.size(); ++j) {
      const int c = order_[j];
      if (j == idx) {
        s -= f_.L(c, p);
      } else if (!is_root_) {
        s -= f_.L(c, shard_.source + shard_.paths[static_cast<std::size_t>(c)].front());
      }
    }
    return s;
  }

  // Can the path at p (charge order_[idx]) still reach an admissible
  // endpoint within the edge budget and the drift slack?
  bool reachable(std::size_t idx, const Site& p, bool new_sites_ok) const {
    const int c = order_[idx];
    const i64 room = slack(idx, p);
    if (room < f_.min_step[static_cast<std::size_t>(c)]) return false;
    if (new_sites_ok && !opts_.allowed_endpoints) return true;
    const i64 budget = n_max_ - n_;
    auto ok = [&](const Site& e) {
      const i64 gap = f_.L(c, e - p);
      if (gap > room) return false;
      if (!f_.reach.empty()) {
        const auto& table = f_.reach[static_cast<std::size_t>(c)];
        auto it = table.find(e - p);
        return it != table.end() && it->second <= budget;
      }
      return gap >= f_.min_step[static_cast<std::size_t>(c)] && gap <= f_.max_step[static_cast<std::size_t>(c)] * budget;
    };
    for (const auto& [site, mask] : ends_) {
      if (!(mask & (1U << c)) && ok(site)) return true;
    }
    if (new_sites_ok) {
      for (const Site& s : *opts_.allowed_endpoints) {
        if (!ends_.count(s) && ok(s)) return true;
      }
    }
    return false;
  }

  // Paths after charge order_[idx] in this shard can close at most one
  // couple each; later shards at most sigma each.
  bool open_budget_ok(std::size_t idx) const {
    const int later_paths = static_cast<int>(order_.size() - idx - 1);
    return open_count() - later_paths <= f_.sigma * shards_left();
  }

  bool new_site_possible(std::size_t idx) const {
    const int later_paths = static_cast<int>(order_.size() - idx - 1);
    return open_count() + f_.sigma - 1 - later_paths <= f_.sigma * shards_left();
  }

  // Walk charge order_[idx] starting at the source (root) or continuing at p.
  void walk_from(std::size_t idx, const Site& p) {
    if (stop_.load(std::memory_order_relaxed)) return;
    if (idx == order_.size()) {
      shard_done();
      return;
    }
    const int c = order_[idx];
    auto& steps = shard_.paths[static_cast<std::size_t>(c)];
    if (!steps.empty() || !is_root_) {
      // p is a point of the path after at least one step: try to stop here.
      const int r = add_end(p, c);
      if (r != 0) {
        if (open_budget_ok(idx)) walk_next(idx);
        drop_end(p, c);
      }
    }
    // Extend: p becomes an interior point, unless p is the root's source
    // (already marked).
    if (n_ + 1 > n_max_) return;
    const bool at_source = steps.empty() && is_root_;
    if (!at_source && !add_inner(p)) return;
    if (reachable(idx, p, new_site_possible(idx))) {
      ++n_;
      for (const Site& a : f_.as[static_cast<std::size_t>(c)]) {
        steps.push_back(a);
        walk_from(idx, p + a);
        steps.pop_back();
      }
      --n_;
    }
    if (!at_source) drop_inner(p);
  }

  // Move on to the next charge of the shard.
  void walk_next(std::size_t idx) {
    if (idx + 1 == order_.size()) {
      shard_done();
      return;
    }
    const int c = order_[idx + 1];
    const auto& steps = shard_.paths[static_cast<std::size_t>(c)];
    if (is_root_) {
      walk_from(idx + 1, shard_.source);
    } else {
      walk_from(idx + 1, shard_.source + steps.front());
    }
  }

  void shard_done() {
    const int left = shards_left();
    if (open_count() > f_.sigma * left) return;
    // Each later shard s satisfies sum_c L_c(end_c) >= -R.
    if (omega() < -f_.r * left) return;
    if (collecting_) {
      collected_.push_back({shard_, ends_, inner_, n_});
      return;
    }
    shards_.push_back(shard_);
    const Shard saved = shard_;
    const auto saved_order = order_;
    close_next();
    shard_ = saved;
    order_ = saved_order;
    shards_.pop_back();
  }

  void emit() {
    const std::size_t k = total_.fetch_add(1, std::memory_order_relaxed);
    if (k >= opts_.max_contours) {
      stop_.store(true, std::memory_order_relaxed);
      return;
    }
    ShatteredContour sc;
    sc.sigma = f_.sigma;
    sc.shards = shards_;
    sc.canonicalize();
    ++counts[{sc.n(), sc.m()}];
    if (opts_.keep_contours) found.push_back(std::move(sc));
  }

  // Close the smallest open couple with a new shard.
  void close_next() {
    if (stop_.load(std::memory_order_relaxed)) return;
    auto it = ends_.begin();
    while (it != ends_.end() && it->second == full_) ++it;
    if (it == ends_.end()) {
      emit();
      return;
    }
    if (static_cast<int>(shards_.size()) - 1 >= opts_.m_max) return;
    const Site e = it->first;
    int c = 0;
    while (it->second & (1U << c)) ++c;

    // The new shard gains at least its closing steps minus R, later shards
    // lose at most R each, and all gains must add up to omega.
    const i64 room = omega() + f_.r + std::max<i64>(f_.r, 0) * (opts_.m_max - static_cast<int>(shards_.size()));
    is_root_ = false;
    ends_[e] |= 1U << c;
    for (int k = 1; 1 + n_ + (k - 1) <= 1 + n_max_; ++k) {
      if ((k - 1) * f_.min_step[static_cast<std::size_t>(c)] > room) break;
      n_ += k - 1;
      std::vector<Site> rev;
      backward(c, k - 1, room, e, e, rev);
      n_ -= k - 1;
      if (stop_.load(std::memory_order_relaxed)) break;
    }
    ends_[e] &= ~(1U << c);
  }

  // Steps of the closing path in reverse: `left` more A_c steps, then the
  // fork edge from the source.
  void backward(int c, int left, i64 room, const Site& e, const Site& p, std::vector<Site>& rev) {
    if (left > 0) {
      for (const Site& a : f_.as[static_cast<std::size_t>(c)]) {
        const Site q = p - a;
        if (f_.L(c, e - q) + (left - 1) * f_.min_step[static_cast<std::size_t>(c)] > room) continue;
        if (!add_inner(q)) continue;
        rev.push_back(a);
        backward(c, left - 1, room, e, q, rev);
        rev.pop_back();
        drop_inner(q);
      }
      return;
    }
    for (const Site& a1 : f_.a) {
      const Site x = p - a1;
      if (!add_inner(x)) continue;
      Shard sh{x, std::vector<std::vector<Site>>(static_cast<std::size_t>(f_.sigma))};
      auto& path = sh.paths[static_cast<std::size_t>(c)];
      path.push_back(a1);
      path.insert(path.end(), rev.rbegin(), rev.rend());
      forks(c, a1, std::move(sh));
      drop_inner(x);
    }
  }

  void forks(int c, const Site& a1, Shard sh) {
    std::vector<int> others;
    for (int s = 0; s < f_.sigma; ++s) {
      if (s != c) others.push_back(s);
    }
    const unsigned masks = 1U << others.size();
    for (const Site& b : f_.a) {
      if (b == a1) continue;
      for (unsigned mask = 1; mask < masks; ++mask) {
        shard_ = sh;
        for (std::size_t j = 0; j < others.size(); ++j) {
          shard_.paths[static_cast<std::size_t>(others[j])] = {(mask >> j) & 1U ? b : a1};
        }
        order_.assign(1, c);
        order_.insert(order_.end(), others.begin(), others.end());
        // The closing path is complete; walk the others from their fork targets.
        if (open_budget_ok(0)) walk_next(0);
        if (stop_.load(std::memory_order_relaxed)) return;
      }
    }
  }
};

}  // namespace

int EnumerationResult::complete_through() const { return truncated ? -1 : complete_m; }

std::string EnumerationResult::counts_csv() const {
  std::map<std::pair<int, int>, BigInt> by_m;
  for (const auto& [key, count] : counts) by_m[{key.second, key.first}] = count;
  std::string out = "m,n,count\n";
  for (const auto& [key, count] : by_m) {
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," + count.get_str() + "\n";
  }
  return out;
}

EnumerationResult enumerate(const DriftCertificate& cert, const EnumerationOptions& opts) {
  if (cert.sigma() < 2) throw CertificateError("enumeration needs sigma >= 2");
  if (opts.m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  if (!validate(cert).ok()) throw CertificateError("enumeration needs a valid certificate");
  Forms forms(cert);

  EnumerationResult res;
  res.m_max = opts.m_max;
  const Rational bound = cert.rho * Rational(opts.m_max);
  const int edge_bound = static_cast<int>(BigInt(bound.get_num() / bound.get_den()).get_si());
  res.n_max = opts.n_max < 0 ? edge_bound : opts.n_max;
  forms.build_reach(res.n_max);

  std::atomic<std::size_t> total{0};
  std::atomic<bool> stop{false};
  std::vector<ShatteredContour> all;
  std::map<std::pair<int, int>, std::uint64_t> counts;

  const Site o = Site::origin(cert.dimension());
  if (!opts.allowed_endpoints || contains(*opts.allowed_endpoints, o)) {
    total.fetch_add(1);
    counts[{0, 0}] = 1;
    if (opts.keep_contours) all.push_back(trivial_contour(cert.sigma(), o));
  }

  std::vector<RootState> roots;
  if (opts.m_max > 0) {
    Search seed(forms, opts, res.n_max, total, stop);
    roots = seed.roots();
  }

#pragma omp parallel
  {
    Search local(forms, opts, res.n_max, total, stop);
#pragma omp for schedule(dynamic, 1) nowait
    for (std::size_t k = 0; k < roots.size(); ++k) local.run_from(roots[k]);
#pragma omp critical
    {
      for (auto& sc : local.found) all.push_back(std::move(sc));
      for (const auto& [key, n] : local.counts) counts[key] += n;
    }
  }

  if (stop.load()) {
    res.truncated = true;
    res.truncation_report = "stopped after " + std::to_string(opts.max_contours) + " contours (m_max=" +
                            std::to_string(opts.m_max) + ", n_max=" + std::to_string(res.n_max) + ")";
  } else if (res.n_max < edge_bound) {
    res.truncation_report = "n_max=" + std::to_string(res.n_max) + " is below floor(rho*m_max)=" +
                            std::to_string(edge_bound) + "; larger n were not explored";
  }
  if (!res.truncated) {
    for (int m = 0; m <= opts.m_max; ++m) {
      const Rational b = cert.rho * Rational(m);
      if (BigInt(b.get_num() / b.get_den()) <= res.n_max) res.complete_m = m;
    }
  }
  for (const auto& [key, n] : counts) res.counts[key] = BigInt(std::to_string(n));
  res.total = 0;
  for (const auto& [key, n] : counts) res.total += n;

  // Canonical order (m, n, serialized form), keys computed once.
  std::vector<std::tuple<int, int, std::string, std::size_t>> keys;
  keys.reserve(all.size());
  for (std::size_t k = 0; k < all.size(); ++k) keys.emplace_back(all[k].m(), all[k].n(), all[k].serialized(), k);
  std::sort(keys.begin(), keys.end());
  res.contours.reserve(all.size());
  for (const auto& key : keys) res.contours.push_back(std::move(all[std::get<3>(key)]));
  return res;
}

}  // namespace toombound
