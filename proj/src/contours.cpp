#include "toombound/contours.hpp"

#include <map>
#include <numeric>
#include <set>

namespace toombound {

// --- Toom graphs ------------------------------------------------------------

namespace {

struct Degrees {
  std::vector<std::vector<int>> in;   // in[s][v]
  std::vector<std::vector<int>> out;  // out[s][v]
};

Degrees degrees(const ToomGraph& g) {
  Degrees d;
  d.in.assign(static_cast<std::size_t>(g.sigma), std::vector<int>(static_cast<std::size_t>(g.vertex_count), 0));
  d.out = d.in;
  for (int s = 0; s < g.sigma; ++s) {
    for (auto [v, w] : g.edges[static_cast<std::size_t>(s)]) {
      ++d.out[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)];
      ++d.in[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)];
    }
  }
  return d;
}

bool edges_in_range(const ToomGraph& g) {
  if (g.sigma < 2 || static_cast<int>(g.edges.size()) != g.sigma || g.vertex_count < 0) return false;
  for (const auto& es : g.edges) {
    for (auto [v, w] : es) {
      if (v < 0 || w < 0 || v >= g.vertex_count || w >= g.vertex_count) return false;
    }
  }
  return true;
}

// Charge of an internal vertex, -1 for sources/sinks, -2 if no condition fits.
int vertex_kind(const Degrees& d, int sigma, int v) {
  const auto V = static_cast<std::size_t>(v);
  bool none = true, src = true, snk = true;
  int internal = -1;
  int active = 0;
  for (int s = 0; s < sigma; ++s) {
    const int i = d.in[static_cast<std::size_t>(s)][V];
    const int o = d.out[static_cast<std::size_t>(s)][V];
    none = none && i == 0 && o == 0;
    src = src && i == 0 && o == 1;
    snk = snk && i == 1 && o == 0;
    if (i != 0 || o != 0) {
      ++active;
      if (i == 1 && o == 1) internal = s;
    }
  }
  if (none || src || snk) return -1;
  if (active == 1 && internal >= 0) return internal;
  return -2;
}

bool connected(const ToomGraph& g) {
  if (g.vertex_count == 0) return true;
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const auto& es : g.edges) {
    for (auto [v, w] : es) parent[static_cast<std::size_t>(find(v))] = find(w);
  }
  const int r = find(0);
  for (int v = 1; v < g.vertex_count; ++v) {
    if (find(v) != r) return false;
  }
  return true;
}

}  // namespace

std::vector<int> ToomGraph::sources() const {
  std::vector<int> out;
  const Degrees d = degrees(*this);
  for (int v = 0; v < vertex_count; ++v) {
    bool src = true;
    for (int s = 0; s < sigma; ++s) src = src && d.in[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] == 0;
    if (src) out.push_back(v);
  }
  return out;
}

std::vector<int> ToomGraph::sinks() const {
  std::vector<int> out;
  const Degrees d = degrees(*this);
  for (int v = 0; v < vertex_count; ++v) {
    bool snk = true;
    for (int s = 0; s < sigma; ++s) snk = snk && d.out[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] == 0;
    if (snk) out.push_back(v);
  }
  return out;
}

bool validate_graph(const ToomGraph& g) {
  if (!edges_in_range(g)) return false;
  const Degrees d = degrees(g);
  for (int v = 0; v < g.vertex_count; ++v) {
    if (vertex_kind(d, g.sigma, v) == -2) return false;
  }
  return g.sources().size() == g.sinks().size();
}

ValidationReport validate_contour(const ContourEmbedding& c, const DriftCertificate& cert) {
  ValidationReport rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };
  const ToomGraph& g = c.graph;
  if (!validate_graph(g)) {
    fail("not a Toom graph");
    return rep;
  }
  if (g.sigma != cert.sigma()) fail("graph has " + std::to_string(g.sigma) + " charges, certificate " + std::to_string(cert.sigma()));
  const auto nv = static_cast<std::size_t>(g.vertex_count);
  if (c.space.size() != nv || c.time.size() != nv) {
    fail("embedding does not cover every vertex");
    return rep;
  }
  if (!rep.ok()) return rep;
  const Degrees d = degrees(g);
  const std::vector<int> sources = g.sources();
  const std::vector<int> sinks = g.sinks();
  if (std::find(sources.begin(), sources.end(), c.root) == sources.end()) fail("root is not a source");
  if (!connected(g)) fail("graph is not connected");

  std::vector<char> is_sink(nv, 0), is_source(nv, 0);
  for (int v : sinks) is_sink[static_cast<std::size_t>(v)] = 1;
  for (int v : sources) is_source[static_cast<std::size_t>(v)] = 1;

  for (int s = 0; s < g.sigma; ++s) {
    for (auto [v, w] : g.edges[static_cast<std::size_t>(s)]) {
      if (c.time[static_cast<std::size_t>(w)] != c.time[static_cast<std::size_t>(v)] - 1) {
        fail("edge " + std::to_string(v) + "->" + std::to_string(w) + " does not go down one time step");
      }
    }
  }

  std::map<std::pair<Site, Coord>, int> occupancy;
  for (std::size_t v = 0; v < nv; ++v) ++occupancy[{c.space[v], c.time[v]}];
  for (int v : sinks) {
    const auto V = static_cast<std::size_t>(v);
    if (occupancy[{c.space[V], c.time[V]}] > 1) fail("sink " + std::to_string(v) + " shares its position with another vertex");
    if (c.time[V] != 0) fail("sink " + std::to_string(v) + " is not at time 0");
  }
  std::set<std::tuple<int, Site, Coord>> internal_seen;
  for (std::size_t v = 0; v < nv; ++v) {
    const int kind = vertex_kind(d, g.sigma, static_cast<int>(v));
    if (kind >= 0 && !internal_seen.insert({kind, c.space[v], c.time[v]}).second) {
      fail("two internal vertices of charge " + std::to_string(kind + 1) + " share a position");
    }
  }

  std::set<Site> sink_sites;
  for (int v : sinks) sink_sites.insert(c.space[static_cast<std::size_t>(v)]);
  for (int s = 0; s < g.sigma; ++s) {
    const SiteSet& as = cert.obstacle(s);
    for (auto [v, w] : g.edges[static_cast<std::size_t>(s)]) {
      const auto V = static_cast<std::size_t>(v);
      const Site inc = c.space[static_cast<std::size_t>(w)] - c.space[V];
      const bool from_star = !is_source[V] || v == c.root;
      if (from_star) {
        if (sink_sites.count(c.space[V])) {
          if (!inc.is_origin()) fail("edge from sink site " + c.space[V].str() + " is not vertical");
        } else if (!contains(as, inc)) {
          fail("charge " + std::to_string(s + 1) + " increment " + inc.str() + " not in A_" + std::to_string(s + 1));
        }
      } else if (!contains(cert.union_a, inc)) {
        fail("source increment " + inc.str() + " not in A");
      }
    }
  }
  for (int v : sources) {
    if (v == c.root) continue;
    std::set<std::pair<Site, Coord>> targets;
    for (int s = 0; s < g.sigma; ++s) {
      for (auto [a, b] : g.edges[static_cast<std::size_t>(s)]) {
        if (a == v) targets.insert({c.space[static_cast<std::size_t>(b)], c.time[static_cast<std::size_t>(b)]});
      }
    }
    if (targets.size() != 2) fail("source " + std::to_string(v) + " is not a fork");
  }
  return rep;
}

Rational zero_sum(const ContourEmbedding& c, const DriftCertificate& cert) {
  Rational total = 0;
  for (int s = 0; s < c.graph.sigma; ++s) {
    const DriftEntry& e = cert.entries[static_cast<std::size_t>(s)];
    for (auto [v, w] : c.graph.edges[static_cast<std::size_t>(s)]) {
      total += e.form(c.space[static_cast<std::size_t>(w)]) - e.form(c.space[static_cast<std::size_t>(v)]);
    }
  }
  return total;
}

// --- shards -----------------------------------------------------------------

Site Shard::endpoint(int charge) const {
  Site p = source;
  for (const Site& step : paths[static_cast<std::size_t>(charge)]) p += step;
  return p;
}

std::vector<Site> Shard::points(int charge) const {
  std::vector<Site> out;
  Site p = source;
  for (const Site& step : paths[static_cast<std::size_t>(charge)]) {
    p += step;
    out.push_back(p);
  }
  return out;
}

int ShatteredContour::n() const {
  int n = 0;
  for (std::size_t k = 0; k < shards.size(); ++k) {
    for (const auto& path : shards[k].paths) {
      n += static_cast<int>(path.size()) - (k == 0 || path.empty() ? 0 : 1);
    }
  }
  return n;
}

bool ShatteredContour::trivial() const {
  return shards.size() == 1 &&
         std::all_of(shards[0].paths.begin(), shards[0].paths.end(), [](const auto& p) { return p.empty(); });
}

SiteSet ShatteredContour::endpoint_sites() const {
  SiteSet out;
  for (const Shard& sh : shards) {
    for (int c = 0; c < sigma; ++c) out.push_back(sh.endpoint(c));
  }
  return canonical(std::move(out));
}

void ShatteredContour::canonicalize() {
  if (shards.size() > 1) std::sort(shards.begin() + 1, shards.end());
}

std::string ShatteredContour::serialized() const {
  std::string out;
  for (std::size_t k = 0; k < shards.size(); ++k) {
    if (k) out += ' ';
    out += shards[k].source.str() + ':';
    for (std::size_t c = 0; c < shards[k].paths.size(); ++c) {
      if (c) out += '/';
      for (const Site& step : shards[k].paths[c]) out += step.str();
    }
  }
  return out;
}

bool canonical_contour_less(const ShatteredContour& a, const ShatteredContour& b) {
  if (a.m() != b.m()) return a.m() < b.m();
  if (a.n() != b.n()) return a.n() < b.n();
  return a.serialized() < b.serialized();
}

ShatteredContour trivial_contour(int sigma, const Site& at) {
  ShatteredContour sc;
  sc.sigma = sigma;
  sc.shards.push_back({at, std::vector<std::vector<Site>>(static_cast<std::size_t>(sigma))});
  return sc;
}

ValidationReport validate_shattered(const ShatteredContour& sc, const DriftCertificate& cert,
                                    const std::optional<Site>& root_at) {
  ValidationReport rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };
  const int sigma = sc.sigma;
  if (sigma != cert.sigma()) {
    fail("contour has " + std::to_string(sigma) + " charges, certificate " + std::to_string(cert.sigma()));
    return rep;
  }
  if (sc.shards.empty()) {
    fail("no shards");
    return rep;
  }
  for (std::size_t k = 0; k < sc.shards.size(); ++k) {
    const Shard& sh = sc.shards[k];
    if (static_cast<int>(sh.paths.size()) != sigma) {
      fail("shard " + std::to_string(k) + " does not have one path per charge");
      return rep;
    }
    if (sh.source.dim() != cert.dimension()) {
      fail("shard " + std::to_string(k) + " has the wrong dimension");
      return rep;
    }
  }
  if (root_at && sc.shards[0].source != *root_at) fail("root is not at " + root_at->str());

  // Increments: charge paths of the root and internal edges step in A_s; the
  // first edge out of another source steps in A, and its sigma edges hit
  // exactly two sites.
  const Shard& root = sc.shards[0];
  const auto empty_paths = std::count_if(root.paths.begin(), root.paths.end(), [](const auto& p) { return p.empty(); });
  if (empty_paths != 0 && empty_paths != sigma) fail("root paths must be all empty or all non-empty");
  for (std::size_t k = 0; k < sc.shards.size(); ++k) {
    const Shard& sh = sc.shards[k];
    std::set<Site> firsts;
    for (int c = 0; c < sigma; ++c) {
      const auto& path = sh.paths[static_cast<std::size_t>(c)];
      for (std::size_t j = 0; j < path.size(); ++j) {
        const bool fork_edge = k > 0 && j == 0;
        const SiteSet& allowed = fork_edge ? cert.union_a : cert.obstacle(c);
        if (!contains(allowed, path[j])) {
          fail("shard " + std::to_string(k) + " charge " + std::to_string(c + 1) + " step " + path[j].str() +
               (fork_edge ? " not in A" : " not in A_" + std::to_string(c + 1)));
        }
      }
      if (k > 0) {
        if (path.empty()) {
          fail("shard " + std::to_string(k) + " has an empty path");
        } else {
          firsts.insert(path.front());
        }
      }
    }
    if (k > 0 && firsts.size() != 2) fail("shard " + std::to_string(k) + " source is not a fork");
  }

  // Endpoint bookkeeping.
  std::map<Site, std::vector<int>> arrivals;
  std::vector<std::vector<Site>> shard_ends(sc.shards.size());
  std::vector<Site> inner;
  for (std::size_t k = 0; k < sc.shards.size(); ++k) {
    const Shard& sh = sc.shards[k];
    for (int c = 0; c < sigma; ++c) {
      const std::vector<Site> pts = sh.points(c);
      const Site end = pts.empty() ? sh.source : pts.back();
      auto& slot = arrivals[end];
      slot.resize(static_cast<std::size_t>(sigma), 0);
      ++slot[static_cast<std::size_t>(c)];
      shard_ends[k].push_back(end);
      if (!pts.empty()) {
        inner.push_back(sh.source);
        inner.insert(inner.end(), pts.begin(), pts.end() - 1);
      }
    }
  }
  for (const auto& [site, counts] : arrivals) {
    for (int c = 0; c < sigma; ++c) {
      if (counts[static_cast<std::size_t>(c)] != 1) {
        fail("endpoint " + site.str() + " receives charge " + std::to_string(c + 1) + " " +
             std::to_string(counts[static_cast<std::size_t>(c)]) + " times");
      }
    }
  }
  for (const Site& p : inner) {
    if (arrivals.count(p)) {
      fail("non-endpoint point " + p.str() + " coincides with an endpoint");
      break;
    }
  }

  // Shards linked through shared endpoint sites must form one component.
  std::vector<std::size_t> parent(sc.shards.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<Site, std::size_t> owner;
  for (std::size_t k = 0; k < sc.shards.size(); ++k) {
    for (const Site& e : shard_ends[k]) {
      auto [it, fresh] = owner.emplace(e, k);
      if (!fresh) parent[find(k)] = find(it->second);
    }
  }
  for (std::size_t k = 1; k < sc.shards.size(); ++k) {
    if (find(k) != find(0)) {
      fail("shards are not connected");
      break;
    }
  }
  return rep;
}

bool is_present(const ShatteredContour& sc, const SiteSet& zeros) {
  for (const Site& e : sc.endpoint_sites()) {
    if (!contains(zeros, e)) return false;
  }
  return true;
}

ContourEmbedding realize(const ShatteredContour& sc) {
  ContourEmbedding c;
  ToomGraph& g = c.graph;
  g.sigma = sc.sigma;
  g.edges.resize(static_cast<std::size_t>(sc.sigma));
  auto add_vertex = [&](const Site& s, Coord t) {
    c.space.push_back(s);
    c.time.push_back(t);
    return g.vertex_count++;
  };
  std::map<Site, int> sink_of;
  auto sink = [&](const Site& s) {
    auto it = sink_of.find(s);
    if (it != sink_of.end()) return it->second;
    int v = add_vertex(s, 0);
    sink_of.emplace(s, v);
    return v;
  };

  Coord top = -1;
  for (std::size_t k = 0; k < sc.shards.size(); ++k) {
    const Shard& sh = sc.shards[k];
    Coord longest = 0;
    for (const auto& p : sh.paths) longest = std::max<Coord>(longest, static_cast<Coord>(p.size()));
    // Disjoint time windows keep same-charge internal vertices of different
    // shards apart.
    const Coord t0 = k == 0 ? longest : top + longest + 1;
    top = t0;
    const int src = t0 == 0 ? sink(sh.source) : add_vertex(sh.source, t0);
    if (k == 0) c.root = src;
    for (int s = 0; s < sc.sigma; ++s) {
      auto& es = g.edges[static_cast<std::size_t>(s)];
      int prev = src;
      Site at = sh.source;
      Coord t = t0;
      for (const Site& step : sh.paths[static_cast<std::size_t>(s)]) {
        at += step;
        --t;
        const int v = t == 0 ? sink(at) : add_vertex(at, t);
        es.emplace_back(prev, v);
        prev = v;
      }
      while (t > 0) {
        --t;
        const int v = t == 0 ? sink(at) : add_vertex(at, t);
        es.emplace_back(prev, v);
        prev = v;
      }
    }
  }
  return c;
}

json contour_to_json(const ShatteredContour& sc) {
  json shards = json::array();
  for (std::size_t k = 0; k < sc.shards.size(); ++k) {
    json paths = json::array();
    for (const auto& p : sc.shards[k].paths) {
      json steps = json::array();
      for (const Site& s : p) steps.push_back(site_to_json(s));
      paths.push_back(steps);
    }
    shards.push_back({{"root", k == 0}, {"source", site_to_json(sc.shards[k].source)}, {"paths", paths}});
  }
  return json{{"sigma", sc.sigma}, {"m", sc.m()}, {"n", sc.n()}, {"shards", shards}};
}

ShatteredContour contour_from_json(const json& j, int sigma) {
  ShatteredContour sc;
  sc.sigma = sigma;
  const std::string text = j.dump();
  for (const json& sh : j.at("shards")) {
    Shard shard;
    const json& src = sh.at("source");
    shard.source = site_from_json(text, src, {}, static_cast<int>(src.size()));
    for (const json& p : sh.at("paths")) {
      std::vector<Site> steps;
      for (const json& s : p) steps.push_back(site_from_json(text, s, {}, shard.source.dim()));
      shard.paths.push_back(std::move(steps));
    }
    sc.shards.push_back(std::move(shard));
  }
  return sc;
}

}  // namespace toombound
