#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toombound/certificate.hpp"
#include "toombound/family.hpp"
#include "toombound/json_io.hpp"
#include "toombound/peierls.hpp"

namespace toombound {

// ---------------------------------------------------------------------------
// Toom graphs and their space-time embeddings

/// Directed graph with sigma edge types ("charges"); edges are (from, to)
/// vertex indices.
struct ToomGraph {
  int sigma = 0;
  int vertex_count = 0;
  std::vector<std::vector<std::pair<int, int>>> edges;  // edges[s], s = 0..sigma-1

  std::vector<int> sources() const;
  std::vector<int> sinks() const;
};

/// Every vertex is isolated, a source, a sink, or internal of one charge,
/// and sources and sinks are equally many.
bool validate_graph(const ToomGraph& g);

struct ContourEmbedding {
  ToomGraph graph;
  int root = 0;
  std::vector<Site> space;   // space coordinate per vertex
  std::vector<Coord> time;   // time coordinate per vertex
};

/// All embedding and contour conditions against the certificate's sets
/// (edges down one time step, sink separation, internal separation, vertical
/// segments at sink sites, A_s / A increments, forks, sinks at time 0).
ValidationReport validate_contour(const ContourEmbedding& c, const DriftCertificate& cert);

/// sum_s sum_{(v,w) in E_s} L_s(psi(w)) - L_s(psi(v)).
Rational zero_sum(const ContourEmbedding& c, const DriftCertificate& cert);

// ---------------------------------------------------------------------------
// Shattered contours: connected sets of space-embedded shards

/// One source and sigma charge paths given as increment sequences. For a
/// non-root shard the first increment of each path is the fork edge (in A);
/// later increments of path s lie in A_s.
struct Shard {
  Site source;
  std::vector<std::vector<Site>> paths;

  Site endpoint(int charge) const;
  /// Points visited by path `charge` after the source, endpoint last.
  std::vector<Site> points(int charge) const;

  friend bool operator==(const Shard&, const Shard&) = default;
  friend auto operator<=>(const Shard&, const Shard&) = default;
};

/// shards[0] is the root. Canonical form: non-root shards sorted.
struct ShatteredContour {
  int sigma = 0;
  std::vector<Shard> shards;

  int m() const { return static_cast<int>(shards.size()) - 1; }
  /// Edges leaving the root or an internal vertex.
  int n() const;
  bool trivial() const;
  SiteSet endpoint_sites() const;

  void canonicalize();
  /// Compact text form; the canonical order is (m, n, serialized()).
  std::string serialized() const;

  friend bool operator==(const ShatteredContour&, const ShatteredContour&) = default;
};

bool canonical_contour_less(const ShatteredContour& a, const ShatteredContour& b);

/// The trivial contour: a root at `at` with sigma empty paths.
ShatteredContour trivial_contour(int sigma, const Site& at);

/// Conditions (i)'-(vi)' plus connectivity, checked directly. Also checks the
/// root sits at `root_at` when given.
ValidationReport validate_shattered(const ShatteredContour& sc, const DriftCertificate& cert,
                                    const std::optional<Site>& root_at = std::nullopt);

/// Every endpoint site lies in `zeros` (canonical site set).
bool is_present(const ShatteredContour& sc, const SiteSet& zeros);

/// A Toom contour in the class: shard k gets its own time window, endpoints
/// are joined to sinks at time 0 by vertical segments.
ContourEmbedding realize(const ShatteredContour& sc);

json contour_to_json(const ShatteredContour& sc);
ShatteredContour contour_from_json(const json& j, int sigma);

// ---------------------------------------------------------------------------
// Enumeration

struct EnumerationOptions {
  int m_max = 0;
  /// Edge budget; < 0 means floor(rho * m_max), which by the edge bound
  /// makes the run exhaustive.
  int n_max = -1;
  /// Stop after this many contours (truncation is reported).
  std::size_t max_contours = 5'000'000;
  /// When set, endpoints must lie in this canonical site set.
  std::optional<SiteSet> allowed_endpoints;
  /// Keep the contour list (counts are always kept).
  bool keep_contours = true;
};

struct EnumerationResult {
  std::vector<ShatteredContour> contours;  // canonical order
  ContourCounts counts;                    // keyed (n, m)
  int m_max = 0;
  int n_max = 0;
  std::size_t total = 0;
  bool truncated = false;
  std::string truncation_report;
  /// Largest m whose edge bound floor(rho m) fits in n_max.
  int complete_m = -1;

  /// Counts are complete for every m <= this (-1 if none).
  int complete_through() const;
  /// "m,n,count" rows sorted by (m, n), with a header.
  std::string counts_csv() const;
};

/// Shattered contours rooted at o with at most m_max + 1 shards and at most
/// n_max root/internal edges, without duplicates. Root-shard subtrees run in
/// parallel; the merged list is sorted canonically.
EnumerationResult enumerate(const DriftCertificate& cert, const EnumerationOptions& opts);

// ---------------------------------------------------------------------------
// Encoding: forks, increments, separators

class DecodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ContourEncoding {
  std::vector<int> forks;       // m symbols < fork_alphabet_size
  std::vector<int> increments;  // n symbols < max_s |A_s|
  /// sigma(m+1)-1 separators, each given as the number of increments
  /// preceding it.
  std::vector<int> separators;

  friend bool operator==(const ContourEncoding&, const ContourEncoding&) = default;
};

/// Shards are visited root first, then by the front of a first-in first-out
/// list of (endpoint site, charge) couples still waiting for their charge;
/// within a shard charges are read in increasing order.
ContourEncoding encode(const ShatteredContour& sc, const DriftCertificate& cert);

/// Inverse of encode. Throws DecodeError when the couple list runs dry,
/// separators do not match, a symbol is out of range, or the result is not
/// a valid shattered contour.
ShatteredContour decode(const ContourEncoding& enc, const DriftCertificate& cert);

// ---------------------------------------------------------------------------
// Presence

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PresenceResult {
  std::optional<ShatteredContour> contour;
  /// No enumeration level up to the one returned (or m_max) was truncated.
  bool exhaustive = false;
  bool truncated = false;
  std::string report;
};

/// Canonically first shattered contour rooted at o present in `zeros`,
/// searching m <= m_max. Throws PreconditionError when o is not in the
/// closure of `zeros` under `family`. An empty result is inconclusive.
PresenceResult presence_search(const SiteSet& zeros, const UpdateFamily& family, const DriftCertificate& cert,
                               int m_max, std::size_t max_contours = 5'000'000);

}  // namespace toombound
