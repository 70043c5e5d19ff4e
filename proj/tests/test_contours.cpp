#include <gtest/gtest.h>

#include <set>

#include "contour_oracle.hpp"
#include "gen.hpp"
#include "toombound/builtins.hpp"
#include "toombound/contours.hpp"
#include "toombound/peierls.hpp"

using namespace toombound;

namespace {

SiteSet S(std::initializer_list<Site> sites) { return canonical(SiteSet(sites)); }

std::set<std::string> serialized_set(const EnumerationResult& r) {
  std::set<std::string> out;
  for (const auto& sc : r.contours) out.insert(sc.serialized());
  return out;
}

}  // namespace

TEST(ToomGraph, Validation) {
  ToomGraph iso{3, 1, {{}, {}, {}}};
  EXPECT_TRUE(validate_graph(iso));
  EXPECT_EQ(iso.sources(), std::vector<int>{0});
  EXPECT_EQ(iso.sinks(), std::vector<int>{0});

  ToomGraph pair{3, 2, {{{0, 1}}, {{0, 1}}, {{0, 1}}}};
  EXPECT_TRUE(validate_graph(pair));

  ToomGraph bad{3, 3, {{{0, 2}, {1, 2}}, {}, {}}};
  EXPECT_FALSE(validate_graph(bad));
}

TEST(Contour, TrivialEmbedding) {
  const auto cert = builtins::dtbp_certificate();
  const auto sc = trivial_contour(3, Site{0, 0});
  EXPECT_TRUE(sc.trivial());
  EXPECT_EQ(sc.m(), 0);
  EXPECT_EQ(sc.n(), 0);
  const auto emb = realize(sc);
  EXPECT_EQ(emb.graph.vertex_count, 1);
  EXPECT_EQ(emb.time[0], 0);
  EXPECT_TRUE(validate_contour(emb, cert).ok());
  EXPECT_EQ(zero_sum(emb, cert), 0);
}

TEST(Contour, SinkAtTimeOneRejected) {
  const auto cert = builtins::dtbp_certificate();
  ContourEmbedding emb{ToomGraph{3, 1, {{}, {}, {}}}, 0, {Site{0, 0}}, {1}};
  EXPECT_FALSE(validate_contour(emb, cert).ok());
}

TEST(Contour, OverlappingSinksRejected) {
  // Root at (o,1), charge-s edges straight to sinks at time 0: the sinks sit
  // on different sites, but the contour is still not a Toom contour since
  // each sink takes only one charge; moving two sinks onto one space
  // coordinate breaks the separation condition as well.
  const auto cert = builtins::dtbp_certificate();
  ContourEmbedding emb;
  emb.graph = ToomGraph{3, 4, {{{0, 1}}, {{0, 2}}, {{0, 3}}}};
  emb.root = 0;
  emb.space = {Site{0, 0}, Site{1, 0}, Site{0, 1}, Site{0, 1}};
  emb.time = {1, 0, 0, 0};
  EXPECT_FALSE(validate_contour(emb, cert).ok());
}

TEST(Contour, ZeroSumIsAGraphIdentity) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 1;
  const auto res = enumerate(cert, opts);
  const ShatteredContour* nontrivial = nullptr;
  for (const auto& sc : res.contours) {
    if (sc.m() == 1) nontrivial = &sc;
  }
  ASSERT_NE(nontrivial, nullptr);
  ContourEmbedding emb = realize(*nontrivial);
  ASSERT_EQ(zero_sum(emb, cert), 0);
  // Each sink takes one edge of every charge and the forms sum to zero, so
  // moving a sink keeps the sum but breaks the embedding.
  const int sink = emb.graph.sinks().back();
  emb.space[static_cast<std::size_t>(sink)] += Site{3, 7};
  EXPECT_EQ(zero_sum(emb, cert), 0);
  EXPECT_FALSE(validate_contour(emb, cert).ok());
  // Dropping an edge unbalances the graph and the sum.
  ContourEmbedding cut = realize(*nontrivial);
  auto& edges = cut.graph.edges[0];
  const auto [v, w] = edges.front();
  ASSERT_NE(cut.space[static_cast<std::size_t>(v)], cut.space[static_cast<std::size_t>(w)]);
  edges.erase(edges.begin());
  EXPECT_NE(zero_sum(cut, cert), 0);
  EXPECT_FALSE(validate_contour(cut, cert).ok());
}

TEST(Shattered, CheckerRejectsBrokenContours) {
  const auto cert = builtins::dtbp_certificate();
  const Site o{0, 0};
  // A root alone with non-empty paths cannot close up.
  ShatteredContour lone{3, {Shard{o, {{Site{1, 0}}, {Site{0, 1}}, {Site{-1, -1}}}}}};
  EXPECT_FALSE(validate_shattered(lone, cert, o).ok());
  // Root somewhere else.
  EXPECT_FALSE(validate_shattered(trivial_contour(3, Site{1, 0}), cert, o).ok());
  EXPECT_TRUE(validate_shattered(trivial_contour(3, Site{1, 0}), cert).ok());
  // A step outside A_c.
  ShatteredContour off{3, {Shard{o, {{Site{-1, -1}}, {Site{0, 1}}, {Site{1, 0}}}}}};
  EXPECT_FALSE(validate_shattered(off, cert, o).ok());
}

TEST(Shattered, PresenceBasics) {
  const auto triv = trivial_contour(3, Site{0, 0});
  EXPECT_TRUE(is_present(triv, S({{0, 0}})));
  EXPECT_FALSE(is_present(triv, {}));
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 1;
  SiteSet window;
  for (Coord x = -8; x <= 8; ++x) {
    for (Coord y = -8; y <= 8; ++y) window.push_back(Site{x, y});
  }
  window = canonical(window);
  for (const auto& sc : enumerate(cert, opts).contours) {
    EXPECT_TRUE(is_present(sc, window));
    // Monotone in the zero set.
    const SiteSet ends = sc.endpoint_sites();
    EXPECT_TRUE(is_present(sc, ends));
    SiteSet fewer(ends.begin() + 1, ends.end());
    EXPECT_FALSE(is_present(sc, fewer));
  }
}

TEST(Enumerate, MZeroIsTrivialOnly) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 0;
  const auto res = enumerate(cert, opts);
  ASSERT_EQ(res.contours.size(), 1U);
  EXPECT_TRUE(res.contours[0].trivial());
  EXPECT_EQ(res.counts.size(), 1U);
  EXPECT_EQ(res.counts.at({0, 0}), 1);
  EXPECT_EQ(res.counts_csv(), "m,n,count\n0,0,1\n");
  EXPECT_EQ(res.n_max, 0);
  EXPECT_FALSE(res.truncated);
}

TEST(Enumerate, MatchesBruteForceOracle) {
  const auto cert = builtins::dtbp_certificate();
  for (int n_max : {3, 4, 6}) {
    EnumerationOptions opts;
    opts.m_max = 1;
    opts.n_max = n_max;
    const auto res = enumerate(cert, opts);
    EXPECT_EQ(serialized_set(res), oracle::brute_force(cert, n_max)) << "n_max " << n_max;
  }
  EnumerationOptions opts;
  opts.m_max = 1;
  const auto res = enumerate(cert, opts);
  EXPECT_EQ(res.n_max, 6);
  EXPECT_EQ(res.counts_csv(), "m,n,count\n0,0,1\n1,3,6\n");
}

TEST(Enumerate, BruteForceOnScaledCertificate) {
  // Rescaling the weights changes no contour.
  const auto cert = scaled(builtins::dtbp_certificate(), Rational(5, 3));
  EnumerationOptions opts;
  opts.m_max = 1;
  EXPECT_EQ(serialized_set(enumerate(cert, opts)), oracle::brute_force(cert, 6));
}

TEST(Enumerate, LemmaChecksUpToTwo) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 2;
  const auto res = enumerate(cert, opts);
  EXPECT_FALSE(res.truncated);
  EXPECT_EQ(res.complete_through(), 2);
  const BoundParameters params = parameters_of(cert);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < res.contours.size(); ++i) {
    const auto& sc = res.contours[i];
    if (i > 0) EXPECT_TRUE(canonical_contour_less(res.contours[i - 1], sc));
    EXPECT_TRUE(seen.insert(sc.serialized()).second);
    ASSERT_TRUE(validate_shattered(sc, cert, Site{0, 0}).ok()) << sc.serialized();
    const auto emb = realize(sc);
    ASSERT_TRUE(validate_contour(emb, cert).ok()) << sc.serialized();
    EXPECT_EQ(zero_sum(emb, cert), 0);
    EXPECT_LE(sc.n(), 6 * sc.m());
    EXPECT_EQ(decode(encode(sc, cert), cert), sc);
  }
  for (const auto& [key, count] : res.counts) {
    EXPECT_LE(count, remark_count(params, key.first, key.second));
    EXPECT_LE(count, encoding_count(params, key.first, key.second));
  }
  EXPECT_EQ(res.counts.at({0, 0}), 1);
}

TEST(Enumerate, TruncationIsReported) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 2;
  opts.max_contours = 10;
  const auto res = enumerate(cert, opts);
  EXPECT_TRUE(res.truncated);
  EXPECT_FALSE(res.truncation_report.empty());
  EXPECT_LT(res.complete_through(), 2);
}

TEST(Enumerate, ParallelIsDeterministic) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 1;
  const auto a = enumerate(cert, opts);
  const auto b = enumerate(cert, opts);
  EXPECT_EQ(a.contours, b.contours);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(Encoding, TrivialContour) {
  const auto cert = builtins::dtbp_certificate();
  const auto enc = encode(trivial_contour(3, Site{0, 0}), cert);
  EXPECT_TRUE(enc.forks.empty());
  EXPECT_TRUE(enc.increments.empty());
  EXPECT_EQ(enc.separators, (std::vector<int>{0, 0}));
  EXPECT_EQ(decode(enc, cert), trivial_contour(3, Site{0, 0}));
}

TEST(Encoding, AlphabetsAndErrors) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 1;
  for (const auto& sc : enumerate(cert, opts).contours) {
    const auto enc = encode(sc, cert);
    EXPECT_EQ(enc.forks.size(), static_cast<std::size_t>(sc.m()));
    EXPECT_EQ(enc.increments.size(), static_cast<std::size_t>(sc.n()));
    EXPECT_EQ(enc.separators.size(), static_cast<std::size_t>(3 * (sc.m() + 1) - 1));
    for (int f : enc.forks) {
      EXPECT_GE(f, 0);
      EXPECT_LT(f, 18);
    }
    for (int x : enc.increments) {
      EXPECT_GE(x, 0);
      EXPECT_LT(x, 2);
    }
  }
  ContourEncoding bad;
  bad.separators = {0};  // wrong count
  EXPECT_THROW(decode(bad, cert), DecodeError);
  bad.separators = {0, 0};
  bad.forks = {0};  // a fork with no open couple to attach to
  EXPECT_THROW(decode(bad, cert), DecodeError);
  bad.forks = {};
  bad.increments = {5};
  bad.separators = {0, 0};
  EXPECT_THROW(decode(bad, cert), DecodeError);
}

TEST(ContourIo, JsonRoundTrip) {
  const auto cert = builtins::dtbp_certificate();
  EnumerationOptions opts;
  opts.m_max = 1;
  for (const auto& sc : enumerate(cert, opts).contours) {
    EXPECT_EQ(contour_from_json(contour_to_json(sc), 3), sc);
  }
}

TEST(Presence, KnownZeroSets) {
  const auto cert = builtins::dtbp_certificate();
  const auto fam = builtins::dtbp();
  const auto triv = presence_search(S({{0, 0}}), fam, cert, 3);
  ASSERT_TRUE(triv.contour);
  EXPECT_TRUE(triv.contour->trivial());

  const auto three = presence_search(S({{1, 0}, {0, 1}, {-1, -1}}), fam, cert, 3);
  ASSERT_TRUE(three.contour);
  EXPECT_TRUE(is_present(*three.contour, S({{1, 0}, {0, 1}, {-1, -1}})));
  EXPECT_TRUE(validate_shattered(*three.contour, cert, Site{0, 0}).ok());
  EXPECT_EQ(three.contour->m(), 1);

  EXPECT_THROW(presence_search(S({{1, 0}}), fam, cert, 3), PreconditionError);
  EXPECT_THROW(presence_search({}, fam, cert, 3), PreconditionError);
}

TEST(Presence, FirstPresentIsCanonicallyFirst) {
  // Compare with a scan of the unrestricted enumeration.
  const auto cert = builtins::dtbp_certificate();
  const SiteSet zeros = S({{1, 0}, {0, 1}, {2, 1}, {1, 2}, {-1, -1}});
  const auto got = presence_search(zeros, builtins::dtbp(), cert, 1);
  EnumerationOptions opts;
  opts.m_max = 1;
  const ShatteredContour* first = nullptr;
  const auto all = enumerate(cert, opts);
  for (const auto& sc : all.contours) {
    if (is_present(sc, zeros)) {
      first = &sc;
      break;
    }
  }
  ASSERT_NE(first, nullptr);
  ASSERT_TRUE(got.contour);
  EXPECT_EQ(*got.contour, *first);
}
