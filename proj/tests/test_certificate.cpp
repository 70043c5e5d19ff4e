#include <gtest/gtest.h>

#include "gen.hpp"
#include "toombound/builtins.hpp"
#include "toombound/certificate.hpp"
#include "toombound/certificate_io.hpp"
#include "toombound/peierls.hpp"

using namespace toombound;

namespace {

SiteSet S(std::initializer_list<Site> sites) { return canonical(SiteSet(sites)); }

bool has_failure(const ValidationReport& rep, const std::string& needle) {
  for (const auto& f : rep.failures) {
    if (f.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Certificate, DtbpConstants) {
  const DriftCertificate c = builtins::dtbp_certificate();
  const ObstacleFamily obs = build_obstacles(builtins::dtbp());
  const auto rep = validate(c, &obs);
  EXPECT_TRUE(rep.ok()) << validation_to_json(rep).dump();
  EXPECT_EQ(c.sigma(), 3);
  EXPECT_EQ(c.epsilon, 1);
  EXPECT_EQ(c.r_const, 6);
  EXPECT_EQ(c.rho, 6);
  EXPECT_EQ(c.union_a, S({{1, 0}, {0, 1}, {-1, -1}}));
  EXPECT_EQ(c.max_obstacle_size(), 2U);
}

TEST(Certificate, UnbalancedWeightsRejected) {
  DriftCertificate c = builtins::dtbp_certificate();
  c.entries[2].mu = 2;
  c = assemble_certificate(c.entries);
  const auto rep = validate(c);
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(has_failure(rep, "(1/1,-2/1)")) << validation_to_json(rep).dump();
}

TEST(Certificate, NonPositiveWitnessRejected) {
  DriftCertificate c = builtins::dtbp_certificate();
  c.entries[0].obstacle = S({{1, 0}, {-1, -1}});
  c = assemble_certificate(c.entries);
  const auto rep = validate(c, nullptr);
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(has_failure(rep, "= -2 is not positive")) << validation_to_json(rep).dump();
}

TEST(Certificate, StatedConstantsAreCompared) {
  DriftCertificate c = builtins::dtbp_certificate();
  c.r_const = 5;
  EXPECT_TRUE(has_failure(validate(c), "r_const"));
  c = builtins::dtbp_certificate();
  c.rho = 7;
  EXPECT_TRUE(has_failure(validate(c), "rho"));
}

TEST(Certificate, WitnessMustBelongToFamily) {
  const ObstacleFamily other = build_obstacles(UpdateFamily::make(2, {S({{1, 0}})}));
  EXPECT_TRUE(has_failure(validate(builtins::dtbp_certificate(), &other), "not in the family"));
}

TEST(Certificate, DriftConstants) {
  const auto c = builtins::dtbp_certificate();
  const auto k = drift_constants(c.entries, c.union_a);
  EXPECT_EQ(k.epsilon, 1);
  EXPECT_EQ(k.r_const, 6);

  std::vector<DriftEntry> two{{Direction::from(Site{1, 0}), Rational(1), S({{1, 0}})},
                              {Direction::from(Site{-1, 0}), Rational(1), S({{-1, 0}})}};
  const auto k2 = drift_constants(two, S({{1, 0}, {-1, 0}}));
  EXPECT_EQ(k2.epsilon, 1);
  EXPECT_EQ(k2.r_const, 2);

  two[0].obstacle = S({{0, 1}});
  EXPECT_THROW(drift_constants(two, S({{0, 1}, {-1, 0}})), CertificateError);
  EXPECT_THROW(drift_constants({}, {}), CertificateError);
}

TEST(Certificate, ScalingWeights) {
  const auto c = builtins::dtbp_certificate();
  const auto s = scaled(c, Rational(3));
  EXPECT_EQ(s.epsilon, 3 * c.epsilon);
  EXPECT_EQ(s.r_const, 3 * c.r_const);
  EXPECT_EQ(s.rho, c.rho);
  EXPECT_EQ(bound(s).main_bound.lower, bound(c).main_bound.lower);
  EXPECT_THROW(scaled(c, Rational(0)), std::invalid_argument);
}

TEST(Certificate, PositiveCircuit) {
  auto w = positive_circuit(std::vector<Site>{{1, 1}, {-2, 1}, {1, -2}});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (std::vector<Coord>{1, 1, 1}));
  w = positive_circuit(std::vector<Site>{{1, 0}, {-2, 0}});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (std::vector<Coord>{2, 1}));
  EXPECT_FALSE(positive_circuit(std::vector<Site>{{1, 0}, {0, 1}}));
  EXPECT_FALSE(positive_circuit(std::vector<Site>{{1, 0}, {0, 1}, {1, 1}}));  // kernel has mixed signs
  EXPECT_FALSE(positive_circuit(std::vector<Site>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));  // nullity 2
}

TEST(Certificate, SearchDtbp) {
  const ObstacleFamily obs = build_obstacles(builtins::dtbp());
  const auto c = search_certificate(obs, 2);
  ASSERT_TRUE(c);
  EXPECT_TRUE(validate(*c, &obs).ok());
  EXPECT_EQ(c->sigma(), 3);
  EXPECT_EQ(c->rho, 6);
  EXPECT_FALSE(search_certificate(obs, 1));  // (-2,1) and (1,-2) are outside
}

TEST(Certificate, SearchOneSidedFamilyFails) {
  const ObstacleFamily obs = build_obstacles(UpdateFamily::make(2, {S({{0, -1}})}));
  for (int window = 1; window <= 3; ++window) EXPECT_FALSE(search_certificate(obs, window));
  EXPECT_THROW(optimize_certificate(obs, 2), CertificateNotFound);
  try {
    optimize_certificate(obs, 2);
  } catch (const CertificateNotFound& e) {
    EXPECT_NE(std::string(e.what()).find("inconclusive within window"), std::string::npos);
    EXPECT_EQ(e.window(), 2);
  }
}

TEST(Certificate, OneDimensional) {
  // One rule {-1, 1}: obstacles {-1} and {1} give v = 1 and v = -1.
  const ObstacleFamily obs = build_obstacles(UpdateFamily::make(1, {S({Site{-1}, Site{1}})}));
  const auto c = search_certificate(obs, 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->sigma(), 2);
  EXPECT_EQ(c->entries[0].v.vec(), Site{-1});
  EXPECT_EQ(c->entries[1].v.vec(), Site{1});
  EXPECT_EQ(c->entries[0].mu, 1);
  EXPECT_EQ(c->entries[1].mu, 1);
  // Two singleton rules {-1}, {1} only have the obstacle {-1, 1}: no strict direction.
  const ObstacleFamily split = build_obstacles(UpdateFamily::make(1, {S({Site{-1}}), S({Site{1}})}));
  EXPECT_FALSE(search_certificate(split, 3));
}

TEST(Certificate, OptimizeDtbp) {
  const ObstacleFamily obs = build_obstacles(builtins::dtbp());
  const auto c = optimize_certificate(obs, 2);
  EXPECT_TRUE(validate(c, &obs).ok());
  EXPECT_GE(bound(c).main_bound.lower, Rational(1, 354294));
}

TEST(Certificate, OptimizeNecLiftPrime) {
  const UpdateFamily fam = builtins::nec_lift_prime();
  const ObstacleFamily obs = build_obstacles(fam);
  const auto c = optimize_certificate(obs, 2);
  EXPECT_TRUE(validate(c, &obs).ok());
  EXPECT_GE(bound(c).main_bound.lower, Rational(1, 354294));
}

TEST(Certificate, NecLiftNeedsWiderWindow) {
  const ObstacleFamily obs = build_obstacles(builtins::nec_lift());
  EXPECT_FALSE(search_certificate(obs, 2));
  const auto c = search_certificate(obs, 3);
  ASSERT_TRUE(c);
  EXPECT_TRUE(validate(*c, &obs).ok());
  EXPECT_EQ(c->rho, 6);
}

TEST(CertificateProperty, ZeroSumOfForms) {
  const ObstacleFamily obs = build_obstacles(builtins::dtbp());
  gen::Engine rng(3);
  std::vector<DriftCertificate> certs{builtins::dtbp_certificate(), optimize_certificate(obs, 2),
                                      builtins::nec_lift_prime_certificate()};
  for (int i = 0; i < 50; ++i) certs.push_back(gen::certificate_2d(rng));
  for (const auto& c : certs) {
    ASSERT_TRUE(validate(c).ok()) << certificate_to_json(c).dump();
    EXPECT_GE(c.r_const, 0);
    const int d = c.dimension();
    for (int k = 0; k < 200; ++k) {
      const Site i = gen::site(rng, d, 5);
      Rational sum = 0;
      for (const auto& e : c.entries) sum += e.form(i);
      EXPECT_EQ(sum, 0);
    }
  }
}

TEST(CertificateProperty, OptimizerRhoScaleInvariant) {
  // Optimizing the same family after scaling the lattice by k gives the same
  // rho and bound: every linear form scales by k.
  gen::Engine rng(99);
  int checked = 0;
  for (int round = 0; round < 60 && checked < 12; ++round) {
    const auto fam = gen::family(rng, 2, 1, 3, 2);
    const ObstacleFamily obs = build_obstacles(fam);
    DriftCertificate c;
    try {
      c = optimize_certificate(obs, 2);
    } catch (const CertificateNotFound&) {
      continue;
    }
    ++checked;
    for (Coord k : {2, 3}) {
      std::vector<SiteSet> rules;
      for (const SiteSet& u : fam.rules()) {
        SiteSet r;
        for (const Site& s : u) r.push_back(Site{s[0] * k, s[1] * k});
        rules.push_back(std::move(r));
      }
      const auto c2 = optimize_certificate(build_obstacles(UpdateFamily::make(2, rules)), 2);
      EXPECT_EQ(c2.rho, c.rho);
      EXPECT_EQ(bound(c2).main_bound.lower, bound(c).main_bound.lower);
    }
    for (int rep = 0; rep < 3; ++rep) {
      Rational f(gen::uniform_int(rng, 1, 9), gen::uniform_int(rng, 1, 9));
      f.canonicalize();
      const auto s = scaled(c, f);
      EXPECT_EQ(s.rho, c.rho);
      EXPECT_EQ(bound(s).main_bound.lower, bound(c).main_bound.lower);
    }
  }
  EXPECT_GE(checked, 5);
}

TEST(CertificateIo, RoundTrip) {
  const auto c = builtins::dtbp_certificate();
  json j = certificate_to_json(c);
  j["family"] = family_to_json(builtins::dtbp());
  const auto parsed = parse_certificate(j.dump());
  ASSERT_TRUE(parsed.family);
  EXPECT_EQ(*parsed.family, builtins::dtbp());
  EXPECT_EQ(parsed.certificate.entries.size(), 3U);
  EXPECT_EQ(parsed.certificate.rho, 6);
  EXPECT_EQ(certificate_to_json(parsed.certificate), certificate_to_json(c));
}

TEST(CertificateIo, MinimalFileAndErrors) {
  const std::string text = R"({"entries": [
    {"v": [1,1], "mu": "1", "obstacle": [[1,0],[0,1]]},
    {"v": [-2,1], "mu": "1/1", "obstacle": [[-1,-1],[0,1]]},
    {"v": [1,-2], "mu": "1", "obstacle": [[-1,-1],[1,0]]}]})";
  const auto parsed = parse_certificate(text);
  EXPECT_TRUE(validate(parsed.certificate).ok());
  EXPECT_EQ(parsed.certificate.r_const, 6);

  // A non-primitive direction is rescaled and the weight absorbs the factor.
  const auto scaled_v = parse_certificate(R"({"entries": [
    {"v": [2,2], "mu": "1/2", "obstacle": [[1,0],[0,1]]},
    {"v": [-2,1], "mu": "1", "obstacle": [[-1,-1],[0,1]]},
    {"v": [1,-2], "mu": "1", "obstacle": [[-1,-1],[1,0]]}]})");
  EXPECT_EQ(scaled_v.certificate.entries[0].v.vec(), (Site{1, 1}));
  EXPECT_EQ(scaled_v.certificate.entries[0].mu, 1);

  EXPECT_THROW(parse_certificate(R"({"entries": [], "bogus": 1})"), ParseError);
  EXPECT_THROW(parse_certificate(R"({"entries": [{"v": [1,1], "mu": "x", "obstacle": [[1,0]]}]})"), ParseError);
  EXPECT_THROW(parse_certificate("{\"entries\": ["), ParseError);

  // Stated constants that disagree survive parsing and fail validation.
  const auto lying = parse_certificate(R"({"entries": [
    {"v": [1,1], "mu": "1", "obstacle": [[1,0],[0,1]]},
    {"v": [-2,1], "mu": "1", "obstacle": [[-1,-1],[0,1]]},
    {"v": [1,-2], "mu": "1", "obstacle": [[-1,-1],[1,0]]}], "rho": "5"})");
  EXPECT_FALSE(validate(lying.certificate).ok());
}
