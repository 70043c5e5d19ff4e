#include "toombound/builtins.hpp"

namespace toombound::builtins {

namespace {

Site s2(Coord x, Coord y) { return Site::from_vector({x, y}); }
Site s3(Coord x, Coord y, Coord z) { return Site::from_vector({x, y, z}); }

}  // namespace

UpdateFamily dtbp() {
  return UpdateFamily::make(2, {{s2(1, 0), s2(0, 1)}, {s2(-1, -1), s2(0, 1)}, {s2(-1, -1), s2(1, 0)}});
}

std::vector<SiteSet> nec_zero_sets() {
  const Site o = Site::origin(2);
  return {canonical({o, s2(1, 0)}), canonical({o, s2(0, 1)}), canonical({s2(1, 0), s2(0, 1)})};
}

UpdateFamily nec_lift() {
  std::vector<SiteSet> rules;
  for (const SiteSet& z : nec_zero_sets()) {
    SiteSet r;
    for (const Site& s : z) r.push_back(s.appended(-1));
    rules.push_back(std::move(r));
  }
  return UpdateFamily::make(3, std::move(rules));
}

UpdateFamily nec_lift_prime() {
  const UpdateFamily base = dtbp();
  std::vector<SiteSet> rules;
  for (const SiteSet& u : base.rules()) {
    SiteSet r;
    for (const Site& s : u) r.push_back(s.appended(-1));
    rules.push_back(std::move(r));
  }
  return UpdateFamily::make(3, std::move(rules));
}

Site apply_t(const Site& s) {
  if (s.dim() != 3) throw DimensionMismatch("T acts on Z^3");
  return s3(2 * s[0] + s[1] + s[2], s[0] + 2 * s[1] + s[2], s[2]);
}

DriftCertificate dtbp_certificate() {
  std::vector<DriftEntry> entries{
      {Direction::from(s2(1, 1)), Rational(1), {s2(1, 0), s2(0, 1)}},
      {Direction::from(s2(-2, 1)), Rational(1), {s2(-1, -1), s2(0, 1)}},
      {Direction::from(s2(1, -2)), Rational(1), {s2(-1, -1), s2(1, 0)}},
  };
  return assemble_certificate(std::move(entries));
}

DriftCertificate nec_lift_prime_certificate() {
  std::vector<DriftEntry> entries;
  for (const DriftEntry& e : dtbp_certificate().entries) {
    SiteSet a;
    for (const Site& s : e.obstacle) a.push_back(s.appended(-1));
    entries.push_back({Direction::from(e.v.vec().appended(0)), e.mu, std::move(a)});
  }
  return assemble_certificate(std::move(entries));
}

std::optional<UpdateFamily> family_by_name(const std::string& name) {
  std::string n = name.rfind("builtin:", 0) == 0 ? name.substr(8) : name;
  if (n == "dtbp") return dtbp();
  if (n == "nec-lift" || n == "nec") return nec_lift();
  if (n == "nec-lift-prime") return nec_lift_prime();
  return std::nullopt;
}

std::vector<std::string> family_names() { return {"dtbp", "nec", "nec-lift", "nec-lift-prime"}; }

}  // namespace toombound::builtins
