#include "toombound/certificate_io.hpp"

namespace toombound {

json certificate_to_json(const DriftCertificate& cert) {
  json entries = json::array();
  for (const auto& e : cert.entries) {
    entries.push_back({{"v", site_to_json(e.v.vec())}, {"mu", to_string(e.mu)}, {"obstacle", site_set_to_json(e.obstacle)}});
  }
  return json{{"entries", entries},
              {"sigma", cert.sigma()},
              {"epsilon", to_string(cert.epsilon)},
              {"r_const", to_string(cert.r_const)},
              {"rho", to_string(cert.rho)},
              {"union_a", site_set_to_json(cert.union_a)}};
}

namespace {

Rational rational_field(std::string_view text, const json& j, const JsonPath& path) {
  if (!j.is_string() && !j.is_number_integer()) fail_at(text, path, "rational must be a \"p/q\" string");
  try {
    return j.is_string() ? parse_rational(j.get<std::string>()) : Rational(BigInt(j.get<long>()));
  } catch (const std::invalid_argument& e) {
    fail_at(text, path, e.what());
  }
}

}  // namespace

ParsedCertificate parse_certificate(std::string_view text) {
  json j = parse_json_text(text);
  if (!j.is_object()) fail_at(text, {}, "certificate must be a JSON object");
  static const char* kKnown[] = {"entries", "sigma", "epsilon", "r_const", "rho", "union_a", "family"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(kKnown), std::end(kKnown), it.key()) == std::end(kKnown)) {
      fail_at(text, {it.key()}, "unknown field '" + it.key() + "'");
    }
  }
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].empty()) {
    fail_at(text, {std::string("entries")}, "missing or empty 'entries' array");
  }
  const json& arr = j["entries"];
  int dim = -1;
  std::vector<DriftEntry> entries;
  for (std::size_t s = 0; s < arr.size(); ++s) {
    JsonPath ep{std::string("entries"), s};
    const json& e = arr[s];
    if (!e.is_object()) fail_at(text, ep, "entry must be an object");
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (it.key() != "v" && it.key() != "mu" && it.key() != "obstacle") {
        JsonPath kp = ep;
        kp.emplace_back(it.key());
        fail_at(text, kp, "unknown field '" + it.key() + "'");
      }
    }
    if (!e.contains("v") || !e["v"].is_array()) fail_at(text, ep, "entry needs a 'v' array");
    if (dim < 0) dim = static_cast<int>(e["v"].size());
    if (dim < 1 || dim > kMaxDim) fail_at(text, ep, "bad direction dimension");
    JsonPath vp = ep;
    vp.emplace_back(std::string("v"));
    Site v = site_from_json(text, e["v"], vp, dim);
    if (v.is_origin()) fail_at(text, vp, "direction must be non-zero");
    if (!e.contains("mu")) fail_at(text, ep, "entry needs 'mu'");
    JsonPath mp = ep;
    mp.emplace_back(std::string("mu"));
    Rational mu = rational_field(text, e["mu"], mp);
    if (!e.contains("obstacle") || !e["obstacle"].is_array()) fail_at(text, ep, "entry needs an 'obstacle' array");
    JsonPath op = ep;
    op.emplace_back(std::string("obstacle"));
    SiteSet obstacle;
    for (std::size_t k = 0; k < e["obstacle"].size(); ++k) {
      JsonPath sp = op;
      sp.emplace_back(k);
      obstacle.push_back(site_from_json(text, e["obstacle"][k], sp, dim));
    }
    // A non-primitive v is rescaled; the weight absorbs the factor so mu*v is unchanged.
    Direction dir = Direction::from(v);
    Coord factor = 0;
    for (int k = 0; k < dim; ++k) {
      if (dir.vec()[k] != 0) {
        factor = v[k] / dir.vec()[k];
        break;
      }
    }
    entries.push_back({dir, mu * Rational(BigInt(factor)), std::move(obstacle)});
  }

  ParsedCertificate out;
  out.certificate = assemble_certificate(std::move(entries));
  DriftCertificate& c = out.certificate;
  if (j.contains("epsilon")) c.epsilon = rational_field(text, j["epsilon"], {std::string("epsilon")});
  if (j.contains("r_const")) c.r_const = rational_field(text, j["r_const"], {std::string("r_const")});
  if (j.contains("rho")) c.rho = rational_field(text, j["rho"], {std::string("rho")});
  if (j.contains("union_a")) {
    const json& u = j["union_a"];
    if (!u.is_array()) fail_at(text, {std::string("union_a")}, "union_a must be an array of sites");
    SiteSet a;
    for (std::size_t k = 0; k < u.size(); ++k) {
      a.push_back(site_from_json(text, u[k], {std::string("union_a"), k}, dim));
    }
    c.union_a = canonical(std::move(a));
  }
  if (j.contains("family")) {
    // Re-serialize the embedded object; positions then refer to the sub-document.
    out.family = parse_family(j["family"].dump());
  }
  return out;
}

json bound_value_to_json(const BoundValue& v) {
  if (v.exact) {
    return json{{"kind", "exact"}, {"value", to_string(v.lower)}, {"decimal", v.decimal()}};
  }
  Rational err = v.upper - v.lower;
  BoundValue e;
  e.lower = err;
  e.precision_bits = v.precision_bits;
  return json{{"kind", "rounded"},
              {"value", v.decimal()},
              {"lower", to_string(v.lower)},
              {"upper", to_string(v.upper)},
              {"error_bound", e.decimal()},
              {"precision_bits", v.precision_bits}};
}

json bound_report_to_json(const BoundReport& rep) {
  return json{{"main_bound", bound_value_to_json(rep.main_bound)},
              {"simple_bound", bound_value_to_json(rep.simple_bound)},
              {"parameters",
               {{"sigma", rep.params.sigma},
                {"rho", {{"kind", "exact"}, {"value", to_string(rep.params.rho)}}},
                {"union_size", rep.params.union_size},
                {"max_obstacle_size", rep.params.max_obstacle_size}}},
              {"certificate_hash", rep.certificate_hash}};
}

json validation_to_json(const ValidationReport& rep) {
  return json{{"valid", rep.ok()}, {"failures", rep.failures}};
}

}  // namespace toombound
