#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "toombound/builtins.hpp"
#include "toombound/certificate_io.hpp"
#include "toombound/contours.hpp"
#include "toombound/dynamics.hpp"
#include "toombound/noisy_ca.hpp"
#include "toombound/peierls.hpp"

namespace toombound::cli {

namespace {

constexpr const char* kOutDirEnv = "TOOMBOUND_OUT_DIR";

struct RunConfig {
  std::string command;
  std::string input;
  int window = 2;
  bool optimize = false;
  double p = 0.0;
  int size = 64;
  std::optional<int> steps;
  int trials = 1;
  std::uint64_t seed = 0;
  int m_max = 0;
  std::size_t max_contours = 5'000'000;
  int precision_bits = 64;
  std::string boundary = "torus";
  std::string out;
};

// Raised for everything that maps to an exit code other than success.
struct Failure {
  int code;
  std::string message;
};

void validate_config(const RunConfig& cfg) {
  auto bad = [](const std::string& what) { throw Failure{kValidation, what}; };
  if (cfg.window < 1) bad("--window must be >= 1");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) bad("--p must lie in [0, 1]");
  if (cfg.size < 1) bad("--size must be >= 1");
  if (cfg.steps && *cfg.steps < 0) bad("--steps must be >= 0");
  if (cfg.trials < 1) bad("--trials must be >= 1");
  if (cfg.m_max < 0) bad("--m-max must be >= 0");
  if (cfg.max_contours < 1) bad("--max-contours must be >= 1");
  if (cfg.precision_bits < 2) bad("--precision-bits must be >= 2");
  try {
    (void)parse_boundary(cfg.boundary);
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
}

bool is_builtin(const std::string& name) { return name.rfind("builtin:", 0) == 0; }

std::string load_text(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw Failure{kUsage, e.what()};
  }
}

UpdateFamily load_family(const std::string& input) {
  if (is_builtin(input)) {
    if (auto f = builtins::family_by_name(input)) return *f;
    std::string names;
    for (const auto& n : builtins::family_names()) names += " builtin:" + n;
    throw Failure{kUsage, "unknown builtin family '" + input + "'; known:" + names};
  }
  const std::string text = load_text(input);
  try {
    return parse_family(text);
  } catch (const ParseError& e) {
    throw Failure{kParse, input + ": " + e.what()};
  } catch (const std::invalid_argument& e) {
    throw Failure{kValidation, input + ": " + e.what()};
  }
}

ParsedCertificate load_certificate(const std::string& input) {
  if (is_builtin(input)) {
    const std::string name = input.substr(8);
    if (name == "dtbp-cert") return {builtins::dtbp_certificate(), builtins::dtbp()};
    if (name == "nec-lift-prime-cert") return {builtins::nec_lift_prime_certificate(), builtins::nec_lift_prime()};
    throw Failure{kUsage, "unknown builtin certificate '" + input +
                              "'; known: builtin:dtbp-cert builtin:nec-lift-prime-cert"};
  }
  const std::string text = load_text(input);
  try {
    return parse_certificate(text);
  } catch (const ParseError& e) {
    throw Failure{kParse, input + ": " + e.what()};
  } catch (const std::invalid_argument& e) {
    throw Failure{kValidation, input + ": " + e.what()};
  }
}

json exact(const Rational& q) { return json{{"kind", "exact"}, {"value", to_string(q)}}; }

// Validates against the embedded family when there is one.
void require_valid(const ParsedCertificate& pc) {
  std::optional<ObstacleFamily> obs;
  if (pc.family) obs = build_obstacles(*pc.family);
  const ValidationReport rep = validate(pc.certificate, obs ? &*obs : nullptr);
  if (!rep.ok()) throw Failure{kValidation, "invalid certificate: " + validation_to_json(rep).dump()};
}

DriftCertificate find_certificate(const ObstacleFamily& obs, const RunConfig& cfg) {
  try {
    if (cfg.optimize) return optimize_certificate(obs, cfg.window, cfg.precision_bits);
    if (auto c = search_certificate(obs, cfg.window)) return *c;
    throw CertificateNotFound(cfg.window);
  } catch (const CertificateNotFound& e) {
    throw Failure{kNotFound, e.what()};
  }
}

json analysis_json(const UpdateFamily& family, const ObstacleFamily& obs, int window) {
  json rows = json::array();
  std::size_t strict = 0;
  for (const StabilityRow& r : stability_profile(obs, window)) {
    rows.push_back({{"v", site_to_json(r.direction.vec())}, {"stable", r.stable}, {"strict", r.strict}});
    strict += r.strict ? 1 : 0;
  }
  json list = json::array();
  for (const SiteSet& o : obs.obstacles()) list.push_back(site_set_to_json(o));
  return json{{"family", family_to_json(family)},
              {"obstacle_count", obs.size()},
              {"obstacles", list},
              {"minimal_obstacle_count", build_obstacles(family, true).size()},
              {"stability", {{"window", window}, {"strict_count", strict}, {"directions", rows}}}};
}

json certificate_json(const DriftCertificate& cert, const UpdateFamily& family) {
  json j = certificate_to_json(cert);
  j["family"] = family_to_json(family);
  return j;
}

json bound_json(const DriftCertificate& cert, int bits) {
  json j = bound_report_to_json(bound(cert, {bits, false}));
  j["epsilon"] = exact(cert.epsilon);
  j["r_const"] = exact(cert.r_const);
  return j;
}

struct Output {
  std::string body;
  std::string extension;
  int code = kOk;
};

Output cmd_analyze(const RunConfig& cfg) {
  const UpdateFamily family = load_family(cfg.input);
  return {analysis_json(family, build_obstacles(family), cfg.window).dump(2) + "\n", "json"};
}

Output cmd_certify(const RunConfig& cfg) {
  const UpdateFamily family = load_family(cfg.input);
  const ObstacleFamily obs = build_obstacles(family);
  const DriftCertificate cert = find_certificate(obs, cfg);
  require_valid({cert, family});
  return {certificate_json(cert, family).dump(2) + "\n", "json"};
}

Output cmd_bound(const RunConfig& cfg) {
  const ParsedCertificate pc = load_certificate(cfg.input);
  require_valid(pc);
  return {bound_json(pc.certificate, cfg.precision_bits).dump(2) + "\n", "json"};
}

Output cmd_simulate(const RunConfig& cfg) {
  const std::string name = is_builtin(cfg.input) ? cfg.input.substr(8) : "";
  if (name == "nec") {
    NoisyPlan plan{cfg.p, cfg.size, cfg.steps.value_or(100), cfg.trials, cfg.seed};
    const bool packed = cfg.size % 64 == 0;
    try {
      plan.validate(packed);
    } catch (const std::invalid_argument& e) {
      throw Failure{kValidation, e.what()};
    }
    const SurvivalCurve curve = packed ? noisy_ca_run(nec_rule(), plan) : noisy_ca_run_reference(nec_rule(), plan);
    return {curve.csv(), "csv"};
  }
  const UpdateFamily family = load_family(cfg.input);
  SimPlan plan;
  plan.p = cfg.p;
  plan.trials = cfg.trials;
  plan.max_steps = cfg.steps.value_or(0);
  plan.seed = cfg.seed;
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw Failure{kValidation, e.what()};
  }
  const std::vector<int> extents(static_cast<std::size_t>(family.dimension()), cfg.size);
  std::string body;
  for (const TrialOutcome& o : run_trials(family, plan, extents, parse_boundary(cfg.boundary))) {
    body += outcome_jsonl(o) + "\n";
  }
  return {body, "jsonl"};
}

struct Check {
  std::size_t checked = 0;
  std::size_t failed = 0;
  void record(bool ok) {
    ++checked;
    failed += ok ? 0 : 1;
  }
  json to_json() const { return {{"checked", checked}, {"failed", failed}}; }
};

Output cmd_enumerate(const RunConfig& cfg, std::ostream& err) {
  const ParsedCertificate pc = load_certificate(cfg.input);
  require_valid(pc);
  const DriftCertificate& cert = pc.certificate;
  EnumerationOptions opts;
  opts.m_max = cfg.m_max;
  opts.max_contours = cfg.max_contours;
  const EnumerationResult res = enumerate(cert, opts);

  // Lemma checks on every enumerated contour and on the count table.
  Check valid, zero, edges, roundtrip, remark, encoding;
  const Site origin = Site::origin(cert.dimension());
  for (const ShatteredContour& sc : res.contours) {
    const ContourEmbedding emb = realize(sc);
    valid.record(validate_shattered(sc, cert, origin).ok() && validate_contour(emb, cert).ok());
    zero.record(zero_sum(emb, cert) == 0);
    edges.record(Rational(sc.n()) <= cert.rho * Rational(sc.m()));
    bool same = false;
    try {
      same = decode(encode(sc, cert), cert) == sc;
    } catch (const DecodeError&) {
    }
    roundtrip.record(same);
  }
  const BoundParameters params = parameters_of(cert);
  for (const auto& [key, count] : res.counts) {
    remark.record(count <= remark_count(params, key.first, key.second));
    encoding.record(count <= encoding_count(params, key.first, key.second));
  }
  const json summary{{"contours", res.total},
                     {"m_max", res.m_max},
                     {"n_max", res.n_max},
                     {"complete_through", res.complete_through()},
                     {"truncated", res.truncated},
                     {"checks",
                      {{"valid", valid.to_json()},
                       {"zero_sum", zero.to_json()},
                       {"edge_bound", edges.to_json()},
                       {"encoding_roundtrip", roundtrip.to_json()},
                       {"remark_bound", remark.to_json()},
                       {"encoding_count_bound", encoding.to_json()}}}};
  err << summary.dump() << "\n";

  Output o{res.counts_csv(), "csv"};
  for (const Check* c : {&valid, &zero, &edges, &roundtrip, &remark, &encoding}) {
    if (c->failed > 0) throw Failure{kValidation, "lemma check failed: " + summary["checks"].dump()};
  }
  if (res.truncated) {
    err << "truncated: " << res.truncation_report << "\n";
    o.code = kTruncated;
  }
  return o;
}

Output cmd_report(const RunConfig& cfg) {
  const UpdateFamily family = load_family(cfg.input);
  const ObstacleFamily obs = build_obstacles(family);
  json j = analysis_json(family, obs, cfg.window);
  RunConfig opt = cfg;
  opt.optimize = true;
  const DriftCertificate cert = find_certificate(obs, opt);
  require_valid({cert, family});
  j["certificate"] = certificate_to_json(cert);
  j["bound"] = bound_json(cert, cfg.precision_bits);
  return {j.dump(2) + "\n", "json"};
}

void emit(const RunConfig& cfg, const Output& o, std::ostream& out, std::ostream& err) {
  std::filesystem::path path = cfg.out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / (cfg.command + "." + o.extension);
    }
  }
  if (path.empty()) {
    out << o.body;
    out.flush();
    return;
  }
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  f << o.body;
  if (!f) throw Failure{kUsage, "cannot write '" + path.string() + "'"};
  err << "wrote " << path.string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Rigorous Peierls bounds and simulations for subcritical bootstrap percolation", "toombound"};
  app.require_subcommand(1);

  auto input = [&](CLI::App* sub, const std::string& what) { sub->add_option("input", cfg.input, what)->required(); };
  auto out_flag = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, std::string("output file (default: stdout, or $") + kOutDirEnv + "/<command>.<ext>)");
  };
  const std::string family_help = "family JSON file or builtin:{dtbp,nec,nec-lift,nec-lift-prime}";
  const std::string cert_help = "certificate JSON file or builtin:{dtbp-cert,nec-lift-prime-cert}";

  CLI::App* analyze = app.add_subcommand("analyze", "list obstacles and the stability profile of a family");
  input(analyze, family_help);
  analyze->add_option("--window", cfg.window, "max-norm window for candidate directions");
  out_flag(analyze);

  CLI::App* certify = app.add_subcommand("certify", "find a drift certificate");
  input(certify, family_help);
  certify->add_option("--window", cfg.window, "max-norm window for candidate directions");
  certify->add_flag("--optimize", cfg.optimize, "maximize the main lower bound over the window");
  certify->add_option("--precision-bits", cfg.precision_bits, "mantissa bits when rho is not an integer");
  out_flag(certify);

  CLI::App* bound_cmd = app.add_subcommand("bound", "evaluate the Peierls lower bounds of a certificate");
  input(bound_cmd, cert_help);
  bound_cmd->add_option("--precision-bits", cfg.precision_bits, "mantissa bits when rho is not an integer");
  out_flag(bound_cmd);

  CLI::App* simulate = app.add_subcommand("simulate", "bootstrap percolation trials (JSON lines) or noisy NEC (CSV)");
  input(simulate, family_help);
  simulate->add_option("--p", cfg.p, "initial zero density, or noise rate for builtin:nec");
  simulate->add_option("--size", cfg.size, "linear box size");
  simulate->add_option("--steps", cfg.steps, "closure step cap (0: fixpoint) or CA steps");
  simulate->add_option("--trials", cfg.trials, "number of trials");
  simulate->add_option("--seed", cfg.seed, "random seed");
  simulate->add_option("--boundary", cfg.boundary, "torus, ones or zeros");
  out_flag(simulate);

  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "count shattered contours and check them");
  input(enumerate_cmd, cert_help);
  enumerate_cmd->add_option("--m-max", cfg.m_max, "largest number of non-root shards");
  enumerate_cmd->add_option("--max-contours", cfg.max_contours, "contour budget before truncation");
  out_flag(enumerate_cmd);

  CLI::App* report = app.add_subcommand("report", "analysis, optimized certificate and bounds in one document");
  input(report, family_help);
  report->add_option("--window", cfg.window, "max-norm window for candidate directions");
  report->add_option("--precision-bits", cfg.precision_bits, "mantissa bits when rho is not an integer");
  out_flag(report);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    validate_config(cfg);
    Output o;
    if (cfg.command == "analyze") o = cmd_analyze(cfg);
    if (cfg.command == "certify") o = cmd_certify(cfg);
    if (cfg.command == "bound") o = cmd_bound(cfg);
    if (cfg.command == "simulate") o = cmd_simulate(cfg);
    if (cfg.command == "enumerate") o = cmd_enumerate(cfg, err);
    if (cfg.command == "report") o = cmd_report(cfg);
    emit(cfg, o, out, err);
    return o.code;
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace toombound::cli
