#include "quakebend/run.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include "json.hpp"
#include "quakebend/errors.hpp"
#include "quakebend/limitset.hpp"
#include "quakebend/report.hpp"
#include "quakebend/verify.hpp"

namespace qb {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Stopwatch {
  std::chrono::steady_clock::time_point last = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, double>> phases;
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    phases.emplace_back(name, std::chrono::duration<double, std::milli>(now - last).count());
    last = now;
  }
};

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json component_json(const MulticurveSpec& spec) {
  json c;
  c["word"] = spec.word;
  c["weight"] = spec.weight;
  c["translation"] = spec.translation;
  c["angle"] = spec.angle;
  if (!spec.plane.empty()) c["plane"] = spec.plane;
  return c;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::budget_exhausted: return "budget_exhausted";
    case Verdict::diverging: return "diverging";
  }
  return "unknown";
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::check: return "check";
  }
  return "internal";
}

// Deterministic retry ladder over the documented basepoint offsets; only
// numerical degeneracies trigger a retry, and the report records which
// attempt succeeded (never silent).
template <typename F>
auto with_basepoint_retries(const ReferenceStructure& ref0, json& report, F&& f)
    -> decltype(f(ref0)) {
  const auto offsets = basepoint_offsets();
  std::optional<Error> last;
  for (std::size_t attempt = 0; attempt <= offsets.size(); ++attempt) {
    ReferenceStructure ref =
        attempt == 0
            ? ref0
            : ref0.with_basepoint(offset_basepoint(ref0.basepoint, offsets[attempt - 1]));
    try {
      auto result = f(ref);
      report["basepoint_attempt"] = attempt;
      if (attempt > 0) {
        report["basepoint_offset"] = {offsets[attempt - 1][0], offsets[attempt - 1][1]};
        std::cerr << "note: degeneracy at the default basepoint; offset " << attempt
                  << " succeeded\n";
      }
      return result;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degeneracy) throw;
      last = e;
      std::cerr << "note: degeneracy at basepoint attempt " << attempt << ": " << e.what()
                << "\n";
    }
  }
  throw *last;
}

void render_value(const std::string& key, const json& v, int indent, std::string& out) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    out += pad + key + ":\n";
    for (const auto& [k, child] : v.items()) render_value(k, child, indent + 2, out);
    return;
  }
  if (v.is_array()) {
    bool scalars = true;
    for (const auto& e : v)
      if (e.is_object() || e.is_array()) scalars = false;
    if (scalars) {
      out += pad + key + ": [";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ", ";
        first = false;
        out += e.dump();
      }
      out += "]\n";
      return;
    }
    out += pad + key + ":\n";
    int i = 0;
    for (const auto& e : v) render_value("[" + std::to_string(i++) + "]", e, indent + 2, out);
    return;
  }
  out += pad + key + ": " + v.dump() + "\n";
}

std::string render_text(const json& j) {
  std::string out;
  for (const auto& [k, v] : j.items()) render_value(k, v, 0, out);
  return out;
}

void write_reports(const std::string& command, const fs::path& dir, const json& j,
                   const Stopwatch& sw, const std::string& stem) {
  write_file((dir / (command + stem + ".json")).string(), j.dump(2) + "\n");
  std::string text = render_text(j);
  text += "timings_ms:\n";
  for (const auto& [name, ms] : sw.phases) text += "  " + name + ": " + format_double(ms) + "\n";
  write_file((dir / (command + stem + ".txt")).string(), text);
}

// ---- commands --------------------------------------------------------------

int cmd_deform(const RunConfig& cfg, const ReferenceStructure& ref, const fs::path&, json& j) {
  if (cfg.multicurve.empty())
    fail_config("config error: deform needs at least one [[multicurve]] block");
  j["t"] = cfg.t;
  json mcj = json::array();
  for (const MulticurveSpec& spec : cfg.multicurve) mcj.push_back(component_json(spec));
  j["multicurve"] = std::move(mcj);

  DeformOptions opts;
  opts.covering = cfg.covering;
  DeformResult res = with_basepoint_retries(ref, j, [&](const ReferenceStructure& r) {
    Representation rho = build_representation(cfg, r);
    WeightedMulticurve mc = build_multicurve(cfg.multicurve, r, cfg.dimension);
    return deform(rho, mc, cfg.t, r, opts);
  });

  j["relator_residual"] = res.relator_residual;
  double drift = 0.0;
  for (std::size_t i = 0; i < res.raw.size(); ++i)
    drift = std::max(drift, (res.raw[i] - res.rep.gens[i]).norm());
  j["raw_drift"] = drift;
  json gens = json::array();
  for (std::size_t i = 0; i < res.rep.gens.size(); ++i) {
    json g;
    g["name"] = res.rep.pres.generator_name(static_cast<int>(i));
    g["crossings"] = res.diagnostics[i].crossing_count;
    g["matrix"] = matrix_json(res.rep.gens[i]);
    gens.push_back(std::move(g));
  }
  j["generators"] = std::move(gens);
  return 0;
}

int cmd_earthquake(const RunConfig& cfg, const ReferenceStructure& ref, const fs::path& dir,
                   json& j) {
  const double tol = cfg.earthquake.tol;
  j["tol"] = tol;
  j["kind"] = cfg.earthquake.kind == LaminationApproximation::Kind::dehn_twist_recipe
                  ? "recipe"
                  : "explicit";

  DeformOptions opts;
  opts.covering = cfg.covering;
  ConvergenceReport rep = with_basepoint_retries(ref, j, [&](const ReferenceStructure& r) {
    Representation rho = build_representation(cfg, r);
    LaminationApproximation la = build_lamination(cfg, r);
    return earthquake_limit(rho, la, tol, r, opts);
  });

  j["steps"] = rep.sequence.size();
  j["verdict"] = verdict_name(rep.verdict);
  json dist = json::array();
  for (const StepDistance& d : rep.distances) {
    json e;
    e["step"] = d.step;
    e["distance"] = d.distance;
    e["log_branch"] = d.log_branch;
    dist.push_back(std::move(e));
  }
  j["distances"] = std::move(dist);
  j["relator_residuals"] = rep.relator_residuals;
  json gens = json::array();
  for (std::size_t i = 0; i < rep.final.gens.size(); ++i) {
    json g;
    g["name"] = rep.final.pres.generator_name(static_cast<int>(i));
    g["matrix"] = matrix_json(rep.final.gens[i]);
    gens.push_back(std::move(g));
  }
  j["final_generators"] = std::move(gens);

  std::string csv = "# config_hash=" + j["config_hash"].get<std::string>() + "\nstep,distance\n";
  for (const StepDistance& d : rep.distances)
    csv += std::to_string(d.step) + "," + format_double(d.distance) + "\n";
  write_file((dir / "earthquake_distances.csv").string(), csv);
  j["artifacts"] = json::array({"earthquake_distances.csv"});
  return rep.verdict == Verdict::converged ? 0 : 4;
}

int cmd_verify(const RunConfig& cfg, json& j) {
  const auto& known = verify_check_names();
  for (const std::string& name : cfg.verify.checks)
    if (std::find(known.begin(), known.end(), name) == known.end())
      fail_config("config error: verify.checks: unknown check '" + name + "'");

  VerifyOptions vo;
  vo.genus = cfg.genus;
  vo.dimension = cfg.verify.dimension;
  vo.seed = cfg.seed;
  vo.trials = cfg.verify.trials;
  vo.checks = cfg.verify.checks;
  std::vector<CheckResult> results = verify_suite(vo);

  bool all = true;
  json checks = json::array();
  for (const CheckResult& r : results) {
    json c;
    c["name"] = r.name;
    c["residual"] = r.residual;
    c["threshold"] = r.threshold;
    c["pass"] = r.pass;
    if (!r.pass && r.witness) c["witness"] = *r.witness;
    all = all && r.pass;
    checks.push_back(std::move(c));
  }
  j["trials"] = vo.trials;
  j["checks"] = std::move(checks);
  j["all_pass"] = all;
  return all ? 0 : 4;
}

int cmd_crossings(const RunConfig& cfg, const ReferenceStructure& ref, json& j) {
  j["word"] = cfg.crossings.word;
  j["curve"] = cfg.crossings.curve;
  j["weight"] = cfg.crossings.weight;

  struct Outcome {
    CrossingSequence seq;
    std::vector<Crossing> oracle;
    bool oracle_ran = false;
    Word A, core;
    const ReferenceStructure* ref = nullptr;
    ReferenceStructure storage;
  };
  Outcome out = with_basepoint_retries(ref, j, [&](const ReferenceStructure& r) {
    Outcome o;
    o.A = r.pres.parse(cfg.crossings.word);
    OrientedCurve c{r.pres.parse(cfg.crossings.curve), cfg.crossings.weight};
    o.core = c.core;
    o.seq = crossing_sequence(o.A, c, r, cfg.covering);
    if (cfg.crossings.oracle_radius > 0) {
      o.oracle = oracle_crossings(o.A, c, r, cfg.crossings.oracle_radius, cfg.covering.tau_sep);
      o.oracle_ran = true;
    }
    o.storage = r;
    return o;
  });
  out.ref = &out.storage;

  json rows = json::array();
  for (const Crossing& cr : out.seq.crossings) {
    json e;
    e["conjugator"] = out.storage.pres.format(cr.conjugator);
    e["sign"] = cr.sign;
    e["position"] = cr.position;
    rows.push_back(std::move(e));
  }
  j["count"] = out.seq.crossings.size();
  j["crossings"] = std::move(rows);
  const EnumerationCertificate& cert = out.seq.certificate;
  json cj;
  cj["enumerated"] = cert.enumerated;
  cj["expanded"] = cert.expanded;
  cj["margin"] = cert.margin;
  cj["min_rejected_distance"] = cert.min_rejected_distance;
  cj["min_frontier_distance"] = cert.min_frontier_distance;
  j["certificate"] = std::move(cj);

  if (!out.oracle_ran) return 0;
  bool match = out.oracle.size() == out.seq.crossings.size();
  std::string detail;
  if (!match) detail = "crossing counts differ";
  for (std::size_t i = 0; match && i < out.oracle.size(); ++i) {
    const Crossing& a = out.seq.crossings[i];
    const Crossing& b = out.oracle[i];
    if (a.sign != b.sign || std::abs(a.position - b.position) > 1e-9 ||
        !coset_equivalent(a.conjugator, b.conjugator, out.core, out.storage)) {
      match = false;
      detail = "mismatch at crossing " + std::to_string(i);
    }
  }
  json oj;
  oj["radius"] = cfg.crossings.oracle_radius;
  oj["count"] = out.oracle.size();
  oj["matches"] = match;
  if (!match) oj["detail"] = detail;
  j["oracle"] = std::move(oj);
  return match ? 0 : 4;
}

int cmd_limitset(const RunConfig& cfg, const ReferenceStructure& ref, const fs::path& dir,
                 json& j, std::uint64_t hash) {
  Representation rho = build_representation(cfg, ref);
  LimitSetCloud cloud = limitset_cloud(rho, cfg.limitset.depth);
  CircleFit fit = fit_circle(cloud);

  j["depth"] = cfg.limitset.depth;
  j["point_count"] = cloud.points.size();
  j["words_examined"] = cloud.words_examined;
  json fj;
  fj["valid"] = fit.valid;
  if (fit.valid) {
    std::vector<double> center(fit.center.data(), fit.center.data() + fit.center.size());
    fj["center"] = center;
    fj["radius"] = fit.radius;
    fj["max_deviation"] = fit.max_deviation;
  }
  j["circle_fit"] = std::move(fj);

  json artifacts = json::array();
  write_file((dir / "limitset.csv").string(), limitset_csv(cloud, hash));
  artifacts.push_back("limitset.csv");
  if (cloud.n == 2 || cloud.n == 3) {
    write_file((dir / "limitset.svg").string(), limitset_svg(cloud, hash));
    artifacts.push_back("limitset.svg");
  }
  j["artifacts"] = std::move(artifacts);
  return 0;
}

int write_error(const std::string& command, const std::string& out_dir, std::uint64_t hash,
                const char* kind, int exit_code, const std::string& message) {
  std::cerr << "error (" << kind << "): " << message << "\n";
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config_hash"] = hash_hex(hash);
  json e;
  e["kind"] = kind;
  e["exit_code"] = exit_code;
  e["message"] = message;
  j["error"] = std::move(e);
  try {
    fs::create_directories(out_dir);
    std::error_code ec;
    for (const char* suffix : {"_report.json", "_report.txt"})
      fs::remove(fs::path(out_dir) / (command + suffix), ec);
    write_file((fs::path(out_dir) / (command + "_error.json")).string(), j.dump(2) + "\n");
    write_file((fs::path(out_dir) / (command + "_error.txt")).string(), render_text(j));
  } catch (...) {
    // the error itself still reaches stderr and the exit code
  }
  return exit_code;
}

}  // namespace

int run_command(const std::string& command, const std::string& config_text,
                const std::string& out_dir, const RunOverrides& overrides) {
  const std::uint64_t hash = fnv1a_hash(config_text);
  try {
    if (command != "deform" && command != "earthquake" && command != "verify" &&
        command != "crossings" && command != "limitset")
      fail_config("unknown command: " + command);

    Stopwatch sw;
    RunConfig cfg = parse_config(config_text);
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.tol) {
      if (!(*overrides.tol > 0.0)) fail_config("config error: --tol must be positive");
      cfg.earthquake.tol = *overrides.tol;
    }
    sw.lap("parse");

    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["config_hash"] = hash_hex(hash);
    j["seed"] = cfg.seed;
    j["genus"] = cfg.genus;
    j["dimension"] = cfg.dimension;

    ReferenceStructure ref = reference_structure(cfg.genus);
    sw.lap("reference");

    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail_config("cannot create output directory: " + out_dir);

    // a rerun into the same directory must not leave a stale report next to a
    // fresh error file (or vice versa)
    for (const char* suffix : {"_report.json", "_report.txt", "_error.json", "_error.txt"})
      fs::remove(dir / (command + suffix), ec);

    int code = 0;
    if (command == "deform")
      code = cmd_deform(cfg, ref, dir, j);
    else if (command == "earthquake")
      code = cmd_earthquake(cfg, ref, dir, j);
    else if (command == "verify")
      code = cmd_verify(cfg, j);
    else if (command == "crossings")
      code = cmd_crossings(cfg, ref, j);
    else
      code = cmd_limitset(cfg, ref, dir, j, hash);
    sw.lap("compute");

    write_reports(command, dir, j, sw, "_report");
    return code;
  } catch (const Error& e) {
    return write_error(command, out_dir, hash, kind_name(e.kind()), e.exit_code(), e.what());
  } catch (const std::exception& e) {
    return write_error(command, out_dir, hash, "internal", 3, e.what());
  }
}

}  // namespace qb
