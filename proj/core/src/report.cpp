#include "debranges/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "debranges/grids.hpp"
#include "debranges/json_io.hpp"
#include "debranges/near_invariance.hpp"

namespace debranges {

namespace {

using nlohmann::json;

void only_fields(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!names.count(key)) throw ConfigError(std::string("unknown field '") + key + "' in " + where);
}

const json& required(const json& j, const char* name, const char* where) {
  if (!j.contains(name)) throw ConfigError(std::string("missing field '") + name + "' in " + where);
  return j.at(name);
}

double real_value(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
  return v;
}

double positive(const json& j, const char* what) {
  const double v = real_value(j, what);
  if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  return v;
}

int count_value(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
  return j.get<int>();
}

Complex complex_value(const json& j, const char* what) {
  try {
    return complex_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::pair<double, double> interval_value(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("interval must be [c, d]");
  const double c = real_value(j[0], "interval start");
  const double d = real_value(j[1], "interval end");
  if (!(c < d)) throw ConfigError("interval must satisfy c < d");
  return {c, d};
}

GridSpec grid_value(const json& j, const char* where, bool real_axis) {
  only_fields(j, where, {"start", "stop", "count"});
  GridSpec g;
  if (real_axis) {
    g.start = real_value(required(j, "start", where), "grid start");
    g.stop = real_value(required(j, "stop", where), "grid stop");
  } else {
    g.start = complex_value(required(j, "start", where), "grid start");
    g.stop = complex_value(required(j, "stop", where), "grid stop");
  }
  g.count = count_value(required(j, "count", where), "grid count");
  if (g.count < 1) throw ConfigError(std::string(where) + " is empty");
  return g;
}

AmbientSpec ambient_value(const json& j) {
  AmbientSpec a;
  const json& type = required(j, "type", "ambient");
  if (!type.is_string()) throw ConfigError("ambient.type must be a string");
  const auto name = type.get<std::string>();
  if (name == "paley_wiener") {
    only_fields(j, "ambient", {"type", "a"});
    a.kind = AmbientSpec::Kind::paley_wiener;
    a.a = positive(required(j, "a", "ambient"), "ambient.a");
  } else if (name == "exponential") {
    only_fields(j, "ambient", {"type", "rate"});
    a.kind = AmbientSpec::Kind::exponential;
    a.rate = real_value(required(j, "rate", "ambient"), "ambient.rate");
  } else if (name == "polynomial") {
    only_fields(j, "ambient", {"type", "coefficients"});
    a.kind = AmbientSpec::Kind::polynomial;
    const json& c = required(j, "coefficients", "ambient");
    if (!c.is_array() || c.empty()) throw ConfigError("ambient.coefficients must be a nonempty array");
    for (const auto& e : c) a.coefficients.push_back(complex_value(e, "ambient coefficient"));
  } else {
    throw ConfigError("unknown ambient type '" + name + "'");
  }
  return a;
}

SubspaceSpec subspace_value(const json& j) {
  SubspaceSpec s;
  const json& type = required(j, "type", "subspace");
  if (!type.is_string()) throw ConfigError("subspace.type must be a string");
  const auto name = type.get<std::string>();
  if (name == "full") {
    only_fields(j, "subspace", {"type"});
    s.kind = SubspaceSpec::Kind::full;
  } else if (name == "band") {
    only_fields(j, "subspace", {"type", "interval", "spans"});
    s.kind = SubspaceSpec::Kind::band;
    s.interval = interval_value(required(j, "interval", "subspace"));
    if (j.contains("spans")) s.spans = count_value(j.at("spans"), "subspace.spans");
  } else if (name == "kernel_nodes") {
    only_fields(j, "subspace", {"type", "nodes", "interval"});
    s.kind = SubspaceSpec::Kind::kernel_nodes;
    const json& nodes = required(j, "nodes", "subspace");
    if (!nodes.is_array() || nodes.empty()) throw ConfigError("subspace.nodes must be a nonempty array");
    for (const auto& e : nodes) s.nodes.push_back(complex_value(e, "subspace node"));
    if (j.contains("interval")) s.interval = interval_value(j.at("interval"));
  } else if (name == "shifted") {
    only_fields(j, "subspace", {"type", "shift", "interval", "spans"});
    s.kind = SubspaceSpec::Kind::shifted;
    s.shift = real_value(required(j, "shift", "subspace"), "subspace.shift");
    s.interval = interval_value(required(j, "interval", "subspace"));
    if (j.contains("spans")) s.spans = count_value(j.at("spans"), "subspace.spans");
  } else if (name == "zero_pinned") {
    only_fields(j, "subspace", {"type", "node"});
    s.kind = SubspaceSpec::Kind::zero_pinned;
    s.node = complex_value(required(j, "node", "subspace"), "subspace.node");
  } else {
    throw ConfigError("unknown subspace type '" + name + "'");
  }
  if (s.spans < 0) throw ConfigError("subspace.spans must be nonnegative");
  return s;
}

RunTolerances tolerances_value(const json& j) {
  only_fields(j, "tolerances",
              {"identity", "margin", "unimodularity", "exponent_fit", "roundtrip", "isometry", "near_invariance",
               "interval"});
  RunTolerances t;
  auto set = [&](const char* name, double& target) {
    if (j.contains(name)) target = positive(j.at(name), name);
  };
  set("identity", t.structure.identity);
  set("margin", t.structure.margin);
  set("unimodularity", t.structure.unimodularity);
  set("exponent_fit", t.structure.exponent_fit);
  set("roundtrip", t.structure.roundtrip);
  set("isometry", t.structure.isometry);
  set("near_invariance", t.near_invariance);
  set("interval", t.interval);
  return t;
}

std::vector<double> real_points(const GridSpec& g) { return linspace(g.start.real(), g.stop.real(), g.count); }

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const CommonZeroError*>(&e)) return "common_zero";
  if (dynamic_cast<const NotAZeroError*>(&e)) return "not_a_zero";
  if (dynamic_cast<const PoleIndicatorError*>(&e)) return "pole_indicator";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const UnsupportedRepresentation*>(&e)) return "unsupported_representation";
  if (dynamic_cast<const AccuracyError*>(&e)) return "accuracy";
  if (dynamic_cast<const EmptySubspaceError*>(&e)) return "empty_subspace";
  if (dynamic_cast<const NotUnimodularError*>(&e)) return "not_unimodular";
  if (dynamic_cast<const AliasingError*>(&e)) return "aliasing";
  if (dynamic_cast<const ExtractionInconsistentError*>(&e)) return "extraction_inconsistent";
  if (dynamic_cast<const EstimationError*>(&e)) return "estimation";
  return "error";
}

// Probe nodes for the division residual.
const std::vector<Complex>& near_invariance_nodes() {
  static const std::vector<Complex> nodes{{0.3, 0.0}, {-1.2, 0.0}, {0.7, 0.4}, {2.1, -0.3}};
  return nodes;
}

struct VerifyRun {
  std::optional<StructureResult> structure;
  std::optional<RecoveredInterval> interval;
  std::optional<std::pair<double, double>> expected;
  double interval_error = 0.0;
  std::optional<NearInvarianceReport> near_invariance;
  std::optional<double> pw_type;
  json error;
  int exit_code = kExitPass;
  bool passed = false;
};

StructureOptions structure_options(const RunConfig& config, const RunTolerances& tol) {
  StructureOptions o;
  o.tolerances = tol.structure;
  o.seed = config.seed;
  if (config.exponent_bound) o.exponent_bound = *config.exponent_bound;
  if (config.real_grid) o.real_grid = real_points(*config.real_grid);
  if (config.lower_grid)
    o.lower_grid = segment(config.lower_grid->start, config.lower_grid->stop, config.lower_grid->count);
  if (config.upper_grid)
    o.upper_grid = segment(config.upper_grid->start, config.upper_grid->stop, config.upper_grid->count);
  return o;
}

VerifyRun verify_run(const RunConfig& config, double tol_scale) {
  const RunTolerances tol = config.tolerances.scaled(tol_scale);
  const SubspaceModel sub = build_subspace(config);
  VerifyRun run;
  run.pw_type = sub.ambient().paley_wiener_type();
  run.expected = expected_interval(config);
  try {
    run.structure = verify_structure(sub, structure_options(config, tol));
    bool ok = run.structure->report.passed();
    if (run.pw_type) {
      NearInvarianceReport ni =
          near_invariance_report(sub, near_invariance_nodes(), std::span<const Complex>(standard_scan_grid()));
      ok = ok && ni.common_zeros.empty() && ni.max_residual <= tol.near_invariance;
      run.near_invariance = std::move(ni);
    }
    if (ok && run.expected && run.pw_type) {
      run.interval = recover_interval(*run.structure, *run.pw_type);
      run.interval_error =
          std::max(std::abs(run.interval->lo - run.expected->first), std::abs(run.interval->hi - run.expected->second));
      ok = run.interval_error <= tol.interval;
    }
    run.passed = ok;
    run.exit_code = ok ? kExitPass : kExitFail;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    run.error = error_to_json(e);
    run.exit_code = exit_code_for(e);
  }
  return run;
}

json complex_list_json(const std::vector<Complex>& zs) {
  json out = json::array();
  for (Complex z : zs) out.push_back(complex_to_json(z));
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

RunTolerances RunTolerances::scaled(double factor) const {
  RunTolerances t = *this;
  t.structure = structure.scaled(factor);
  t.near_invariance *= factor;
  t.interval *= factor;
  return t;
}

RunConfig parse_config(const json& j) {
  only_fields(j, "config",
              {"version", "ambient", "subspace", "grids", "tolerances", "exponent_bound", "seed", "kernel_points",
               "output"});
  const json& version = required(j, "version", "config");
  if (!version.is_number_integer() || version.get<int>() != 1) throw ConfigError("unsupported config version");
  RunConfig c;
  c.source = j;
  c.source.erase("output");
  c.ambient = ambient_value(required(j, "ambient", "config"));
  c.subspace = subspace_value(required(j, "subspace", "config"));
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    only_fields(g, "grids", {"real", "lower", "upper"});
    if (g.contains("real")) {
      c.real_grid = grid_value(g.at("real"), "grids.real", true);
      if (c.real_grid->count < 8) throw ConfigError("grids.real needs at least 8 points");
      if (!(c.real_grid->stop.real() > c.real_grid->start.real())) throw ConfigError("grids.real must increase");
    }
    if (g.contains("lower")) {
      c.lower_grid = grid_value(g.at("lower"), "grids.lower", false);
      if (!(c.lower_grid->start.imag() < 0.0 && c.lower_grid->stop.imag() < 0.0))
        throw ConfigError("grids.lower must lie in the lower half-plane");
    }
    if (g.contains("upper")) {
      c.upper_grid = grid_value(g.at("upper"), "grids.upper", false);
      if (!(c.upper_grid->start.imag() > 0.0 && c.upper_grid->stop.imag() > 0.0))
        throw ConfigError("grids.upper must lie in the upper half-plane");
    }
  }
  if (j.contains("tolerances")) c.tolerances = tolerances_value(j.at("tolerances"));
  if (j.contains("exponent_bound")) c.exponent_bound = positive(j.at("exponent_bound"), "exponent_bound");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("kernel_points")) {
    const json& pts = j.at("kernel_points");
    if (!pts.is_array()) throw ConfigError("kernel_points must be an array");
    for (const auto& p : pts) {
      only_fields(p, "kernel_points entry", {"lambda", "z"});
      c.kernel_points.emplace_back(complex_value(required(p, "lambda", "kernel_points entry"), "lambda"),
                                   complex_value(required(p, "z", "kernel_points entry"), "z"));
    }
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output must be a string");
    c.output = j.at("output").get<std::string>();
  }
  const bool pw = c.ambient.kind == AmbientSpec::Kind::paley_wiener ||
                  (c.ambient.kind == AmbientSpec::Kind::exponential && c.ambient.rate < 0.0);
  if (!pw && !c.exponent_bound) throw ConfigError("exponent_bound is required outside Paley-Wiener ambients");
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

std::vector<RunConfig> parse_sweep(const json& j) {
  only_fields(j, "sweep", {"version", "runs"});
  const json& version = required(j, "version", "sweep");
  if (!version.is_number_integer() || version.get<int>() != 1) throw ConfigError("unsupported sweep version");
  const json& runs = required(j, "runs", "sweep");
  if (!runs.is_array()) throw ConfigError("sweep.runs must be an array");
  std::vector<RunConfig> out;
  for (const auto& r : runs) out.push_back(parse_config(r));
  return out;
}

DeBrangesSpace build_ambient(const AmbientSpec& spec) {
  try {
    switch (spec.kind) {
      case AmbientSpec::Kind::paley_wiener: return pw_space(spec.a);
      case AmbientSpec::Kind::exponential: return DeBrangesSpace(EntireModel::exponential(spec.rate));
      case AmbientSpec::Kind::polynomial: return DeBrangesSpace(EntireModel::polynomial(spec.coefficients));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("ambient is not a de Branges function: ") + e.what());
  }
  throw ConfigError("unknown ambient");
}

SubspaceModel build_subspace(const RunConfig& config) {
  DeBrangesSpace ambient = build_ambient(config.ambient);
  const auto a = ambient.paley_wiener_type();
  const SubspaceSpec& s = config.subspace;
  auto need_pw = [&](const char* what) {
    if (!a) throw ConfigError(std::string(what) + " subspaces need a Paley-Wiener ambient");
    return *a;
  };
  try {
    switch (s.kind) {
      case SubspaceSpec::Kind::full:
        return SubspaceModel::from_kernel(ambient, ambient.kernel_ptr());
      case SubspaceSpec::Kind::band: {
        const double pa = need_pw("band");
        return band_subspace({pa, s.interval->first, s.interval->second}, s.spans);
      }
      case SubspaceSpec::Kind::kernel_nodes: {
        KernelPtr k = ambient.kernel_ptr();
        if (s.interval) k = std::make_shared<const BandKernel>(s.interval->first, s.interval->second, ambient.kernel_ptr());
        std::vector<EntireModel> spans;
        for (Complex node : s.nodes) spans.push_back(EntireModel::kernel_section(k, node));
        return SubspaceModel::from_spans(ambient, std::move(spans));
      }
      case SubspaceSpec::Kind::shifted: {
        const double pa = need_pw("shifted");
        const auto [c, d] = *s.interval;
        BandSubspaceSpec{pa, c + s.shift, d + s.shift}.validate();
        const SubspaceModel base = band_subspace({pa + std::abs(s.shift), c, d}, s.spans);
        return shifted_subspace(base, s.shift, ambient);
      }
      case SubspaceSpec::Kind::zero_pinned:
        return SubspaceModel::from_kernel(ambient, std::make_shared<const PinnedKernel>(ambient.kernel_ptr(), s.node));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid subspace: ") + e.what());
  }
  throw ConfigError("unknown subspace");
}

std::optional<std::pair<double, double>> expected_interval(const RunConfig& config) {
  std::optional<double> a;
  if (config.ambient.kind == AmbientSpec::Kind::paley_wiener) a = config.ambient.a;
  if (config.ambient.kind == AmbientSpec::Kind::exponential && config.ambient.rate < 0.0) a = -config.ambient.rate;
  if (!a) return std::nullopt;
  const SubspaceSpec& s = config.subspace;
  switch (s.kind) {
    case SubspaceSpec::Kind::full: return std::pair{-*a, *a};
    case SubspaceSpec::Kind::band: return s.interval;
    case SubspaceSpec::Kind::shifted: return std::pair{s.interval->first + s.shift, s.interval->second + s.shift};
    default: return std::nullopt;
  }
}

RunOutcome run_verify(const RunConfig& config, double tol_scale) {
  const VerifyRun run = verify_run(config, tol_scale);
  const RunTolerances tol = config.tolerances.scaled(tol_scale);
  json report{{"schema", "debranges.verify/1"}, {"config", config.source}, {"tol_scale", tol_scale}};
  if (run.structure) {
    const auto& s = *run.structure;
    report["structure"] = to_json(s.report);
    json rows = json::array();
    for (const auto& [x, u] : s.decomposition.u_samples)
      rows.push_back({x, std::abs(u - std::exp(Complex{0.0, s.decomposition.alpha * x}))});
    report["plot"] = {{"columns", {"x", "abs_u_minus_exp"}}, {"rows", std::move(rows)}};
  }
  if (run.near_invariance) {
    report["near_invariance"] = to_json(*run.near_invariance, tol.near_invariance);
  }
  if (run.interval) {
    json iv = to_json(*run.interval);
    iv["expected"] = {run.expected->first, run.expected->second};
    iv["endpoint_error"] = run.interval_error;
    iv["verdict"] = run.interval_error <= tol.interval ? "pass" : "fail";
    report["interval"] = std::move(iv);
  }
  if (!run.error.is_null()) report["error"] = run.error;
  report["status"] = run.exit_code == kExitPass ? "pass" : (run.error.is_null() ? "fail" : "error");
  report["exit_code"] = run.exit_code;
  return {std::move(report), run.exit_code};
}

SweepOutcome run_sweep(std::span<const RunConfig> configs, double tol_scale) {
  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  SweepOutcome out;
  for (const RunConfig& config : configs) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> cells(10);
    const auto expected = expected_interval(config);
    if (config.ambient.kind == AmbientSpec::Kind::paley_wiener) cells[0] = format_number(config.ambient.a);
    if (config.ambient.kind == AmbientSpec::Kind::exponential && config.ambient.rate < 0.0)
      cells[0] = format_number(-config.ambient.rate);
    if (expected) {
      cells[1] = format_number(expected->first);
      cells[2] = format_number(expected->second);
    }
    std::string status;
    try {
      const VerifyRun run = verify_run(config, tol_scale);
      if (run.structure) {
        const auto& r = run.structure->report;
        cells[3] = format_number(r.alpha);
        cells[7] = format_number(std::max({r.fg.identity, r.fg.real_equality, r.unimodularity, r.exponent_fit,
                                           r.kernel_roundtrip, r.isometry}));
      }
      if (run.interval) {
        cells[4] = format_number(run.interval->half_length);
        cells[5] = format_number(run.interval->lo);
        cells[6] = format_number(run.interval->hi);
      }
      if (!run.error.is_null()) {
        status = "error:" + run.error.at("kind").get<std::string>();
        if (run.error.contains("stage")) status += "@" + run.error.at("stage").get<std::string>();
      } else {
        status = run.passed ? "pass" : "fail";
      }
    } catch (const std::exception& e) {
      status = std::string("error:") + error_kind(e);
    }
    if (status != "pass") out.exit_code = kExitFail;
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f",
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    cells[8] = wall;
    cells[9] = status;
    for (std::size_t k = 0; k < cells.size(); ++k) csv << (k ? "," : "") << cells[k];
    csv << '\n';
  }
  out.csv = csv.str();
  return out;
}

RunOutcome run_kernel(const RunConfig& config) {
  const SubspaceModel sub = build_subspace(config);
  std::vector<std::pair<Complex, Complex>> points = config.kernel_points;
  if (points.empty()) {
    const Complex defaults[] = {{0.0, 0.0}, {0.0, 0.5}, {0.0, -0.5}, {1.0, 0.25}};
    for (Complex l : defaults)
      for (Complex z : defaults) points.emplace_back(l, z);
  }
  json rows = json::array();
  for (const auto& [lambda, z] : points) {
    json row{{"lambda", complex_to_json(lambda)},
             {"z", complex_to_json(z)},
             {"ambient", complex_to_json(sub.ambient().kernel(lambda, z))}};
    const auto detail = subspace_kernel_detail(sub, lambda, z);
    row["subspace"] = complex_to_json(detail.value);
    if (detail.projected) row["projected"] = complex_to_json(*detail.projected);
    rows.push_back(std::move(row));
  }
  return {{{"schema", "debranges.kernel/1"}, {"config", config.source}, {"points", std::move(rows)}}, kExitPass};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const PreconditionError*>(&e)) return kExitPrecondition;
  return kExitFail;
}

json error_to_json(const std::exception& e) {
  json j{{"kind", error_kind(e)}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e); err && !err->stage().empty()) j["stage"] = err->stage();
  if (const auto* cz = dynamic_cast<const CommonZeroError*>(&e)) j["points"] = complex_list_json(cz->points());
  if (const auto* nz = dynamic_cast<const NotAZeroError*>(&e)) j["magnitude"] = nz->magnitude();
  return j;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace debranges
