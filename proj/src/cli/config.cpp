#include "caustica/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "caustica/errors.hpp"
#include "caustica/timefun.hpp"

namespace caustica::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKindNames{
    {ExperimentKind::caustic_scan, "caustic_scan"},
    {ExperimentKind::spectrum, "spectrum"},
    {ExperimentKind::kernel, "kernel"},
    {ExperimentKind::slit, "slit"},
    {ExperimentKind::susceptibility_scan, "susceptibility_scan"},
    {ExperimentKind::oracle_compare, "oracle_compare"},
};

void reject_unknown(const json& object, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }) == allowed.end()) {
      throw ValidationError("unknown field '" + where + key + "'");
    }
  }
}

const json& require(const json& object, const std::string& where, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) throw ValidationError("missing required field '" + where + key + "'");
  return *it;
}

const json& require_object(const json& value, const std::string& name) {
  if (!value.is_object()) throw ValidationError("field '" + name + "' must be an object");
  return value;
}

// Numbers may be written as JSON numbers or as strings like "pi", "3.5pi", "-0.25 pi".
double number(const json& value, const std::string& name) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
      factor = std::numbers::pi;
      s.resize(s.size() - 2);
      if (s.empty() || s == "+") s = "1";
      if (s == "-") s = "-1";
      if (s.back() == '*') s.pop_back();
    }
    double x = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
    if (ec == std::errc() && ptr == s.data() + s.size()) return x * factor;
  }
  throw ValidationError("field '" + name + "' must be a number (or a multiple of pi such as \"2pi\")");
}

double positive(const json& value, const std::string& name) {
  const double x = number(value, name);
  if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("field '" + name + "' must be positive and finite");
  return x;
}

int integer(const json& value, const std::string& name, int lo, int hi) {
  if (!value.is_number_integer()) throw ValidationError("field '" + name + "' must be an integer");
  const auto v = value.get<long long>();
  if (v < lo || v > hi) {
    throw ValidationError("field '" + name + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

bool boolean(const json& value, const std::string& name) {
  if (!value.is_boolean()) throw ValidationError("field '" + name + "' must be true or false");
  return value.get<bool>();
}

ExperimentKind parse_kind(const json& value) {
  if (value.is_string()) {
    for (const auto& [kind, name] : kKindNames) {
      if (value.get<std::string>() == name) return kind;
    }
  }
  std::string names;
  for (const auto& [_, name] : kKindNames) names += (names.empty() ? "" : ", ") + name;
  throw ValidationError("field 'experiment' must be one of: " + names);
}

void parse_settings(const json& s, NumericConfig& n) {
  require_object(s, "settings");
  reject_unknown(s, "settings.",
                 {"steps", "richardson_tol", "max_steps", "eps_caustic", "tol_zero", "tol_wronskian", "hbar",
                  "spectrum_points", "eigenvalues", "oracle_points", "oracle_steps", "threads"});
  if (s.contains("steps")) {
    n.solver.steps = integer(s["steps"], "settings.steps", 16, 1 << 22);
    if (n.solver.steps % 2 != 0) throw ValidationError("field 'settings.steps' must be even");
  }
  if (s.contains("max_steps")) n.solver.max_steps = integer(s["max_steps"], "settings.max_steps", 16, 1 << 26);
  if (s.contains("richardson_tol")) n.solver.richardson_tol = positive(s["richardson_tol"], "settings.richardson_tol");
  if (s.contains("eps_caustic")) n.solver.eps_caustic = positive(s["eps_caustic"], "settings.eps_caustic");
  if (s.contains("tol_zero")) n.solver.tol_zero = positive(s["tol_zero"], "settings.tol_zero");
  if (s.contains("tol_wronskian")) n.solver.tol_wronskian = positive(s["tol_wronskian"], "settings.tol_wronskian");
  if (s.contains("hbar")) n.hbar = positive(s["hbar"], "settings.hbar");
  if (s.contains("spectrum_points")) {
    n.spectrum_points = integer(s["spectrum_points"], "settings.spectrum_points", 64, 1 << 20);
  }
  if (s.contains("eigenvalues")) {
    n.eigenvalues = integer(s["eigenvalues"], "settings.eigenvalues", 1, std::max(1, n.spectrum_points / 4));
  }
  if (n.eigenvalues > n.spectrum_points / 4) {
    throw ValidationError("field 'settings.eigenvalues' must not exceed spectrum_points / 4");
  }
  if (s.contains("oracle_points")) n.oracle_points = integer(s["oracle_points"], "settings.oracle_points", 64, 1 << 22);
  if (s.contains("oracle_steps")) n.oracle_steps = integer(s["oracle_steps"], "settings.oracle_steps", 16, 1 << 24);
  if (s.contains("threads")) n.threads = integer(s["threads"], "settings.threads", 0, 4096);
}

void parse_slit(const json& s, SlitConfig& slit) {
  require_object(s, "slit");
  reject_unknown(s, "slit.", {"a", "sigma0", "p", "tau", "decoupled"});
  if (s.contains("a")) slit.a = number(s["a"], "slit.a");
  if (s.contains("sigma0")) slit.sigma0 = positive(s["sigma0"], "slit.sigma0");
  if (s.contains("p")) slit.p = number(s["p"], "slit.p");
  if (s.contains("tau")) {
    slit.tau = number(s["tau"], "slit.tau");
    if (*slit.tau == 0.0 || std::isnan(*slit.tau)) throw ValidationError("field 'slit.tau' must be non-zero");
  }
  if (s.contains("decoupled")) slit.decoupled = boolean(s["decoupled"], "slit.decoupled");
  if (!std::isfinite(slit.a) || (slit.p && !std::isfinite(*slit.p))) {
    throw ValidationError("fields 'slit.a' and 'slit.p' must be finite");
  }
  if (!slit.decoupled && slit.p && slit.tau) {
    throw ValidationError("a coupled slit takes 'slit.p' or 'slit.tau', not both; set 'slit.decoupled' to give both");
  }
}

void parse_output(const json& s, OutputConfig& out) {
  require_object(s, "output");
  reject_unknown(s, "output.", {"stem", "float_format"});
  if (s.contains("stem")) {
    if (!s["stem"].is_string()) throw ValidationError("field 'output.stem' must be a string");
    out.stem = s["stem"].get<std::string>();
    if (out.stem.empty() || out.stem.find_first_of("/\\") != std::string::npos) {
      throw ValidationError("field 'output.stem' must be a non-empty file name without directories");
    }
  }
  if (s.contains("float_format")) {
    const json& f = s["float_format"];
    if (f == "fixed17") {
      out.float_format = FloatFormat::fixed17;
    } else if (f == "shortest") {
      out.float_format = FloatFormat::shortest;
    } else {
      throw ValidationError("field 'output.float_format' must be \"fixed17\" or \"shortest\"");
    }
  }
}

ScanAxis parse_scan(const json& s, ExperimentKind kind) {
  require_object(s, "scan");
  reject_unknown(s, "scan.", {"parameter", "min", "max", "steps"});
  ScanAxis axis;
  const json& p = require(s, "scan.", "parameter");
  if (!p.is_string()) throw ValidationError("field 'scan.parameter' must be a string");
  axis.parameter = p.get<std::string>();
  const auto allowed = scan_parameters_for(kind);
  if (std::find(allowed.begin(), allowed.end(), axis.parameter) == allowed.end()) {
    std::string names;
    for (const auto& n : allowed) names += (names.empty() ? "" : ", ") + n;
    throw ValidationError("scan parameter '" + axis.parameter + "' does not apply to " + to_string(kind) +
                          "; expected one of: " + names);
  }
  axis.min = number(require(s, "scan.", "min"), "scan.min");
  axis.max = number(require(s, "scan.", "max"), "scan.max");
  axis.steps = integer(require(s, "scan.", "steps"), "scan.steps", 2, 1 << 22);
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) throw ValidationError("scan bounds must be finite");
  const bool needs_positive = axis.parameter == "horizon" || axis.parameter == "sigma0" || axis.parameter == "hbar";
  if (needs_positive && !(std::min(axis.min, axis.max) > 0.0)) {
    throw ValidationError("scan over '" + axis.parameter + "' needs positive bounds");
  }
  if (axis.parameter == "tau" && axis.min * axis.max <= 0.0) {
    throw ValidationError("scan over 'tau' must not include zero");
  }
  return axis;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::string to_string(FloatFormat format) { return format == FloatFormat::fixed17 ? "fixed17" : "shortest"; }

std::vector<std::string> scan_parameters_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::caustic_scan:
    case ExperimentKind::spectrum:
      return {"omega", "omega_T", "horizon"};
    case ExperimentKind::kernel:
      return {"omega", "omega_T", "horizon", "a", "b", "hbar"};
    case ExperimentKind::slit:
    case ExperimentKind::susceptibility_scan:
    case ExperimentKind::oracle_compare:
      return {"omega", "omega_T", "horizon", "a", "p", "sigma0", "tau", "hbar"};
  }
  return {};
}

double ScanAxis::value(int i) const {
  if (i == steps - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(doc, "", {"experiment", "horizon", "lambda", "mu", "scan", "settings", "slit", "kernel", "output"});

  ExperimentConfig c;
  c.source = doc;
  c.kind = parse_kind(require(doc, "", "experiment"));
  c.horizon = positive(require(doc, "", "horizon"), "horizon");
  c.lambda = require_object(require(doc, "", "lambda"), "lambda");
  c.mu = doc.contains("mu") ? require_object(doc["mu"], "mu") : json{{"kind", "constant"}, {"value", 0.0}};

  if (doc.contains("settings")) parse_settings(doc["settings"], c.numeric);
  if (doc.contains("slit")) parse_slit(doc["slit"], c.slit);
  if (doc.contains("kernel")) {
    const json& k = require_object(doc["kernel"], "kernel");
    reject_unknown(k, "kernel.", {"a", "b"});
    if (k.contains("a")) c.kernel_a = number(k["a"], "kernel.a");
    if (k.contains("b")) c.kernel_b = number(k["b"], "kernel.b");
  }
  c.output.stem = to_string(c.kind);
  if (doc.contains("output")) parse_output(doc["output"], c.output);
  if (doc.contains("scan")) c.scan = parse_scan(doc["scan"], c.kind);

  // Profiles must parse at every horizon the run will use.
  std::vector<double> horizons{c.horizon};
  if (c.scan && c.scan->parameter == "horizon") horizons = {c.scan->min, c.scan->max};
  for (double T : horizons) {
    for (const auto& [name, fragment] : {std::pair{"lambda", &c.lambda}, std::pair{"mu", &c.mu}}) {
      try {
        (void)parse_profile(*fragment, T);
      } catch (const InputError& e) {
        throw ValidationError(std::string("field '") + name + "': " + e.what());
      } catch (const DomainError& e) {
        throw ValidationError(std::string("field '") + name + "': " + e.what());
      }
    }
  }
  const bool slit_kind = c.kind == ExperimentKind::slit || c.kind == ExperimentKind::susceptibility_scan ||
                         c.kind == ExperimentKind::oracle_compare;
  if (slit_kind && !c.slit.decoupled && c.slit.a == 0.0 &&
      ((c.scan && c.scan->parameter == "p") || (c.slit.p && *c.slit.p != 0.0))) {
    throw ValidationError("a coupled slit at a = 0 cannot carry momentum; set 'slit.decoupled'");
  }
  if (c.kind == ExperimentKind::susceptibility_scan && c.slit.a == 0.0 &&
      !(c.scan && c.scan->parameter == "a")) {
    throw ValidationError("susceptibility needs 'slit.a' != 0");
  }
  return c;
}

ExperimentConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what(), e.byte);
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

json to_json(const ExperimentConfig& c) {
  json out;
  out["experiment"] = to_string(c.kind);
  out["horizon"] = c.horizon;
  out["lambda"] = c.lambda;
  out["mu"] = c.mu;
  if (c.scan) {
    out["scan"] = {{"parameter", c.scan->parameter}, {"min", c.scan->min}, {"max", c.scan->max},
                   {"steps", c.scan->steps}};
  }
  const auto& s = c.numeric.solver;
  out["settings"] = {{"steps", s.steps},
                     {"richardson_tol", s.richardson_tol},
                     {"max_steps", s.max_steps},
                     {"eps_caustic", s.eps_caustic},
                     {"tol_zero", s.tol_zero},
                     {"tol_wronskian", s.tol_wronskian},
                     {"hbar", c.numeric.hbar},
                     {"spectrum_points", c.numeric.spectrum_points},
                     {"eigenvalues", c.numeric.eigenvalues},
                     {"oracle_points", c.numeric.oracle_points},
                     {"oracle_steps", c.numeric.oracle_steps}};
  json slit{{"a", c.slit.a}, {"sigma0", c.slit.sigma0}, {"decoupled", c.slit.decoupled}};
  if (c.slit.p) slit["p"] = *c.slit.p;
  if (c.slit.tau) slit["tau"] = *c.slit.tau;
  out["slit"] = slit;
  out["kernel"] = {{"a", c.kernel_a}, {"b", c.kernel_b}};
  out["output"] = {{"stem", c.output.stem}, {"float_format", to_string(c.output.float_format)}};
  return out;
}

}  // namespace caustica::cli
