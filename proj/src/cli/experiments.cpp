#include "caustica/cli/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "caustica/errors.hpp"
#include "caustica/kernel.hpp"
#include "caustica/oracle.hpp"
#include "caustica/slit.hpp"
#include "caustica/spectral.hpp"
#include "caustica/timefun.hpp"

namespace caustica::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// One evaluation point: the config with the scan parameter substituted.
struct Point {
  double value = 0.0;  // scan value (or the horizon when there is no scan)
  double T = 1.0;
  std::optional<double> omega;
  double hbar = 1.0;
  SlitConfig slit;
  double kernel_a = 0.0;
  double kernel_b = 0.0;
};

Point base_point(const ExperimentConfig& c) {
  Point pt;
  pt.value = c.horizon;
  pt.T = c.horizon;
  pt.hbar = c.numeric.hbar;
  pt.slit = c.slit;
  pt.kernel_a = c.kernel_a;
  pt.kernel_b = c.kernel_b;
  return pt;
}

Point point_at(const ExperimentConfig& c, int i) {
  Point pt = base_point(c);
  if (!c.scan) return pt;
  const std::string& name = c.scan->parameter;
  const double v = c.scan->value(i);
  pt.value = v;
  if (name == "omega") {
    pt.omega = v;
  } else if (name == "omega_T") {
    pt.omega = v / pt.T;
  } else if (name == "horizon") {
    pt.T = v;
  } else if (name == "a") {
    pt.slit.a = v;
    pt.kernel_a = v;
  } else if (name == "b") {
    pt.kernel_b = v;
  } else if (name == "p") {
    pt.slit.p = v;
    if (!pt.slit.decoupled) pt.slit.tau.reset();
  } else if (name == "tau") {
    pt.slit.tau = v;
    if (!pt.slit.decoupled) pt.slit.p.reset();
  } else if (name == "sigma0") {
    pt.slit.sigma0 = v;
  } else if (name == "hbar") {
    pt.hbar = v;
  }
  return pt;
}

struct Model {
  CoefficientProfile lambda;
  CoefficientProfile mu;
  FundamentalPair pair;
  CausticReport report;
  bool wronskian_ok = true;
};

Model build_model(const ExperimentConfig& c, const Point& pt) {
  CoefficientProfile lambda = parse_profile(c.lambda, pt.T);
  if (pt.omega) lambda = lambda.scaled(*pt.omega * *pt.omega);
  CoefficientProfile mu = parse_profile(c.mu, pt.T);
  FundamentalPair pair = solve_fundamental(lambda, mu, c.numeric.solver);
  CausticReport report = caustic_report(pair, c.numeric.solver.eps_caustic, c.numeric.solver.tol_zero);
  const bool ok = pair.wronskian_drift() <= c.numeric.solver.tol_wronskian;
  return {std::move(lambda), std::move(mu), std::move(pair), std::move(report), ok};
}

SlitSetup slit_setup(const Point& pt) {
  const SlitConfig& s = pt.slit;
  if (s.decoupled) {
    return SlitSetup::decoupled_from(s.a, s.sigma0, s.tau.value_or(std::numeric_limits<double>::infinity()),
                                     s.p.value_or(0.0), pt.hbar);
  }
  if (s.tau) return SlitSetup::with_flight_time(s.a, s.sigma0, *s.tau, pt.hbar);
  return SlitSetup::with_momentum(s.a, s.sigma0, s.p.value_or(0.0), pt.hbar);
}

Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

Cell count(int v) { return Cell{static_cast<std::int64_t>(v)}; }

// Per-experiment layout: column docs, the row computation and the summary extras.
struct Layout {
  std::vector<Column> columns;
  std::function<Row(const Point&)> row;
  std::function<void(const Point&, json&)> derive;  // summary "derived" block at the unscanned point
};

std::string axis_name(const ExperimentConfig& c) { return c.scan ? c.scan->parameter : "horizon"; }

std::string axis_doc(const ExperimentConfig& c) {
  if (!c.scan) return "time horizon T (single point, no scan)";
  const std::string& p = c.scan->parameter;
  if (p == "omega") return "scan value: frequency omega, lambda = omega^2 * profile";
  if (p == "omega_T") return "scan value: omega T, lambda = (omega_T / T)^2 * profile";
  if (p == "horizon") return "scan value: time horizon T";
  if (p == "a") return "scan value: slit center / initial point a";
  if (p == "b") return "scan value: final point b";
  if (p == "p") return "scan value: initial momentum p";
  if (p == "tau") return "scan value: flight time tau before the slit";
  if (p == "sigma0") return "scan value: slit width sigma0";
  return "scan value: hbar";
}

void derive_classical(const Model& m, json& out) {
  out["critical"] = m.report.critical;
  out["morse_index"] = m.report.morse_index;
  out["k"] = m.report.k ? json(*m.report.k) : json(nullptr);
  out["u_T"] = m.report.u_T;
  out["wronskian_drift"] = m.pair.wronskian_drift();
}

Layout caustic_scan_layout(const ExperimentConfig& c) {
  Layout l;
  l.columns = {{axis_name(c), axis_doc(c)},
               {"u_T", "Jacobi field u(T) with u(0) = 0, u'(0) = 1"},
               {"critical", "true when |u(T)| <= eps_caustic * max|u| (a caustic at T)"},
               {"k", "stretching factor v(T) on critical rows; empty otherwise"},
               {"morse_index", "zeros of u in (0, T], the Morse index"}};
  l.row = [&c](const Point& pt) -> Row {
    const Model m = build_model(c, pt);
    return {pt.value, m.report.u_T, m.report.critical, opt(m.report.k), count(m.report.morse_index)};
  };
  l.derive = [&c](const Point& pt, json& out) { derive_classical(build_model(c, pt), out); };
  return l;
}

Layout spectrum_layout(const ExperimentConfig& c) {
  Layout l;
  l.columns = {{axis_name(c), axis_doc(c)}};
  for (int n = 1; n <= c.numeric.eigenvalues; ++n) {
    l.columns.push_back({"E_" + std::to_string(n), "eigenvalue " + std::to_string(n) +
                                                        " of -(d^2/dt^2 + lambda) with Dirichlet ends"});
  }
  l.columns.insert(l.columns.end(),
                   {{"negative_count", "eigenvalues below -eps_zero"},
                    {"zero_count", "eigenvalues within eps_zero of zero"},
                    {"spectral_index", "negative_count + zero_count"},
                    {"jacobi_index", "zeros of the Jacobi field in (0, T]"},
                    {"agree", "spectral_index == jacobi_index"}});
  l.row = [&c](const Point& pt) -> Row {
    const Model m = build_model(c, pt);
    const SpectrumReport s = sturm_liouville_spectrum(m.lambda, c.numeric.eigenvalues, c.numeric.spectrum_points);
    Row row{pt.value};
    for (double e : s.eigenvalues) row.emplace_back(e);
    row.insert(row.end(), {count(s.negative_count), count(s.zero_count), count(s.index),
                           count(m.report.morse_index), s.index == m.report.morse_index});
    return row;
  };
  l.derive = [&c](const Point& pt, json& out) {
    const Model m = build_model(c, pt);
    derive_classical(m, out);
    const SpectrumReport s = sturm_liouville_spectrum(m.lambda, c.numeric.eigenvalues, c.numeric.spectrum_points);
    out["eps_zero"] = s.eps_zero;
    out["spectral_index"] = s.index;
  };
  return l;
}

Layout kernel_layout(const ExperimentConfig& c) {
  Layout l;
  l.columns = {{axis_name(c), axis_doc(c)},
               {"critical", "true on a caustic; the kernel is then a delta function"},
               {"morse_index", "Morse index m"},
               {"k", "stretching factor on critical rows"},
               {"focal_point", "k a + s_T on critical rows: the only reachable b"},
               {"A", "action coefficient of a^2"},
               {"B", "action coefficient of a b"},
               {"C", "action coefficient of b^2"},
               {"D", "action coefficient of a"},
               {"E", "action coefficient of b"},
               {"F", "action constant"},
               {"phase", "kernel phase: I/hbar - pi m/2, minus pi/4 on regular rows"},
               {"kernel_re", "Re K(b; a) on regular rows"},
               {"kernel_im", "Im K(b; a) on regular rows"}};
  l.row = [&c](const Point& pt) -> Row {
    const Model m = build_model(c, pt);
    const double a = pt.kernel_a, b = pt.kernel_b;
    Row row{pt.value, m.report.critical, count(m.report.morse_index)};
    if (m.report.critical) {
      const CriticalKernel k = critical_kernel(m.report, m.pair, m.report.morse_index, pt.hbar);
      row.insert(row.end(), {k.k, k.focal_point(a), {}, {}, {}, {}, {}, {}, k.phase(a), {}, {}});
      return row;
    }
    const ActionQuadraticForm f = action_coefficients(m.pair, c.numeric.solver.eps_caustic);
    const complex K = regular_kernel(f, m.report.morse_index, pt.hbar, a, b);
    const double phase = f(a, b) / pt.hbar - 0.5 * kPi * m.report.morse_index - 0.25 * kPi;
    row.insert(row.end(), {{}, {}, f.A, f.B, f.C, f.D, f.E, f.F, phase, K.real(), K.imag()});
    return row;
  };
  l.derive = [&c](const Point& pt, json& out) {
    const Model m = build_model(c, pt);
    derive_classical(m, out);
    if (m.report.focal_intercept) out["s_T"] = *m.report.focal_intercept;
  };
  return l;
}

Layout slit_layout(const ExperimentConfig& c) {
  Layout l;
  l.columns = {{axis_name(c), axis_doc(c)},
               {"critical", "true on a caustic (width |k| sigma0, no quantum term)"},
               {"center", "center of the evolved packet at T"},
               {"sigma", "width sigma(T) of the evolved packet"},
               {"classical_width", "sigma0 |x_cl(T)/a|, the classical spread"},
               {"quantum_width", "hbar / (2 sigma0 |B|), the diffraction spread; 0 on caustics"},
               {"sigma0_star", "slit width minimising sigma(T); empty when unbounded or critical"},
               {"sigma_min", "minimal sigma(T) over the slit width; empty when unbounded or critical"},
               {"infinite_concentration", "true when x_cl(T) = 0 so sigma(T) has no positive minimum"}};
  l.row = [&c](const Point& pt) -> Row {
    const Model m = build_model(c, pt);
    const SlitSetup setup = slit_setup(pt);
    if (m.report.critical) {
      const double k = *m.report.k;
      return {pt.value, true, k * setup.a + *m.report.focal_intercept, std::abs(k) * setup.sigma0,
              std::abs(k) * setup.sigma0, 0.0, {}, {}, false};
    }
    const ActionQuadraticForm f = action_coefficients(m.pair, c.numeric.solver.eps_caustic);
    const SlitPrediction pr = predict(setup, f);
    const GaussianState out = evolve(setup, f, m.report.morse_index);
    const OptimalSlit best = optimal_slit(setup, f);
    Row row{pt.value, false, out.center, out.sigma(), pr.classical_width, pr.quantum_width};
    if (best.infinite_concentration) {
      row.insert(row.end(), {{}, {}, true});
    } else {
      row.insert(row.end(), {best.sigma0_star, best.sigma_min, false});
    }
    return row;
  };
  l.derive = [&c](const Point& pt, json& out) {
    const Model m = build_model(c, pt);
    derive_classical(m, out);
    if (m.report.critical) return;
    const ActionQuadraticForm f = action_coefficients(m.pair, c.numeric.solver.eps_caustic);
    const OptimalSlit best = optimal_slit(slit_setup(pt), f);
    out["infinite_concentration"] = best.infinite_concentration;
    out["sigma0_star"] = best.infinite_concentration ? json(nullptr) : json(best.sigma0_star);
    out["sigma_min"] = best.infinite_concentration ? json(nullptr) : json(best.sigma_min);
  };
  return l;
}

Layout susceptibility_layout(const ExperimentConfig& c) {
  Layout l;
  l.columns = {{axis_name(c), axis_doc(c)},
               {"S", "closed-form susceptibility (a/sigma0) d sigma(T)/dp"},
               {"S_finite_difference", "central difference of sigma(T) in p along p = a/tau"},
               {"jacobi", "classical Jacobi susceptibility J = -1/B"},
               {"ratio", "S / |J|, at most 1"},
               {"purely_quantum", "true when x_cl(T) = 0 and S vanishes"}};
  l.row = [&c](const Point& pt) -> Row {
    const Model m = build_model(c, pt);
    if (m.report.critical) {
      throw CriticalPotentialError("susceptibility is undefined on a caustic (B infinite) at scan value " +
                                   std::to_string(pt.value));
    }
    const ActionQuadraticForm f = action_coefficients(m.pair, c.numeric.solver.eps_caustic);
    const Susceptibility s = susceptibility(slit_setup(pt), f);
    return {pt.value, s.value, s.finite_difference, s.jacobi, s.value / std::abs(s.jacobi), s.purely_quantum};
  };
  l.derive = [&c](const Point& pt, json& out) { derive_classical(build_model(c, pt), out); };
  return l;
}

struct OracleResult {
  double center_closed, center_oracle, sigma_closed, sigma_oracle, l2, norm_drift;
};

OracleResult oracle_compare(const ExperimentConfig& c, const Point& pt) {
  const Model m = build_model(c, pt);
  const SlitSetup setup = slit_setup(pt);
  const GaussianState start = initial_state(setup);

  std::optional<CriticalKernel> ck;
  std::optional<GaussianState> closed;
  double center = 0.0, sigma = 0.0;
  if (m.report.critical) {
    ck = critical_kernel(m.report, m.pair, m.report.morse_index, pt.hbar);
    center = ck->focal_point(setup.a);
    sigma = std::abs(ck->k) * setup.sigma0;
  } else {
    closed = evolve(setup, action_coefficients(m.pair, c.numeric.solver.eps_caustic), m.report.morse_index);
    center = closed->center;
    sigma = closed->sigma();
  }

  PropagationSettings ps;
  ps.hbar = pt.hbar;
  double spread = std::max(setup.sigma0, sigma);
  auto n = static_cast<std::size_t>(c.numeric.oracle_points);
  for (int attempt = 0;; ++attempt) {
    const UniformGrid grid = default_box(std::min(setup.a, center), std::max(setup.a, center), spread, n);
    GridState state{grid, start.sample(grid), 0.0};
    const double norm0 = moments(state, pt.hbar).norm;
    try {
      const GridState final_state = propagate(std::move(state), m.lambda, m.mu, 0.0, pt.T, c.numeric.oracle_steps, ps);
      const Moments mo = moments(final_state, pt.hbar);
      std::vector<complex> expected;
      if (ck) {
        const UniformGrid in = default_box(setup.a, setup.a, setup.sigma0, n);
        expected = apply_critical_kernel(*ck, in, start.sample(in), grid);
      } else {
        expected = closed->sample(grid);
      }
      return {center, mo.center, sigma, std::sqrt(mo.variance),
              relative_l2_distance(final_state.samples, expected), std::abs(mo.norm - norm0)};
    } catch (const BoundaryLeakError&) {
      // The packet spreads further at intermediate times; widen the box at fixed resolution.
      if (attempt == 3) throw;
      spread *= 2;
      n = 2 * n - 1;
    }
  }
}

Layout oracle_layout(const ExperimentConfig& c) {
  Layout l;
  l.columns = {{axis_name(c), axis_doc(c)},
               {"critical", "true on a caustic (closed form from the delta-function kernel)"},
               {"center_closed", "closed-form center at T"},
               {"center_oracle", "center of the Crank-Nicolson state at T"},
               {"sigma_closed", "closed-form width at T"},
               {"sigma_oracle", "width of the Crank-Nicolson state at T"},
               {"l2_distance", "relative L2 distance between oracle and closed-form wave functions"},
               {"norm_drift", "|norm(T) - norm(0)| of the oracle state"}};
  l.row = [&c](const Point& pt) -> Row {
    const bool critical = build_model(c, pt).report.critical;
    const OracleResult r = oracle_compare(c, pt);
    return {pt.value, critical, r.center_closed, r.center_oracle, r.sigma_closed, r.sigma_oracle, r.l2, r.norm_drift};
  };
  l.derive = [&c](const Point& pt, json& out) { derive_classical(build_model(c, pt), out); };
  return l;
}

Layout layout_for(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::caustic_scan:
      return caustic_scan_layout(c);
    case ExperimentKind::spectrum:
      return spectrum_layout(c);
    case ExperimentKind::kernel:
      return kernel_layout(c);
    case ExperimentKind::slit:
      return slit_layout(c);
    case ExperimentKind::susceptibility_scan:
      return susceptibility_layout(c);
    case ExperimentKind::oracle_compare:
      return oracle_layout(c);
  }
  throw ValidationError("unknown experiment kind");
}

int resolve_threads(int requested, int rows) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(1, rows));
}

std::vector<Row> compute_rows(const ExperimentConfig& c, const Layout& layout, int threads) {
  const int count = c.scan ? c.scan->steps : 1;
  std::vector<Row> rows(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(rows.size());
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        rows[static_cast<std::size_t>(i)] = layout.row(point_at(c, i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int n = resolve_threads(threads, count);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  // The earliest failing scan point decides the error, independent of scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

// Extra summary facts read off the finished rows.
void summarize_rows(const ExperimentConfig& c, const Report& r, json& flags, json& derived) {
  auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      if (r.columns[i].name == name) return i;
    }
    return std::nullopt;
  };
  auto is_true = [](const Cell& cell) { return std::holds_alternative<bool>(cell) && std::get<bool>(cell); };

  if (auto ic = col("critical")) {
    json points = json::array();
    for (const auto& row : r.rows) {
      if (!is_true(row[*ic])) continue;
      json p{{"value", std::get<double>(row[0])}};
      if (auto kc = col("k"); kc && std::holds_alternative<double>(row[*kc])) p["k"] = std::get<double>(row[*kc]);
      if (auto mc = col("morse_index")) p["morse_index"] = std::get<std::int64_t>(row[*mc]);
      points.push_back(p);
    }
    derived["critical_points"] = points;
    if (!points.empty()) flags.push_back("caustic_in_scan");
  }
  if (auto ic = col("infinite_concentration")) {
    if (std::any_of(r.rows.begin(), r.rows.end(), [&](const Row& row) { return is_true(row[*ic]); })) {
      flags.push_back("infinite_concentration");
    }
  }
  if (auto ac = col("agree")) {
    if (std::any_of(r.rows.begin(), r.rows.end(), [&](const Row& row) { return !is_true(row[*ac]); })) {
      flags.push_back("morse_index_mismatch");
    }
  }
  if (c.kind == ExperimentKind::slit && c.scan && c.scan->parameter == "sigma0") {
    const auto sc = col("sigma");
    const Row* best = nullptr;
    for (const auto& row : r.rows) {
      if (!best || std::get<double>(row[*sc]) < std::get<double>((*best)[*sc])) best = &row;
    }
    if (best) derived["scan_minimum"] = {{"sigma0", std::get<double>((*best)[0])}, {"sigma", std::get<double>((*best)[*sc])}};
  }
}

}  // namespace

std::string report_schema_version() { return "1.0.0"; }

Report run_experiment(const ExperimentConfig& config, int threads) {
  const Layout layout = layout_for(config);
  Report report;
  report.columns = layout.columns;
  report.rows = compute_rows(config, layout, threads > 0 ? threads : config.numeric.threads);

  json derived = json::object();
  json flags = json::array();
  const Point base = base_point(config);
  layout.derive(base, derived);
  if (derived.contains("wronskian_drift") && derived["wronskian_drift"].get<double>() > config.numeric.solver.tol_wronskian) {
    flags.push_back("wronskian_drift_exceeded");
  }
  if (derived.value("infinite_concentration", false)) flags.push_back("infinite_concentration");
  summarize_rows(config, report, flags, derived);
  std::sort(flags.begin(), flags.end());
  flags.erase(std::unique(flags.begin(), flags.end()), flags.end());

  json columns = json::array();
  for (const auto& col : report.columns) columns.push_back({{"name", col.name}, {"description", col.description}});
  report.summary = {{"schema_version", report_schema_version()},
                    {"experiment", to_string(config.kind)},
                    {"rows", report.rows.size()},
                    {"columns", columns},
                    {"settings", to_json(config)},
                    {"derived", derived},
                    {"flags", flags}};
  return report;
}

WrittenFiles write_report(const Report& report, const ExperimentConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WrittenFiles files{dir / (config.output.stem + ".csv"), dir / (config.output.stem + ".json")};

  std::vector<std::string> header;
  for (const auto& col : report.columns) header.push_back(col.name);
  std::ofstream csv(files.csv, std::ios::binary);
  write_csv(csv, header, report.rows, config.output.float_format);
  std::ofstream summary(files.summary, std::ios::binary);
  summary << report.summary.dump(2) << '\n';
  if (!csv || !summary) throw Error("failed writing report files to '" + dir.string() + "'");
  return files;
}

}  // namespace caustica::cli
