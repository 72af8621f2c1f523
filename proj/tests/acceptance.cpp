// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "caustica/classical.hpp"
#include "caustica/kernel.hpp"
#include "caustica/oracle.hpp"
#include "caustica/slit.hpp"
#include "caustica/spectral.hpp"
#include "support/reference.hpp"

using namespace caustica;

namespace {

const double pi = ref::pi;

// Collects failed checks; the first few are echoed in the report line.
struct Verdict {
  int checks = 0;
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CoefficientProfile constant(double v, double T) { return CoefficientProfile::constant(v, T); }

FundamentalPair ho(double w, double T, double force = 0.0) {
  return solve_fundamental(constant(w * w, T), constant(-force, T));
}

// ---------------------------------------------------------------------------

void caustic_locations(Verdict& v) {
  const double T = 1.0;
  const int per_pi = 400;  // the grid contains each n pi exactly (up to rounding)
  const int points = 3 * per_pi + per_pi / 2;
  std::vector<int> hits(4, 0);
  int false_alarms = 0, index_errors = 0;
  std::vector<double> wt(points + 1), uT(points + 1);
  for (int i = 1; i <= points; ++i) {
    wt[i] = i * pi / per_pi;
    const auto pair = ho(wt[i] / T, T);
    const auto rep = caustic_report(pair);
    uT[i] = rep.u_T;
    const int n = static_cast<int>(std::lround(wt[i] / pi));
    if (rep.critical) {
      if (std::abs(wt[i] - n * pi) > 1e-6 || n < 1 || n > 3) {
        ++false_alarms;
        continue;
      }
      ++hits[n];
      v.expect(rep.k && std::abs(*rep.k - (n % 2 ? -1.0 : 1.0)) <= 1e-8, "k at n = " + std::to_string(n));
      v.expect(rep.morse_index == n, "m at n = " + std::to_string(n));
    } else if (rep.morse_index != static_cast<int>(std::floor(wt[i] / pi))) {
      ++index_errors;
    }
  }
  for (int n = 1; n <= 3; ++n) v.expect(hits[n] == 1, "caustic n = " + std::to_string(n) + " not found once");
  v.expect(false_alarms == 0, std::to_string(false_alarms) + " false caustics");
  v.expect(index_errors == 0, std::to_string(index_errors) + " wrong Morse indices");

  // refine every sign change of u(T) by bisection until the detector fires
  double worst = 0.0;
  int refined = 0;
  for (int i = 1; i < points; ++i) {
    if (uT[i] * uT[i + 1] >= 0.0) continue;
    double lo = wt[i], hi = wt[i + 1];
    const double u_lo = uT[i];
    bool found = false;
    for (int it = 0; it < 80 && !found; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto rep = caustic_report(ho(mid / T, T));
      if (rep.critical) {
        worst = std::max(worst, std::abs(mid - std::round(mid / pi) * pi));
        found = true;
      } else if (rep.u_T * u_lo > 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    refined += found;
  }
  v.expect(refined == 3, "sign-change refinement found " + std::to_string(refined));
  v.expect(worst <= 1e-6, "bisection located a caustic off n pi");
  v.detail = std::to_string(points) + " scan points, hits " + std::to_string(hits[1]) + "/" + std::to_string(hits[2]) +
             "/" + std::to_string(hits[3]) + fmt(", bisection max |wT - n pi| = %.1e", worst);
}

void morse_theorem(Verdict& v) {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> d(-1, 1);
  const int samples = 60;
  int agree = 0;
  double closest = 1e300;
  int max_index = 0;
  for (int i = 0; i < samples; ++i) {
    const double T = 1.0 + 4.0 * std::abs(d(rng));
    const int degree = 1 + i % 5;
    std::vector<double> c{10 * d(rng) + 10};
    for (int k = 1; k <= degree; ++k) c.push_back(6 * d(rng) / std::pow(T, k));
    const auto m = morse_crosscheck(CoefficientProfile::polynomial(c, T), 1024);
    agree += m.agree;
    v.expect(m.agree, "sample " + std::to_string(i) + ": spectral " + std::to_string(m.spectral_index) +
                          " vs Jacobi " + std::to_string(m.classical_index));
    closest = std::min(closest, m.min_abs_eigenvalue);
    max_index = std::max(max_index, m.classical_index);
  }
  v.detail = std::to_string(agree) + "/" + std::to_string(samples) + " agree, indices up to " +
             std::to_string(max_index) + fmt(", min |E| = %.1e", closest);
}

void analytic_spectra(Verdict& v) {
  const int N = 1024;
  double worst_margin = 0.0;  // max of error / bound
  for (const auto& [w, T] : std::vector<std::pair<double, double>>{{0.0, pi}, {0.5, pi}, {2.5, pi}, {1.0, 2.0}}) {
    const auto r = sturm_liouville_spectrum(constant(w * w, T), 5, N);
    for (int n = 1; n <= 5; ++n) {
      const double exact = std::pow(n * pi / T, 2) - w * w;
      const double rel = std::abs(r.eigenvalues[n - 1] - exact) / std::abs(exact);
      const double bound = 5 * std::pow(pi / N, 2) * n * n;
      worst_margin = std::max(worst_margin, rel / bound);
      v.expect(rel <= bound, fmt("w = %g, n = ", w) + std::to_string(n));
    }
  }
  v.detail = fmt("max relative error / bound = %.3f", worst_margin);
}

void forced_caustic(Verdict& v) {
  double focal_err = 0.0, phase_err = 0.0, ref_err = 0.0;
  struct Case {
    double w, f;
    int n;
  };
  for (const Case c : {Case{1.0, 0.7, 1}, Case{2.0, 0.7, 2}, Case{0.5, -1.2, 1}, Case{1.5, 0.4, 3}, Case{3.0, 2.0, 2}}) {
    const double T = c.n * pi / c.w;
    const auto pair = ho(c.w, T, c.f);
    const auto rep = caustic_report(pair);
    v.expect(rep.critical && rep.morse_index == c.n, "caustic not detected");
    if (!rep.critical) continue;
    const auto k = critical_kernel(rep, pair, rep.morse_index, 1.0);
    const double sign = c.n % 2 ? -1.0 : 1.0;
    const double phase = c.f * c.f * T / (2 * c.w * c.w) - c.n * pi / 2;
    for (double a : {-1.3, 0.0, 0.8}) {
      focal_err = std::max(focal_err, std::abs(k.focal_point(a) - (sign * a + (1 - sign) * c.f / (c.w * c.w))));
      phase_err = std::max(phase_err, std::abs(k.phase(a) - phase));
      // independent double-quadrature of the caustic-family action
      const auto r = forced_ho_reference(c.w, constant(c.f, T), T, a);
      ref_err = std::max(ref_err, std::abs(r.action - k.action_at(a)));
    }
  }
  v.expect(focal_err <= 1e-8, "focal point");
  v.expect(phase_err <= 1e-6, "phase");
  v.expect(ref_err <= 1e-6, "quadrature action");
  v.detail = fmt("focal err %.1e, phase err %.1e", focal_err, phase_err) + fmt(", vs double quadrature %.1e", ref_err);
}

struct RegularCase {
  std::string name;
  CoefficientProfile lambda, mu;
  SlitSetup setup;
};

void oracle_regular(Verdict& v) {
  auto hoc = [](double w, double T, double f) { return std::pair{constant(w * w, T), constant(-f, T)}; };
  std::vector<RegularCase> cases;
  auto add = [&](std::string name, std::pair<CoefficientProfile, CoefficientProfile> prof, SlitSetup s) {
    cases.push_back({std::move(name), prof.first, prof.second, s});
  };
  add("free T=1", hoc(0, 1, 0), SlitSetup::with_momentum(1.0, 0.7, 0.5));
  add("free T=2.5", hoc(0, 2.5, 0), SlitSetup::with_flight_time(-0.5, 1.2, 2.0));
  add("wT=pi/4", hoc(1, pi / 4, 0), SlitSetup::with_momentum(1.0, 1.0, 0.0));
  add("wT=pi/4 w=2", hoc(2, pi / 8, 0), SlitSetup::with_momentum(0.5, 0.5, 0.4));
  add("wT=pi/2", hoc(1, pi / 2, 0), SlitSetup::with_momentum(1.0, 1.0, 0.0));
  add("wT=pi/2 w=1.5", hoc(1.5, pi / 3, 0), SlitSetup::with_momentum(-0.8, 0.6, 0.3));
  add("wT=3pi/4", hoc(1, 0.75 * pi, 0), SlitSetup::with_momentum(1.0, 0.8, 0.2));
  add("wT=3pi/4 w=0.5", hoc(0.5, 1.5 * pi, 0), SlitSetup::with_momentum(0.6, 1.0, -0.2));
  add("driven constant", hoc(1, 1.2, 0.5), SlitSetup::with_momentum(1.0, 0.7, 0.1));
  add("driven ramp", {CoefficientProfile::polynomial({1.0, 0.3}, 2.0),
                      CoefficientProfile::piecewise_constant({0, 0.7, 2.0}, {0.5, -0.2})},
      SlitSetup::with_flight_time(0.5, 0.5, 1.5));

  double worst_center = 0, worst_var = 0, worst_phase = 0;
  for (const auto& c : cases) {
    const double T = c.lambda.horizon();
    const auto pair = solve_fundamental(c.lambda, c.mu);
    const auto rep = caustic_report(pair);
    const auto closed = evolve(c.setup, action_coefficients(pair), rep.morse_index);
    const auto box = default_box(std::min(c.setup.a, closed.center), std::max(c.setup.a, closed.center),
                                 std::max(c.setup.sigma0, closed.sigma()), 4096);
    const auto out = propagate({box, initial_state(c.setup).sample(box), 0.0}, c.lambda, c.mu, 0.0, T, 2048);
    const auto m = moments(out);
    // the centre can be 0, so it is measured against the width scale
    const double ce = std::abs(m.center - closed.center) / std::max(std::abs(closed.center), closed.sigma());
    const double ve = std::abs(m.variance - closed.variance) / closed.variance;
    auto node = [&](double x) { return static_cast<std::size_t>(std::lround((x - box.x_min) / box.dx())); };
    const std::size_t j0 = node(closed.center);
    double pe = 0;
    for (double off : {-1.0, 1.0, 2.0}) {
      const std::size_t j = node(closed.center + off * closed.sigma());
      const complex ro = out.samples[j] / out.samples[j0];
      const complex rc = closed(box.x(j)) / closed(box.x(j0));
      pe = std::max(pe, std::abs(std::arg(ro / rc)));
    }
    // absolute phase too: the oracle fixes the overall constant
    pe = std::max(pe, std::abs(std::arg(out.samples[j0] / closed(box.x(j0)))));
    v.expect(ce <= 1e-3, c.name + ": center");
    v.expect(ve <= 1e-3, c.name + ": variance");
    v.expect(pe <= 1e-3, c.name + ": phase");
    worst_center = std::max(worst_center, ce);
    worst_var = std::max(worst_var, ve);
    worst_phase = std::max(worst_phase, pe);
  }
  v.detail = std::to_string(cases.size()) + " sets; max center " + fmt("%.1e, variance %.1e", worst_center, worst_var) +
             fmt(", phase %.1e rad", worst_phase);
}

void oracle_critical(Verdict& v) {
  struct Case {
    double w;
    SlitSetup s;
  };
  double worst_l2 = 0, worst_norm = 0, worst_center = 0;
  for (const Case c : {Case{1.0, SlitSetup::with_momentum(1.0, 1.0, 0.0)}, Case{2.0, SlitSetup::with_flight_time(1.0, 0.6, 2.0)},
                       Case{1.0, SlitSetup::with_momentum(1.0, 0.5, 0.3)}}) {
    const double T = pi / c.w;
    const auto lam = constant(c.w * c.w, T), mu = constant(0, T);
    const auto pair = solve_fundamental(lam, mu);
    const auto rep = caustic_report(pair);
    v.expect(rep.critical, "omega T = pi not critical");
    if (!rep.critical) continue;
    const auto k = critical_kernel(rep, pair, rep.morse_index, 1.0);
    const UniformGrid box{-10, 10, 4096};
    const auto psi0 = initial_state(c.s).sample(box);
    const GridState pushed{box, apply_critical_kernel(k, box, psi0, box), T};
    const auto out = propagate({box, psi0, 0.0}, lam, mu, 0.0, T, 4096);
    const double l2 = relative_l2_distance(pushed.samples, out.samples);
    const auto mp = moments(pushed), mo = moments(out);
    worst_l2 = std::max(worst_l2, l2);
    worst_norm = std::max(worst_norm, std::abs(mp.norm - moments({box, psi0, 0.0}).norm));
    worst_center = std::max({worst_center, std::abs(mo.center + c.s.a), std::abs(k.focal_point(c.s.a) + c.s.a)});
    v.expect(l2 <= 1e-3, "L2 distance");
  }
  v.expect(worst_norm <= 1e-6, "norm not preserved");
  v.expect(worst_center <= 1e-3, "no reflection b = -a");
  v.detail = fmt("max L2 %.1e, norm change %.1e", worst_l2, worst_norm) + fmt(", |center + a| %.1e", worst_center);
}

void slit_formulas(Verdict& v) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(0.2, 2.0);
  double width_err = 0, star_err = 0, min_err = 0;
  int n = 0;
  while (n < 20) {
    const double w = d(rng), T = d(rng) * 1.5, a = d(rng) - 1.1, s0 = d(rng), p = d(rng) - 1.1, hbar = d(rng);
    if (std::abs(std::sin(w * T)) < 0.05 || std::abs(a) < 0.05) continue;
    ++n;
    const auto f = action_coefficients(ho(w, T));
    const auto setup = SlitSetup::with_momentum(a, s0, p, hbar);
    const double exact = ref::ho_width(w, T, s0, a, p, hbar);
    width_err = std::max(width_err, std::abs(evolve(setup, f).sigma() - exact) / exact);
    const auto best = optimal_slit(setup, f);
    if (best.infinite_concentration) continue;
    auto width = [&](double s) { return ref::ho_width(w, T, s, a, p, hbar); };
    const auto m = ref::golden_section(width, 1e-3, 1e3, 200);
    star_err = std::max(star_err, std::abs(m.x - best.sigma0_star) / best.sigma0_star);
    min_err = std::max(min_err, std::abs(m.f - best.sigma_min) / best.sigma_min);
  }
  v.expect(width_err <= 1e-10, "sigma(T) vs closed form");
  v.expect(star_err <= 1e-6, "sigma0*");
  v.expect(min_err <= 1e-6, "sigma_min");
  const double example = evolve(SlitSetup::with_momentum(1.0, 1.0, 0.0), action_coefficients(ho(1.0, pi / 2))).sigma();
  v.expect(std::abs(example - 0.5) <= 1e-10, "example sigma = 0.5");
  v.detail = fmt("width err %.1e, sigma0* err %.1e", width_err, star_err) +
             fmt(", sigma_min err %.1e, example %.12f", min_err, example);
}

void susceptibility_suppression(Verdict& v) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(0.2, 2.0);
  double fd_err = 0, excess = -1e300, limit_err = 0;
  int n = 0;
  while (n < 20) {
    const double w = d(rng), T = d(rng) * 1.5, s0 = d(rng), p = d(rng) - 1.1, a = 1.0;
    if (std::abs(std::sin(w * T)) < 0.05) continue;
    const auto f = action_coefficients(ho(w, T));
    const auto s = susceptibility(SlitSetup::with_momentum(a, s0, p, 1.0), f);
    if (s.purely_quantum) continue;
    ++n;
    const double h = 1e-5 * std::max(1.0, std::abs(p));
    auto width = [&](double q) { return ref::ho_width(w, T, s0, a, q, 1.0); };
    const double fd = std::abs((a / s0) * ref::central_difference(width, p, h));
    fd_err = std::max(fd_err, std::abs(s.value - fd) / fd);
    excess = std::max(excess, s.value - std::abs(s.jacobi));
    v.expect(s.value <= std::abs(s.jacobi), "S > |J|");
    const auto classical = susceptibility(SlitSetup::with_momentum(a, s0, p, 1e-8), f);
    limit_err = std::max(limit_err, std::abs(classical.value - std::abs(classical.jacobi)));
  }
  v.expect(fd_err <= 1e-6, "finite difference");
  v.expect(limit_err <= 1e-6, "classical limit");
  v.detail = fmt("finite-difference err %.1e, max(S - |J|) = %.1e", fd_err, excess) +
             fmt(", hbar=1e-8 |S - |J|| %.1e", limit_err);
}

void unitarity(Verdict& v) {
  double kernel_dev = 0;
  struct Case {
    double w, T, f;
  };
  for (const Case c : {Case{0.0, 1.0, 0.0}, Case{1.3, 0.9, 0.4}, Case{1.0, 4.0, 0.0}}) {
    const auto pair = ho(c.w, c.T, c.f);
    const auto rep = caustic_report(pair);
    const RegularKernel k{action_coefficients(pair), rep.morse_index, 1.0};
    const double s = 0.3;
    auto phi = [s](double centre) {
      return [s, centre](double x) {
        return std::pow(2 * pi * s * s, -0.25) * std::exp(-(x - centre) * (x - centre) / (4 * s * s));
      };
    };
    auto kernel = [&k](double x, double y) { return k(x, y); };
    const std::vector<double> centres{-0.6, 0.0, 0.5};
    const int nb = 1201;
    const double lo = -20, hi = 20, db = (hi - lo) / (nb - 1);
    std::vector<std::vector<complex>> images;
    for (double c0 : centres) {
      std::vector<complex> img(nb);
      for (int j = 0; j < nb; ++j) img[j] = ref::apply_by_quadrature(kernel, phi(c0), lo + j * db, c0 - 3, c0 + 3, 1201);
      images.push_back(img);
    }
    for (std::size_t i = 0; i < centres.size(); ++i) {
      for (std::size_t j = 0; j < centres.size(); ++j) {
        complex overlap = 0;
        for (int q = 0; q < nb; ++q) overlap += std::conj(images[i][q]) * images[j][q] * db;
        const double dd = centres[i] - centres[j];
        kernel_dev = std::max(kernel_dev, std::abs(overlap - std::exp(-dd * dd / (8 * s * s))));
      }
    }
  }
  v.expect(kernel_dev <= 1e-3, "kernel unitarity");

  double drift = 0;
  const double T = 3.0;
  const UniformGrid box{-40, 40, 4096};
  for (const auto& [lam, mu] : std::vector<std::pair<CoefficientProfile, CoefficientProfile>>{
           {constant(0, T), constant(0, T)},
           {constant(1, T), constant(0, T)},
           {CoefficientProfile::polynomial({1.0, -0.3, 0.1}, T), CoefficientProfile::piecewise_constant({0, 1, T}, {0.4, -0.4})}}) {
    GridState in{box, initial_state(SlitSetup::with_flight_time(0.5, 0.7, 2.0)).sample(box), 0.0};
    double n0 = 0, n1 = 0;
    for (const auto& z : in.samples) n0 += std::norm(z);
    const auto out = propagate(in, lam, mu, 0.0, T, 4096);
    for (const auto& z : out.samples) n1 += std::norm(z);
    drift = std::max(drift, std::abs(n1 - n0) * box.dx());
  }
  v.expect(drift <= 1e-10, "oracle norm drift");
  v.detail = fmt("kernel max deviation %.1e, oracle norm drift %.1e over 4096 steps", kernel_dev, drift);
}

void hygiene(Verdict& v) {
  double drift = 0;
  for (const auto& [lam, mu] : std::vector<std::pair<CoefficientProfile, CoefficientProfile>>{
           {constant(25.0, 10.0), constant(0, 10.0)},
           {constant(1.0, pi), constant(-0.5, pi)},
           {CoefficientProfile::polynomial({2.0, -1.0, 0.3}, 4.0), constant(0.2, 4.0)},
           {CoefficientProfile::piecewise_constant({0, 1, 2.5, 4}, {1.0, 9.0, -0.5}), constant(0, 4)},
           {CoefficientProfile::tabulated({0, 0.5, 1.2, 3}, {1, 4, 2, 0.5}), CoefficientProfile::tabulated({0, 3}, {0, 1})}}) {
    drift = std::max(drift, solve_fundamental(lam, mu).wronskian_drift());
  }
  v.expect(drift <= 1e-9, "Wronskian drift");

  // ODE: fixed coarse grids (no Richardson doubling) against closed forms
  SolverSettings coarse;
  coarse.richardson_tol = 1e300;
  auto ode_err = [&](int steps, int which) {
    coarse.steps = steps;
    const double w = 1.5, T = 2.0, f = 0.8;
    const auto pair = solve_fundamental(constant(w * w, T), constant(which == 2 ? -f : 0.0, T), coarse);
    if (which == 0) return std::abs(pair.u.value.back() - std::sin(w * T) / w);
    if (which == 1) return std::abs(pair.v.value.back() - std::cos(w * T));
    return std::abs(pair.s.value.back() - f * (1 - std::cos(w * T)) / (w * w));
  };
  double ode_min = 1e300;
  for (int which = 0; which < 3; ++which) ode_min = std::min(ode_min, ode_err(16, which) / ode_err(32, which));
  v.expect(ode_min >= 4.0, "ODE error did not drop by 4x");

  // oracle: halve dt and dx together
  auto oracle_err = [](int level, int which) {
    const double T = 1.0;
    const double w = which == 0 ? 0.0 : 1.0, f = which == 2 ? 0.5 : 0.0;
    const auto lam = constant(w * w, T), mu = constant(-f, T);
    const auto setup = SlitSetup::with_momentum(0.5, 0.7, 0.3);
    const auto closed = evolve(setup, action_coefficients(solve_fundamental(lam, mu)));
    const UniformGrid box{-16, 16, static_cast<std::size_t>(384 * (1 << level) + 1)};
    const auto out = propagate({box, initial_state(setup).sample(box), 0.0}, lam, mu, 0.0, T, 16 << level);
    return relative_l2_distance(out.samples, closed.sample(box));
  };
  double lo = 1e300, hi = 0;
  for (int which = 0; which < 3; ++which) {
    const double r = oracle_err(0, which) / oracle_err(1, which);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  v.expect(lo >= 3.5 && hi <= 4.5, "oracle ratio not ~4");
  v.detail = fmt("Wronskian drift %.1e, ODE ratio >= %.1f", drift, ode_min) + fmt(", oracle ratios %.2f..%.2f", lo, hi);
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "caustic locations, k = (-1)^n, m = n", 10, caustic_locations},
      {2, "Morse index theorem on random profiles", 60, morse_theorem},
      {3, "analytic Dirichlet spectra", 5, analytic_spectra},
      {4, "forced oscillator caustic kernel", 5, forced_caustic},
      {5, "oracle equivalence, regular", 120, oracle_regular},
      {6, "oracle equivalence, critical", 30, oracle_critical},
      {7, "slit width and optimal slit", 10, slit_formulas},
      {8, "susceptibility and quantum suppression", 30, susceptibility_suppression},
      {9, "unitarity", 60, unitarity},
      {10, "numerical hygiene", 30, hygiene},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) v.failures.push_back(fmt("runtime %.1f s over budget", secs));
    const bool ok = v.failures.empty();
    failed += !ok;
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << v.detail
         << fmt(" (%.2f s, budget %g s)", secs, c.budget);
    for (std::size_t i = 0; i < std::min<std::size_t>(3, v.failures.size()); ++i) line << "\n    - " << v.failures[i];
    if (v.failures.size() > 3) line << "\n    - ... " << v.failures.size() - 3 << " more";
    std::puts(line.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
