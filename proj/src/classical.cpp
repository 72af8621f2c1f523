#include "caustica/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "caustica/errors.hpp"
#include "detail/quadrature.hpp"

namespace caustica {

namespace {

// Cubic Hermite basis on s in [0, 1] and its s-derivative.
struct Hermite {
  double h00, h10, h01, h11;
};

Hermite hermite_basis(double s) {
  double s2 = s * s, s3 = s2 * s;
  return {2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2};
}

Hermite hermite_slope_basis(double s) {
  double s2 = s * s;
  return {6 * s2 - 6 * s, 3 * s2 - 4 * s + 1, -6 * s2 + 6 * s, 3 * s2 - 2 * s};
}

struct Interval {
  std::size_t i;
  double s;
  double h;
};

Interval locate(const std::vector<double>& t, double time) {
  if (t.size() < 2) throw InvalidInputError("sampled function needs at least two nodes");
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin() - 1);
  i = std::min(i, t.size() - 2);
  double h = t[i + 1] - t[i];
  return {i, std::clamp((time - t[i]) / h, 0.0, 1.0), h};
}

using detail::simpson;

struct Channel {
  double x0;
  double xdot0;
  bool forced;
};

struct Run {
  std::vector<double> times;
  std::vector<std::vector<double>> x, xdot;  // per channel
};

// RK4 for independent channels of x'' = -lambda x (- mu if forced).
Run integrate(const CoefficientProfile& lambda, const CoefficientProfile& mu, const std::vector<Channel>& channels,
              int steps) {
  const double T = lambda.horizon();
  const std::size_t n = static_cast<std::size_t>(steps);
  Run run;
  run.times.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) run.times[i] = T * static_cast<double>(i) / steps;
  run.times.back() = T;
  run.x.assign(channels.size(), std::vector<double>(n + 1));
  run.xdot.assign(channels.size(), std::vector<double>(n + 1));

  for (std::size_t c = 0; c < channels.size(); ++c) {
    run.x[c][0] = channels[c].x0;
    run.xdot[c][0] = channels[c].xdot0;
  }
  // Steps that straddle a breakpoint of lambda or mu are split there, so each
  // RK4 substep sees a smooth right-hand side.
  std::vector<double> kinks = lambda.kinks();
  for (double k : mu.kinks()) kinks.push_back(k);
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  std::vector<double> x(channels.size()), y(channels.size());
  auto substep = [&](double ta, double tb) {
    const double dt = tb - ta;
    const double l0 = lambda.right_limit(ta), lm = lambda(0.5 * (ta + tb)), l1 = lambda(tb);
    const double m0 = mu.right_limit(ta), mm = mu(0.5 * (ta + tb)), m1 = mu(tb);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const double f = channels[c].forced ? 1.0 : 0.0;
      const double xc = x[c], yc = y[c];
      const double k1x = yc, k1y = -l0 * xc - f * m0;
      const double k2x = yc + 0.5 * dt * k1y, k2y = -lm * (xc + 0.5 * dt * k1x) - f * mm;
      const double k3x = yc + 0.5 * dt * k2y, k3y = -lm * (xc + 0.5 * dt * k2x) - f * mm;
      const double k4x = yc + dt * k3y, k4y = -l1 * (xc + dt * k3x) - f * m1;
      x[c] = xc + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
      y[c] = yc + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    }
  };

  auto next_kink = kinks.begin();
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = run.times[i];
    const double t1 = run.times[i + 1];
    for (std::size_t c = 0; c < channels.size(); ++c) {
      x[c] = run.x[c][i];
      y[c] = run.xdot[c][i];
    }
    double ta = t0;
    while (next_kink != kinks.end() && *next_kink <= t0) ++next_kink;
    for (; next_kink != kinks.end() && *next_kink < t1; ++next_kink) {
      substep(ta, *next_kink);
      ta = *next_kink;
    }
    substep(ta, t1);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      if (!std::isfinite(x[c]) || !std::isfinite(y[c])) {
        throw IntegrationError("non-finite state in RK4 integration", t1);
      }
      run.x[c][i + 1] = x[c];
      run.xdot[c][i + 1] = y[c];
    }
  }
  return run;
}

double endpoint_difference(const Run& coarse, const Run& fine) {
  double err = 0.0;
  auto accumulate = [&err](double a, double b) { err = std::max(err, std::abs(a - b) / std::max(1.0, std::abs(b))); };
  for (std::size_t c = 0; c < coarse.x.size(); ++c) {
    accumulate(coarse.x[c].back(), fine.x[c].back());
    accumulate(coarse.xdot[c].back(), fine.xdot[c].back());
  }
  return err;
}

// Integrates at the requested resolution, doubling the step count until the
// coarse run agrees with its step-halved companion.
std::pair<Run, double> converged_run(const CoefficientProfile& lambda, const CoefficientProfile& mu,
                                     const std::vector<Channel>& channels, const SolverSettings& settings) {
  if (std::abs(lambda.horizon() - mu.horizon()) > 1e-12 * std::max(1.0, lambda.horizon())) {
    throw InvalidInputError("lambda and mu are defined on different horizons");
  }
  if (settings.steps < 16) throw InvalidInputError("solver needs at least 16 steps");
  int steps = settings.steps + (settings.steps % 2);
  Run coarse = integrate(lambda, mu, channels, steps);
  for (;;) {
    if (2 * steps > settings.max_steps) {
      throw IntegrationError("step size underflow: RK4 did not converge within " +
                                 std::to_string(settings.max_steps) + " steps",
                             lambda.horizon());
    }
    Run fine = integrate(lambda, mu, channels, 2 * steps);
    double err = endpoint_difference(coarse, fine);
    if (err <= settings.richardson_tol) return {std::move(coarse), err};
    steps *= 2;
    coarse = std::move(fine);
  }
}

SampledFunction sampled(const Run& run, std::size_t channel) {
  return {run.times, run.x[channel], run.xdot[channel]};
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double SampledFunction::operator()(double time) const {
  auto [i, s, h] = locate(t, time);
  Hermite b = hermite_basis(s);
  return b.h00 * value[i] + b.h10 * h * derivative[i] + b.h01 * value[i + 1] + b.h11 * h * derivative[i + 1];
}

double SampledFunction::slope(double time) const {
  auto [i, s, h] = locate(t, time);
  Hermite b = hermite_slope_basis(s);
  return (b.h00 * value[i] + b.h10 * h * derivative[i] + b.h01 * value[i + 1] + b.h11 * h * derivative[i + 1]) / h;
}

double FundamentalPair::wronskian_drift() const {
  double drift = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double w = u.value[i] * v.derivative[i] - u.derivative[i] * v.value[i];
    drift = std::max(drift, std::abs(w + 1.0));
  }
  return drift;
}

FundamentalPair solve_fundamental(const CoefficientProfile& lambda, const CoefficientProfile& mu,
                                  const SolverSettings& settings) {
  const std::vector<Channel> channels{{0.0, 1.0, false}, {1.0, 0.0, false}, {0.0, 0.0, true}};
  auto [run, err] = converged_run(lambda, mu, channels, settings);

  FundamentalPair pair{lambda, mu, run.times, {}, {}, sampled(run, 0), sampled(run, 1), sampled(run, 2), err};
  pair.lambda_samples.reserve(run.times.size());
  pair.mu_samples.reserve(run.times.size());
  for (double t : run.times) {
    pair.lambda_samples.push_back(lambda(t));
    pair.mu_samples.push_back(mu(t));
  }
  return pair;
}

SampledFunction solve_homogeneous(const CoefficientProfile& lambda, double x0, double xdot0,
                                  const SolverSettings& settings) {
  const auto zero = CoefficientProfile::constant(0.0, lambda.horizon());
  auto [run, err] = converged_run(lambda, zero, {{x0, xdot0, false}}, settings);
  return sampled(run, 0);
}

ClassicalTrajectory solve_trajectory(const FundamentalPair& pair, double a, double p) {
  const std::size_t n = pair.times.size();
  if (n < 3 || (n - 1) % 2 != 0) throw InvalidInputError("fundamental pair needs an even number of steps");
  ClassicalTrajectory path{a, p, {pair.times, std::vector<double>(n), std::vector<double>(n)}, 0.0};
  std::vector<double> lagrangian(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a * pair.v.value[i] + p * pair.u.value[i] + pair.s.value[i];
    const double xd = a * pair.v.derivative[i] + p * pair.u.derivative[i] + pair.s.derivative[i];
    path.x.value[i] = x;
    path.x.derivative[i] = xd;
    lagrangian[i] = 0.5 * xd * xd - 0.5 * pair.lambda_samples[i] * x * x - pair.mu_samples[i] * x;
  }
  path.action = simpson(lagrangian, pair.horizon() / static_cast<double>(n - 1));
  return path;
}

bool is_critical(const FundamentalPair& pair, double eps_caustic) {
  const double scale = max_abs(pair.u.value);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInputError("degenerate fundamental pair: u vanishes identically");
  }
  return std::abs(pair.u.back()) <= eps_caustic * scale;
}

ClassicalTrajectory solve_boundary_value(const FundamentalPair& pair, double a, double b, double eps_caustic) {
  if (is_critical(pair, eps_caustic)) {
    throw CriticalPotentialError("no unique classical path: u(T) vanishes (caustic at t = T)");
  }
  const double p = (b - a * pair.v.back() - pair.s.back()) / pair.u.back();
  return solve_trajectory(pair, a, p);
}

double boundary_term_action(const FundamentalPair& pair, const ClassicalTrajectory& path) {
  const auto& x = path.x;
  std::vector<double> mux(x.value.size());
  for (std::size_t i = 0; i < mux.size(); ++i) mux[i] = pair.mu_samples[i] * x.value[i];
  const double h = pair.horizon() / static_cast<double>(mux.size() - 1);
  return 0.5 * (x.back() * x.back_derivative() - x.front() * x.derivative.front()) - 0.5 * simpson(mux, h);
}

CausticReport caustic_report(const FundamentalPair& pair, double eps_caustic, double tol_zero) {
  if (!(eps_caustic > 0.0)) throw InvalidInputError("eps_caustic must be positive");
  const auto& u = pair.u;
  const double T = pair.horizon();
  const double scale = max_abs(u.value);
  const double tol = tol_zero * T;

  CausticReport report;
  report.critical = is_critical(pair, eps_caustic);
  report.u_T = u.back();
  report.caustic_residual = std::abs(u.back()) / scale;

  const std::size_t n = u.t.size() - 1;
  if (u.value[1] <= 0.0) {
    throw IntegrationError("grid too coarse: Jacobi field changes sign within the first step", u.t[1]);
  }

  auto cubic = [&](std::size_t i, double s) {
    const double h = u.t[i + 1] - u.t[i];
    Hermite b = hermite_basis(s);
    return b.h00 * u.value[i] + b.h10 * h * u.derivative[i] + b.h01 * u.value[i + 1] + b.h11 * h * u.derivative[i + 1];
  };
  auto bisect = [&](std::size_t i, double lo, double hi) {
    const double h = u.t[i + 1] - u.t[i];
    double flo = cubic(i, lo);
    for (int it = 0; it < 200 && (hi - lo) * h > 0.5 * tol; ++it) {
      double mid = 0.5 * (lo + hi);
      double fmid = cubic(i, mid);
      if (fmid == 0.0) return u.t[i] + mid * h;
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    return u.t[i] + 0.5 * (lo + hi) * h;
  };

  std::vector<double> zeros;
  for (std::size_t i = 1; i < n; ++i) {
    const double y0 = u.value[i], y1 = u.value[i + 1];
    if (y0 == 0.0) {
      zeros.push_back(u.t[i]);
      continue;
    }
    if (y1 == 0.0) continue;  // recorded as the next interval's left node, or as T
    if ((y0 < 0.0) != (y1 < 0.0)) {
      zeros.push_back(bisect(i, 0.0, 1.0));
      continue;
    }
    // Same sign at both nodes: look for an interior extremum of the cubic
    // that dips through (two zeros) or touches (tangential) the axis.
    const double h = u.t[i + 1] - u.t[i];
    const double qa = 6 * y0 + 3 * h * u.derivative[i] - 6 * y1 + 3 * h * u.derivative[i + 1];
    const double qb = -6 * y0 - 4 * h * u.derivative[i] + 6 * y1 - 2 * h * u.derivative[i + 1];
    const double qc = h * u.derivative[i];
    std::vector<double> ext;
    if (std::abs(qa) < 1e-300) {
      if (qb != 0.0) ext.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4 * qa * qc;
      if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        ext.push_back((-qb - r) / (2 * qa));
        ext.push_back((-qb + r) / (2 * qa));
      }
    }
    for (double s : ext) {
      if (!(s > 0.0 && s < 1.0)) continue;
      const double ys = cubic(i, s);
      if ((ys < 0.0) != (y0 < 0.0) && ys != 0.0) {
        zeros.push_back(bisect(i, 0.0, s));
        zeros.push_back(bisect(i, s, 1.0));
        break;
      }
      if (std::abs(ys) <= eps_caustic * scale) {
        throw TangentialZeroError("Jacobi field touches zero without crossing near t = " +
                                  std::to_string(u.t[i] + s * h) + "; Morse index undefined");
      }
    }
  }
  std::sort(zeros.begin(), zeros.end());

  if (report.critical) {
    std::erase_if(zeros, [&](double z) { return z >= T - tol; });
    zeros.push_back(T);
    report.k = pair.v.back() / pair.v.front();
    report.focal_intercept = pair.s.back();
  }
  report.zero_times = std::move(zeros);
  report.morse_index = static_cast<int>(report.zero_times.size());
  return report;
}

const SampledFunction& jacobi_field(const FundamentalPair& pair) { return pair.u; }

double stretching_factor(const SampledFunction& w) {
  if (w.front() == 0.0) throw InvalidInputError("stretching factor needs a solution with w(0) != 0");
  return w.back() / w.front();
}

ActionQuadraticForm action_coefficients(const FundamentalPair& pair, double eps_caustic) {
  if (is_critical(pair, eps_caustic)) {
    throw CriticalPotentialError("action is not a function of the end points at a caustic; use the critical kernel");
  }
  const double uT = pair.u.back();
  ActionQuadraticForm form;
  form.A = pair.v.back() / (2 * uT);
  form.B = -1.0 / uT;
  form.C = pair.u.back_derivative() / (2 * uT);

  // Six boundary-value quadratures pin all six coefficients; D, E, F are
  // taken from them and A, B, C serve as a consistency check.
  auto I = [&](double x, double y) { return solve_boundary_value(pair, x, y, eps_caustic).action; };
  const double i00 = I(0, 0), i10 = I(1, 0), im10 = I(-1, 0), i01 = I(0, 1), i0m1 = I(0, -1), i11 = I(1, 1);
  const double F = i00;
  const double D = 0.5 * (i10 - im10);
  const double A = 0.5 * (i10 + im10) - F;
  const double E = 0.5 * (i01 - i0m1);
  const double C = 0.5 * (i01 + i0m1) - F;
  const double B = i11 - A - C - D - E - F;
  const double scale = std::max({1.0, std::abs(form.A), std::abs(form.B), std::abs(form.C)});
  form.quadrature_mismatch =
      std::max({std::abs(A - form.A), std::abs(B - form.B), std::abs(C - form.C)}) / scale;
  if (pair.forced()) {
    form.D = D;
    form.E = E;
    form.F = F;
  }
  return form;
}

}  // namespace caustica
