#include "caustica/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "caustica/errors.hpp"

namespace caustica {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;  // constant off-diagonal -1/h^2
  double h = 0.0;
};

Tridiagonal discretise(const CoefficientProfile& lambda, int N) {
  if (N < 64) throw InvalidInputError("spectrum needs N >= 64 interior points");
  const double T = lambda.horizon();
  Tridiagonal m;
  m.h = T / (N + 1);
  m.off = -1.0 / (m.h * m.h);
  m.diag.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double l = lambda((i + 1) * m.h);
    if (!std::isfinite(l)) throw InvalidInputError("lambda is not bounded above on the grid");
    m.diag[static_cast<std::size_t>(i)] = 2.0 / (m.h * m.h) - l;
  }
  return m;
}

// Sturm sequence count of eigenvalues strictly below x.
int sturm_count(const Tridiagonal& m, double x) {
  const double e2 = m.off * m.off;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < m.diag.size(); ++i) {
    q = m.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double kth_eigenvalue(const Tridiagonal& m, int k, double lo, double hi) {
  constexpr int kMaxIter = 300;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < kMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 4 * eps * std::max(std::abs(lo), std::abs(hi)) + 1e-300 || mid == lo || mid == hi) return mid;
    if (sturm_count(m, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw EigenSolverError("bisection for eigenvalue " + std::to_string(k + 1) + " did not converge", kMaxIter);
}

// Solves (M - shift) y = rhs in place by LU with partial pivoting.
void shifted_solve(const Tridiagonal& m, double shift, std::vector<double>& rhs) {
  const std::size_t n = m.diag.size();
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, m.off);
  std::vector<bool> swapped(n, false);
  for (std::size_t i = 0; i < n; ++i) d[i] = m.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) du[i] = m.off;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = std::numeric_limits<double>::epsilon() * std::abs(m.off);
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::epsilon() * std::abs(m.off);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) std::swap(rhs[i], rhs[i + 1]);
    rhs[i + 1] -= dl[i] * rhs[i];
  }
  rhs[n - 1] /= d[n - 1];
  if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) {
    rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
  }
}

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * h;
}

std::vector<double> eigenvector(const Tridiagonal& m, double eigenvalue,
                                const std::vector<std::vector<double>>& previous) {
  const std::size_t n = m.diag.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + 0.1 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  const double perturb = 1e-12 * std::max(1.0, std::abs(m.off));
  for (int it = 0; it < 3; ++it) {
    shifted_solve(m, eigenvalue + perturb, y);
    for (const auto& q : previous) {
      const double c = weighted_dot(q, y, m.h);
      for (std::size_t i = 0; i < n; ++i) y[i] -= c * q[i];
    }
    const double norm = std::sqrt(weighted_dot(y, y, m.h));
    for (double& x : y) x /= norm;
  }
  // Fix the sign so the first lobe is positive.
  auto first = std::find_if(y.begin(), y.end(), [](double x) { return std::abs(x) > 1e-8; });
  if (first != y.end() && *first < 0.0) {
    for (double& x : y) x = -x;
  }
  return y;
}

}  // namespace

int count_below(const CoefficientProfile& lambda, int N, double x) { return sturm_count(discretise(lambda, N), x); }

SpectrumReport sturm_liouville_spectrum(const CoefficientProfile& lambda, int n_max, int N) {
  if (n_max < 1 || n_max > N / 4) throw InvalidInputError("n_max must lie in [1, N/4]");
  const Tridiagonal m = discretise(lambda, N);

  SpectrumReport report;
  report.grid_points = N;
  report.step = m.h;
  const double lambda_max = std::max(std::abs(lambda.sup()), std::abs(lambda.inf()));
  report.eps_zero = std::max(1e-6, 10.0 * m.h * m.h * lambda_max);

  // Gershgorin bounds.
  double lo = m.diag.front(), hi = m.diag.front();
  for (double d : m.diag) {
    lo = std::min(lo, d - 2 * std::abs(m.off));
    hi = std::max(hi, d + 2 * std::abs(m.off));
  }
  for (int k = 0; k < n_max; ++k) {
    double lower = report.eigenvalues.empty() ? lo : report.eigenvalues.back();
    double e = kth_eigenvalue(m, k, lower, hi);
    report.eigenvalues.push_back(e);
    report.eigenvectors.push_back(eigenvector(m, e, report.eigenvectors));
  }

  const int below_neg = sturm_count(m, -report.eps_zero);
  const int at_or_below_zero = sturm_count(m, std::nextafter(report.eps_zero, HUGE_VAL));
  report.negative_count = below_neg;
  report.zero_count = at_or_below_zero - below_neg;
  report.index = at_or_below_zero;
  return report;
}

MorseCrosscheck morse_crosscheck(const CoefficientProfile& lambda, int N, const SolverSettings& settings) {
  const auto zero = CoefficientProfile::constant(0.0, lambda.horizon());
  const FundamentalPair pair = solve_fundamental(lambda, zero, settings);
  const CausticReport classical = caustic_report(pair, settings.eps_caustic, settings.tol_zero);

  const int n_max = std::clamp(classical.morse_index + 3, 1, N / 4);
  const SpectrumReport spectrum = sturm_liouville_spectrum(lambda, n_max, N);

  MorseCrosscheck out;
  out.critical = classical.critical;
  out.classical_index = classical.morse_index;
  out.spectral_index = spectrum.index;
  out.negative_count = spectrum.negative_count;
  out.zero_count = spectrum.zero_count;
  out.min_abs_eigenvalue = std::abs(spectrum.eigenvalues.front());
  for (double e : spectrum.eigenvalues) out.min_abs_eigenvalue = std::min(out.min_abs_eigenvalue, std::abs(e));
  out.agree = out.spectral_index == out.classical_index;
  return out;
}

}  // namespace caustica
