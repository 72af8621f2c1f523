#pragma once

#include <optional>
#include <vector>

#include "caustica/timefun.hpp"

namespace caustica {

/// Settings for the fixed-step RK4 integrator shared by every module that
/// consumes classical solutions.
struct SolverSettings {
  int steps = 2048;              // uniform steps on [0, T]; even, at least 16
  double richardson_tol = 1e-10;  // accepted |y_N(T) - y_2N(T)|, relative to max(1, |y|)
  int max_steps = 1 << 22;
  double eps_caustic = 1e-8;      // critical iff |u(T)| <= eps_caustic * max|u|
  double tol_zero = 1e-10;        // zero refinement tolerance, in units of T
  double tol_wronskian = 1e-9;
};

/// Samples of a C^1 function and its derivative on a uniform grid. Values
/// between nodes come from the cubic Hermite interpolant.
struct SampledFunction {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> derivative;

  double operator()(double time) const;
  double slope(double time) const;
  double front() const { return value.front(); }
  double back() const { return value.back(); }
  double back_derivative() const { return derivative.back(); }
};

/// The homogeneous solutions u (u(0)=0, u'(0)=1) and v (v(0)=1, v'(0)=0)
/// of x'' + lambda x = 0, and the special solution s of x'' + lambda x = -mu
/// with s(0) = s'(0) = 0. The Wronskian u v' - u' v is identically -1.
struct FundamentalPair {
  CoefficientProfile lambda;
  CoefficientProfile mu;
  std::vector<double> times;
  std::vector<double> lambda_samples;
  std::vector<double> mu_samples;
  SampledFunction u;
  SampledFunction v;
  SampledFunction s;
  double richardson_error = 0.0;  // |y_N(T) - y_2N(T)| at the accepted N

  double horizon() const { return times.back(); }
  std::size_t steps() const { return times.size() - 1; }
  bool forced() const { return !mu.is_identically_zero(); }
  /// max over samples of |u v' - u' v + 1|.
  double wronskian_drift() const;
};

struct ClassicalTrajectory {
  double a = 0.0;  // x(0)
  double p = 0.0;  // x'(0)
  SampledFunction x;
  double action = 0.0;  // Simpson quadrature of L along the samples
};

struct CausticReport {
  bool critical = false;
  double u_T = 0.0;
  double caustic_residual = 0.0;  // |u(T)| / max|u|
  std::optional<double> k;
  std::optional<double> focal_intercept;
  int morse_index = 0;
  std::vector<double> zero_times;  // zeros of u on (0, T]
};

/// I(y, T; x, 0) = A x^2 + B x y + C y^2 + D x + E y + F for the classical
/// path from x at t = 0 to y at t = T.
struct ActionQuadraticForm {
  double A = 0.0, B = 0.0, C = 0.0;
  double D = 0.0, E = 0.0, F = 0.0;
  // Largest disagreement between the closed-form A, B, C and the values
  // recovered from boundary-value quadratures.
  double quadrature_mismatch = 0.0;

  double operator()(double x, double y) const {
    return A * x * x + B * x * y + C * y * y + D * x + E * y + F;
  }
};

FundamentalPair solve_fundamental(const CoefficientProfile& lambda, const CoefficientProfile& mu,
                                  const SolverSettings& settings = {});

/// Homogeneous solution with arbitrary initial data, on the same kind of grid.
SampledFunction solve_homogeneous(const CoefficientProfile& lambda, double x0, double xdot0,
                                  const SolverSettings& settings = {});

/// x(t) = a v(t) + p u(t) + s(t) and its action.
ClassicalTrajectory solve_trajectory(const FundamentalPair& pair, double a, double p);

/// The unique path from a to b; throws CriticalPotentialError on caustics.
ClassicalTrajectory solve_boundary_value(const FundamentalPair& pair, double a, double b,
                                         double eps_caustic = SolverSettings{}.eps_caustic);

/// Action from the on-shell boundary identity 1/2 [x x']_0^T - 1/2 int mu x dt.
/// Cross-check only.
double boundary_term_action(const FundamentalPair& pair, const ClassicalTrajectory& path);

CausticReport caustic_report(const FundamentalPair& pair, double eps_caustic = SolverSettings{}.eps_caustic,
                             double tol_zero = SolverSettings{}.tol_zero);

/// The Jacobi field normalised to J'(0) = 1, i.e. u.
const SampledFunction& jacobi_field(const FundamentalPair& pair);

/// w(T) / w(0) for a homogeneous solution with w(0) != 0.
double stretching_factor(const SampledFunction& w);

ActionQuadraticForm action_coefficients(const FundamentalPair& pair,
                                        double eps_caustic = SolverSettings{}.eps_caustic);

bool is_critical(const FundamentalPair& pair, double eps_caustic = SolverSettings{}.eps_caustic);

}  // namespace caustica
