#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace caustica {

/// A real coefficient of time on [0, T]: the harmonic strength lambda(t), the
/// linear term mu(t), or the external force f(t) = -mu(t). The particle mass
/// is fixed to 1 throughout the library.
///
/// Piecewise kinds are left-continuous: at an interior breakpoint b_i the
/// value of the piece ending at b_i is returned. Profiles are immutable.
class CoefficientProfile {
 public:
  struct Constant {
    double value;
  };
  struct PiecewiseConstant {
    std::vector<double> breakpoints;  // 0 = b_0 < b_1 < ... < b_n = T
    std::vector<double> values;       // n values, one per piece
  };
  // Each piece is a polynomial in absolute time t, lowest degree first.
  struct Polynomial {
    std::vector<double> breakpoints;
    std::vector<std::vector<double>> coefficients;
  };
  // Linear interpolation between strictly increasing samples covering [0, T].
  struct Tabulated {
    std::vector<double> times;
    std::vector<double> values;
  };
  using Kind = std::variant<Constant, PiecewiseConstant, Polynomial, Tabulated>;

  static CoefficientProfile constant(double value, double horizon);
  static CoefficientProfile piecewise_constant(std::vector<double> breakpoints,
                                               std::vector<double> values);
  static CoefficientProfile polynomial(std::vector<double> coefficients, double horizon);
  static CoefficientProfile polynomial(std::vector<double> breakpoints,
                                       std::vector<std::vector<double>> coefficients);
  static CoefficientProfile tabulated(std::vector<double> times, std::vector<double> values,
                                      std::optional<double> horizon = std::nullopt);

  double horizon() const noexcept { return horizon_; }
  const Kind& kind() const noexcept { return kind_; }

  /// Value at t. Throws DomainError outside [0, T] (a relative slack of 1e-12
  /// absorbs grid round-off at the end points).
  double operator()(double t) const;

  /// lim_{s -> t+} of the profile; differs from operator() only at breakpoints.
  double right_limit(double t) const;

  /// Interior points of (0, T) where the profile or its derivative may jump:
  /// piece boundaries and tabulated sample times.
  std::vector<double> kinks() const;

  /// The same profile multiplied pointwise by `factor`.
  CoefficientProfile scaled(double factor) const;

  bool is_identically_zero() const;

  /// Upper and lower bounds of the profile on [0, T]. Exact for every kind
  /// except Polynomial, which is bounded by dense sampling.
  double sup() const;
  double inf() const;

 private:
  CoefficientProfile(Kind kind, double horizon);

  Kind kind_;
  double horizon_;
};

double eval(const CoefficientProfile& profile, double t);

/// Builds a profile from its JSON form. `horizon` supplies T when the fragment
/// does not carry a "horizon" field; tabulated profiles default to their last
/// sample time. Throws ValidationError on schema violations.
CoefficientProfile parse_profile(const nlohmann::json& spec,
                                 std::optional<double> horizon = std::nullopt);

/// Parses JSON text first; syntax errors are reported as ParseError with the
/// byte offset of the failure.
CoefficientProfile parse_profile(std::string_view text,
                                 std::optional<double> horizon = std::nullopt);

nlohmann::json to_json(const CoefficientProfile& profile);

}  // namespace caustica
