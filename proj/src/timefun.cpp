#include "caustica/timefun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "caustica/errors.hpp"

namespace caustica {

namespace {

using nlohmann::json;

double slack(double horizon) { return 1e-12 * std::max(1.0, horizon); }

void require_finite(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + " contains a non-finite value");
  }
}

void require_breakpoints(const std::vector<double>& b, std::size_t pieces) {
  if (pieces == 0) throw ValidationError("profile has no pieces");
  if (b.size() != pieces + 1) {
    throw ValidationError("expected " + std::to_string(pieces + 1) + " breakpoints for " +
                          std::to_string(pieces) + " pieces, got " + std::to_string(b.size()));
  }
  require_finite(b, "breakpoints");
  if (b.front() != 0.0) throw ValidationError("first breakpoint must be 0");
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (!(b[i] > b[i - 1])) throw ValidationError("breakpoints must be strictly increasing");
  }
}

// Index of the piece owning t under the left-continuous convention.
std::size_t piece_index(const std::vector<double>& breakpoints, double t) {
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
  std::ptrdiff_t j = it - breakpoints.begin() - 1;
  std::ptrdiff_t last = static_cast<std::ptrdiff_t>(breakpoints.size()) - 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, last));
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& spec, const char* name) {
  auto it = spec.find(name);
  if (it == spec.end()) throw ValidationError(std::string("profile is missing field \"") + name + "\"");
  return *it;
}

double number(const json& j, const char* name) {
  if (!j.is_number()) throw ValidationError(std::string("field \"") + name + "\" must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* name) {
  if (!j.is_array()) throw ValidationError(std::string("field \"") + name + "\" must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, name));
  return out;
}

}  // namespace

CoefficientProfile::CoefficientProfile(Kind kind, double horizon)
    : kind_(std::move(kind)), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw ValidationError("profile horizon must be positive and finite");
  }
}

CoefficientProfile CoefficientProfile::constant(double value, double horizon) {
  if (!std::isfinite(value)) throw ValidationError("constant value must be finite");
  return {Constant{value}, horizon};
}

CoefficientProfile CoefficientProfile::piecewise_constant(std::vector<double> breakpoints,
                                                          std::vector<double> values) {
  require_breakpoints(breakpoints, values.size());
  require_finite(values, "values");
  double horizon = breakpoints.back();
  return {PiecewiseConstant{std::move(breakpoints), std::move(values)}, horizon};
}

CoefficientProfile CoefficientProfile::polynomial(std::vector<double> coefficients, double horizon) {
  return polynomial({0.0, horizon}, {std::move(coefficients)});
}

CoefficientProfile CoefficientProfile::polynomial(std::vector<double> breakpoints,
                                                  std::vector<std::vector<double>> coefficients) {
  require_breakpoints(breakpoints, coefficients.size());
  for (const auto& c : coefficients) {
    if (c.empty()) throw ValidationError("polynomial piece has no coefficients");
    require_finite(c, "coefficients");
  }
  double horizon = breakpoints.back();
  return {Polynomial{std::move(breakpoints), std::move(coefficients)}, horizon};
}

CoefficientProfile CoefficientProfile::tabulated(std::vector<double> times, std::vector<double> values,
                                                 std::optional<double> horizon) {
  if (times.size() != values.size()) throw ValidationError("tabulated t and v differ in length");
  if (times.size() < 2) throw ValidationError("tabulated profile needs at least two samples");
  require_finite(times, "t");
  require_finite(values, "v");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ValidationError("tabulated sample times must be strictly increasing");
  }
  double T = horizon.value_or(times.back());
  if (times.front() > 0.0) throw ValidationError("tabulated samples must start at or before t = 0");
  if (times.back() < T - slack(T)) throw ValidationError("tabulated samples do not cover the horizon");
  return {Tabulated{std::move(times), std::move(values)}, T};
}

double CoefficientProfile::operator()(double t) const {
  const double eps = slack(horizon_);
  if (!(t >= -eps && t <= horizon_ + eps)) {
    throw DomainError("profile evaluated at t = " + std::to_string(t) + " outside [0, " +
                      std::to_string(horizon_) + "]");
  }
  t = std::clamp(t, 0.0, horizon_);
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [t](const PiecewiseConstant& p) { return p.values[piece_index(p.breakpoints, t)]; },
          [t](const Polynomial& p) { return horner(p.coefficients[piece_index(p.breakpoints, t)], t); },
          [t](const Tabulated& p) {
            auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
            std::size_t j = static_cast<std::size_t>(it - p.times.begin());
            if (j == 0) return p.values.front();
            --j;
            if (p.times[j] == t || j + 1 == p.times.size()) return p.values[j];
            double w = (t - p.times[j]) / (p.times[j + 1] - p.times[j]);
            return p.values[j] + w * (p.values[j + 1] - p.values[j]);
          },
      },
      kind_);
}

double CoefficientProfile::right_limit(double t) const {
  auto right_piece = [t](const std::vector<double>& b) {
    auto it = std::upper_bound(b.begin(), b.end(), t);
    std::ptrdiff_t j = it - b.begin() - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(b.size()) - 2));
  };
  if (const auto* p = std::get_if<PiecewiseConstant>(&kind_)) {
    (void)(*this)(t);  // domain check
    return p->values[right_piece(p->breakpoints)];
  }
  if (const auto* p = std::get_if<Polynomial>(&kind_)) {
    (void)(*this)(t);
    return horner(p->coefficients[right_piece(p->breakpoints)], std::clamp(t, 0.0, horizon_));
  }
  return (*this)(t);
}

std::vector<double> CoefficientProfile::kinks() const {
  auto interior = [this](const std::vector<double>& pts) {
    std::vector<double> out;
    for (double x : pts) {
      if (x > 0.0 && x < horizon_) out.push_back(x);
    }
    return out;
  };
  return std::visit(overloaded{
                        [](const Constant&) { return std::vector<double>{}; },
                        [&](const PiecewiseConstant& p) { return interior(p.breakpoints); },
                        [&](const Polynomial& p) { return interior(p.breakpoints); },
                        [&](const Tabulated& p) { return interior(p.times); },
                    },
                    kind_);
}

double eval(const CoefficientProfile& profile, double t) { return profile(t); }

CoefficientProfile CoefficientProfile::scaled(double factor) const {
  auto scale = [factor](std::vector<double> v) {
    for (double& x : v) x *= factor;
    return v;
  };
  Kind k = std::visit(overloaded{
                          [&](const Constant& c) -> Kind { return Constant{c.value * factor}; },
                          [&](const PiecewiseConstant& p) -> Kind {
                            return PiecewiseConstant{p.breakpoints, scale(p.values)};
                          },
                          [&](const Polynomial& p) -> Kind {
                            std::vector<std::vector<double>> c;
                            for (const auto& piece : p.coefficients) c.push_back(scale(piece));
                            return Polynomial{p.breakpoints, std::move(c)};
                          },
                          [&](const Tabulated& p) -> Kind { return Tabulated{p.times, scale(p.values)}; },
                      },
                      kind_);
  return {std::move(k), horizon_};
}

bool CoefficientProfile::is_identically_zero() const {
  auto all_zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  return std::visit(overloaded{
                        [](const Constant& c) { return c.value == 0.0; },
                        [&](const PiecewiseConstant& p) { return all_zero(p.values); },
                        [&](const Polynomial& p) {
                          return std::all_of(p.coefficients.begin(), p.coefficients.end(), all_zero);
                        },
                        [&](const Tabulated& p) { return all_zero(p.values); },
                    },
                    kind_);
}

namespace {

template <class Pick>
double extremum(const CoefficientProfile& prof, Pick pick) {
  const double T = prof.horizon();
  return std::visit(
      overloaded{
          [](const CoefficientProfile::Constant& c) { return c.value; },
          [&](const CoefficientProfile::PiecewiseConstant& p) {
            double r = p.values.front();
            for (double v : p.values) r = pick(r, v);
            return r;
          },
          [&](const CoefficientProfile::Polynomial& p) {
            constexpr int kSamples = 4096;
            double r = horner(p.coefficients.front(), 0.0);
            for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
              double lo = p.breakpoints[i], hi = p.breakpoints[i + 1];
              for (int j = 0; j <= kSamples; ++j) {
                r = pick(r, horner(p.coefficients[i], lo + (hi - lo) * j / kSamples));
              }
            }
            return r;
          },
          [&](const CoefficientProfile::Tabulated& p) {
            double r = prof(0.0);
            r = pick(r, prof(T));
            for (std::size_t i = 0; i < p.times.size(); ++i) {
              if (p.times[i] > 0.0 && p.times[i] < T) r = pick(r, p.values[i]);
            }
            return r;
          },
      },
      prof.kind());
}

}  // namespace

double CoefficientProfile::sup() const {
  return extremum(*this, [](double a, double b) { return std::max(a, b); });
}

double CoefficientProfile::inf() const {
  return extremum(*this, [](double a, double b) { return std::min(a, b); });
}

CoefficientProfile parse_profile(const nlohmann::json& spec, std::optional<double> horizon) {
  if (!spec.is_object()) throw ValidationError("profile must be a JSON object");
  if (auto it = spec.find("horizon"); it != spec.end()) {
    double h = number(*it, "horizon");
    if (horizon && std::abs(*horizon - h) > slack(h)) {
      throw ValidationError("profile horizon " + std::to_string(h) + " disagrees with experiment horizon " +
                            std::to_string(*horizon));
    }
    horizon = h;
  }
  const std::string kind = [&] {
    const json& k = field(spec, "kind");
    if (!k.is_string()) throw ValidationError("field \"kind\" must be a string");
    return k.get<std::string>();
  }();

  auto check_horizon = [&](const CoefficientProfile& p) {
    if (horizon && std::abs(p.horizon() - *horizon) > slack(*horizon)) {
      throw ValidationError("last breakpoint " + std::to_string(p.horizon()) + " does not equal the horizon " +
                            std::to_string(*horizon));
    }
    return p;
  };

  if (kind == "constant") {
    if (!horizon) throw ValidationError("constant profile needs a horizon");
    return CoefficientProfile::constant(number(field(spec, "value"), "value"), *horizon);
  }
  if (kind == "piecewise_constant") {
    return check_horizon(CoefficientProfile::piecewise_constant(numbers(field(spec, "breakpoints"), "breakpoints"),
                                                                numbers(field(spec, "values"), "values")));
  }
  if (kind == "polynomial") {
    const json& c = field(spec, "coefficients");
    if (spec.contains("breakpoints")) {
      if (!c.is_array()) throw ValidationError("field \"coefficients\" must be an array of arrays");
      std::vector<std::vector<double>> pieces;
      for (const auto& piece : c) pieces.push_back(numbers(piece, "coefficients"));
      return check_horizon(
          CoefficientProfile::polynomial(numbers(spec.at("breakpoints"), "breakpoints"), std::move(pieces)));
    }
    if (!horizon) throw ValidationError("single-piece polynomial profile needs a horizon");
    return CoefficientProfile::polynomial(numbers(c, "coefficients"), *horizon);
  }
  if (kind == "tabulated") {
    return CoefficientProfile::tabulated(numbers(field(spec, "t"), "t"), numbers(field(spec, "v"), "v"), horizon);
  }
  throw ValidationError("unknown profile kind \"" + kind + "\"");
}

CoefficientProfile parse_profile(std::string_view text, std::optional<double> horizon) {
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed profile JSON: ") + e.what(), e.byte);
  }
  return parse_profile(spec, horizon);
}

nlohmann::json to_json(const CoefficientProfile& profile) {
  json out = std::visit(
      overloaded{
          [](const CoefficientProfile::Constant& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
          [](const CoefficientProfile::PiecewiseConstant& p) {
            return json{{"kind", "piecewise_constant"}, {"breakpoints", p.breakpoints}, {"values", p.values}};
          },
          [](const CoefficientProfile::Polynomial& p) {
            return json{{"kind", "polynomial"}, {"breakpoints", p.breakpoints}, {"coefficients", p.coefficients}};
          },
          [](const CoefficientProfile::Tabulated& p) {
            return json{{"kind", "tabulated"}, {"t", p.times}, {"v", p.values}};
          },
      },
      profile.kind());
  out["horizon"] = profile.horizon();
  return out;
}

}  // namespace caustica
