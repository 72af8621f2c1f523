#include <cmath>
#include <sstream>

#include "caustica/errors.hpp"
#include "caustica/oracle.hpp"
#include "caustica/slit.hpp"
#include "doctest.h"
#include "support/reference.hpp"

using namespace caustica;
using doctest::Approx;

namespace {

GridState gaussian(const UniformGrid& g, double a, double s0, double tau, double hbar = 1.0) {
  GridState st{g, std::vector<complex>(g.n), 0.0};
  for (std::size_t j = 0; j < g.n; ++j) st.samples[j] = ref::slit_wave(g.x(j), a, s0, tau, hbar);
  return st;
}

double l2norm(const GridState& s) {
  double acc = 0;
  for (const auto& z : s.samples) acc += std::norm(z);
  return acc * s.grid.dx();
}

CoefficientProfile c(double v, double T) { return CoefficientProfile::constant(v, T); }

}  // namespace

TEST_CASE("free Gaussian spreading") {
  const UniformGrid g{-20, 20, 2048};
  const auto out = propagate(gaussian(g, 0.0, 1.0, 1e300), c(0, 1), c(0, 1), 0.0, 1.0, 512);
  const auto m = moments(out);
  CHECK(m.variance == Approx(1.25).epsilon(1e-4));
  CHECK(std::abs(m.center) < 1e-12);
  CHECK(m.norm == Approx(1.0).epsilon(1e-10));
  CHECK(out.t == 1.0);
}

TEST_CASE("coherent state keeps its width") {
  const UniformGrid g{-12, 12, 2048};
  const double s0 = std::sqrt(0.5);
  for (double T : {0.7, 2.0}) {
    const auto out = propagate(gaussian(g, 1.0, s0, 1e300), c(1, T), c(0, T), 0.0, T, 1024);
    CHECK(moments(out).variance == Approx(0.5).epsilon(1e-4));
  }
}

TEST_CASE("half period mirrors the packet") {
  const UniformGrid g{-12, 12, 2048};
  const auto out = propagate(gaussian(g, 1.0, 1.0, 1e300), c(1, ref::pi), c(0, ref::pi), 0.0, ref::pi, 2048);
  const auto m = moments(out);
  CHECK(m.center == Approx(-1.0).epsilon(1e-4));
  CHECK(m.variance == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("moments of a constructed slit state") {
  const UniformGrid g{-12, 14, 4096};
  const auto m = moments(gaussian(g, 1.0, 1.0, 1.0));
  CHECK(m.norm == Approx(1.0).epsilon(1e-6));
  CHECK(m.center == Approx(1.0).epsilon(1e-6));
  CHECK(m.variance == Approx(1.0).epsilon(1e-6));
  CHECK(m.mean_momentum == Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(moments(gaussian(g, 1.0, 1.0, 1e300)).mean_momentum) < 1e-12);
}

TEST_CASE("norm drift over 4096 steps") {
  const UniformGrid g{-15, 15, 2048};
  const auto in = gaussian(g, 0.5, 0.8, 2.0);
  const double n0 = l2norm(in);
  const double T = 2.0;
  const auto lam = CoefficientProfile::polynomial({1.0, -0.2, 0.05}, T);
  const auto mu = CoefficientProfile::constant(0.3, T);
  const auto out = propagate(in, lam, mu, 0.0, T, 4096);
  CHECK(std::abs(l2norm(out) - n0) <= 1e-10);
}

TEST_CASE("oracle matches the closed-form evolved Gaussian") {
  struct Case {
    double w, T, f, a, s0, p;
  };
  for (const Case k : {Case{1.0, 0.785398, 0.0, 1.0, 1.0, 0.0}, Case{1.3, 2.0, 0.5, 0.7, 0.6, -0.4},
                       Case{0.0, 1.5, 0.2, 1.0, 0.7, 0.3}}) {
    const auto lam = c(k.w * k.w, k.T), mu = c(-k.f, k.T);
    const auto pair = solve_fundamental(lam, mu);
    const auto setup = SlitSetup::with_momentum(k.a, k.s0, k.p);
    const auto closed = evolve(setup, action_coefficients(pair), caustic_report(pair).morse_index);
    const auto box = default_box(std::min(k.a, closed.center), std::max(k.a, closed.center),
                                 std::max(k.s0, closed.sigma()), 4096);
    GridState in{box, initial_state(setup).sample(box), 0.0};
    const auto out = propagate(in, lam, mu, 0.0, k.T, 2048);
    const auto m = moments(out);
    CHECK(m.center == Approx(closed.center).scale(1).epsilon(1e-3));
    CHECK(m.variance == Approx(closed.variance).epsilon(1e-3));
    CHECK(relative_l2_distance(out.samples, closed.sample(box)) < 1e-3);
  }
}

TEST_CASE("second-order convergence in time") {
  const UniformGrid g{-12, 12, 2048};
  const double T = 1.0;
  const auto in = gaussian(g, 1.0, 0.6, 1.5);
  const auto lam = c(2.0, T), mu = c(0.4, T);
  const auto fine = propagate(in, lam, mu, 0, T, 1024);
  const auto a = propagate(in, lam, mu, 0, T, 32);
  const auto b = propagate(in, lam, mu, 0, T, 64);
  const double ea = relative_l2_distance(a.samples, fine.samples);
  const double eb = relative_l2_distance(b.samples, fine.samples);
  CHECK(ea / eb == Approx(4.0).epsilon(0.25));
}

TEST_CASE("unitarity check") {
  CHECK(unitarity_check(c(0, 1), c(0, 1), 1.0) <= 1e-6);
  CHECK(unitarity_check(c(1, ref::pi / 2), c(0, ref::pi / 2), ref::pi / 2) <= 1e-6);
  UnitaritySettings small;
  small.grid = {-3, 3, 256};
  CHECK_THROWS_AS(unitarity_check(c(0, 4), c(0, 4), 4.0, small), BoundaryLeakError);
}

TEST_CASE("boundary leak and input errors") {
  const UniformGrid g{-4, 4, 512};
  const auto in = gaussian(g, 0.0, 0.5, 1e300);
  CHECK_THROWS_AS(propagate(in, c(0, 5), c(0, 5), 0, 5, 256), BoundaryLeakError);
  CHECK_THROWS_AS(propagate(in, c(0, 1), c(0, 1), 0, 1, 8), InvalidInputError);
  CHECK_THROWS_AS(propagate(gaussian(g, 3.8, 0.5, 1e300), c(0, 1), c(0, 1), 0, 1, 64), BoundaryLeakError);
  GridState bad{g, std::vector<complex>(10), 0.0};
  CHECK_THROWS_AS(propagate(bad, c(0, 1), c(0, 1), 0, 1, 64), InvalidInputError);
}

TEST_CASE("default box and edge amplitude") {
  const auto b = default_box(2.0, -1.0, 0.5, 1000);
  CHECK(b.x_min == -7.0);
  CHECK(b.x_max == 8.0);
  CHECK(b.n == 1000);
  CHECK_THROWS_AS(default_box(0, 1, 0.0), InvalidInputError);
  const auto s = gaussian(b, 0.5, 0.5, 1e300);
  CHECK(edge_amplitude(s) < 1e-12);
}

TEST_CASE("density csv") {
  const UniformGrid g{0, 1, 3};
  GridState s{g, {complex(1, 0), complex(0, 2), complex(0.5, 0.5)}, 0.0};
  std::ostringstream out;
  write_density_csv(s, out);
  CHECK(out.str() ==
        "x,density\n"
        "0.0000000000000000e+00,1.0000000000000000e+00\n"
        "5.0000000000000000e-01,4.0000000000000000e+00\n"
        "1.0000000000000000e+00,5.0000000000000000e-01\n");
}
