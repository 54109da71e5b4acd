#include <doctest.h>

#include <cmath>

#include "graphon/smooth_graphon.hpp"

using namespace graphon;

TEST_CASE("mollifier integrates to one") {
  const double total = adaptive_simpson(mollifier, -0.125, 0.125, 1e-12);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mollifier(0.125) == 0.0);
  CHECK(mollifier(-0.2) == 0.0);
  CHECK(mollifier(0.0) > 0.0);
}

TEST_CASE("psi cutoff shape") {
  for (double x = -0.25; x <= 0.25; x += 1.0 / 64) CHECK(mollifier_psi(x) == doctest::Approx(1.0).epsilon(1e-9));
  for (double x : {0.5, 0.6, -0.5, -1.0, 2.0}) CHECK(mollifier_psi(x) == 0.0);
  for (double x = 0.0; x < 0.5; x += 0.0173) {
    CHECK(mollifier_psi(x) == doctest::Approx(mollifier_psi(-x)).epsilon(1e-12));
    CHECK(mollifier_psi(x) == doctest::Approx(mollifier_psi_exact(x)).epsilon(1e-6));
    CHECK(mollifier_psi(x) >= 0.0);
    CHECK(mollifier_psi(x) <= 1.0);
  }
  // Monotone on the transition band.
  double prev = 1.0;
  for (double x = 0.25; x < 0.5; x += 0.005) {
    const double v = mollifier_psi(x);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("smooth graphon") {
  SmoothGraphonSpec spec{2, 0.6, 0.3, 0.5};
  spec.validate();
  for (double x = 0; x <= 1; x += 0.05)
    for (double y = 0; y <= 1; y += 0.05) {
      const double f = graphon_fqp(x, y, spec);
      CHECK(f == doctest::Approx(graphon_fqp(y, x, spec)));
      CHECK(f >= spec.delta * spec.q - 1e-15);
      CHECK(f <= spec.delta * spec.p + 1e-15);
    }
  CHECK(graphon_fqp(0.25, 0.25, spec) == doctest::Approx(0.5 * 0.6));
  CHECK(graphon_fqp(0.75, 0.75, spec) == doctest::Approx(0.5 * 0.6));
  CHECK(graphon_fqp(0.25, 0.75, spec) == doctest::Approx(0.5 * 0.3));
  CHECK_THROWS(SmoothGraphonSpec{2, 0.9, 0.1, 0.5}.validate());

  Rng rng(4);
  auto m = sample_graphon_matrix(spec, 10, LatentDesign::permutation, rng);
  CHECK(m.size() == 10);
  CHECK(m.values() == m.values().transpose());
}
