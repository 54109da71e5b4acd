#include <doctest.h>

#include "graphon/cumulants.hpp"
#include "graphon/errors.hpp"
#include "graphon/ldp_oracle.hpp"
#include "oracles.hpp"

using namespace graphon;

namespace {

ExactSbmPrior prior(int n, int k, const char* p, const char* q, bool fixed = true) {
  return {n, k, parse_rational(p), parse_rational(q), fixed};
}

Rational variance(const ExactSbmPrior& pr) {
  const Rational g = pr.p - pr.q, k(pr.k);
  return g * g * (1 / k - 1 / (k * k));
}

}  // namespace

TEST_CASE("bases") {
  CHECK(binary_basis(6, 2).size() == 1 + 6 + 15);
  CHECK(multi_index_basis(4, 2).size() == 15);
  CHECK(binary_basis(3, 1).monomials[1] == std::vector<int>{0});
  auto e = edge_coordinates(4);
  REQUIRE(e.size() == 6);
  CHECK(e[0] == Edge(1, 2));
  CHECK(e[5] == Edge(3, 4));
  CHECK_THROWS_AS(binary_basis(40, 4), GuardError);
}

TEST_CASE("exact projection") {
  MatrixQ g(2, 2);
  g << 2, 1, 1, 1;
  VectorQ c(2);
  c << 1, 1;
  auto r = project_exact(g, c);
  CHECK(r.corr_sq == 1);
  CHECK(r.rank == 2);

  MatrixQ s(2, 2);
  s << 1, 1, 1, 1;
  auto singular = project_exact(s, c);
  CHECK(singular.corr_sq == 1);
  CHECK(singular.rank == 1);
  CHECK(singular.consistent);
  VectorQ bad(2);
  bad << 1, 0;
  CHECK_FALSE(project_exact(s, bad).consistent);

  MatrixQ neg(2, 2);
  neg << 1, 2, 2, 1;
  CHECK_FALSE(project_exact(neg, c).psd);
}

TEST_CASE("moments of the observation") {
  auto pr = prior(4, 2, "0.7", "0.2");
  CHECK(exact_moments_sbm(pr, {}, {}) == 1);
  CHECK(exact_moments_sbm(pr, {0}, {}) == (pr.p + pr.q) / 2);
  CHECK(exact_moments_sbm(pr, {0, 3}, {0, 3}) == exact_moments_sbm(pr, {0, 3}, {}));
  CHECK(exact_moments_sbm(pr, {0}, {1}) == exact_moments_sbm(pr, {0, 1}, {}));
}

TEST_CASE("mmse examples") {
  SUBCASE("degree zero is the variance") {
    for (int k = 2; k <= 3; ++k) {
      auto pr = prior(4, k, "3/5", "1/5");
      auto r = exact_corr_and_mmse(pr, 0);
      CHECK(r.mmse == variance(pr));
    }
  }
  SUBCASE("no signal") {
    auto pr = prior(4, 2, "1/2", "1/2");
    for (int D = 0; D <= 2; ++D) CHECK(exact_corr_and_mmse(pr, D).mmse == 0);
  }
  SUBCASE("monotone in D") {
    auto pr = prior(4, 2, "0.8", "0.3");
    Rational prev = exact_corr_and_mmse(pr, 0).mmse;
    for (int D = 1; D <= 3; ++D) {
      auto r = exact_corr_and_mmse(pr, D);
      CHECK(r.psd);
      CHECK(r.mmse <= prev);
      CHECK(r.mmse >= 0);
      prev = r.mmse;
    }
  }
  SUBCASE("conditioning on the first label does not change the answer") {
    for (int D = 1; D <= 2; ++D)
      CHECK(exact_corr_and_mmse(prior(4, 2, "0.7", "0.4", true), D).mmse ==
            exact_corr_and_mmse(prior(4, 2, "0.7", "0.4", false), D).mmse);
  }
  SUBCASE("matches the floating-point projection") {
    for (int D = 1; D <= 2; ++D) {
      auto r = exact_corr_and_mmse(prior(4, 2, "0.7", "0.4"), D);
      CHECK(to_double(r.mmse) == doctest::Approx(oracle::float_mmse_sbm(4, 2, 0.7, 0.4, D)).epsilon(1e-8));
    }
    auto r3 = exact_corr_and_mmse(prior(4, 3, "0.9", "0.2"), 2);
    CHECK(to_double(r3.mmse) == doctest::Approx(oracle::float_mmse_sbm(4, 3, 0.9, 0.2, 2)).epsilon(1e-8));
  }
  SUBCASE("frozen value") {
    auto r = exact_corr_and_mmse(prior(4, 2, "0.6", "0.5"), 1);
    CHECK(r.corr_sq == Rational(599, 1980));
    CHECK(r.mmse == Rational(49, 19800));
  }
  SUBCASE("above the lower bound") {
    auto pr = prior(5, 2, "0.51", "0.5");
    auto t = theorem_lower_bound(5, 2, pr.p, pr.q, 1, Rational(3, 10));
    CHECK(exact_corr_and_mmse(pr, 1).mmse >= t.rhs);
  }
  CHECK_THROWS_AS(exact_corr_and_mmse(prior(7, 2, "0.6", "0.5"), 1), GuardError);
}

TEST_CASE("correlation bound") {
  auto flat = verify_corr_bound(prior(4, 2, "1/2", "1/2"), 1);
  CHECK(flat.excess_corr == 0);
  CHECK(flat.excess_bound == 0);
  CHECK(flat.ok);
  auto r = verify_corr_bound(prior(5, 2, "0.6", "0.5"), 1);
  CHECK(r.ok);
  CHECK(r.corr_sq <= r.kappa_bound);
  auto zero = verify_corr_bound(prior(4, 2, "0.6", "0.3"), 0);
  const Rational ex = Rational(3, 10) + Rational(3, 10) / 2;
  CHECK(zero.corr_sq == ex * ex);
  CHECK(zero.kappa_zero_sq == ex * ex);
  CHECK(zero.kappa_bound >= zero.kappa_zero_sq);
}

TEST_CASE("gaussian bicluster") {
  CHECK(gaussian_moment(0) == 1);
  CHECK(gaussian_moment(3) == 0);
  CHECK(gaussian_moment(4) == 3);
  CHECK(gaussian_moment(6) == 15);
  ExactBiclusterPrior zero{2, 2, 2, 2, Rational(0), true};
  CHECK(exact_mmse_gaussian_bicluster(zero, 1).mmse == 0);
  ExactBiclusterPrior pr{2, 2, 2, 2, Rational(1, 10), true};
  auto d0 = exact_mmse_gaussian_bicluster(pr, 0);
  CHECK(d0.mmse == Rational(1, 100) * (Rational(1, 2) - Rational(1, 4)));
  auto d1 = exact_mmse_gaussian_bicluster(pr, 1);
  CHECK(d1.mmse <= d0.mmse);
  auto t = bicluster_lower_bound(2, 2, 2, 2, pr.lambda * pr.lambda, 1, Rational(1, 2));
  REQUIRE(t.snr_ok);
  CHECK(d1.mmse >= t.rhs);
  CHECK_THROWS_AS(exact_mmse_gaussian_bicluster(ExactBiclusterPrior{4, 2, 2, 2, Rational(1), true}, 1), GuardError);
}
