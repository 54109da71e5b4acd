#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "graphon/core_model.hpp"
#include "graphon/cumulants.hpp"
#include "graphon/errors.hpp"
#include "oracles.hpp"

using namespace graphon;

namespace {

Multigraph mg(int n, const std::string& text) { return Multigraph::parse(n, text); }

ScaledRational sr(Rational c, int power) { return ScaledRational(std::move(c), power); }

}  // namespace

TEST_CASE("scaled rationals") {
  auto a = sr(Rational(1, 2), 2);
  a += sr(Rational(1, 3), 2);
  CHECK(a.coeff == Rational(5, 6));
  CHECK_THROWS_AS(a += sr(1, 3), std::domain_error);
  CHECK(a.at_lambda_squared(Rational(4)) == Rational(10, 3));
  CHECK_THROWS(sr(1, 3).at_lambda_squared(Rational(4)));
  CHECK(sr(2, 3).at_lambda(Rational(1, 2)) == Rational(1, 4));
  CHECK((sr(2, 1) * sr(3, 2)) == sr(6, 3));
}

TEST_CASE("moments") {
  auto o3 = MomentOracle::sbm(3);
  CHECK(moment(mg(4, "1-2:1"), o3) == sr(Rational(1, 3), 1));
  CHECK(moment(mg(4, "1-2:1 2-3:1"), o3) == sr(Rational(1, 9), 2));
  CHECK(moment(Multigraph(4), o3) == sr(1, 0));
  auto o2 = MomentOracle::sbm(2);
  CHECK(moment(mg(4, "1-2:1 3-4:1"), o2) == sr(Rational(1, 4), 2));
  CHECK(cross_moment(Multigraph(4), o2) == sr(Rational(1, 2), 1));
  CHECK(cross_moment(mg(4, "1-2:1"), o2) == sr(Rational(1, 2), 2));
  CHECK(cross_moment(mg(4, "3-4:1"), o3) == sr(Rational(1, 9), 2));

  // The closed form against direct enumeration over labelings with z_1 = 1.
  for (int k = 1; k <= 3; ++k) {
    auto o = MomentOracle::sbm(k);
    for (int d = 0; d <= 3; ++d)
      for (auto& alpha : oracle::all_multigraphs(4, d)) {
        auto m = moment(alpha, o);
        CHECK(m.lambda_power == d);
        CHECK(m.coeff == oracle::moment(alpha, k, 4));
      }
  }
}

TEST_CASE("joint cumulant oracle properties") {
  // Two independent fair coins and a shifted copy of the first.
  FiniteJointDistribution law;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      law.probability.push_back(Rational(1, 4));
      law.values.push_back({Rational(a), Rational(b), Rational(a) + Rational(5)});
    }
  CHECK(joint_cumulant(law, {0}) == Rational(1, 2));
  CHECK(joint_cumulant(law, {0, 0}) == Rational(1, 4));
  CHECK(joint_cumulant(law, {0, 0, 0}) == 0);
  CHECK(joint_cumulant(law, {0, 0, 0, 0}) == Rational(-1, 8));
  CHECK(joint_cumulant(law, {0, 1}) == 0);
  CHECK(joint_cumulant(law, {0, 0, 1}) == 0);
  CHECK(joint_cumulant(law, {0, 1, 1, 0}) == 0);
  CHECK(joint_cumulant(law, {2}) == joint_cumulant(law, {0}) + 5);
  CHECK(joint_cumulant(law, {2, 2}) == joint_cumulant(law, {0, 0}));
  CHECK(joint_cumulant(law, {2, 0, 2}) == joint_cumulant(law, {0, 0, 0}));
  CHECK(joint_cumulant(law, {0, 2}) == joint_cumulant(law, {2, 0}));

  // Bernoulli(1/3): k3 = p(1-p)(1-2p).
  FiniteJointDistribution bern{{Rational(2, 3), Rational(1, 3)}, {{Rational(0)}, {Rational(1)}}};
  CHECK(joint_cumulant(bern, {0, 0, 0}) == Rational(1, 3) * Rational(2, 3) * Rational(1, 3));
  CHECK_THROWS_AS(joint_cumulant(bern, std::vector<int>(11, 0)), GuardError);
}

TEST_CASE("kappa examples") {
  auto o2 = MomentOracle::sbm(2);
  CHECK(kappa(Multigraph(4), o2) == sr(Rational(1, 2), 1));
  CHECK(kappa(mg(4, "1-2:1"), o2) == sr(Rational(1, 4), 2));
  CHECK(kappa(mg(4, "3-4:1"), o2).is_zero());
  CHECK(kappa(mg(4, "2-3:1 3-4:1"), o2).is_zero());
  auto tri = kappa(mg(3, "1-2:1 1-3:1 2-3:1"), o2);
  CHECK(abs(tri.coeff) <= Rational(1, 4) * 64);
  CHECK(tri.lambda_power == 4);
  for (int d = 1; d <= 3; ++d)
    for (auto& alpha : enumerate_multigraphs(5, d))
      if (!is_connected(alpha)) CHECK(kappa(alpha, o2).is_zero());
}

TEST_CASE("kappa recursion matches the enumeration oracle") {
  for (int k = 2; k <= 3; ++k) {
    auto o = MomentOracle::sbm(k);
    KappaEngine engine(o);
    for (int d = 0; d <= 2; ++d)
      for (auto& alpha : oracle::all_multigraphs(4, d)) {
        auto kap = engine.kappa(alpha);
        CHECK(kap.lambda_power == d + 1);
        CHECK(kap.coeff == kappa_by_enumeration(alpha, o, 4));
      }
  }
}

TEST_CASE("memoized and direct recursion agree") {
  auto o = MomentOracle::sbm(3);
  KappaEngine memo(o, true), direct(o, false);
  for (int d = 1; d <= 3; ++d)
    for (auto& alpha : enumerate_multigraphs(5, d)) CHECK(memo.kappa(alpha) == direct.kappa(alpha));
  CHECK(direct.memo_size() == 0);
  CHECK(memo.memo_size() > 0);
}

TEST_CASE("canonical key respects the fixed endpoints") {
  const Edge target(1, 2);
  CHECK(canonical_key(mg(5, "1-3:1 3-4:2"), target) == canonical_key(mg(5, "1-5:1 5-3:2"), target));
  CHECK(canonical_key(mg(5, "1-3:1"), target) != canonical_key(mg(5, "2-3:1"), target));
  CHECK(canonical_key(mg(5, "1-3:1 2-4:1"), target) == canonical_key(mg(5, "1-4:1 2-3:1"), target));
}

TEST_CASE("kappa structure scan") {
  for (int k = 2; k <= 3; ++k) {
    auto report = verify_kappa_structure(5, k, 3);
    CHECK(report.ok());
    CHECK(report.checked > 0);
    CHECK(report.zero_cases > 0);
    CHECK(report.bound_cases > 0);
  }
  CHECK_THROWS_AS(verify_kappa_structure(7, 2, 2), GuardError);
  CHECK(verify_kappa_structure_bicluster(2, 3, 2, 2, 3).ok());
}

TEST_CASE("sum of squared cumulants") {
  auto zero = sum_kappa(5, 2, 0, Rational(1, 10), Rational(1, 2));
  CHECK(zero.exact_sum == Rational(1, 40));
  auto none = sum_kappa(5, 2, 2, Rational(0), Rational(1, 2));
  CHECK(none.exact_sum == 0);
  CHECK(none.closed_form_bound == 0);
  auto r = sum_kappa(5, 2, 2, Rational(1, 100), Rational(1, 2));
  CHECK(r.within_closed_form);
  CHECK(r.exact_sum <= r.closed_form_bound);
  // D = 1 by hand: lambda^2/k^2 + sum over single edges of coeff^2 lambda^4; only
  // edge (1,2) has a nonzero cumulant, lambda^2/4, so the sum is l^2/4 + l^4/16.
  const Rational l2(1, 10);
  CHECK(sum_kappa(5, 2, 1, l2, Rational(1, 2)).exact_sum == l2 / 4 + l2 * l2 / 16);
  CHECK(sum_kappa_snr_bound(100, 2, Rational(1), Rational(1, 2)) == Rational(1, 4) + Rational(3, 100));
}

TEST_CASE("mmse lower bound") {
  const Rational gap(1, 10);
  auto b = theorem_lower_bound(100, 2, Rational(1, 2) + gap, Rational(1, 2), 1, Rational(1, 2));
  CHECK(b.rhs == Rational(22, 100) * gap * gap);
  CHECK_FALSE(b.vacuous);
  auto flat = theorem_lower_bound(100, 2, Rational(1, 2), Rational(1, 2), 1, Rational(1, 2));
  CHECK(flat.rhs <= 0);
  CHECK(flat.vacuous);
  CHECK(flat.snr_ok);
  CHECK(theorem_lower_bound(4, 2, Rational(3, 5), Rational(1, 2), 1, Rational(1, 2)).vacuous);
  CHECK(clustering_lower_bound(100, 2, Rational(1, 2)) == Rational(22, 100));
  auto bic = bicluster_lower_bound(50, 50, 2, 2, Rational(1, 1000), 1, Rational(1, 2));
  CHECK(bic.rhs == Rational(1, 1000) * (Rational(1, 2) - Rational(1, 4) - Rational(3, 100)));
  CHECK(bic.snr_ok);
}

TEST_CASE("bicluster cumulants") {
  auto o = MomentOracle::bicluster(2, 3, 2);
  CHECK(o.k() == 2);
  CHECK(o.target() == Edge(1, 3));
  CHECK(kappa(Multigraph(5), o) == sr(Rational(1, 2), 1));
  auto rep = sum_kappa_bicluster(2, 2, 2, 2, 1, Rational(1, 100), Rational(1, 2));
  CHECK(rep.within_closed_form);
  CHECK(rep.exact_sum >= Rational(1, 400));
}

TEST_CASE("optimized lower bound") {
  auto c = corollary_bound(400, 2, 1, 0.5, 0.05);
  CHECK(c.value > 0.0);
  CHECK(c.q >= 0.05);
  CHECK(c.p <= 0.95 + 1e-12);
  auto t = snr_and_thresholds<double>(400, 2, c.p, c.q, 1, 0.5);
  CHECK(t.snr <= t.condition_bound * (1 + 1e-9));
  CHECK(corollary_bound(400, 2, 2, 0.5, 0.05).value < c.value);
}
