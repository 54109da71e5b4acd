#include "graphon/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "graphon/core_model.hpp"
#include "graphon/errors.hpp"

namespace graphon {

ScaledRational::ScaledRational(Rational c, int power) : coeff(std::move(c)), lambda_power(power) {
  if (power < 0) throw std::invalid_argument("ScaledRational: negative lambda power");
}

ScaledRational& ScaledRational::operator+=(const ScaledRational& other) {
  if (other.lambda_power != lambda_power)
    throw std::domain_error("ScaledRational: adding lambda^" + std::to_string(lambda_power) + " and lambda^" +
                            std::to_string(other.lambda_power));
  coeff += other.coeff;
  return *this;
}

ScaledRational& ScaledRational::operator-=(const ScaledRational& other) { return *this += -other; }

Rational ScaledRational::at_lambda_squared(const Rational& lambda_sq) const {
  if (lambda_power % 2 != 0) throw std::domain_error("ScaledRational: odd power has no lambda^2 form");
  return coeff * pow(lambda_sq, static_cast<unsigned>(lambda_power / 2));
}

Rational ScaledRational::at_lambda(const Rational& lambda) const {
  return coeff * pow(lambda, static_cast<unsigned>(lambda_power));
}

double ScaledRational::at_lambda(double lambda) const {
  return to_double(coeff) * std::pow(lambda, lambda_power);
}

std::string ScaledRational::to_string() const {
  return graphon::to_string(coeff) + "*lambda^" + std::to_string(lambda_power);
}

MomentOracle MomentOracle::sbm(int k) {
  if (k < 1) throw std::invalid_argument("MomentOracle: k must be positive");
  return MomentOracle(k, Edge(1, 2), false);
}

MomentOracle MomentOracle::bicluster(int k1, int k2, int n1) {
  if (k1 < 1 || k2 < 1 || n1 < 1) throw std::invalid_argument("MomentOracle: bad bicluster parameters");
  return MomentOracle(std::min(k1, k2), Edge(1, n1 + 1), true);
}

ScaledRational MomentOracle::moment(const Multigraph& alpha) const {
  const int exponent = static_cast<int>(vertex_support(alpha).size()) - component_count(alpha);
  return {Rational(1) / pow(Rational(k_), static_cast<unsigned>(exponent)), alpha.size()};
}

ScaledRational MomentOracle::cross_moment(const Multigraph& alpha) const {
  Multigraph extended(std::max(alpha.universe(), target_.v));
  for (const auto& [e, m] : alpha.edges()) extended.add_edge(e, m);
  extended.add_edge(target_);
  return moment(extended);
}

ScaledRational moment(const Multigraph& alpha, const MomentOracle& oracle) { return oracle.moment(alpha); }
ScaledRational cross_moment(const Multigraph& alpha, const MomentOracle& oracle) {
  return oracle.cross_moment(alpha);
}

namespace {

constexpr int kMaxPermutedVertices = 7;

std::string encode(std::vector<std::array<int, 3>>& edges) {
  std::sort(edges.begin(), edges.end());
  std::string out;
  for (const auto& [u, v, m] : edges) out += fmt::format("{}-{}:{} ", u, v, m);
  return out;
}

}  // namespace

std::string canonical_key(const Multigraph& alpha, const Edge& target) {
  std::vector<Vertex> others;
  for (Vertex v : vertex_support(alpha))
    if (v != target.u && v != target.v) others.push_back(v);
  std::map<Vertex, int> label{{target.u, 1}, {target.v, 2}};
  auto relabeled = [&]() {
    std::vector<std::array<int, 3>> edges;
    for (const auto& [e, m] : alpha.edges()) {
      int a = label.at(e.u), b = label.at(e.v);
      edges.push_back({std::min(a, b), std::max(a, b), m});
    }
    return encode(edges);
  };
  if (others.size() > kMaxPermutedVertices) {
    for (std::size_t i = 0; i < others.size(); ++i) label[others[i]] = static_cast<int>(i) + 3;
    return relabeled();
  }
  std::vector<int> perm(others.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i) + 3;
  std::string best;
  bool first = true;
  do {
    for (std::size_t i = 0; i < others.size(); ++i) label[others[i]] = perm[i];
    std::string key = relabeled();
    if (first || key < best) {
      best = std::move(key);
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

KappaEngine::KappaEngine(MomentOracle oracle, bool memoize) : oracle_(oracle), memoize_(memoize) {}

std::size_t KappaEngine::memo_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

ScaledRational KappaEngine::kappa(const Multigraph& alpha) const {
  if (!memoize_) return compute(alpha);
  const std::string key = canonical_key(alpha, oracle_.target());
  {
    std::shared_lock lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  ScaledRational value = compute(alpha);
  std::unique_lock lock(mutex_);
  return memo_.try_emplace(key, std::move(value)).first->second;
}

ScaledRational KappaEngine::compute(const Multigraph& alpha) const {
  ScaledRational acc = oracle_.cross_moment(alpha);
  if (alpha.empty()) return acc;
  for_each_sub_multigraph(alpha, [&](const Multigraph& beta, const Integer& weight) {
    if (beta.size() == alpha.size()) return;
    acc -= kappa(beta) * oracle_.moment(alpha - beta) * Rational(weight);
  });
  return acc;
}

ScaledRational kappa(const Multigraph& alpha, const MomentOracle& oracle) {
  return KappaEngine(oracle).kappa(alpha);
}

namespace {

std::string describe(const Multigraph& alpha) { return "{" + alpha.to_string() + "}"; }

Rational magnitude_bound(const Multigraph& alpha, int k) {
  const auto vertices = static_cast<unsigned>(vertex_support(alpha).size());
  return pow(Rational(alpha.size() + 1), static_cast<unsigned>(alpha.size())) /
         pow(Rational(k), vertices - 1);
}

void check_one(const KappaEngine& engine, const Multigraph& alpha, KappaStructureReport& report) {
  const MomentOracle& oracle = engine.oracle();
  const ScaledRational value = engine.kappa(alpha);
  ++report.checked;
  if (value.lambda_power != alpha.size() + 1)
    report.violations.push_back("homogeneity " + describe(alpha) + ": power " + std::to_string(value.lambda_power));
  const bool connected = is_connected(alpha);
  const bool has_fixed = contains_vertex(alpha, oracle.target().u);
  const bool has_other = contains_vertex(alpha, oracle.target().v);
  if (!connected || !has_other || !has_fixed) {
    ++report.zero_cases;
    if (!value.is_zero())
      report.violations.push_back("zero case " + describe(alpha) + ": kappa = " + value.to_string());
    return;
  }
  ++report.bound_cases;
  if (abs(value.coeff) > magnitude_bound(alpha, oracle.k()))
    report.violations.push_back("bound " + describe(alpha) + ": |" + to_string(value.coeff) + "| > " +
                                to_string(magnitude_bound(alpha, oracle.k())));
}

}  // namespace

KappaStructureReport verify_kappa_structure(const KappaEngine& engine, int n, int D) {
  if (n > 6 || D > 4) throw GuardError("verify_kappa_structure: guard is n <= 6, D <= 4");
  KappaStructureReport report;
  for (int d = 1; d <= D; ++d)
    for (const auto& alpha : enumerate_multigraphs(n, d)) check_one(engine, alpha, report);
  return report;
}

KappaStructureReport verify_kappa_structure(int n, int k, int D) {
  KappaEngine engine(MomentOracle::sbm(k));
  return verify_kappa_structure(engine, n, D);
}

namespace {

// Visits every multiset of size d over `slots` positions as a count vector.
template <typename Visit>
void for_each_count_vector(int slots, int d, Visit&& visit) {
  std::vector<int> counts(static_cast<std::size_t>(slots), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == slots - 1) {
      counts[pos] = left;
      visit(counts);
      counts[pos] = 0;
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[pos] = c;
      rec(pos + 1, left - c);
    }
    counts[pos] = 0;
  };
  if (slots == 0) {
    if (d == 0) visit(counts);
    return;
  }
  rec(0, d);
}

}  // namespace

KappaStructureReport verify_kappa_structure_bicluster(int n1, int n2, int k1, int k2, int D) {
  if (n1 + n2 > 6 || D > 4) throw GuardError("verify_kappa_structure_bicluster: guard is n1 + n2 <= 6, D <= 4");
  KappaEngine engine(MomentOracle::bicluster(k1, k2, n1));
  KappaStructureReport report;
  for (int d = 1; d <= D; ++d)
    for_each_count_vector(n1 * n2, d, [&](const std::vector<int>& counts) {
      Multigraph alpha(n1 + n2);
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) alpha.add_edge(i + 1, n1 + j + 1, counts[i * n2 + j]);
      check_one(engine, alpha, report);
    });
  return report;
}

Rational sum_kappa_closed_form(int n, int k, int D, const Rational& lambda_sq) {
  const Rational kk = Rational(k) * k;
  const Rational a = Rational(n) * D * (D + 1) * (D + 1) * lambda_sq / kk;
  const Rational b = Rational(D) * kk / n;
  Rational total = 0;
  for (int d = 0; d <= D; ++d)
    for (int h = 0; h <= d; ++h) total += pow(a, static_cast<unsigned>(d)) * pow(b, static_cast<unsigned>(h));
  return lambda_sq / kk - lambda_sq / n + lambda_sq / n * total;
}

Rational sum_kappa_snr_bound(int n, int k, const Rational& lambda_sq, const Rational& r) {
  const Rational one_minus = Rational(1) - r;
  return lambda_sq / (Rational(k) * k) + r * (Rational(2) - r) * lambda_sq / (one_minus * one_minus * n);
}

namespace {

std::vector<Edge> complete_edge_list(int n) {
  std::vector<Edge> out;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) out.emplace_back(u, v);
  return out;
}

constexpr std::uint64_t kMaxBinaryMonomials = 2'000'000;

template <typename Visit>
void for_each_subset(int size, int max_card, Visit&& visit) {
  std::vector<int> chosen;
  std::function<void(int)> rec = [&](int start) {
    visit(chosen);
    if (static_cast<int>(chosen.size()) == max_card) return;
    for (int i = start; i < size; ++i) {
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

}  // namespace

Rational sum_kappa_binary_nonempty(const KappaEngine& engine, int n, int D, const Rational& lambda_sq) {
  const auto edges = complete_edge_list(n);
  std::uint64_t count = 0;
  for (int d = 0; d <= D; ++d) {
    count += binomial(static_cast<unsigned>(edges.size()), static_cast<unsigned>(d)).convert_to<std::uint64_t>();
    if (count > kMaxBinaryMonomials) throw GuardError("sum_kappa: too many binary monomials");
  }
  Rational total = 0;
  for_each_subset(static_cast<int>(edges.size()), D, [&](const std::vector<int>& chosen) {
    if (chosen.empty()) return;
    Multigraph alpha(n);
    for (int i : chosen) alpha.add_edge(edges[i]);
    const ScaledRational value = engine.kappa(alpha);
    if (value.is_zero()) return;
    total += (value * value).at_lambda_squared(lambda_sq);
  });
  return total;
}

SumKappaReport sum_kappa(int n, int k, int D, const Rational& lambda_sq, const Rational& r) {
  if (n < 2 || k < 1 || D < 0) throw std::invalid_argument("sum_kappa: bad arguments");
  KappaEngine engine(MomentOracle::sbm(k));
  SumKappaReport report;
  const ScaledRational k0 = engine.kappa(Multigraph(n));
  report.exact_sum = (k0 * k0).at_lambda_squared(lambda_sq) + sum_kappa_binary_nonempty(engine, n, D, lambda_sq);
  report.closed_form_bound = sum_kappa_closed_form(n, k, D, lambda_sq);
  report.snr_regime_bound = sum_kappa_snr_bound(n, k, lambda_sq, r);
  report.within_closed_form = report.exact_sum <= report.closed_form_bound;
  report.within_snr_regime = report.exact_sum <= report.snr_regime_bound;
  return report;
}

SumKappaReport sum_kappa_bicluster(int n1, int n2, int k1, int k2, int D, const Rational& lambda_sq,
                                   const Rational& r) {
  if (n1 * n2 > 16 || D > 4) throw GuardError("sum_kappa_bicluster: guard is n1*n2 <= 16, D <= 4");
  KappaEngine engine(MomentOracle::bicluster(k1, k2, n1));
  const int k = std::min(k1, k2);
  SumKappaReport report;
  Rational total = 0;
  for (int d = 0; d <= D; ++d)
    for_each_count_vector(n1 * n2, d, [&](const std::vector<int>& counts) {
      Multigraph alpha(n1 + n2);
      Integer factorial = 1;
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          const int c = counts[i * n2 + j];
          alpha.add_edge(i + 1, n1 + j + 1, c);
          for (int f = 2; f <= c; ++f) factorial *= f;
        }
      const ScaledRational value = engine.kappa(alpha);
      if (!value.is_zero()) total += (value * value).at_lambda_squared(lambda_sq) / Rational(factorial);
    });
  report.exact_sum = total;
  report.closed_form_bound = sum_kappa_closed_form(n1 + n2, k, D, lambda_sq);
  report.snr_regime_bound = sum_kappa_snr_bound(n1 + n2, k, lambda_sq, r);
  report.within_closed_form = report.exact_sum <= report.closed_form_bound;
  report.within_snr_regime = report.exact_sum <= report.snr_regime_bound;
  return report;
}

namespace {

Rational slack_term(const Rational& r, const Rational& size) {
  const Rational one_minus = Rational(1) - r;
  return r * (Rational(2) - r) / (one_minus * one_minus * size);
}

}  // namespace

TheoremBound theorem_lower_bound(int n, int k, const Rational& p, const Rational& q, int D, const Rational& r) {
  if (!(Rational(0) < q && q <= p && p < Rational(1)))
    throw std::invalid_argument("theorem_lower_bound: need 0 < q <= p < 1");
  if (!(Rational(0) < r && r < Rational(1))) throw std::invalid_argument("theorem_lower_bound: need 0 < r < 1");
  const Rational gap_sq = (p - q) * (p - q);
  const Rational kk = Rational(k) * k;
  TheoremBound out;
  out.rhs = gap_sq / k - gap_sq * (Rational(1) / kk + slack_term(r, Rational(n)));
  out.snr_ok = snr_and_thresholds<Rational>(n, k, p, q, D, r).sw_condition_holds;
  out.vacuous = out.rhs <= 0;
  return out;
}

TheoremBound bicluster_lower_bound(int n1, int n2, int k1, int k2, const Rational& lambda_sq, int D,
                                   const Rational& r) {
  if (lambda_sq < 0) throw std::invalid_argument("bicluster_lower_bound: negative lambda^2");
  if (!(Rational(0) < r && r < Rational(1))) throw std::invalid_argument("bicluster_lower_bound: need 0 < r < 1");
  const int k = std::min(k1, k2);
  const Rational size(n1 + n2);
  const Rational kk = Rational(k) * k;
  TheoremBound out;
  out.rhs = lambda_sq / k - (lambda_sq / kk + lambda_sq * slack_term(r, size));
  if (D == 0) {
    out.snr_ok = true;
  } else {
    const Rational dd = Rational(D) * (D + 1);
    out.snr_ok = lambda_sq <= r / (dd * dd) * std::min(Rational(1), kk / size);
  }
  out.vacuous = out.rhs <= 0;
  return out;
}

Rational clustering_lower_bound(int n, int k, const Rational& r) {
  return Rational(1) / k - (Rational(1) / (Rational(k) * k) + slack_term(r, Rational(n)));
}

CorollaryBound corollary_bound(int n, int k, int D, double r, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("corollary_bound: need 0 < eps < 1/2");
  const double factor = 1.0 / k - 1.0 / (static_cast<double>(k) * k) -
                        r * (2.0 - r) / ((1.0 - r) * (1.0 - r) * n);
  CorollaryBound best{0.0, eps, eps};
  if (factor <= 0.0) return best;
  const double bound = D == 0 ? std::numeric_limits<double>::infinity()
                              : r / std::pow(D * (D + 1.0), 2) * std::min(static_cast<double>(k) * k / n, 1.0);
  auto gap_for = [&](double q) {
    double t = 1.0 - eps - q;
    if (std::isfinite(bound)) {
      const double bq = bound * q;
      t = std::min(t, 0.5 * (-bq + std::sqrt(bq * bq + 4.0 * bq * (1.0 - q))));
    }
    return std::max(t, 0.0);
  };
  auto consider = [&](double q) {
    const double t = gap_for(q);
    const double v = factor * t * t;
    if (v > best.value) best = {v, q + t, q};
  };
  constexpr int kSteps = 20000;
  for (int i = 0; i <= kSteps; ++i) consider(eps + (1.0 - 2.0 * eps) * i / kSteps);
  // Golden-section refinement around the best grid point.
  const double h = (1.0 - 2.0 * eps) / kSteps;
  double lo = std::max(eps, best.q - h), hi = std::min(1.0 - eps, best.q + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (gap_for(a) > gap_for(b)) hi = b;
    else lo = a;
  }
  consider(0.5 * (lo + hi));
  return best;
}

}  // namespace graphon
