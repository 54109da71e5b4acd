#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphon/multigraph.hpp"
#include "graphon/rational.hpp"

namespace graphon {

// coeff * lambda^lambda_power. Sums require equal powers.
struct ScaledRational {
  Rational coeff = 0;
  int lambda_power = 0;

  ScaledRational() = default;
  ScaledRational(Rational c, int power);

  ScaledRational& operator+=(const ScaledRational& other);
  ScaledRational& operator-=(const ScaledRational& other);
  ScaledRational operator-() const { return {-coeff, lambda_power}; }
  friend ScaledRational operator+(ScaledRational a, const ScaledRational& b) { return a += b; }
  friend ScaledRational operator-(ScaledRational a, const ScaledRational& b) { return a -= b; }
  friend ScaledRational operator*(const ScaledRational& a, const ScaledRational& b) {
    return {a.coeff * b.coeff, a.lambda_power + b.lambda_power};
  }
  friend ScaledRational operator*(const ScaledRational& a, const Rational& c) {
    return {a.coeff * c, a.lambda_power};
  }
  friend bool operator==(const ScaledRational& a, const ScaledRational& b) {
    return a.coeff == b.coeff && (a.coeff == 0 || a.lambda_power == b.lambda_power);
  }

  bool is_zero() const { return coeff == 0; }
  // Substitutes lambda^2; the power must be even.
  Rational at_lambda_squared(const Rational& lambda_sq) const;
  Rational at_lambda(const Rational& lambda) const;
  double at_lambda(double lambda) const;
  std::string to_string() const;
};

// Fixed-first-vertex block priors: X = lambda Z with Z_uv = 1(z_u = z_v),
// z_1 = 1 and the other labels uniform on [k]. The SBM target is x = X_{12};
// the bicluster prior uses rows 1..n1 and columns n1+1..n1+n2 as vertices, with
// target x = X_{(row 1, column 1)} and k = min(k1, k2).
class MomentOracle {
 public:
  static MomentOracle sbm(int k);
  static MomentOracle bicluster(int k1, int k2, int n1);

  int k() const { return k_; }
  Edge target() const { return target_; }
  Vertex fixed_vertex() const { return 1; }
  bool is_bicluster() const { return bicluster_; }

  // E[X^alpha] = lambda^{|alpha|} (1/k)^{|V(alpha)| - C(alpha)}.
  ScaledRational moment(const Multigraph& alpha) const;
  // E[x X^alpha] = E[X^{alpha + target}].
  ScaledRational cross_moment(const Multigraph& alpha) const;

 private:
  MomentOracle(int k, Edge target, bool bicluster) : k_(k), target_(target), bicluster_(bicluster) {}
  int k_;
  Edge target_;
  bool bicluster_;
};

// Canonical key for alpha under relabelings that fix the two target endpoints.
std::string canonical_key(const Multigraph& alpha, const Edge& target);

// kappa_alpha(x, X) by the moment recursion, memoized on canonical keys. The
// memo is safe for concurrent use.
class KappaEngine {
 public:
  explicit KappaEngine(MomentOracle oracle, bool memoize = true);

  const MomentOracle& oracle() const { return oracle_; }
  ScaledRational kappa(const Multigraph& alpha) const;
  std::size_t memo_size() const;

 private:
  ScaledRational compute(const Multigraph& alpha) const;

  MomentOracle oracle_;
  bool memoize_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, ScaledRational> memo_;
};

ScaledRational moment(const Multigraph& alpha, const MomentOracle& oracle);
ScaledRational cross_moment(const Multigraph& alpha, const MomentOracle& oracle);
ScaledRational kappa(const Multigraph& alpha, const MomentOracle& oracle);

// Finite joint law: outcome o has probability probability[o] and variable v
// takes values[o][v].
struct FiniteJointDistribution {
  std::vector<Rational> probability;
  std::vector<std::vector<Rational>> values;

  int variable_count() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
};

constexpr int kMaxCumulantOrder = 10;
constexpr std::uint64_t kMaxJointSupport = 2'000'000;

Rational joint_moment(const FiniteJointDistribution& law, const std::vector<int>& variables);

// Joint cumulant of the multiset of variables (repetitions allowed) by the
// set-partition expansion sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_B E[prod_{i in B} Y_i].
Rational joint_cumulant(const FiniteJointDistribution& law, const std::vector<int>& variables);

// Joint law of Z_e = 1(z_u = z_v) over `coordinates`, by enumerating every
// label vector on [universe] with z_1 = 1.
FiniteJointDistribution membership_distribution(const MomentOracle& oracle, int universe,
                                                const std::vector<Edge>& coordinates);

// Coefficient of kappa_alpha computed from scratch by enumeration (lambda = 1).
Rational kappa_by_enumeration(const Multigraph& alpha, const MomentOracle& oracle, int universe);

struct KappaStructureReport {
  std::uint64_t checked = 0;
  std::uint64_t zero_cases = 0;
  std::uint64_t bound_cases = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Scans every alpha on [n] with 1 <= |alpha| <= D: zero structure, the
// magnitude bound |coeff| <= (1/k)^{|V|-1} (|alpha|+1)^{|alpha|}, and
// homogeneity lambda_power = |alpha| + 1. Guard: n <= 6, D <= 4.
KappaStructureReport verify_kappa_structure(int n, int k, int D);
KappaStructureReport verify_kappa_structure(const KappaEngine& engine, int n, int D);

// Bipartite analogue over n1 x n2 multi-indices. Guard: n1 + n2 <= 6, D <= 4.
KappaStructureReport verify_kappa_structure_bicluster(int n1, int n2, int k1, int k2, int D);

struct SumKappaReport {
  Rational exact_sum;
  Rational closed_form_bound;
  Rational snr_regime_bound;  // lambda^2/k^2 + r(2-r) lambda^2 / ((1-r)^2 n)
  bool within_closed_form = false;
  bool within_snr_regime = false;
};

// lambda^2/k^2 - lambda^2/n + (lambda^2/n) sum_{d=0}^D sum_{h=0}^d
// (n D (D+1)^2 lambda^2 / k^2)^d (D k^2 / n)^h.
Rational sum_kappa_closed_form(int n, int k, int D, const Rational& lambda_sq);
Rational sum_kappa_snr_bound(int n, int k, const Rational& lambda_sq, const Rational& r);

// exact_sum over binary alpha on the C(n,2) edges with |alpha| <= D.
SumKappaReport sum_kappa(int n, int k, int D, const Rational& lambda_sq, const Rational& r);

// Gaussian path: alpha ranges over multi-indices on n1*n2 positions, weighted by 1/alpha!.
SumKappaReport sum_kappa_bicluster(int n1, int n2, int k1, int k2, int D, const Rational& lambda_sq,
                                   const Rational& r);

// sum_{1 <= |alpha| <= D, alpha binary} coeff(kappa_alpha)^2 (lambda^2)^{|alpha|+1}
// without the alpha = 0 term.
Rational sum_kappa_binary_nonempty(const KappaEngine& engine, int n, int D, const Rational& lambda_sq);

struct TheoremBound {
  Rational rhs;
  bool snr_ok = false;
  bool vacuous = false;  // rhs <= 0
};

// (p-q)^2/k - (p-q)^2 (1/k^2 + r(2-r)/((1-r)^2 n)), exact.
TheoremBound theorem_lower_bound(int n, int k, const Rational& p, const Rational& q, int D,
                                 const Rational& r);

// lambda^2/k - (lambda^2/k^2 + r(2-r) lambda^2/((1-r)^2 (n1+n2))) with k = min(k1,k2);
// snr_ok iff lambda^2 <= r/(D(D+1))^2 min(1, k^2/(n1+n2)).
TheoremBound bicluster_lower_bound(int n1, int n2, int k1, int k2, const Rational& lambda_sq, int D,
                                   const Rational& r);

// Clustering analogue: 1/k - (1/k^2 + r(2-r)/((1-r)^2 n)).
Rational clustering_lower_bound(int n, int k, const Rational& r);

struct CorollaryBound {
  double value = 0.0;
  double p = 0.0;
  double q = 0.0;
};

// Largest lower-bound rhs over eps <= q <= p <= 1-eps subject to the SNR
// condition, found by a scan over q with the optimal gap in closed form.
CorollaryBound corollary_bound(int n, int k, int D, double r, double eps);

}  // namespace graphon
