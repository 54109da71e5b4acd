#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "graphon/rational.hpp"
#include "graphon/rng.hpp"

namespace graphon {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;

// Community labels, 1-based: z[i] in {1..k} is the label of vertex i+1.
using LabelVector = std::vector<int>;

template <typename Scalar>
struct BasicSbmPrior {
  int n = 2;
  int k = 1;
  Scalar p = Scalar(0);
  Scalar q = Scalar(0);
  bool fixed_first = false;

  void validate() const {
    if (n < 2) throw std::invalid_argument("SBM prior: n must be at least 2");
    if (k < 1) throw std::invalid_argument("SBM prior: k must be at least 1");
    if (!(Scalar(0) <= q && q <= p && p <= Scalar(1)))
      throw std::invalid_argument("SBM prior: need 0 <= q <= p <= 1");
  }
};

using SbmPqPrior = BasicSbmPrior<double>;
using ExactSbmPrior = BasicSbmPrior<Rational>;

template <typename Scalar>
struct BasicBiclusterPrior {
  int n1 = 1;
  int n2 = 1;
  int k1 = 1;
  int k2 = 1;
  Scalar lambda = Scalar(0);
  bool fixed_first = false;

  int k() const { return k1 < k2 ? k1 : k2; }
  void validate() const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("bicluster prior: n1, n2 must be positive");
    if (k1 < 1 || k2 < 1) throw std::invalid_argument("bicluster prior: k1, k2 must be positive");
  }
};

using BiclusterPrior = BasicBiclusterPrior<double>;
using ExactBiclusterPrior = BasicBiclusterPrior<Rational>;

// Symmetric, zero diagonal, entries in [0,1].
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  explicit ProbabilityMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Eigen::MatrixXd values_;
};

// Symmetric 0/1 matrix with zero diagonal, stored as doubles for direct use in
// Eigen arithmetic.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
  Eigen::VectorXd degrees() const { return values_.rowwise().sum(); }

 private:
  Eigen::MatrixXd values_;
};

class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  explicit MembershipMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }

 private:
  Eigen::MatrixXd values_;
};

LabelVector sample_membership(const SbmPqPrior& prior, Rng& rng);
LabelVector sample_membership(const SbmPqPrior& prior, std::uint64_t seed);
LabelVector sample_labels(int n, int k, bool fixed_first, Rng& rng);

// M_ij = within if z_i == z_j, between otherwise; zero diagonal. Works for any
// scalar, including Rational.
template <typename Scalar>
Matrix<Scalar> block_matrix(const LabelVector& z, const Scalar& within, const Scalar& between) {
  const auto n = static_cast<Eigen::Index>(z.size());
  Matrix<Scalar> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = i == j ? Scalar(0) : (z[i] == z[j] ? within : between);
  return m;
}

ProbabilityMatrix build_probability_matrix(const LabelVector& z, double p, double q);

AdjacencyMatrix sample_adjacency(const ProbabilityMatrix& m, Rng& rng);
AdjacencyMatrix sample_adjacency(const ProbabilityMatrix& m, std::uint64_t seed);

MembershipMatrix membership_matrix(const LabelVector& z);

// (1/C(n,2)) sum_{i<j} (Mhat_ij - M_ij)^2. Exact for Rational inputs.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar empirical_loss(const Eigen::MatrixBase<DerivedA>& mhat,
                                         const Eigen::MatrixBase<DerivedB>& m) {
  using Scalar = typename DerivedA::Scalar;
  if (mhat.rows() != m.rows() || mhat.cols() != m.cols() || mhat.rows() != mhat.cols())
    throw std::invalid_argument("empirical_loss: shape mismatch");
  const Eigen::Index n = m.rows();
  if (n < 2) throw std::invalid_argument("empirical_loss: need n >= 2");
  Scalar total(0);
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      Scalar d = mhat(i, j) - m(i, j);
      total += d * d;
    }
  return total / Scalar(n * (n - 1) / 2);
}

double clustering_loss(const Eigen::MatrixXd& zhat, const MembershipMatrix& z);

template <typename Scalar>
struct SnrThresholds {
  Scalar snr;
  bool snr_infinite = false;
  Scalar condition_bound;
  bool bound_infinite = false;  // D = 0: no restriction
  bool sw_condition_holds = false;
  Scalar ks_value;
};

// snr = (p-q)^2/(q(1-p)); condition bound r/(D(D+1))^2 * min(k^2/n, 1);
// ks_value = n(p-q)^2/(k(p+(k-1)q)).
template <typename Scalar>
SnrThresholds<Scalar> snr_and_thresholds(int n, int k, const Scalar& p, const Scalar& q, int D,
                                         const Scalar& r) {
  if (n < 1 || k < 1 || D < 0) throw std::invalid_argument("snr_and_thresholds: bad n, k or D");
  SnrThresholds<Scalar> out;
  const Scalar gap = p - q;
  const Scalar noise = q * (Scalar(1) - p);
  if (gap == Scalar(0)) {
    out.snr = Scalar(0);
  } else if (noise == Scalar(0)) {
    out.snr = Scalar(0);
    out.snr_infinite = true;
  } else {
    out.snr = gap * gap / noise;
  }
  if (D == 0) {
    out.condition_bound = Scalar(0);
    out.bound_infinite = true;
  } else {
    const Scalar dd = Scalar(D) * Scalar(D + 1);
    Scalar ratio = Scalar(k) * Scalar(k) / Scalar(n);
    if (ratio > Scalar(1)) ratio = Scalar(1);
    out.condition_bound = r / (dd * dd) * ratio;
  }
  out.sw_condition_holds =
      out.bound_infinite || (!out.snr_infinite && out.snr <= out.condition_bound);
  const Scalar denom = Scalar(k) * (p + Scalar(k - 1) * q);
  out.ks_value = denom == Scalar(0) ? Scalar(0) : Scalar(n) * gap * gap / denom;
  return out;
}

struct BiclusterSample {
  LabelVector row_labels;
  LabelVector col_labels;
  Eigen::MatrixXd M;
  Eigen::MatrixXd Y;
};

BiclusterSample sample_bicluster(const BiclusterPrior& prior, Rng& rng);
BiclusterSample sample_bicluster(const BiclusterPrior& prior, std::uint64_t seed);

}  // namespace graphon
