#include "graphon/core_model.hpp"

#include <string>

namespace graphon {

namespace {

void require_square_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": not square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) throw std::invalid_argument(std::string(what) + ": nonzero diagonal");
    for (Eigen::Index j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) throw std::invalid_argument(std::string(what) + ": not symmetric");
  }
}

void require_binary(const Eigen::MatrixXd& m, const char* what) {
  if (!((m.array() == 0.0) || (m.array() == 1.0)).all())
    throw std::invalid_argument(std::string(what) + ": entries must be 0 or 1");
}

}  // namespace

ProbabilityMatrix::ProbabilityMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require_square_symmetric(values_, "ProbabilityMatrix");
  if (!((values_.array() >= 0.0) && (values_.array() <= 1.0)).all())
    throw std::invalid_argument("ProbabilityMatrix: entries must lie in [0,1]");
}

AdjacencyMatrix::AdjacencyMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require_square_symmetric(values_, "AdjacencyMatrix");
  require_binary(values_, "AdjacencyMatrix");
}

MembershipMatrix::MembershipMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require_square_symmetric(values_, "MembershipMatrix");
  require_binary(values_, "MembershipMatrix");
}

LabelVector sample_labels(int n, int k, bool fixed_first, Rng& rng) {
  if (n < 1 || k < 1) throw std::invalid_argument("sample_labels: n and k must be positive");
  LabelVector z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[i] = rng.uniform_int(1, k);
  if (fixed_first) z[0] = 1;
  return z;
}

LabelVector sample_membership(const SbmPqPrior& prior, Rng& rng) {
  prior.validate();
  return sample_labels(prior.n, prior.k, prior.fixed_first, rng);
}

LabelVector sample_membership(const SbmPqPrior& prior, std::uint64_t seed) {
  Rng rng(seed);
  return sample_membership(prior, rng);
}

ProbabilityMatrix build_probability_matrix(const LabelVector& z, double p, double q) {
  if (!(0.0 <= q && q <= p && p <= 1.0))
    throw std::invalid_argument("build_probability_matrix: need 0 <= q <= p <= 1");
  return ProbabilityMatrix(block_matrix<double>(z, p, q));
}

AdjacencyMatrix sample_adjacency(const ProbabilityMatrix& m, Rng& rng) {
  const Eigen::Index n = m.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (rng.bernoulli(m(i, j))) a(i, j) = a(j, i) = 1.0;
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix sample_adjacency(const ProbabilityMatrix& m, std::uint64_t seed) {
  Rng rng(seed);
  return sample_adjacency(m, rng);
}

MembershipMatrix membership_matrix(const LabelVector& z) {
  return MembershipMatrix(block_matrix<double>(z, 1.0, 0.0));
}

double clustering_loss(const Eigen::MatrixXd& zhat, const MembershipMatrix& z) {
  return empirical_loss(zhat, z.values());
}

BiclusterSample sample_bicluster(const BiclusterPrior& prior, Rng& rng) {
  prior.validate();
  const int k = prior.k();
  BiclusterSample s;
  s.row_labels = sample_labels(prior.n1, k, prior.fixed_first, rng);
  s.col_labels = sample_labels(prior.n2, k, false, rng);
  s.M.resize(prior.n1, prior.n2);
  s.Y.resize(prior.n1, prior.n2);
  for (int i = 0; i < prior.n1; ++i)
    for (int j = 0; j < prior.n2; ++j)
      s.M(i, j) = s.row_labels[i] == s.col_labels[j] ? prior.lambda : 0.0;
  for (int i = 0; i < prior.n1; ++i)
    for (int j = 0; j < prior.n2; ++j) s.Y(i, j) = s.M(i, j) + rng.normal();
  return s;
}

BiclusterSample sample_bicluster(const BiclusterPrior& prior, std::uint64_t seed) {
  Rng rng(seed);
  return sample_bicluster(prior, rng);
}

}  // namespace graphon
