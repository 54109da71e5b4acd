#include "graphon/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

bool is_symmetric(const Eigen::MatrixXd& a) { return a.rows() == a.cols() && a.isApprox(a.transpose(), 0.0); }

double edge_density(const AdjacencyMatrix& a) {
  const double n = static_cast<double>(a.size());
  return n < 2 ? 0.0 : a.values().sum() / (n * (n - 1));
}

// Indices of the k largest |mu|, ties broken by index.
std::vector<Eigen::Index> top_by_magnitude(const Eigen::VectorXd& mu, int k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(mu.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(mu(a)) > std::abs(mu(b)); });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(k, 0))));
  return idx;
}

}  // namespace

Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& a, double tau) {
  if (tau < 0) throw std::invalid_argument("singular_value_threshold: tau must be non-negative");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  if (a.size() == 0) return out;
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const auto& mu = eig.eigenvalues();
    const auto& w = eig.eigenvectors();
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      if (std::abs(mu(i)) > tau) out.noalias() += mu(i) * w.col(i) * w.col(i).transpose();
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) out.noalias() += s(i) * svd.matrixU().col(i) * svd.matrixV().col(i).transpose();
  return out;
}

Eigen::MatrixXd truncated_svd(const Eigen::MatrixXd& a, int k) {
  if (k < 1) throw std::invalid_argument("truncated_svd: rank must be at least 1");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  if (a.size() == 0) return out;
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    for (Eigen::Index i : top_by_magnitude(eig.eigenvalues(), k))
      out.noalias() += eig.eigenvalues()(i) * eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose();
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = std::min<Eigen::Index>(k, svd.singularValues().size());
  for (Eigen::Index i = 0; i < r; ++i)
    out.noalias() += svd.singularValues()(i) * svd.matrixU().col(i) * svd.matrixV().col(i).transpose();
  return out;
}

Eigen::MatrixXd clip_probability(Eigen::MatrixXd m) {
  m = m.cwiseMax(0.0).cwiseMin(1.0);
  if (m.rows() == m.cols()) m.diagonal().setZero();
  return m;
}

double default_usvt_threshold(const AdjacencyMatrix& a) {
  return 2.01 * std::sqrt(static_cast<double>(a.size()) * edge_density(a));
}

Eigen::MatrixXd usvt(const AdjacencyMatrix& a, double tau, bool clip) {
  Eigen::MatrixXd m = singular_value_threshold(a.values(), tau);
  return clip ? clip_probability(std::move(m)) : m;
}

AdjacencyMatrix degree_truncate(const AdjacencyMatrix& a, double tau) {
  Eigen::MatrixXd t = a.values();
  const Eigen::VectorXd deg = a.degrees();
  for (Eigen::Index i = 0; i < deg.size(); ++i)
    if (deg(i) > tau) {
      t.row(i).setZero();
      t.col(i).setZero();
    }
  return AdjacencyMatrix(std::move(t));
}

Eigen::MatrixXd trunc_spectral(const AdjacencyMatrix& a, double tau, int k, bool clip) {
  if (!(tau > 0)) throw std::invalid_argument("trunc_spectral: tau must be positive");
  Eigen::MatrixXd m = truncated_svd(degree_truncate(a, tau).values(), k);
  return clip ? clip_probability(std::move(m)) : m;
}

Eigen::MatrixXd mean_estimator(const AdjacencyMatrix& a) {
  const Eigen::Index n = a.size();
  if (n < 2) throw std::invalid_argument("mean_estimator: need n >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, edge_density(a));
  m.diagonal().setZero();
  return m;
}

namespace {

struct BlockSums {
  Eigen::MatrixXd sums;    // S_ab over ordered pairs
  Eigen::MatrixXd counts;  // N_ab
};

BlockSums block_sums(const AdjacencyMatrix& a, const LabelVector& z, int k) {
  const Eigen::Index n = a.size();
  BlockSums b{Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k)};
  Eigen::VectorXd sizes = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) sizes(z[i] - 1) += 1;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) b.counts(x, y) = x == y ? sizes(x) * (sizes(x) - 1) : sizes(x) * sizes(y);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (a(i, j) != 0.0) b.sums(z[i] - 1, z[j] - 1) += a(i, j);
  return b;
}

void check_labels(const AdjacencyMatrix& a, const LabelVector& z, int k) {
  if (static_cast<Eigen::Index>(z.size()) != a.size()) throw std::invalid_argument("least squares: label length mismatch");
  for (int l : z)
    if (l < 1 || l > k) throw std::invalid_argument("least squares: label outside [k]");
}

}  // namespace

double least_squares_objective(const AdjacencyMatrix& a, const LabelVector& z, int k) {
  check_labels(a, z, k);
  const BlockSums b = block_sums(a, z, k);
  double sse = a.values().array().square().sum();
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (b.counts(x, y) > 0) sse -= b.sums(x, y) * b.sums(x, y) / b.counts(x, y);
  return std::max(sse, 0.0);
}

Eigen::MatrixXd block_mean_fit(const AdjacencyMatrix& a, const LabelVector& z, int k) {
  check_labels(a, z, k);
  const BlockSums b = block_sums(a, z, k);
  const double global = edge_density(a);
  Eigen::MatrixXd q(k, k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) q(x, y) = b.counts(x, y) > 0 ? b.sums(x, y) / b.counts(x, y) : global;
  const Eigen::Index n = a.size();
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? 0.0 : q(z[i] - 1, z[j] - 1);
  return m;
}

LeastSquaresFit exhaustive_least_squares(const AdjacencyMatrix& a, int k) {
  const Eigen::Index n = a.size();
  if (k < 1) throw std::invalid_argument("exhaustive_least_squares: k must be positive");
  if (std::pow(static_cast<double>(k), static_cast<double>(n)) > kLeastSquaresGuard)
    throw GuardError("exhaustive_least_squares: k^n exceeds 1e7");
  LeastSquaresFit best;
  best.objective = std::numeric_limits<double>::infinity();
  if (n == 0) return best;
  // Restricted growth strings with at most k distinct values.
  LabelVector z(static_cast<std::size_t>(n), 1);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 1);
  while (true) {
    const double obj = least_squares_objective(a, z, k);
    if (obj < best.objective) {
      best.objective = obj;
      best.zhat = z;
    }
    Eigen::Index i = n - 1;
    while (i > 0 && (z[i] == prefix_max[i - 1] + 1 || z[i] == k)) --i;
    if (i == 0) break;
    ++z[i];
    prefix_max[i] = std::max(prefix_max[i - 1], z[i]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      z[j] = 1;
      prefix_max[j] = prefix_max[i];
    }
  }
  best.Mhat = block_mean_fit(a, best.zhat, k);
  return best;
}

Eigen::MatrixXd bicluster_svd(const Eigen::MatrixXd& y, int k) {
  if (k < 1 || k > std::min(y.rows(), y.cols())) throw std::invalid_argument("bicluster_svd: need 1 <= k <= min(n1, n2)");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  return svd.matrixU().leftCols(k) * s.head(k).asDiagonal() * svd.matrixV().leftCols(k).transpose();
}

LabelVector kmeans(const Eigen::MatrixXd& points, int k, Rng& rng, int restarts, int max_iterations) {
  const Eigen::Index n = points.rows();
  if (k < 1 || n < 1) throw std::invalid_argument("kmeans: need k >= 1 and at least one point");
  LabelVector best(static_cast<std::size_t>(n), 1);
  double best_cost = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < restarts; ++restart) {
    Eigen::MatrixXd centers(k, points.cols());
    centers.row(0) = points.row(rng.uniform_int(0, static_cast<int>(n) - 1));
    Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double total = d2.sum();
      Eigen::Index pick = 0;
      if (total > 0) {
        double u = rng.uniform() * total;
        for (pick = 0; pick < n - 1; ++pick) {
          u -= d2(pick);
          if (u < 0) break;
        }
      } else {
        pick = rng.uniform_int(0, static_cast<int>(n) - 1);
      }
      centers.row(c) = points.row(pick);
      d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    LabelVector z(static_cast<std::size_t>(n), 0);
    double cost = 0;
    for (int it = 0; it < max_iterations; ++it) {
      bool changed = false;
      cost = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index arg = 0;
        const double d = (centers.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&arg);
        cost += d;
        if (z[i] != static_cast<int>(arg) + 1) {
          z[i] = static_cast<int>(arg) + 1;
          changed = true;
        }
      }
      if (!changed) break;
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
      Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(z[i] - 1) += points.row(i);
        counts(z[i] - 1) += 1;
      }
      for (int c = 0; c < k; ++c)
        if (counts(c) > 0) centers.row(c) = sums.row(c) / counts(c);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = z;
    }
  }
  return best;
}

namespace {

Eigen::MatrixXd top_eigenvectors(const Eigen::MatrixXd& m, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  // Eigenvalues ascend; take the k algebraically largest.
  return eig.eigenvectors().rightCols(std::min<Eigen::Index>(k, m.rows()));
}

}  // namespace

LabelVector spectral_clustering(const AdjacencyMatrix& a, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("spectral_clustering: k must be positive");
  Rng rng(seed);
  return kmeans(top_eigenvectors(a.values(), k), k, rng);
}

LabelVector cluster_similarity(const Eigen::MatrixXd& z, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("cluster_similarity: k must be positive");
  Rng rng(seed);
  return kmeans(top_eigenvectors(z, k), k, rng);
}

void EstimatorConfig::validate() const {
  if (tau && *tau < 0) throw ConfigError("estimator: tau must be non-negative");
  if (tau_factor <= 0) throw ConfigError("estimator: tau_factor must be positive");
  if (rank < 1) throw ConfigError("estimator: rank must be at least 1");
  if (sdp.max_iterations < 1) throw ConfigError("estimator: max_iterations must be at least 1");
  if (!(sdp.tolerance > 0)) throw ConfigError("estimator: tolerance must be positive");
  if (!(sdp.penalty > 0)) throw ConfigError("estimator: penalty must be positive");
  if (kind == EstimatorKind::sdp) {
    if (!p || !q) throw ConfigError("estimator: sdp requires p and q");
    if (!(*p > *q)) throw ConfigError("estimator: sdp requires p > q");
  }
}

EstimatorKind parse_estimator_kind(const std::string& name) {
  if (name == "usvt") return EstimatorKind::usvt;
  if (name == "trunc_spectral") return EstimatorKind::trunc_spectral;
  if (name == "mean") return EstimatorKind::mean;
  if (name == "exhaustive_ls") return EstimatorKind::exhaustive_ls;
  if (name == "bicluster_svd") return EstimatorKind::bicluster_svd;
  if (name == "sdp") return EstimatorKind::sdp;
  throw ConfigError("unknown estimator '" + name + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::usvt: return "usvt";
    case EstimatorKind::trunc_spectral: return "trunc_spectral";
    case EstimatorKind::mean: return "mean";
    case EstimatorKind::exhaustive_ls: return "exhaustive_ls";
    case EstimatorKind::bicluster_svd: return "bicluster_svd";
    case EstimatorKind::sdp: return "sdp";
  }
  return "unknown";
}

EstimatorConfig make_estimator_config(const std::string& name, const std::map<std::string, std::string>& params) {
  EstimatorConfig c;
  c.kind = parse_estimator_kind(name);
  auto number = [](const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError("estimator: bad value for '" + key + "': " + text);
    return v;
  };
  auto integer = [&](const std::string& key, const std::string& text) {
    const double v = number(key, text);
    if (v != std::floor(v)) throw ConfigError("estimator: '" + key + "' must be an integer");
    return static_cast<int>(v);
  };
  for (const auto& [key, value] : params) {
    if (key == "tau") c.tau = number(key, value);
    else if (key == "tau_factor") c.tau_factor = number(key, value);
    else if (key == "rank" || key == "k") c.rank = integer(key, value);
    else if (key == "p") c.p = number(key, value);
    else if (key == "q") c.q = number(key, value);
    else if (key == "max_iterations") c.sdp.max_iterations = integer(key, value);
    else if (key == "tolerance") c.sdp.tolerance = number(key, value);
    else if (key == "penalty") c.sdp.penalty = number(key, value);
    else throw ConfigError("estimator: unknown parameter '" + key + "'");
  }
  c.validate();
  return c;
}

Eigen::MatrixXd run_estimator(const EstimatorConfig& config, const Eigen::MatrixXd& observation) {
  config.validate();
  if (config.kind == EstimatorKind::bicluster_svd) return bicluster_svd(observation, config.rank);
  const AdjacencyMatrix a(observation);
  switch (config.kind) {
    case EstimatorKind::usvt:
      return usvt(a, config.tau ? *config.tau : default_usvt_threshold(a));
    case EstimatorKind::trunc_spectral: {
      const double tau = config.tau ? *config.tau : config.tau_factor * a.size() * edge_density(a);
      return trunc_spectral(a, std::max(tau, 1.0), config.rank);
    }
    case EstimatorKind::mean:
      return mean_estimator(a);
    case EstimatorKind::exhaustive_ls:
      return exhaustive_least_squares(a, config.rank).Mhat;
    case EstimatorKind::sdp: {
      Eigen::MatrixXd z = sdp_community(a, *config.p, *config.q, config.sdp).Zhat;
      // Map the similarity estimate back to the probability scale.
      Eigen::MatrixXd m = (*config.q + (*config.p - *config.q) * z.array()).matrix();
      return clip_probability(std::move(m));
    }
    case EstimatorKind::bicluster_svd:
      break;
  }
  throw std::logic_error("run_estimator: unhandled estimator");
}

}  // namespace graphon
