#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphon/core_model.hpp"

namespace graphon {

// Sum of the singular components of A with sigma > tau. Symmetric input uses
// the eigendecomposition (sigma_i = |mu_i|), anything else a bidiagonal SVD.
Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& a, double tau);

// Best rank-k approximation (by magnitude of singular values).
Eigen::MatrixXd truncated_svd(const Eigen::MatrixXd& a, int k);

// Entrywise clip to [0,1] with the diagonal zeroed.
Eigen::MatrixXd clip_probability(Eigen::MatrixXd m);

// 2.01 sqrt(n * edge density), the default USVT threshold.
double default_usvt_threshold(const AdjacencyMatrix& a);

Eigen::MatrixXd usvt(const AdjacencyMatrix& a, double tau, bool clip = true);

// Rows and columns of vertices with degree > tau are set to zero.
AdjacencyMatrix degree_truncate(const AdjacencyMatrix& a, double tau);

Eigen::MatrixXd trunc_spectral(const AdjacencyMatrix& a, double tau, int k, bool clip = true);

Eigen::MatrixXd mean_estimator(const AdjacencyMatrix& a);

struct LeastSquaresFit {
  Eigen::MatrixXd Mhat;
  LabelVector zhat;
  double objective = 0.0;  // sum over ordered pairs i != j of (A_ij - Mhat_ij)^2
};

// Objective of the plug-in block-mean fit for a given labeling.
double least_squares_objective(const AdjacencyMatrix& a, const LabelVector& z, int k);
Eigen::MatrixXd block_mean_fit(const AdjacencyMatrix& a, const LabelVector& z, int k);

constexpr double kLeastSquaresGuard = 1e7;

// Exhaustive minimization over labelings (restricted growth strings, so each
// partition is visited once). Guard: k^n <= 1e7.
LeastSquaresFit exhaustive_least_squares(const AdjacencyMatrix& a, int k);

Eigen::MatrixXd bicluster_svd(const Eigen::MatrixXd& y, int k);

struct SdpControls {
  int max_iterations = 5000;
  double tolerance = 1e-6;
  double penalty = 1.0;
  bool adapt_penalty = true;
};

struct SdpResult {
  Eigen::MatrixXd Zhat;  // diagonal 1, entries in [0,1]
  bool converged = false;
  int iterations = 0;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
};

constexpr int kSdpMaxSize = 500;

// ADMM for max <Z, A - (p+q)/2 J> over Z PSD, Z_ii = 1, 0 <= Z_ij <= 1.
SdpResult sdp_community(const AdjacencyMatrix& a, double p, double q, const SdpControls& controls = {});

// k-means (k-means++ seeding, Lloyd iterations) on the rows of the top-k
// eigenvectors of A.
LabelVector spectral_clustering(const AdjacencyMatrix& a, int k, std::uint64_t seed);

// Hard labels from a similarity matrix such as an SDP solution.
LabelVector cluster_similarity(const Eigen::MatrixXd& z, int k, std::uint64_t seed);

LabelVector kmeans(const Eigen::MatrixXd& points, int k, Rng& rng, int restarts = 5, int max_iterations = 100);

enum class EstimatorKind { usvt, trunc_spectral, mean, exhaustive_ls, bicluster_svd, sdp };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::usvt;
  std::optional<double> tau;       // usvt / trunc_spectral threshold
  double tau_factor = 2.0;         // trunc_spectral: tau = tau_factor * n * edge density
  int rank = 2;                    // trunc_spectral, bicluster_svd, exhaustive_ls
  std::optional<double> p, q;      // sdp
  SdpControls sdp;

  void validate() const;
};

EstimatorKind parse_estimator_kind(const std::string& name);
std::string to_string(EstimatorKind kind);

// key=value pairs such as "tau=3.5", "rank=2", "p=0.7".
EstimatorConfig make_estimator_config(const std::string& name, const std::map<std::string, std::string>& params);

// Dispatches on the config. Graph estimators take an adjacency matrix; the
// bicluster estimator accepts any rectangular observation.
Eigen::MatrixXd run_estimator(const EstimatorConfig& config, const Eigen::MatrixXd& observation);

}  // namespace graphon
