#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphon/estimators.hpp"
#include "graphon/rational.hpp"

namespace graphon {

constexpr int kSchemaVersion = 1;

enum class ModelKind { sbm, sparse_sbm, bicluster, smooth_graphon };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

// One point of the parameter grid. Coordinates that do not apply to the model
// are empty.
struct GridCell {
  ModelKind model = ModelKind::sbm;
  int n = 0;
  std::optional<int> n2;
  int k = 0;
  std::optional<double> p, q, rho, lambda, delta;

  std::vector<std::uint64_t> seed_coordinates() const;
  double x_coordinate(const std::string& name) const;
};

struct EstimatorSpec {
  std::string name;
  EstimatorConfig config;
  bool explicit_pq = false;  // sdp p, q given; otherwise taken from the cell
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  ModelKind model = ModelKind::sbm;
  std::vector<int> n, n2, k;
  std::vector<double> p, q, rho, rho_log_factor, lambda, delta;
  std::vector<EstimatorSpec> estimators;
  int replicates = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output;
  std::string raw_output;

  void validate() const;
  std::vector<GridCell> cells() const;
};

// Strict parse: unknown keys, keys that do not apply to the model and
// malformed values raise ConfigError.
ExperimentConfig experiment_from_json(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

struct ResultRow {
  GridCell cell;
  std::string estimator;
  double mean_loss = 0.0;
  double std_error = 0.0;
  int replicates = 0;
  int failures = 0;
  double wall_seconds = 0.0;
  std::vector<double> losses;  // per successful replicate, in replicate order
};

// Loss of one replicate: empirical_loss on graphs, mean squared error over all
// entries for the bicluster model.
double replicate_loss(ModelKind model, const Eigen::MatrixXd& mhat, const Eigen::MatrixXd& m);

std::vector<ResultRow> run_mc(const ExperimentConfig& config);

const std::vector<std::string>& result_columns();
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_raw_losses_csv(std::ostream& out, const std::vector<ResultRow>& rows);

// Writes the result CSV to `path`, timings to "<path>.timing.csv" and, if
// requested, raw losses.
void write_run_outputs(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                       const std::filesystem::path& path);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// OLS of log y on log x.
RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y);
// x named by GridCell::x_coordinate: "n", "k_over_n", "rho_k_over_n", "gap", "lambda".
RateFit rate_fit(const std::vector<ResultRow>& rows, const std::string& x_coordinate);

enum class ClusteringMethod { spectral, sdp, sdp_rounded };
ClusteringMethod parse_clustering_method(const std::string& name);
std::string to_string(ClusteringMethod method);

struct PhaseConfig {
  int schema_version = kSchemaVersion;
  int n = 100;
  int k = 2;
  double q = 0.1;
  std::vector<double> gaps;
  ClusteringMethod method = ClusteringMethod::spectral;
  int replicates = 20;
  std::uint64_t seed = 0;
  int workers = 1;
  double r = 0.5;
  SdpControls sdp;
  std::string output;

  void validate() const;
};

PhaseConfig phase_from_json(const nlohmann::json& doc);

struct PhaseRow {
  int n = 0;
  int k = 0;
  double p = 0.0;
  double q = 0.0;
  double snr = 0.0;
  bool snr_infinite = false;
  double ks_value = 0.0;
  double trivial_baseline = 0.0;
  double lowdeg_bound = 0.0;
  std::string method;
  double mean_loss = 0.0;
  double std_error = 0.0;
  int replicates = 0;
  int failures = 0;
  double wall_seconds = 0.0;
  std::vector<double> losses;
};

std::vector<PhaseRow> phase_scan(const PhaseConfig& config);
const std::vector<std::string>& phase_columns();
void write_phase_csv(std::ostream& out, const std::vector<PhaseRow>& rows);

struct BoundConfig {
  std::vector<int> n, k, D;
  std::vector<Rational> p, q;
  Rational r{1, 2};
};

BoundConfig bound_from_json(const nlohmann::json& doc);

struct BoundRow {
  int n = 0;
  int k = 0;
  int D = 0;
  Rational p, q, r;
  double snr = 0.0;
  bool snr_ok = false;
  Rational theorem_rhs;
  double usvt_rate_kn = 0.0;
  double minimax_rate = 0.0;
  double corollary_rate = 0.0;
  std::string flags;
};

std::vector<BoundRow> bound_report(const BoundConfig& config);
const std::vector<std::string>& bound_columns();
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

// Runs `count` tasks on up to `workers` threads; task i receives index i.
void parallel_for(int count, int workers, const std::function<void(int)>& task);

}  // namespace graphon
