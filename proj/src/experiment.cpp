#include "graphon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "graphon/cumulants.hpp"
#include "graphon/errors.hpp"
#include "graphon/matrix_io.hpp"
#include "graphon/prior_spec.hpp"

namespace graphon {

using nlohmann::json;

namespace {

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& doc, const std::string& key, T fallback, const std::string& where) {
  return doc.contains(key) ? get<T>(doc, key, where) : fallback;
}

std::string cell_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string cell_field(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double std_error_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
}

void write_header(std::ostream& out, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

void write_fields(std::ostream& out, const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line.push_back(',');
    line += fields[i];
  }
  line.push_back('\n');
  out << line;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void parallel_for(int count, int workers, const std::function<void(int)>& task) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) task(i);
    });
  for (auto& t : pool) t.join();
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "sbm") return ModelKind::sbm;
  if (name == "sparse_sbm") return ModelKind::sparse_sbm;
  if (name == "bicluster") return ModelKind::bicluster;
  if (name == "smooth_graphon") return ModelKind::smooth_graphon;
  throw ConfigError("unknown model '" + name + "'");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sbm: return "sbm";
    case ModelKind::sparse_sbm: return "sparse_sbm";
    case ModelKind::bicluster: return "bicluster";
    case ModelKind::smooth_graphon: return "smooth_graphon";
  }
  return "unknown";
}

std::vector<std::uint64_t> GridCell::seed_coordinates() const {
  auto bits = [](const std::optional<double>& v) { return v ? double_bits(*v) : 0x7FF8DEADULL; };
  return {static_cast<std::uint64_t>(model),
          static_cast<std::uint64_t>(n),
          static_cast<std::uint64_t>(n2.value_or(0)),
          static_cast<std::uint64_t>(k),
          bits(p),
          bits(q),
          bits(rho),
          bits(lambda),
          bits(delta)};
}

double GridCell::x_coordinate(const std::string& name) const {
  if (name == "n") return n;
  if (name == "k_over_n") return static_cast<double>(k) / n;
  if (name == "rho_k_over_n") {
    if (!rho) throw std::invalid_argument("x coordinate rho_k_over_n needs rho");
    return *rho * k / n;
  }
  if (name == "gap") {
    if (!p || !q) throw std::invalid_argument("x coordinate gap needs p and q");
    return *p - *q;
  }
  if (name == "lambda") {
    if (!lambda) throw std::invalid_argument("x coordinate lambda needs lambda");
    return *lambda;
  }
  throw std::invalid_argument("unknown x coordinate '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (schema_version != kSchemaVersion)
    throw ConfigError("experiment: unsupported schema_version " + std::to_string(schema_version));
  if (replicates < 1) throw ConfigError("experiment: replicates must be at least 1");
  if (workers < 1) throw ConfigError("experiment: workers must be at least 1");
  if (estimators.empty()) throw ConfigError("experiment: no estimators");
  if (n.empty() || k.empty()) throw ConfigError("experiment: grid needs n and k");
  for (int v : n)
    if (v < 2) throw ConfigError("experiment: n must be at least 2");
  for (int v : n2)
    if (v < 1) throw ConfigError("experiment: n2 must be positive");
  for (int v : k)
    if (v < 1) throw ConfigError("experiment: k must be positive");
  const bool graph = model != ModelKind::bicluster;
  if (graph) {
    if (p.empty() || q.empty()) throw ConfigError("experiment: grid needs p and q");
    if (!n2.empty() || !lambda.empty()) throw ConfigError("experiment: n2 and lambda apply only to bicluster");
  } else {
    if (lambda.empty()) throw ConfigError("experiment: bicluster grid needs lambda");
    if (!p.empty() || !q.empty()) throw ConfigError("experiment: p and q do not apply to bicluster");
  }
  if (model == ModelKind::sparse_sbm) {
    if (rho.empty() == rho_log_factor.empty())
      throw ConfigError("experiment: sparse_sbm needs exactly one of rho, rho_log_factor");
  } else if (!rho.empty() || !rho_log_factor.empty()) {
    throw ConfigError("experiment: rho applies only to sparse_sbm");
  }
  if (model != ModelKind::smooth_graphon && !delta.empty())
    throw ConfigError("experiment: delta applies only to smooth_graphon");
  for (const auto& e : estimators) {
    const bool bicluster_est = e.config.kind == EstimatorKind::bicluster_svd;
    if (bicluster_est != (model == ModelKind::bicluster))
      throw ConfigError("experiment: estimator '" + e.name + "' does not fit model " + to_string(model));
  }
  for (const auto& cell : cells()) {
    if (cell.p && cell.q && *cell.p < *cell.q) throw ConfigError("experiment: grid contains p < q");
  }
}

std::vector<GridCell> ExperimentConfig::cells() const {
  std::vector<GridCell> out;
  auto opt_list = [](const std::vector<double>& v) {
    std::vector<std::optional<double>> o;
    for (double x : v) o.emplace_back(x);
    if (o.empty()) o.emplace_back(std::nullopt);
    return o;
  };
  std::vector<std::optional<int>> n2s;
  for (int v : n2) n2s.emplace_back(v);
  if (n2s.empty()) n2s.emplace_back(std::nullopt);
  const auto ps = opt_list(p), qs = opt_list(q), lambdas = opt_list(lambda);
  const auto deltas = model == ModelKind::smooth_graphon && delta.empty() ? opt_list({0.5}) : opt_list(delta);
  for (int nv : n)
    for (const auto& n2v : n2s)
      for (int kv : k)
        for (const auto& pv : ps)
          for (const auto& qv : qs) {
            std::vector<std::optional<double>> rhos;
            if (model == ModelKind::sparse_sbm) {
              for (double r : rho) rhos.emplace_back(r);
              for (double c : rho_log_factor) rhos.emplace_back(c * std::log(static_cast<double>(nv)) / nv);
            } else {
              rhos.emplace_back(std::nullopt);
            }
            for (const auto& rv : rhos)
              for (const auto& lv : lambdas)
                for (const auto& dv : deltas) {
                  GridCell c;
                  c.model = model;
                  c.n = nv;
                  c.n2 = model == ModelKind::bicluster ? std::optional<int>(n2v.value_or(nv)) : std::nullopt;
                  c.k = kv;
                  c.p = pv;
                  c.q = qv;
                  c.rho = rv;
                  c.lambda = lv;
                  c.delta = dv;
                  out.push_back(c);
                }
          }
  return out;
}

namespace {

const std::map<ModelKind, std::set<std::string>> kGridKeys = {
    {ModelKind::sbm, {"n", "k", "p", "q"}},
    {ModelKind::sparse_sbm, {"n", "k", "p", "q", "rho", "rho_log_factor"}},
    {ModelKind::bicluster, {"n", "n2", "k", "lambda"}},
    {ModelKind::smooth_graphon, {"n", "k", "p", "q", "delta"}},
};

EstimatorSpec estimator_from_json(const json& doc) {
  const std::string where = "estimator";
  check_keys(doc, {"name", "params"}, where);
  EstimatorSpec spec;
  spec.name = get<std::string>(doc, "name", where);
  std::map<std::string, std::string> params;
  if (doc.contains("params")) {
    const json& pj = doc.at("params");
    if (!pj.is_object()) throw ConfigError("estimator: params must be an object");
    for (const auto& [key, value] : pj.items()) {
      if (!value.is_number()) throw ConfigError("estimator: parameter '" + key + "' must be a number");
      params[key] = value.is_number_integer() ? std::to_string(value.get<long long>()) : format_double(value.get<double>());
    }
  }
  spec.explicit_pq = params.count("p") && params.count("q");
  if (parse_estimator_kind(spec.name) == EstimatorKind::sdp && !spec.explicit_pq) {
    // Filled from each grid cell at run time.
    params["p"] = "1";
    params["q"] = "0";
  }
  spec.config = make_estimator_config(spec.name, params);
  return spec;
}

}  // namespace

ExperimentConfig experiment_from_json(const json& doc) {
  const std::string where = "experiment";
  check_keys(doc, {"schema_version", "model", "grid", "estimators", "replicates", "seed", "workers", "output",
                   "raw_output"},
             where);
  ExperimentConfig c;
  c.schema_version = get<int>(doc, "schema_version", where);
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("experiment: unsupported schema_version " + std::to_string(c.schema_version));
  c.model = parse_model_kind(get<std::string>(doc, "model", where));
  const json grid = get<json>(doc, "grid", where);
  check_keys(grid, kGridKeys.at(c.model), "grid");
  c.n = get_or<std::vector<int>>(grid, "n", {}, "grid");
  c.n2 = get_or<std::vector<int>>(grid, "n2", {}, "grid");
  c.k = get_or<std::vector<int>>(grid, "k", {}, "grid");
  c.p = get_or<std::vector<double>>(grid, "p", {}, "grid");
  c.q = get_or<std::vector<double>>(grid, "q", {}, "grid");
  c.rho = get_or<std::vector<double>>(grid, "rho", {}, "grid");
  c.rho_log_factor = get_or<std::vector<double>>(grid, "rho_log_factor", {}, "grid");
  c.lambda = get_or<std::vector<double>>(grid, "lambda", {}, "grid");
  c.delta = get_or<std::vector<double>>(grid, "delta", {}, "grid");
  const json ests = get<json>(doc, "estimators", where);
  if (!ests.is_array()) throw ConfigError("experiment: estimators must be an array");
  for (const auto& e : ests) c.estimators.push_back(estimator_from_json(e));
  c.replicates = get<int>(doc, "replicates", where);
  c.seed = get<std::uint64_t>(doc, "seed", where);
  c.workers = get_or<int>(doc, "workers", 1, where);
  c.output = get_or<std::string>(doc, "output", "", where);
  c.raw_output = get_or<std::string>(doc, "raw_output", "", where);
  c.validate();
  return c;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_from_json(load_json(path));
}

double replicate_loss(ModelKind model, const Eigen::MatrixXd& mhat, const Eigen::MatrixXd& m) {
  if (model == ModelKind::bicluster) {
    if (mhat.rows() != m.rows() || mhat.cols() != m.cols()) throw std::invalid_argument("replicate_loss: shape mismatch");
    return (mhat - m).squaredNorm() / static_cast<double>(m.size());
  }
  return empirical_loss(mhat, m);
}

namespace {

PriorSpec prior_for(const GridCell& c) {
  switch (c.model) {
    case ModelKind::sbm:
      return SbmPqPrior{c.n, c.k, *c.p, *c.q, false};
    case ModelKind::sparse_sbm:
      return SparseSbmPrior{c.n, c.k, *c.rho, *c.p, *c.q, false};
    case ModelKind::bicluster:
      return BiclusterPrior{c.n, *c.n2, c.k, c.k, *c.lambda, false};
    case ModelKind::smooth_graphon:
      return SmoothGraphonPrior{c.n, SmoothGraphonSpec{c.k, *c.p, *c.q, *c.delta}, LatentDesign::uniform};
  }
  throw std::logic_error("prior_for: unhandled model");
}

EstimatorConfig config_for(const EstimatorSpec& spec, const GridCell& c) {
  EstimatorConfig cfg = spec.config;
  if (cfg.kind == EstimatorKind::sdp && !spec.explicit_pq) {
    const double scale = c.rho.value_or(1.0);
    cfg.p = scale * *c.p;
    cfg.q = scale * *c.q;
  }
  return cfg;
}

auto sort_key(const GridCell& c) {
  return std::make_tuple(static_cast<int>(c.model), c.n, c.n2.value_or(0), c.k, c.p.value_or(-1), c.q.value_or(-1),
                         c.rho.value_or(-1), c.lambda.value_or(-1), c.delta.value_or(-1));
}

}  // namespace

std::vector<ResultRow> run_mc(const ExperimentConfig& config) {
  config.validate();
  const auto cells = config.cells();
  const int reps = config.replicates;
  const std::size_t n_est = config.estimators.size();
  struct Slot {
    std::vector<double> loss;
    std::vector<bool> ok;
    std::vector<double> seconds;
  };
  std::vector<Slot> slots(cells.size() * static_cast<std::size_t>(reps));
  parallel_for(static_cast<int>(slots.size()), config.workers, [&](int task) {
    const GridCell& cell = cells[static_cast<std::size_t>(task / reps)];
    const int rep = task % reps;
    Slot& slot = slots[static_cast<std::size_t>(task)];
    slot.loss.assign(n_est, 0.0);
    slot.ok.assign(n_est, false);
    slot.seconds.assign(n_est, 0.0);
    auto coords = cell.seed_coordinates();
    coords.push_back(static_cast<std::uint64_t>(rep));
    Rng rng(derive_seed(config.seed, coords));
    PriorDraw draw;
    try {
      draw = draw_from_prior(prior_for(cell), rng);
    } catch (const std::exception&) {
      return;  // every estimator counts this replicate as failed
    }
    for (std::size_t e = 0; e < n_est; ++e) {
      const auto start = std::chrono::steady_clock::now();
      try {
        const Eigen::MatrixXd mhat = run_estimator(config_for(config.estimators[e], cell), draw.observation);
        slot.loss[e] = replicate_loss(cell.model, mhat, draw.M);
        slot.ok[e] = std::isfinite(slot.loss[e]);
      } catch (const std::exception&) {
        slot.ok[e] = false;
      }
      slot.seconds[e] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });

  std::vector<ResultRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t e = 0; e < n_est; ++e) {
      ResultRow row;
      row.cell = cells[c];
      row.estimator = config.estimators[e].name;
      for (int rep = 0; rep < reps; ++rep) {
        const Slot& s = slots[c * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)];
        if (!s.ok.empty() && s.ok[e]) row.losses.push_back(s.loss[e]);
        else ++row.failures;
        if (!s.seconds.empty()) row.wall_seconds += s.seconds[e];
      }
      row.replicates = static_cast<int>(row.losses.size());
      row.mean_loss = mean_of(row.losses);
      row.std_error = std_error_of(row.losses);
      rows.push_back(std::move(row));
    }
  std::map<std::string, std::size_t> est_order;
  for (std::size_t e = 0; e < n_est; ++e) est_order.emplace(config.estimators[e].name, e);
  std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(sort_key(a.cell), est_order[a.estimator]) <
           std::make_tuple(sort_key(b.cell), est_order[b.estimator]);
  });
  return rows;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {"model",  "n",         "n2",        "k",         "p",
                                                   "q",      "rho",       "lambda",    "delta",     "estimator",
                                                   "mean_loss", "std_error", "replicates", "failures"};
  return columns;
}

namespace {

std::vector<std::string> cell_fields(const GridCell& c) {
  return {to_string(c.model), std::to_string(c.n), cell_field(c.n2), std::to_string(c.k), cell_field(c.p),
          cell_field(c.q),    cell_field(c.rho),   cell_field(c.lambda), cell_field(c.delta)};
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  write_header(out, result_columns());
  for (const auto& r : rows) {
    auto f = cell_fields(r.cell);
    f.insert(f.end(), {r.estimator, format_double(r.mean_loss), format_double(r.std_error),
                       std::to_string(r.replicates), std::to_string(r.failures)});
    write_fields(out, f);
  }
}

void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  auto columns = std::vector<std::string>(result_columns().begin(), result_columns().begin() + 10);
  columns.push_back("wall_seconds");
  write_header(out, columns);
  for (const auto& r : rows) {
    auto f = cell_fields(r.cell);
    f.push_back(r.estimator);
    f.push_back(format_double(r.wall_seconds));
    write_fields(out, f);
  }
}

void write_raw_losses_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  auto columns = std::vector<std::string>(result_columns().begin(), result_columns().begin() + 10);
  columns.push_back("index");
  columns.push_back("loss");
  write_header(out, columns);
  for (const auto& r : rows) {
    auto f = cell_fields(r.cell);
    f.push_back(r.estimator);
    for (std::size_t i = 0; i < r.losses.size(); ++i) {
      auto g = f;
      g.push_back(std::to_string(i));
      g.push_back(format_double(r.losses[i]));
      write_fields(out, g);
    }
  }
}

void write_run_outputs(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                       const std::filesystem::path& path) {
  {
    auto out = open_output(path);
    write_results_csv(out, rows);
  }
  {
    auto out = open_output(path.string() + ".timing.csv");
    write_timing_csv(out, rows);
  }
  if (!config.raw_output.empty()) {
    auto out = open_output(config.raw_output);
    write_raw_losses_csv(out, rows);
  }
}

RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("rate_fit: size mismatch");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 distinct x values");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("rate_fit: values must be positive");
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(x[static_cast<std::size_t>(i)]);
    target(i) = std::log(y[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd resid = target - design * beta;
  const double tss = (target.array() - target.mean()).square().sum();
  RateFit fit;
  fit.intercept = beta(0);
  fit.slope = beta(1);
  fit.r_squared = tss > 0 ? 1.0 - resid.squaredNorm() / tss : 1.0;
  return fit;
}

RateFit rate_fit(const std::vector<ResultRow>& rows, const std::string& x_coordinate) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.cell.x_coordinate(x_coordinate));
    y.push_back(r.mean_loss);
  }
  return rate_fit(x, y);
}

ClusteringMethod parse_clustering_method(const std::string& name) {
  if (name == "spectral") return ClusteringMethod::spectral;
  if (name == "sdp") return ClusteringMethod::sdp;
  if (name == "sdp_rounded") return ClusteringMethod::sdp_rounded;
  throw ConfigError("unknown clustering method '" + name + "'");
}

std::string to_string(ClusteringMethod method) {
  switch (method) {
    case ClusteringMethod::spectral: return "spectral";
    case ClusteringMethod::sdp: return "sdp";
    case ClusteringMethod::sdp_rounded: return "sdp_rounded";
  }
  return "unknown";
}

void PhaseConfig::validate() const {
  if (schema_version != kSchemaVersion) throw ConfigError("phase: unsupported schema_version");
  if (n < 2 || k < 1) throw ConfigError("phase: need n >= 2 and k >= 1");
  if (!(q > 0 && q < 1)) throw ConfigError("phase: need 0 < q < 1");
  if (gaps.empty()) throw ConfigError("phase: gaps must be non-empty");
  for (double g : gaps)
    if (!(g >= 0 && q + g <= 1)) throw ConfigError("phase: every gap needs 0 <= gap and q + gap <= 1");
  if (replicates < 1 || workers < 1) throw ConfigError("phase: replicates and workers must be positive");
  if (!(r > 0 && r < 1)) throw ConfigError("phase: need 0 < r < 1");
}

PhaseConfig phase_from_json(const json& doc) {
  const std::string where = "phase";
  check_keys(doc, {"schema_version", "n", "k", "q", "gaps", "estimator", "replicates", "seed", "workers", "r",
                   "max_iterations", "tolerance", "output"},
             where);
  PhaseConfig c;
  c.schema_version = get<int>(doc, "schema_version", where);
  c.n = get<int>(doc, "n", where);
  c.k = get<int>(doc, "k", where);
  c.q = get<double>(doc, "q", where);
  c.gaps = get<std::vector<double>>(doc, "gaps", where);
  c.method = parse_clustering_method(get_or<std::string>(doc, "estimator", "spectral", where));
  c.replicates = get<int>(doc, "replicates", where);
  c.seed = get<std::uint64_t>(doc, "seed", where);
  c.workers = get_or<int>(doc, "workers", 1, where);
  c.r = get_or<double>(doc, "r", 0.5, where);
  c.sdp.max_iterations = get_or<int>(doc, "max_iterations", c.sdp.max_iterations, where);
  c.sdp.tolerance = get_or<double>(doc, "tolerance", c.sdp.tolerance, where);
  c.output = get_or<std::string>(doc, "output", "", where);
  c.validate();
  return c;
}

std::vector<PhaseRow> phase_scan(const PhaseConfig& config) {
  config.validate();
  const auto points = static_cast<int>(config.gaps.size());
  const int reps = config.replicates;
  std::vector<double> loss(static_cast<std::size_t>(points * reps), 0.0);
  std::vector<bool> ok(loss.size(), false);
  std::vector<double> seconds(loss.size(), 0.0);
  parallel_for(points * reps, config.workers, [&](int task) {
    const double gap = config.gaps[static_cast<std::size_t>(task / reps)];
    const int rep = task % reps;
    const double p = config.q + gap;
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(config.n), static_cast<std::uint64_t>(config.k),
                                      double_bits(config.q), double_bits(gap), static_cast<std::uint64_t>(rep)}));
    const auto start = std::chrono::steady_clock::now();
    try {
      const LabelVector z = sample_labels(config.n, config.k, false, rng);
      const AdjacencyMatrix a = sample_adjacency(build_probability_matrix(z, p, config.q), rng);
      const std::uint64_t cluster_seed = rng.next();
      Eigen::MatrixXd zhat;
      switch (config.method) {
        case ClusteringMethod::spectral:
          zhat = membership_matrix(spectral_clustering(a, config.k, cluster_seed)).values();
          break;
        case ClusteringMethod::sdp:
        case ClusteringMethod::sdp_rounded: {
          // At p = q the program has no preferred direction; any p' > q' with
          // the same midpoint gives the same objective.
          const double half = std::max(gap, 1e-3) / 2;
          const double mid = config.q + gap / 2;
          Eigen::MatrixXd w = sdp_community(a, mid + half, mid - half, config.sdp).Zhat;
          if (config.method == ClusteringMethod::sdp) {
            w.diagonal().setZero();
            zhat = std::move(w);
          } else {
            zhat = membership_matrix(cluster_similarity(w, config.k, cluster_seed)).values();
          }
          break;
        }
      }
      loss[static_cast<std::size_t>(task)] = clustering_loss(zhat, membership_matrix(z));
      ok[static_cast<std::size_t>(task)] = true;
    } catch (const std::exception&) {
      ok[static_cast<std::size_t>(task)] = false;
    }
    seconds[static_cast<std::size_t>(task)] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  std::vector<PhaseRow> rows;
  const Rational r_exact = parse_rational(format_double(config.r));
  for (int i = 0; i < points; ++i) {
    PhaseRow row;
    row.n = config.n;
    row.k = config.k;
    row.q = config.q;
    row.p = config.q + config.gaps[static_cast<std::size_t>(i)];
    const auto th = snr_and_thresholds<double>(config.n, config.k, row.p, row.q, 1, config.r);
    row.snr = th.snr;
    row.snr_infinite = th.snr_infinite;
    row.ks_value = th.ks_value;
    row.trivial_baseline = 1.0 / config.k;
    row.lowdeg_bound = to_double(clustering_lower_bound(config.n, config.k, r_exact));
    row.method = to_string(config.method);
    for (int rep = 0; rep < reps; ++rep) {
      const auto idx = static_cast<std::size_t>(i * reps + rep);
      if (ok[idx]) row.losses.push_back(loss[idx]);
      else ++row.failures;
      row.wall_seconds += seconds[idx];
    }
    row.replicates = static_cast<int>(row.losses.size());
    row.mean_loss = mean_of(row.losses);
    row.std_error = std_error_of(row.losses);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const PhaseRow& a, const PhaseRow& b) { return a.p < b.p; });
  return rows;
}

const std::vector<std::string>& phase_columns() {
  static const std::vector<std::string> columns = {
      "n",           "k",         "p",          "q",         "snr",        "ks_value", "trivial_baseline",
      "lowdeg_bound", "estimator", "mean_loss", "std_error", "replicates", "failures"};
  return columns;
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseRow>& rows) {
  write_header(out, phase_columns());
  for (const auto& r : rows)
    write_fields(out, {std::to_string(r.n), std::to_string(r.k), format_double(r.p), format_double(r.q),
                       r.snr_infinite ? "inf" : format_double(r.snr), format_double(r.ks_value),
                       format_double(r.trivial_baseline), format_double(r.lowdeg_bound), r.method,
                       format_double(r.mean_loss), format_double(r.std_error), std::to_string(r.replicates),
                       std::to_string(r.failures)});
}

BoundConfig bound_from_json(const json& doc) {
  const std::string where = "bound";
  check_keys(doc, {"schema_version", "n", "k", "D", "p", "q", "r"}, where);
  if (get<int>(doc, "schema_version", where) != kSchemaVersion) throw ConfigError("bound: unsupported schema_version");
  BoundConfig c;
  c.n = get<std::vector<int>>(doc, "n", where);
  c.k = get<std::vector<int>>(doc, "k", where);
  c.D = get<std::vector<int>>(doc, "D", where);
  auto rationals = [&](const char* key) {
    std::vector<Rational> out;
    for (const auto& s : get<std::vector<std::string>>(doc, key, where)) {
      try {
        out.push_back(parse_rational(s));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bound: ") + e.what());
      }
    }
    return out;
  };
  c.p = rationals("p");
  c.q = rationals("q");
  if (doc.contains("r")) {
    try {
      c.r = parse_rational(get<std::string>(doc, "r", where));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bound: ") + e.what());
    }
  }
  return c;
}

std::vector<BoundRow> bound_report(const BoundConfig& config) {
  if (config.n.empty() || config.k.empty() || config.D.empty() || config.p.empty() || config.q.empty())
    throw ConfigError("bound: every grid list must be non-empty");
  if (!(config.r > 0 && config.r < 1)) throw ConfigError("bound: need 0 < r < 1");
  std::vector<BoundRow> rows;
  for (int n : config.n)
    for (int k : config.k)
      for (int D : config.D)
        for (const auto& p : config.p)
          for (const auto& q : config.q) {
            if (p < q) continue;
            if (n < 2 || k < 1 || D < 1) throw ConfigError("bound: need n >= 2, k >= 1, D >= 1");
            if (!(q > 0 && p < 1)) throw ConfigError("bound: need 0 < q <= p < 1");
            BoundRow row;
            row.n = n;
            row.k = k;
            row.D = D;
            row.p = p;
            row.q = q;
            row.r = config.r;
            const auto th = snr_and_thresholds<Rational>(n, k, p, q, D, config.r);
            row.snr = to_double(th.snr);
            const TheoremBound tb = theorem_lower_bound(n, k, p, q, D, config.r);
            row.snr_ok = tb.snr_ok;
            row.theorem_rhs = tb.rhs;
            const double nd = n, kd = k;
            row.usvt_rate_kn = kd / nd;
            row.minimax_rate = kd * kd / (nd * nd) + std::log(kd) / nd;
            row.corollary_rate = std::min(kd / nd, 1.0 / kd) / std::pow(static_cast<double>(D), 4);
            std::vector<std::string> flags;
            if (k * k == n) flags.push_back("k_eq_sqrt_n");
            if (1.0 / kd < row.minimax_rate) flags.push_back("cannot_be_sharp");
            if (tb.vacuous) flags.push_back("vacuous");
            for (std::size_t i = 0; i < flags.size(); ++i) row.flags += (i ? ";" : "") + flags[i];
            rows.push_back(std::move(row));
          }
  return rows;
}

const std::vector<std::string>& bound_columns() {
  static const std::vector<std::string> columns = {"n",           "k",           "D",           "p",
                                                   "q",           "r",           "snr",         "snr_ok",
                                                   "theorem_rhs", "theorem_rhs_exact", "usvt_rate_kn",
                                                   "minimax_rate", "corollary_rate", "flags"};
  return columns;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
  write_header(out, bound_columns());
  for (const auto& r : rows)
    write_fields(out, {std::to_string(r.n), std::to_string(r.k), std::to_string(r.D), to_string(r.p), to_string(r.q),
                       to_string(r.r), format_double(r.snr), r.snr_ok ? "true" : "false",
                       format_double(to_double(r.theorem_rhs)), to_string(r.theorem_rhs),
                       format_double(r.usvt_rate_kn), format_double(r.minimax_rate), format_double(r.corollary_rate),
                       r.flags});
}

}  // namespace graphon
