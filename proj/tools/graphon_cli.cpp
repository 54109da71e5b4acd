#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphon/core_model.hpp"
#include "graphon/cumulants.hpp"
#include "graphon/errors.hpp"
#include "graphon/estimators.hpp"
#include "graphon/experiment.hpp"
#include "graphon/ldp_oracle.hpp"
#include "graphon/matrix_io.hpp"
#include "graphon/multigraph.hpp"
#include "graphon/prior_spec.hpp"

namespace {

using namespace graphon;

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int workers = 0;
};

// Writes to the --out path, or stdout when none was given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--" + name + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  for (const auto& kv : split(text, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--params: expected key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

void cmd_sample(const Globals& g, const std::string& truth_out, const std::string& labels_out) {
  if (g.config.empty()) throw ConfigError("sample: --config <prior.json> is required");
  const PriorSpec prior = prior_from_json(load_json(g.config));
  Rng rng(g.seed);
  const PriorDraw draw = draw_from_prior(prior, rng);
  Output out(g.out);
  write_matrix_csv(out.stream(), draw.observation);
  if (!truth_out.empty()) write_matrix_csv(truth_out, draw.M);
  if (!labels_out.empty()) {
    std::ofstream f(labels_out, std::ios::binary);
    f << "label\n";
    for (int z : draw.labels) f << z << '\n';
  }
}

void cmd_estimate(const Globals& g, const std::string& estimator, const std::string& params, const std::string& in) {
  const EstimatorConfig cfg = make_estimator_config(estimator, parse_params(params));
  const Eigen::MatrixXd observation = read_matrix_csv(in);
  Output out(g.out);
  write_matrix_csv(out.stream(), run_estimator(cfg, observation));
}

void cmd_mc_rate(const Globals& g, const std::string& x) {
  if (g.config.empty()) throw ConfigError("mc-rate: --config is required");
  ExperimentConfig cfg = load_experiment_config(g.config);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.workers > 0) cfg.workers = g.workers;
  const std::string path = g.out.empty() ? cfg.output : g.out;
  const auto rows = run_mc(cfg);
  if (path.empty()) {
    write_results_csv(std::cout, rows);
  } else {
    write_run_outputs(cfg, rows, path);
  }
  std::map<std::string, std::vector<ResultRow>> by_estimator;
  for (const auto& r : rows) by_estimator[r.estimator].push_back(r);
  for (const auto& [name, subset] : by_estimator) {
    try {
      const RateFit fit = rate_fit(subset, x);
      std::cerr << "fit " << name << " vs " << x << ": slope=" << format_double(fit.slope)
                << " intercept=" << format_double(fit.intercept) << " r2=" << format_double(fit.r_squared) << '\n';
    } catch (const std::invalid_argument& e) {
      std::cerr << "fit " << name << ": skipped (" << e.what() << ")\n";
    }
  }
}

void cmd_phase(const Globals& g, PhaseConfig flags, const std::string& gaps, const std::string& method) {
  PhaseConfig cfg;
  if (!g.config.empty()) {
    cfg = phase_from_json(load_json(g.config));
  } else {
    cfg = flags;
    for (const auto& s : split(gaps, ',')) cfg.gaps.push_back(std::stod(s));
    cfg.method = parse_clustering_method(method);
    cfg.validate();
  }
  if (g.seed_set) cfg.seed = g.seed;
  if (g.workers > 0) cfg.workers = g.workers;
  const auto rows = phase_scan(cfg);
  Output out(g.out.empty() ? cfg.output : g.out);
  write_phase_csv(out.stream(), rows);
}

void cmd_cumulants_dump(const Globals& g, int n, int k, int dmax) {
  if (n > 6 || dmax > 4) throw GuardError("cumulants dump: guard is n <= 6, dmax <= 4");
  KappaEngine engine(MomentOracle::sbm(k));
  Output out(g.out);
  auto& os = out.stream();
  os << "alpha,|alpha|,|V|,coeff_num,coeff_den,lambda_power\n";
  for (int d = 0; d <= dmax; ++d)
    for (const auto& alpha : enumerate_multigraphs(n, d)) {
      const ScaledRational v = engine.kappa(alpha);
      os << alpha.to_string() << ',' << alpha.size() << ',' << vertex_support(alpha).size() << ','
         << numerator(v.coeff) << ',' << denominator(v.coeff) << ',' << v.lambda_power << '\n';
    }
}

void cmd_cumulants_verify(int n, int k, int D) {
  const auto report = verify_kappa_structure(n, k, D);
  std::cout << "checked=" << report.checked << " zero_cases=" << report.zero_cases
            << " bound_cases=" << report.bound_cases << " violations=" << report.violations.size() << '\n';
  for (const auto& v : report.violations) std::cout << v << '\n';
  if (!report.ok()) throw std::runtime_error("kappa structure violations found");
}

void cmd_cumulants_sum(int n, int k, int D, const std::string& lambda_sq, const std::string& r) {
  const auto rep = sum_kappa(n, k, D, rational_arg("lambda-sq", lambda_sq), rational_arg("r", r));
  std::cout << "exact_sum,closed_form_bound,snr_regime_bound,within_closed_form,within_snr_regime\n"
            << to_string(rep.exact_sum) << ',' << to_string(rep.closed_form_bound) << ','
            << to_string(rep.snr_regime_bound) << ',' << (rep.within_closed_form ? "true" : "false") << ','
            << (rep.within_snr_regime ? "true" : "false") << '\n';
}

void cmd_bound(const Globals& g, const std::string& n, const std::string& k, const std::string& D,
               const std::string& p, const std::string& q, const std::string& r) {
  BoundConfig cfg;
  if (!g.config.empty()) {
    cfg = bound_from_json(load_json(g.config));
  } else {
    for (const auto& s : split(n, ',')) cfg.n.push_back(std::stoi(s));
    for (const auto& s : split(k, ',')) cfg.k.push_back(std::stoi(s));
    for (const auto& s : split(D, ',')) cfg.D.push_back(std::stoi(s));
    for (const auto& s : split(p, ',')) cfg.p.push_back(rational_arg("p", s));
    for (const auto& s : split(q, ',')) cfg.q.push_back(rational_arg("q", s));
    cfg.r = rational_arg("r", r);
  }
  Output out(g.out);
  write_bound_csv(out.stream(), bound_report(cfg));
}

void cmd_oracle_mmse(const Globals& g, int n, int k, const std::string& p, const std::string& q, int D,
                     const std::string& r, bool header) {
  ExactSbmPrior prior{n, k, rational_arg("p", p), rational_arg("q", q), true};
  try {
    prior.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const ExactProjection proj = exact_corr_and_mmse(prior, D);
  const Rational rr = rational_arg("r", r);
  std::string rhs = "", snr_ok = "";
  if (prior.q > 0 && prior.p < 1) {
    const TheoremBound tb = theorem_lower_bound(n, k, prior.p, prior.q, D, rr);
    rhs = to_string(tb.rhs);
    snr_ok = tb.snr_ok ? "true" : "false";
  }
  Output out(g.out);
  auto& os = out.stream();
  if (header) os << "n,k,p,q,D,corr_sq,mmse,theorem_rhs,snr_ok\n";
  os << n << ',' << k << ',' << to_string(prior.p) << ',' << to_string(prior.q) << ',' << D << ','
     << to_string(proj.corr_sq) << ',' << to_string(proj.mmse) << ',' << rhs << ',' << snr_ok << '\n';
}

void cmd_oracle_bicluster(const Globals& g, int n1, int n2, int k1, int k2, const std::string& lambda, int D,
                          const std::string& r, bool header) {
  ExactBiclusterPrior prior{n1, n2, k1, k2, rational_arg("lambda", lambda), true};
  const ExactProjection proj = exact_mmse_gaussian_bicluster(prior, D);
  const TheoremBound tb = bicluster_lower_bound(n1, n2, k1, k2, prior.lambda * prior.lambda, D, rational_arg("r", r));
  Output out(g.out);
  auto& os = out.stream();
  if (header) os << "n1,n2,k1,k2,lambda,D,corr_sq,mmse,theorem_rhs,snr_ok\n";
  os << n1 << ',' << n2 << ',' << k1 << ',' << k2 << ',' << to_string(prior.lambda) << ',' << D << ','
     << to_string(proj.corr_sq) << ',' << to_string(proj.mmse) << ',' << to_string(tb.rhs) << ','
     << (tb.snr_ok ? "true" : "false") << '\n';
}

void cmd_enumerate(const Globals& g, int n, int d, const std::string& required) {
  std::vector<Vertex> req;
  for (const auto& s : split(required, ',')) req.push_back(std::stoi(s));
  Output out(g.out);
  for (const auto& alpha : enumerate_connected(n, d, req)) out.stream() << alpha.to_string() << '\n';
}

void cmd_enumerate_lemma(const Globals& g, int nmax, int dmax) {
  Output out(g.out);
  auto& os = out.stream();
  os << "n,d,h,actual,bound,ok\n";
  for (int n = 2; n <= nmax; ++n)
    for (int d = 1; d <= dmax; ++d)
      for (int h = 0; h <= d - 1; ++h) {
        const auto rep = verify_counting_lemma(n, d, h);
        os << n << ',' << d << ',' << h << ',' << rep.actual << ',' << rep.bound << ',' << (rep.ok ? "true" : "false")
           << '\n';
      }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphon estimation: low-degree hardness oracles and estimators"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON config document");
  auto* seed_opt = app.add_option("--seed", g.seed, "Base RNG seed");
  app.add_option("--out", g.out, "Output path (stdout if omitted)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* sample = app.add_subcommand("sample", "Draw an observation from a prior (--config prior.json)");
  std::string truth_out, labels_out;
  sample->add_option("--truth-out", truth_out, "Also write the mean matrix M");
  sample->add_option("--labels-out", labels_out, "Also write the labels");

  auto* estimate = app.add_subcommand("estimate", "Run an estimator on a CSV matrix");
  std::string est_name, est_params, est_in;
  estimate->add_option("--estimator", est_name, "usvt | trunc_spectral | mean | exhaustive_ls | bicluster_svd | sdp")
      ->required();
  estimate->add_option("--params", est_params, "Comma-separated key=value parameters");
  estimate->add_option("--in", est_in, "Input matrix CSV")->required();

  auto* mc = app.add_subcommand("mc-rate", "Monte Carlo rate experiment (--config experiment.json)");
  std::string mc_x = "n";
  mc->add_option("--x", mc_x, "Regression coordinate: n | k_over_n | rho_k_over_n | gap | lambda");

  auto* phase = app.add_subcommand("phase", "Clustering phase scan over p - q at fixed q");
  PhaseConfig phase_flags;
  std::string phase_gaps = "0", phase_method = "spectral";
  phase->add_option("--n", phase_flags.n);
  phase->add_option("--k", phase_flags.k);
  phase->add_option("--q", phase_flags.q);
  phase->add_option("--gaps", phase_gaps, "Comma-separated p - q values");
  phase->add_option("--estimator", phase_method, "spectral | sdp | sdp_rounded");
  phase->add_option("--replicates", phase_flags.replicates);
  phase->add_option("--r", phase_flags.r);

  auto* cumulants = app.add_subcommand("cumulants", "Exact joint cumulants kappa_alpha");
  cumulants->require_subcommand(1);
  int cn = 4, ck = 2, cd = 2;
  std::string lambda_sq = "1/100", cr = "1/2";
  auto* dump = cumulants->add_subcommand("dump", "CSV table of kappa over all alpha");
  dump->add_option("--n", cn)->required();
  dump->add_option("--k", ck)->required();
  dump->add_option("--dmax", cd)->required();
  auto* verify = cumulants->add_subcommand("verify", "Zero-structure and magnitude checks");
  verify->add_option("--n", cn)->required();
  verify->add_option("--k", ck)->required();
  verify->add_option("--D", cd)->required();
  auto* sum = cumulants->add_subcommand("sum", "Sum of squared cumulants against its bounds");
  sum->add_option("--n", cn)->required();
  sum->add_option("--k", ck)->required();
  sum->add_option("--D", cd)->required();
  sum->add_option("--lambda-sq", lambda_sq, "Rational, e.g. 1/100");
  sum->add_option("--r", cr);

  auto* bound = app.add_subcommand("bound", "Tabulate theorem rhs and reference rates");
  std::string bn = "100", bk = "2", bD = "1", bp = "0.6", bq = "0.5", br = "1/2";
  bound->add_option("--n", bn, "Comma-separated list");
  bound->add_option("--k", bk, "Comma-separated list");
  bound->add_option("--D", bD, "Comma-separated list");
  bound->add_option("--p", bp, "Comma-separated rationals");
  bound->add_option("--q", bq, "Comma-separated rationals");
  bound->add_option("--r", br);

  auto* oracle = app.add_subcommand("oracle", "Exact degree-D MMSE oracles");
  oracle->require_subcommand(1);
  int on = 4, ok = 2, oD = 1, on1 = 2, on2 = 2, ok1 = 2, ok2 = 2;
  std::string op, oq, olambda, orr = "1/2";
  bool oheader = false;
  auto* mmse = oracle->add_subcommand("mmse", "SBM: x = M_12, polynomials in A");
  mmse->add_option("--n", on)->required();
  mmse->add_option("--k", ok)->required();
  mmse->add_option("--p", op)->required();
  mmse->add_option("--q", oq)->required();
  mmse->add_option("--D", oD)->required();
  mmse->add_option("--r", orr);
  mmse->add_flag("--header", oheader);
  auto* bic = oracle->add_subcommand("bicluster", "Gaussian bicluster: x = M_11, polynomials in Y");
  bic->add_option("--n1", on1)->required();
  bic->add_option("--n2", on2)->required();
  bic->add_option("--k1", ok1)->required();
  bic->add_option("--k2", ok2)->required();
  bic->add_option("--lambda", olambda)->required();
  bic->add_option("--D", oD)->required();
  bic->add_option("--r", orr);
  bic->add_flag("--header", oheader);

  auto* enumerate = app.add_subcommand("enumerate", "Connected multigraphs as 'i-j:m' lines");
  int en = 3, ed = 2;
  std::string required = "1,2";
  enumerate->add_option("--n", en);
  enumerate->add_option("--d", ed);
  enumerate->add_option("--required", required, "Comma-separated vertices");
  auto* lemma = enumerate->add_subcommand("lemma", "Counting lemma table for 2 <= n <= N, 1 <= d <= Dmax");
  int lemma_n = 6, lemma_d = 4;
  lemma->add_option("--n", lemma_n);
  lemma->add_option("--d", lemma_d);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*sample) cmd_sample(g, truth_out, labels_out);
    else if (*estimate) cmd_estimate(g, est_name, est_params, est_in);
    else if (*mc) cmd_mc_rate(g, mc_x);
    else if (*phase) cmd_phase(g, phase_flags, phase_gaps, phase_method);
    else if (*dump) cmd_cumulants_dump(g, cn, ck, cd);
    else if (*verify) cmd_cumulants_verify(cn, ck, cd);
    else if (*sum) cmd_cumulants_sum(cn, ck, cd, lambda_sq, cr);
    else if (*bound) cmd_bound(g, bn, bk, bD, bp, bq, br);
    else if (*mmse) cmd_oracle_mmse(g, on, ok, op, oq, oD, orr, oheader);
    else if (*bic) cmd_oracle_bicluster(g, on1, on2, ok1, ok2, olambda, oD, orr, oheader);
    else if (*lemma) cmd_enumerate_lemma(g, lemma_n, lemma_d);
    else if (*enumerate) cmd_enumerate(g, en, ed, required);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
