#include "graphon/prior_spec.hpp"

#include <set>

#include "graphon/errors.hpp"

namespace graphon {

using nlohmann::json;

namespace {

void check_keys(const json& doc, const std::set<std::string>& allowed) {
  if (!doc.is_object()) throw ConfigError("prior: expected a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key)) throw ConfigError("prior: unknown key '" + key + "'");
}

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("prior: missing key '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("prior: bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T optional(const json& doc, const char* key, T fallback) {
  return doc.contains(key) ? required<T>(doc, key) : fallback;
}

template <typename Fn>
auto validated(Fn&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

void SparseSbmPrior::validate() const {
  SbmPqPrior{n, k, p, q, fixed_first}.validate();
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("sparse SBM prior: rho must lie in (0,1]");
}

PriorSpec prior_from_json(const json& doc) {
  const auto type = required<std::string>(doc, "type");
  if (type == "sbm") {
    check_keys(doc, {"type", "n", "k", "p", "q", "fixed_first"});
    return validated([&] {
      SbmPqPrior p{required<int>(doc, "n"), required<int>(doc, "k"), required<double>(doc, "p"),
                   required<double>(doc, "q"), optional<bool>(doc, "fixed_first", false)};
      p.validate();
      return PriorSpec(p);
    });
  }
  if (type == "sparse_sbm") {
    check_keys(doc, {"type", "n", "k", "rho", "p", "q", "fixed_first"});
    return validated([&] {
      SparseSbmPrior p{required<int>(doc, "n"), required<int>(doc, "k"), required<double>(doc, "rho"),
                       required<double>(doc, "p"), required<double>(doc, "q"),
                       optional<bool>(doc, "fixed_first", false)};
      p.validate();
      return PriorSpec(p);
    });
  }
  if (type == "bicluster") {
    check_keys(doc, {"type", "n1", "n2", "k1", "k2", "lambda", "fixed_first"});
    return validated([&] {
      BiclusterPrior p{required<int>(doc, "n1"), required<int>(doc, "n2"), required<int>(doc, "k1"),
                       required<int>(doc, "k2"), required<double>(doc, "lambda"),
                       optional<bool>(doc, "fixed_first", false)};
      p.validate();
      return PriorSpec(p);
    });
  }
  if (type == "smooth_graphon") {
    check_keys(doc, {"type", "n", "k", "p", "q", "delta", "design"});
    return validated([&] {
      SmoothGraphonPrior p;
      p.n = required<int>(doc, "n");
      p.spec = {required<int>(doc, "k"), required<double>(doc, "p"), required<double>(doc, "q"),
                optional<double>(doc, "delta", 0.5)};
      const auto design = optional<std::string>(doc, "design", "uniform");
      if (design == "uniform") p.design = LatentDesign::uniform;
      else if (design == "permutation") p.design = LatentDesign::permutation;
      else throw ConfigError("prior: design must be 'uniform' or 'permutation'");
      p.spec.validate();
      if (p.n < 2) throw ConfigError("prior: n must be at least 2");
      return PriorSpec(p);
    });
  }
  throw ConfigError("prior: unknown type '" + type + "'");
}

json prior_to_json(const PriorSpec& prior) {
  struct Visitor {
    json operator()(const SbmPqPrior& p) const {
      return {{"type", "sbm"}, {"n", p.n}, {"k", p.k}, {"p", p.p}, {"q", p.q}, {"fixed_first", p.fixed_first}};
    }
    json operator()(const SparseSbmPrior& p) const {
      return {{"type", "sparse_sbm"}, {"n", p.n}, {"k", p.k}, {"rho", p.rho},
              {"p", p.p},             {"q", p.q}, {"fixed_first", p.fixed_first}};
    }
    json operator()(const BiclusterPrior& p) const {
      return {{"type", "bicluster"}, {"n1", p.n1}, {"n2", p.n2}, {"k1", p.k1},
              {"k2", p.k2},          {"lambda", p.lambda}, {"fixed_first", p.fixed_first}};
    }
    json operator()(const SmoothGraphonPrior& p) const {
      return {{"type", "smooth_graphon"}, {"n", p.n}, {"k", p.spec.k}, {"p", p.spec.p}, {"q", p.spec.q},
              {"delta", p.spec.delta},
              {"design", p.design == LatentDesign::uniform ? "uniform" : "permutation"}};
    }
  };
  return std::visit(Visitor{}, prior);
}

PriorDraw draw_from_prior(const PriorSpec& prior, Rng& rng) {
  struct Visitor {
    Rng& rng;
    PriorDraw operator()(const SbmPqPrior& p) const {
      PriorDraw d;
      d.labels = sample_membership(p, rng);
      auto m = build_probability_matrix(d.labels, p.p, p.q);
      d.observation = sample_adjacency(m, rng).values();
      d.M = m.values();
      return d;
    }
    PriorDraw operator()(const SparseSbmPrior& p) const {
      p.validate();
      PriorDraw d;
      d.labels = sample_labels(p.n, p.k, p.fixed_first, rng);
      auto m = build_probability_matrix(d.labels, p.rho * p.p, p.rho * p.q);
      d.observation = sample_adjacency(m, rng).values();
      d.M = m.values();
      return d;
    }
    PriorDraw operator()(const BiclusterPrior& p) const {
      auto s = sample_bicluster(p, rng);
      PriorDraw d;
      d.labels = s.row_labels;
      d.labels.insert(d.labels.end(), s.col_labels.begin(), s.col_labels.end());
      d.M = std::move(s.M);
      d.observation = std::move(s.Y);
      return d;
    }
    PriorDraw operator()(const SmoothGraphonPrior& p) const {
      auto m = sample_graphon_matrix(p.spec, p.n, p.design, rng);
      PriorDraw d;
      d.observation = sample_adjacency(m, rng).values();
      d.M = m.values();
      return d;
    }
  };
  return std::visit(Visitor{rng}, prior);
}

}  // namespace graphon
