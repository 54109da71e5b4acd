#include "graphon/ldp_oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "graphon/cumulants.hpp"
#include "graphon/errors.hpp"

namespace graphon {

namespace {

void grow(MonomialBasis& basis, int D, bool repeat) {
  if (D < 0) throw std::invalid_argument("basis: negative degree");
  std::vector<int> current;
  for (int d = 0; d <= D; ++d) {
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(current.size()) == d) {
        basis.monomials.push_back(current);
        if (basis.monomials.size() > kMaxBasisSize)
          throw GuardError("monomial basis exceeds " + std::to_string(kMaxBasisSize) + " elements");
        return;
      }
      for (int i = start; i < basis.coordinates; ++i) {
        current.push_back(i);
        rec(repeat ? i : i + 1);
        current.pop_back();
      }
    };
    rec(0);
  }
}

}  // namespace

MonomialBasis binary_basis(int coordinates, int D) {
  MonomialBasis b{coordinates, {}};
  grow(b, D, false);
  return b;
}

MonomialBasis multi_index_basis(int coordinates, int D) {
  MonomialBasis b{coordinates, {}};
  grow(b, D, true);
  return b;
}

std::vector<Edge> edge_coordinates(int n) {
  std::vector<Edge> out;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) out.emplace_back(u, v);
  return out;
}

EliminationResult project_exact(const MatrixQ& gram, const VectorQ& c) {
  const Eigen::Index m = gram.rows();
  if (gram.cols() != m || c.size() != m) throw std::invalid_argument("project_exact: shape mismatch");
  MatrixQ w = gram;
  VectorQ y = c;
  EliminationResult out;
  out.corr_sq = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Rational d = w(i, i);
    out.pivots.push_back(d);
    if (d < 0) {
      out.psd = false;
      continue;
    }
    if (d == 0) {
      for (Eigen::Index j = i + 1; j < m; ++j)
        if (w(i, j) != 0) out.psd = false;
      if (y(i) != 0) out.consistent = false;
      continue;
    }
    ++out.rank;
    out.corr_sq += y(i) * y(i) / d;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (w(j, i) == 0) continue;
      const Rational factor = w(j, i) / d;
      for (Eigen::Index l = i + 1; l < m; ++l)
        if (w(i, l) != 0) w(j, l) -= factor * w(i, l);
      y(j) -= factor * y(i);
    }
  }
  return out;
}

namespace {

using Mask = std::uint32_t;

// Labelings of [n] grouped by which edge coordinates join equal labels.
struct PatternTable {
  std::map<Mask, std::uint64_t> counts;
  std::uint64_t total = 0;
};

PatternTable sbm_patterns(int n, int k, bool fixed_first) {
  if (n > 6 || k > 4) throw GuardError("SBM oracle guard is n <= 6, k <= 4");
  const auto edges = edge_coordinates(n);
  PatternTable table;
  std::vector<int> z(static_cast<std::size_t>(n) + 1, 1);
  const int first_free = fixed_first ? 2 : 1;
  std::uint64_t labelings = 1;
  for (int v = first_free; v <= n; ++v) labelings *= static_cast<std::uint64_t>(k);
  for (std::uint64_t index = 0; index < labelings; ++index) {
    std::uint64_t rest = index;
    for (int v = first_free; v <= n; ++v) {
      z[v] = static_cast<int>(rest % static_cast<std::uint64_t>(k)) + 1;
      rest /= static_cast<std::uint64_t>(k);
    }
    Mask mask = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (z[edges[e].u] == z[edges[e].v]) mask |= Mask{1} << e;
    ++table.counts[mask];
  }
  table.total = labelings;
  return table;
}

class SbmMoments {
 public:
  SbmMoments(const ExactSbmPrior& prior)
      : table_(sbm_patterns(prior.n, prior.k, prior.fixed_first)), p_(prior.p), q_(prior.q) {
    const int edges = prior.n * (prior.n - 1) / 2;
    for (int i = 0; i <= edges + 2; ++i) {
      p_pow_.push_back(pow(p_, static_cast<unsigned>(i)));
      q_pow_.push_back(pow(q_, static_cast<unsigned>(i)));
    }
  }

  // E[M_12^x_power * A^S] with A^S = prod_{e in S} A_e.
  Rational operator()(Mask s, int x_power) {
    const std::uint64_t key = (static_cast<std::uint64_t>(s) << 2) | static_cast<std::uint64_t>(x_power);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const int size = std::popcount(s);
    Rational total = 0;
    for (const auto& [mask, count] : table_.counts) {
      const int same = std::popcount(s & mask);
      int ps = same, qs = size - same;
      if (mask & Mask{1}) ps += x_power;
      else qs += x_power;
      total += Rational(count) * p_pow_[ps] * q_pow_[qs];
    }
    total /= Rational(table_.total);
    return cache_.emplace(key, total).first->second;
  }

 private:
  PatternTable table_;
  Rational p_, q_;
  std::vector<Rational> p_pow_, q_pow_;
  std::unordered_map<std::uint64_t, Rational> cache_;
};

Mask to_mask(const std::vector<int>& monomial) {
  Mask m = 0;
  for (int i : monomial) m |= Mask{1} << i;
  return m;
}

ExactProjection finish(MatrixQ gram, VectorQ c, Rational second_moment) {
  ExactProjection out;
  const EliminationResult r = project_exact(gram, c);
  if (!r.consistent) throw std::logic_error("exact projection: correlation vector outside the Gram row space");
  out.gram = std::move(gram);
  out.corr_vec = std::move(c);
  out.second_moment = std::move(second_moment);
  out.corr_sq = r.corr_sq;
  out.mmse = out.second_moment - out.corr_sq;
  out.rank = r.rank;
  out.psd = r.psd;
  return out;
}

}  // namespace

Rational exact_moments_sbm(const ExactSbmPrior& prior, const std::vector<int>& alpha,
                           const std::vector<int>& beta) {
  prior.validate();
  SbmMoments moments(prior);
  const int edges = prior.n * (prior.n - 1) / 2;
  for (int i : alpha)
    if (i < 0 || i >= edges) throw std::out_of_range("exact_moments_sbm: edge index");
  for (int i : beta)
    if (i < 0 || i >= edges) throw std::out_of_range("exact_moments_sbm: edge index");
  return moments(to_mask(alpha) | to_mask(beta), 0);
}

ExactProjection exact_corr_and_mmse(const ExactSbmPrior& prior, int D) {
  prior.validate();
  SbmMoments moments(prior);
  const MonomialBasis basis = binary_basis(prior.n * (prior.n - 1) / 2, D);
  const auto m = static_cast<Eigen::Index>(basis.size());
  std::vector<Mask> masks;
  for (const auto& mono : basis.monomials) masks.push_back(to_mask(mono));
  MatrixQ gram(m, m);
  VectorQ c(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c(i) = moments(masks[i], 1);
    for (Eigen::Index j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = moments(masks[i] | masks[j], 0);
  }
  return finish(std::move(gram), std::move(c), moments(0, 2));
}

CorrBoundReport verify_corr_bound(const ExactSbmPrior& prior, int D) {
  prior.validate();
  if (!(prior.q > 0 && prior.p < 1)) throw std::invalid_argument("verify_corr_bound: need 0 < q and p < 1");
  CorrBoundReport out;
  out.corr_sq = exact_corr_and_mmse(prior, D).corr_sq;
  const Rational gap = prior.p - prior.q;
  const Rational noise = prior.q * (Rational(1) - prior.p);
  const Rational mean = prior.q + gap / prior.k;
  out.kappa_zero_sq = mean * mean;

  KappaEngine engine(MomentOracle::sbm(prior.k));
  const auto edges = edge_coordinates(prior.n);
  Rational tail = 0;
  for (const auto& mono : binary_basis(static_cast<int>(edges.size()), D).monomials) {
    if (mono.empty()) continue;
    Multigraph alpha(prior.n);
    for (int i : mono) alpha.add_edge(edges[i]);
    const ScaledRational value = engine.kappa(alpha);
    if (value.is_zero()) continue;
    // kappa_alpha(M_12, M) = (p-q)^{|alpha|+1} coeff for |alpha| >= 1.
    const auto degree = static_cast<unsigned>(alpha.size());
    tail += value.coeff * value.coeff * pow(gap, 2 * (degree + 1)) / pow(noise, degree);
  }
  out.kappa_bound = out.kappa_zero_sq + tail;
  out.excess_corr = out.corr_sq - out.kappa_zero_sq;
  out.excess_bound = tail;
  out.ok = out.corr_sq <= out.kappa_bound;
  return out;
}

Integer gaussian_moment(int m) {
  if (m < 0) throw std::invalid_argument("gaussian_moment: negative order");
  if (m % 2 == 1) return 0;
  Integer r = 1;
  for (int i = m - 1; i > 1; i -= 2) r *= i;
  return r;
}

ExactProjection exact_mmse_gaussian_bicluster(const ExactBiclusterPrior& prior, int D) {
  prior.validate();
  if (prior.n1 > 3 || prior.n2 > 3 || D > 2) throw GuardError("Gaussian oracle guard is n1, n2 <= 3, D <= 2");
  const int k = prior.k();
  const int n1 = prior.n1, n2 = prior.n2;
  const int positions = n1 * n2;
  const Rational& lambda = prior.lambda;

  // g[t][matched] = E[(X + N)^t] with X in {0, lambda}.
  const int max_t = 2 * D + 1;
  std::vector<std::array<Rational, 2>> g(static_cast<std::size_t>(max_t) + 1);
  for (int t = 0; t <= max_t; ++t) {
    g[t][0] = Rational(gaussian_moment(t));
    Rational s = 0;
    for (int j = 0; j <= t; ++j)
      s += Rational(binomial(static_cast<unsigned>(t), static_cast<unsigned>(j))) * pow(lambda, static_cast<unsigned>(j)) *
           Rational(gaussian_moment(t - j));
    g[t][1] = s;
  }

  // Labelings grouped by match pattern over positions (row-major).
  std::map<Mask, std::uint64_t> patterns;
  const int free_rows = prior.fixed_first ? n1 - 1 : n1;
  std::uint64_t labelings = 1;
  for (int i = 0; i < free_rows + n2; ++i) labelings *= static_cast<std::uint64_t>(k);
  std::vector<int> row(static_cast<std::size_t>(n1), 1), col(static_cast<std::size_t>(n2), 1);
  for (std::uint64_t index = 0; index < labelings; ++index) {
    std::uint64_t rest = index;
    for (int i = n1 - free_rows; i < n1; ++i) {
      row[i] = static_cast<int>(rest % static_cast<std::uint64_t>(k)) + 1;
      rest /= static_cast<std::uint64_t>(k);
    }
    for (int j = 0; j < n2; ++j) {
      col[j] = static_cast<int>(rest % static_cast<std::uint64_t>(k)) + 1;
      rest /= static_cast<std::uint64_t>(k);
    }
    Mask mask = 0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        if (row[i] == col[j]) mask |= Mask{1} << (i * n2 + j);
    ++patterns[mask];
  }

  // E[x^x_power Y^gamma] for a count vector gamma.
  auto moment = [&](const std::vector<int>& gamma, int x_power) {
    Rational total = 0;
    for (const auto& [mask, count] : patterns) {
      Rational term(count);
      if (x_power > 0) {
        if (!(mask & Mask{1})) continue;
        term *= pow(lambda, static_cast<unsigned>(x_power));
      }
      for (int pos = 0; pos < positions && term != 0; ++pos)
        if (gamma[pos] > 0) term *= g[gamma[pos]][(mask >> pos) & 1u];
      total += term;
    }
    return total / Rational(labelings);
  };

  const MonomialBasis basis = multi_index_basis(positions, D);
  const auto m = static_cast<Eigen::Index>(basis.size());
  std::vector<std::vector<int>> counts;
  for (const auto& mono : basis.monomials) {
    std::vector<int> c(static_cast<std::size_t>(positions), 0);
    for (int i : mono) ++c[i];
    counts.push_back(std::move(c));
  }
  MatrixQ gram(m, m);
  VectorQ c(m);
  std::vector<int> gamma(static_cast<std::size_t>(positions));
  for (Eigen::Index i = 0; i < m; ++i) {
    c(i) = moment(counts[i], 1);
    for (Eigen::Index j = 0; j <= i; ++j) {
      for (int pos = 0; pos < positions; ++pos) gamma[pos] = counts[i][pos] + counts[j][pos];
      gram(i, j) = gram(j, i) = moment(gamma, 0);
    }
  }
  return finish(std::move(gram), std::move(c), moment(std::vector<int>(static_cast<std::size_t>(positions), 0), 2));
}

}  // namespace graphon
