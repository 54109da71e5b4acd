#include "graphon/multigraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "graphon/errors.hpp"

namespace graphon {

Edge::Edge(Vertex a, Vertex b) {
  if (a == b) throw std::invalid_argument("multigraph: self-loops are not allowed");
  u = std::min(a, b);
  v = std::max(a, b);
}

Multigraph::Multigraph(int n, std::initializer_list<std::pair<Edge, int>> edges) : n_(n) {
  for (const auto& [e, m] : edges) add_edge(e, m);
}

void Multigraph::add_edge(Vertex a, Vertex b, int multiplicity) {
  Edge e(a, b);
  if (e.u < 1 || e.v > n_) throw std::out_of_range("multigraph: vertex outside [n]");
  if (multiplicity < 0) throw std::invalid_argument("multigraph: negative multiplicity");
  if (multiplicity == 0) return;
  edges_[e] += multiplicity;
  size_ += multiplicity;
}

int Multigraph::multiplicity(const Edge& e) const {
  auto it = edges_.find(e);
  return it == edges_.end() ? 0 : it->second;
}

bool Multigraph::dominated_by(const Multigraph& other) const {
  for (const auto& [e, m] : edges_)
    if (other.multiplicity(e) < m) return false;
  return true;
}

Multigraph Multigraph::operator-(const Multigraph& other) const {
  if (!other.dominated_by(*this)) throw std::invalid_argument("multigraph: subtrahend not dominated");
  Multigraph out(n_);
  for (const auto& [e, m] : edges_) out.add_edge(e, m - other.multiplicity(e));
  return out;
}

Multigraph Multigraph::operator+(const Multigraph& other) const {
  Multigraph out(std::max(n_, other.n_));
  for (const auto& [e, m] : edges_) out.add_edge(e, m);
  for (const auto& [e, m] : other.edges_) out.add_edge(e, m);
  return out;
}

std::string Multigraph::to_string() const {
  std::string out;
  for (const auto& [e, m] : edges_) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(e.u) + "-" + std::to_string(e.v) + ":" + std::to_string(m);
  }
  return out;
}

Multigraph Multigraph::parse(int n, std::string_view text) {
  Multigraph g(n);
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    int u = 0, v = 0, m = 0;
    char dash = 0, colon = 0;
    std::istringstream t(token);
    if (!(t >> u >> dash >> v >> colon >> m) || dash != '-' || colon != ':' || m < 1 || !t.eof())
      throw std::invalid_argument("multigraph: bad edge token '" + token + "'");
    g.add_edge(u, v, m);
  }
  return g;
}

std::size_t MultigraphHash::operator()(const Multigraph& g) const {
  std::size_t h = static_cast<std::size_t>(g.universe()) * 0x9E3779B97F4A7C15ULL;
  for (const auto& [e, m] : g.edges()) {
    std::size_t x = (static_cast<std::size_t>(e.u) << 40) ^ (static_cast<std::size_t>(e.v) << 20) ^
                    static_cast<std::size_t>(m);
    h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<Vertex> vertex_support(const Multigraph& g) {
  std::set<Vertex> s;
  for (const auto& [e, m] : g.edges()) {
    s.insert(e.u);
    s.insert(e.v);
  }
  return {s.begin(), s.end()};
}

bool contains_vertex(const Multigraph& g, Vertex v) {
  for (const auto& [e, m] : g.edges())
    if (e.u == v || e.v == v) return true;
  return false;
}

int component_count(const Multigraph& g) {
  const auto support = vertex_support(g);
  if (support.empty()) return 0;
  std::vector<int> parent(static_cast<std::size_t>(support.back()) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = static_cast<int>(support.size());
  for (const auto& [e, m] : g.edges()) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

bool is_connected(const Multigraph& g) { return component_count(g) <= 1; }

Integer multinomial_weight(const Multigraph& alpha, const Multigraph& beta) {
  Integer w = 1;
  for (const auto& [e, m] : alpha.edges()) w *= binomial(static_cast<unsigned>(m), static_cast<unsigned>(beta.multiplicity(e)));
  for (const auto& [e, m] : beta.edges())
    if (alpha.multiplicity(e) < m) return 0;
  return w;
}

std::uint64_t sub_multigraph_count(const Multigraph& alpha) {
  std::uint64_t count = 1;
  for (const auto& [e, m] : alpha.edges()) {
    count *= static_cast<std::uint64_t>(m) + 1;
    if (count > kSubMultigraphGuard)
      throw GuardError("sub-multigraph enumeration exceeds " + std::to_string(kSubMultigraphGuard));
  }
  return count;
}

void for_each_sub_multigraph(const Multigraph& alpha,
                             const std::function<void(const Multigraph&, const Integer&)>& visit) {
  sub_multigraph_count(alpha);
  std::vector<std::pair<Edge, int>> edges(alpha.edges().begin(), alpha.edges().end());
  std::vector<int> take(edges.size(), 0);
  while (true) {
    Multigraph beta(alpha.universe());
    Integer weight = 1;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      beta.add_edge(edges[i].first, take[i]);
      weight *= binomial(static_cast<unsigned>(edges[i].second), static_cast<unsigned>(take[i]));
    }
    visit(beta, weight);
    std::size_t i = 0;
    while (i < edges.size() && take[i] == edges[i].second) take[i++] = 0;
    if (i == edges.size()) return;
    ++take[i];
  }
}

std::vector<SubMultigraph> enumerate_sub_multigraphs(const Multigraph& alpha) {
  std::vector<SubMultigraph> out;
  out.reserve(sub_multigraph_count(alpha));
  for_each_sub_multigraph(alpha, [&](const Multigraph& b, const Integer& w) { out.push_back({b, w}); });
  return out;
}

namespace {

void check_guard(int n, int d, EnumerationGuard guard) {
  if (n > guard.max_n || d > guard.max_d)
    throw GuardError("enumeration guard exceeded: n=" + std::to_string(n) + " (max " +
                     std::to_string(guard.max_n) + "), d=" + std::to_string(d) + " (max " +
                     std::to_string(guard.max_d) + ")");
}

// Visits every multiset of size d drawn from `slots` (nondecreasing index sequences).
template <typename Visit>
void for_each_multiset(const std::vector<Edge>& slots, int d, Visit&& visit) {
  if (d == 0) {
    visit(std::vector<int>{});
    return;
  }
  if (slots.empty()) return;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  const int last = static_cast<int>(slots.size()) - 1;
  while (true) {
    visit(idx);
    int i = d - 1;
    while (i >= 0 && idx[i] == last) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[i];
  }
}

std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> out;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) out.emplace_back(u, v);
  return out;
}

std::vector<Multigraph> collect(int universe, const std::vector<Edge>& slots, int d,
                                const std::function<bool(const Multigraph&)>& keep) {
  std::vector<Multigraph> out;
  std::unordered_set<Multigraph, MultigraphHash> seen;
  for_each_multiset(slots, d, [&](const std::vector<int>& idx) {
    Multigraph g(universe);
    for (int i : idx) g.add_edge(slots[i]);
    if (keep(g) && seen.insert(g).second) out.push_back(std::move(g));
  });
  return out;
}

std::uint64_t ipow(std::uint64_t base, int exponent) {
  std::uint64_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

CountingLemmaReport count_with_bound(const std::vector<Multigraph>& graphs, int d, int h,
                                     std::uint64_t universe) {
  CountingLemmaReport report;
  for (const auto& g : graphs)
    if (static_cast<int>(vertex_support(g).size()) == d + 1 - h) ++report.actual;
  report.bound = ipow(universe, d - h - 1) * ipow(static_cast<std::uint64_t>(d), d + h);
  report.ok = report.actual <= report.bound;
  return report;
}

}  // namespace

std::vector<Multigraph> enumerate_multigraphs(int n, int d, EnumerationGuard guard) {
  check_guard(n, d, guard);
  if (n < 0 || d < 0) throw std::invalid_argument("enumerate_multigraphs: negative n or d");
  return collect(n, complete_edges(n), d, [](const Multigraph&) { return true; });
}

std::vector<Multigraph> enumerate_connected(int n, int d, const std::vector<Vertex>& required,
                                            EnumerationGuard guard) {
  check_guard(n, d, guard);
  if (n < 0 || d < 0) throw std::invalid_argument("enumerate_connected: negative n or d");
  for (Vertex v : required)
    if (v < 1 || v > n) return {};
  return collect(n, complete_edges(n), d, [&](const Multigraph& g) {
    if (!is_connected(g)) return false;
    for (Vertex v : required)
      if (!contains_vertex(g, v)) return false;
    return true;
  });
}

CountingLemmaReport verify_counting_lemma(int n, int d, int h, EnumerationGuard guard) {
  if (d < 1 || h < 0 || h > d - 1) throw std::invalid_argument("counting lemma: need d >= 1, 0 <= h <= d-1");
  return count_with_bound(enumerate_connected(n, d, {1, 2}, guard), d, h, static_cast<std::uint64_t>(n));
}

bool verify_vertex_lemma(const Multigraph& alpha, const Multigraph& beta) {
  if (alpha.empty() || !is_connected(alpha)) throw std::invalid_argument("vertex lemma: alpha must be connected and non-empty");
  if (beta.empty() || !is_connected(beta)) throw std::invalid_argument("vertex lemma: beta must be connected and non-empty");
  if (!beta.dominated_by(alpha)) throw std::invalid_argument("vertex lemma: beta must satisfy beta <= alpha");
  const Multigraph rest = alpha - beta;
  const auto lhs = static_cast<int>(vertex_support(rest).size()) +
                   static_cast<int>(vertex_support(beta).size()) - component_count(rest);
  return lhs >= static_cast<int>(vertex_support(alpha).size());
}

void BipartiteMultigraph::add_edge(int row, int col, int multiplicity) {
  if (row < 1 || row > n1_ || col < 1 || col > n2_) throw std::out_of_range("bipartite multigraph: index outside range");
  graph_.add_edge(row, n1_ + col, multiplicity);
}

int BipartiteMultigraph::multiplicity(int row, int col) const {
  return graph_.multiplicity(Edge(row, n1_ + col));
}

std::vector<int> BipartiteMultigraph::row_support() const {
  std::vector<int> out;
  for (Vertex v : vertex_support(graph_))
    if (v <= n1_) out.push_back(v);
  return out;
}

std::vector<int> BipartiteMultigraph::col_support() const {
  std::vector<int> out;
  for (Vertex v : vertex_support(graph_))
    if (v > n1_) out.push_back(v - n1_);
  return out;
}

BipartiteMultigraph BipartiteMultigraph::from_multigraph(int n1, int n2, const Multigraph& g) {
  BipartiteMultigraph b(n1, n2);
  for (const auto& [e, m] : g.edges()) {
    if (e.u > n1 || e.v <= n1 || e.v > n1 + n2) throw std::invalid_argument("bipartite multigraph: edge is not row-column");
    b.add_edge(e.u, e.v - n1, m);
  }
  return b;
}

std::vector<BipartiteMultigraph> enumerate_connected_bipartite(int n1, int n2, int d,
                                                               const std::vector<int>& required_rows,
                                                               const std::vector<int>& required_cols,
                                                               EnumerationGuard guard) {
  check_guard(n1 + n2, d, guard);
  for (int r : required_rows)
    if (r < 1 || r > n1) return {};
  for (int c : required_cols)
    if (c < 1 || c > n2) return {};
  std::vector<Edge> slots;
  for (int i = 1; i <= n1; ++i)
    for (int j = 1; j <= n2; ++j) slots.emplace_back(i, n1 + j);
  auto graphs = collect(n1 + n2, slots, d, [&](const Multigraph& g) {
    if (!is_connected(g)) return false;
    for (int r : required_rows)
      if (!contains_vertex(g, r)) return false;
    for (int c : required_cols)
      if (!contains_vertex(g, n1 + c)) return false;
    return true;
  });
  std::vector<BipartiteMultigraph> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(BipartiteMultigraph::from_multigraph(n1, n2, g));
  return out;
}

CountingLemmaReport verify_counting_lemma_bipartite(int n1, int n2, int d, int h, EnumerationGuard guard) {
  if (d < 1 || h < 0 || h > d - 1) throw std::invalid_argument("counting lemma: need d >= 1, 0 <= h <= d-1");
  std::vector<Multigraph> graphs;
  for (const auto& b : enumerate_connected_bipartite(n1, n2, d, {1}, {1}, guard)) graphs.push_back(b.as_multigraph());
  return count_with_bound(graphs, d, h, static_cast<std::uint64_t>(n1 + n2));
}

bool verify_vertex_lemma_bipartite(const BipartiteMultigraph& alpha, const BipartiteMultigraph& beta) {
  if (alpha.rows() != beta.rows() || alpha.cols() != beta.cols())
    throw std::invalid_argument("vertex lemma: mismatched bipartite shapes");
  return verify_vertex_lemma(alpha.as_multigraph(), beta.as_multigraph());
}

}  // namespace graphon
