#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphon/rational.hpp"

namespace graphon {

using Vertex = int;  // 1-based

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b);  // normalizes to u < v; rejects self-loops

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Edge-multiplicity map on vertex universe [n]. Entries always have positive
// multiplicity.
class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(int n) : n_(n) {}
  Multigraph(int n, std::initializer_list<std::pair<Edge, int>> edges);

  int universe() const { return n_; }
  const std::map<Edge, int>& edges() const { return edges_; }

  void add_edge(Vertex a, Vertex b, int multiplicity = 1);
  void add_edge(const Edge& e, int multiplicity = 1) { add_edge(e.u, e.v, multiplicity); }
  int multiplicity(const Edge& e) const;

  // |alpha|, the total multiplicity.
  int size() const { return size_; }
  bool empty() const { return edges_.empty(); }
  int distinct_edges() const { return static_cast<int>(edges_.size()); }

  bool dominated_by(const Multigraph& other) const;
  Multigraph operator-(const Multigraph& other) const;  // requires other <= *this
  Multigraph operator+(const Multigraph& other) const;

  // "1-2:2 2-3:1"; the empty graph is "".
  std::string to_string() const;
  static Multigraph parse(int n, std::string_view text);

  friend bool operator==(const Multigraph& a, const Multigraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }
  friend bool operator<(const Multigraph& a, const Multigraph& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.edges_ < b.edges_;
  }

 private:
  int n_ = 0;
  int size_ = 0;
  std::map<Edge, int> edges_;
};

struct MultigraphHash {
  std::size_t operator()(const Multigraph& g) const;
};

std::vector<Vertex> vertex_support(const Multigraph& g);
bool contains_vertex(const Multigraph& g, Vertex v);
int component_count(const Multigraph& g);
bool is_connected(const Multigraph& g);

// Product over edges of C(alpha_e, beta_e).
Integer multinomial_weight(const Multigraph& alpha, const Multigraph& beta);

struct SubMultigraph {
  Multigraph beta;
  Integer weight;
};

constexpr std::uint64_t kSubMultigraphGuard = 1'000'000'000ULL;

// Number of beta <= alpha, i.e. prod (alpha_e + 1). Throws GuardError above the guard.
std::uint64_t sub_multigraph_count(const Multigraph& alpha);

// Visits every beta <= alpha (including the empty graph and alpha itself) with
// its weight.
void for_each_sub_multigraph(const Multigraph& alpha,
                             const std::function<void(const Multigraph&, const Integer&)>& visit);
std::vector<SubMultigraph> enumerate_sub_multigraphs(const Multigraph& alpha);

struct EnumerationGuard {
  int max_n = 8;
  int max_d = 5;
};

// Every multigraph on [n] with |alpha| = d (edge multisets).
std::vector<Multigraph> enumerate_multigraphs(int n, int d, EnumerationGuard guard = {});

// All connected multigraphs with |alpha| = d whose support contains `required`.
std::vector<Multigraph> enumerate_connected(int n, int d, const std::vector<Vertex>& required,
                                            EnumerationGuard guard = {});

struct CountingLemmaReport {
  std::uint64_t actual = 0;
  std::uint64_t bound = 0;
  bool ok = false;
};

// actual = #{connected alpha : 1, 2 in V(alpha), |alpha| = d, |V(alpha)| = d + 1 - h},
// bound = n^{d-h-1} d^{d+h}.
CountingLemmaReport verify_counting_lemma(int n, int d, int h, EnumerationGuard guard = {});

// |V(alpha - beta)| + |V(beta)| - C(alpha - beta) >= |V(alpha)| for connected
// alpha and connected non-empty beta <= alpha.
bool verify_vertex_lemma(const Multigraph& alpha, const Multigraph& beta);

// Rows 1..n1 and columns 1..n2; stored internally as a Multigraph on n1 + n2
// vertices where column j is vertex n1 + j.
class BipartiteMultigraph {
 public:
  BipartiteMultigraph(int n1, int n2) : n1_(n1), n2_(n2), graph_(n1 + n2) {}

  int rows() const { return n1_; }
  int cols() const { return n2_; }
  void add_edge(int row, int col, int multiplicity = 1);
  int multiplicity(int row, int col) const;
  int size() const { return graph_.size(); }

  const Multigraph& as_multigraph() const { return graph_; }
  std::vector<int> row_support() const;
  std::vector<int> col_support() const;

  static BipartiteMultigraph from_multigraph(int n1, int n2, const Multigraph& g);

 private:
  int n1_;
  int n2_;
  Multigraph graph_;
};

std::vector<BipartiteMultigraph> enumerate_connected_bipartite(int n1, int n2, int d,
                                                               const std::vector<int>& required_rows,
                                                               const std::vector<int>& required_cols,
                                                               EnumerationGuard guard = {});

// Row 1 and column 1 required; bound (n1 + n2)^{d-h-1} d^{d+h}.
CountingLemmaReport verify_counting_lemma_bipartite(int n1, int n2, int d, int h,
                                                    EnumerationGuard guard = {});

bool verify_vertex_lemma_bipartite(const BipartiteMultigraph& alpha, const BipartiteMultigraph& beta);

}  // namespace graphon
