#pragma once

#include <cstdint>
#include <vector>

#include "graphon/core_model.hpp"
#include "graphon/multigraph.hpp"
#include "graphon/rational.hpp"

namespace graphon {

// Monomials as sorted lists of coordinate indices (repetition allowed only in
// multi-index bases), ordered by degree and then lexicographically.
struct MonomialBasis {
  int coordinates = 0;
  std::vector<std::vector<int>> monomials;

  std::size_t size() const { return monomials.size(); }
};

constexpr std::size_t kMaxBasisSize = 5000;

MonomialBasis binary_basis(int coordinates, int D);
MonomialBasis multi_index_basis(int coordinates, int D);

// Pairs (i,j), i < j, in lexicographic order: (1,2), (1,3), ..., (n-1,n).
std::vector<Edge> edge_coordinates(int n);

struct EliminationResult {
  Rational corr_sq;
  int rank = 0;
  bool psd = true;         // no negative pivot, and zero pivots have zero rows
  bool consistent = true;  // c lies in the row space
  std::vector<Rational> pivots;
};

// c^T G^+ c by exact symmetric elimination without pivoting; zero pivots are
// skipped (their rows must vanish for a PSD matrix).
EliminationResult project_exact(const MatrixQ& gram, const VectorQ& c);

struct ExactProjection {
  MatrixQ gram;
  VectorQ corr_vec;
  Rational second_moment;  // E[x^2]
  Rational corr_sq;
  Rational mmse;
  int rank = 0;
  bool psd = true;
};

// E[A^{alpha v beta}] for binary monomials given as lists of edge indices into
// edge_coordinates(n). Guard: n <= 6, k <= 4.
Rational exact_moments_sbm(const ExactSbmPrior& prior, const std::vector<int>& alpha,
                           const std::vector<int>& beta);

// Projection of x = M_12 onto polynomials of degree <= D in A.
ExactProjection exact_corr_and_mmse(const ExactSbmPrior& prior, int D);

struct CorrBoundReport {
  Rational corr_sq;
  Rational kappa_bound;
  Rational kappa_zero_sq;   // (E x)^2
  Rational excess_corr;     // corr_sq - (E x)^2
  Rational excess_bound;    // kappa_bound - (E x)^2
  bool ok = false;
};

// corr_sq against kappa_0^2 + sum_{1 <= |alpha| <= D, binary}
// kappa_alpha(M_12, M)^2 / (q(1-p))^{|alpha|}. Needs 0 < q, p < 1.
CorrBoundReport verify_corr_bound(const ExactSbmPrior& prior, int D);

// Standard normal raw moments: 1, 0, 1, 0, 3, 0, 15, ...
Integer gaussian_moment(int m);

// Projection of x = M_{11} onto polynomials of degree <= D in Y = M + noise.
// Guard: n1, n2 <= 3, D <= 2.
ExactProjection exact_mmse_gaussian_bicluster(const ExactBiclusterPrior& prior, int D);

}  // namespace graphon
