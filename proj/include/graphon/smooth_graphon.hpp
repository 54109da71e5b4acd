#pragma once

#include <cstdint>
#include <functional>

#include "graphon/core_model.hpp"

namespace graphon {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tolerance, int max_depth = 50);

// Normalizing constant of the bump K on [-1/8, 1/8].
double mollifier_constant();

// K(x) = C_K exp(-1/(1 - 64 x^2)) on (-1/8, 1/8), zero elsewhere; integrates to 1.
double mollifier(double x);

// psi(x) = integral of K over [x - 3/8, x + 3/8], by direct quadrature.
double mollifier_psi_exact(double x);

// Tabulated psi with cubic interpolation; exactly 0 outside (-1/2, 1/2).
double mollifier_psi(double x);

struct SmoothGraphonSpec {
  int k = 1;
  double p = 0.0;
  double q = 0.0;
  double delta = 0.5;

  void validate() const;
};

double graphon_fqp(double x, double y, const SmoothGraphonSpec& spec);

enum class LatentDesign { uniform, permutation };

// Draws latent positions (i.i.d. uniform, or {1..n}/n randomly permuted) and
// evaluates M_ij = f(xi_i, xi_j).
ProbabilityMatrix sample_graphon_matrix(const SmoothGraphonSpec& spec, int n, LatentDesign design,
                                        Rng& rng);

}  // namespace graphon
