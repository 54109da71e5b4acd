#include "graphon/smooth_graphon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace graphon {

namespace {

constexpr double kSupport = 0.125;
constexpr double kHalfWidth = 0.375;
constexpr int kTableSize = 4096;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tolerance, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tolerance) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tolerance, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tolerance, depth - 1);
}

double bump(double x) {
  const double t = 64.0 * x * x;
  if (t >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t));
}

double bump_integral(double a, double b) {
  a = std::max(a, -kSupport);
  b = std::min(b, kSupport);
  if (b <= a) return 0.0;
  return adaptive_simpson(bump, a, b, 1e-13);
}

struct PsiTable {
  double step;
  std::vector<double> values;

  PsiTable() : step(0.5 / (kTableSize - 1)), values(kTableSize) {
    for (int i = 0; i < kTableSize; ++i) values[i] = mollifier_psi_exact(i * step);
  }
};

const PsiTable& psi_table() {
  static const PsiTable table;
  return table;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tolerance, int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tolerance, max_depth);
}

double mollifier_constant() {
  static const double c = 1.0 / adaptive_simpson(bump, -kSupport, kSupport, 1e-10);
  return c;
}

double mollifier(double x) { return mollifier_constant() * bump(x); }

double mollifier_psi_exact(double x) {
  x = std::abs(x);
  if (x >= 0.5) return 0.0;
  const double lo = x - kHalfWidth;
  const double hi = x + kHalfWidth;
  if (lo <= -kSupport && hi >= kSupport) return 1.0;
  static const double full = bump_integral(-kSupport, kSupport);
  return std::clamp(bump_integral(lo, hi) / full, 0.0, 1.0);
}

double mollifier_psi(double x) {
  x = std::abs(x);
  if (x >= 0.5) return 0.0;
  const PsiTable& t = psi_table();
  const double s = x / t.step;
  const int i = std::min(static_cast<int>(s), kTableSize - 2);
  const double u = s - i;
  auto at = [&](int j) {
    // psi is even, and zero past the right end.
    if (j < 0) return t.values[-j];
    if (j >= kTableSize) return 0.0;
    return t.values[j];
  };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  // Catmull-Rom cubic.
  const double v = p1 + 0.5 * u *
                            (p2 - p0 +
                             u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + u * (3.0 * (p1 - p2) + p3 - p0)));
  return std::clamp(v, 0.0, 1.0);
}

void SmoothGraphonSpec::validate() const {
  if (k < 1) throw std::invalid_argument("smooth graphon: k must be positive");
  if (!(0.0 <= q && q <= p && p <= 1.0))
    throw std::invalid_argument("smooth graphon: need 0 <= q <= p <= 1");
  if (p - q > 1.0 / k) throw std::invalid_argument("smooth graphon: need p - q <= 1/k");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("smooth graphon: delta must lie in (0,1]");
}

double graphon_fqp(double x, double y, const SmoothGraphonSpec& spec) {
  spec.validate();
  // Only the diagonal blocks carry the bump; off-diagonal entries of Q - q are zero.
  double bumps = 0.0;
  for (int a = 1; a <= spec.k; ++a) {
    const double px = mollifier_psi(spec.k * x - a + 0.5);
    if (px == 0.0) continue;
    bumps += px * mollifier_psi(spec.k * y - a + 0.5);
  }
  return std::clamp(spec.delta * ((spec.p - spec.q) * bumps + spec.q), 0.0, 1.0);
}

ProbabilityMatrix sample_graphon_matrix(const SmoothGraphonSpec& spec, int n, LatentDesign design,
                                        Rng& rng) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("sample_graphon_matrix: need n >= 2");
  std::vector<double> xi(static_cast<std::size_t>(n));
  if (design == LatentDesign::uniform) {
    for (double& v : xi) v = rng.uniform();
  } else {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    for (int i = 0; i < n; ++i) xi[i] = static_cast<double>(perm[i]) / n;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) m(i, j) = m(j, i) = graphon_fqp(xi[i], xi[j], spec);
  return ProbabilityMatrix(std::move(m));
}

}  // namespace graphon
