#include <stdexcept>
#include <string>
#include <vector>

#include "graphon/cumulants.hpp"
#include "graphon/errors.hpp"

namespace graphon {

Rational joint_moment(const FiniteJointDistribution& law, const std::vector<int>& variables) {
  Rational total = 0;
  for (std::size_t o = 0; o < law.probability.size(); ++o) {
    Rational term = law.probability[o];
    for (int v : variables) {
      term *= law.values[o].at(static_cast<std::size_t>(v));
      if (term == 0) break;
    }
    total += term;
  }
  return total;
}

Rational joint_cumulant(const FiniteJointDistribution& law, const std::vector<int>& variables) {
  const int m = static_cast<int>(variables.size());
  if (m == 0) throw std::invalid_argument("joint_cumulant: empty variable list");
  if (m > kMaxCumulantOrder)
    throw GuardError("joint_cumulant: order " + std::to_string(m) + " exceeds " + std::to_string(kMaxCumulantOrder));
  if (law.probability.size() != law.values.size()) throw std::invalid_argument("joint_cumulant: malformed law");

  // Moments of every non-empty sub-multiset, indexed by bitmask over positions.
  std::vector<Rational> block_moment(std::size_t{1} << m);
  for (std::size_t mask = 1; mask < block_moment.size(); ++mask) {
    std::vector<int> vars;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1u) vars.push_back(variables[i]);
    block_moment[mask] = joint_moment(law, vars);
  }

  std::vector<Rational> factorial(static_cast<std::size_t>(m) + 1, Rational(1));
  for (int i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * i;

  // Set partitions as restricted growth strings a_0 = 0, a_i <= 1 + max(a_0..a_{i-1}).
  std::vector<int> rgs(static_cast<std::size_t>(m), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(m), 0);
  Rational total = 0;
  while (true) {
    const int blocks = prefix_max[m - 1] + 1;
    std::vector<std::size_t> masks(static_cast<std::size_t>(blocks), 0);
    for (int i = 0; i < m; ++i) masks[rgs[i]] |= std::size_t{1} << i;
    Rational term = factorial[blocks - 1];
    if (blocks % 2 == 0) term = -term;
    for (std::size_t mask : masks) term *= block_moment[mask];
    total += term;

    int i = m - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < m; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return total;
}

FiniteJointDistribution membership_distribution(const MomentOracle& oracle, int universe,
                                                const std::vector<Edge>& coordinates) {
  const int k = oracle.k();
  if (universe < 1) throw std::invalid_argument("membership_distribution: empty universe");
  std::uint64_t support = 1;
  for (int i = 1; i < universe; ++i) {
    support *= static_cast<std::uint64_t>(k);
    if (support > kMaxJointSupport) throw GuardError("membership_distribution: label space too large");
  }
  for (const Edge& e : coordinates)
    if (e.v > universe) throw std::invalid_argument("membership_distribution: coordinate outside universe");

  FiniteJointDistribution law;
  const Rational weight = Rational(1) / Rational(support);
  std::vector<int> z(static_cast<std::size_t>(universe) + 1, 1);  // z[1] stays 1
  for (std::uint64_t index = 0; index < support; ++index) {
    std::uint64_t rest = index;
    for (int v = 2; v <= universe; ++v) {
      z[v] = static_cast<int>(rest % static_cast<std::uint64_t>(k)) + 1;
      rest /= static_cast<std::uint64_t>(k);
    }
    std::vector<Rational> values;
    values.reserve(coordinates.size());
    for (const Edge& e : coordinates) values.emplace_back(z[e.u] == z[e.v] ? 1 : 0);
    law.probability.push_back(weight);
    law.values.push_back(std::move(values));
  }
  return law;
}

Rational kappa_by_enumeration(const Multigraph& alpha, const MomentOracle& oracle, int universe) {
  std::vector<Edge> coordinates{oracle.target()};
  std::vector<int> variables{0};
  for (const auto& [e, m] : alpha.edges()) {
    const int index = static_cast<int>(coordinates.size());
    coordinates.push_back(e);
    for (int c = 0; c < m; ++c) variables.push_back(index);
  }
  return joint_cumulant(membership_distribution(oracle, universe, coordinates), variables);
}

}  // namespace graphon
