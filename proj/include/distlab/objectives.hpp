#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distlab/instances.hpp"
#include "distlab/matching.hpp"

namespace distlab {

// Per-agent distances; unmatched agents contribute 0.
std::vector<Rational> cost_vector(const Matching& m, const Metric& metric);

// Sum of the k largest entries of the cost vector, 1 <= k <= n.
Rational cost_topk(const Matching& m, const Metric& metric, std::size_t k);

// cost_topk of m restricted to `subset`; agents outside it contribute 0.
Rational cost_restricted(const Matching& m, const Metric& metric, std::span<const AgentId> subset, std::size_t k);

class OwaWeights {
 public:
  // Nonincreasing, nonnegative, not all zero; otherwise InvalidParam.
  explicit OwaWeights(std::vector<Rational> w);
  static OwaWeights top_k(std::size_t n, std::size_t k);
  const std::vector<Rational>& weights() const { return w_; }
  std::size_t size() const { return w_.size(); }

 private:
  std::vector<Rational> w_;
};

Rational cost_owa(const Matching& m, const Metric& metric, const OwaWeights& weights);

struct OptimalMatching {
  Matching matching;
  Rational value;
};

// Every solver returns the lexicographically least optimal assignment array.
OptimalMatching optimal_sum(const Metric& metric);
OptimalMatching optimal_max(const Metric& metric);
OptimalMatching optimal_topk(const Metric& metric, std::size_t k, unsigned jobs = 1);

// Exhaustive oracles over all n! perfect matchings (n <= 9, else TooLarge).
OptimalMatching brute_force_optimal(const Metric& metric, std::size_t k);
// Entry k-1 is the oracle answer for k.
std::vector<OptimalMatching> brute_force_optimal_all(const Metric& metric);
OptimalMatching brute_force_optimal_owa(const Metric& metric, const OwaWeights& weights);

}  // namespace distlab
