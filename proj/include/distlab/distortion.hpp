#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "distlab/generators.hpp"
#include "distlab/instances.hpp"
#include "distlab/matching.hpp"
#include "distlab/mechanisms.hpp"
#include "distlab/objectives.hpp"

namespace distlab {

// cost / optimum, with the two degenerate cases kept apart.
class Ratio {
 public:
  enum class Kind { Finite, Infinite, Indeterminate };

  static Ratio of(const Rational& cost, const Rational& optimum);
  static Ratio finite(const Rational& v) { return Ratio(Kind::Finite, v); }
  static Ratio infinite() { return Ratio(Kind::Infinite, Rational(0)); }

  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  // The finite value; 1 for Indeterminate. Undefined for Infinite.
  const Rational& value() const { return value_; }
  Ratio times(const Rational& factor) const;
  std::string str() const;

  friend bool operator<(const Ratio& a, const Ratio& b);
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
  friend bool operator==(const Ratio& a, const Ratio& b) { return !(a < b) && !(b < a); }

 private:
  Ratio(Kind k, Rational v) : kind_(k), value_(std::move(v)) {}
  Kind kind_;
  Rational value_;
};

Ratio min(const Ratio& a, const Ratio& b);

Ratio distortion(const Matching& m, const Metric& metric, std::size_t k);
Ratio fairness_ratio(const Matching& m, const Metric& metric);

struct DistortionReport {
  std::vector<Rational> cost;     // entry k-1
  std::vector<Rational> optimum;  // entry k-1
  std::vector<Ratio> ratio;       // entry k-1
  Ratio fairness = Ratio::finite(Rational(1));
  std::size_t argmax_k = 1;
  AgentId worst_agent{};  // largest distance, lowest index on ties
};

DistortionReport distortion_report(const Matching& m, const Metric& metric, unsigned jobs = 1);

struct FamilyDistortion {
  Ratio value;
  std::size_t member;  // 0-based, first maximizer
};

FamilyDistortion family_distortion(const Matching& m, const MetricFamily& family, std::size_t k);

struct Certificate {
  std::string claim;
  bool pass = false;
  std::uint64_t checked = 0;
  nlohmann::json witness = nlohmann::json::object();
};

nlohmann::json to_json(const Certificate& c);

// Every perfect matching of the eight-agent tree instance has family
// max-distortion >= 7. Throws ConstructionError on an inconsistent family.
Certificate certify_thm7(const MetricFamily& family, unsigned jobs = 1);
Certificate certify_thm7(unsigned jobs = 1);

struct TreeWitness {
  AgentId agent;
  int property;  // 1 or 2
  ItemId preferred;  // item that should have been ranked higher
  ItemId other;
};

struct TreeCheck {
  std::optional<TreeWitness> witness;
  bool ok() const { return !witness.has_value(); }
};

TreeCheck verify_tree_properties(const TreeInstance& tree, const Instance& instance);

// Every perfect matching has max-distortion <= 7 under `metric`. Throws
// PropertyViolation if the tree properties fail or `metric` is not consistent
// with `instance`.
Certificate certify_prop_ub_tree(const TreeInstance& tree, const Instance& instance, const Metric& metric,
                                 unsigned jobs = 1);

// Replays the two-phase script on gen_domino(ell) and checks
// cost_k >= min(k, 2^{ell-1}) 2^{ell-1} with optimum 1.
Certificate certify_domino(std::size_t ell, std::size_t k);

// Checks the trace's structure, the weight recurrence, the representative
// distance invariant after every merge, the weight growth bound, the final
// per-agent bound and the final weight bound. `optimum` is M*_k.
Certificate audit_repmatch_trace(const MergeTrace& trace, const Matching& matching, const Metric& metric,
                                 std::size_t k, const OptimalMatching& optimum);
Certificate audit_repmatch_trace(const MergeTrace& trace, const Matching& matching, const Metric& metric,
                                 std::size_t k);

// cost_k(m) <= 2k^2 (n/k)^{log2 3} * optimal_topk.
Certificate check_repmatch_bound(const Matching& m, const Metric& metric, std::size_t k,
                                 const Rational& optimum);

// fairness <= n min(D_1, D_n), and D_k <= n D_1, D_k <= n D_n for every k.
Certificate check_fairness_bound(const Matching& m, const Metric& metric);

// OWA distortion <= fairness ratio; brute-force OWA optimum, n <= 8.
Certificate check_owa_dominance(const Matching& m, const Metric& metric, const OwaWeights& weights);

// The superadditivity claim on at least `samples` grid points plus exact
// power-of-two boundary cases.
Certificate check_appendix_b_claim(std::size_t samples);

// Batch drivers used by the command line and the acceptance suite.
Certificate certify_audit_suite(std::size_t random_policies, std::uint64_t seed);
Certificate certify_fairness_suite(std::size_t trials, std::uint64_t seed);
Certificate certify_owa_suite(std::size_t trials, std::uint64_t seed);
Certificate certify_solver_oracle(std::size_t trials, std::size_t max_n, std::uint64_t seed, unsigned jobs = 1);

}  // namespace distlab
