#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "distlab/instances.hpp"

namespace distlab {

struct Generated {
  Instance instance;
  Metric metric;
};

// Generated pair plus a distinguished agent order (serving order or priority).
struct OrderedGenerated {
  Instance instance;
  Metric metric;
  std::vector<AgentId> order;
};

// Agents at (k+1)t, items at 1+(k+1)t for t = 1..n; rightward ties.
Generated gen_line(std::size_t n, const Rational& k);

// Cycle b_1, a_1, ..., a_n with |b_1 a_1| = 1 and every other edge D;
// b_t sits on a_t for t >= 2.
Generated gen_polygon(std::size_t n, const Rational& D);

struct DominoInstance {
  Instance instance;
  Metric metric;
  std::size_t ell;
  std::vector<std::vector<AgentId>> agent_blocks;  // A_0..A_ell
  std::vector<std::vector<ItemId>> item_blocks;    // B_0..B_ell
  // b_t, the lowest-index item of B_t.
  ItemId special(std::size_t t) const { return item_blocks[t].front(); }
  // a_t, the lowest-index agent of A_t.
  AgentId leader(std::size_t t) const { return agent_blocks[t].front(); }
};

DominoInstance gen_domino(std::size_t ell);

// Balanced binary tree: agents at the leaves, items at internal vertices in
// in-order, plus item u above the root v. Points use metric indexing.
struct TreeInstance {
  std::size_t ell = 0;
  std::size_t n = 0;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<Rational> parent_weight;
  ItemId u{}, v{}, left{}, right{};

  std::vector<std::size_t> children(std::size_t point) const;
  std::vector<ItemId> subtree_items(std::size_t point) const;
  std::vector<AgentId> subtree_agents(std::size_t point) const;
  Metric metric() const;
};

struct TreeGenerated {
  TreeInstance tree;
  Instance instance;
  Metric metric;
};

enum class TreeTies {
  ByItemIndex,
  // a_1's ByItemIndex list carried to every agent by the bit-flip map
  // sending a_1 to it, so the profile is invariant under those maps.
  Symmetric,
};

// weights[0] is the u-v edge, weights[ell] the leaf edges.
TreeGenerated gen_tree_instance(std::size_t ell, const std::vector<Rational>& weights,
                                TreeTies ties = TreeTies::ByItemIndex);
TreeGenerated gen_tree8();

// Bit-flip tree automorphism for mask m, on metric points (u is fixed).
std::size_t tree_flip(std::size_t ell, std::size_t mask, std::size_t point);
// d'(x, y) = d(f(x), f(y)) with f = tree_flip(ell, mask, .).
Metric relabel(const Metric& d, std::size_t ell, std::size_t mask);

struct MetricFamily {
  Instance instance;
  std::vector<Metric> metrics;
};

// Throws ConsistencyFailure naming the first inconsistent member (0-based).
MetricFamily make_family(Instance instance, std::vector<Metric> metrics);

// Unit-edge metric of the drawn eight-agent graph, taken as exhaustive.
Metric tree8_drawn_metric();
// The drawn graph plus edge a_8-b_5 (length 1) and a_5-b_1, a_6-b_1 (length 5).
Metric tree8_base_metric();
// Members d_1..d_8: d_{i+1} = relabel(d1, 3, i).
MetricFamily tree8_family_from(const Metric& d1);
MetricFamily gen_tree8_family();

// Agents at 1, 2, ..., 2^{n-1}; items at -eps, 2, ..., 2^{n-1}.
OrderedGenerated gen_sd_exponential(std::size_t n, const Rational& eps);
// One agent at 1, one item at -eps, t agents and t items at 2^t for t < k.
OrderedGenerated gen_boston(std::size_t k, const Rational& eps);

// Shortest-path closure of a random complete graph on 2n points with small
// rational edge lengths (zero allowed).
Metric random_metric(std::size_t n, std::uint64_t seed);

// Shortest paths on 2n points from weighted undirected edges.
struct Edge {
  std::size_t x, y;
  Rational length;
};
Metric graph_metric(std::size_t n, const std::vector<Edge>& edges);

nlohmann::json to_json(const MetricFamily& family);
MetricFamily family_from_json(const nlohmann::json& j);

}  // namespace distlab
