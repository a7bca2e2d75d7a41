#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "distlab/generators.hpp"
#include "distlab/instances.hpp"
#include "distlab/matching.hpp"

namespace distlab {

struct Cluster {
  std::vector<AgentId> members;  // ascending
  AgentId representative{};
  std::size_t size() const { return members.size(); }
  bool operator==(const Cluster&) const = default;
};

struct MergeEvent {
  std::size_t step = 0;
  Cluster survivor;  // S_i, whose representative is kept
  Cluster absorbed;  // S_j
  std::uint64_t w_survivor = 1, w_absorbed = 1, w_merged = 1;
};

struct MergeTrace {
  std::size_t n = 0;
  std::size_t k = 1;
  std::vector<MergeEvent> events;
  std::vector<Cluster> final_sets;  // ordered by smallest member
  std::vector<std::uint64_t> final_weights;
};

// w(S_i u S_j) for |S_i| >= |S_j|.
std::uint64_t merge_weight(std::uint64_t w_i, std::size_t size_i, std::uint64_t w_j, std::size_t size_j,
                           std::size_t k);

// Same merges, weights recomputed for another k.
MergeTrace reweight(const MergeTrace& trace, std::size_t k);

// Unordered pair of indices into the current set list.
using SetPair = std::pair<std::size_t, std::size_t>;

struct RepMatchPolicy {
  // Picks the next merge among `eligible` (nonempty); the result is re-checked.
  std::function<SetPair(std::span<const Cluster> sets, std::span<const SetPair> eligible)> merge_selector;
  // Chooses the surviving representative when both sets have equal size.
  std::function<AgentId(const Cluster& a, const Cluster& b)> tie_promoter;
  // Returns items for s.members in order; must permute `favorites`.
  std::function<std::vector<ItemId>(const Cluster& s, std::span<const ItemId> favorites)> item_assigner;
};

// Least eligible pair by smallest members; on size ties keep the set with the
// smaller smallest member; members in ascending order take the favorites in
// the representative's order.
RepMatchPolicy default_policy();
// Uniform choices driven by Lcg64(seed).
RepMatchPolicy random_policy(std::uint64_t seed);

struct RepMatchResult {
  Matching matching;
  MergeTrace trace;
};

RepMatchResult repmatch(const Instance& instance, const RepMatchPolicy& policy, std::size_t k);

struct ScriptStep {
  AgentId first{}, second{};  // any current member of each set
  AgentId promote{};
};

struct MergeScript {
  std::vector<ScriptStep> merges;
  std::vector<std::pair<AgentId, ItemId>> assign;
};

// Replays the scripted merges, then keeps merging with the default policy
// until no eligible pair is left. Pinned agents take their scripted items;
// the rest follow the default assigner on the remaining favorites.
RepMatchResult replay_script(const Instance& instance, const MergeScript& script, std::size_t k);

// Two-phase adversarial script: pair up each A_t until a_t represents it,
// then cascade a_0 -> a_1 -> ... -> a_ell; A_ell agents are sent outside B_ell.
MergeScript domino_script(const DominoInstance& d);

Matching serial_dictatorship(const Instance& instance, std::span<const AgentId> order);
// Each round every unmatched agent proposes to its favorite unassigned item;
// an item accepts its highest-priority proposer.
Matching boston(const Instance& instance, std::span<const AgentId> priority);
// Fisher-Yates over Lcg64(seed): for i = n-1..1, swap i with next() % (i+1).
std::vector<AgentId> random_order(std::size_t n, std::uint64_t seed);
Matching random_serial_dictatorship(const Instance& instance, std::uint64_t seed);

nlohmann::json to_json(const MergeTrace& trace);
MergeTrace trace_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MergeScript& script);
MergeScript script_from_json(const nlohmann::json& j);

}  // namespace distlab
