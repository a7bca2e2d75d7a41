#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "distlab/instances.hpp"

namespace distlab {

// Agent -> item map, possibly partial. Injective over matched agents.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<std::optional<ItemId>> assignment);
  // Perfect matching from a permutation array (agent i -> items[i]).
  static Matching from_items(const std::vector<std::size_t>& items);

  std::size_t n() const { return assignment_.size(); }
  const std::optional<ItemId>& operator[](AgentId a) const { return assignment_[index(a)]; }
  const std::vector<std::optional<ItemId>>& assignment() const { return assignment_; }
  bool is_perfect() const;
  // The agent matched to b, if any.
  std::optional<AgentId> owner(ItemId b) const;

  bool operator==(const Matching&) const = default;
  auto operator<=>(const Matching& other) const { return items_or_n() <=> other.items_or_n(); }

 private:
  std::vector<std::size_t> items_or_n() const;
  std::vector<std::optional<ItemId>> assignment_;
};

nlohmann::json to_json(const Matching& m);
Matching matching_from_json(const nlohmann::json& j);

}  // namespace distlab
