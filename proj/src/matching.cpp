#include "distlab/matching.hpp"

namespace distlab {

Matching::Matching(std::vector<std::optional<ItemId>> assignment) : assignment_(std::move(assignment)) {
  std::vector<bool> used(assignment_.size(), false);
  for (const auto& b : assignment_) {
    if (!b) continue;
    if (index(*b) >= used.size()) throw InvalidParam("matched item out of range");
    if (used[index(*b)]) throw InvalidParam("matching assigns an item twice");
    used[index(*b)] = true;
  }
}

Matching Matching::from_items(const std::vector<std::size_t>& items) {
  std::vector<std::optional<ItemId>> a;
  a.reserve(items.size());
  for (std::size_t j : items) a.emplace_back(item(j));
  return Matching(std::move(a));
}

bool Matching::is_perfect() const {
  for (const auto& b : assignment_)
    if (!b) return false;
  return true;
}

std::optional<AgentId> Matching::owner(ItemId b) const {
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    if (assignment_[i] == b) return agent(i);
  return std::nullopt;
}

std::vector<std::size_t> Matching::items_or_n() const {
  std::vector<std::size_t> v;
  for (const auto& b : assignment_) v.push_back(b ? index(*b) : assignment_.size());
  return v;
}

nlohmann::json to_json(const Matching& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : m.assignment()) {
    if (b) arr.push_back(index(*b));
    else arr.push_back(nullptr);
  }
  return {{"assignment", std::move(arr)}};
}

Matching matching_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("assignment") || !j["assignment"].is_array())
    throw InvalidParam("matching JSON needs an 'assignment' array");
  std::vector<std::optional<ItemId>> a;
  for (const auto& v : j["assignment"]) {
    if (v.is_null()) a.emplace_back();
    else if (v.is_number_unsigned()) a.emplace_back(item(v.get<std::size_t>()));
    else throw InvalidParam("assignment entries must be item indices or null");
  }
  return Matching(std::move(a));
}

}  // namespace distlab
