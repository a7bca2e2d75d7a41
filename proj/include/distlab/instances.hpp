#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "distlab/errors.hpp"
#include "distlab/rational.hpp"

namespace distlab {

enum class AgentId : std::size_t {};
enum class ItemId : std::size_t {};

constexpr std::size_t index(AgentId a) { return static_cast<std::size_t>(a); }
constexpr std::size_t index(ItemId b) { return static_cast<std::size_t>(b); }
constexpr AgentId agent(std::size_t i) { return static_cast<AgentId>(i); }
constexpr ItemId item(std::size_t j) { return static_cast<ItemId>(j); }

using PreferenceList = std::vector<ItemId>;

class Instance {
 public:
  // Throws InvalidParam unless n >= 2 and every list is a permutation.
  explicit Instance(std::vector<PreferenceList> preferences);

  std::size_t n() const { return prefs_.size(); }
  const PreferenceList& preferences(AgentId a) const { return prefs_[index(a)]; }
  const std::vector<PreferenceList>& profile() const { return prefs_; }
  // Position of b in a's list, 0 = favorite.
  std::size_t rank(AgentId a, ItemId b) const { return rank_[index(a)][index(b)]; }
  bool prefers(AgentId a, ItemId x, ItemId y) const { return rank(a, x) < rank(a, y); }
  // The first `count` items of a's list.
  std::span<const ItemId> favorites(AgentId a, std::size_t count) const;

  bool operator==(const Instance& other) const { return prefs_ == other.prefs_; }

 private:
  std::vector<PreferenceList> prefs_;
  std::vector<std::vector<std::size_t>> rank_;
};

class Metric {
 public:
  std::size_t n() const { return n_; }
  std::size_t points() const { return 2 * n_; }
  const Rational& operator()(std::size_t x, std::size_t y) const { return d_[x * 2 * n_ + y]; }
  const Rational& operator()(AgentId a, ItemId b) const { return (*this)(index(a), n_ + index(b)); }
  const Rational& operator()(AgentId a, AgentId b) const { return (*this)(index(a), index(b)); }
  const Rational& operator()(ItemId a, ItemId b) const { return (*this)(n_ + index(a), n_ + index(b)); }
  std::size_t point(AgentId a) const { return index(a); }
  std::size_t point(ItemId b) const { return n_ + index(b); }

  // Row-major copy of the full matrix.
  std::vector<std::vector<Rational>> matrix() const;

  // Multiplies every distance by a positive rational.
  Metric scaled(const Rational& factor) const;

  bool operator==(const Metric& other) const { return n_ == other.n_ && d_ == other.d_; }

 private:
  friend Metric validate_metric(const std::vector<std::vector<Rational>>& dist);
  std::size_t n_ = 0;
  std::vector<Rational> d_;
};

// Checks side 2n with n >= 2, nonnegativity, zero diagonal, symmetry and
// the triangle inequality, in that order, throwing AxiomViolation on the
// first failure (DimensionMismatch for a malformed shape).
Metric validate_metric(const std::vector<std::vector<Rational>>& dist);

// Strict item priority used only to order items at exactly equal distance.
class TieBreak {
 public:
  enum class Kind { ByItemIndex, RightwardThenSpecial, PerAgent };

  static TieBreak by_item_index();
  // `priority` lists every item once, most preferred first, for all agents.
  static TieBreak rightward_then_special(std::vector<ItemId> priority);
  // One priority list per agent.
  static TieBreak per_agent(std::vector<std::vector<ItemId>> priorities);

  Kind kind() const { return kind_; }
  // Smaller is preferred among tied items.
  std::size_t priority(AgentId a, ItemId b) const;

 private:
  Kind kind_ = Kind::ByItemIndex;
  std::vector<std::vector<std::size_t>> position_;
};

Instance derive_preferences(const Metric& metric, const TieBreak& tiebreak);

// Agent `agent` ranks `preferred` above `other` although it is strictly farther.
struct ConsistencyWitness {
  AgentId agent;
  ItemId preferred;
  ItemId other;
  bool operator==(const ConsistencyWitness&) const = default;
};

struct ConsistencyResult {
  std::optional<ConsistencyWitness> witness;
  bool consistent() const { return !witness.has_value(); }
  explicit operator bool() const { return consistent(); }
};

// The witness is the first agent with a violation, its most preferred item
// that is farther than some later item, and the closest such later item
// (earliest in the list on ties).
ConsistencyResult is_consistent(const Metric& metric, const Instance& instance);

class ConsistencyFailure : public Error {
 public:
  ConsistencyFailure(std::size_t member, ConsistencyWitness witness);
  std::size_t member;
  ConsistencyWitness witness;
};

// JSON formats. Writers emit compact canonical text; readers accept any
// formatting and validate.
nlohmann::json to_json(const Instance& instance);
nlohmann::json to_json(const Metric& metric);
Instance instance_from_json(const nlohmann::json& j);
Metric metric_from_json(const nlohmann::json& j);
std::string dump(const nlohmann::json& j);

}  // namespace distlab
