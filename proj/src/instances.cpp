#include "distlab/instances.hpp"

#include <algorithm>
#include <numeric>

namespace distlab {

Instance::Instance(std::vector<PreferenceList> preferences) : prefs_(std::move(preferences)) {
  const std::size_t n = prefs_.size();
  if (n < 2) throw InvalidParam("an instance needs at least 2 agents");
  rank_.assign(n, std::vector<std::size_t>(n, n));
  for (std::size_t a = 0; a < n; ++a) {
    if (prefs_[a].size() != n)
      throw InvalidParam("preference list of agent " + std::to_string(a) + " has wrong length");
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t b = index(prefs_[a][r]);
      if (b >= n || rank_[a][b] != n)
        throw InvalidParam("preference list of agent " + std::to_string(a) + " is not a permutation");
      rank_[a][b] = r;
    }
  }
}

std::span<const ItemId> Instance::favorites(AgentId a, std::size_t count) const {
  const auto& list = prefs_[index(a)];
  return std::span<const ItemId>(list.data(), std::min(count, list.size()));
}

std::vector<std::vector<Rational>> Metric::matrix() const {
  std::vector<std::vector<Rational>> m(points(), std::vector<Rational>(points()));
  for (std::size_t x = 0; x < points(); ++x)
    for (std::size_t y = 0; y < points(); ++y) m[x][y] = (*this)(x, y);
  return m;
}

Metric Metric::scaled(const Rational& factor) const {
  if (sgn(factor) <= 0) throw InvalidParam("scale factor must be positive");
  Metric m = *this;
  for (auto& v : m.d_) v *= factor;
  return m;
}

Metric validate_metric(const std::vector<std::vector<Rational>>& dist) {
  const std::size_t side = dist.size();
  if (side < 4 || side % 2 != 0) throw DimensionMismatch("metric side must be 2n with n >= 2");
  for (const auto& row : dist)
    if (row.size() != side) throw DimensionMismatch("metric matrix is not square");
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = 0; y < side; ++y)
      if (sgn(dist[x][y]) < 0) throw AxiomViolation(Axiom::Nonnegativity, x, y, y);
  for (std::size_t x = 0; x < side; ++x)
    if (sgn(dist[x][x]) != 0) throw AxiomViolation(Axiom::Identity, x, x, x);
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = x + 1; y < side; ++y)
      if (dist[x][y] != dist[y][x]) throw AxiomViolation(Axiom::Symmetry, x, y, y);
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = 0; y < side; ++y)
      for (std::size_t z = 0; z < side; ++z)
        if (dist[x][y] > dist[x][z] + dist[z][y]) throw AxiomViolation(Axiom::Triangle, x, y, z);
  Metric m;
  m.n_ = side / 2;
  m.d_.reserve(side * side);
  for (const auto& row : dist) m.d_.insert(m.d_.end(), row.begin(), row.end());
  return m;
}

namespace {

std::vector<std::size_t> positions(const std::vector<ItemId>& priority, std::size_t n) {
  std::vector<std::size_t> pos(n, n);
  if (priority.size() != n) throw InvalidParam("tie-break priority must list every item once");
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t b = index(priority[r]);
    if (b >= n || pos[b] != n) throw InvalidParam("tie-break priority must list every item once");
    pos[b] = r;
  }
  return pos;
}

}  // namespace

TieBreak TieBreak::by_item_index() { return TieBreak{}; }

TieBreak TieBreak::rightward_then_special(std::vector<ItemId> priority) {
  TieBreak t;
  t.kind_ = Kind::RightwardThenSpecial;
  t.position_.push_back(positions(priority, priority.size()));
  return t;
}

TieBreak TieBreak::per_agent(std::vector<std::vector<ItemId>> priorities) {
  TieBreak t;
  t.kind_ = Kind::PerAgent;
  for (const auto& p : priorities) t.position_.push_back(positions(p, priorities.size()));
  return t;
}

std::size_t TieBreak::priority(AgentId a, ItemId b) const {
  switch (kind_) {
    case Kind::ByItemIndex: return index(b);
    case Kind::RightwardThenSpecial: return position_.at(0).at(index(b));
    case Kind::PerAgent: return position_.at(index(a)).at(index(b));
  }
  return index(b);
}

Instance derive_preferences(const Metric& metric, const TieBreak& tiebreak) {
  const std::size_t n = metric.n();
  std::vector<PreferenceList> prefs(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentId a = agent(i);
    auto& list = prefs[i];
    for (std::size_t j = 0; j < n; ++j) list.push_back(item(j));
    std::sort(list.begin(), list.end(), [&](ItemId x, ItemId y) {
      int c = cmp(metric(a, x), metric(a, y));
      if (c != 0) return c < 0;
      return tiebreak.priority(a, x) < tiebreak.priority(a, y);
    });
  }
  return Instance(std::move(prefs));
}

ConsistencyResult is_consistent(const Metric& metric, const Instance& instance) {
  if (metric.n() != instance.n()) throw DimensionMismatch("metric and instance sizes differ");
  const std::size_t n = instance.n();
  for (std::size_t i = 0; i < n; ++i) {
    AgentId a = agent(i);
    const auto& list = instance.preferences(a);
    // suffix_min[r] = position of the closest item among list[r..], earliest on ties
    std::vector<std::size_t> suffix_min(n);
    suffix_min[n - 1] = n - 1;
    for (std::size_t r = n - 1; r-- > 0;)
      suffix_min[r] = metric(a, list[r]) <= metric(a, list[suffix_min[r + 1]]) ? r : suffix_min[r + 1];
    for (std::size_t r = 0; r + 1 < n; ++r) {
      std::size_t m = suffix_min[r + 1];
      if (metric(a, list[r]) > metric(a, list[m])) return {ConsistencyWitness{a, list[r], list[m]}};
    }
  }
  return {};
}

ConsistencyFailure::ConsistencyFailure(std::size_t member, ConsistencyWitness w)
    : Error("metric " + std::to_string(member) + " is inconsistent: agent " + std::to_string(index(w.agent)) +
            " prefers item " + std::to_string(index(w.preferred)) + " over closer item " +
            std::to_string(index(w.other))),
      member(member), witness(w) {}

nlohmann::json to_json(const Instance& instance) {
  nlohmann::json prefs = nlohmann::json::array();
  for (const auto& list : instance.profile()) {
    nlohmann::json row = nlohmann::json::array();
    for (ItemId b : list) row.push_back(index(b));
    prefs.push_back(std::move(row));
  }
  return {{"n", instance.n()}, {"preferences", std::move(prefs)}};
}

nlohmann::json to_json(const Metric& metric) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t x = 0; x < metric.points(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t y = 0; y < metric.points(); ++y) row.push_back(to_string(metric(x, y)));
    rows.push_back(std::move(row));
  }
  return {{"dist", std::move(rows)}, {"n", metric.n()}};
}

namespace {

std::size_t read_n(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_unsigned())
    throw InvalidParam("JSON object with unsigned field 'n' expected");
  return j["n"].get<std::size_t>();
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j) {
  std::size_t n = read_n(j);
  if (!j.contains("preferences") || !j["preferences"].is_array()) throw InvalidParam("missing 'preferences'");
  std::vector<PreferenceList> prefs;
  for (const auto& row : j["preferences"]) {
    if (!row.is_array()) throw InvalidParam("preference row must be an array");
    PreferenceList list;
    for (const auto& v : row) {
      if (!v.is_number_unsigned()) throw InvalidParam("item indices must be unsigned integers");
      list.push_back(item(v.get<std::size_t>()));
    }
    prefs.push_back(std::move(list));
  }
  if (prefs.size() != n) throw DimensionMismatch("'n' disagrees with the number of preference lists");
  return Instance(std::move(prefs));
}

Metric metric_from_json(const nlohmann::json& j) {
  std::size_t n = read_n(j);
  if (!j.contains("dist") || !j["dist"].is_array()) throw InvalidParam("missing 'dist'");
  std::vector<std::vector<Rational>> dist;
  for (const auto& row : j["dist"]) {
    if (!row.is_array()) throw InvalidParam("distance row must be an array");
    std::vector<Rational> r;
    for (const auto& v : row) {
      if (v.is_string()) r.push_back(parse_rational(v.get<std::string>()));
      else if (v.is_number_integer()) r.emplace_back(v.get<long>());
      else throw InvalidParam("distances must be rational strings");
    }
    dist.push_back(std::move(r));
  }
  if (dist.size() != 2 * n) throw DimensionMismatch("'n' disagrees with the matrix side");
  return validate_metric(dist);
}

std::string dump(const nlohmann::json& j) { return j.dump() + "\n"; }

}  // namespace distlab
