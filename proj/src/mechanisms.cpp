#include "distlab/mechanisms.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>

#include "distlab/random.hpp"

namespace distlab {

std::uint64_t merge_weight(std::uint64_t w_i, std::size_t size_i, std::uint64_t w_j, std::size_t size_j,
                           std::size_t k) {
  if (size_i + size_j <= k) return std::max(2 * w_j, w_i);
  return 2 * w_j + w_i;
}

MergeTrace reweight(const MergeTrace& trace, std::size_t k) {
  if (k < 1 || k > trace.n) throw RangeError("k must lie in [1, n]");
  MergeTrace out = trace;
  out.k = k;
  std::map<std::size_t, std::uint64_t> w;  // representative -> weight
  for (std::size_t i = 0; i < trace.n; ++i) w[i] = 1;
  for (auto& e : out.events) {
    e.w_survivor = w.at(index(e.survivor.representative));
    e.w_absorbed = w.at(index(e.absorbed.representative));
    e.w_merged = merge_weight(e.w_survivor, e.survivor.size(), e.w_absorbed, e.absorbed.size(), k);
    w.erase(index(e.absorbed.representative));
    w[index(e.survivor.representative)] = e.w_merged;
  }
  out.final_weights.clear();
  for (const auto& s : out.final_sets) out.final_weights.push_back(w.at(index(s.representative)));
  return out;
}

namespace {

class Engine {
 public:
  Engine(const Instance& inst, std::size_t k) : inst_(inst), k_(k) {
    if (k < 1 || k > inst.n()) throw RangeError("k must lie in [1, n]");
    for (std::size_t i = 0; i < inst.n(); ++i) {
      sets_.push_back({{agent(i)}, agent(i)});
      weights_.push_back(1);
    }
  }

  const std::vector<Cluster>& sets() const { return sets_; }

  bool eligible(std::size_t i, std::size_t j) const {
    auto fi = inst_.favorites(sets_[i].representative, sets_[i].size());
    auto fj = inst_.favorites(sets_[j].representative, sets_[j].size());
    std::vector<bool> mark(inst_.n(), false);
    for (ItemId b : fi) mark[index(b)] = true;
    for (ItemId b : fj)
      if (mark[index(b)]) return true;
    return false;
  }

  std::vector<SetPair> eligible_pairs() const {
    std::vector<SetPair> out;
    for (std::size_t i = 0; i < sets_.size(); ++i)
      for (std::size_t j = i + 1; j < sets_.size(); ++j)
        if (eligible(i, j)) out.emplace_back(i, j);
    return out;
  }

  std::optional<std::size_t> find(AgentId a) const {
    for (std::size_t i = 0; i < sets_.size(); ++i)
      if (std::binary_search(sets_[i].members.begin(), sets_[i].members.end(), a)) return i;
    return std::nullopt;
  }

  // Caller guarantees eligibility and a legal representative.
  void merge(std::size_t i, std::size_t j, AgentId rep) {
    if (sets_[j].representative == rep) std::swap(i, j);
    MergeEvent e;
    e.step = events_.size();
    e.survivor = sets_[i];
    e.absorbed = sets_[j];
    e.w_survivor = weights_[i];
    e.w_absorbed = weights_[j];
    e.w_merged = merge_weight(weights_[i], sets_[i].size(), weights_[j], sets_[j].size(), k_);
    Cluster merged{sets_[i].members, rep};
    merged.members.insert(merged.members.end(), sets_[j].members.begin(), sets_[j].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    std::uint64_t w = e.w_merged;
    events_.push_back(std::move(e));
    for (std::size_t x : {std::max(i, j), std::min(i, j)}) {
      sets_.erase(sets_.begin() + static_cast<std::ptrdiff_t>(x));
      weights_.erase(weights_.begin() + static_cast<std::ptrdiff_t>(x));
    }
    auto pos = std::lower_bound(sets_.begin(), sets_.end(), merged,
                                [](const Cluster& a, const Cluster& b) { return a.members[0] < b.members[0]; });
    auto off = pos - sets_.begin();
    sets_.insert(pos, std::move(merged));
    weights_.insert(weights_.begin() + off, w);
  }

  // Larger set's representative, or nullopt on a size tie.
  std::optional<AgentId> forced_representative(std::size_t i, std::size_t j) const {
    if (sets_[i].size() > sets_[j].size()) return sets_[i].representative;
    if (sets_[j].size() > sets_[i].size()) return sets_[j].representative;
    return std::nullopt;
  }

  std::span<const ItemId> favorites(const Cluster& s) const { return inst_.favorites(s.representative, s.size()); }

  MergeTrace trace() const {
    MergeTrace t;
    t.n = inst_.n();
    t.k = k_;
    t.events = events_;
    t.final_sets = sets_;
    t.final_weights = weights_;
    return t;
  }

  void merge_with_policy(const RepMatchPolicy& policy) {
    for (auto pairs = eligible_pairs(); !pairs.empty(); pairs = eligible_pairs()) {
      auto [i, j] = policy.merge_selector(sets_, pairs);
      if (i >= sets_.size() || j >= sets_.size() || i == j || !eligible(i, j))
        throw PolicyError("merge selector returned an ineligible pair");
      AgentId rep;
      if (auto forced = forced_representative(i, j)) {
        rep = *forced;
      } else {
        rep = policy.tie_promoter(sets_[i], sets_[j]);
        if (rep != sets_[i].representative && rep != sets_[j].representative)
          throw PolicyError("tie promoter returned a non-representative");
      }
      merge(i, j, rep);
    }
  }

 private:
  const Instance& inst_;
  std::size_t k_;
  std::vector<Cluster> sets_;
  std::vector<std::uint64_t> weights_;
  std::vector<MergeEvent> events_;
};

bool is_permutation_of(const std::vector<ItemId>& got, std::span<const ItemId> want) {
  std::vector<ItemId> a(got), b(want.begin(), want.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

RepMatchPolicy default_policy() {
  RepMatchPolicy p;
  p.merge_selector = [](std::span<const Cluster>, std::span<const SetPair> eligible) { return eligible.front(); };
  p.tie_promoter = [](const Cluster& a, const Cluster& b) {
    return a.members.front() < b.members.front() ? a.representative : b.representative;
  };
  p.item_assigner = [](const Cluster&, std::span<const ItemId> favorites) {
    return std::vector<ItemId>(favorites.begin(), favorites.end());
  };
  return p;
}

RepMatchPolicy random_policy(std::uint64_t seed) {
  auto rng = std::make_shared<Lcg64>(seed);
  RepMatchPolicy p;
  p.merge_selector = [rng](std::span<const Cluster>, std::span<const SetPair> eligible) {
    return eligible[rng->below(static_cast<std::uint32_t>(eligible.size()))];
  };
  p.tie_promoter = [rng](const Cluster& a, const Cluster& b) {
    return rng->below(2) == 0 ? a.representative : b.representative;
  };
  p.item_assigner = [rng](const Cluster&, std::span<const ItemId> favorites) {
    std::vector<ItemId> out(favorites.begin(), favorites.end());
    for (std::size_t i = out.size(); i-- > 1;) std::swap(out[i], out[rng->below(static_cast<std::uint32_t>(i + 1))]);
    return out;
  };
  return p;
}

RepMatchResult repmatch(const Instance& instance, const RepMatchPolicy& policy, std::size_t k) {
  Engine eng(instance, k);
  eng.merge_with_policy(policy);
  std::vector<std::optional<ItemId>> assignment(instance.n());
  for (const auto& s : eng.sets()) {
    auto fav = eng.favorites(s);
    auto items = policy.item_assigner(s, fav);
    if (items.size() != s.size() || !is_permutation_of(items, fav))
      throw PolicyError("item assigner must permute the representative's favorite items");
    for (std::size_t r = 0; r < s.size(); ++r) assignment[index(s.members[r])] = items[r];
  }
  return {Matching(std::move(assignment)), eng.trace()};
}

RepMatchResult replay_script(const Instance& instance, const MergeScript& script, std::size_t k) {
  Engine eng(instance, k);
  const std::size_t n = instance.n();
  for (std::size_t s = 0; s < script.merges.size(); ++s) {
    const auto& st = script.merges[s];
    if (index(st.first) >= n || index(st.second) >= n || index(st.promote) >= n)
      throw IneligibleStep(s, "agent index out of range");
    std::size_t i = *eng.find(st.first), j = *eng.find(st.second);
    if (i == j) throw IneligibleStep(s, "both agents are already in the same set");
    if (!eng.eligible(i, j)) throw IneligibleStep(s, "representatives share no favorite item");
    const auto& sets = eng.sets();
    if (st.promote != sets[i].representative && st.promote != sets[j].representative)
      throw IneligibleStep(s, "promoted agent is not a representative of either set");
    if (auto forced = eng.forced_representative(i, j); forced && *forced != st.promote)
      throw IneligibleStep(s, "size-based promotion requires the larger set's representative");
    eng.merge(i, j, st.promote);
  }
  eng.merge_with_policy(default_policy());

  std::vector<std::optional<ItemId>> assignment(n);
  std::map<std::size_t, ItemId> pins;
  for (auto [a, b] : script.assign) {
    if (index(a) >= n || index(b) >= n) throw IneligibleStep(script.merges.size(), "assignment index out of range");
    if (!pins.emplace(index(a), b).second)
      throw IneligibleStep(script.merges.size(), "agent pinned twice");
  }
  for (const auto& s : eng.sets()) {
    auto fav = eng.favorites(s);
    std::vector<bool> taken(fav.size(), false);
    auto slot = [&](ItemId b) { return std::find(fav.begin(), fav.end(), b) - fav.begin(); };
    for (AgentId a : s.members) {
      auto it = pins.find(index(a));
      if (it == pins.end()) continue;
      auto pos = static_cast<std::size_t>(slot(it->second));
      if (pos == fav.size())
        throw IneligibleStep(script.merges.size(), "pinned item is not among the representative's favorites");
      if (taken[pos]) throw IneligibleStep(script.merges.size(), "pinned item used twice");
      taken[pos] = true;
      assignment[index(a)] = it->second;
    }
    std::size_t next = 0;
    for (AgentId a : s.members) {
      if (assignment[index(a)]) continue;
      while (taken[next]) ++next;
      taken[next] = true;
      assignment[index(a)] = fav[next];
    }
  }
  return {Matching(std::move(assignment)), eng.trace()};
}

MergeScript domino_script(const DominoInstance& d) {
  MergeScript s;
  for (std::size_t t = 1; t <= d.ell; ++t) {
    const auto& block = d.agent_blocks[t];
    for (std::size_t width = 1; width < block.size(); width *= 2)
      for (std::size_t lo = 0; lo + width < block.size(); lo += 2 * width)
        s.merges.push_back({block[lo], block[lo + width], block[lo]});
  }
  for (std::size_t t = 1; t <= d.ell; ++t) s.merges.push_back({d.leader(t - 1), d.leader(t), d.leader(t)});
  const auto& top = d.item_blocks[d.ell];
  std::vector<ItemId> outside, inside(top.begin(), top.end());
  for (std::size_t j = 0; j < d.instance.n(); ++j)
    if (std::find(top.begin(), top.end(), item(j)) == top.end()) outside.push_back(item(j));
  const auto& last = d.agent_blocks[d.ell];
  std::size_t o = 0, in = 0;
  for (std::size_t i = 0; i < d.instance.n(); ++i) {
    bool in_last = std::find(last.begin(), last.end(), agent(i)) != last.end();
    s.assign.emplace_back(agent(i), in_last ? outside[o++] : inside[in++]);
  }
  return s;
}

namespace {

void check_order(std::span<const AgentId> order, std::size_t n) {
  if (order.size() != n) throw InvalidOrder("order must list every agent exactly once");
  std::vector<bool> seen(n, false);
  for (AgentId a : order) {
    if (index(a) >= n || seen[index(a)]) throw InvalidOrder("order must list every agent exactly once");
    seen[index(a)] = true;
  }
}

}  // namespace

Matching serial_dictatorship(const Instance& instance, std::span<const AgentId> order) {
  const std::size_t n = instance.n();
  check_order(order, n);
  std::vector<bool> taken(n, false);
  std::vector<std::optional<ItemId>> out(n);
  for (AgentId a : order)
    for (ItemId b : instance.preferences(a))
      if (!taken[index(b)]) {
        taken[index(b)] = true;
        out[index(a)] = b;
        break;
      }
  return Matching(std::move(out));
}

Matching boston(const Instance& instance, std::span<const AgentId> priority) {
  const std::size_t n = instance.n();
  check_order(priority, n);
  std::vector<bool> taken(n, false);
  std::vector<std::optional<ItemId>> out(n);
  std::size_t matched = 0;
  while (matched < n) {
    // Priority order means the first proposer to reach an item wins it.
    std::vector<std::optional<AgentId>> winner(n);
    for (AgentId a : priority) {
      if (out[index(a)]) continue;
      for (ItemId b : instance.preferences(a))
        if (!taken[index(b)]) {
          if (!winner[index(b)]) winner[index(b)] = a;
          break;
        }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (winner[j]) {
        taken[j] = true;
        out[index(*winner[j])] = item(j);
        ++matched;
      }
  }
  return Matching(std::move(out));
}

std::vector<AgentId> random_order(std::size_t n, std::uint64_t seed) {
  std::vector<AgentId> order;
  for (std::size_t i = 0; i < n; ++i) order.push_back(agent(i));
  Lcg64 rng(seed);
  for (std::size_t i = n; i-- > 1;) std::swap(order[i], order[rng.next() % (i + 1)]);
  return order;
}

Matching random_serial_dictatorship(const Instance& instance, std::uint64_t seed) {
  return serial_dictatorship(instance, random_order(instance.n(), seed));
}

namespace {

nlohmann::json cluster_json(const Cluster& c, std::uint64_t w) {
  nlohmann::json members = nlohmann::json::array();
  for (AgentId a : c.members) members.push_back(index(a));
  return {{"members", std::move(members)}, {"representative", index(c.representative)}, {"weight", w}};
}

Cluster cluster_from(const nlohmann::json& j, std::uint64_t& w) {
  Cluster c;
  for (const auto& a : j.at("members")) c.members.push_back(agent(a.get<std::size_t>()));
  c.representative = agent(j.at("representative").get<std::size_t>());
  w = j.at("weight").get<std::uint64_t>();
  return c;
}

}  // namespace

nlohmann::json to_json(const MergeTrace& t) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : t.events)
    events.push_back({{"step", e.step},
                      {"survivor", cluster_json(e.survivor, e.w_survivor)},
                      {"absorbed", cluster_json(e.absorbed, e.w_absorbed)},
                      {"sizes", {e.survivor.size(), e.absorbed.size()}},
                      {"weight", e.w_merged}});
  nlohmann::json fin = nlohmann::json::array();
  for (std::size_t i = 0; i < t.final_sets.size(); ++i) fin.push_back(cluster_json(t.final_sets[i], t.final_weights[i]));
  return {{"n", t.n}, {"k", t.k}, {"events", std::move(events)}, {"final", std::move(fin)}};
}

MergeTrace trace_from_json(const nlohmann::json& j) {
  try {
    MergeTrace t;
    t.n = j.at("n").get<std::size_t>();
    t.k = j.at("k").get<std::size_t>();
    for (const auto& e : j.at("events")) {
      MergeEvent ev;
      ev.step = e.at("step").get<std::size_t>();
      ev.survivor = cluster_from(e.at("survivor"), ev.w_survivor);
      ev.absorbed = cluster_from(e.at("absorbed"), ev.w_absorbed);
      ev.w_merged = e.at("weight").get<std::uint64_t>();
      t.events.push_back(std::move(ev));
    }
    for (const auto& f : j.at("final")) {
      std::uint64_t w;
      t.final_sets.push_back(cluster_from(f, w));
      t.final_weights.push_back(w);
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParam(std::string("malformed trace JSON: ") + e.what());
  }
}

nlohmann::json to_json(const MergeScript& s) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : s.merges)
    merges.push_back({{"sets", {index(m.first), index(m.second)}}, {"promote", index(m.promote)}});
  nlohmann::json assign = nlohmann::json::object();
  for (auto [a, b] : s.assign) assign[std::to_string(index(a))] = index(b);
  return {{"merges", std::move(merges)}, {"assign", std::move(assign)}};
}

MergeScript script_from_json(const nlohmann::json& j) {
  try {
    MergeScript s;
    if (j.contains("merges"))
      for (const auto& m : j.at("merges")) {
        const auto& sets = m.at("sets");
        if (!sets.is_array() || sets.size() != 2) throw InvalidParam("'sets' must name two agents");
        s.merges.push_back({agent(sets[0].get<std::size_t>()), agent(sets[1].get<std::size_t>()),
                            agent(m.at("promote").get<std::size_t>())});
      }
    if (j.contains("assign"))
      for (const auto& [key, value] : j.at("assign").items())
        s.assign.emplace_back(agent(std::stoul(key)), item(value.get<std::size_t>()));
    std::sort(s.assign.begin(), s.assign.end());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParam(std::string("malformed merge script JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw InvalidParam(std::string("malformed merge script JSON: ") + e.what());
  }
}

}  // namespace distlab
