#include <gtest/gtest.h>

#include <algorithm>

#include "distlab/generators.hpp"
#include "distlab/mechanisms.hpp"
#include "distlab/objectives.hpp"

using namespace distlab;

namespace {

Instance profile(std::vector<std::vector<std::size_t>> lists) {
  std::vector<PreferenceList> p;
  for (auto& l : lists) {
    PreferenceList pl;
    for (auto j : l) pl.push_back(item(j));
    p.push_back(pl);
  }
  return Instance(p);
}

std::vector<AgentId> agents(std::initializer_list<std::size_t> v) {
  std::vector<AgentId> out;
  for (auto i : v) out.push_back(agent(i));
  return out;
}

}  // namespace

TEST(MergeWeight, Recurrence) {
  // Fits in k: max(2 w_j, w_i); otherwise 2 w_j + w_i.
  EXPECT_EQ(merge_weight(1, 1, 1, 1, 2), 2u);
  EXPECT_EQ(merge_weight(1, 1, 1, 1, 1), 3u);
  EXPECT_EQ(merge_weight(5, 3, 1, 1, 4), 5u);
  EXPECT_EQ(merge_weight(5, 3, 1, 1, 3), 7u);
}

TEST(RepMatch, DisjointFavoritesNeverMerge) {
  Instance inst = profile({{0, 1}, {1, 0}});
  auto r = repmatch(inst, default_policy(), 1);
  EXPECT_TRUE(r.trace.events.empty());
  EXPECT_EQ(r.matching, Matching::from_items({0, 1}));
  EXPECT_EQ(r.trace.final_weights, (std::vector<std::uint64_t>{1, 1}));
  auto replay = replay_script(inst, MergeScript{}, 1);
  EXPECT_EQ(replay.matching, r.matching);
  EXPECT_TRUE(replay.trace.events.empty());
}

TEST(RepMatch, SharedFavoriteMergesOnce) {
  Instance inst = profile({{0, 1}, {0, 1}});
  auto r = repmatch(inst, default_policy(), 2);
  ASSERT_EQ(r.trace.events.size(), 1u);
  ASSERT_EQ(r.trace.final_sets.size(), 1u);
  EXPECT_EQ(r.trace.final_sets[0].size(), 2u);
  EXPECT_EQ(r.trace.final_sets[0].representative, agent(0));
  EXPECT_EQ(r.trace.final_weights[0], 2u);
  EXPECT_TRUE(r.matching.is_perfect());
  EXPECT_EQ(reweight(r.trace, 1).final_weights[0], 3u);
}

TEST(RepMatch, RandomPoliciesStayValid) {
  auto d = gen_domino(3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = repmatch(d.instance, random_policy(seed), 3);
    EXPECT_TRUE(r.matching.is_perfect());
    auto again = repmatch(d.instance, random_policy(seed), 3);
    EXPECT_EQ(r.matching, again.matching);
    // Terminal partition: no two representatives still share a favorite.
    const auto& sets = r.trace.final_sets;
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        auto fi = d.instance.favorites(sets[i].representative, sets[i].size());
        auto fj = d.instance.favorites(sets[j].representative, sets[j].size());
        for (ItemId b : fi) EXPECT_EQ(std::find(fj.begin(), fj.end(), b), fj.end());
      }
  }
}

TEST(RepMatch, BrokenPolicyIsRejected) {
  auto policy = default_policy();
  policy.item_assigner = [](const Cluster& s, std::span<const ItemId> favorites) {
    return std::vector<ItemId>(s.size(), favorites.front());
  };
  EXPECT_THROW(repmatch(profile({{0, 1}, {0, 1}}), policy, 1), PolicyError);
}

TEST(RepMatch, DominoScriptEllTwo) {
  auto d = gen_domino(2);
  auto r = replay_script(d.instance, domino_script(d), 1);
  ASSERT_EQ(r.trace.final_sets.size(), 1u);
  AgentId rep = r.trace.final_sets[0].representative;
  const auto& top = d.agent_blocks[2];
  EXPECT_NE(std::find(top.begin(), top.end(), rep), top.end());
  Rational worst = 0;
  for (AgentId a : top) worst = std::max(worst, d.metric(a, *r.matching[a]));
  EXPECT_GE(worst, 2);
}

TEST(RepMatch, DominoScriptEllThree) {
  auto d = gen_domino(3);
  auto r = replay_script(d.instance, domino_script(d), 1);
  ASSERT_EQ(r.trace.final_sets.size(), 1u);
  AgentId rep = r.trace.final_sets[0].representative;
  const auto& top = d.agent_blocks[3];
  EXPECT_NE(std::find(top.begin(), top.end(), rep), top.end());
  EXPECT_GE(cost_topk(r.matching, d.metric, 1), 4);
  for (AgentId a : top) EXPECT_GE(d.metric(a, *r.matching[a]), 4);
  auto script = script_from_json(nlohmann::json::parse(dump(to_json(domino_script(d)))));
  EXPECT_EQ(replay_script(d.instance, script, 1).matching, r.matching);
}

TEST(RepMatch, IneligibleScriptSteps) {
  Instance inst = profile({{0, 1}, {1, 0}});
  MergeScript s;
  s.merges.push_back({agent(0), agent(1), agent(0)});
  try {
    replay_script(inst, s, 1);
    FAIL() << "expected IneligibleStep";
  } catch (const IneligibleStep& e) {
    EXPECT_EQ(e.step, 0u);
    EXPECT_EQ(e.reason, "representatives share no favorite item");
  }
  Instance shared = profile({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  MergeScript twice;
  twice.merges.push_back({agent(0), agent(1), agent(1)});
  twice.merges.push_back({agent(1), agent(0), agent(1)});
  try {
    replay_script(shared, twice, 1);
    FAIL();
  } catch (const IneligibleStep& e) {
    EXPECT_EQ(e.step, 1u);
  }
  MergeScript small_promoted;
  small_promoted.merges.push_back({agent(0), agent(1), agent(0)});
  small_promoted.merges.push_back({agent(0), agent(2), agent(2)});
  EXPECT_THROW(replay_script(shared, small_promoted, 1), IneligibleStep);
}

TEST(RepMatch, TraceJsonRoundTrip) {
  auto d = gen_domino(3);
  auto r = repmatch(d.instance, random_policy(4), 2);
  auto back = trace_from_json(nlohmann::json::parse(dump(to_json(r.trace))));
  EXPECT_EQ(dump(to_json(back)), dump(to_json(r.trace)));
}

TEST(SerialDictatorship, ExponentialInstance) {
  auto g = gen_sd_exponential(3, Rational(1, 4));
  Matching m = serial_dictatorship(g.instance, g.order);
  EXPECT_EQ(m, Matching::from_items({1, 2, 0}));
  EXPECT_EQ(cost_topk(m, g.metric, 1), Rational(17, 4));
}

TEST(SerialDictatorship, OrderValidation) {
  Instance inst = profile({{0, 1}, {1, 0}});
  EXPECT_THROW(serial_dictatorship(inst, agents({0, 0})), InvalidOrder);
  EXPECT_THROW(serial_dictatorship(inst, agents({0})), InvalidOrder);
  EXPECT_EQ(serial_dictatorship(inst, agents({1, 0})), Matching::from_items({0, 1}));
  EXPECT_EQ(serial_dictatorship(inst, agents({0, 1})), Matching::from_items({0, 1}));
}

TEST(Boston, LowerBoundInstance) {
  auto g = gen_boston(3, Rational(1, 4));
  Matching m = boston(g.instance, g.order);
  // One of the two agents at 4 ends at the item at -1/4.
  auto owner = m.owner(item(0));
  ASSERT_TRUE(owner.has_value());
  EXPECT_GE(index(*owner), 2u);
  EXPECT_EQ(cost_topk(m, g.metric, 1), Rational(17, 4));
}

TEST(Boston, SimpleRounds) {
  Instance distinct = profile({{1, 0, 2}, {2, 1, 0}, {0, 1, 2}});
  EXPECT_EQ(boston(distinct, agents({0, 1, 2})), Matching::from_items({1, 2, 0}));
  Instance both = profile({{0, 1}, {0, 1}});
  EXPECT_EQ(boston(both, agents({0, 1})), Matching::from_items({0, 1}));
  EXPECT_EQ(boston(both, agents({1, 0})), Matching::from_items({1, 0}));
  EXPECT_THROW(boston(both, agents({1, 1})), InvalidOrder);
}

TEST(RandomSerialDictatorship, Deterministic) {
  auto d = gen_domino(3);
  EXPECT_EQ(random_serial_dictatorship(d.instance, 7), random_serial_dictatorship(d.instance, 7));
  EXPECT_EQ(random_order(8, 7), random_order(8, 7));
  auto order = random_order(8, 7);
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(order[i], agent(i));
}

TEST(RandomSerialDictatorship, IdentityFavorites) {
  Instance inst = profile({{0, 2, 1}, {1, 0, 2}, {2, 1, 0}});
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_EQ(random_serial_dictatorship(inst, seed), Matching::from_items({0, 1, 2}));
}

TEST(RandomSerialDictatorship, AllOrdersOfExponentialInstance) {
  auto g = gen_sd_exponential(3, Rational(1, 4));
  std::vector<std::size_t> p{0, 1, 2};
  std::vector<Rational> costs;
  do {
    std::vector<AgentId> order;
    for (auto i : p) order.push_back(agent(i));
    costs.push_back(cost_topk(serial_dictatorship(g.instance, order), g.metric, 1));
  } while (std::next_permutation(p.begin(), p.end()));
  // Orders in lexicographic sequence: (1,2,4) (1,4,2) (2,1,4) (2,4,1) (4,1,2) (4,2,1).
  // Only the ascending order reaches 4 + 1/4.
  EXPECT_EQ(costs, (std::vector<Rational>{Rational(17, 4), Rational(9, 4), Rational(5, 4), Rational(5, 4),
                                          Rational(9, 4), Rational(5, 4)}));
}
