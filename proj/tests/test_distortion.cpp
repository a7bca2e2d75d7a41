#include <gtest/gtest.h>

#include "distlab/distortion.hpp"
#include "distlab/generators.hpp"
#include "distlab/interval.hpp"
#include "distlab/mechanisms.hpp"
#include "distlab/objectives.hpp"

using namespace distlab;

namespace {

Metric zeros(std::size_t n) {
  return validate_metric(std::vector<std::vector<Rational>>(2 * n, std::vector<Rational>(2 * n, Rational(0))));
}

Matching identity(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return Matching::from_items(p);
}

Instance profile(std::vector<std::vector<std::size_t>> lists) {
  std::vector<PreferenceList> p;
  for (auto& l : lists) {
    PreferenceList pl;
    for (auto j : l) pl.push_back(item(j));
    p.push_back(pl);
  }
  return Instance(p);
}

// The base graph for the tree8 family: unit edges of the drawn graph plus the three extras.
std::vector<Edge> tree8_edges() {
  Metric drawn = tree8_drawn_metric();
  std::vector<Edge> out;
  for (std::size_t x = 0; x < 16; ++x)
    for (std::size_t y = x + 1; y < 16; ++y)
      if (drawn(x, y) == 1) out.push_back({x, y, Rational(1)});
  out.push_back({7, 12, Rational(1)});
  out.push_back({4, 8, Rational(5)});
  out.push_back({5, 8, Rational(5)});
  return out;
}

}  // namespace

TEST(Distortion, Examples) {
  auto fig2 = gen_polygon(3, Rational(3));
  Matching shifted = Matching::from_items({1, 2, 0});
  EXPECT_EQ(distortion(shifted, fig2.metric, 1), Ratio::finite(Rational(3)));
  EXPECT_EQ(distortion(identity(8), gen_tree8_family().metrics[0], 1), Ratio::finite(Rational(1)));
  Ratio z = distortion(identity(3), zeros(3), 2);
  EXPECT_EQ(z.kind(), Ratio::Kind::Indeterminate);
  EXPECT_EQ(z.value(), 1);
  EXPECT_EQ(Ratio::of(Rational(2), Rational(0)).str(), "inf");
  EXPECT_TRUE(Ratio::finite(Rational(100)) < Ratio::infinite());
  EXPECT_EQ(Ratio::finite(Rational(3, 2)).times(Rational(2)), Ratio::finite(Rational(3)));
}

TEST(Fairness, Examples) {
  auto fig1 = gen_line(3, Rational(2));
  Matching bad = Matching::from_items({2, 0, 1});
  EXPECT_EQ(fairness_ratio(bad, fig1.metric), Ratio::finite(Rational(7)));
  auto r = distortion_report(bad, fig1.metric);
  EXPECT_EQ(r.optimum, (std::vector<Rational>{1, 2, 3}));
  EXPECT_EQ(r.cost, (std::vector<Rational>{7, 9, 11}));
  EXPECT_EQ(r.argmax_k, 1u);
  EXPECT_EQ(r.worst_agent, agent(0));
  EXPECT_EQ(fairness_ratio(identity(3), fig1.metric), Ratio::finite(Rational(1)));
  auto fig2 = gen_polygon(3, Rational(3));
  EXPECT_EQ(fairness_ratio(Matching::from_items({1, 2, 0}), fig2.metric), Ratio::finite(Rational(9)));
}

TEST(FamilyDistortion, Examples) {
  auto fam = gen_tree8_family();
  // The identity is optimal in d_1 only; it sends a_8 to b_8, which costs 7 in d_8.
  auto id = family_distortion(identity(8), fam, 1);
  EXPECT_EQ(id.value, Ratio::finite(Rational(7)));
  EXPECT_EQ(id.member, 7u);
  EXPECT_EQ(distortion(identity(8), fam.metrics[0], 1), Ratio::finite(Rational(1)));
  Matching first_to_root = Matching::from_items({7, 1, 2, 3, 4, 5, 6, 0});
  auto f = family_distortion(first_to_root, fam, 1);
  EXPECT_LE(Ratio::finite(Rational(7)), f.value);
  EXPECT_EQ(f.member, 0u);
  MetricFamily single{fam.instance, {fam.metrics[2]}};
  EXPECT_EQ(family_distortion(first_to_root, single, 3).value, distortion(first_to_root, fam.metrics[2], 3));
  EXPECT_THROW(family_distortion(identity(8), MetricFamily{fam.instance, {}}, 1), EmptyFamily);
}

TEST(CertifyFamilyLowerBound, FullRun) {
  auto c = certify_thm7(1);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.checked, 40320u);
  EXPECT_EQ(c.witness["min_family_distortion"], "7");
  auto parallel = certify_thm7(3);
  EXPECT_EQ(to_json(parallel), to_json(c));
}

TEST(CertifyFamilyLowerBound, SabotagedEdgesAreDetected) {
  auto edges = tree8_edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].length != 1) continue;
    auto broken = edges;
    broken[e].length = 3;
    bool detected = false;
    try {
      detected = !certify_thm7(tree8_family_from(graph_metric(8, broken)), 1).pass;
    } catch (const ConsistencyFailure&) {
      detected = true;
    } catch (const ConstructionError&) {
      detected = true;
    }
    EXPECT_TRUE(detected) << "edge " << edges[e].x << "-" << edges[e].y;
  }
  EXPECT_EQ(graph_metric(8, edges), tree8_base_metric());
}

TEST(CertifyUbTree, TreeAndFamily) {
  auto t = gen_tree8();
  EXPECT_TRUE(certify_prop_ub_tree(t.tree, t.instance, t.metric).pass);
  for (const Metric& m : gen_tree8_family().metrics) {
    auto c = certify_prop_ub_tree(t.tree, t.instance, m, 2);
    EXPECT_TRUE(c.pass);
    EXPECT_EQ(c.checked, 40320u);
  }
  EXPECT_THROW(certify_prop_ub_tree(t.tree, t.instance, tree8_drawn_metric()), PropertyViolation);
}

TEST(TreeProperties, Witness) {
  auto t = gen_tree8();
  EXPECT_TRUE(verify_tree_properties(t.tree, t.instance).ok());
  auto prefs = t.instance.profile();
  auto& l = prefs[0];
  l.erase(std::find(l.begin(), l.end(), t.tree.u));
  l.insert(l.begin(), t.tree.u);
  auto r = verify_tree_properties(t.tree, Instance(prefs));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.witness->agent, agent(0));
  EXPECT_EQ(r.witness->property, 1);
  auto fig = gen_tree_instance(3, {Rational(2), Rational(3), Rational(4), Rational(5)});
  EXPECT_TRUE(verify_tree_properties(fig.tree, fig.instance).ok());
}

TEST(CertifyDomino, Examples) {
  auto c1 = certify_domino(3, 1);
  EXPECT_TRUE(c1.pass);
  EXPECT_GE(parse_rational(c1.witness["cost"].get<std::string>()), 4);
  auto c4 = certify_domino(3, 4);
  EXPECT_TRUE(c4.pass);
  EXPECT_GE(parse_rational(c4.witness["distortion"].get<std::string>()), 16);
  auto c2 = certify_domino(2, 1);
  EXPECT_TRUE(c2.pass);
  EXPECT_GE(parse_rational(c2.witness["cost"].get<std::string>()), 2);
  for (std::size_t k = 1; k <= 16; ++k) EXPECT_TRUE(certify_domino(4, k).pass) << k;
  EXPECT_THROW(certify_domino(1, 1), InvalidParam);
  EXPECT_THROW(certify_domino(3, 9), RangeError);
}

TEST(Audit, DominoDefaultPolicyAllK) {
  auto d = gen_domino(3);
  auto run = repmatch(d.instance, default_policy(), 1);
  for (std::size_t k = 1; k <= 8; ++k) {
    auto c = audit_repmatch_trace(reweight(run.trace, k), run.matching, d.metric, k);
    const auto& v = c.witness["violations"];
    for (const char* kind : {"recurrence", "representative", "final-agent", "final-weight"}) EXPECT_FALSE(v.contains(kind)) << k;
    if (k == 2) {
      // {a_4, a_5} has weight 2; absorbing a_6 gives 4 > 2 (3/2)^{log2 3}.
      EXPECT_FALSE(c.pass);
      EXPECT_EQ(c.witness["violation"], "growth");
      EXPECT_EQ(c.witness["set"], nlohmann::json({4, 5, 6}));
      EXPECT_EQ(c.witness["weight"], 4);
    } else {
      EXPECT_TRUE(c.pass) << "k=" << k << " " << to_json(c).dump();
    }
  }
}

TEST(Audit, RandomMetricsKeepRepresentativeInvariant) {
  std::size_t growth_failures = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t n = seed % 2 ? 4 : 8;
    Metric m = random_metric(n, seed);
    Instance inst = derive_preferences(m, TieBreak::by_item_index());
    auto run = repmatch(inst, default_policy(), 1);
    for (std::size_t k = 1; k <= n; ++k) {
      auto opt = optimal_topk(m, k);
      auto c = audit_repmatch_trace(reweight(run.trace, k), run.matching, m, k, opt);
      const auto& v = c.witness["violations"];
      for (const char* kind : {"structure", "recurrence", "representative", "final-agent"})
        EXPECT_FALSE(v.contains(kind)) << "seed " << seed << " k " << k << " " << to_json(c).dump();
      // A final weight over k (n/k)^{log2 3} only ever comes from a failed growth step.
      if (v.contains("final-weight")) EXPECT_TRUE(v.contains("growth"));
      if (v.contains("growth")) ++growth_failures;
      EXPECT_TRUE(check_repmatch_bound(run.matching, m, k, opt.value).pass) << "seed " << seed << " k " << k;
    }
  }
  EXPECT_GT(growth_failures, 0u);
}

TEST(Audit, ForgedWeightBreaksRecurrence) {
  auto d = gen_domino(3);
  auto run = repmatch(d.instance, default_policy(), 2);
  ASSERT_FALSE(run.trace.events.empty());
  auto forged = run.trace;
  forged.events[0].w_merged += 1;
  auto c = audit_repmatch_trace(forged, run.matching, d.metric, 2);
  EXPECT_FALSE(c.pass);
  EXPECT_EQ(c.witness["violation"], "recurrence");
  EXPECT_EQ(c.witness["event"], 0);
}

TEST(Audit, WeightGrowthBoundFailsForSmallSets) {
  // Three agents share a favorite; k = 2. The pair {a_1, a_2} gets weight 2,
  // absorbing a_3 gives 2*1 + 2 = 4 > 2 (3/2)^{log2 3}.
  Instance inst = profile({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  Metric m = validate_metric(std::vector<std::vector<Rational>>(6, std::vector<Rational>(6, Rational(0))));
  auto run = repmatch(inst, default_policy(), 2);
  ASSERT_EQ(run.trace.events.size(), 2u);
  EXPECT_EQ(run.trace.events[1].w_merged, 4u);
  auto c = audit_repmatch_trace(run.trace, run.matching, m, 2);
  EXPECT_FALSE(c.pass);
  EXPECT_EQ(c.witness["violation"], "growth");
  EXPECT_EQ(c.witness["violations"]["growth"], 1);
  EXPECT_FALSE(c.witness["violations"].contains("representative"));
  EXPECT_FALSE(decide_le_scaled_power(Rational(4), Rational(2), Rational(3, 2)).holds);
}

TEST(RepMatchBound, HoldsOnScriptedDomino) {
  auto d = gen_domino(3);
  auto run = replay_script(d.instance, domino_script(d), 1);
  for (std::size_t k = 1; k <= 8; ++k)
    EXPECT_TRUE(check_repmatch_bound(run.matching, d.metric, k, optimal_topk(d.metric, k).value).pass);
}

TEST(FairnessBound, Examples) {
  auto fig1 = gen_line(3, Rational(2));
  auto c = check_fairness_bound(Matching::from_items({2, 0, 1}), fig1.metric);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.witness["fairness"], "7");
  EXPECT_EQ(c.witness["bound"], "11");
  EXPECT_TRUE(check_fairness_bound(identity(3), fig1.metric).pass);
  EXPECT_TRUE(certify_fairness_suite(200, 1).pass);
}

TEST(OwaDominance, Examples) {
  auto t = gen_tree8();
  Matching m = Matching::from_items({3, 1, 2, 0, 5, 4, 7, 6});
  for (std::size_t k = 1; k <= 8; ++k) EXPECT_TRUE(check_owa_dominance(m, t.metric, OwaWeights::top_k(8, k)).pass);
  std::vector<Rational> ones(8, Rational(1));
  EXPECT_TRUE(check_owa_dominance(m, t.metric, OwaWeights(ones)).pass);
  EXPECT_TRUE(certify_owa_suite(10, 3).pass);
}

TEST(Superadditivity, Examples) {
  auto eq = decide_superadditive(Rational(1), Rational(1));
  EXPECT_TRUE(eq.holds);
  EXPECT_EQ(eq.precision, 0);
  EXPECT_TRUE(decide_superadditive(Rational(2), Rational(2)).holds);
  auto mixed = decide_superadditive(Rational(2), Rational(4));
  EXPECT_TRUE(mixed.holds);
  EXPECT_GT(mixed.precision, 0);
  auto c = check_appendix_b_claim(1000);
  EXPECT_TRUE(c.pass);
  EXPECT_GE(c.witness["grid_points"].get<std::size_t>(), 1000u);
}

TEST(Interval, CertifiedComparisons) {
  EXPECT_EQ(pow3(4), 81);
  // 9 <= 1 * 4^{log2 3} = 9 exactly.
  auto d = decide_le_scaled_power(Rational(9), Rational(1), Rational(4));
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.precision, 0);
  // 6^{log2 3} = 17.1133...
  EXPECT_TRUE(decide_le_scaled_power(Rational(1711, 100), Rational(1), Rational(6)).holds);
  EXPECT_FALSE(decide_le_scaled_power(Rational(1712, 100), Rational(1), Rational(6)).holds);
  auto c = [](mpfr_prec_t p) { return Interval::log2_3(p); };
  EXPECT_THROW(decide_le(c, c), BracketTooCoarse);
  Interval l = Interval::log2_3(256);
  EXPECT_TRUE(certainly_le(Interval::exact(Rational(158, 100), 256), l));
  EXPECT_TRUE(certainly_gt(Interval::exact(Rational(159, 100), 256), l));
}

TEST(SolverOracle, Suite) {
  auto c = certify_solver_oracle(40, 6, 5, 2);
  EXPECT_TRUE(c.pass) << to_json(c).dump();
}
