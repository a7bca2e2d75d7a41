#include "distlab/distortion.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "distlab/interval.hpp"
#include "distlab/parallel.hpp"
#include "distlab/random.hpp"

namespace distlab {

Ratio Ratio::of(const Rational& cost, const Rational& optimum) {
  if (sgn(optimum) == 0) return sgn(cost) == 0 ? Ratio(Kind::Indeterminate, Rational(1)) : infinite();
  return finite(cost / optimum);
}

Ratio Ratio::times(const Rational& factor) const {
  if (is_infinite()) return *this;
  return finite(value_ * factor);
}

std::string Ratio::str() const { return is_infinite() ? "inf" : to_string(value_); }

bool operator<(const Ratio& a, const Ratio& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value_ < b.value_;
}

Ratio min(const Ratio& a, const Ratio& b) { return b < a ? b : a; }

namespace {

void require_perfect(const Matching& m, const Metric& metric) {
  if (m.n() != metric.n()) throw DimensionMismatch("matching and metric sizes differ");
  if (!m.is_perfect()) throw InvalidParam("distortion needs a perfect matching");
}

nlohmann::json items_json(const Matching& m) { return to_json(m)["assignment"]; }

nlohmann::json ratio_json(const Ratio& r) { return r.str(); }

// Calls visit(first, perm) for all permutations in lexicographic order,
// split by first element across workers.
template <class Visit>
void enumerate_by_first(std::size_t n, unsigned jobs, Visit visit) {
  if (n > 9) throw TooLarge("enumeration is limited to n <= 9");
  parallel_for(n, jobs, [&](std::size_t first) {
    std::vector<std::size_t> perm{first};
    for (std::size_t j = 0; j < n; ++j)
      if (j != first) perm.push_back(j);
    do {
      visit(first, perm);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
  });
}

using Table = std::vector<std::vector<Rational>>;

Table agent_item_table(const Metric& metric) {
  Table t(metric.n(), std::vector<Rational>(metric.n()));
  for (std::size_t i = 0; i < metric.n(); ++i)
    for (std::size_t j = 0; j < metric.n(); ++j) t[i][j] = metric(agent(i), item(j));
  return t;
}

const Rational& max_edge(const Table& t, const std::vector<std::size_t>& perm) {
  const Rational* best = &t[0][perm[0]];
  for (std::size_t i = 1; i < perm.size(); ++i)
    if (t[i][perm[i]] > *best) best = &t[i][perm[i]];
  return *best;
}

}  // namespace

Ratio distortion(const Matching& m, const Metric& metric, std::size_t k) {
  require_perfect(m, metric);
  Rational cost = cost_topk(m, metric, k);
  return Ratio::of(cost, optimal_topk(metric, k).value);
}

Ratio fairness_ratio(const Matching& m, const Metric& metric) { return distortion_report(m, metric).fairness; }

DistortionReport distortion_report(const Matching& m, const Metric& metric, unsigned jobs) {
  require_perfect(m, metric);
  const std::size_t n = metric.n();
  DistortionReport r;
  r.cost.resize(n);
  r.optimum.resize(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    r.cost[i] = cost_topk(m, metric, i + 1);
    r.optimum[i] = optimal_topk(metric, i + 1).value;
  });
  for (std::size_t i = 0; i < n; ++i) r.ratio.push_back(Ratio::of(r.cost[i], r.optimum[i]));
  r.fairness = r.ratio[0];
  for (std::size_t i = 1; i < n; ++i)
    if (r.fairness < r.ratio[i]) {
      r.fairness = r.ratio[i];
      r.argmax_k = i + 1;
    }
  auto c = cost_vector(m, metric);
  r.worst_agent = agent(static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin()));
  return r;
}

FamilyDistortion family_distortion(const Matching& m, const MetricFamily& family, std::size_t k) {
  if (family.metrics.empty()) throw EmptyFamily("metric family is empty");
  FamilyDistortion best{distortion(m, family.metrics[0], k), 0};
  for (std::size_t i = 1; i < family.metrics.size(); ++i) {
    Ratio r = distortion(m, family.metrics[i], k);
    if (best.value < r) best = {r, i};
  }
  return best;
}

nlohmann::json to_json(const Certificate& c) {
  return {{"claim", c.claim}, {"verdict", c.pass ? "pass" : "fail"}, {"checked", c.checked}, {"witness", c.witness}};
}

Certificate certify_thm7(const MetricFamily& family, unsigned jobs) {
  if (family.metrics.empty()) throw EmptyFamily("metric family is empty");
  const std::size_t n = family.instance.n();
  for (std::size_t i = 0; i < family.metrics.size(); ++i) {
    if (family.metrics[i].n() != n) throw ConstructionError("family member " + std::to_string(i) + " has wrong size");
    if (auto r = is_consistent(family.metrics[i], family.instance); !r)
      throw ConstructionError(ConsistencyFailure(i, *r.witness).what());
  }
  const Ratio threshold = Ratio::finite(Rational(7));
  std::vector<Table> tables;
  std::vector<Rational> optima;
  for (const auto& m : family.metrics) {
    tables.push_back(agent_item_table(m));
    optima.push_back(optimal_max(m).value);
  }
  // The agent holding the last item (u) is the one the argument blames.
  const std::size_t u = n - 1;
  struct Chunk {
    std::uint64_t checked = 0, holder_argument = 0;
    std::optional<Ratio> min_value;
    std::vector<std::size_t> argmin;
    std::size_t argmin_member = 0;
    std::optional<std::vector<std::size_t>> failure;
    std::optional<Ratio> failure_value;
  };
  std::vector<Chunk> chunks(n);
  enumerate_by_first(n, jobs, [&](std::size_t first, const std::vector<std::size_t>& perm) {
    Chunk& c = chunks[first];
    ++c.checked;
    std::optional<Ratio> best;
    std::size_t member = 0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      Ratio r = Ratio::of(max_edge(tables[i], perm), optima[i]);
      if (!best || *best < r) {
        best = r;
        member = i;
      }
    }
    std::size_t holder = static_cast<std::size_t>(std::find(perm.begin(), perm.end(), u) - perm.begin());
    if (holder < tables.size() && threshold <= Ratio::of(tables[holder][holder][u], optima[holder]))
      ++c.holder_argument;
    if (!c.min_value || *best < *c.min_value) {
      c.min_value = best;
      c.argmin = perm;
      c.argmin_member = member;
    }
    if (*best < threshold && !c.failure) {
      c.failure = perm;
      c.failure_value = best;
    }
  });
  Certificate cert{"thm7", true, 0, {}};
  const Chunk* lowest = nullptr;
  const Chunk* failing = nullptr;
  std::uint64_t holder = 0;
  for (const auto& c : chunks) {
    cert.checked += c.checked;
    holder += c.holder_argument;
    if (!lowest || *c.min_value < *lowest->min_value) lowest = &c;
    if (c.failure && !failing) failing = &c;
  }
  if (failing) {
    cert.pass = false;
    cert.witness = {{"matching", items_json(Matching::from_items(*failing->failure))},
                    {"family_distortion", ratio_json(*failing->failure_value)}};
    return cert;
  }
  cert.witness = {{"min_family_distortion", ratio_json(*lowest->min_value)},
                  {"argmin_matching", items_json(Matching::from_items(lowest->argmin))},
                  {"argmin_member", lowest->argmin_member},
                  {"holder_of_last_item_suffices", holder},
                  {"optima", nlohmann::json::array()}};
  for (const auto& o : optima) cert.witness["optima"].push_back(to_string(o));
  return cert;
}

Certificate certify_thm7(unsigned jobs) {
  MetricFamily family = [] {
    try {
      return gen_tree8_family();
    } catch (const ConsistencyFailure& e) {
      throw ConstructionError(e.what());
    }
  }();
  return certify_thm7(family, jobs);
}

TreeCheck verify_tree_properties(const TreeInstance& tree, const Instance& instance) {
  if (instance.n() != tree.n) throw DimensionMismatch("tree and instance sizes differ");
  const std::size_t n = tree.n;
  const std::size_t left = n + index(tree.left), right = n + index(tree.right);
  auto left_items = tree.subtree_items(left), right_items = tree.subtree_items(right);
  auto left_agents = tree.subtree_agents(left);
  for (std::size_t i = 0; i < n; ++i) {
    AgentId a = agent(i);
    bool on_left = std::find(left_agents.begin(), left_agents.end(), a) != left_agents.end();
    const auto& own = on_left ? left_items : right_items;
    const auto& far = on_left ? right_items : left_items;
    std::vector<ItemId> near(own);
    near.push_back(tree.v);
    for (ItemId b : near)
      if (!instance.prefers(a, b, tree.u)) return {TreeWitness{a, 1, b, tree.u}};
    for (ItemId b : own)
      for (ItemId c : far)
        if (!instance.prefers(a, b, c)) return {TreeWitness{a, 2, b, c}};
  }
  return {};
}

Certificate certify_prop_ub_tree(const TreeInstance& tree, const Instance& instance, const Metric& metric,
                                 unsigned jobs) {
  if (auto check = verify_tree_properties(tree, instance); !check.ok())
    throw PropertyViolation("tree property (" + std::to_string(check.witness->property) + ") fails for agent " +
                            std::to_string(index(check.witness->agent)));
  if (auto r = is_consistent(metric, instance); !r)
    throw PropertyViolation("metric is not consistent with the tree instance (agent " +
                            std::to_string(index(r.witness->agent)) + ")");
  const std::size_t n = instance.n();
  const Table table = agent_item_table(metric);
  const Rational optimum = optimal_max(metric).value;
  const Ratio bound = Ratio::finite(Rational(7));
  struct Chunk {
    std::uint64_t checked = 0;
    std::optional<Ratio> worst;
    std::vector<std::size_t> argmax;
  };
  std::vector<Chunk> chunks(n);
  enumerate_by_first(n, jobs, [&](std::size_t first, const std::vector<std::size_t>& perm) {
    Chunk& c = chunks[first];
    ++c.checked;
    Ratio r = Ratio::of(max_edge(table, perm), optimum);
    if (!c.worst || *c.worst < r) {
      c.worst = r;
      c.argmax = perm;
    }
  });
  Certificate cert{"ub-tree", true, 0, {}};
  const Chunk* worst = nullptr;
  for (const auto& c : chunks) {
    cert.checked += c.checked;
    if (!worst || *worst->worst < *c.worst) worst = &c;
  }
  cert.pass = *worst->worst <= bound;
  cert.witness = {{"max_distortion", ratio_json(*worst->worst)},
                  {"matching", items_json(Matching::from_items(worst->argmax))},
                  {"optimum", to_string(optimum)}};
  return cert;
}

Certificate certify_domino(std::size_t ell, std::size_t k) {
  if (ell < 2) throw InvalidParam("certify_domino needs ell >= 2");
  DominoInstance d = gen_domino(ell);
  const std::size_t n = d.instance.n();
  if (k < 1 || k > n) throw RangeError("k must lie in [1, n]");
  MergeScript script = domino_script(d);
  RepMatchResult run = replay_script(d.instance, script, k);
  const std::size_t half = n / 2;
  Rational bound(static_cast<unsigned long>(std::min(k, half) * half));
  Rational cost = cost_topk(run.matching, d.metric, k);
  Rational optimum = optimal_topk(d.metric, k).value;
  Certificate cert{"domino", cost >= bound && optimum == 1, 1, {}};
  cert.witness = {{"ell", ell},
                  {"k", k},
                  {"cost", to_string(cost)},
                  {"optimum", to_string(optimum)},
                  {"distortion", Ratio::of(cost, optimum).str()},
                  {"bound", to_string(bound)},
                  {"sets", run.trace.final_sets.size()},
                  {"representative", index(run.trace.final_sets.front().representative)},
                  {"matching", items_json(run.matching)}};
  return cert;
}

namespace {

nlohmann::json members_json(const Cluster& c) {
  nlohmann::json a = nlohmann::json::array();
  for (AgentId x : c.members) a.push_back(index(x));
  return a;
}

}  // namespace

Certificate audit_repmatch_trace(const MergeTrace& trace, const Matching& matching, const Metric& metric,
                                 std::size_t k) {
  return audit_repmatch_trace(trace, matching, metric, k, optimal_topk(metric, k));
}

Certificate audit_repmatch_trace(const MergeTrace& trace, const Matching& matching, const Metric& metric,
                                 std::size_t k, const OptimalMatching& optimum) {
  const std::size_t n = metric.n();
  if (trace.n != n || matching.n() != n) throw DimensionMismatch("trace, matching and metric sizes differ");
  if (k < 1 || k > n) throw RangeError("k must lie in [1, n]");
  const Matching& star = optimum.matching;
  Certificate cert{"eq2-audit", true, 0, {}};
  long max_bits = 0;
  std::map<std::string, std::uint64_t> violations;
  auto record = [&](const char* kind, long event, const Cluster& set, std::optional<AgentId> a,
                    nlohmann::json extra) {
    ++violations[kind];
    if (!cert.pass) return;
    cert.pass = false;
    cert.witness = {{"violation", kind}, {"k", k}, {"event", event}, {"set", members_json(set)},
                    {"representative", index(set.representative)}};
    if (a) cert.witness["agent"] = index(*a);
    for (auto& [key, v] : extra.items()) cert.witness[key] = v;
  };
  // Broken structure or weights make every later check meaningless.
  auto abort = [&](const char* kind, long event, const Cluster& set, nlohmann::json extra) {
    record(kind, event, set, std::nullopt, std::move(extra));
    cert.witness["violations"] = violations;
    return cert;
  };
  auto restricted = [&](const Cluster& s) { return cost_restricted(star, metric, s.members, k); };
  // d(a, r) <= -d(a, M*(a)) + w cost_k(M*|S) for every member.
  auto check_representative = [&](const Cluster& s, std::uint64_t w, long event) {
    Rational rhs_base = Rational(static_cast<unsigned long>(w)) * restricted(s);
    for (AgentId a : s.members) {
      ++cert.checked;
      if (metric(a, s.representative) > rhs_base - metric(a, *star[a]))
        record("representative", event, s, a, {{"weight", w}});
    }
  };
  auto growth = [&](std::uint64_t w, std::size_t size) {
    ++cert.checked;
    Rational wq(static_cast<unsigned long>(w));
    if (size <= k) return wq <= static_cast<unsigned long>(size);
    Decision d = decide_le_scaled_power(wq, Rational(static_cast<unsigned long>(k)),
                                        Rational(static_cast<unsigned long>(size), static_cast<unsigned long>(k)));
    max_bits = std::max(max_bits, d.precision);
    return d.holds;
  };

  std::vector<Cluster> sets;
  std::vector<std::uint64_t> weights;
  for (std::size_t i = 0; i < n; ++i) {
    sets.push_back({{agent(i)}, agent(i)});
    weights.push_back(1);
    check_representative(sets.back(), 1, -1);
  }
  auto locate = [&](const Cluster& c) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i] == c) return i;
    return std::nullopt;
  };
  for (std::size_t e = 0; e < trace.events.size(); ++e) {
    const MergeEvent& ev = trace.events[e];
    const long at = static_cast<long>(e);
    auto si = locate(ev.survivor), sj = locate(ev.absorbed);
    if (!si || !sj || *si == *sj) return abort("structure", at, ev.survivor, {{"reason", "unknown set"}});
    if (ev.survivor.size() < ev.absorbed.size())
      return abort("structure", at, ev.survivor, {{"reason", "smaller set kept its representative"}});
    std::uint64_t expect = merge_weight(weights[*si], ev.survivor.size(), weights[*sj], ev.absorbed.size(), k);
    ++cert.checked;
    if (ev.w_survivor != weights[*si] || ev.w_absorbed != weights[*sj] || ev.w_merged != expect)
      return abort("recurrence", at, ev.survivor, {{"recorded", ev.w_merged}, {"expected", expect}});
    Cluster merged{ev.survivor.members, ev.survivor.representative};
    merged.members.insert(merged.members.end(), ev.absorbed.members.begin(), ev.absorbed.members.end());
    std::sort(merged.members.begin(), merged.members.end());
    for (std::size_t x : {std::max(*si, *sj), std::min(*si, *sj)}) {
      sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(x));
      weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(x));
    }
    sets.push_back(merged);
    weights.push_back(ev.w_merged);
    if (!growth(ev.w_merged, merged.size()))
      record("growth", at, merged, std::nullopt, {{"weight", ev.w_merged}, {"size", merged.size()}});
    check_representative(merged, ev.w_merged, at);
  }
  if (trace.final_sets.size() != sets.size() || trace.final_weights.size() != sets.size())
    return abort("structure", -1, sets.front(), {{"reason", "final partition differs"}});
  for (std::size_t f = 0; f < trace.final_sets.size(); ++f) {
    auto at = locate(trace.final_sets[f]);
    if (!at) return abort("structure", -1, trace.final_sets[f], {{"reason", "final partition differs"}});
    if (weights[*at] != trace.final_weights[f])
      return abort("recurrence", -1, trace.final_sets[f], {{"reason", "final weight differs"}});
  }
  for (std::size_t s = 0; s < sets.size(); ++s) {
    Rational bound = 2 * Rational(static_cast<unsigned long>(weights[s])) * restricted(sets[s]);
    for (AgentId a : sets[s].members) {
      ++cert.checked;
      if (!matching[a] || metric(a, *matching[a]) > bound)
        record("final-agent", -1, sets[s], a, {{"bound", to_string(bound)}});
    }
    ++cert.checked;
    Decision d = decide_le_scaled_power(Rational(static_cast<unsigned long>(weights[s])),
                                        Rational(static_cast<unsigned long>(k)),
                                        Rational(static_cast<unsigned long>(n), static_cast<unsigned long>(k)));
    max_bits = std::max(max_bits, d.precision);
    if (!d.holds) record("final-weight", -1, sets[s], std::nullopt, {{"weight", weights[s]}});
  }
  if (cert.pass) cert.witness = {{"k", k}, {"events", trace.events.size()}};
  cert.witness["violations"] = violations;
  cert.witness["max_precision_bits"] = max_bits;
  return cert;
}

Certificate check_repmatch_bound(const Matching& m, const Metric& metric, std::size_t k, const Rational& optimum) {
  const std::size_t n = metric.n();
  Rational cost = cost_topk(m, metric, k);
  Rational kk(static_cast<unsigned long>(k));
  Decision d = decide_le_scaled_power(cost, 2 * kk * kk * optimum,
                                      Rational(static_cast<unsigned long>(n), static_cast<unsigned long>(k)));
  Certificate cert{"cost-bound", d.holds, 1, {}};
  cert.witness = {{"k", k}, {"cost", to_string(cost)}, {"optimum", to_string(optimum)},
                  {"precision_bits", d.precision}};
  return cert;
}

namespace {

Certificate fairness_certificate(const DistortionReport& r, std::size_t n) {
  const Rational nq(static_cast<unsigned long>(n));
  const Ratio& d1 = r.ratio.front();
  const Ratio& dn = r.ratio.back();
  Ratio bound = min(d1, dn).times(nq);
  Certificate cert{"fairness-bound", r.fairness <= bound, 1, {}};
  for (std::size_t k = 0; k < n && cert.pass; ++k) {
    cert.checked += 2;
    if (!(r.ratio[k] <= d1.times(nq)) || !(r.ratio[k] <= dn.times(nq))) {
      cert.pass = false;
      cert.witness["chain_k"] = k + 1;
    }
  }
  cert.witness["fairness"] = r.fairness.str();
  cert.witness["d1"] = d1.str();
  cert.witness["dn"] = dn.str();
  cert.witness["bound"] = bound.str();
  return cert;
}

}  // namespace

Certificate check_fairness_bound(const Matching& m, const Metric& metric) {
  return fairness_certificate(distortion_report(m, metric), metric.n());
}

namespace {

Certificate owa_certificate(const Matching& m, const Metric& metric, const OwaWeights& weights,
                            const Ratio& fairness) {
  if (metric.n() > 8) throw TooLarge("OWA dominance uses brute force, n <= 8");
  Rational cost = cost_owa(m, metric, weights);
  Rational optimum = brute_force_optimal_owa(metric, weights).value;
  Ratio r = Ratio::of(cost, optimum);
  Certificate cert{"owa", r <= fairness, 1, {}};
  cert.witness = {{"owa_distortion", r.str()}, {"fairness", fairness.str()}, {"cost", to_string(cost)},
                  {"optimum", to_string(optimum)}};
  return cert;
}

}  // namespace

Certificate check_owa_dominance(const Matching& m, const Metric& metric, const OwaWeights& weights) {
  if (metric.n() > 8) throw TooLarge("OWA dominance uses brute force, n <= 8");
  return owa_certificate(m, metric, weights, fairness_ratio(m, metric));
}

Certificate check_appendix_b_claim(std::size_t samples) {
  if (samples < 1) throw InvalidParam("samples must be positive");
  Certificate cert{"appendix-b", true, 0, {}};
  long max_bits = 0;
  std::uint64_t exact = 0, equalities = 0, grid = 0;
  auto check = [&](const Rational& x, const Rational& y) {
    Decision d = decide_superadditive(x, y);
    ++cert.checked;
    max_bits = std::max(max_bits, d.precision);
    if (!d.holds && cert.pass) {
      cert.pass = false;
      cert.witness["violation"] = {to_string(x), to_string(y)};
    }
    return d;
  };
  // Powers of two on the diagonal: both sides are exact powers of three.
  for (long s = -6; s <= 6; ++s) {
    Rational x = s >= 0 ? Rational(mpz_class(1) << s) : Rational(mpz_class(1), mpz_class(1) << -s);
    Decision d = check(x, x);
    ++exact;
    Rational lhs = 3 * pow3(s), rhs = pow3(s + 1);
    if (d.precision == 0 && lhs == rhs) ++equalities;
    else if (cert.pass) {
      cert.pass = false;
      cert.witness["boundary_not_exact"] = to_string(x);
    }
  }
  // Off-diagonal grid x = i/4, y = j/3 with x <= y.
  for (long j = 1; grid < samples; ++j)
    for (long i = 1; 3 * i <= 4 * j && grid < samples; ++i) {
      Rational x(i, 4), y(j, 3);
      x.canonicalize();
      y.canonicalize();
      check(x, y);
      ++grid;
    }
  cert.witness["exact_cases"] = exact;
  cert.witness["exact_equalities"] = equalities;
  cert.witness["grid_points"] = grid;
  cert.witness["max_precision_bits"] = max_bits;
  return cert;
}

namespace {

struct Named {
  std::string name;
  Instance instance;
  Metric metric;
  std::optional<MergeScript> script;
};

std::vector<Named> small_generator_instances() {
  std::vector<Named> out;
  for (std::size_t n = 2; n <= 8; ++n) {
    auto g = gen_line(n, Rational(2));
    out.push_back({"line n=" + std::to_string(n), g.instance, g.metric, {}});
  }
  for (std::size_t n = 2; n <= 7; ++n) {
    auto g = gen_polygon(n, Rational(3));
    out.push_back({"polygon n=" + std::to_string(n), g.instance, g.metric, {}});
  }
  for (std::size_t ell = 1; ell <= 3; ++ell) {
    auto d = gen_domino(ell);
    out.push_back({"domino ell=" + std::to_string(ell), d.instance, d.metric, domino_script(d)});
  }
  auto tree = gen_tree8();
  out.push_back({"tree8", tree.instance, tree.metric, {}});
  auto family = gen_tree8_family();
  for (std::size_t i = 0; i < family.metrics.size(); ++i)
    out.push_back({"tree8 d_" + std::to_string(i + 1), family.instance, family.metrics[i], {}});
  auto small = gen_tree_instance(2, {Rational(1), Rational(2), Rational(3)});
  out.push_back({"tree ell=2", small.instance, small.metric, {}});
  for (std::size_t n = 2; n <= 8; ++n) {
    auto g = gen_sd_exponential(n, Rational(1, 4));
    out.push_back({"sd n=" + std::to_string(n), g.instance, g.metric, {}});
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    auto g = gen_boston(k, Rational(1, 4));
    out.push_back({"boston k=" + std::to_string(k), g.instance, g.metric, {}});
  }
  return out;
}

}  // namespace

Certificate certify_audit_suite(std::size_t random_policies, std::uint64_t seed) {
  Certificate cert{"eq2-audit", true, 0, {}};
  long max_bits = 0;
  std::uint64_t audits = 0;
  std::map<std::string, std::uint64_t> violations;
  nlohmann::json first_failure;
  for (const auto& g : small_generator_instances()) {
    const std::size_t n = g.instance.n();
    std::vector<std::pair<std::string, RepMatchResult>> runs;
    runs.emplace_back("default", repmatch(g.instance, default_policy(), 1));
    if (g.script) runs.emplace_back("script", replay_script(g.instance, *g.script, 1));
    for (std::size_t r = 0; r < random_policies; ++r)
      runs.emplace_back("random seed=" + std::to_string(seed + r), repmatch(g.instance, random_policy(seed + r), 1));
    for (std::size_t k = 1; k <= n; ++k) {
      OptimalMatching opt = optimal_topk(g.metric, k);
      for (const auto& [policy, run] : runs) {
        Certificate a = audit_repmatch_trace(reweight(run.trace, k), run.matching, g.metric, k, opt);
        Certificate b = check_repmatch_bound(run.matching, g.metric, k, opt.value);
        cert.checked += a.checked + b.checked;
        ++audits;
        max_bits = std::max<long>(max_bits, a.witness["max_precision_bits"].get<long>());
        max_bits = std::max<long>(max_bits, b.witness["precision_bits"].get<long>());
        for (auto& [kind, count] : a.witness["violations"].items()) violations[kind] += count.get<std::uint64_t>();
        if (!b.pass) ++violations["cost-bound"];
        if ((!a.pass || !b.pass) && cert.pass) {
          cert.pass = false;
          first_failure = {{"instance", g.name}, {"policy", policy}, {"k", k}, {"failure", a.pass ? to_json(b) : to_json(a)}};
        }
      }
    }
  }
  cert.witness = {{"audits", audits}, {"max_precision_bits", max_bits}, {"violations", violations}};
  if (!cert.pass) cert.witness["first_failure"] = first_failure;
  return cert;
}

namespace {

Matching random_perfect(std::size_t n, Lcg64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i-- > 1;) std::swap(p[i], p[rng.below(static_cast<std::uint32_t>(i + 1))]);
  return Matching::from_items(p);
}

}  // namespace

Certificate certify_fairness_suite(std::size_t trials, std::uint64_t seed) {
  Certificate cert{"fairness-bound", true, 0, {}};
  Lcg64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t n = 2 + rng.below(6);
    Metric metric = random_metric(n, rng.next());
    Matching m = random_perfect(n, rng);
    Certificate c = check_fairness_bound(m, metric);
    cert.checked += c.checked;
    if (!c.pass) {
      cert.pass = false;
      cert.witness = {{"trial", t}, {"metric", to_json(metric)}, {"matching", items_json(m)}, {"failure", to_json(c)}};
      return cert;
    }
  }
  cert.witness = {{"trials", trials}};
  return cert;
}

Certificate certify_owa_suite(std::size_t trials, std::uint64_t seed) {
  Certificate cert{"owa", true, 0, {}};
  Lcg64 rng(seed);
  const Metric metric = gen_tree8().metric;
  const std::size_t n = metric.n();
  std::vector<Rational> optima;
  for (std::size_t k = 1; k <= n; ++k) optima.push_back(optimal_topk(metric, k).value);
  for (std::size_t t = 0; t < trials; ++t) {
    Matching m = random_perfect(n, rng);
    std::vector<Rational> w;
    for (std::size_t i = 0; i < n; ++i) w.emplace_back(static_cast<long>(rng.below(10)), 1 + static_cast<long>(rng.below(3)));
    for (auto& x : w) x.canonicalize();
    std::sort(w.begin(), w.end(), std::greater<>());
    if (sgn(w.front()) == 0) w.front() = 1;
    OwaWeights weights(w);
    Ratio fairness = Ratio::of(cost_topk(m, metric, 1), optima[0]);
    for (std::size_t k = 2; k <= n; ++k) fairness = std::max(fairness, Ratio::of(cost_topk(m, metric, k), optima[k - 1]));
    Certificate c = owa_certificate(m, metric, weights, fairness);
    cert.checked += c.checked;
    if (!c.pass) {
      cert.pass = false;
      nlohmann::json wj = nlohmann::json::array();
      for (const auto& x : w) wj.push_back(to_string(x));
      cert.witness = {{"trial", t}, {"weights", wj}, {"matching", items_json(m)}, {"failure", to_json(c)}};
      return cert;
    }
  }
  cert.witness = {{"trials", trials}, {"metric", "tree8"}};
  return cert;
}

Certificate certify_solver_oracle(std::size_t trials, std::size_t max_n, std::uint64_t seed, unsigned jobs) {
  if (max_n < 2 || max_n > 9) throw InvalidParam("max_n must lie in [2, 9]");
  Certificate cert{"solver-oracle", true, 0, {}};
  std::vector<std::optional<nlohmann::json>> failures(trials);
  std::vector<std::uint64_t> checks(trials, 0);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const std::size_t n = 2 + t % (max_n - 1);
    Metric metric = random_metric(n, seed * 1000003ULL + t);
    auto oracle = brute_force_optimal_all(metric);
    auto compare = [&](const char* solver, std::size_t k, const OptimalMatching& got) {
      ++checks[t];
      const auto& want = oracle[k - 1];
      if (failures[t] || (got.value == want.value && got.matching == want.matching)) return;
      failures[t] = nlohmann::json{{"trial", t}, {"n", n}, {"k", k}, {"solver", solver},
                                   {"value", to_string(got.value)}, {"oracle", to_string(want.value)},
                                   {"matching", items_json(got.matching)}, {"oracle_matching", items_json(want.matching)}};
    };
    compare("optimal_sum", n, optimal_sum(metric));
    compare("optimal_max", 1, optimal_max(metric));
    for (std::size_t k = 1; k <= n; ++k) compare("optimal_topk", k, optimal_topk(metric, k));
  });
  for (std::size_t t = 0; t < trials; ++t) {
    cert.checked += checks[t];
    if (failures[t] && cert.pass) {
      cert.pass = false;
      cert.witness = *failures[t];
    }
  }
  if (cert.pass) cert.witness = {{"trials", trials}, {"max_n", max_n}, {"seed", seed}};
  return cert;
}

}  // namespace distlab
