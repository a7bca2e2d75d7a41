#include "distlab/generators.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "distlab/random.hpp"

namespace distlab {

namespace {

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? Rational(a - b) : Rational(b - a); }

Metric line_metric(const std::vector<Rational>& agents, const std::vector<Rational>& items) {
  std::vector<Rational> pts(agents);
  pts.insert(pts.end(), items.begin(), items.end());
  std::vector<std::vector<Rational>> d(pts.size(), std::vector<Rational>(pts.size()));
  for (std::size_t x = 0; x < pts.size(); ++x)
    for (std::size_t y = 0; y < pts.size(); ++y) d[x][y] = abs_diff(pts[x], pts[y]);
  return validate_metric(d);
}

// Items by descending coordinate, then flagged items, then index.
TieBreak rightward(const std::vector<Rational>& items, const std::vector<bool>& special) {
  std::vector<ItemId> order;
  for (std::size_t j = 0; j < items.size(); ++j) order.push_back(item(j));
  std::stable_sort(order.begin(), order.end(), [&](ItemId x, ItemId y) {
    int c = cmp(items[index(x)], items[index(y)]);
    if (c != 0) return c > 0;
    return special[index(x)] && !special[index(y)];
  });
  return TieBreak::rightward_then_special(std::move(order));
}

Rational pow2(std::size_t e) {
  mpz_class z = 1;
  z <<= e;
  return Rational(z);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParam(what);
}

}  // namespace

Generated gen_line(std::size_t n, const Rational& k) {
  require(n >= 2, "gen_line needs n >= 2");
  require(k > 1, "gen_line needs k > 1");
  std::vector<Rational> agents, items;
  for (std::size_t t = 1; t <= n; ++t) {
    Rational c = (k + 1) * static_cast<unsigned long>(t);
    agents.push_back(c);
    items.push_back(c + 1);
  }
  Metric m = line_metric(agents, items);
  return {derive_preferences(m, rightward(items, std::vector<bool>(n, false))), m};
}

Generated gen_polygon(std::size_t n, const Rational& D) {
  require(n >= 2, "gen_polygon needs n >= 2");
  require(D > 1, "gen_polygon needs D > 1");
  // Arc-length positions: b_1 at 0, a_t at 1 + (t-1)D; perimeter 1 + nD.
  const Rational perimeter = 1 + D * static_cast<unsigned long>(n);
  std::vector<Rational> pos(2 * n);
  for (std::size_t t = 0; t < n; ++t) pos[t] = 1 + D * static_cast<unsigned long>(t);
  pos[n] = 0;
  for (std::size_t t = 1; t < n; ++t) pos[n + t] = pos[t];
  std::vector<std::vector<Rational>> d(2 * n, std::vector<Rational>(2 * n));
  for (std::size_t x = 0; x < 2 * n; ++x)
    for (std::size_t y = 0; y < 2 * n; ++y) {
      Rational along = abs_diff(pos[x], pos[y]);
      Rational around = perimeter - along;
      d[x][y] = along < around ? along : around;
    }
  Metric m = validate_metric(d);
  return {derive_preferences(m, TieBreak::by_item_index()), m};
}

DominoInstance gen_domino(std::size_t ell) {
  require(ell >= 1 && ell <= 10, "gen_domino needs 1 <= ell <= 10");
  std::vector<Rational> agents{Rational(0)}, items{Rational(-1)};
  std::vector<std::vector<AgentId>> ablocks{{agent(0)}};
  std::vector<std::vector<ItemId>> iblocks{{item(0)}};
  std::vector<bool> special{true};
  for (std::size_t t = 1; t <= ell; ++t) {
    Rational c = pow2(t) - 1;
    std::size_t count = std::size_t{1} << (t - 1);
    ablocks.emplace_back();
    iblocks.emplace_back();
    for (std::size_t r = 0; r < count; ++r) {
      ablocks.back().push_back(agent(agents.size()));
      iblocks.back().push_back(item(items.size()));
      special.push_back(r == 0);
      agents.push_back(c);
      items.push_back(c);
    }
  }
  Metric m = line_metric(agents, items);
  Instance inst = derive_preferences(m, rightward(items, special));
  return {std::move(inst), std::move(m), ell, std::move(ablocks), std::move(iblocks)};
}

std::vector<std::size_t> TreeInstance::children(std::size_t point) const {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < parent.size(); ++x)
    if (parent[x] == point) out.push_back(x);
  return out;
}

namespace {

bool in_subtree(const TreeInstance& t, std::size_t x, std::size_t root) {
  for (std::optional<std::size_t> p = x; p; p = t.parent[*p])
    if (*p == root) return true;
  return false;
}

}  // namespace

std::vector<ItemId> TreeInstance::subtree_items(std::size_t point) const {
  std::vector<ItemId> out;
  for (std::size_t j = 0; j < n; ++j)
    if (in_subtree(*this, n + j, point)) out.push_back(item(j));
  return out;
}

std::vector<AgentId> TreeInstance::subtree_agents(std::size_t point) const {
  std::vector<AgentId> out;
  for (std::size_t i = 0; i < n; ++i)
    if (in_subtree(*this, i, point)) out.push_back(agent(i));
  return out;
}

Metric TreeInstance::metric() const {
  const std::size_t p = 2 * n;
  // Distance from each point to each of its ancestors.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> up(p);
  for (std::size_t x = 0; x < p; ++x) {
    Rational acc = 0;
    up[x].push_back({x, acc});
    for (std::size_t y = x; parent[y]; y = *parent[y]) {
      acc += parent_weight[y];
      up[x].push_back({*parent[y], acc});
    }
  }
  std::vector<std::vector<Rational>> d(p, std::vector<Rational>(p));
  for (std::size_t x = 0; x < p; ++x)
    for (std::size_t y = 0; y < p; ++y)
      for (const auto& [ax, dx] : up[x]) {
        auto it = std::find_if(up[y].begin(), up[y].end(), [&](const auto& e) { return e.first == ax; });
        if (it != up[y].end()) {
          d[x][y] = dx + it->second;
          break;
        }
      }
  return validate_metric(d);
}

std::size_t tree_flip(std::size_t ell, std::size_t mask, std::size_t point) {
  const std::size_t n = std::size_t{1} << ell;
  if (point < n) return point ^ mask;
  std::size_t p = point - n + 1;  // 1-based in-order label
  if (p == n) return point;
  unsigned tz = static_cast<unsigned>(std::countr_zero(p));
  std::size_t block = (p >> (tz + 1)) ^ (mask >> (tz + 1));
  return n + ((block << (tz + 1)) | (std::size_t{1} << tz)) - 1;
}

Metric relabel(const Metric& d, std::size_t ell, std::size_t mask) {
  std::vector<std::vector<Rational>> m(d.points(), std::vector<Rational>(d.points()));
  for (std::size_t x = 0; x < d.points(); ++x)
    for (std::size_t y = 0; y < d.points(); ++y) m[x][y] = d(tree_flip(ell, mask, x), tree_flip(ell, mask, y));
  return validate_metric(m);
}

TreeGenerated gen_tree_instance(std::size_t ell, const std::vector<Rational>& weights, TreeTies ties) {
  require(ell >= 2 && ell <= 7, "gen_tree_instance needs 2 <= ell <= 7");
  require(weights.size() == ell + 1, "gen_tree_instance needs one weight per level (ell + 1)");
  for (const auto& w : weights) require(sgn(w) > 0, "tree weights must be positive");
  TreeInstance t;
  t.ell = ell;
  t.n = std::size_t{1} << ell;
  const std::size_t n = t.n;
  t.parent.assign(2 * n, std::nullopt);
  t.parent_weight.assign(2 * n, Rational(0));
  // Node over leaves [lo, hi) at depth `depth` (root v has depth 1).
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t depth) -> std::size_t {
    std::size_t node = n + lo + (hi - lo) / 2 - 1;
    if (hi - lo == 2) {
      for (std::size_t leaf : {lo, lo + 1}) {
        t.parent[leaf] = node;
        t.parent_weight[leaf] = weights[depth];
      }
      return node;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    for (auto [a, b] : {std::pair{lo, mid}, std::pair{mid, hi}}) {
      std::size_t child = self(self, a, b, depth + 1);
      t.parent[child] = node;
      t.parent_weight[child] = weights[depth];
    }
    return node;
  };
  std::size_t v = build(build, 0, n, 1);
  std::size_t u = 2 * n - 1;
  t.parent[v] = u;
  t.parent_weight[v] = weights[0];
  t.u = item(u - n);
  t.v = item(v - n);
  auto kids = t.children(v);
  t.left = item(kids[0] - n);
  t.right = item(kids[1] - n);
  Metric m = t.metric();
  Instance base = derive_preferences(m, TieBreak::by_item_index());
  if (ties == TreeTies::ByItemIndex) return {std::move(t), std::move(base), std::move(m)};
  std::vector<std::vector<ItemId>> priorities;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ItemId> list;
    for (ItemId b : base.preferences(agent(0))) list.push_back(item(tree_flip(ell, i, n + index(b)) - n));
    priorities.push_back(std::move(list));
  }
  Instance sym = derive_preferences(m, TieBreak::per_agent(std::move(priorities)));
  return {std::move(t), std::move(sym), std::move(m)};
}

TreeGenerated gen_tree8() {
  return gen_tree_instance(3, {Rational(2), Rational(3), Rational(4), Rational(5)}, TreeTies::Symmetric);
}

Metric graph_metric(std::size_t n, const std::vector<Edge>& edges) {
  const std::size_t p = 2 * n;
  std::vector<std::vector<std::optional<Rational>>> d(p, std::vector<std::optional<Rational>>(p));
  for (std::size_t x = 0; x < p; ++x) d[x][x] = Rational(0);
  for (const auto& e : edges) {
    if (e.x >= p || e.y >= p) throw InvalidParam("edge endpoint out of range");
    if (!d[e.x][e.y] || e.length < *d[e.x][e.y]) d[e.x][e.y] = d[e.y][e.x] = e.length;
  }
  for (std::size_t z = 0; z < p; ++z)
    for (std::size_t x = 0; x < p; ++x)
      for (std::size_t y = 0; y < p; ++y)
        if (d[x][z] && d[z][y] && (!d[x][y] || *d[x][z] + *d[z][y] < *d[x][y])) d[x][y] = *d[x][z] + *d[z][y];
  std::vector<std::vector<Rational>> out(p, std::vector<Rational>(p));
  for (std::size_t x = 0; x < p; ++x)
    for (std::size_t y = 0; y < p; ++y) {
      if (!d[x][y]) throw InvalidParam("graph is disconnected");
      out[x][y] = *d[x][y];
    }
  return validate_metric(out);
}

namespace {

// (agent, item), 1-based as in the drawing.
constexpr std::pair<int, int> kDrawnEdges[] = {{1, 1}, {2, 1}, {2, 2}, {3, 3}, {4, 3}, {4, 2}, {4, 4}, {5, 5},
                                               {6, 5}, {6, 6}, {7, 7}, {8, 8}, {8, 4}, {8, 6}, {8, 7}};

std::vector<Edge> drawn_edges() {
  std::vector<Edge> e;
  for (auto [a, b] : kDrawnEdges)
    e.push_back({static_cast<std::size_t>(a - 1), static_cast<std::size_t>(8 + b - 1), Rational(1)});
  return e;
}

}  // namespace

Metric tree8_drawn_metric() { return graph_metric(8, drawn_edges()); }

Metric tree8_base_metric() {
  auto e = drawn_edges();
  e.push_back({7, 8 + 4, Rational(1)});
  e.push_back({4, 8 + 0, Rational(5)});
  e.push_back({5, 8 + 0, Rational(5)});
  return graph_metric(8, e);
}

MetricFamily make_family(Instance instance, std::vector<Metric> metrics) {
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    auto r = is_consistent(metrics[i], instance);
    if (!r) throw ConsistencyFailure(i, *r.witness);
  }
  return {std::move(instance), std::move(metrics)};
}

MetricFamily tree8_family_from(const Metric& d1) {
  std::vector<Metric> ms;
  for (std::size_t i = 0; i < 8; ++i) ms.push_back(relabel(d1, 3, i));
  return make_family(gen_tree8().instance, std::move(ms));
}

MetricFamily gen_tree8_family() { return tree8_family_from(tree8_base_metric()); }

OrderedGenerated gen_sd_exponential(std::size_t n, const Rational& eps) {
  require(n >= 2 && n <= 62, "gen_sd_exponential needs 2 <= n <= 62");
  require(sgn(eps) > 0 && eps < 1, "eps must lie in (0, 1)");
  std::vector<Rational> agents{Rational(1)}, items{Rational(-eps)};
  for (std::size_t t = 1; t < n; ++t) {
    agents.push_back(pow2(t));
    items.push_back(pow2(t));
  }
  Metric m = line_metric(agents, items);
  std::vector<AgentId> order;
  for (std::size_t i = 0; i < n; ++i) order.push_back(agent(i));
  return {derive_preferences(m, TieBreak::by_item_index()), m, order};
}

OrderedGenerated gen_boston(std::size_t k, const Rational& eps) {
  require(k >= 2 && k <= 40, "gen_boston needs 2 <= k <= 40");
  require(sgn(eps) > 0 && eps < 1, "eps must lie in (0, 1)");
  std::vector<Rational> agents{Rational(1)}, items{Rational(-eps)};
  for (std::size_t t = 1; t < k; ++t)
    for (std::size_t r = 0; r < t; ++r) {
      agents.push_back(pow2(t));
      items.push_back(pow2(t));
    }
  Metric m = line_metric(agents, items);
  std::vector<AgentId> order;
  for (std::size_t i = 0; i < agents.size(); ++i) order.push_back(agent(i));
  return {derive_preferences(m, TieBreak::by_item_index()), m, order};
}

Metric random_metric(std::size_t n, std::uint64_t seed) {
  require(n >= 2, "random_metric needs n >= 2");
  Lcg64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t x = 0; x < 2 * n; ++x)
    for (std::size_t y = x + 1; y < 2 * n; ++y) {
      long num = rng.below(25) == 0 ? 0 : 1 + rng.below(9);
      long den = 1 + rng.below(3);
      edges.push_back({x, y, Rational(num, den)});
      edges.back().length.canonicalize();
    }
  return graph_metric(n, edges);
}

nlohmann::json to_json(const MetricFamily& family) {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : family.metrics) ms.push_back(to_json(m));
  return {{"instance", to_json(family.instance)}, {"metrics", std::move(ms)}};
}

MetricFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("instance") || !j.contains("metrics") || !j["metrics"].is_array())
    throw InvalidParam("family JSON needs 'instance' and 'metrics'");
  Instance inst = instance_from_json(j["instance"]);
  std::vector<Metric> ms;
  for (const auto& m : j["metrics"]) {
    ms.push_back(metric_from_json(m));
    if (ms.back().n() != inst.n()) throw DimensionMismatch("family member size differs from the instance");
  }
  return make_family(std::move(inst), std::move(ms));
}

}  // namespace distlab
