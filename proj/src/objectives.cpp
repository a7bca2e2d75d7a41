#include "distlab/objectives.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "distlab/parallel.hpp"

namespace distlab {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw RangeError("k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
}

void check_sizes(const Matching& m, const Metric& metric) {
  if (m.n() != metric.n()) throw DimensionMismatch("matching and metric sizes differ");
}

Rational top_sum(std::vector<Rational> v, std::size_t k) {
  std::sort(v.begin(), v.end(), std::greater<>());
  Rational s = 0;
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s;
}

// Lexicographic (primary, secondary) cost; an ordered abelian group.
struct LexCost {
  Rational primary;
  mpz_class secondary;
  LexCost& operator+=(const LexCost& o) {
    primary += o.primary;
    secondary += o.secondary;
    return *this;
  }
  LexCost& operator-=(const LexCost& o) {
    primary -= o.primary;
    secondary -= o.secondary;
    return *this;
  }
  friend LexCost operator-(LexCost a, const LexCost& b) { return a -= b; }
  friend bool operator<(const LexCost& a, const LexCost& b) {
    int c = cmp(a.primary, b.primary);
    return c != 0 ? c < 0 : a.secondary < b.secondary;
  }
};

// Shortest augmenting path assignment with exact potentials. Returns
// row -> column for an n x n minimum-cost assignment.
template <class C, class CostFn>
std::vector<std::size_t> hungarian(std::size_t n, CostFn cost) {
  std::vector<C> u(n + 1), v(n + 1), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<bool> used(n + 1, false), seen(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      C delta;
      bool have_delta = false;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        C cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (!seen[j] || cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
          seen[j] = true;
        }
        if (!have_delta || minv[j] < delta) {
          delta = minv[j];
          j1 = j;
          have_delta = true;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Minimum-sum assignment for cost(i, j); lexicographically least among optima.
template <class CostFn>
std::vector<std::size_t> lex_least_assignment(std::size_t n, CostFn cost) {
  std::vector<mpz_class> place(n);
  mpz_class base = static_cast<unsigned long>(n);
  for (std::size_t i = 0; i < n; ++i) mpz_pow_ui(place[i].get_mpz_t(), base.get_mpz_t(), n - 1 - i);
  return hungarian<LexCost>(n, [&](std::size_t i, std::size_t j) {
    return LexCost{cost(i, j), place[i] * static_cast<unsigned long>(j)};
  });
}

template <class CostFn>
Rational assignment_value(std::size_t n, CostFn cost) {
  auto a = hungarian<Rational>(n, cost);
  Rational s = 0;
  for (std::size_t i = 0; i < n; ++i) s += cost(i, a[i]);
  return s;
}

// Kuhn's augmenting paths on the graph allowed(i, j); `fixed` rows are
// pre-assigned and excluded.
bool has_perfect_matching(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& allowed,
                          const std::vector<std::size_t>& fixed_rows, const std::vector<bool>& fixed_cols) {
  std::vector<std::size_t> col_owner(n, n);
  std::vector<bool> row_fixed(n, false);
  for (std::size_t r : fixed_rows) row_fixed[r] = true;
  std::vector<bool> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (fixed_cols[c] || visited[c] || !allowed(r, c)) continue;
      visited[c] = true;
      if (col_owner[c] == n || augment(col_owner[c])) {
        col_owner[c] = r;
        return true;
      }
    }
    return false;
  };
  for (std::size_t r = 0; r < n; ++r) {
    if (row_fixed[r]) continue;
    visited.assign(n, false);
    if (!augment(r)) return false;
  }
  return true;
}

std::vector<Rational> distinct_distances(const Metric& metric) {
  std::vector<Rational> d;
  for (std::size_t i = 0; i < metric.n(); ++i)
    for (std::size_t j = 0; j < metric.n(); ++j) d.push_back(metric(agent(i), item(j)));
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

Matching to_matching(const std::vector<std::size_t>& a) { return Matching::from_items(a); }

}  // namespace

std::vector<Rational> cost_vector(const Matching& m, const Metric& metric) {
  check_sizes(m, metric);
  std::vector<Rational> c(m.n());
  for (std::size_t i = 0; i < m.n(); ++i)
    if (const auto& b = m[agent(i)]) c[i] = metric(agent(i), *b);
  return c;
}

Rational cost_topk(const Matching& m, const Metric& metric, std::size_t k) {
  check_k(k, metric.n());
  return top_sum(cost_vector(m, metric), k);
}

Rational cost_restricted(const Matching& m, const Metric& metric, std::span<const AgentId> subset, std::size_t k) {
  check_k(k, metric.n());
  auto full = cost_vector(m, metric);
  std::vector<Rational> c(m.n());
  for (AgentId a : subset) {
    if (index(a) >= m.n()) throw RangeError("agent outside the instance");
    c[index(a)] = full[index(a)];
  }
  return top_sum(std::move(c), k);
}

OwaWeights::OwaWeights(std::vector<Rational> w) : w_(std::move(w)) {
  if (w_.empty()) throw InvalidParam("OWA weights must be nonempty");
  bool any = false;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (sgn(w_[i]) < 0) throw InvalidParam("OWA weights must be nonnegative");
    if (i > 0 && w_[i] > w_[i - 1]) throw InvalidParam("OWA weights must be nonincreasing");
    any = any || sgn(w_[i]) > 0;
  }
  if (!any) throw InvalidParam("OWA weights must not all be zero");
}

OwaWeights OwaWeights::top_k(std::size_t n, std::size_t k) {
  check_k(k, n);
  std::vector<Rational> w(n, Rational(0));
  for (std::size_t i = 0; i < k; ++i) w[i] = 1;
  return OwaWeights(std::move(w));
}

Rational cost_owa(const Matching& m, const Metric& metric, const OwaWeights& weights) {
  auto c = cost_vector(m, metric);
  if (weights.size() != c.size()) throw DimensionMismatch("OWA weights and matching sizes differ");
  std::sort(c.begin(), c.end(), std::greater<>());
  Rational s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += weights.weights()[i] * c[i];
  return s;
}

OptimalMatching optimal_sum(const Metric& metric) {
  const std::size_t n = metric.n();
  auto a = lex_least_assignment(n, [&](std::size_t i, std::size_t j) { return metric(agent(i), item(j)); });
  Matching m = to_matching(a);
  return {m, cost_topk(m, metric, n)};
}

OptimalMatching optimal_max(const Metric& metric) {
  const std::size_t n = metric.n();
  auto values = distinct_distances(metric);
  std::vector<bool> no_cols(n, false);
  auto feasible = [&](const Rational& t) {
    return has_perfect_matching(
        n, [&](std::size_t i, std::size_t j) { return metric(agent(i), item(j)) <= t; }, {}, no_cols);
  };
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible(values[mid])) hi = mid;
    else lo = mid + 1;
  }
  const Rational t = values[lo];
  auto allowed = [&](std::size_t i, std::size_t j) { return metric(agent(i), item(j)) <= t; };
  std::vector<std::size_t> chosen, rows;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (std::size_t j = 0; j < n && !placed; ++j) {
      if (used[j] || !allowed(i, j)) continue;
      used[j] = true;
      rows.push_back(i);
      if (has_perfect_matching(n, allowed, rows, used)) {
        chosen.push_back(j);
        placed = true;
      } else {
        used[j] = false;
        rows.pop_back();
      }
    }
    if (!placed) throw std::logic_error("bottleneck extraction lost feasibility");
  }
  return {to_matching(chosen), t};
}

OptimalMatching optimal_topk(const Metric& metric, std::size_t k, unsigned jobs) {
  const std::size_t n = metric.n();
  check_k(k, n);
  std::vector<Rational> candidates{Rational(0)};
  for (auto& d : distinct_distances(metric))
    if (sgn(d) > 0) candidates.push_back(d);
  auto clipped = [&](const Rational& t) {
    return [&metric, t](std::size_t i, std::size_t j) {
      Rational c = metric(agent(i), item(j)) - t;
      return sgn(c) > 0 ? c : Rational(0);
    };
  };
  std::vector<Rational> score(candidates.size());
  parallel_for(candidates.size(), jobs, [&](std::size_t c) {
    const Rational& t = candidates[c];
    score[c] = Rational(static_cast<unsigned long>(k)) * t + assignment_value(n, clipped(t));
  });
  Rational best = *std::min_element(score.begin(), score.end());
  std::optional<std::vector<std::size_t>> lex;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (score[c] != best) continue;
    auto a = lex_least_assignment(n, clipped(candidates[c]));
    if (!lex || a < *lex) lex = std::move(a);
  }
  Matching m = to_matching(*lex);
  if (cost_topk(m, metric, k) != best) throw std::logic_error("threshold scan score disagrees with cost_topk");
  return {m, best};
}

namespace {

template <class Visit>
void for_each_permutation(std::size_t n, Visit visit) {
  if (n > 9) throw TooLarge("brute force is limited to n <= 9");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    visit(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

std::vector<Rational> sorted_costs(const Metric& metric, const std::vector<std::size_t>& perm) {
  std::vector<Rational> c(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) c[i] = metric(agent(i), item(perm[i]));
  std::sort(c.begin(), c.end(), std::greater<>());
  return c;
}

}  // namespace

std::vector<OptimalMatching> brute_force_optimal_all(const Metric& metric) {
  const std::size_t n = metric.n();
  std::vector<std::optional<Rational>> best(n);
  std::vector<std::vector<std::size_t>> arg(n);
  for_each_permutation(n, [&](const std::vector<std::size_t>& perm) {
    auto c = sorted_costs(metric, perm);
    Rational s = 0;
    for (std::size_t k = 0; k < n; ++k) {
      s += c[k];
      if (!best[k] || s < *best[k]) {
        best[k] = s;
        arg[k] = perm;
      }
    }
  });
  std::vector<OptimalMatching> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back({to_matching(arg[k]), *best[k]});
  return out;
}

OptimalMatching brute_force_optimal(const Metric& metric, std::size_t k) {
  check_k(k, metric.n());
  return brute_force_optimal_all(metric)[k - 1];
}

OptimalMatching brute_force_optimal_owa(const Metric& metric, const OwaWeights& weights) {
  const std::size_t n = metric.n();
  if (weights.size() != n) throw DimensionMismatch("OWA weights and metric sizes differ");
  std::optional<Rational> best;
  std::vector<std::size_t> arg;
  for_each_permutation(n, [&](const std::vector<std::size_t>& perm) {
    auto c = sorted_costs(metric, perm);
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) s += weights.weights()[i] * c[i];
    if (!best || s < *best) {
      best = s;
      arg = perm;
    }
  });
  return {to_matching(arg), *best};
}

}  // namespace distlab
