#include "rounding.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <limits>

namespace gtd {
namespace {

Sym3 info_counts(const std::vector<std::pair<int, long>>& pts, const GridTables& t,
                 double denom) {
  Sym3 m = Sym3::zero();
  for (auto [x, n] : pts)
    if (n > 0) m += t.atom[x - 1] * (static_cast<double>(n) * t.cost[x - 1] / denom);
  return m;
}

std::vector<std::pair<int, long>> merge_counts(const std::vector<std::pair<int, long>>& base,
                                               const std::vector<std::pair<int, long>>& delta) {
  std::vector<std::pair<int, long>> out = base;
  for (auto [x, d] : delta) {
    bool found = false;
    for (auto& p : out)
      if (p.first == x) {
        p.second += d;
        found = true;
        break;
      }
    if (!found) out.emplace_back(x, d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::remove_if(out.begin(), out.end(), [](auto& p) { return p.second <= 0; }),
            out.end());
  return out;
}

double spent_cost(const std::vector<std::pair<int, long>>& pts, const GridTables& t) {
  double s = 0;
  for (auto [x, n] : pts) s += static_cast<double>(n) * t.cost[x - 1];
  return s;
}

struct SearchResult {
  bool found = false;
  double obj = kInf;
  double leftover = kInf;
  std::vector<long> delta;

  // strictly better objective wins; near-ties prefer the smaller leftover,
  // then whichever allocation was found first in enumeration order
  // (lexicographically smallest over ascending group sizes)
  void offer(double o, double rem, const std::vector<long>& d) {
    if (o < obj - 1e-12 || (o <= obj + 1e-12 && rem < leftover - 1e-9)) {
      obj = o;
      leftover = rem;
      delta = d;
      found = true;
    }
  }
  void merge(const SearchResult& r) {
    if (r.found) offer(r.obj, r.leftover, r.delta);
  }
};

struct SearchState {
  const std::vector<int>& cand;
  const std::vector<long>& caps;
  const RoundingObjective& obj;
  const std::vector<std::pair<int, long>>& base;
  const GridTables& t;
  double denom;
  bool exact_sum;
  long enum_cap;
  bool prune;
  std::atomic<long>& nodes;

  std::vector<long> delta;
  SearchResult best;

  void dfs(std::size_t i, double rem) {
    if (nodes.fetch_add(1, std::memory_order_relaxed) >= enum_cap)
      throw enumeration_cap_exceeded();
    if (i == cand.size()) {
      if (rem < -1e-9) return;  // overspent (only reachable with pruning off)
      if (exact_sum && rem > 1e-6) return;
      std::vector<std::pair<int, long>> dl;
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (delta[j] > 0) dl.emplace_back(cand[j], delta[j]);
      best.offer(exact_objective(obj, merge_counts(base, dl), t, denom), rem, delta);
      return;
    }
    double c = t.cost[cand[i] - 1];
    long cmax = caps[i];
    if (prune) cmax = std::min(cmax, static_cast<long>(std::floor(rem / c + 1e-9)));
    if (cmax < 0) cmax = 0;
    for (long d = 0; d <= cmax; ++d) {
      delta[i] = d;
      dfs(i + 1, rem - static_cast<double>(d) * c);
    }
    delta[i] = 0;
  }
};

/// Runs the DFS, splitting the first branching level across threads; the
/// merge order is fixed (ascending first-level count) so the result is
/// identical to the sequential enumeration.
SearchResult run_search(const std::vector<int>& cand, const std::vector<long>& caps,
                        double remaining, const RoundingObjective& obj,
                        const std::vector<std::pair<int, long>>& base, const GridTables& t,
                        double denom, bool exact_sum, long enum_cap, bool prune, int threads) {
  std::atomic<long> nodes{0};
  double rem0 = remaining + 1e-9;
  double c0 = t.cost[cand[0] - 1];
  long cmax0 = caps[0];
  if (prune) cmax0 = std::min(cmax0, static_cast<long>(std::floor(rem0 / c0 + 1e-9)));
  if (cmax0 < 0) cmax0 = 0;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(cmax0) + 1));
  if (threads == 1 || cand.size() == 1) {
    SearchState st{cand, caps, obj, base, t, denom, exact_sum, enum_cap, prune, nodes, {}, {}};
    st.delta.assign(cand.size(), 0);
    st.dfs(0, rem0);
    return st.best;
  }
  std::vector<std::future<SearchResult>> futs;
  long per = (cmax0 + threads) / threads;
  for (long lo = 0; lo <= cmax0; lo += per) {
    long hi = std::min(cmax0, lo + per - 1);
    futs.push_back(std::async(std::launch::async, [&, lo, hi] {
      SearchState st{cand, caps, obj, base, t, denom, exact_sum, enum_cap, prune, nodes, {}, {}};
      st.delta.assign(cand.size(), 0);
      for (long d0 = lo; d0 <= hi; ++d0) {
        st.delta[0] = d0;
        st.dfs(1, rem0 - static_cast<double>(d0) * c0);
      }
      return st.best;
    }));
  }
  SearchResult best;
  for (auto& f : futs) best.merge(f.get());  // ascending first-level ranges
  return best;
}

std::pair<ExactDesign, RoundingTrace> round_common(const Design& oad, double C,
                                                   const RoundingObjective& obj,
                                                   const GridTables& t,
                                                   const ExpansionConfig& expansion,
                                                   double prune_tol, bool exact_sum,
                                                   int threads) {
  expansion.validate();
  if (!(C > 0) || !std::isfinite(C)) throw invalid_input("budget must be positive and finite");
  if (obj.criteria.empty()) throw invalid_input("rounding needs at least one criterion");
  auto supp = support(oad, prune_tol);

  std::vector<int> cand;
  for (auto [x, w] : supp)
    for (int d = -expansion.radius; d <= expansion.radius; ++d) {
      int y = std::clamp(x + d, 1, t.M);
      if (std::find(cand.begin(), cand.end(), y) == cand.end()) cand.push_back(y);
    }
  std::sort(cand.begin(), cand.end());
  double cmin = kInf;
  for (int x : cand) cmin = std::min(cmin, t.cost[x - 1]);
  if (C + 1e-9 < cmin) throw budget_too_small();

  RoundingTrace trace;
  std::vector<std::pair<int, long>> base;
  for (auto [x, w] : supp) {
    long n = static_cast<long>(std::floor(C * w / t.cost[x - 1]));
    base.emplace_back(x, n);
    trace.floor_counts.emplace_back(x, n);
  }
  double Cr = C - spent_cost(base, t);
  if (Cr < 0) Cr = 0;
  trace.remaining = Cr;

  std::vector<long> caps;
  bool any = false;
  for (int x : cand) {
    long m = static_cast<long>(std::floor(Cr / t.cost[x - 1] + 1e-9));
    caps.push_back(m);
    any = any || m > 0;
  }

  std::vector<std::pair<int, long>> delta;
  if (any) {
    SearchResult best =
        run_search(cand, caps, Cr, obj, base, t, C, exact_sum, expansion.enum_cap, true, threads);
    if (best.found)
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (best.delta[j] > 0) delta.emplace_back(cand[j], best.delta[j]);
  }
  trace.delta = delta;

  ExactDesign ed;
  ed.points = merge_counts(base, delta);
  ed.realized_cost = spent_cost(ed.points, t);
  for (auto [x, n] : ed.points) ed.realized_n += n;
  trace.remaining_final = C - ed.realized_cost;
  if (std::abs(trace.remaining_final) < 1e-9) trace.remaining_final = 0;

  trace.objective = exact_objective(obj, ed.points, t, C);
  if (obj.criteria.size() > 1)
    trace.efficiency = exact_min_eff(ed, obj.criteria, t, C);
  else if (obj.has_anchor)
    trace.efficiency = exact_efficiency(ed, obj.criteria[0], t);
  else
    trace.efficiency = std::numeric_limits<double>::quiet_NaN();
  return {ed, trace};
}

}  // namespace

double exact_objective(const RoundingObjective& obj, const std::vector<std::pair<int, long>>& pts,
                       const GridTables& t, double denom) {
  Sym3 info = info_counts(pts, t, denom);
  if (obj.criteria.size() == 1) return objective(obj.criteria[0].spec, info);
  double worst = kInf;
  for (const auto& a : obj.criteria) {
    double eff = efficiency_from_values(a.spec.kind, a.anchor, objective(a.spec, info));
    worst = std::min(worst, eff);
  }
  return -worst;
}

double exact_efficiency(const ExactDesign& ed, const AnchoredCriterion& a, const GridTables& t) {
  Sym3 info = info_counts(ed.points, t, ed.realized_cost);
  return efficiency_from_values(a.spec.kind, a.anchor, objective(a.spec, info));
}

double exact_min_eff(const ExactDesign& ed, const std::vector<AnchoredCriterion>& criteria,
                     const GridTables& t, double denom) {
  Sym3 info = info_counts(ed.points, t, denom);
  double worst = kInf;
  for (const auto& a : criteria)
    worst = std::min(worst,
                     efficiency_from_values(a.spec.kind, a.anchor, objective(a.spec, info)));
  return worst;
}

std::vector<std::pair<int, long>> allocation_search(
    const std::vector<int>& candidates, const std::vector<long>& caps, double remaining,
    const RoundingObjective& obj, const std::vector<std::pair<int, long>>& base,
    const GridTables& t, double denom, bool exact_sum, long enum_cap, bool prune, int threads) {
  if (candidates.size() != caps.size())
    throw invalid_input("candidate and cap lists must have equal length");
  if (candidates.empty()) return {};
  SearchResult best = run_search(candidates, caps, remaining, obj, base, t, denom, exact_sum,
                                 enum_cap, prune, threads);
  std::vector<std::pair<int, long>> out;
  if (best.found)
    for (std::size_t j = 0; j < candidates.size(); ++j)
      if (best.delta[j] > 0) out.emplace_back(candidates[j], best.delta[j]);
  return out;
}

std::pair<ExactDesign, RoundingTrace> round_budget(const Design& oad, double C,
                                                   const RoundingObjective& obj,
                                                   const GridTables& t,
                                                   const ExpansionConfig& expansion,
                                                   double prune_tol, int threads) {
  return round_common(oad, C, obj, t, expansion, prune_tol, false, threads);
}

std::pair<ExactDesign, RoundingTrace> round_fixed_n(const Design& oad, long n,
                                                    const RoundingObjective& obj,
                                                    const GridTables& t,
                                                    const ExpansionConfig& expansion,
                                                    double prune_tol, int threads) {
  for (double c : t.cost)
    if (std::abs(c - 1.0) > 1e-12)
      throw invalid_input("fixed-n rounding requires unit per-group costs (q = 0)");
  if (n < 1) throw invalid_input("sample size must be positive");
  if (static_cast<long>(support(oad, prune_tol).size()) > n) throw sample_too_small();
  return round_common(oad, static_cast<double>(n), obj, t, expansion, prune_tol, true, threads);
}

}  // namespace gtd
