#pragma once

#include <cmath>
#include <vector>

namespace gtd {

struct LpResult {
  bool feasible = false;
  std::vector<double> x;
  double objective = 0;
};

/// Two-phase dense tableau simplex for
///   min c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
/// Sized for small problems (a handful of variables, a few hundred rows);
/// Bland's rule keeps it cycle-free.
inline LpResult solve_lp(const std::vector<double>& c,
                         const std::vector<std::vector<double>>& A_ub,
                         const std::vector<double>& b_ub,
                         const std::vector<std::vector<double>>& A_eq,
                         const std::vector<double>& b_eq) {
  const int n = static_cast<int>(c.size());
  const int mu = static_cast<int>(A_ub.size());
  const int me = static_cast<int>(A_eq.size());
  const int m = mu + me;
  const int ns = mu;        // slack per inequality
  const int na = m;         // artificial per row (simplifies sign handling)
  const int total = n + ns + na;
  const double eps = 1e-11;

  // tableau rows: m constraint rows + objective row; columns: vars + rhs
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(total + 1, 0.0));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const auto& row = i < mu ? A_ub[i] : A_eq[i - mu];
    double rhs = i < mu ? b_ub[i] : b_eq[i - mu];
    for (int j = 0; j < n; ++j) T[i][j] = row[j];
    if (i < mu) T[i][n + i] = 1.0;
    T[i][total] = rhs;
    if (rhs < 0) {  // flip so artificial basis is feasible
      for (int j = 0; j <= total; ++j) T[i][j] = -T[i][j];
    }
    T[i][n + ns + i] = 1.0;
    basis[i] = n + ns + i;
  }

  auto pivot = [&](int pr, int pc) {
    double pv = T[pr][pc];
    for (int j = 0; j <= total; ++j) T[pr][j] /= pv;
    for (int i = 0; i <= m; ++i) {
      if (i == pr) continue;
      double f = T[i][pc];
      if (f == 0) continue;
      for (int j = 0; j <= total; ++j) T[i][j] -= f * T[pr][j];
    }
    basis[pr] = pc;
  };

  auto run = [&](int ncols) {
    for (int iter = 0; iter < 100000; ++iter) {
      int pc = -1;
      for (int j = 0; j < ncols; ++j)  // Bland: first improving column
        if (T[m][j] < -eps) {
          pc = j;
          break;
        }
      if (pc < 0) return true;
      int pr = -1;
      double best = 0;
      for (int i = 0; i < m; ++i) {
        if (T[i][pc] > eps) {
          double ratio = T[i][total] / T[i][pc];
          if (pr < 0 || ratio < best - eps ||
              (ratio < best + eps && basis[i] < basis[pr])) {
            pr = i;
            best = ratio;
          }
        }
      }
      if (pr < 0) return false;  // unbounded
      pivot(pr, pc);
    }
    return false;
  };

  // Phase 1: minimize sum of artificials.
  for (int j = 0; j < total; ++j) {
    double s = 0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n + ns) s += T[i][j];
    T[m][j] = (j >= n + ns ? 1.0 : 0.0) - s;
  }
  {
    double s = 0;
    for (int i = 0; i < m; ++i) s += T[i][total];
    T[m][total] = -s;
  }
  run(total);
  double phase1 = -T[m][total];
  LpResult res;
  if (phase1 > 1e-7) return res;  // infeasible

  // Drive any residual artificials out of the basis.
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n + ns) {
      int pc = -1;
      for (int j = 0; j < n + ns; ++j)
        if (std::abs(T[i][j]) > eps) {
          pc = j;
          break;
        }
      if (pc >= 0) pivot(i, pc);
    }
  }

  // Phase 2: original objective, artificial columns frozen.
  for (int j = 0; j <= total; ++j) T[m][j] = 0;
  for (int j = 0; j < n; ++j) T[m][j] = c[j];
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n && c[basis[i]] != 0) {
      double f = c[basis[i]];
      for (int j = 0; j <= total; ++j) T[m][j] -= f * T[i][j];
    }
  }
  if (!run(n + ns)) return res;  // artificial columns are outside the scan

  res.feasible = true;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T[i][total];
  res.objective = 0;
  for (int j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace gtd
