#include "maximin.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "simplex_lp.hpp"

namespace gtd {
namespace {

void renorm(std::vector<double>& w) {
  double s = 0;
  for (double& v : w) {
    if (v < 0) v = 0;
    s += v;
  }
  for (double& v : w) v /= s;
}

std::vector<double> expand_w(const std::vector<int>& supp, const std::vector<double>& ws,
                             int M) {
  std::vector<double> w(M, 0.0);
  for (std::size_t i = 0; i < supp.size(); ++i) w[supp[i]] = ws[i];
  return w;
}

struct InnerState {
  std::vector<int> supp;
  std::vector<double> w;
  std::vector<double> sigma;  // converged smoothed-max multipliers
  long iters = 0;
};

/// F_t(w) = max_j (Phi_j(w) - h_j(t)) at the exact (unsmoothed) values.
double F_exact(const MaximinSpec& spec, const GridTables& t, const std::vector<double>& w,
               double tt) {
  Sym3 info = info_matrix(w, t);
  double mx = -kInf;
  for (const auto& a : spec.criteria)
    mx = std::max(mx, maximin_phi(a, info) - h_fn(a, tt));
  return mx;
}

/// mu-smoothed value of F_t restricted to a support.
double f_mu_at(const MaximinSpec& spec, const GridTables& t, const std::vector<int>& supp,
               const std::vector<double>& ws, double tt, double mu) {
  Sym3 info = info_matrix(expand_w(supp, ws, t.M), t);
  const int K = static_cast<int>(spec.criteria.size());
  std::vector<double> v(K);
  double mx = -kInf;
  for (int j = 0; j < K; ++j) {
    v[j] = maximin_phi(spec.criteria[j], info) - h_fn(spec.criteria[j], tt);
    mx = std::max(mx, v[j]);
  }
  double s = 0;
  for (int j = 0; j < K; ++j) s += std::exp((v[j] - mx) / mu);
  return mx + mu * std::log(s);
}

/// Minimizes the mu-annealed smoothed max over the support simplex (damped
/// Newton with exact boundary caps); anneal mu 1e-2 -> 1e-9 by x0.25.
void smoothed_newton(const MaximinSpec& spec, const GridTables& t, InnerState& st, double tt) {
  const int M = t.M;
  const int K = static_cast<int>(spec.criteria.size());
  for (double mu = 1e-2;; mu = std::max(1e-9, mu * 0.25)) {
    for (int it = 0; it < 80; ++it) {
      ++st.iters;
      int k = static_cast<int>(st.supp.size());
      std::vector<double> wf = expand_w(st.supp, st.w, M);
      std::vector<double> vals(K);
      std::vector<std::vector<double>> grads(K);
      std::vector<std::vector<std::vector<double>>> hesss(K);
      for (int j = 0; j < K; ++j) {
        CritDerivatives d = crit_derivatives(spec.criteria[j].spec, wf, t, st.supp, true);
        vals[j] = d.value - h_fn(spec.criteria[j], tt);
        grads[j] = std::move(d.grad);
        hesss[j] = std::move(d.hess);
      }
      double vmax = *std::max_element(vals.begin(), vals.end());
      std::vector<double>& sig = st.sigma;
      sig.assign(K, 0.0);
      double ssum = 0;
      for (int j = 0; j < K; ++j) {
        sig[j] = std::exp((vals[j] - vmax) / mu);
        ssum += sig[j];
      }
      for (int j = 0; j < K; ++j) sig[j] /= ssum;
      double Fmu = vmax + mu * std::log(ssum);
      std::vector<double> g(k, 0.0);
      std::vector<std::vector<double>> H(k, std::vector<double>(k, 0.0));
      for (int j = 0; j < K; ++j)
        for (int a = 0; a < k; ++a) {
          g[a] += sig[j] * grads[j][a];
          for (int b = 0; b < k; ++b) H[a][b] += sig[j] * hesss[j][a][b];
        }
      // curvature of the log-sum-exp coupling
      for (int j = 0; j < K; ++j)
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b)
            H[a][b] += sig[j] * grads[j][a] * grads[j][b] / mu;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) H[a][b] -= g[a] * g[b] / mu;

      std::vector<double> gr(k - 1);
      std::vector<std::vector<double>> Hr(k - 1, std::vector<double>(k - 1));
      for (int i = 0; i < k - 1; ++i) {
        gr[i] = g[i] - g[k - 1];
        for (int j2 = 0; j2 < k - 1; ++j2)
          Hr[i][j2] = H[i][j2] - H[i][k - 1] - H[k - 1][j2] + H[k - 1][k - 1];
      }
      std::vector<double> z = detail::damped_solve(std::move(Hr), std::move(gr));
      std::vector<double> dz(k, 0.0);
      double zs = 0;
      for (int i = 0; i < k - 1; ++i) {
        dz[i] = z[i];
        zs += z[i];
      }
      dz[k - 1] = -zs;
      double step = 1.0;
      for (int i = 0; i < k; ++i)
        if (dz[i] < -1e-300) step = std::min(step, -st.w[i] / dz[i]);
      bool moved = false;
      std::vector<double> wn(k);
      for (int bt = 0; bt < 50; ++bt) {
        double mn = 0;
        for (int i = 0; i < k; ++i) {
          wn[i] = st.w[i] + step * dz[i];
          mn = std::min(mn, wn[i]);
        }
        if (mn >= 0 && f_mu_at(spec, t, st.supp, wn, tt, mu) <= Fmu - 1e-16) {
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      double nrm = 0;
      for (int i = 0; i < k; ++i) {
        st.w[i] = std::max(0.0, st.w[i] + step * dz[i]);
        nrm += std::abs(dz[i]);
      }
      renorm(st.w);
      double wmin = *std::min_element(st.w.begin(), st.w.end());
      if (wmin < 1e-14 && k > 3) {
        std::vector<int> supp;
        std::vector<double> wk;
        for (int i = 0; i < k; ++i)
          if (st.w[i] > 1e-14) {
            supp.push_back(st.supp[i]);
            wk.push_back(st.w[i]);
          }
        st.supp = std::move(supp);
        st.w = std::move(wk);
        renorm(st.w);
        continue;
      }
      if (nrm * step < 1e-13) break;
    }
    if (mu <= 1e-9) break;
  }
}

/// Support-restricted minimization of F_t plus worst-direction exchange
/// weighted by the converged smoothed-max multipliers.
double exchange_phase(const MaximinSpec& spec, const GridTables& t, double tt,
                      const std::vector<int>& supp0, std::vector<double>& w_out,
                      long& iters) {
  const int M = t.M;
  const int K = static_cast<int>(spec.criteria.size());
  InnerState st;
  st.supp = supp0;
  st.w.assign(supp0.size(), 1.0 / supp0.size());
  std::vector<int> all(M);
  for (int i = 0; i < M; ++i) all[i] = i;
  for (int ex = 0; ex < 60; ++ex) {
    smoothed_newton(spec, t, st, tt);
    std::vector<double> wf = expand_w(st.supp, st.w, M);
    std::vector<double> gfull(M, 0.0);
    for (int j = 0; j < K; ++j) {
      if (st.sigma[j] == 0) continue;
      CritDerivatives d = crit_derivatives(spec.criteria[j].spec, wf, t, all, false);
      for (int u = 0; u < M; ++u) gfull[u] += st.sigma[j] * d.grad[u];
    }
    double gw = 0;
    for (int u = 0; u < M; ++u) gw += gfull[u] * wf[u];
    int best = -1;
    double red_best = 0;
    for (int u = 0; u < M; ++u) {
      bool in_supp = false;
      for (int s : st.supp) in_supp |= (s == u);
      if (in_supp) continue;
      double red = gfull[u] - gw;
      if (best < 0 || red < red_best) {
        best = u;
        red_best = red;
      }
    }
    if (best < 0 || red_best >= -1e-9) break;
    st.supp.push_back(best);
    std::sort(st.supp.begin(), st.supp.end());
    std::vector<double> wseed(st.supp.size());
    for (std::size_t i = 0; i < st.supp.size(); ++i)
      wseed[i] = wf[st.supp[i]] > 0 ? wf[st.supp[i]] : 1e-6;
    st.w = std::move(wseed);
    renorm(st.w);
  }
  // prune dust before reporting
  std::vector<int> supp;
  std::vector<double> wk;
  for (std::size_t i = 0; i < st.supp.size(); ++i)
    if (st.w[i] > 1e-12) {
      supp.push_back(st.supp[i]);
      wk.push_back(st.w[i]);
    }
  renorm(wk);
  w_out = expand_w(supp, wk, M);
  iters += st.iters;
  return F_exact(spec, t, w_out, tt);
}

/// Global minimum of F_t. The smoothed-Newton/exchange phase can stall at a
/// point where no single vertex direction is a minimax descent direction; the
/// linearized subproblem min_{v in simplex} max_j (val_j + g_j.(v - w)) both
/// supplies a combined descent direction and a valid lower bound on min F_t,
/// so the loop stops with a certified feasibility decision.
double min_F(const MaximinSpec& spec, const GridTables& t, double tt,
             const std::vector<int>& supp0, std::vector<double>& w_out, long& iters,
             double feas_tol) {
  const int M = t.M;
  const int K = static_cast<int>(spec.criteria.size());
  double F = exchange_phase(spec, t, tt, supp0, w_out, iters);
  std::vector<int> all(M);
  for (int i = 0; i < M; ++i) all[i] = i;
  for (int rnd = 0; rnd < 30; ++rnd) {
    std::vector<double> vals(K);
    std::vector<std::vector<double>> grads(K);
    Sym3 Iw = info_matrix(w_out, t);
    for (int j = 0; j < K; ++j) {
      CritDerivatives d = crit_derivatives(spec.criteria[j].spec, w_out, t, all, false);
      vals[j] = d.value - h_fn(spec.criteria[j], tt);
      grads[j] = std::move(d.grad);
    }
    F = *std::max_element(vals.begin(), vals.end());
    // LP variables: v (M), tau+ , tau-
    std::vector<std::vector<double>> A_ub(K, std::vector<double>(M + 2));
    std::vector<double> b_ub(K);
    std::vector<double> c(M + 2, 0.0);
    c[M] = 1.0;
    c[M + 1] = -1.0;
    for (int j = 0; j < K; ++j) {
      double gw = 0;
      for (int u = 0; u < M; ++u) {
        A_ub[j][u] = grads[j][u];
        gw += grads[j][u] * w_out[u];
      }
      A_ub[j][M] = -1.0;
      A_ub[j][M + 1] = 1.0;
      b_ub[j] = gw - vals[j];
    }
    std::vector<double> eq_row(M + 2, 0.0);
    for (int u = 0; u < M; ++u) eq_row[u] = 1.0;
    LpResult lp = solve_lp(c, A_ub, b_ub, {eq_row}, {1.0});
    if (!lp.feasible) break;
    double LB = lp.x[M] - lp.x[M + 1];
    if (F <= feas_tol || LB > feas_tol || F - LB <= 1e-11) break;
    // golden search on the exact max along v - w (information is affine)
    Sym3 Iv = Sym3::zero();
    for (int u = 0; u < M; ++u)
      if (lp.x[u] > 0) Iv += t.atom[u] * lp.x[u];
    auto F_at = [&](double a) {
      Sym3 info = Iw * (1.0 - a) + Iv * a;
      double mx = -kInf;
      for (const auto& ac : spec.criteria)
        mx = std::max(mx, maximin_phi(ac, info) - h_fn(ac, tt));
      return mx;
    };
    double lo = 0.0, hi2 = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      double m1 = lo + 0.382 * (hi2 - lo), m2 = lo + 0.618 * (hi2 - lo);
      if (F_at(m1) < F_at(m2))
        hi2 = m2;
      else
        lo = m1;
    }
    double a = 0.5 * (lo + hi2);
    for (int u = 0; u < M; ++u)
      w_out[u] = std::max(0.0, (1.0 - a) * w_out[u] + a * (u < M ? lp.x[u] : 0.0));
    renorm(w_out);
    // re-polish on the enlarged support; keep only if it improves
    InnerState st;
    for (int u = 0; u < M; ++u)
      if (w_out[u] > 1e-9) {
        st.supp.push_back(u);
        st.w.push_back(w_out[u]);
      }
    renorm(st.w);
    smoothed_newton(spec, t, st, tt);
    iters += st.iters;
    std::vector<double> wn = expand_w(st.supp, st.w, M);
    if (F_exact(spec, t, wn, tt) < F_exact(spec, t, w_out, tt)) w_out = wn;
    F = F_exact(spec, t, w_out, tt);
  }
  return F;
}

/// Gaussian elimination with partial pivoting; returns false if singular.
bool gauss_solve(std::vector<std::vector<double>> A, std::vector<double> b,
                 std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    if (std::abs(A[p][c]) < 1e-300) return false;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (int r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      if (f == 0) continue;
      for (int c2 = c; c2 < n; ++c2) A[r][c2] -= f * A[c][c2];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return true;
}

/// Residuals of the maximin equilibrium system at x = (w_1..w_{k-1}, eta, t);
/// w_k is eliminated by the simplex constraint and the aggregated-dispersion
/// equation at the last support point is dropped (it is linearly dependent:
/// sum_u w_u d_j(u, w) = 0 for every criterion).
std::vector<double> equilibrium_resid(const MaximinSpec& spec, const GridTables& t,
                                      const std::vector<int>& supp,
                                      const std::vector<int>& act,
                                      const std::vector<double>& x) {
  const int k = static_cast<int>(supp.size());
  const int A = static_cast<int>(act.size());
  std::vector<double> ws(k);
  double s = 0;
  for (int i = 0; i < k - 1; ++i) {
    ws[i] = x[i];
    s += x[i];
  }
  ws[k - 1] = 1.0 - s;
  const double tt = x[k - 1 + A];
  std::vector<double> w = expand_w(supp, ws, t.M);
  Sym3 info = info_matrix(w, t);
  std::vector<double> r(k + A, 0.0);
  double gsum = 0;
  for (int j = 0; j < A; ++j) {
    const auto& a = spec.criteria[act[j]];
    r[j] = maximin_phi(a, info) - h_fn(a, tt);
    gsum += x[k - 1 + j] * g_fn(a, tt);
  }
  r[A] = gsum - 1.0;
  for (int j = 0; j < A; ++j) {
    std::vector<double> d = dispersion_all(spec.criteria[act[j]].spec, w, t);
    for (int i = 0; i < k - 1; ++i) r[A + 1 + i] += x[k - 1 + j] * d[supp[i]];
  }
  return r;
}

/// Bisection localizes t* but leaves the weights wherever the inner minimizer
/// stalled on the flat ridge of F_t; the equivalence-theorem certificate needs
/// the exact equilibrium split. Damped Newton on the square system
///   Phi_j(w) = h_j(t)               (active criteria)
///   sum_j eta_j g_j(t) = 1
///   sum_j eta_j d_j(u, w) = 0        (support points, one dropped)
/// pins it; active set, support membership and eta signs are corrected
/// between solves. Returns false (inputs untouched) if no certified
/// equilibrium is reached.
bool equilibrium_polish(const MaximinSpec& spec, const GridTables& t,
                        std::vector<double>& w_io, double& t_io) {
  const int M = t.M;
  const int K = static_cast<int>(spec.criteria.size());
  std::vector<int> supp;
  for (int u = 0; u < M; ++u)
    if (w_io[u] > 1e-9) supp.push_back(u);
  double tt = t_io;
  std::vector<double> w = w_io;
  // bisection already pins t* to ~bisection_tol, so any "equilibrium" that
  // moves t materially is a wrong basin, handled like a Newton stall
  const double t0 = t_io;
  const std::vector<double> w0 = w_io;
  auto drop_lightest = [&]() {
    if (supp.size() <= 3) return false;
    int drop = 0;
    for (std::size_t i = 1; i < supp.size(); ++i)
      if (w0[supp[i]] < w0[supp[drop]]) drop = i;
    supp.erase(supp.begin() + drop);
    w.assign(M, 0.0);
    for (int u : supp) w[u] = w0[u] > 0 ? w0[u] : 1e-6;
    renorm(w);
    tt = t0;
    return true;
  };

  // the active criteria are read off the bisection point once; corrections
  // only remove (negative eta) or restore (positive slack) members
  std::vector<int> act;
  {
    Sym3 info0 = info_matrix(w0, t);
    for (int j = 0; j < K; ++j)
      if (maximin_phi(spec.criteria[j], info0) - h_fn(spec.criteria[j], t0) > -1e-3)
        act.push_back(j);
  }
  if (act.empty()) return false;

  for (int corr = 0; corr < 10; ++corr) {
    const int k = static_cast<int>(supp.size());
    if (k < 2) return false;
    const int A = static_cast<int>(act.size());

    // initial eta: min over {eta >= 0, sum eta_j g_j = 1} of max_u sum eta_j d_j(u)
    std::vector<std::vector<double>> disp(A);
    for (int j = 0; j < A; ++j) disp[j] = dispersion_all(spec.criteria[act[j]].spec, w, t);
    std::vector<std::vector<double>> A_ub(M, std::vector<double>(A + 2, 0.0));
    std::vector<double> b_ub(M, 0.0);
    for (int u = 0; u < M; ++u) {
      for (int j = 0; j < A; ++j) A_ub[u][j] = disp[j][u];
      A_ub[u][A] = -1.0;
      A_ub[u][A + 1] = 1.0;
    }
    std::vector<double> c(A + 2, 0.0), eq(A + 2, 0.0);
    c[A] = 1.0;
    c[A + 1] = -1.0;
    for (int j = 0; j < A; ++j) eq[j] = g_fn(spec.criteria[act[j]], tt);
    LpResult lp0 = solve_lp(c, A_ub, b_ub, {eq}, {1.0});
    if (!lp0.feasible) return false;

    const int n = k + A;  // unknowns: k-1 weights, A etas, t
    std::vector<double> x(n);
    for (int i = 0; i < k - 1; ++i) x[i] = w[supp[i]];
    for (int j = 0; j < A; ++j) x[k - 1 + j] = lp0.x[j];
    x[n - 1] = tt;

    bool newton_ok = false;
    auto eval = [&](const std::vector<double>& xx, std::vector<double>& out) {
      try {
        out = equilibrium_resid(spec, t, supp, act, xx);
        return true;
      } catch (const std::exception&) {
        return false;  // trial point left the PD cone
      }
    };
    auto norm2 = [](const std::vector<double>& v) {
      double s = 0;
      for (double e : v) s += e * e;
      return std::sqrt(s);
    };
    std::vector<double> r;
    if (!eval(x, r)) return false;
    for (int it = 0; it < 60; ++it) {
      double rn = norm2(r);
      if (rn < 1e-12) {
        newton_ok = true;
        break;
      }
      std::vector<std::vector<double>> J(n, std::vector<double>(n));
      for (int c2 = 0; c2 < n; ++c2) {
        double h = 1e-7 * std::max(1.0, std::abs(x[c2]));
        std::vector<double> xp = x;
        xp[c2] += h;
        std::vector<double> rp;
        if (!eval(xp, rp)) {
          xp[c2] = x[c2] - h;
          if (!eval(xp, rp)) return false;
          h = -h;
        }
        for (int r2 = 0; r2 < n; ++r2) J[r2][c2] = (rp[r2] - r[r2]) / h;
      }
      std::vector<double> dx, nr(n);
      for (int i = 0; i < n; ++i) nr[i] = -r[i];
      if (!gauss_solve(J, nr, dx)) return false;
      // near-collinear adjacent support points make J ill-conditioned and the
      // raw step huge; the solution is within ~bisection_tol in t and within
      // the weight flat ridge, so clamp hard before backtracking
      double scale = 1.0;
      if (std::abs(dx[n - 1]) > 1e-5) scale = std::min(scale, 1e-5 / std::abs(dx[n - 1]));
      for (int i = 0; i < n - 1; ++i)
        if (std::abs(dx[i]) > 0.25) scale = std::min(scale, 0.25 / std::abs(dx[i]));
      for (double& v : dx) v *= scale;
      double step = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        std::vector<double> xn = x;
        for (int i = 0; i < n; ++i) xn[i] += step * dx[i];
        std::vector<double> rnw;
        if (eval(xn, rnw) && norm2(rnw) < rn * (1.0 - 1e-4 * step)) {
          x = std::move(xn);
          r = std::move(rnw);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (!newton_ok && norm2(r) >= 1e-10) {
      // a stall usually means the support carries a spurious point whose
      // equilibrium equation is infeasible; retry without the lightest one
      if (!drop_lightest()) return false;
      continue;
    }

    // unpack and run the correction checks
    std::vector<double> ws(k);
    double sum = 0;
    for (int i = 0; i < k - 1; ++i) {
      ws[i] = x[i];
      sum += x[i];
    }
    ws[k - 1] = 1.0 - sum;
    std::vector<double> eta(A);
    for (int j = 0; j < A; ++j) eta[j] = x[k - 1 + j];
    double tn = x[n - 1];
    std::vector<double> wn = expand_w(supp, ws, M);
    if (std::abs(tn - t0) > 1e-3) {
      if (!drop_lightest()) return false;
      continue;
    }

    bool redo = false;
    std::vector<int> supp2;
    for (int i = 0; i < k; ++i) {
      if (ws[i] < 1e-10)
        redo = true;  // point left the support
      else
        supp2.push_back(supp[i]);
    }
    std::vector<int> act2;
    for (int j = 0; j < A; ++j) {
      if (eta[j] < -1e-12)
        redo = true;  // criterion leaves the active set
      else
        act2.push_back(act[j]);
    }
    if (!redo) {
      // dropped dependent equation must close, and the aggregated dispersion
      // must be nonpositive off support (a strict violator joins the support)
      Sym3 in2 = info_matrix(wn, t);
      double dep = 0;
      std::vector<double> agg(M, 0.0);
      for (int j = 0; j < A; ++j) {
        std::vector<double> d = dispersion_all(spec.criteria[act[j]].spec, wn, t);
        dep += eta[j] * d[supp[k - 1]];
        for (int u = 0; u < M; ++u) agg[u] += eta[j] * d[u];
      }
      if (std::abs(dep) > 1e-8) return false;
      int worst = -1;
      for (int u = 0; u < M; ++u) {
        bool in = std::find(supp.begin(), supp.end(), u) != supp.end();
        if (!in && agg[u] > 1e-7 && (worst < 0 || agg[u] > agg[worst])) worst = u;
      }
      bool slack_ok = true;
      for (int j = 0; j < K; ++j)
        if (maximin_phi(spec.criteria[j], in2) - h_fn(spec.criteria[j], tn) > 1e-9 &&
            std::find(act.begin(), act.end(), j) == act.end()) {
          slack_ok = false;
          act2.push_back(j);
        }
      if (worst >= 0) {
        supp2.push_back(worst);
        std::sort(supp2.begin(), supp2.end());
        redo = true;
      } else if (!slack_ok) {
        redo = true;  // active set regrows from the new slacks
      } else {
        w_io = std::move(wn);
        t_io = tn;
        return true;
      }
    }
    std::sort(act2.begin(), act2.end());
    if (!act2.empty()) act = std::move(act2);
    if (supp2.size() >= 2) supp = std::move(supp2);
    w = wn;
    for (double& v : w)
      if (v < 0) v = 0;
    renorm(w);
    tt = tn;
  }
  return false;
}

}  // namespace

MaximinSpec make_maximin_spec(const std::vector<CriterionSpec>& kinds, const GridTables& t,
                              const SolverConfig& cfg) {
  std::vector<AnchoredCriterion> anchors;
  for (const auto& k : kinds) {
    SolveReport r = k.kind == Crit::E ? solve_e_optimal(t, cfg) : solve_oad(k, t, cfg);
    if (!r.converged) throw anchor_unverified();
    anchors.emplace_back(k, r.objective);
  }
  return MaximinSpec(std::move(anchors));
}

MaximinSolution solve_maximin(const MaximinSpec& spec, const GridTables& t,
                              const SolverConfig& cfg) {
  cfg.validate();
  auto start = std::chrono::steady_clock::now();
  const int M = t.M;
  long iters = 0;

  // Re-derive each single-objective optimum: verifies the supplied anchors
  // and seeds the initial support.
  std::vector<int> supp0{0, (M + 1) / 2 - 1, M - 1};
  for (const auto& a : spec.criteria) {
    SolveReport r = a.spec.kind == Crit::E ? solve_e_optimal(t, cfg) : solve_oad(a.spec, t, cfg);
    iters += r.iterations;
    if (!r.converged) throw anchor_unverified();
    if (std::abs(r.objective - a.anchor) > 1e-2 * std::abs(r.objective))
      throw anchor_unverified();
    for (auto& [x, wv] : support(r.design, cfg.prune_tol)) supp0.push_back(x - 1);
    if (spec.criteria.size() == 1) {
      MaximinSolution sol{r.design, 1.0, 1.0, {efficiency(a, r.design, t)}, iters, 0.0, true};
      sol.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return sol;
    }
  }
  std::sort(supp0.begin(), supp0.end());
  supp0.erase(std::unique(supp0.begin(), supp0.end()), supp0.end());

  // Bisection on t: feasibility of {w : Phi_j(w) <= h_j(t) for all j} is
  // monotone since every h_j increases in t.
  const double feas_tol = 1e-9;
  double lo = 1.0, hi = 2.0;
  std::vector<double> w_best, w_try;
  bool found = false;
  for (; hi <= 64.0; hi *= 2.0) {
    if (min_F(spec, t, hi, supp0, w_try, iters, feas_tol) <= feas_tol) {
      w_best = w_try;
      found = true;
      break;
    }
  }
  if (!found) throw invalid_input("maximin feasibility not reached for t <= 64");
  while (hi - lo > cfg.bisection_tol) {
    double mid = 0.5 * (lo + hi);
    if (min_F(spec, t, mid, supp0, w_try, iters, feas_tol) <= feas_tol) {
      hi = mid;
      w_best = w_try;
    } else {
      lo = mid;
    }
  }

  equilibrium_polish(spec, t, w_best, hi);
  renorm(w_best);

  MaximinSolution sol{Design(M, w_best), hi, 1.0 / hi, {}, iters, 0.0, false};
  for (const auto& a : spec.criteria) sol.efficiencies.push_back(efficiency(a, sol.design, t));
  sol.converged = F_exact(spec, t, w_best, hi) <= 1e-8;
  sol.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

std::optional<CertificateWeights> verify_maximin(const MaximinSolution& sol,
                                                 const MaximinSpec& spec, const GridTables& t,
                                                 double delta1, double delta2) {
  if (!(delta1 > 0) || !(delta2 > 0)) throw invalid_input("slack tolerances must be positive");
  const int K = static_cast<int>(spec.criteria.size());
  const int M = t.M;
  Sym3 info = info_matrix(sol.design, t);
  std::vector<double> g(K), slack(K);
  std::vector<std::vector<double>> disp(K);
  for (int j = 0; j < K; ++j) {
    const auto& a = spec.criteria[j];
    g[j] = g_fn(a, sol.t_star);
    slack[j] = maximin_phi(a, info) - h_fn(a, sol.t_star);
    disp[j] = dispersion_all(a.spec, sol.design.w, t);
  }
  std::vector<std::vector<double>> A_ub;
  std::vector<double> b_ub;
  for (int u = 0; u < M; ++u) {
    std::vector<double> row(K);
    for (int j = 0; j < K; ++j) row[j] = disp[j][u];
    A_ub.push_back(std::move(row));
    b_ub.push_back(delta2);
  }
  for (int j = 0; j < K; ++j) {
    std::vector<double> r1(K, 0.0), r2(K, 0.0);
    r1[j] = slack[j];
    r2[j] = -slack[j];
    A_ub.push_back(std::move(r1));
    b_ub.push_back(delta1);
    A_ub.push_back(std::move(r2));
    b_ub.push_back(delta1);
  }
  LpResult lp = solve_lp(std::vector<double>(K, 1.0), A_ub, b_ub, {g}, {1.0});
  if (!lp.feasible) return std::nullopt;
  return CertificateWeights{lp.x, delta1, delta2};
}

}  // namespace gtd
