#include "solvers.hpp"

#include <chrono>
#include <cmath>
#include <functional>

namespace gtd {
namespace {

void renormalize(std::vector<double>& w) {
  double s = 0;
  for (double& v : w) {
    if (v < 0) v = 0;
    s += v;
  }
  for (double& v : w) v /= s;
}

}  // namespace

namespace detail {

std::vector<double> damped_solve(std::vector<std::vector<double>> H, std::vector<double> g) {
  const int n = static_cast<int>(g.size());
  double mu = 0.0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    std::vector<std::vector<double>> a = H;
    for (int i = 0; i < n; ++i) a[i][i] += mu;
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = -g[i];
    bool ok = true;
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < n && ok; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (std::abs(a[piv][col]) < 1e-300) {
        ok = false;
        break;
      }
      std::swap(a[col], a[piv]);
      std::swap(b[col], b[piv]);
      for (int r = col + 1; r < n; ++r) {
        double m = a[r][col] / a[col][col];
        if (m == 0) continue;
        for (int c = col; c < n; ++c) a[r][c] -= m * a[col][c];
        b[r] -= m * b[col];
      }
    }
    if (ok) {
      std::vector<double> z(n);
      for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int c = i + 1; c < n; ++c) s -= a[i][c] * z[c];
        z[i] = s / a[i][i];
        if (!std::isfinite(z[i])) {
          ok = false;
          break;
        }
      }
      if (ok) return z;
    }
    mu = mu == 0 ? 1e-12 : mu * 10;
  }
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = -g[i];
  return z;
}

std::vector<double> initial_design(int M) {
  std::vector<double> w(M, 1e-8);
  w[0] += 1.0 / 3.0;
  w[(M + 1) / 2 - 1] += 1.0 / 3.0;
  w[M - 1] += 1.0 / 3.0;
  double s = 0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
  return w;
}

std::vector<double> expand(const RestrictedState& st, int M) {
  std::vector<double> w(M, 0.0);
  for (std::size_t i = 0; i < st.supp.size(); ++i) w[st.supp[i]] = st.w[i];
  return w;
}

namespace {

struct GradFn {
  // value + full-grid gradient at w
  std::function<double(const std::vector<double>&, std::vector<double>&)> eval;
  // cheap value from the information matrix (affine in the line-search step)
  std::function<double(const Sym3&)> val;
};

/// Frank–Wolfe with away steps over the simplex; the linear subproblem is a
/// grid argmin, so the FW gap doubles as the equivalence-theorem certificate.
long fw_away(const GradFn& fn, const GridTables& t, std::vector<double>& w, double tol,
             long max_iters) {
  const int M = t.M;
  std::vector<double> g(M);
  Sym3 Iw;
  long it = 0;
  for (; it < max_iters; ++it) {
    fn.eval(w, g);
    double gw = 0;
    for (int i = 0; i < M; ++i) gw += g[i] * w[i];
    int s = 0, a = -1;
    for (int i = 1; i < M; ++i)
      if (g[i] < g[s]) s = i;
    for (int i = 0; i < M; ++i)
      if (w[i] > 1e-12 && (a < 0 || g[i] > g[a])) a = i;
    double gap = gw - g[s];
    if (gap < tol) break;
    Iw = info_matrix(w, t);
    bool fw_step = (gw - g[s]) >= (g[a] - gw);
    Sym3 Id = fw_step ? t.atom[s] - Iw : Iw - t.atom[a];
    double amax = fw_step ? 1.0 : (w[a] < 1.0 ? w[a] / (1.0 - w[a]) : 1e9);
    double lo = 0.0, hi = amax;
    for (int ls = 0; ls < 40; ++ls) {
      double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
      if (fn.val(Iw + Id * m1) < fn.val(Iw + Id * m2))
        hi = m2;
      else
        lo = m1;
    }
    double al = 0.5 * (lo + hi);
    if (fw_step) {
      for (double& v : w) v *= 1.0 - al;
      w[s] += al;
    } else {
      for (double& v : w) v *= 1.0 + al;
      w[a] -= al;
    }
    renormalize(w);
  }
  return it;
}

}  // namespace

void newton_restricted(const CriterionSpec& spec, const GridTables& t, RestrictedState& st,
                       int max_newton) {
  const int M = t.M;
  for (int it = 0; it < max_newton; ++it) {
    int k = static_cast<int>(st.supp.size());
    std::vector<double> wf = expand(st, M);
    CritDerivatives d = crit_derivatives(spec, wf, t, st.supp, true);
    ++st.iters;
    if (d.singular) return;
    // reduce onto the sum-zero subspace with basis e_i - e_k
    std::vector<double> gr(k - 1);
    std::vector<std::vector<double>> Hr(k - 1, std::vector<double>(k - 1));
    for (int i = 0; i < k - 1; ++i) {
      gr[i] = d.grad[i] - d.grad[k - 1];
      for (int j = 0; j < k - 1; ++j)
        Hr[i][j] = d.hess[i][j] - d.hess[i][k - 1] - d.hess[k - 1][j] + d.hess[k - 1][k - 1];
    }
    std::vector<double> z = damped_solve(std::move(Hr), std::move(gr));
    std::vector<double> dz(k, 0.0);
    double zs = 0;
    for (int i = 0; i < k - 1; ++i) {
      dz[i] = z[i];
      zs += z[i];
    }
    dz[k - 1] = -zs;
    // cap the step exactly at the simplex boundary
    double step = 1.0;
    for (int i = 0; i < k; ++i)
      if (dz[i] < -1e-300) step = std::min(step, -st.w[i] / dz[i]);
    double f0 = d.value;
    std::vector<double> wn(k);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      double mn = 0;
      for (int i = 0; i < k; ++i) {
        wn[i] = st.w[i] + step * dz[i];
        mn = std::min(mn, wn[i]);
      }
      if (mn >= -1e-15) {
        RestrictedState trial{st.supp, wn, 0};
        for (double& v : trial.w)
          if (v < 0) v = 0;
        std::vector<double> wt = expand(trial, M);
        renormalize(wt);
        if (crit_surrogate(spec, info_matrix(wt, t)) <= f0 + 1e-14) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) return;
    double nrm = 0;
    for (int i = 0; i < k; ++i) {
      st.w[i] = std::max(0.0, st.w[i] + step * dz[i]);
      nrm += std::abs(dz[i]);
    }
    renormalize(st.w);
    // drop points squeezed out at the boundary (keep a basis-sized core)
    double wmin = *std::min_element(st.w.begin(), st.w.end());
    if (wmin < 1e-10 && k > 3) {
      std::vector<int> supp;
      std::vector<double> wk;
      for (int i = 0; i < k; ++i)
        if (st.w[i] > 1e-10) {
          supp.push_back(st.supp[i]);
          wk.push_back(st.w[i]);
        }
      st.supp = std::move(supp);
      st.w = std::move(wk);
      renormalize(st.w);
      continue;
    }
    if (nrm * step < 1e-14) return;
  }
}

namespace {

SolveReport finish_report(const CriterionSpec& spec, const GridTables& t,
                          std::vector<double> w, long iters, double delta,
                          std::vector<double> trace,
                          std::chrono::steady_clock::time_point start) {
  auto [u, dmax] = dispersion_max(spec, w, t);
  double obj = objective(spec, info_matrix(w, t));
  trace.push_back(obj);
  SolveReport rep{Design(t.M, std::move(w)), obj, u, dmax, iters, 0.0, dmax <= delta,
                  std::move(trace)};
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SolveReport polish_and_certify(const CriterionSpec& spec, const GridTables& t,
                               std::vector<double> w, long fw_iters, const SolverConfig& cfg,
                               std::vector<double> trace,
                               std::chrono::steady_clock::time_point start) {
  const int M = t.M;
  detail::RestrictedState st;
  for (int i = 0; i < M; ++i)
    if (w[i] > 1e-5) {
      st.supp.push_back(i);
      st.w.push_back(w[i]);
    }
  renormalize(st.w);
  for (int ex = 0; ex < 40; ++ex) {
    detail::newton_restricted(spec, t, st, 100);
    std::vector<double> wf = detail::expand(st, M);
    trace.push_back(objective(spec, info_matrix(wf, t)));
    auto [u, dmax] = dispersion_max(spec, wf, t);
    int ui = u - 1;
    bool in_supp = false;
    for (int s : st.supp) in_supp |= (s == ui);
    if (dmax <= cfg.certificate_tol * 0.1 || in_supp) break;
    st.supp.push_back(ui);
    st.w.push_back(1e-6);
    std::sort(st.supp.begin(), st.supp.end());
    std::vector<double> wseed(st.supp.size());
    for (std::size_t i = 0; i < st.supp.size(); ++i)
      wseed[i] = wf[st.supp[i]] > 0 ? wf[st.supp[i]] : 1e-6;
    st.w = std::move(wseed);
    renormalize(st.w);
  }
  std::vector<double> wf = detail::expand(st, M);
  return finish_report(spec, t, std::move(wf), fw_iters + st.iters, cfg.certificate_tol,
                       std::move(trace), start);
}

}  // namespace
}  // namespace detail

SolveReport solve_oad(const CriterionSpec& spec, const GridTables& t, const SolverConfig& cfg) {
  cfg.validate();
  if (spec.kind == Crit::E) throw invalid_input("use solve_e_optimal for the E-criterion");
  auto start = std::chrono::steady_clock::now();
  std::vector<double> w = detail::initial_design(t.M);
  std::vector<double> trace{objective(spec, info_matrix(w, t))};

  detail::GradFn fn;
  fn.val = [&](const Sym3& info) { return crit_surrogate(spec, info); };
  std::vector<int> all(t.M);
  for (int i = 0; i < t.M; ++i) all[i] = i;
  fn.eval = [&](const std::vector<double>& wv, std::vector<double>& g) {
    CritDerivatives d = crit_derivatives(spec, wv, t, all, false);
    g = d.grad;
    return d.value;
  };
  long fw_iters = detail::fw_away(fn, t, w, 1e-3, std::min<long>(cfg.max_iters, 20000));
  return detail::polish_and_certify(spec, t, std::move(w), fw_iters, cfg, std::move(trace),
                                    start);
}

SolveReport solve_e_optimal(const GridTables& t, const SolverConfig& cfg) {
  cfg.validate();
  auto start = std::chrono::steady_clock::now();
  std::vector<double> w = detail::initial_design(t.M);
  CriterionSpec spec = CriterionSpec::E();
  std::vector<double> trace{objective(spec, info_matrix(w, t))};

  // Global phase: log-sum-exp smoothing of -lambda_min, annealed x0.5.
  long fw_iters = 0;
  for (double mu = 1e-2; mu >= 1e-8; mu *= 0.5) {
    detail::GradFn fn;
    auto softmin_neg = [mu](const Sym3& info) {
      auto ev = eigenvalues_sym3(info);
      double s = 0;
      for (double l : ev) s += std::exp(-(l - ev[0]) / mu);
      return -(ev[0] - mu * std::log(s));
    };
    fn.val = softmin_neg;
    fn.eval = [&, mu](const std::vector<double>& wv, std::vector<double>& g) {
      Sym3 info = info_matrix(wv, t);
      EigenSym3 e = eigen_sym3(info);
      double sig[3], s = 0;
      for (int k = 0; k < 3; ++k) {
        sig[k] = std::exp(-(e.values[k] - e.values[0]) / mu);
        s += sig[k];
      }
      for (int k = 0; k < 3; ++k) sig[k] /= s;
      g.assign(t.M, 0.0);
      for (int u = 0; u < t.M; ++u)
        for (int k = 0; k < 3; ++k) {
          double fv = t.f[u].dot(e.vectors[k]);
          g[u] -= sig[k] * t.lam[u] * fv * fv;
        }
      return softmin_neg(info);
    };
    fw_iters += detail::fw_away(fn, t, w, std::max(1e-4, 0.1 * mu),
                                std::min<long>(cfg.max_iters, 2000));
  }
  return detail::polish_and_certify(spec, t, std::move(w), fw_iters, cfg, std::move(trace),
                                    start);
}

VerifyResult verify_optimality(const CriterionSpec& spec, const Design& d, const GridTables& t,
                               double delta) {
  if (!(delta > 0)) throw invalid_input("delta must be positive");
  auto [u, dmax] = dispersion_max(spec, d, t);
  return {dmax <= delta, u, dmax};
}

// ---------------------------------------------------------------------------
// Robust E: maximize g(w) = lambda_min(I(w)) - rho sqrt(M) ||w||_2 (concave).
// ---------------------------------------------------------------------------

namespace {

void simplex_project(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0, theta = 0;
  for (int i = 0; i < static_cast<int>(u.size()); ++i) {
    css += u[i];
    if (u[i] > (css - 1.0) / (i + 1)) theta = (css - 1.0) / (i + 1);
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

double robust_value(const std::vector<double>& w, const GridTables& t, double pen) {
  double nw = 0;
  for (double v : w) nw += v * v;
  return lambda_min(info_matrix(w, t)) - pen * std::sqrt(nw);
}

}  // namespace

VerifyResult verify_robust(const RobustSpec& robust, const Design& d, const GridTables& t,
                           double delta) {
  if (!(delta > 0)) throw invalid_input("delta must be positive");
  if (robust.rho == 0.0) return verify_optimality(CriterionSpec::E(), d, t, delta);
  const double pen = robust.rho * std::sqrt(static_cast<double>(t.M));
  Sym3 info = info_matrix(d.w, t);
  EigenSym3 e = eigen_sym3(info);
  double nw = 0;
  for (double v : d.w) nw += v * v;
  nw = std::sqrt(nw);
  // supergradient of g(w); optimality iff max reduced gradient <= 0
  std::vector<double> g(t.M);
  double gdotw = 0;
  for (int u = 0; u < t.M; ++u) {
    double fv = t.f[u].dot(e.vectors[0]);
    g[u] = t.lam[u] * fv * fv - (nw > 0 ? pen * d.w[u] / nw : 0.0);
    gdotw += g[u] * d.w[u];
  }
  int best = 0;
  for (int u = 1; u < t.M; ++u)
    if (g[u] > g[best]) best = u;
  double red = g[best] - gdotw;
  return {red <= delta, best + 1, red};
}

SolveReport solve_robust_e(const RobustSpec& robust, const GridTables& t,
                           const SolverConfig& cfg) {
  cfg.validate();
  if (robust.rho == 0.0) {
    // reduces to the plain E-problem; report the robust value lambda_min(I)
    SolveReport r = solve_e_optimal(t, cfg);
    r.objective = -r.objective;
    return r;
  }
  auto start = std::chrono::steady_clock::now();
  const int M = t.M;
  const double pen = robust.rho * std::sqrt(static_cast<double>(M));
  CriterionSpec espec = CriterionSpec::E();

  SolveReport e0 = solve_e_optimal(t, cfg);
  std::vector<double> w = e0.design.w;
  std::vector<double> trace{robust_value(w, t, pen)};

  auto supergrad = [&](const std::vector<double>& wv, std::vector<double>& g) {
    Sym3 info = info_matrix(wv, t);
    EigenSym3 e = eigen_sym3(info);
    double nw = 0;
    for (double v : wv) nw += v * v;
    nw = std::sqrt(nw);
    g.resize(M);
    for (int u = 0; u < M; ++u) {
      double fv = t.f[u].dot(e.vectors[0]);
      g[u] = t.lam[u] * fv * fv - (nw > 0 ? pen * wv[u] / nw : 0.0);
    }
    return e.values[0] - pen * nw;
  };

  // Projected supergradient ascent with a diminishing step.
  std::vector<double> g, best_w = w;
  double best = -kInf;
  long iters = e0.iterations;
  for (int it = 0; it < 4000 && iters < cfg.max_iters; ++it, ++iters) {
    double val = supergrad(w, g);
    if (val > best) {
      best = val;
      best_w = w;
    }
    double step = 0.5 / std::pow(1.0 + it, 0.7);
    for (int i = 0; i < M; ++i) w[i] += step * g[i];
    simplex_project(w);
  }
  w = best_w;
  trace.push_back(robust_value(w, t, pen));

  // Newton polish on the support of the penalized concave objective.
  detail::RestrictedState st;
  for (int i = 0; i < M; ++i)
    if (w[i] > 1e-5) {
      st.supp.push_back(i);
      st.w.push_back(w[i]);
    }
  double s0 = 0;
  for (double v : st.w) s0 += v;
  for (double& v : st.w) v /= s0;

  double red_max = kInf;
  int red_arg = 0;
  for (int ex = 0; ex < 40 && iters < cfg.max_iters; ++ex) {
    for (int nit = 0; nit < 80 && iters < cfg.max_iters; ++nit, ++iters) {
      int k = static_cast<int>(st.supp.size());
      std::vector<double> wf = detail::expand(st, M);
      CritDerivatives dE = crit_derivatives(espec, wf, t, st.supp, true);
      double nw = 0;
      for (double v : st.w) nw += v * v;
      nw = std::sqrt(nw);
      // minimize -g(w) = -lambda_min + pen ||w||; add the norm term's
      // gradient/Hessian to the exact eigenvalue bundle
      std::vector<double> gv(k);
      std::vector<std::vector<double>> Hv(k, std::vector<double>(k));
      for (int i = 0; i < k; ++i) {
        gv[i] = dE.grad[i] + pen * st.w[i] / nw;
        for (int j = 0; j < k; ++j)
          Hv[i][j] = dE.hess[i][j] + pen * ((i == j ? 1.0 : 0.0) / nw -
                                            st.w[i] * st.w[j] / (nw * nw * nw));
      }
      std::vector<double> gr(k - 1);
      std::vector<std::vector<double>> Hr(k - 1, std::vector<double>(k - 1));
      for (int i = 0; i < k - 1; ++i) {
        gr[i] = gv[i] - gv[k - 1];
        for (int j = 0; j < k - 1; ++j)
          Hr[i][j] = Hv[i][j] - Hv[i][k - 1] - Hv[k - 1][j] + Hv[k - 1][k - 1];
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
      double f0 = -robust_value(wf, t, pen);
      bool ok = false;
      std::vector<double> wn(k);
      for (int bt = 0; bt < 50; ++bt) {
        double sum = 0;
        for (int i = 0; i < k; ++i) {
          wn[i] = std::max(0.0, st.w[i] + step * dz[i]);
          sum += wn[i];
        }
        std::vector<double> wfn(M, 0.0);
        for (int i = 0; i < k; ++i) wfn[st.supp[i]] = wn[i] / sum;
        if (-robust_value(wfn, t, pen) < f0) {
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) break;
      double nrm = 0;
      for (int i = 0; i < k; ++i) {
        nrm += std::abs(dz[i]);
        st.w[i] = std::max(0.0, st.w[i] + step * dz[i]);
      }
      renormalize(st.w);
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
        renormalize(st.w);
        continue;
      }
      if (nrm * step < 1e-13) break;
    }
    std::vector<double> wf = detail::expand(st, M);
    trace.push_back(robust_value(wf, t, pen));
    double gw = supergrad(wf, g);
    (void)gw;
    double gdotw = 0;
    for (int i = 0; i < M; ++i) gdotw += g[i] * wf[i];
    red_max = -kInf;
    for (int u = 0; u < M; ++u) {
      bool in_supp = false;
      for (int s : st.supp) in_supp |= (s == u);
      if (in_supp) continue;
      double red = g[u] - gdotw;
      if (red > red_max) {
        red_max = red;
        red_arg = u;
      }
    }
    if (red_max <= 1e-9) break;
    st.supp.push_back(red_arg);
    st.w.push_back(1e-6);
    std::sort(st.supp.begin(), st.supp.end());
    std::vector<double> wseed(st.supp.size());
    for (std::size_t i = 0; i < st.supp.size(); ++i)
      wseed[i] = wf[st.supp[i]] > 0 ? wf[st.supp[i]] : 1e-6;
    st.w = std::move(wseed);
    renormalize(st.w);
  }

  std::vector<double> wf = detail::expand(st, M);
  double obj = robust_value(wf, t, pen);
  trace.push_back(obj);
  SolveReport rep{Design(M, std::move(wf)), obj, red_arg + 1,
                  red_max, iters + st.iters, 0.0,
                  red_max <= cfg.certificate_tol, std::move(trace)};
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace gtd
