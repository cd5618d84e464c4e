#include "criteria.hpp"

namespace gtd {

double crit_surrogate(const CriterionSpec& spec, const Sym3& info) {
  if (spec.kind == Crit::E) return -lambda_min(info);
  if (info_singular(info)) return kInf;
  if (spec.kind == Crit::D) return -std::log(info.det());
  Sym3 inv = info.inverse();
  return spec.kind == Crit::A ? inv.trace() : inv.quad(spec.cvec());
}

CritDerivatives crit_derivatives(const CriterionSpec& spec, const std::vector<double>& w,
                                 const GridTables& t, const std::vector<int>& idx,
                                 bool need_hess) {
  const int k = static_cast<int>(idx.size());
  CritDerivatives out;
  out.grad.assign(k, 0.0);
  if (need_hess) out.hess.assign(k, std::vector<double>(k, 0.0));

  Sym3 info = info_matrix(w, t);

  if (spec.kind == Crit::E) {
    EigenSym3 e = eigen_sym3(info);
    const Vec3& v = e.vectors[0];
    out.value = -e.values[0];
    std::vector<double> fv(k);
    for (int a = 0; a < k; ++a) {
      fv[a] = t.f[idx[a]].dot(v);
      out.grad[a] = -t.lam[idx[a]] * fv[a] * fv[a];
    }
    if (need_hess) {
      // Hessian of -lambda_min via first-order eigenvector perturbation;
      // valid while the smallest eigenvalue stays simple.
      for (int m = 1; m < 3; ++m) {
        double gap = std::max(e.values[m] - e.values[0], 1e-300);
        std::vector<double> s(k);
        for (int a = 0; a < k; ++a)
          s[a] = t.lam[idx[a]] * fv[a] * t.f[idx[a]].dot(e.vectors[m]);
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) out.hess[a][b] += 2.0 * s[a] * s[b] / gap;
      }
    }
    return out;
  }

  if (info_singular(info)) {
    out.singular = true;
    return out;
  }
  Sym3 J = info.inverse();
  std::vector<Vec3> Jf(k);
  for (int a = 0; a < k; ++a) Jf[a] = J.mul(t.f[idx[a]]);

  auto li = [&](int a) { return t.lam[idx[a]]; };
  auto fQf = [&](int a, int b) { return t.f[idx[a]].dot(Jf[b]); };

  switch (spec.kind) {
    case Crit::D: {
      out.value = -std::log(info.det());
      for (int a = 0; a < k; ++a) out.grad[a] = -li(a) * fQf(a, a);
      if (need_hess)
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) {
            double q = fQf(a, b);
            out.hess[a][b] = li(a) * li(b) * q * q;
          }
      break;
    }
    case Crit::A: {
      out.value = J.trace();
      for (int a = 0; a < k; ++a) out.grad[a] = -li(a) * Jf[a].dot(Jf[a]);
      if (need_hess)
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b)
            out.hess[a][b] = 2.0 * li(a) * li(b) * fQf(a, b) * Jf[a].dot(Jf[b]);
      break;
    }
    default: {  // Ds / C
      Vec3 c = spec.cvec();
      Vec3 Jc = J.mul(c);
      out.value = c.dot(Jc);
      std::vector<double> s(k);
      for (int a = 0; a < k; ++a) {
        s[a] = t.f[idx[a]].dot(Jc);
        out.grad[a] = -li(a) * s[a] * s[a];
      }
      if (need_hess)
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b)
            out.hess[a][b] = 2.0 * li(a) * li(b) * s[a] * s[b] * fQf(a, b);
      break;
    }
  }
  return out;
}

namespace {

/// max_u lam_u (a_u t + b_u s + base_u) for the 2d-face parameterization
/// B = t u_i u_i' + (1-t) u_j u_j' + s (u_i u_j' + u_j u_i'), |s| <= sqrt(t(1-t)).
double face_scan(const GridTables& t, const Vec3& ui, const Vec3& uj, double& best_t,
                 double& best_s) {
  const int M = t.M;
  std::vector<double> gi(M), gj(M);
  for (int u = 0; u < M; ++u) {
    gi[u] = t.f[u].dot(ui);
    gj[u] = t.f[u].dot(uj);
  }
  double best = kInf;
  const int nt = 1000;
  for (int it = 0; it <= nt; ++it) {
    double tt = static_cast<double>(it) / nt;
    double smax = std::sqrt(tt * (1.0 - tt));
    int ns = std::max(1, static_cast<int>(std::floor(smax / 1e-3)));
    for (int is = -ns; is <= ns; ++is) {
      double ss = smax * is / ns;
      double mx = -kInf;
      for (int u = 0; u < M; ++u) {
        double q = tt * gi[u] * gi[u] + (1.0 - tt) * gj[u] * gj[u] + 2.0 * ss * gi[u] * gj[u];
        mx = std::max(mx, t.lam[u] * q);
      }
      if (mx < best) {
        best = mx;
        best_t = tt;
        best_s = ss;
      }
    }
  }
  return best;
}

Sym3 face_b3(const Vec3& ui, const Vec3& uj, double tt, double ss) {
  Sym3 b = Sym3::outer(ui, tt) + Sym3::outer(uj, 1.0 - tt);
  // (ui+uj)(ui+uj)' - (ui-uj)(ui-uj)' = 2 (ui uj' + uj ui')
  Sym3 cross = (Sym3::outer(ui + uj) - Sym3::outer(ui - uj)) * (ss / 2.0);
  return b + cross;
}

}  // namespace

EMultiplierB e_multiplier(const Sym3& info, const GridTables& t) {
  EigenSym3 e = eigen_sym3(info);
  EMultiplierB out;
  out.multiplicity = lambda_min_multiplicity(e);
  if (out.multiplicity == 1) {
    out.b3 = Sym3::outer(e.vectors[0]);
    return out;
  }
  // Degenerate smallest eigenvalue: pick B minimizing the dispersion maximum,
  // scanning each 2d face of the eigenspace's trace-1 PSD set.
  int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  int npairs = out.multiplicity == 2 ? 1 : 3;
  double best = kInf;
  for (int p = 0; p < npairs; ++p) {
    double tt, ss;
    double v = face_scan(t, e.vectors[pairs[p][0]], e.vectors[pairs[p][1]], tt, ss);
    if (v < best) {
      best = v;
      out.b3 = face_b3(e.vectors[pairs[p][0]], e.vectors[pairs[p][1]], tt, ss);
    }
  }
  return out;
}

}  // namespace gtd
