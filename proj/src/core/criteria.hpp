#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace gtd {

enum class Crit { D, A, Ds, C, E };

inline const char* crit_name(Crit k) {
  switch (k) {
    case Crit::D: return "D";
    case Crit::A: return "A";
    case Crit::Ds: return "Ds";
    case Crit::C: return "c";
    case Crit::E: return "E";
  }
  return "?";
}

inline std::optional<Crit> crit_from_name(const std::string& s) {
  if (s == "D") return Crit::D;
  if (s == "A") return Crit::A;
  if (s == "Ds") return Crit::Ds;
  if (s == "c" || s == "C") return Crit::C;
  if (s == "E") return Crit::E;
  return std::nullopt;
}

struct CriterionSpec {
  Crit kind;
  Vec3 direction{};  // used by C; Ds pins (1,0,0)

  static CriterionSpec D() { return {Crit::D}; }
  static CriterionSpec A() { return {Crit::A}; }
  static CriterionSpec Ds() { return {Crit::Ds, {1, 0, 0}}; }
  static CriterionSpec C(const Vec3& c) {
    if (c.norm() == 0) throw invalid_input("c-criterion direction must be nonzero");
    return {Crit::C, c};
  }
  static CriterionSpec E() { return {Crit::E}; }

  Vec3 cvec() const { return kind == Crit::Ds ? Vec3{1, 0, 0} : direction; }
};

struct AnchoredCriterion {
  CriterionSpec spec;
  double anchor;  // optimal objective value for the instance

  AnchoredCriterion(CriterionSpec s, double a) : spec(s), anchor(a) {
    if (!std::isfinite(a)) throw invalid_input("criterion anchor must be finite");
    if (s.kind == Crit::E ? a >= 0 : a <= 0)
      throw invalid_input("anchor sign inconsistent with criterion kind");
  }
};

constexpr double kSingularCond = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool info_singular(const Sym3& info) {
  auto ev = eigenvalues_sym3(info);
  return !(ev[0] > 0.0) || ev[2] / ev[0] > kSingularCond;
}

/// Objective value per Eq.-style definitions: D -> det(I^-1), A -> tr(I^-1),
/// Ds/C -> c'I^-1 c, E -> -lambda_min(I). Singular I yields +inf for kinds
/// that need the inverse.
inline double objective(const CriterionSpec& spec, const Sym3& info) {
  if (spec.kind == Crit::E) return -lambda_min(info);
  if (info_singular(info)) return kInf;
  Sym3 inv = info.inverse();
  switch (spec.kind) {
    case Crit::D: return 1.0 / info.det();
    case Crit::A: return inv.trace();
    default: return inv.quad(spec.cvec());
  }
}

inline double objective(const CriterionSpec& spec, const Design& d, const GridTables& t) {
  return objective(spec, info_matrix(d, t));
}

inline double efficiency_from_values(Crit kind, double anchor, double value) {
  if (value == kInf) return 0.0;
  if (kind == Crit::D) return std::cbrt(anchor / value);
  if (kind == Crit::E) return value / anchor;
  return anchor / value;
}

inline double efficiency(const AnchoredCriterion& a, const Design& d, const GridTables& t) {
  return efficiency_from_values(a.spec.kind, a.anchor, objective(a.spec, d, t));
}

inline std::vector<double> efficiency_table(const Design& d, const GridTables& t,
                                            const std::vector<AnchoredCriterion>& anchors) {
  std::vector<double> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) out.push_back(efficiency(a, d, t));
  return out;
}

// ---------------------------------------------------------------------------
// Dispersion (equivalence-theorem) functions.
// ---------------------------------------------------------------------------

/// Trace-1 PSD matrix acting on the lambda_min eigenspace, reported in the
/// ambient 3x3 coordinates. For a simple smallest eigenvalue this is v v^T.
struct EMultiplierB {
  Sym3 b3;  // Q B Q^T
  int multiplicity = 1;
};

constexpr double kEigenGapRel = 1e-7;

inline int lambda_min_multiplicity(const EigenSym3& e) {
  double scale = std::max({std::abs(e.values[0]), std::abs(e.values[2]), 1e-300});
  int r = 1;
  if ((e.values[1] - e.values[0]) <= kEigenGapRel * scale) {
    r = 2;
    if ((e.values[2] - e.values[0]) <= kEigenGapRel * scale) r = 3;
  }
  return r;
}

/// Best-response B: over trace-1 PSD matrices on the lambda_min eigenspace,
/// minimize max_u d_E(u, w). r*=1 forces B=1; r*=2 scans the trace-1 PSD
/// disc on a fixed grid (resolution 1e-3); r*=3 scans its three 2d faces.
EMultiplierB e_multiplier(const Sym3& info, const GridTables& t);

inline std::vector<double> dispersion_all(const CriterionSpec& spec, const std::vector<double>& w,
                                          const GridTables& t) {
  Sym3 info = info_matrix(w, t);
  std::vector<double> d(t.M);
  if (spec.kind == Crit::E) {
    auto mult = e_multiplier(info, t);
    double lmin = lambda_min(info);
    for (int i = 0; i < t.M; ++i) d[i] = t.lam[i] * mult.b3.quad(t.f[i]) - lmin;
    return d;
  }
  if (info_singular(info)) throw singular_information();
  Sym3 inv = info.inverse();
  switch (spec.kind) {
    case Crit::D:
      for (int i = 0; i < t.M; ++i) d[i] = t.lam[i] * inv.quad(t.f[i]) - 3.0;
      break;
    case Crit::A: {
      double tr = inv.trace();
      for (int i = 0; i < t.M; ++i) {
        Vec3 jf = inv.mul(t.f[i]);
        d[i] = t.lam[i] * jf.dot(jf) - tr;
      }
      break;
    }
    default: {
      Vec3 jc = inv.mul(spec.cvec());
      double cc = spec.cvec().dot(jc);
      for (int i = 0; i < t.M; ++i) {
        double s = t.f[i].dot(jc);
        d[i] = t.lam[i] * s * s - cc;
      }
      break;
    }
  }
  return d;
}

inline double dispersion(const CriterionSpec& spec, int u, const Design& d, const GridTables& t) {
  return dispersion_all(spec, d.w, t)[u - 1];
}

/// Scan all u in {1..M}; ties broken by smallest u.
inline std::pair<int, double> dispersion_max(const CriterionSpec& spec,
                                             const std::vector<double>& w, const GridTables& t) {
  auto d = dispersion_all(spec, w, t);
  int best = 0;
  for (int i = 1; i < t.M; ++i)
    if (d[i] > d[best]) best = i;
  return {best + 1, d[best]};
}

inline std::pair<int, double> dispersion_max(const CriterionSpec& spec, const Design& d,
                                             const GridTables& t) {
  return dispersion_max(spec, d.w, t);
}

// ---------------------------------------------------------------------------
// Derivative bundle on a restricted support; shared by the solvers. Values
// are the convex surrogates actually minimized: D uses -logdet(I) (same
// minimizer as det(I^-1)), E uses -lambda_min(I); A/Ds/C are the objectives
// themselves.
// ---------------------------------------------------------------------------

struct CritDerivatives {
  double value = kInf;
  std::vector<double> grad;              // dPhi/dw_i for i in idx
  std::vector<std::vector<double>> hess;  // optional
  bool singular = false;
};

CritDerivatives crit_derivatives(const CriterionSpec& spec, const std::vector<double>& w,
                                 const GridTables& t, const std::vector<int>& idx,
                                 bool need_hess);

/// Surrogate value only (cheap path for line searches).
double crit_surrogate(const CriterionSpec& spec, const Sym3& info);

}  // namespace gtd
