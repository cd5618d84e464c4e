#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mat3.hpp"

namespace gtd {

constexpr int kMaxGridSize = 10000;

class invalid_input : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class singular_information : public std::runtime_error {
 public:
  singular_information() : std::runtime_error("information matrix is numerically singular") {}
};

/// Nominal parameter triple (prevalence, sensitivity, specificity).
struct ModelParams {
  double p0, p1, p2;

  ModelParams(double prevalence, double sensitivity, double specificity)
      : p0(prevalence), p1(sensitivity), p2(specificity) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw invalid_input("p0 must lie strictly in (0,1)");
    if (!(p1 > 0.5 && p1 <= 1.0)) throw invalid_input("p1 must lie in (0.5,1]");
    if (!(p2 > 0.5 && p2 <= 1.0)) throw invalid_input("p2 must lie in (0.5,1]");
  }
};

/// Standardized per-trial cost c(x) = 1 - q + q*x.
struct CostModel {
  double q;

  explicit CostModel(double q_) : q(q_) {
    if (!(q >= 0.0 && q <= 1.0)) throw invalid_input("q must lie in [0,1]");
  }

  static CostModel from_raw(double q0, double q1) {
    if (q0 < 0 || q1 < 0 || q0 + q1 <= 0)
      throw invalid_input("raw costs require q0,q1 >= 0 and q0+q1 > 0");
    return CostModel(q1 / (q0 + q1));
  }
};

struct DesignGrid {
  int M;

  explicit DesignGrid(int max_group_size) : M(max_group_size) {
    if (M < 3) throw invalid_input("grid needs M >= 3");
    if (M > kMaxGridSize) throw invalid_input("grid cap is M <= 10000");
  }
};

/// (1-p0)^x, stable for large x.
inline double survival_pow(double p0, double x) { return std::exp(x * std::log1p(-p0)); }

inline double positive_prob(int x, const ModelParams& th) {
  return th.p1 - (th.p1 + th.p2 - 1.0) * survival_pow(th.p0, x);
}

inline double unit_cost(int x, const CostModel& cost) { return 1.0 - cost.q + cost.q * x; }

/// Gradient of the positive-response probability with respect to (p0,p1,p2).
inline Vec3 regressor(int x, const ModelParams& th) {
  double s = survival_pow(th.p0, x - 1);
  double sx = s * (1.0 - th.p0);
  return {x * (th.p1 + th.p2 - 1.0) * s, 1.0 - sx, -sx};
}

inline double weight_fn(int x, const ModelParams& th, const CostModel& cost) {
  double pi = positive_prob(x, th);
  return 1.0 / (unit_cost(x, cost) * pi * (1.0 - pi));
}

/// Probability vector over the grid {1..M}.
struct Design {
  int M;
  std::vector<double> w;

  Design(int M_, std::vector<double> w_) : M(M_), w(std::move(w_)) {
    if (static_cast<int>(w.size()) != M) throw invalid_input("design length must equal M");
    double s = 0;
    for (double v : w) {
      if (v < 0) throw invalid_input("design weights must be nonnegative");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw invalid_input("design weights must sum to 1");
  }

  static Design point_mass(int M, int x) {
    std::vector<double> w(M, 0.0);
    w[x - 1] = 1.0;
    return Design(M, std::move(w));
  }
};

/// Per-point model evaluations cached over the grid. The (lambda, f) provider
/// is pluggable so alternative group-testing models can reuse everything
/// downstream of the information matrix.
struct GridTables {
  int M = 0;
  std::vector<double> lam;   // efficiency weight lambda(x)
  std::vector<Vec3> f;       // regressor f(x)
  std::vector<Sym3> atom;    // lambda(x) f(x) f(x)^T
  std::vector<double> cost;  // c(x)

  static GridTables build(const DesignGrid& grid, const ModelParams& th, const CostModel& cm) {
    return build_custom(
        grid, [&](int x) { return weight_fn(x, th, cm); },
        [&](int x) { return regressor(x, th); }, [&](int x) { return unit_cost(x, cm); });
  }

  static GridTables build_custom(const DesignGrid& grid,
                                 const std::function<double(int)>& lambda_of,
                                 const std::function<Vec3(int)>& f_of,
                                 const std::function<double(int)>& cost_of) {
    GridTables t;
    t.M = grid.M;
    t.lam.reserve(t.M);
    t.f.reserve(t.M);
    t.atom.reserve(t.M);
    t.cost.reserve(t.M);
    for (int x = 1; x <= grid.M; ++x) {
      double l = lambda_of(x);
      Vec3 fx = f_of(x);
      t.lam.push_back(l);
      t.f.push_back(fx);
      t.atom.push_back(Sym3::outer(fx, l));
      t.cost.push_back(cost_of(x));
    }
    return t;
  }
};

inline Sym3 info_matrix(const std::vector<double>& w, const GridTables& t) {
  Sym3 m = Sym3::zero();
  for (int i = 0; i < t.M; ++i)
    if (w[i] != 0.0) m += t.atom[i] * w[i];
  return m;
}

inline Sym3 info_matrix(const Design& d, const GridTables& t) { return info_matrix(d.w, t); }

/// Support points above prune_tol, renormalized; sorted by group size.
inline std::vector<std::pair<int, double>> support(const Design& d, double prune_tol = 1e-6) {
  if (prune_tol < 0 || prune_tol > 0.01) throw invalid_input("prune_tol must lie in [0, 0.01]");
  std::vector<std::pair<int, double>> out;
  double s = 0;
  for (int i = 0; i < d.M; ++i)
    if (d.w[i] > prune_tol) {
      out.emplace_back(i + 1, d.w[i]);
      s += d.w[i];
    }
  if (out.empty()) throw invalid_input("no design weight above prune tolerance");
  for (auto& p : out) p.second /= s;
  return out;
}

}  // namespace gtd
