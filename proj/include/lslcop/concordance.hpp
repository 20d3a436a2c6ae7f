#pragma once

// Concordance measures of S_delta written through phi = delta/x:
//   rho      = 12 int u^2 phi - 3
//   tau      = 4 int u phi^2 - 1
//   footrule = 6 int u phi - 2
//   gamma    = 4 int_0^{1/2} u phi + 4 int_{1/2}^1 (2 - u) phi - 2
//   beta     = 4 delta(1/2) - 1

#include "lslcop/copula.hpp"
#include "lslcop/diagonal.hpp"
#include "lslcop/star.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lslcop {

inline double rho(const Diagonal& d) { return 12.0 * d.ratio_series().shifted(2.0).integrate() - 3.0; }

inline double tau(const Diagonal& d) {
  const auto& p = d.ratio_series();
  return 4.0 * (p * p).shifted(1.0).integrate() - 1.0;
}

inline double footrule(const Diagonal& d) {
  return 6.0 * d.ratio_series().shifted(1.0).integrate() - 2.0;
}

inline double gamma(const Diagonal& d) {
  const auto& p = d.ratio_series();
  const auto up = p.shifted(1.0);
  const double left = up.integrate(0.0, 0.5);
  const double right = 2.0 * p.integrate(0.5, 1.0) - up.integrate(0.5, 1.0);
  return 4.0 * left + 4.0 * right - 2.0;
}

inline double blomqvist(const Diagonal& d) { return 4.0 * d(0.5) - 1.0; }

// Conjectured upper boundary of the (tau, rho) region.
inline double upper_boundary(double t) { return 1.0 - std::pow(1.0 - t, 1.5); }

struct ConcordanceReport {
  double tau = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
  double footrule = 0.0;
  double blomqvist = 0.0;
  double sing = 0.0;
  bool lower_bound_ok = true;
  bool upper_conjecture_ok = true;
};

inline ConcordanceReport report(const Diagonal& d, double tol = 1e-12) {
  ConcordanceReport r;
  r.tau = tau(d);
  r.rho = rho(d);
  r.gamma = gamma(d);
  r.footrule = footrule(d);
  r.blomqvist = blomqvist(d);
  r.sing = singular_mass(d);
  r.lower_bound_ok = r.tau <= r.rho + tol;
  r.upper_conjecture_ok = r.rho <= upper_boundary(r.tau) + tol;
  return r;
}

// ---------------------------------------------------------------------------
// Region scan

struct RegionPoint {
  double tau;
  double rho;
  std::string source;
};

enum Family : unsigned {
  kRandom = 1u << 0,
  kLower = 1u << 1,
  kUpper = 1u << 2,
  kMix = 1u << 3,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::size_t knot_count(std::uint64_t s) { return 2 + static_cast<std::size_t>(s % 15); }

}  // namespace detail

// n points per selected family. Random and mix draws are seeded per index.
inline std::vector<RegionPoint> region_scan(std::size_t n, std::uint64_t seed, unsigned families) {
  std::vector<RegionPoint> out;
  auto push = [&out](const Diagonal& d, std::string src) { out.push_back({tau(d), rho(d), std::move(src)}); };
  auto grid_value = [n](std::size_t i) {
    return n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = detail::splitmix64(seed * 0x100000001b3ULL + i);
    if (families & kRandom) {
      const auto d = random_dlsl(s, detail::knot_count(s >> 32));
      push(d, "random:" + std::to_string(s));
    }
    if (families & kLower) push(lower(grid_value(i)), describe(lower(grid_value(i))));
    if (families & kUpper) push(upper(grid_value(i)), describe(upper(grid_value(i))));
    if (families & kMix) {
      const std::uint64_t s1 = detail::splitmix64(s ^ 1), s2 = detail::splitmix64(s ^ 2);
      const double w = static_cast<double>(detail::splitmix64(s ^ 3) >> 11) * 0x1.0p-53;
      const auto d = mix(random_dlsl(s1, detail::knot_count(s1 >> 32)),
                         random_dlsl(s2, detail::knot_count(s2 >> 32)), w);
      push(d, "mix:" + std::to_string(s));
    }
  }
  std::sort(out.begin(), out.end(), [](const RegionPoint& a, const RegionPoint& b) {
    if (a.tau != b.tau) return a.tau < b.tau;
    if (a.rho != b.rho) return a.rho < b.rho;
    return a.source < b.source;
  });
  return out;
}

struct RegionSummary {
  std::size_t points = 0;
  std::size_t lower_violations = 0;  // tau > rho
  std::size_t upper_violations = 0;  // rho above the conjectured boundary
};

inline RegionSummary summarize(const std::vector<RegionPoint>& pts, double tol = 1e-12) {
  RegionSummary s;
  s.points = pts.size();
  for (const auto& p : pts) {
    if (p.tau > p.rho + tol) ++s.lower_violations;
    if (p.rho > upper_boundary(p.tau) + tol) ++s.upper_violations;
  }
  return s;
}

inline void write_region_csv(std::ostream& os, const std::vector<RegionPoint>& pts) {
  os << std::setprecision(17) << "tau,rho,source\n";
  for (const auto& p : pts) os << p.tau << ',' << p.rho << ',' << p.source << '\n';
}

// ---------------------------------------------------------------------------
// Convexity

// w tau(d1) + (1-w) tau(d2) - tau(mix(d1,d2,w)) = 4 w (1-w) int u (phi1 - phi2)^2.
inline double tau_convexity_gap(const Diagonal& d1, const Diagonal& d2, double w) {
  if (!(w > 0.0 && w < 1.0)) throw DomainError("tau_convexity_gap: w outside (0,1)");
  if (sup_distance(d1, d2) <= 1e-12) throw DegenerateInput("tau_convexity_gap: diagonals coincide");
  const auto diff = PiecewiseSeries::linear_combination(1.0, d1.ratio_series(), -1.0, d2.ratio_series());
  return 4.0 * w * (1.0 - w) * (diff * diff).shifted(1.0).integrate();
}

struct LowerFit {
  double a = 0.0;
  double residual = 0.0;
};

inline double distance_to_lower(const Diagonal& d, double a, std::size_t grid_n = 1025) {
  auto extra = d.breakpoints();
  extra.push_back(a);
  const auto pts = detail::probe_points(grid_n, std::move(extra));
  const Diagonal l = lower(a);
  return detail::sup_between(pts, d, l);
}

// argmin_a sup |d - l_a|.
inline LowerFit fit_lower_family(const Diagonal& d, std::size_t grid_n = 1025) {
  constexpr int coarse = 256;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= coarse; ++i) {
    const double v = distance_to_lower(d, static_cast<double>(i) / coarse, grid_n);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(coarse);
  double hi = std::min(coarse, best + 1) / static_cast<double>(coarse);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  while (hi - lo > 1e-12) {
    const double c = hi - gr * (hi - lo), e = lo + gr * (hi - lo);
    if (distance_to_lower(d, c, grid_n) <= distance_to_lower(d, e, grid_n))
      hi = e;
    else
      lo = c;
  }
  LowerFit fit{0.5 * (lo + hi), 0.0};
  fit.residual = distance_to_lower(d, fit.a, grid_n);
  if (best_val < fit.residual) fit = {static_cast<double>(best) / coarse, best_val};
  return fit;
}

namespace detail {

// Bisection for f(t) = target on [lo, hi] given f(lo) <= target <= f(hi).
template <class F>
double bisect_up(F f, double target, double lo, double hi, double tol = 1e-12) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// A diagonal whose (tau, rho) is the midpoint of the inputs' (tau, rho).
// With d3 = mix(d1, d2, 1/2) the candidates are (1-alpha) d3 + alpha l_a.
// rho is affine in alpha with rho(d3) already equal to the target, which fixes
// a^4 = target rho; alpha is then found by bisection on tau.
inline Diagonal midpoint_construct(const Diagonal& d1, const Diagonal& d2) {
  const double t1 = tau(d1), t2 = tau(d2), r1 = rho(d1), r2 = rho(d2);
  const double tt = 0.5 * (t1 + t2), rt = 0.5 * (r1 + r2);
  constexpr double eps = 1e-12;

  if (std::abs(r1 - r2) <= eps) {
    // all mixes share rho; tau runs from t2 (w = 0) to t1 (w = 1) through a convex curve
    const bool up = t1 >= t2;
    auto f = [&](double w) { return tau(mix(d1, d2, up ? w : 1.0 - w)); };
    const double w = detail::bisect_up(f, tt, 0.5, 1.0);
    return mix(d1, d2, up ? w : 1.0 - w);
  }
  if (std::abs(t1 - r1) <= eps && std::abs(t2 - r2) <= eps) return lower(std::pow(rt, 0.25));

  const Diagonal d3 = mix(d1, d2, 0.5);
  const Diagonal la = lower(std::pow(rt, 0.25));
  auto h = [&](double alpha) { return mix(d3, la, 1.0 - alpha); };
  auto f = [&](double alpha) { return tau(h(alpha)); };
  const double f0 = f(0.0), f1 = f(1.0);
  if (!(f0 <= tt + eps && f1 >= tt - eps)) {
    std::ostringstream os;
    os.precision(17);
    os << "midpoint_construct: no bracket, tau(h_0)=" << f0 << " tau(h_1)=" << f1 << " target=" << tt;
    throw SearchFailure(os.str());
  }
  return h(detail::bisect_up(f, tt, 0.0, 1.0));
}

}  // namespace lslcop
