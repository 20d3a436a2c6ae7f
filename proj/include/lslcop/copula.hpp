#pragma once

// The LSL copula S_delta(x,y) = y delta(x)/x for y <= x (symmetric), its Markov
// kernel, conditional laws, sampling and dependence probes.

#include "lslcop/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

namespace lslcop {

inline double surface(const Diagonal& d, double x, double y) {
  detail::check_unit(x, "surface");
  detail::check_unit(y, "surface");
  if (x == 0.0 || y == 0.0) return 0.0;
  if (y <= x) return y * d(x) / x;
  return x * d(y) / y;
}

// K(x, [0,y]).
inline double kernel_cdf(const Diagonal& d, double x, double y) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("kernel_cdf: x outside (0,1)");
  detail::check_unit(y, "kernel_cdf");
  if (y < x) return y * (d.slope(x) / x - d(x) / (x * x));
  return y == 0.0 ? 0.0 : d(y) / y;
}

// y -> K(x, [0,y]): linear on [0,x), one atom at x, then delta(y)/y.
class ConditionalLaw {
 public:
  ConditionalLaw(const Diagonal& d, double x) : d_(d), x_(x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("conditional_law: x outside (0,1)");
    const double w = d.slope(x), dx = d(x);
    slope_ = w / x - dx / (x * x);
    atom_ = 2.0 * dx / x - w;
    at_x_ = dx / x;
  }

  double x() const noexcept { return x_; }
  double cdf_left_slope() const noexcept { return slope_; }
  double atom_at_x() const noexcept { return atom_; }

  double cdf(double y) const {
    detail::check_unit(y, "ConditionalLaw::cdf");
    if (y < x_) return slope_ * y;
    return d_.phi(y);
  }

  // Generalized inverse inf{y : cdf(y) >= p}.
  double quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("ConditionalLaw::quantile: p outside [0,1]");
    const double below = slope_ * x_;
    if (p <= below) return slope_ > 0.0 ? std::min(p / slope_, x_) : 0.0;
    if (p <= at_x_) return x_;
    double lo = x_, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (d_.phi(mid) >= p)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

 private:
  Diagonal d_;
  double x_;
  double slope_ = 0.0;
  double atom_ = 0.0;
  double at_x_ = 0.0;
};

inline ConditionalLaw conditional_law(const Diagonal& d, double x) { return {d, x}; }

// 2 int phi - 1.
inline double singular_mass(const Diagonal& d) { return 2.0 * d.ratio_series().integrate() - 1.0; }

inline double absolutely_continuous_mass(const Diagonal& d) { return 1.0 - singular_mass(d); }

// ---------------------------------------------------------------------------
// Sampling

struct SamplePoint {
  double u;
  double v;
  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

struct SampleBatch {
  std::vector<SamplePoint> points;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

inline SampleBatch sample(const Diagonal& d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  SampleBatch out;
  out.seed = seed;
  out.n = n;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = detail::unit_draw(gen);
    const double p = detail::unit_draw(gen);
    out.points.push_back({u, ConditionalLaw(d, u).quantile(p)});
  }
  return out;
}

namespace stats {

namespace detail {

inline std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                                 std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = (lo + hi) / 2;
  std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace detail

// Kendall tau of a continuous sample, O(n log n).
inline double kendall_tau(const std::vector<SamplePoint>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  auto sorted = pts;
  std::sort(sorted.begin(), sorted.end(),
            [](const SamplePoint& a, const SamplePoint& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  std::vector<double> v(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = sorted[i].v;
  const double disc = static_cast<double>(detail::merge_count(v, buf, 0, n));
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 1.0 - 2.0 * disc / pairs;
}

inline double spearman_rho(const std::vector<SamplePoint>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = pts[i].u;
    v[i] = pts[i].v;
  }
  const auto ru = detail::ranks(u), rv = detail::ranks(v);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suv += (ru[i] - mean) * (rv[i] - mean);
    suu += (ru[i] - mean) * (ru[i] - mean);
    svv += (rv[i] - mean) * (rv[i] - mean);
  }
  return suv / std::sqrt(suu * svv);
}

// Kolmogorov-Smirnov distance of a sample from the uniform law on [0,1].
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - x[i]);
    d = std::max(d, x[i] - static_cast<double>(i) / n);
  }
  return d;
}

}  // namespace stats

// ---------------------------------------------------------------------------
// Dependence probes

struct DependenceCheck {
  bool pass = true;
  double worst = 0.0;  // most negative slack found
  double witness_x = 0.0;
  double witness_y = 0.0;
};

// S_delta(x,y) >= xy on the grid.
inline DependenceCheck check_pqd(const Diagonal& d, std::size_t grid_n = 257, double tol = 1e-12) {
  const auto g = uniform_grid(grid_n);
  DependenceCheck r;
  for (double x : g)
    for (double y : g) {
      const double slack = surface(d, x, y) - x * y;
      if (slack < r.worst) r = {slack >= -tol, slack, x, y};
    }
  r.pass = r.worst >= -tol;
  return r;
}

// x -> S_delta(x,y)/x non-increasing for every grid y.
inline DependenceCheck check_ltd(const Diagonal& d, std::size_t grid_n = 257, double tol = 1e-12) {
  const auto g = uniform_grid(grid_n);
  DependenceCheck r;
  for (double y : g)
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      const double a = surface(d, g[i], y) / g[i];
      const double b = surface(d, g[i + 1], y) / g[i + 1];
      const double slack = a - b;
      if (slack < r.worst) r = {false, slack, g[i + 1], y};
    }
  r.pass = r.worst >= -tol;
  return r;
}

struct SiProfile {
  double y = 0.0;
  std::vector<double> xs;
  std::vector<double> ks;  // K(x, [0,y])
  std::vector<std::pair<double, double>> increasing;
  bool stochastically_increasing() const noexcept { return increasing.empty(); }
};

// Samples x -> K(x,[0,y]) on a grid of (0,1) refined at the diagonal's breakpoints
// and records the cells on which it strictly increases.
inline SiProfile si_profile(const Diagonal& d, double y, std::size_t grid_n = 257,
                            double tol = 1e-12) {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("si_profile: y outside (0,1)");
  SiProfile p;
  p.y = y;
  for (double x : merged_grid(grid_n, {&d}))
    if (x > 0.0 && x < 1.0) p.xs.push_back(x);
  for (double x : p.xs) p.ks.push_back(kernel_cdf(d, x, y));
  for (std::size_t i = 0; i + 1 < p.xs.size(); ++i)
    if (p.ks[i + 1] > p.ks[i] + tol) p.increasing.emplace_back(p.xs[i], p.xs[i + 1]);
  return p;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_sample_csv(std::ostream& os, const SampleBatch& b) {
  os << std::setprecision(17) << "u,v\n";
  for (const auto& p : b.points) os << p.u << ',' << p.v << '\n';
}

inline void write_xy_csv(std::ostream& os, const char* header, const std::vector<double>& a,
                         const std::vector<double>& b) {
  os << std::setprecision(17) << header << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) os << a[i] << ',' << b[i] << '\n';
}

inline void write_si_csv(std::ostream& os, const SiProfile& p) { write_xy_csv(os, "x,K", p.xs, p.ks); }

}  // namespace lslcop
