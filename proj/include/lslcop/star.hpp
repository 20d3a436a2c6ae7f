#pragma once

// Star product on LSL diagonals:
//   (d1 * d2)(x) = x phi1(x) phi2(x) + x^2 int_x^1 phi1'(u) phi2'(u) du.

#include "lslcop/copula.hpp"
#include "lslcop/diagonal.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

namespace lslcop {

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Exact evaluation of d1 * d2.
class StarExact {
 public:
  StarExact(const Diagonal& d1, const Diagonal& d2)
      : d1_(d1), d2_(d2), integrand_(d1.ratio_series().derivative() * d2.ratio_series().derivative()) {
    const auto& br = integrand_.breaks();
    suffix_.assign(br.size(), 0.0);
    // suffix_[k] = int_{b_k}^1; the first piece may not be integrable at 0
    for (std::size_t k = br.size() - 1; k-- > 1;)
      suffix_[k] = suffix_[k + 1] + integrand_.pieces()[k].integrate(br[k], br[k + 1]);
  }

  // int_x^1 phi1' phi2', x > 0.
  double tail_integral(double x) const {
    const std::size_t k = integrand_.locate(x);
    return integrand_.pieces()[k].integrate(x, integrand_.breaks()[k + 1]) + suffix_[k + 1];
  }

  double phi(double x) const {
    detail::check_open_left(x, "StarExact::phi");
    return d1_.phi(x) * d2_.phi(x) + x * tail_integral(x);
  }

  double phi_at_origin() const { return d1_.phi_at_origin() * d2_.phi_at_origin(); }

  double operator()(double x) const {
    detail::check_unit(x, "StarExact::eval");
    if (x == 0.0) return 0.0;
    return x * phi(x);
  }

  std::vector<double> breakpoints() const { return integrand_.breaks(); }

  const Diagonal& left() const noexcept { return d1_; }
  const Diagonal& right() const noexcept { return d2_; }

 private:
  Diagonal d1_;
  Diagonal d2_;
  PiecewiseSeries integrand_;
  std::vector<double> suffix_;
};

struct StarResult {
  Diagonal product;
  std::shared_ptr<const StarExact> exact;
  double projection_error_bound = 0.0;
  double repair_magnitude = 0.0;
};

namespace detail {

// Exact check, then 1e-12 for decimal knot data.
inline void require_member(const Diagonal& d, const char* where) {
  if (!validate_dlsl(d, 0.0).is_member && !validate_dlsl(d, 1e-12).is_member)
    throw InvalidInput(std::string(where) + ": argument is not an LSL diagonal");
}

}  // namespace detail

// Exact product projected onto the ratio representation over the uniform
// grid of grid_n points merged with both inputs' breakpoints.
inline StarResult star(const Diagonal& d1, const Diagonal& d2, std::size_t grid_n = 1025) {
  detail::require_member(d1, "star");
  detail::require_member(d2, "star");
  auto ex = std::make_shared<const StarExact>(d1, d2);
  const auto grid = merged_grid(grid_n, {&d1, &d2});
  std::vector<double> phis(grid.size());
  phis.front() = ex->phi_at_origin();
  for (std::size_t i = 1; i < grid.size(); ++i) phis[i] = ex->phi(grid[i]);
  auto proj = project_ratio_values(grid, std::move(phis));
  return {std::move(proj.diagonal), std::move(ex), proj.error_bound + proj.repair_magnitude,
          proj.repair_magnitude};
}

// (S_d1 * S_d2)(x, y) = S_{d1 * d2}(x, y).
inline double star_surface(const StarExact& ex, double x, double y) {
  detail::check_unit(x, "star_surface");
  detail::check_unit(y, "star_surface");
  if (x == 0.0 || y == 0.0) return 0.0;
  if (y <= x) return y * ex.phi(x);
  return x * ex.phi(y);
}

inline double star_surface(const Diagonal& d1, const Diagonal& d2, double x, double y) {
  detail::require_member(d1, "star_surface");
  detail::require_member(d2, "star_surface");
  return star_surface(StarExact(d1, d2), x, y);
}

// ---------------------------------------------------------------------------
// Sup-norm helpers

namespace detail {

// Grid of grid_n uniform points with extra abscissae and all cell midpoints.
inline std::vector<double> probe_points(std::size_t grid_n, std::vector<double> extra) {
  auto g = uniform_grid(grid_n);
  g.insert(g.end(), extra.begin(), extra.end());
  std::erase_if(g, [](double x) { return !(x >= 0.0 && x <= 1.0); });
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  const std::size_t n = g.size();
  for (std::size_t i = 0; i + 1 < n; ++i) g.push_back(0.5 * (g[i] + g[i + 1]));
  std::sort(g.begin(), g.end());
  return g;
}

template <class F, class G>
double sup_between(const std::vector<double>& pts, const F& f, const G& g) {
  double best = 0.0;
  for (double x : pts) best = std::max(best, std::abs(f(x) - g(x)));
  return best;
}

}  // namespace detail

// sup |d - u_a|.
inline double distance_to_upper(const Diagonal& d, double a, std::size_t grid_n = 1025) {
  auto extra = d.breakpoints();
  extra.push_back(a);
  const auto pts = detail::probe_points(grid_n, std::move(extra));
  const Diagonal u = upper(a);
  return detail::sup_between(pts, d, u);
}

struct UpperFit {
  double a = 0.0;
  double residual = 0.0;
};

// argmin_a sup |d - u_a| by a coarse scan followed by golden-section refinement.
inline UpperFit fit_upper_family(const Diagonal& d, std::size_t grid_n = 1025) {
  constexpr int coarse = 256;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= coarse; ++i) {
    const double v = distance_to_upper(d, static_cast<double>(i) / coarse, grid_n);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(coarse);
  double hi = std::min(coarse, best + 1) / static_cast<double>(coarse);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), e = lo + gr * (hi - lo);
  double fc = distance_to_upper(d, c, grid_n), fe = distance_to_upper(d, e, grid_n);
  while (hi - lo > 1e-12) {
    if (fc <= fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - gr * (hi - lo);
      fc = distance_to_upper(d, c, grid_n);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + gr * (hi - lo);
      fe = distance_to_upper(d, e, grid_n);
    }
  }
  UpperFit fit{0.5 * (lo + hi), 0.0};
  fit.residual = distance_to_upper(d, fit.a, grid_n);
  if (best_val < fit.residual) fit = {static_cast<double>(best) / coarse, best_val};
  return fit;
}

struct IdempotentCheck {
  bool idempotent = false;
  std::optional<double> fitted_a;
  double star_distance = 0.0;  // sup |d*d - d|
  double fit_residual = 0.0;   // sup |d - u_a| at the fitted a
};

inline IdempotentCheck is_idempotent(const Diagonal& d, double tol, std::size_t grid_n = 1025) {
  const StarExact ex(d, d);
  auto extra = d.breakpoints();
  const auto pts = detail::probe_points(grid_n, std::move(extra));
  IdempotentCheck r;
  r.star_distance = detail::sup_between(pts, ex, d);
  if (r.star_distance > tol) return r;
  const auto fit = fit_upper_family(d, grid_n);
  r.fit_residual = fit.residual;
  if (fit.residual > tol) return r;
  r.idempotent = true;
  r.fitted_a = fit.a;
  return r;
}

struct IterationTrace {
  std::vector<Diagonal> iterates;  // d, d*d, d*d*d, ...
  std::vector<double> sup_deltas;  // sup |iterates[k+1] - iterates[k]|
  Diagonal limit = comonotone();
  std::optional<double> fitted_a;
  bool converged = false;
};

// Iterates next = current * d until successive iterates differ by less than tol.
inline IterationTrace iterate_star(const Diagonal& d, double tol = 1e-8, std::size_t max_iter = 200,
                                   std::size_t grid_n = 1025) {
  detail::require_member(d, "iterate_star");
  IterationTrace tr;
  tr.iterates.push_back(d);
  Diagonal current = d;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Diagonal next = star(current, d, grid_n).product;
    const double delta = sup_distance(next, current, grid_n);
    tr.iterates.push_back(next);
    tr.sup_deltas.push_back(delta);
    current = std::move(next);
    if (delta < tol) {
      tr.converged = true;
      break;
    }
  }
  tr.limit = current;
  if (tr.converged) {
    const auto chk = is_idempotent(tr.limit, std::max(10.0 * tol, 1e-6), grid_n);
    if (chk.idempotent) tr.fitted_a = chk.fitted_a;
  }
  return tr;
}

inline Diagonal mo_star_diagonal(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
    throw DomainError("mo_star_diagonal: parameters outside [0,1]");
  return mo_star(alpha, beta);
}

inline void write_trace_csv(std::ostream& os, const IterationTrace& tr) {
  os << std::setprecision(17) << "n,sup_delta\n";
  for (std::size_t i = 0; i < tr.sup_deltas.size(); ++i) os << i + 1 << ',' << tr.sup_deltas[i] << '\n';
}

}  // namespace lslcop
