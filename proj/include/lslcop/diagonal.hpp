#pragma once

// Diagonals delta: [0,1] -> [0,1] of lower semilinear copulas.
//
// A diagonal belongs to the LSL class when it is a copula diagonal
// (delta <= id, delta(1) = 1, non-decreasing, 2-Lipschitz) whose ratio
// phi(x) = delta(x)/x is non-decreasing and whose eta(x) = delta(x)/x^2 is
// non-increasing on (0,1].
//
// Representations:
//   Pwl    delta linear between knots (x, y)
//   Ratio  phi linear between knots (x, phi); delta(x) = x * phi(x). Closed
//          under knot-wise interpolation, so projections use it.
//   Lower  l_a(x) = a x on [0,a], x^2 beyond
//   Upper  u_a(x) = x^2/a on [0,a], x beyond (u_0 is the identity)
//   Power  x^p, p in [1,2]; Power(2) is the independence diagonal, Power(1) the identity
//   MoStar diagonal of the star product of a Marshall-Olkin copula with its transpose
//   Mix    pointwise convex combination weight*left + (1-weight)*right

#include "lslcop/error.hpp"
#include "lslcop/exact.hpp"
#include "lslcop/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace lslcop {

struct Knot {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Knot&, const Knot&) = default;
};

struct RatioKnot {
  double x = 0.0;
  double phi = 0.0;
  friend bool operator==(const RatioKnot&, const RatioKnot&) = default;
};

class Diagonal;

namespace detail {

inline void check_unit(double x, const char* where) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(where) + ": x outside [0,1]");
}

inline void check_open_left(double x, const char* where) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError(std::string(where) + ": x outside (0,1]");
}

// Index i of the segment [xs[i], xs[i+1]) containing x; x = last maps to the last segment.
template <class Seq, class Proj>
std::size_t segment_of(const Seq& knots, double x, Proj proj) {
  std::size_t lo = 0, hi = knots.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (proj(knots[mid]) <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// Marshall-Olkin star diagonal constants for the generic alpha case.
struct MoConstants {
  double c;  // alpha^2 / (1 - 2 alpha)
  double e;  // beta (1 - 2 alpha) / alpha
};

inline MoConstants mo_constants(double alpha, double beta) {
  return {alpha * alpha / (1.0 - 2.0 * alpha), beta * (1.0 - 2.0 * alpha) / alpha};
}

}  // namespace detail

class Diagonal {
 public:
  struct Pwl {
    std::vector<Knot> knots;
  };
  struct Ratio {
    std::vector<RatioKnot> knots;
  };
  struct Lower {
    double a;
  };
  struct Upper {
    double a;
  };
  struct Power {
    double p;
  };
  struct MoStar {
    double alpha;
    double beta;
  };
  struct Mix {
    std::shared_ptr<const Diagonal> left;
    std::shared_ptr<const Diagonal> right;
    double weight;
  };
  using Repr = std::variant<Pwl, Ratio, Lower, Upper, Power, MoStar, Mix>;

  explicit Diagonal(Repr repr)
      : repr_(std::move(repr)),
        phi_series_(std::make_shared<const PiecewiseSeries>(build_series())) {}

  const Repr& repr() const noexcept { return repr_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&repr_);
  }

  // delta(x) on [0,1].
  double operator()(double x) const {
    detail::check_unit(x, "Diagonal::eval");
    return std::visit([x](const auto& r) { return eval_repr(r, x); }, repr_);
  }

  // Measurable version of delta': right derivative on [0,1), left derivative at 1.
  double slope(double x) const {
    detail::check_open_left(x, "Diagonal::slope");
    return std::visit([x](const auto& r) { return slope_repr(r, x); }, repr_);
  }

  double phi(double x) const {
    detail::check_open_left(x, "Diagonal::phi");
    return (*this)(x) / x;
  }

  double eta(double x) const {
    detail::check_open_left(x, "Diagonal::eta");
    return (*this)(x) / (x * x);
  }

  // lim_{x -> 0+} delta(x)/x.
  double phi_at_origin() const {
    return std::visit([](const auto& r) { return origin_repr(r); }, repr_);
  }

  // phi = delta/x as an exact piecewise series on (0,1].
  const PiecewiseSeries& ratio_series() const noexcept { return *phi_series_; }

  // Abscissae where the representation changes form (always contains 0 and 1).
  std::vector<double> breakpoints() const {
    std::vector<double> out = std::visit([](const auto& r) { return breaks_repr(r); }, repr_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  // ---- evaluation ----
  static double eval_repr(const Pwl& r, double x) {
    const auto& k = r.knots;
    const std::size_t i = detail::segment_of(k, x, [](const Knot& n) { return n.x; });
    const double h = k[i + 1].x - k[i].x;
    const double t = (x - k[i].x) / h;
    return k[i].y + t * (k[i + 1].y - k[i].y);
  }
  static double eval_repr(const Ratio& r, double x) {
    const auto& k = r.knots;
    const std::size_t i = detail::segment_of(k, x, [](const RatioKnot& n) { return n.x; });
    const double h = k[i + 1].x - k[i].x;
    const double t = (x - k[i].x) / h;
    return x * (k[i].phi + t * (k[i + 1].phi - k[i].phi));
  }
  static double eval_repr(const Lower& r, double x) { return x <= r.a ? r.a * x : x * x; }
  static double eval_repr(const Upper& r, double x) {
    if (r.a <= 0.0) return x;
    return x <= r.a ? x * x / r.a : x;
  }
  static double eval_repr(const Power& r, double x) { return x == 0.0 ? 0.0 : std::pow(x, r.p); }
  static double eval_repr(const MoStar& r, double x) {
    if (x == 0.0) return 0.0;
    if (r.alpha == 0.0) return x * x;
    if (r.alpha == 0.5) return x * x * (1.0 - 0.5 * r.beta * std::log(x));
    if (r.alpha == 1.0) return std::pow(x, 2.0 - r.beta);
    const auto k = detail::mo_constants(r.alpha, r.beta);
    return x * x * (1.0 - k.c * std::expm1(k.e * std::log(x)));
  }
  static double eval_repr(const Mix& r, double x) {
    return r.weight * (*r.left)(x) + (1.0 - r.weight) * (*r.right)(x);
  }

  // ---- derivative version ----
  static double slope_repr(const Pwl& r, double x) {
    const auto& k = r.knots;
    const std::size_t i = detail::segment_of(k, x, [](const Knot& n) { return n.x; });
    return (k[i + 1].y - k[i].y) / (k[i + 1].x - k[i].x);
  }
  static double slope_repr(const Ratio& r, double x) {
    const auto& k = r.knots;
    const std::size_t i = detail::segment_of(k, x, [](const RatioKnot& n) { return n.x; });
    const double q = (k[i + 1].phi - k[i].phi) / (k[i + 1].x - k[i].x);
    const double phi = k[i].phi + q * (x - k[i].x);
    return phi + x * q;
  }
  static double slope_repr(const Lower& r, double x) {
    const bool left_piece = x < r.a || (x == 1.0 && r.a >= 1.0);
    return left_piece ? r.a : 2.0 * x;
  }
  static double slope_repr(const Upper& r, double x) {
    if (r.a <= 0.0) return 1.0;
    const bool left_piece = x < r.a || (x == 1.0 && r.a >= 1.0);
    return left_piece ? 2.0 * x / r.a : 1.0;
  }
  static double slope_repr(const Power& r, double x) { return r.p * std::pow(x, r.p - 1.0); }
  static double slope_repr(const MoStar& r, double x) {
    if (r.alpha == 0.0) return 2.0 * x;
    if (r.alpha == 0.5)
      return 2.0 * x * (1.0 - 0.5 * r.beta * std::log(x)) - 0.5 * r.beta * x;
    if (r.alpha == 1.0) return (2.0 - r.beta) * std::pow(x, 1.0 - r.beta);
    const auto k = detail::mo_constants(r.alpha, r.beta);
    return 2.0 * x * (1.0 - k.c * std::expm1(k.e * std::log(x))) -
           r.alpha * r.beta * std::pow(x, k.e + 1.0);
  }
  static double slope_repr(const Mix& r, double x) {
    return r.weight * r.left->slope(x) + (1.0 - r.weight) * r.right->slope(x);
  }

  // ---- phi(0+) ----
  static double origin_repr(const Pwl& r) { return r.knots[1].y / r.knots[1].x; }
  static double origin_repr(const Ratio& r) { return r.knots.front().phi; }
  static double origin_repr(const Lower& r) { return r.a; }
  static double origin_repr(const Upper& r) { return r.a <= 0.0 ? 1.0 : 0.0; }
  static double origin_repr(const Power& r) { return r.p == 1.0 ? 1.0 : 0.0; }
  static double origin_repr(const MoStar& r) {
    return (r.alpha == 1.0 && r.beta == 1.0) ? 1.0 : 0.0;
  }
  static double origin_repr(const Mix& r) {
    return r.weight * r.left->phi_at_origin() + (1.0 - r.weight) * r.right->phi_at_origin();
  }

  // ---- breakpoints ----
  static std::vector<double> breaks_repr(const Pwl& r) {
    std::vector<double> out;
    for (const auto& k : r.knots) out.push_back(k.x);
    return out;
  }
  static std::vector<double> breaks_repr(const Ratio& r) {
    std::vector<double> out;
    for (const auto& k : r.knots) out.push_back(k.x);
    return out;
  }
  static std::vector<double> breaks_repr(const Lower& r) {
    return {0.0, std::clamp(r.a, 0.0, 1.0), 1.0};
  }
  static std::vector<double> breaks_repr(const Upper& r) {
    return {0.0, std::clamp(r.a, 0.0, 1.0), 1.0};
  }
  static std::vector<double> breaks_repr(const Power&) { return {0.0, 1.0}; }
  static std::vector<double> breaks_repr(const MoStar&) { return {0.0, 1.0}; }
  static std::vector<double> breaks_repr(const Mix& r) {
    auto out = r.left->breakpoints();
    auto rb = r.right->breakpoints();
    out.insert(out.end(), rb.begin(), rb.end());
    return out;
  }

  // ---- phi as a piecewise series ----
  PiecewiseSeries build_series() const {
    return std::visit([](const auto& r) { return series_repr(r); }, repr_);
  }
  static PiecewiseSeries series_repr(const Pwl& r) {
    std::vector<double> br;
    std::vector<Series> pieces;
    const auto& k = r.knots;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double h = k[i + 1].x - k[i].x;
      const double m = (k[i + 1].y - k[i].y) / h;
      const double c = (k[i].y * k[i + 1].x - k[i + 1].y * k[i].x) / h;
      br.push_back(k[i].x);
      pieces.push_back(Series({{m, 0.0, 0}, {c, -1.0, 0}}));
    }
    br.push_back(k.back().x);
    return {std::move(br), std::move(pieces)};
  }
  static PiecewiseSeries series_repr(const Ratio& r) {
    std::vector<double> br;
    std::vector<Series> pieces;
    const auto& k = r.knots;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double h = k[i + 1].x - k[i].x;
      const double q = (k[i + 1].phi - k[i].phi) / h;
      const double p = (k[i].phi * k[i + 1].x - k[i + 1].phi * k[i].x) / h;
      br.push_back(k[i].x);
      pieces.push_back(Series({{p, 0.0, 0}, {q, 1.0, 0}}));
    }
    br.push_back(k.back().x);
    return {std::move(br), std::move(pieces)};
  }
  static PiecewiseSeries series_repr(const Lower& r) {
    const double a = std::clamp(r.a, 0.0, 1.0);
    return {{0.0, a, 1.0}, {Series::constant(r.a), Series::monomial(1.0, 1.0)}};
  }
  static PiecewiseSeries series_repr(const Upper& r) {
    if (r.a <= 0.0) return PiecewiseSeries::uniform(Series::constant(1.0));
    const double a = std::min(r.a, 1.0);
    return {{0.0, a, 1.0}, {Series::monomial(1.0 / r.a, 1.0), Series::constant(1.0)}};
  }
  static PiecewiseSeries series_repr(const Power& r) {
    return PiecewiseSeries::uniform(Series::monomial(1.0, r.p - 1.0));
  }
  static PiecewiseSeries series_repr(const MoStar& r) {
    if (r.alpha == 0.0) return PiecewiseSeries::uniform(Series::monomial(1.0, 1.0));
    if (r.alpha == 0.5)
      return PiecewiseSeries::uniform(Series({{1.0, 1.0, 0}, {-0.5 * r.beta, 1.0, 1}}));
    if (r.alpha == 1.0) return PiecewiseSeries::uniform(Series::monomial(1.0, 1.0 - r.beta));
    const auto k = detail::mo_constants(r.alpha, r.beta);
    return PiecewiseSeries::uniform(Series({{1.0 + k.c, 1.0, 0}, {-k.c, k.e + 1.0, 0}}));
  }
  static PiecewiseSeries series_repr(const Mix& r) {
    return PiecewiseSeries::linear_combination(r.weight, r.left->ratio_series(),
                                               1.0 - r.weight, r.right->ratio_series());
  }

  Repr repr_;
  std::shared_ptr<const PiecewiseSeries> phi_series_;
};

// ---------------------------------------------------------------------------
// Construction

inline Diagonal make_pwl(std::vector<Knot> knots) {
  if (knots.size() < 2) throw MalformedKnots("make_pwl: need at least two knots");
  for (const auto& k : knots)
    if (!std::isfinite(k.x) || !std::isfinite(k.y) || k.y < 0.0 || k.y > 1.0)
      throw MalformedKnots("make_pwl: knot value outside [0,1]");
  if (knots.front() != Knot{0.0, 0.0}) throw MalformedKnots("make_pwl: first knot must be (0,0)");
  if (knots.back() != Knot{1.0, 1.0}) throw MalformedKnots("make_pwl: last knot must be (1,1)");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i].x < knots[i + 1].x))
      throw MalformedKnots("make_pwl: knot abscissae must be strictly increasing");
  return Diagonal(Diagonal::Pwl{std::move(knots)});
}

inline Diagonal make_ratio(std::vector<RatioKnot> knots) {
  if (knots.size() < 2) throw MalformedKnots("make_ratio: need at least two knots");
  for (const auto& k : knots)
    if (!std::isfinite(k.x) || !std::isfinite(k.phi) || k.phi < 0.0 || k.phi > 1.0)
      throw MalformedKnots("make_ratio: knot value outside [0,1]");
  if (knots.front().x != 0.0) throw MalformedKnots("make_ratio: first knot must sit at x=0");
  if (knots.back() != RatioKnot{1.0, 1.0})
    throw MalformedKnots("make_ratio: last knot must be (1,1)");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i].x < knots[i + 1].x))
      throw MalformedKnots("make_ratio: knot abscissae must be strictly increasing");
  return Diagonal(Diagonal::Ratio{std::move(knots)});
}

namespace detail {
inline void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": parameter must be finite");
}
}  // namespace detail

inline Diagonal lower(double a) {
  detail::check_finite(a, "lower");
  return Diagonal(Diagonal::Lower{a});
}
inline Diagonal upper(double a) {
  detail::check_finite(a, "upper");
  return Diagonal(Diagonal::Upper{a});
}
inline Diagonal power(double p) {
  detail::check_finite(p, "power");
  return Diagonal(Diagonal::Power{p});
}
inline Diagonal independence() { return power(2.0); }
inline Diagonal comonotone() { return power(1.0); }

inline Diagonal mo_star(double alpha, double beta) {
  detail::check_finite(alpha, "mo_star");
  detail::check_finite(beta, "mo_star");
  return Diagonal(Diagonal::MoStar{alpha, beta});
}

// Pointwise w*d1 + (1-w)*d2. Two Pwl (or two Ratio) inputs stay in that
// representation on the union of their knot abscissae.
inline Diagonal mix(const Diagonal& d1, const Diagonal& d2, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("mix: weight outside [0,1]");
  const auto* p1 = d1.as<Diagonal::Pwl>();
  const auto* p2 = d2.as<Diagonal::Pwl>();
  if (p1 && p2) {
    std::vector<double> xs;
    for (const auto& k : p1->knots) xs.push_back(k.x);
    for (const auto& k : p2->knots) xs.push_back(k.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Knot> knots;
    knots.reserve(xs.size());
    for (double x : xs) knots.push_back({x, w * d1(x) + (1.0 - w) * d2(x)});
    knots.front() = {0.0, 0.0};
    knots.back() = {1.0, 1.0};
    return Diagonal(Diagonal::Pwl{std::move(knots)});
  }
  const auto* r1 = d1.as<Diagonal::Ratio>();
  const auto* r2 = d2.as<Diagonal::Ratio>();
  if (r1 && r2) {
    std::vector<double> xs;
    for (const auto& k : r1->knots) xs.push_back(k.x);
    for (const auto& k : r2->knots) xs.push_back(k.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<RatioKnot> knots;
    knots.reserve(xs.size());
    knots.push_back({0.0, w * d1.phi_at_origin() + (1.0 - w) * d2.phi_at_origin()});
    for (std::size_t i = 1; i + 1 < xs.size(); ++i)
      knots.push_back({xs[i], w * d1.phi(xs[i]) + (1.0 - w) * d2.phi(xs[i])});
    knots.push_back({1.0, 1.0});
    return Diagonal(Diagonal::Ratio{std::move(knots)});
  }
  return Diagonal(Diagonal::Mix{std::make_shared<const Diagonal>(d1),
                                std::make_shared<const Diagonal>(d2), w});
}

// Piecewise linear diagonal whose LSL copula is stochastically increasing
// nowhere near y = 0.36: phi is constant on every second knot interval.
inline Diagonal si_counterexample() {
  return make_pwl({{0.0, 0.0},
                   {0.125, 0.07},
                   {0.25, 0.2},
                   {0.375, 0.3},
                   {0.5, 0.46},
                   {0.625, 23.0 / 40.0},
                   {0.75, 0.73},
                   {0.875, 511.0 / 600.0},
                   {1.0, 1.0}});
}

// ---------------------------------------------------------------------------
// Validation

enum class Condition {
  Endpoints,
  Bounds,
  Monotone,
  Lipschitz,
  PhiNonDecreasing,
  EtaNonIncreasing,
  ParameterRange,
};

inline std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Endpoints: return "endpoints";
    case Condition::Bounds: return "bounds";
    case Condition::Monotone: return "monotone";
    case Condition::Lipschitz: return "lipschitz";
    case Condition::PhiNonDecreasing: return "phi_nondecreasing";
    case Condition::EtaNonIncreasing: return "eta_nonincreasing";
    case Condition::ParameterRange: return "parameter_range";
  }
  return "unknown";
}

struct Violation {
  Condition condition;
  double witness_x;
  double lhs;
  double rhs;
};

struct ValidationReport {
  bool is_member = true;
  std::vector<Violation> violations;
  double tolerance = 0.0;
};

namespace detail {

class Validator {
 public:
  explicit Validator(double tol) : tol_(tol) {}

  // With tol == 0 the segment inequalities are decided in exact rational arithmetic.
  void check(const Diagonal& d) {
    std::visit([this](const auto& r) { this->check_repr(r); }, d.repr());
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  void add(Condition c, double x, double lhs, double rhs) { out_.push_back({c, x, lhs, rhs}); }

  // Records a violation unless sign(exact) >= 0 (exact mode) or lhs >= rhs - tol.
  void require_ge(Condition c, double x, double lhs, double rhs, int exact_sign) {
    const bool ok = tol_ == 0.0 ? exact_sign >= 0 : lhs >= rhs - tol_;
    if (!ok) add(c, x, lhs, rhs);
  }

  void check_range(double v, double lo, double hi, double x) {
    if (!(v >= lo - tol_ && v <= hi + tol_)) add(Condition::ParameterRange, x, v, v < lo ? lo : hi);
  }

  void check_repr(const Diagonal::Pwl& r) {
    const auto& k = r.knots;
    if (k.front() != Knot{0.0, 0.0}) add(Condition::Endpoints, k.front().x, k.front().y, 0.0);
    if (k.back() != Knot{1.0, 1.0}) add(Condition::Endpoints, k.back().x, k.back().y, 1.0);
    for (const auto& n : k) {
      if (n.y < 0.0) add(Condition::Bounds, n.x, n.y, 0.0);
      if (n.y > n.x) add(Condition::Bounds, n.x, n.y, n.x);
    }
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double x0 = k[i].x, y0 = k[i].y, x1 = k[i + 1].x, y1 = k[i + 1].y;
      const double h = x1 - x0;
      const double m = (y1 - y0) / h;
      const double c = (y0 * x1 - y1 * x0) / h;
      const bool ex = tol_ == 0.0;
      require_ge(Condition::Monotone, x0, m, 0.0, ex ? exact::sign_of({{1, y1, 1.0}, {-1, y0, 1.0}}) : 0);
      // 2(x1 - x0) - (y1 - y0) >= 0
      require_ge(Condition::Lipschitz, x0, 2.0 - m, 0.0,
                 ex ? exact::sign_of({{2, x1, 1.0}, {-2, x0, 1.0}, {-1, y1, 1.0}, {1, y0, 1.0}}) : 0);
      // c <= 0  <=>  y1 x0 - y0 x1 >= 0
      require_ge(Condition::PhiNonDecreasing, x0, -c, 0.0,
                 ex ? exact::sign_of({{1, y1, x0}, {-1, y0, x1}}) : 0);
      // m x + 2c >= 0 at both ends, scaled by h
      require_ge(Condition::EtaNonIncreasing, x0, m * x0 + 2.0 * c, 0.0,
                 ex ? exact::sign_of({{2, y0, x1}, {-1, y0, x0}, {-1, y1, x0}}) : 0);
      require_ge(Condition::EtaNonIncreasing, x1, m * x1 + 2.0 * c, 0.0,
                 ex ? exact::sign_of({{1, y1, x1}, {1, y0, x1}, {-2, y1, x0}}) : 0);
    }
  }

  void check_repr(const Diagonal::Ratio& r) {
    const auto& k = r.knots;
    if (k.front().x != 0.0) add(Condition::Endpoints, k.front().x, k.front().phi, 0.0);
    if (k.back() != RatioKnot{1.0, 1.0}) add(Condition::Endpoints, k.back().x, k.back().phi, 1.0);
    for (const auto& n : k) {
      if (n.phi < 0.0) add(Condition::Bounds, n.x, n.phi, 0.0);
      if (n.phi > 1.0) add(Condition::Bounds, n.x, n.phi, 1.0);
    }
    const bool ex = tol_ == 0.0;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double x0 = k[i].x, p0 = k[i].phi, x1 = k[i + 1].x, p1 = k[i + 1].phi;
      require_ge(Condition::PhiNonDecreasing, x0, p1, p0, p1 >= p0 ? 1 : -1);
      if (i == 0) continue;  // first piece: phi = p + q x with p = phi(0) >= 0
      // phi/x non-increasing at knots: p0 x1 - p1 x0 >= 0
      require_ge(Condition::EtaNonIncreasing, x1, p0 / x0, p1 / x1,
                 ex ? exact::sign_of({{1, p0, x1}, {-1, p1, x0}}) : 0);
    }
  }

  void check_repr(const Diagonal::Lower& r) { check_range(r.a, 0.0, 1.0, r.a); }
  void check_repr(const Diagonal::Upper& r) { check_range(r.a, 0.0, 1.0, r.a); }
  void check_repr(const Diagonal::Power& r) { check_range(r.p, 1.0, 2.0, 1.0); }

  void check_repr(const Diagonal::MoStar& r) {
    check_range(r.alpha, 0.0, 1.0, 0.0);
    check_range(r.beta, 0.0, 1.0, 0.0);
    if (!out_.empty()) return;
    const Diagonal d(r);
    const double slack = std::max(tol_, 1e-12);
    constexpr int n = 2049;
    double prev_phi = d.phi(1.0 / (n - 1)), prev_eta = d.eta(1.0 / (n - 1));
    for (int i = 2; i < n; ++i) {
      const double x = static_cast<double>(i) / (n - 1);
      const double phi = d.phi(x), eta = d.eta(x);
      if (phi < prev_phi - slack) add(Condition::PhiNonDecreasing, x, phi, prev_phi);
      if (eta > prev_eta + slack * std::max(1.0, prev_eta)) add(Condition::EtaNonIncreasing, x, eta, prev_eta);
      if (d(x) > x + slack) add(Condition::Bounds, x, d(x), x);
      prev_phi = phi;
      prev_eta = eta;
    }
  }

  void check_repr(const Diagonal::Mix& r) {
    check_range(r.weight, 0.0, 1.0, 0.0);
    check(*r.left);
    check(*r.right);
  }

  double tol_;
  std::vector<Violation> out_;
};

}  // namespace detail

inline ValidationReport validate_dlsl(const Diagonal& d, double tol = 0.0) {
  detail::Validator v(tol);
  v.check(d);
  ValidationReport rep;
  rep.violations = v.take();
  rep.is_member = rep.violations.empty();
  rep.tolerance = tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Grids, distances, projection

inline std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw DomainError("uniform_grid: need at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

// Uniform grid of n points merged with the breakpoints of the given diagonals.
inline std::vector<double> merged_grid(std::size_t n, std::initializer_list<const Diagonal*> ds) {
  auto g = uniform_grid(n);
  for (const Diagonal* d : ds) {
    auto b = d->breakpoints();
    g.insert(g.end(), b.begin(), b.end());
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Sup-norm distance sampled on the merged grid and the midpoints of its cells.
inline double sup_distance(const Diagonal& a, const Diagonal& b, std::size_t grid_n = 1025) {
  const auto g = merged_grid(grid_n, {&a, &b});
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    best = std::max(best, std::abs(a(g[i]) - b(g[i])));
    if (i + 1 < g.size()) {
      const double m = 0.5 * (g[i] + g[i + 1]);
      best = std::max(best, std::abs(a(m) - b(m)));
    }
  }
  return best;
}

struct Projection {
  Diagonal diagonal;
  double repair_magnitude = 0.0;  // largest change made to restore membership
  double error_bound = 0.0;       // sup |delta - projection| implied by the two cone constraints
};

namespace detail {

// Largest x * (U(x) - L(x)) on [x0, x1] where L, U are the cone bounds for a
// function with phi non-decreasing and phi/x non-increasing through the knots.
inline double cone_gap(double x0, double p0, double x1, double p1) {
  auto lower = [&](double x) { return std::max(p0, p1 * x / x1); };
  auto upper = [&](double x) { return x0 == 0.0 ? p1 : std::min(p1, p0 * x / x0); };
  auto g = [&](double x) { return x * std::max(0.0, upper(x) - lower(x)); };
  std::vector<double> cand{x0, x1};
  if (p1 > 0.0) cand.push_back(p0 * x1 / p1);
  if (p0 > 0.0 && x0 > 0.0) cand.push_back(p1 * x0 / p0);
  std::erase_if(cand, [&](double c) { return !(c >= x0 && c <= x1); });
  std::sort(cand.begin(), cand.end());
  double best = 0.0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    best = std::max(best, g(cand[i]));
    if (i + 1 == cand.size() || !(cand[i + 1] > cand[i])) continue;
    // g is quadratic between candidates
    const double a = cand[i], b = cand[i + 1];
    const double ga = g(a), gm = g(0.5 * (a + b)), gb = g(b);
    const double qa = 2.0 * (ga - 2.0 * gm + gb), qb = -3.0 * ga + 4.0 * gm - gb;
    best = std::max(best, gm);
    if (qa < 0.0) best = std::max(best, g(a + std::clamp(-qb / (2.0 * qa), 0.0, 1.0) * (b - a)));
  }
  return best;
}

}  // namespace detail

// Builds a Ratio diagonal from phi samples on a grid (grid.front() = 0,
// grid.back() = 1, phis.front() = phi(0+)). Roundoff violations of the cone
// constraints are repaired by a backward sweep from phi(1) = 1.
inline Projection project_ratio_values(std::span<const double> grid, std::vector<double> phis) {
  const std::size_t n = grid.size();
  if (n < 2 || phis.size() != n || grid.front() != 0.0 || grid.back() != 1.0)
    throw DomainError("project_ratio_values: grid must span [0,1]");
  double repair = std::abs(phis.back() - 1.0);
  phis.back() = 1.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double hi = phis[i + 1];
    double v = std::min(phis[i], hi);
    if (i > 0) {
      double lo = hi * grid[i] / grid[i + 1];
      // exact check of v * x_{i+1} >= phi_{i+1} * x_i
      while (exact::sign_of({{1, lo, grid[i + 1]}, {-1, hi, grid[i]}}) < 0)
        lo = std::nextafter(lo, std::numeric_limits<double>::infinity());
      if (v < lo) v = std::min(lo, hi);
    } else {
      v = std::max(v, 0.0);
    }
    repair = std::max(repair, std::abs(v - phis[i]));
    phis[i] = v;
  }
  std::vector<RatioKnot> knots(n);
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) knots[i] = {grid[i], phis[i]};
  for (std::size_t i = 0; i + 1 < n; ++i)
    bound = std::max(bound, detail::cone_gap(grid[i], phis[i], grid[i + 1], phis[i + 1]));
  return {Diagonal(Diagonal::Ratio{std::move(knots)}), repair, bound};
}

// Ratio-linear interpolation of d on the given grid.
inline Projection project_ratio(const Diagonal& d, std::span<const double> grid) {
  std::vector<double> phis(grid.size());
  phis.front() = d.phi_at_origin();
  for (std::size_t i = 1; i < grid.size(); ++i) phis[i] = d.phi(grid[i]);
  return project_ratio_values(grid, std::move(phis));
}

inline Projection project_ratio(const Diagonal& d, std::size_t grid_n = 1025) {
  const auto g = merged_grid(grid_n, {&d});
  return project_ratio(d, g);
}

// ---------------------------------------------------------------------------
// Random members

namespace detail {

inline double unit_draw(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

// Deterministic random Pwl member of the LSL class with n_knots knots
// (including the endpoints). Draws phi backwards from phi(1) = 1 inside the
// exact per-segment cone phi_i <= slope <= 2 phi_i, then re-validates exactly.
inline Diagonal random_dlsl(std::uint64_t seed, std::size_t n_knots) {
  if (n_knots < 2) throw DomainError("random_dlsl: need at least two knots");
  std::mt19937_64 gen(seed);
  const double min_gap = 1e-3 / static_cast<double>(n_knots);
  for (;;) {
    std::vector<double> xs{0.0, 1.0};
    for (std::size_t i = 2; i < n_knots; ++i) xs.push_back(detail::unit_draw(gen));
    std::sort(xs.begin(), xs.end());
    bool spaced = true;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) spaced = spaced && xs[i + 1] - xs[i] > min_gap;
    if (!spaced) continue;
    // per-diagonal skew: small exponents favour staying close to the upper end
    const double skew = std::exp(2.0 * (detail::unit_draw(gen) - 0.5) * std::log(6.0));
    constexpr double margin = 1e-6;
    std::vector<double> phi(n_knots, 1.0);
    for (std::size_t i = n_knots - 2; i >= 1; --i) {
      const double hi = phi[i + 1];
      const double lo = phi[i + 1] * xs[i + 1] / (2.0 * xs[i + 1] - xs[i]);
      const double t = std::pow(detail::unit_draw(gen), skew);
      const double span = hi - lo;
      phi[i] = lo + span * (margin + (1.0 - 2.0 * margin) * t);
    }
    std::vector<Knot> knots(n_knots);
    for (std::size_t i = 0; i < n_knots; ++i) knots[i] = {xs[i], xs[i] * phi[i]};
    knots.front() = {0.0, 0.0};
    knots.back() = {1.0, 1.0};
    Diagonal d(Diagonal::Pwl{std::move(knots)});
    if (validate_dlsl(d, 0.0).is_member) return d;
  }
}

// ---------------------------------------------------------------------------

inline std::string describe(const Diagonal& d) {
  std::ostringstream os;
  os.precision(6);
  std::visit(
      [&os](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Diagonal::Pwl>)
          os << "pwl[" << r.knots.size() << "]";
        else if constexpr (std::is_same_v<T, Diagonal::Ratio>)
          os << "ratio[" << r.knots.size() << "]";
        else if constexpr (std::is_same_v<T, Diagonal::Lower>)
          os << "l(" << r.a << ")";
        else if constexpr (std::is_same_v<T, Diagonal::Upper>)
          os << "u(" << r.a << ")";
        else if constexpr (std::is_same_v<T, Diagonal::Power>)
          os << "power(" << r.p << ")";
        else if constexpr (std::is_same_v<T, Diagonal::MoStar>)
          os << "mo(" << r.alpha << " " << r.beta << ")";
        else
          os << "mix(" << r.weight << " " << describe(*r.left) << " " << describe(*r.right) << ")";
      },
      d.repr());
  return os.str();
}

}  // namespace lslcop
