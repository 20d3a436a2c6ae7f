#pragma once

// Piecewise generalized polynomials in u on [0,1].
//
// Every ratio function phi = delta/x that the library handles (piecewise
// linear diagonals, the ratio representation, the parametric families and
// their mixtures) is, on each piece, a finite sum of terms c * u^k * ln(u)^j.
// That set is closed under products and differentiation, and every term has
// a closed-form antiderivative, so all diagonal integrals used by the library
// are evaluated exactly (to roundoff) instead of by quadrature.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lslcop {

struct Term {
  double coef = 0.0;
  double power = 0.0;
  int log_power = 0;
};

class Series {
 public:
  Series() = default;
  explicit Series(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static Series constant(double c) { return Series({{c, 0.0, 0}}); }
  static Series monomial(double c, double power, int log_power = 0) {
    return Series({{c, power, log_power}});
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  double operator()(double u) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double v = t.coef;
      if (t.power != 0.0) v *= std::pow(u, t.power);
      if (t.log_power != 0) v *= std::pow(std::log(u), t.log_power);
      sum += v;
    }
    return sum;
  }

  Series derivative() const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      // d/du u^k ln^j u = k u^{k-1} ln^j u + j u^{k-1} ln^{j-1} u
      if (t.power != 0.0) out.push_back({t.coef * t.power, t.power - 1.0, t.log_power});
      if (t.log_power != 0)
        out.push_back({t.coef * t.log_power, t.power - 1.0, t.log_power - 1});
    }
    return Series(std::move(out));
  }

  Series scaled(double s) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coef *= s;
    return Series(std::move(out));
  }

  // Multiplies by u^k.
  Series shifted(double k) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.power += k;
    return Series(std::move(out));
  }

  friend Series operator+(const Series& a, const Series& b) {
    std::vector<Term> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return Series(std::move(out));
  }

  friend Series operator*(const Series& a, const Series& b) {
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_)
        out.push_back({s.coef * t.coef, s.power + t.power, s.log_power + t.log_power});
    return Series(std::move(out));
  }

  // Exact integral over [a, b] with 0 <= a <= b. Terms that are not integrable
  // at a = 0 raise std::domain_error.
  double integrate(double a, double b) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t.coef * integrate_term(t.power, t.log_power, a, b);
    return sum;
  }

  // \int_a^b u^s ln^j(u) du.
  static double integrate_term(double s, int j, double a, double b) {
    if (!(b > a)) return 0.0;
    const double t = s + 1.0;
    if (a == 0.0) {
      if (t <= 0.0) throw std::domain_error("Series: term not integrable at 0");
      return antiderivative(t, j, b);
    }
    if (j == 0) {
      const double lr = std::log1p((b - a) / a);
      if (t == 0.0) return lr;
      // (b^t - a^t)/t written so that it stays accurate for b close to a and t near 0.
      return std::pow(a, t) * std::expm1(t * lr) / t;
    }
    const double la = std::log(a), lb = std::log(b);
    const double big = std::max(std::abs(la), std::abs(lb));
    if (std::abs(t) * big < 1.0) {
      // u^{t-1} ln^j u = sum_k t^k ln^{j+k} u / (k! u)
      double sum = 0.0, fact = 1.0, tk = 1.0;
      for (int k = 0; k < 80; ++k) {
        const int m = j + k + 1;
        const double term =
            tk / fact * (std::pow(lb, m) - std::pow(la, m)) / static_cast<double>(m);
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
        tk *= t;
        fact *= static_cast<double>(k + 1);
      }
      return sum;
    }
    return antiderivative(t, j, b) - antiderivative(t, j, a);
  }

 private:
  // Antiderivative of u^{t-1} ln^j u for t != 0, evaluated at u > 0
  // (limit 0 at u -> 0 when t > 0).
  static double antiderivative(double t, int j, double u) {
    if (t == 0.0) return std::pow(std::log(u), j + 1) / (j + 1);
    if (u == 0.0) return 0.0;
    const double lu = std::log(u);
    double sum = 0.0, coeff = 1.0 / t;  // (-1)^i j!/(j-i)! / t^{i+1}
    for (int i = 0; i <= j; ++i) {
      sum += coeff * std::pow(lu, j - i);
      coeff *= -static_cast<double>(j - i) / t;
    }
    return std::pow(u, t) * sum;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) {
      return x.power != y.power ? x.power < y.power : x.log_power < y.log_power;
    });
    std::vector<Term> merged;
    for (const auto& t : terms_) {
      if (!merged.empty() && merged.back().power == t.power &&
          merged.back().log_power == t.log_power) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

// A Series on each piece of a partition 0 = b_0 < b_1 < ... < b_k = 1.
class PiecewiseSeries {
 public:
  PiecewiseSeries() : breaks_{0.0, 1.0}, pieces_(1) {}
  PiecewiseSeries(std::vector<double> breaks, std::vector<Series> pieces)
      : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (breaks_.size() != pieces_.size() + 1 || breaks_.size() < 2)
      throw std::invalid_argument("PiecewiseSeries: breaks/pieces size mismatch");
    std::vector<double> b{breaks_.front()};
    std::vector<Series> p;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (breaks_[i + 1] > breaks_[i]) {
        b.push_back(breaks_[i + 1]);
        p.push_back(std::move(pieces_[i]));
      }
    }
    breaks_ = std::move(b);
    pieces_ = std::move(p);
  }

  static PiecewiseSeries uniform(Series s) { return PiecewiseSeries({0.0, 1.0}, {std::move(s)}); }

  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<Series>& pieces() const noexcept { return pieces_; }
  std::size_t size() const noexcept { return pieces_.size(); }

  // Piece index containing u, right-continuous; u = 1 maps to the last piece.
  std::size_t locate(double u) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(idx, pieces_.size() - 1);
  }

  double operator()(double u) const { return pieces_[locate(u)](u); }

  PiecewiseSeries derivative() const {
    std::vector<Series> p;
    p.reserve(pieces_.size());
    for (const auto& s : pieces_) p.push_back(s.derivative());
    return {breaks_, std::move(p)};
  }

  PiecewiseSeries shifted(double k) const {
    std::vector<Series> p;
    p.reserve(pieces_.size());
    for (const auto& s : pieces_) p.push_back(s.shifted(k));
    return {breaks_, std::move(p)};
  }

  // Integral over [a, b] within [0, 1].
  double integrate(double a, double b) const {
    if (!(b > a)) return 0.0;
    double sum = 0.0;
    for (std::size_t i = locate(a); i < pieces_.size() && breaks_[i] < b; ++i) {
      const double lo = std::max(a, breaks_[i]);
      const double hi = std::min(b, breaks_[i + 1]);
      sum += pieces_[i].integrate(lo, hi);
    }
    return sum;
  }

  double integrate() const { return integrate(0.0, 1.0); }

  // Applies op piecewise on the common refinement of both partitions.
  template <class Op>
  static PiecewiseSeries combine(const PiecewiseSeries& a, const PiecewiseSeries& b, Op op) {
    std::vector<double> br;
    br.reserve(a.breaks_.size() + b.breaks_.size());
    std::merge(a.breaks_.begin(), a.breaks_.end(), b.breaks_.begin(), b.breaks_.end(),
               std::back_inserter(br));
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<Series> p;
    p.reserve(br.size() - 1);
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      while (ia + 1 < a.pieces_.size() && a.breaks_[ia + 1] <= br[i]) ++ia;
      while (ib + 1 < b.pieces_.size() && b.breaks_[ib + 1] <= br[i]) ++ib;
      p.push_back(op(a.pieces_[ia], b.pieces_[ib]));
    }
    return {std::move(br), std::move(p)};
  }

  friend PiecewiseSeries operator*(const PiecewiseSeries& a, const PiecewiseSeries& b) {
    return combine(a, b, [](const Series& x, const Series& y) { return x * y; });
  }

  static PiecewiseSeries linear_combination(double wa, const PiecewiseSeries& a, double wb,
                                            const PiecewiseSeries& b) {
    return combine(a, b, [wa, wb](const Series& x, const Series& y) {
      return x.scaled(wa) + y.scaled(wb);
    });
  }

 private:
  std::vector<double> breaks_;
  std::vector<Series> pieces_;
};

}  // namespace lslcop
