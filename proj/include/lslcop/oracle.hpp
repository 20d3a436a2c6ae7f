#pragma once

// Brute-force reference computations: grid quadratures of the copula surface
// and kernel, kernel-composition star products and checkerboard matrices.
// Deliberately independent of the exact series integrals.

#include "lslcop/copula.hpp"
#include "lslcop/diagonal.hpp"

#include <algorithm>
#include <vector>

namespace lslcop::oracle {

namespace detail {

// Uniform partition of [0,1] into n cells, refined at the given extra points.
inline std::vector<double> partition(std::size_t n, std::vector<double> extra) {
  std::vector<double> p(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p[i] = static_cast<double>(i) / static_cast<double>(n);
  for (double e : extra)
    if (e > 0.0 && e < 1.0) p.push_back(e);
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

}  // namespace detail

// 12 int C - 3, midpoint rule on n x n cells.
inline double rho_quadrature(const Diagonal& d, std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * h;
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += surface(d, x, (static_cast<double>(j) + 0.5) * h);
    sum += row;
  }
  return 12.0 * sum * h * h - 3.0;
}

// 1 - 4 int K(x,[0,y]) K(y,[0,x]). Off-diagonal cells use the midpoint rule;
// cells on the diagonal, where the kernel jumps, are split into two triangles
// evaluated at their centroids.
inline double tau_quadrature(const Diagonal& d, std::size_t n) {
  const auto p = detail::partition(n, d.breakpoints());
  const std::size_t m = p.size() - 1;
  std::vector<double> mid(m), len(m);
  for (std::size_t i = 0; i < m; ++i) {
    mid[i] = 0.5 * (p[i] + p[i + 1]);
    len[i] = p[i + 1] - p[i];
  }
  auto f = [&d](double x, double y) { return kernel_cdf(d, x, y) * kernel_cdf(d, y, x); };
  double off = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) row += f(mid[i], mid[j]) * len[j];
    off += row * len[i];
    const double a = p[i], h = len[i];
    diag += 0.5 * h * h * (f(a + 2.0 * h / 3.0, a + h / 3.0) + f(a + h / 3.0, a + 2.0 * h / 3.0));
  }
  return 1.0 - 4.0 * (2.0 * off + diag);
}

// (S_1 * S_2)(x,y) = int K_1(s,[0,x]) K_2(s,[0,y]) ds, midpoint rule on n
// cells refined at x, y and both diagonals' breakpoints.
inline double star_kernel_quadrature(const Diagonal& d1, const Diagonal& d2, double x, double y,
                                     std::size_t n) {
  auto extra = d1.breakpoints();
  const auto b2 = d2.breakpoints();
  extra.insert(extra.end(), b2.begin(), b2.end());
  extra.push_back(x);
  extra.push_back(y);
  const auto p = detail::partition(n, std::move(extra));
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double s = 0.5 * (p[i] + p[i + 1]);
    sum += kernel_cdf(d1, s, x) * kernel_cdf(d2, s, y) * (p[i + 1] - p[i]);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Checkerboards

struct Checkerboard {
  std::size_t n = 0;
  std::vector<double> mass;  // row-major n x n

  double operator()(std::size_t i, std::size_t j) const { return mass[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return mass[i * n + j]; }

  // C(i/n, j/n) as the cumulative cell mass.
  std::vector<double> cumulative() const {
    std::vector<double> c((n + 1) * (n + 1), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        c[(i + 1) * (n + 1) + j + 1] = mass[i * n + j] + c[i * (n + 1) + j + 1] +
                                       c[(i + 1) * (n + 1) + j] - c[i * (n + 1) + j];
    return c;
  }

  // Diagonal C(i/n, i/n), i = 0..n.
  std::vector<double> diagonal() const {
    const auto c = cumulative();
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out[i] = c[i * (n + 1) + i];
    return out;
  }
};

// Rectangle masses of S_delta over the n x n grid.
inline Checkerboard checkerboard(const Diagonal& d, std::size_t n) {
  Checkerboard cb{n, std::vector<double>(n * n)};
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n);
  std::vector<double> c((n + 1) * (n + 1));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) c[i * (n + 1) + j] = surface(d, g[i], g[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cb(i, j) = c[(i + 1) * (n + 1) + j + 1] - c[i * (n + 1) + j + 1] - c[(i + 1) * (n + 1) + j] +
                 c[i * (n + 1) + j];
  return cb;
}

// Composition n A B of two checkerboards of the same resolution.
inline Checkerboard checkerboard_compose(const Checkerboard& a, const Checkerboard& b) {
  if (a.n != b.n) throw ResolutionMismatch("checkerboard_compose: resolutions differ");
  const std::size_t n = a.n;
  Checkerboard out{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  for (auto& v : out.mass) v *= static_cast<double>(n);
  return out;
}

}  // namespace lslcop::oracle
