#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace lslcop;
using testing_support::random_diagonal;
using testing_support::random_points;

TEST(Surface, Examples) {
  EXPECT_DOUBLE_EQ(surface(lower(0.5), 0.25, 0.75), 0.1875);
  EXPECT_DOUBLE_EQ(surface(upper(0.5), 0.3, 0.2), 0.3 * 0.2 / 0.5);
  const auto d = random_diagonal(1);
  for (double x : random_points(20, 1)) EXPECT_DOUBLE_EQ(surface(d, x, 1.0), x);
}

TEST(Surface, MarginsSymmetryAndFrechetBounds) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto d = random_diagonal(i);
    const auto g = uniform_grid(65);
    for (double x : g) {
      EXPECT_EQ(surface(d, x, 1.0), x);
      EXPECT_EQ(surface(d, 1.0, x), x);
      EXPECT_EQ(surface(d, x, 0.0), 0.0);
      for (double y : g) {
        const double s = surface(d, x, y);
        EXPECT_EQ(s, surface(d, y, x));
        EXPECT_GE(s, x * y - 1e-15);
        EXPECT_LE(s, std::min(x, y) + 1e-15);
      }
    }
  }
}

TEST(Surface, TwoIncreasing) {
  const std::size_t n = 257;
  const auto g = uniform_grid(n);
  for (const auto& d : {random_diagonal(3), random_diagonal(4), lower(0.3), upper(0.6), mo_star(0.7, 0.8)}) {
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = surface(d, g[i], g[j]);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j)
        ASSERT_GE(c[(i + 1) * n + j + 1] - c[i * n + j + 1] - c[(i + 1) * n + j] + c[i * n + j], -1e-12);
  }
}

TEST(Kernel, Examples) {
  EXPECT_DOUBLE_EQ(kernel_cdf(lower(0.5), 0.25, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(kernel_cdf(lower(0.5), 0.25, 0.4), 0.5);
  EXPECT_DOUBLE_EQ(kernel_cdf(upper(0.5), 0.3, 0.4), 0.8);
  EXPECT_THROW(kernel_cdf(lower(0.5), 0.0, 0.4), DomainError);
  EXPECT_THROW(kernel_cdf(lower(0.5), 1.0, 0.4), DomainError);
}

TEST(Kernel, DisintegratesTheSurface) {
  const auto pts = random_points(200, 5);
  for (std::size_t k = 0; k < 100; ++k) {
    const auto d = random_diagonal(k);
    const double x = 0.02 + 0.96 * pts[2 * k], y = pts[2 * k + 1];
    auto extra = d.breakpoints();
    extra.push_back(y);
    std::vector<double> p{0.0};
    for (int i = 1; i <= 4000; ++i) p.push_back(x * i / 4000.0);
    for (double e : extra)
      if (e > 0.0 && e < x) p.push_back(e);
    std::sort(p.begin(), p.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (p[i + 1] > p[i]) sum += kernel_cdf(d, 0.5 * (p[i] + p[i + 1]), y) * (p[i + 1] - p[i]);
    EXPECT_NEAR(sum, surface(d, x, y), 1e-6) << k;
  }
}

TEST(ConditionalLaw, Examples) {
  const auto pi = conditional_law(independence(), 0.4);
  EXPECT_DOUBLE_EQ(pi.cdf_left_slope(), 1.0);
  EXPECT_NEAR(pi.atom_at_x(), 0.0, 1e-15);
  const auto m = conditional_law(comonotone(), 0.4);
  EXPECT_NEAR(m.cdf_left_slope(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.atom_at_x(), 1.0);
  const auto u = conditional_law(upper(0.5), 0.25);
  EXPECT_DOUBLE_EQ(u.cdf_left_slope(), 2.0);
  EXPECT_DOUBLE_EQ(u.atom_at_x(), 0.0);
  EXPECT_THROW(conditional_law(lower(0.5), 1.0), DomainError);
}

TEST(ConditionalLaw, TotalMassAndAtom) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto d = random_diagonal(i);
    for (double x : random_points(20, i)) {
      const auto c = conditional_law(d, x);
      EXPECT_EQ(c.cdf(1.0), 1.0);
      EXPECT_NEAR(c.cdf(x) - c.cdf_left_slope() * x, c.atom_at_x(), 1e-14);
      EXPECT_GE(c.atom_at_x(), -1e-14);
      EXPECT_LE(c.quantile(c.cdf(x)), x);
    }
  }
}

TEST(SingularMass, Examples) {
  EXPECT_NEAR(singular_mass(lower(0.5)), 0.25, 1e-15);
  EXPECT_NEAR(singular_mass(upper(0.5)), 0.5, 1e-15);
  EXPECT_NEAR(singular_mass(independence()), 0.0, 1e-15);
  EXPECT_NEAR(singular_mass(comonotone()), 1.0, 1e-15);
}

TEST(SingularMass, MatchesGridQuadrature) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto d = random_diagonal(i);
    EXPECT_DOUBLE_EQ(singular_mass(d) + absolutely_continuous_mass(d), 1.0);
    const std::size_t n = 100000;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += d.phi((k + 0.5) / n);
    EXPECT_NEAR(singular_mass(d), 2.0 * sum / n - 1.0, 1e-8) << i;
  }
}

TEST(Sample, ComonotonePointsOnDiagonal) {
  for (const auto& p : sample(comonotone(), 1000, 3).points) EXPECT_EQ(p.u, p.v);
}

TEST(Sample, IndependenceSpearman) {
  const auto b = sample(independence(), 100000, 11);
  EXPECT_NEAR(stats::spearman_rho(b.points), 0.0, 0.02);
}

TEST(Sample, UpperFamilyKendallAndMargins) {
  const auto b = sample(upper(0.5), 100000, 12);
  EXPECT_NEAR(stats::kendall_tau(b.points), 0.75, 0.01);
  std::vector<double> u, v;
  for (const auto& p : b.points) {
    u.push_back(p.u);
    v.push_back(p.v);
  }
  const double crit = 1.63 / std::sqrt(100000.0);
  EXPECT_LT(stats::ks_uniform(u), crit);
  EXPECT_LT(stats::ks_uniform(v), crit);
}

TEST(Sample, Deterministic) {
  const auto d = random_diagonal(9);
  const auto a = sample(d, 500, 77), b = sample(d, 500, 77), c = sample(d, 500, 78);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, c.points);
  std::ostringstream sa, sb;
  write_sample_csv(sa, a);
  write_sample_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, 4), "u,v\n");
}

TEST(Stats, KendallOnKnownSamples) {
  std::vector<SamplePoint> inc, dec;
  for (int i = 0; i < 100; ++i) {
    inc.push_back({i / 100.0, i / 100.0});
    dec.push_back({i / 100.0, 1.0 - i / 100.0});
  }
  EXPECT_DOUBLE_EQ(stats::kendall_tau(inc), 1.0);
  EXPECT_DOUBLE_EQ(stats::kendall_tau(dec), -1.0);
  EXPECT_NEAR(stats::spearman_rho(dec), -1.0, 1e-12);
}

TEST(Dependence, PqdAndLtdAlwaysHold) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto d = random_diagonal(i);
    EXPECT_TRUE(check_pqd(d, 129).pass);
    EXPECT_TRUE(check_ltd(d, 129).pass);
  }
  EXPECT_TRUE(check_pqd(si_counterexample()).pass);
  EXPECT_TRUE(check_ltd(si_counterexample()).pass);
}

TEST(Dependence, CounterexampleIsNotStochasticallyIncreasing) {
  const auto p = si_profile(si_counterexample(), 0.36);
  EXPECT_FALSE(p.stochastically_increasing());
  EXPECT_NEAR(p.increasing.front().second, 0.375, 1e-12);
  EXPECT_TRUE(si_profile(independence(), 0.36).stochastically_increasing());
  EXPECT_TRUE(si_profile(upper(0.5), 0.3).stochastically_increasing());
  std::ostringstream os;
  write_si_csv(os, p);
  EXPECT_EQ(os.str().substr(0, 4), "x,K\n");
}
