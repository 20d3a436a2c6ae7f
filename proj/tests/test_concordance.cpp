#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace lslcop;
using testing_support::random_diagonal;

TEST(Tau, Examples) {
  EXPECT_NEAR(tau(lower(0.5)), 0.0625, 1e-15);
  EXPECT_NEAR(tau(independence()), 0.0, 1e-15);
  EXPECT_NEAR(tau(comonotone()), 1.0, 1e-15);
  EXPECT_NEAR(tau(upper(0.5)), 0.75, 1e-15);
  EXPECT_NEAR(tau(power(1.5)), 1.0 / 3.0, 1e-15);
}

TEST(Rho, Examples) {
  EXPECT_NEAR(rho(upper(0.5)), 0.875, 1e-15);
  EXPECT_NEAR(rho(independence()), 0.0, 1e-15);
  EXPECT_NEAR(rho(lower(0.75)), 0.31640625, 1e-15);
}

TEST(Rho, PwlMatchesCubicAntiderivative) {
  // 12 int delta(x) x dx - 3 with delta linear per segment
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto d = random_diagonal(i);
    const auto& k = d.as<Diagonal::Pwl>()->knots;
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < k.size(); ++j) {
      const double m = (k[j + 1].y - k[j].y) / (k[j + 1].x - k[j].x), c = k[j].y - m * k[j].x;
      auto F = [&](double x) { return m * x * x * x / 3.0 + c * x * x / 2.0; };
      s += F(k[j + 1].x) - F(k[j].x);
    }
    EXPECT_NEAR(rho(d), 12.0 * s - 3.0, 1e-13);
  }
}

TEST(Appendix, Examples) {
  EXPECT_NEAR(gamma(independence()), 0.0, 1e-15);
  EXPECT_NEAR(gamma(comonotone()), 1.0, 1e-15);
  EXPECT_NEAR(footrule(lower(0.5)), 0.125, 1e-15);
  EXPECT_NEAR(footrule(comonotone()), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(blomqvist(upper(0.5)), 1.0);
  EXPECT_DOUBLE_EQ(blomqvist(independence()), 0.0);
}

TEST(Appendix, GammaMatchesQuadratureOfDefinition) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto d = random_diagonal(i);
    const std::size_t n = 200000;
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = 0.5 * (k + 0.5) / n;
      a += d(x) + x * d(1.0 - x) / (1.0 - x);
      const double z = 0.5 + x;
      b += d(z) / z;
    }
    EXPECT_NEAR(gamma(d), 4.0 * (a + b) * 0.5 / n - 2.0, 1e-8);
  }
}

TEST(Report, FlagsAndJsonFields) {
  auto r = report(lower(0.4));
  EXPECT_NEAR(r.tau, r.rho, 1e-15);
  EXPECT_TRUE(r.lower_bound_ok);
  r = report(upper(0.6));
  EXPECT_NEAR(r.rho, upper_boundary(r.tau), 1e-15);
  r = report(comonotone());
  EXPECT_NEAR(r.tau, 1.0, 1e-15);
  EXPECT_NEAR(r.rho, 1.0, 1e-15);
  EXPECT_TRUE(r.lower_bound_ok && r.upper_conjecture_ok);
  const auto j = to_json(report(lower(0.5)));
  for (const char* k : {"tau", "rho", "gamma", "footrule", "blomqvist", "sing", "lower_bound_ok", "upper_conjecture_ok"})
    EXPECT_TRUE(j.contains(k)) << k;
}

TEST(Region, FamiliesLieOnBoundaries) {
  for (const auto& p : region_scan(21, 0, kLower)) EXPECT_NEAR(p.tau, p.rho, 1e-14);
  for (const auto& p : region_scan(21, 0, kUpper)) EXPECT_NEAR(p.rho, upper_boundary(p.tau), 1e-12);
}

TEST(Region, RandomScanSortedDeterministicAndInside) {
  const auto a = region_scan(500, 3, kRandom | kMix);
  const auto b = region_scan(500, 3, kRandom | kMix);
  ASSERT_EQ(a.size(), 1000u);
  std::ostringstream sa, sb;
  write_region_csv(sa, a);
  write_region_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, 15), "tau,rho,source\n");
  for (std::size_t i = 0; i + 1 < a.size(); ++i) EXPECT_LE(a[i].tau, a[i + 1].tau);
  const auto s = summarize(a);
  EXPECT_EQ(s.lower_violations, 0u);
  for (const auto& p : a) {
    EXPECT_GE(p.tau, -1e-15);
    EXPECT_LE(p.rho, 1.0 + 1e-15);
  }
}

TEST(Bounds, TauBelowRho) {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto d = random_diagonal(i);
    ASSERT_LE(tau(d), rho(d) + 1e-15) << i;
  }
}

TEST(Bounds, EqualityOnlyNearLowerFamily) {
  const auto fit = fit_lower_family(lower(0.37));
  EXPECT_NEAR(fit.a, 0.37, 1e-9);
  EXPECT_LT(fit.residual, 1e-9);
  EXPECT_GT(fit_lower_family(upper(0.5)).residual, 1e-2);
}

TEST(Mixing, RhoIsAffine) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto d1 = random_diagonal(i), d2 = random_diagonal(i, 1);
    for (double w : {0.25, 0.5, 0.75})
      EXPECT_NEAR(rho(mix(d1, d2, w)), w * rho(d1) + (1 - w) * rho(d2), 1e-12);
  }
}

TEST(Mixing, ConvexityGap) {
  EXPECT_NEAR(tau_convexity_gap(comonotone(), independence(), 0.5),
              0.5 - tau(mix(comonotone(), independence(), 0.5)), 1e-15);
  EXPECT_GT(tau_convexity_gap(comonotone(), independence(), 0.5), 0.0);
  EXPECT_GT(tau_convexity_gap(lower(0.2), lower(0.8), 0.5), 0.0);
  const auto d = random_diagonal(4);
  EXPECT_THROW(tau_convexity_gap(d, d, 0.5), DegenerateInput);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto d1 = random_diagonal(i), d2 = random_diagonal(i, 1);
    if (sup_distance(d1, d2) <= 1e-12) continue;
    const double direct = 0.3 * tau(d1) + 0.7 * tau(d2) - tau(mix(d1, d2, 0.3));
    EXPECT_NEAR(tau_convexity_gap(d1, d2, 0.3), direct, 1e-12);
  }
}

TEST(Midpoint, LowerPairUsesLowerFamily) {
  const auto m = midpoint_construct(lower(0.3), lower(0.7));
  const double target = 0.5 * (std::pow(0.3, 4) + std::pow(0.7, 4));
  EXPECT_NEAR(tau(m), target, 1e-12);
  EXPECT_NEAR(rho(m), target, 1e-12);
}

TEST(Midpoint, EqualRhoBranch) {
  // u_a and a mix of it with l_b chosen to match rho
  const auto d1 = upper(0.5);
  const auto d2 = mix(comonotone(), lower(0.0), 0.875);
  ASSERT_NEAR(rho(d1), rho(d2), 1e-15);
  const auto m = midpoint_construct(d1, d2);
  EXPECT_NEAR(tau(m), 0.5 * (tau(d1) + tau(d2)), 1e-4);
  EXPECT_NEAR(rho(m), rho(d1), 1e-12);
}

TEST(Midpoint, SearchBranch) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto d1 = random_diagonal(i), d2 = random_diagonal(i, 5);
    const auto m = midpoint_construct(d1, d2);
    EXPECT_NEAR(tau(m), 0.5 * (tau(d1) + tau(d2)), 1e-4);
    EXPECT_NEAR(rho(m), 0.5 * (rho(d1) + rho(d2)), 1e-4);
    EXPECT_TRUE(validate_dlsl(m, 1e-12).is_member);
  }
}

TEST(Ranges, AllMeasuresInUnitInterval) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto r = report(random_diagonal(i));
    for (double v : {r.tau, r.rho, r.gamma, r.footrule, r.blomqvist, r.sing}) {
      EXPECT_GE(v, -1e-12);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
  }
}
