#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ohmic/specfun.hpp"
#include "support.hpp"

using namespace ohmic;
using ohmic::test::rel_err;

TEST(GammaFn, Factorials) {
  EXPECT_NEAR(gamma_fn(3.0), 2.0, 2e-15);
  EXPECT_LE(rel_err(gamma_fn(11.0), 3628800.0), 1e-13);
  EXPECT_LE(rel_err(gamma_fn(50.0), 6.082818640342675e62), 1e-12);
}

TEST(GammaFn, HalfIntegers) {
  EXPECT_LE(rel_err(gamma_fn(0.5), std::sqrt(std::numbers::pi)), 1e-13);
  EXPECT_LE(rel_err(gamma_fn(-0.5), -2.0 * std::sqrt(std::numbers::pi)), 1e-13);
  EXPECT_LE(rel_err(gamma_fn(-4.5), -0.0600196013005042464), 1e-12);
}

TEST(GammaFn, PolesRaise) {
  for (double x : {0.0, -1.0, -2.0, -5.0, -3.0 + 1e-13}) {
    EXPECT_THROW(gamma_fn(x), DomainError) << x;
  }
  EXPECT_NO_THROW(gamma_fn(-3.0 + 1e-6));
}

TEST(GammaFn, RecurrenceProperty) {
  ohmic::test::Sampler rng(101);
  int checked = 0;
  while (checked < 1000) {
    const double x = rng.uniform(-4.5, 20.0);
    const double nearest = std::round(x);
    if (nearest <= 1.0 && std::abs(x - nearest) < 1e-3) continue;
    EXPECT_LE(rel_err(gamma_fn(x + 1.0), x * gamma_fn(x)), 1e-10) << x;
    ++checked;
  }
}

TEST(LambertW0, Examples) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-14);
  EXPECT_NEAR(lambert_w0(-2.0 * std::exp(-2.0)), -0.406375739959960, 1e-13);
  EXPECT_NEAR(lambert_w0(-std::exp(-1.0)), -1.0, 1e-7);
}

TEST(LambertW0, ClampAndDomain) {
  EXPECT_NO_THROW(lambert_w0(-std::exp(-1.0) - 5e-15));
  EXPECT_THROW(lambert_w0(-0.4), DomainError);
}

TEST(LambertW0, ResidualProperty) {
  ohmic::test::Sampler rng(202);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-std::exp(-1.0), 10.0);
    const double w = lambert_w0(x);
    EXPECT_GE(w, -1.0);
    const double scale = std::max(std::abs(x), 1e-300);
    EXPECT_LE(std::abs(w * std::exp(w) - x) / scale, 1e-11) << x;
  }
}

TEST(CothStable, Examples) {
  EXPECT_NEAR(coth_stable(1.0), 1.3130352855, 1e-10);
  EXPECT_LE(rel_err(coth_stable(1e-9), 1e9), 1e-15);
  EXPECT_EQ(coth_stable(50.0), 1.0);
  EXPECT_THROW(coth_stable(0.0), DomainError);
  EXPECT_THROW(coth_stable(-1.0), DomainError);
}

TEST(CothStable, MatchesDirectFormula) {
  for (double x : {1e-5, 1e-3, 0.1, 0.7, 2.0, 5.0, 15.0}) {
    EXPECT_LE(rel_err(coth_stable(x), 1.0 / std::tanh(x)), 1e-12) << x;
  }
}

TEST(CothStable, GreaterThanOneAndDecreasing) {
  double prev = std::numeric_limits<double>::infinity();
  for (double x = 1e-8; x < 40.0; x *= 1.07) {
    const double c = coth_stable(x);
    EXPECT_GE(c, 1.0);
    if (x < 18.0) {
      EXPECT_GT(c, 1.0) << x;
    }
    EXPECT_LE(c, prev) << x;
    prev = c;
  }
}
