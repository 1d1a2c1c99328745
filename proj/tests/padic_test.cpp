#include "oracles.hpp"
#include "motint/padic/padic.hpp"

#include <gtest/gtest.h>

using namespace motint;
using motint::testing::ball_partial;
using motint::testing::load_model;

TEST(Volume, Examples) {
  auto B = load_model("ball");
  auto F = FiniteField::prime(3);
  EXPECT_EQ(cylinder_volume({B, 1, Condition::always(), Stability::smooth()}, F).value, 1);
  EXPECT_EQ(cylinder_volume({B, 2, parse_condition("ord(x) = 2", B.vars), Stability::smooth()}, F).value,
            Rational(2, 27));
  EXPECT_EQ(cylinder_volume({B, 2, Condition::never(), Stability::smooth()}, F).value, 0);
}

TEST(Volume, TotalMassIndependentOfLevel) {
  for (const auto* name : {"ball", "plane", "torus", "elliptic"}) {
    auto X = load_model(name);
    for (auto q : {3u, 5u}) {
      auto F = FiniteField::prime(q);
      auto v0 = cylinder_volume({X, 0, Condition::always(), Stability::smooth()}, F).value;
      for (unsigned n = 1; n <= 2; ++n)
        EXPECT_EQ(cylinder_volume({X, n, Condition::always(), Stability::smooth()}, F).value, v0) << name;
    }
  }
}

TEST(Volume, AdditiveAndMonotone) {
  auto P = load_model("plane");
  auto F = FiniteField::prime(3);
  auto vol = [&](const std::string& c) {
    return cylinder_volume({P, 2, parse_condition(c, P.vars), Stability::smooth()}, F).value;
  };
  EXPECT_EQ(vol("ord(x) = 1") + vol("!(ord(x) = 1)"), 1);
  EXPECT_LE(vol("ord(x) >= 1 & ord(y) >= 1"), vol("ord(x) >= 1"));
  EXPECT_EQ(vol("ord(x) >= 1 | ord(y) >= 1"), vol("ord(x) >= 1") + vol("ord(y) >= 1") - vol("ord(x) >= 1 & ord(y) >= 1"));
}

TEST(Volume, RequiresSmoothModel) {
  auto C = AffineModel::hypersurfaces("cusp", {"x", "y"}, {"y^2 - x^3"}, false);
  EXPECT_THROW(cylinder_volume({C, 1, Condition::always(), Stability::declared()}, FiniteField::prime(3)), ModelError);
}

TEST(PadicIntegral, BallGeometricSeries) {
  auto B = load_model("ball");
  for (auto q : {2u, 3u, 5u})
    for (unsigned M = 0; M <= 3; ++M) {
      auto r = padic_integral(B, B.parse("x"), FiniteField::prime(q), M);
      EXPECT_EQ(r.partial, ball_partial(q, M));
      EXPECT_EQ(r.tail_bound, qpow(q, -2 * static_cast<long>(M + 1)));
      Rational closed(q, q + 1);
      EXPECT_GE(closed, r.partial);
      EXPECT_LE(closed - r.partial, r.tail_bound);
    }
}

TEST(PadicIntegral, TorusAndConstant) {
  auto T = load_model("torus");
  auto r = padic_integral(T, T.parse("x"), FiniteField::prime(3), 2);
  EXPECT_EQ(r.partial, Rational(2, 3));
  EXPECT_TRUE(r.exact);
  auto B = load_model("ball");
  auto one = padic_integral(B, B.parse("1"), FiniteField::prime(5), 2);
  EXPECT_EQ(one.partial, 1);
  EXPECT_TRUE(one.exact);
}

TEST(PadicIntegral, ExtensionFieldUsesSeries) {
  auto B = load_model("ball");
  EXPECT_EQ(local_ring_mode(FiniteField::of_order(4)), JetMode::Series);
  EXPECT_EQ(local_ring_mode(FiniteField::prime(3)), JetMode::Mixed);
  EXPECT_EQ(padic_integral(B, B.parse("x"), FiniteField::of_order(4), 2).partial, ball_partial(4, 2));
}

TEST(Compare, Ball) {
  auto B = load_model("ball");
  auto r = compare_motivic(B, B.parse("x"), FiniteField::prime(3), 3);
  EXPECT_TRUE(r.agree());
  EXPECT_TRUE(r.symbolic);
  EXPECT_EQ(r.padic_partial, Rational(1640, 2187));
  EXPECT_EQ(r.padic_tail, Rational(1, 6561));
}

TEST(Compare, TorusAndConstant) {
  auto T = load_model("torus");
  for (auto [q, v] : std::vector<std::pair<unsigned, Rational>>{{3, Rational(2, 3)}, {5, Rational(4, 5)}}) {
    auto r = compare_motivic(T, T.parse("x"), FiniteField::prime(q), 2);
    EXPECT_TRUE(r.agree());
    EXPECT_EQ(r.padic_partial, v);
  }
  for (const auto* name : {"ball", "plane", "torus", "elliptic"}) {
    auto X = load_model(name);
    auto F = FiniteField::prime(5);
    auto r = compare_motivic(X, X.parse("1"), F, 1);
    EXPECT_TRUE(r.agree()) << name;
    Rational expect = Rational(count_points(X, F)) * qpow(5, -X.rel_dim);
    EXPECT_EQ(r.padic_partial, expect) << name;
  }
}

TEST(Compare, NonSymbolicFallback) {
  auto E = load_model("elliptic");
  auto r = compare_motivic(E, E.parse("y"), FiniteField::prime(5), 2);
  EXPECT_TRUE(r.agree());
  EXPECT_FALSE(r.symbolic);
}
