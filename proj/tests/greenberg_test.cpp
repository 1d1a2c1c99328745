#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace motint;
using motint::testing::brute_mixed_points;
using motint::testing::brute_series_jets;
using motint::testing::load_model;

namespace {

const std::vector<std::string> xy{"x", "y"};

AffineModel A(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i));
  return AffineModel::affine_space("A" + std::to_string(n), v);
}
AffineModel cusp() { return AffineModel::hypersurfaces("cusp", xy, {"y^2 - x^3"}, false); }
AffineModel torus() { return AffineModel::hypersurfaces("torus", xy, {"x*y - 1"}, true); }

std::set<std::vector<Series>> enumerated(const AffineModel& X, const FiniteField& F, unsigned n,
                                         JetMode mode = JetMode::Series) {
  std::set<std::vector<Series>> out;
  std::vector<JetPoint> all = JetEnumerator(X, mode, F, n).collect();
  for (const auto& j : all) EXPECT_TRUE(out.insert(j.digits).second) << "duplicate " << j.to_string();
  return out;
}

JetPoint jet(const AffineModel& X, const FiniteField& F, std::vector<Series> d) {
  unsigned n = static_cast<unsigned>(d[0].size() - 1);
  return make_jet(X, JetMode::Series, F, n, std::move(d));
}

}  // namespace

TEST(Jets, AffinePlaneCount) { EXPECT_EQ(count_jets(A(2), JetMode::Series, FiniteField::prime(2), 1), 16); }

TEST(Jets, TorusCount) { EXPECT_EQ(count_jets(torus(), JetMode::Series, FiniteField::prime(3), 2), 18); }

TEST(Jets, CuspCount) { EXPECT_EQ(count_jets(cusp(), JetMode::Series, FiniteField::prime(5), 1), 45); }

TEST(Jets, MixedQuadratic) {
  auto X = AffineModel::hypersurfaces("i", {"x"}, {"x^2 + 1"}, false);
  auto jets = JetEnumerator(X, JetMode::Mixed, FiniteField::prime(5), 1).collect();
  ASSERT_EQ(jets.size(), 2u);
  std::set<Integer> residues{jets[0].residue(0), jets[1].residue(0)};
  EXPECT_EQ(residues, (std::set<Integer>{7, 18}));
  EXPECT_EQ(brute_mixed_points(X, 5, 1).size(), 2u);
}

TEST(Jets, EnumerationMatchesBruteForceSeries) {
  struct Case {
    AffineModel X;
    unsigned q, n;
  };
  std::vector<Case> cases{{A(1), 3, 2},     {A(2), 2, 1},    {torus(), 3, 2}, {torus(), 4, 1}, {cusp(), 5, 1},
                          {cusp(), 3, 2},   {cusp(), 2, 3},  {load_model("elliptic"), 5, 1},
                          {AffineModel::hypersurfaces("node", xy, {"y^2 - x^2 - x^3"}, false), 3, 2},
                          {AffineModel::hypersurfaces("pt", xy, {"x", "y"}, false), 3, 2}};
  for (const auto& c : cases) {
    auto F = FiniteField::of_order(c.q);
    EXPECT_EQ(enumerated(c.X, F, c.n), brute_series_jets(c.X, F, c.n)) << c.X.name << " q=" << c.q;
  }
}

TEST(Jets, EnumerationMatchesBruteForceMixed) {
  struct Case {
    AffineModel X;
    unsigned p, n;
  };
  std::vector<Case> cases{{torus(), 3, 2}, {cusp(), 2, 3}, {cusp(), 3, 2}, {load_model("elliptic"), 5, 1},
                          {AffineModel::hypersurfaces("i", {"x"}, {"x^2 + 1"}, false), 5, 3},
                          {AffineModel::hypersurfaces("s", {"x"}, {"x^2 - 2"}, false), 2, 4}};
  for (const auto& c : cases) {
    std::set<std::vector<Integer>> got;
    for (const auto& j : JetEnumerator(c.X, JetMode::Mixed, FiniteField::prime(c.p), c.n).collect()) {
      std::vector<Integer> r;
      for (std::size_t v = 0; v < j.nvars(); ++v) r.push_back(j.residue(v));
      got.insert(r);
    }
    EXPECT_EQ(got, brute_mixed_points(c.X, c.p, c.n)) << c.X.name << " p=" << c.p;
  }
}

TEST(Jets, WorkerCountDoesNotChangeResults) {
  auto X = load_model("elliptic");
  auto F = FiniteField::prime(5);
  EnumOptions one, three;
  three.workers = 3;
  EXPECT_EQ(count_jets(X, JetMode::Series, F, 3, one), count_jets(X, JetMode::Series, F, 3, three));
  EXPECT_EQ(JetEnumerator(cusp(), JetMode::Series, F, 2, one).collect(),
            JetEnumerator(cusp(), JetMode::Series, F, 2, three).collect());
}

TEST(Jets, BudgetIsEnforced) {
  EnumOptions tight;
  tight.budget = Integer(100);
  EXPECT_THROW(count_jets(A(2), JetMode::Series, FiniteField::prime(3), 2, tight), BudgetExceeded);
  try {
    count_jets(A(2), JetMode::Series, FiniteField::prime(3), 2, tight);
  } catch (const BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("729"), std::string::npos) << e.what();
  }
  setenv("GREENBERG_BUDGET", "50", 1);
  EXPECT_EQ(default_budget(), 50);
  EXPECT_THROW(count_jets(A(2), JetMode::Series, FiniteField::prime(2), 2), BudgetExceeded);
  unsetenv("GREENBERG_BUDGET");
  EXPECT_EQ(default_budget(), Integer(100000000));
}

TEST(Jets, MixedModeRejectsExtensionFields) {
  EXPECT_THROW(count_jets(torus(), JetMode::Mixed, FiniteField::of_order(4), 1), MathError);
}

TEST(Jets, MixedAndSeriesAgreeAtLevelZero) {
  for (const auto& X : {torus(), cusp(), load_model("elliptic")})
    for (auto p : {2u, 3u, 5u, 7u})
      EXPECT_EQ(count_jets(X, JetMode::Series, FiniteField::prime(p), 0),
                count_jets(X, JetMode::Mixed, FiniteField::prime(p), 0));
}

TEST(Truncate, Examples) {
  auto F = FiniteField::prime(3);
  auto j = jet(A(2), F, {{0, 1, 1}, {2, 0, 1}});
  EXPECT_EQ(truncate(j, 2), j);
  auto t = truncate(j, 1);
  EXPECT_EQ(t.digits, (std::vector<Series>{{0, 1}, {2, 0}}));
  EXPECT_THROW(truncate(j, 3), MathError);
  EXPECT_THROW(jet(cusp(), FiniteField::prime(5), {{0, 1, 0, 0}, {0, 1, 0, 0}}), ModelError);
}

TEST(Truncate, CompatibilityAndSmoothFibres) {
  for (const auto& X : {torus(), cusp(), load_model("elliptic")}) {
    auto F = FiniteField::prime(5);
    for (unsigned n = 1; n <= 2; ++n) {
      auto lower = enumerated(X, F, n - 1);
      std::map<std::vector<Series>, int> fibres;
      for (const auto& j : JetEnumerator(X, JetMode::Series, F, n).collect()) {
        auto t = truncate(j, n - 1);
        EXPECT_TRUE(lower.count(t.digits));
        ++fibres[t.digits];
      }
      if (!X.smooth) continue;
      EXPECT_EQ(fibres.size(), lower.size());
      for (const auto& [base, size] : fibres) EXPECT_EQ(size, 5);
    }
  }
}

TEST(Fibration, Examples) {
  auto r1 = fibration_check(A(1), 0, 2, FiniteField::prime(3));
  EXPECT_TRUE(r1.holds);
  EXPECT_EQ(r1.lower, 3);
  EXPECT_EQ(r1.upper, 27);
  auto r2 = fibration_check(torus(), 0, 1, FiniteField::prime(3));
  EXPECT_TRUE(r2.holds);
  EXPECT_EQ(r2.lower, 2);
  EXPECT_EQ(r2.upper, 6);
  auto r3 = fibration_check(load_model("elliptic"), 1, 1, FiniteField::prime(5));
  EXPECT_TRUE(r3.holds);
  EXPECT_EQ(r3.upper, r3.lower * 5);
  EXPECT_THROW(fibration_check(cusp(), 0, 1, FiniteField::prime(3)), ModelError);
}

TEST(Lift, SmoothJetsLift) {
  auto F = FiniteField::prime(3);
  for (const auto& j : JetEnumerator(torus(), JetMode::Series, F, 2).collect()) {
    auto v = lift_jet(torus(), j, 1);
    EXPECT_EQ(v.kind, LiftVerdict::Kind::Yes) << j.to_string();
  }
}

TEST(Lift, CuspObstruction) {
  auto F = FiniteField::prime(5);
  auto v = lift_jet(cusp(), jet(cusp(), F, {{0, 1}, {0, 0}}), 2);
  EXPECT_EQ(v.kind, LiftVerdict::Kind::No);
  EXPECT_EQ(v.level, 3u);
  EXPECT_EQ(v.to_string(), "no (3)");
}

TEST(Lift, ConstantArcAtOrigin) {
  auto F = FiniteField::prime(5);
  auto v = lift_jet(cusp(), jet(cusp(), F, {{0, 0}, {0, 0}}), 1);
  EXPECT_EQ(v.kind, LiftVerdict::Kind::Yes);
  EXPECT_TRUE(v.certificate->exact_arc);
}

TEST(Lift, YesCertificatesAreGenuineLifts) {
  auto F = FiniteField::prime(3);
  for (const auto& j : JetEnumerator(cusp(), JetMode::Series, F, 2).collect()) {
    auto v = lift_jet(cusp(), j, 3);
    if (v.kind != LiftVerdict::Kind::Yes || v.certificate->exact_arc) continue;
    const auto& c = *v.certificate;
    EXPECT_EQ(truncate(c.lift, 2), j);
    EXPECT_GE(c.level, 2 * c.minor_order);
    EXPECT_NO_THROW(check_jet(cusp(), c.lift));
  }
}

TEST(Image, Examples) {
  auto r1 = image_count(torus(), JetMode::Series, FiniteField::prime(3), 2, 1);
  EXPECT_EQ(r1.to_string(), "[18, 18]");
  auto r2 = image_count(A(2), JetMode::Series, FiniteField::prime(2), 1, 1);
  EXPECT_EQ(r2.to_string(), "[16, 16]");
  auto r3 = image_count(cusp(), JetMode::Series, FiniteField::prime(5), 1, 2);
  EXPECT_EQ(r3.to_string(), "[21, 21]");
}

TEST(Image, CuspMatchesParametrization) {
  // every arc on y^2 = x^3 is (phi^2, phi^3)
  for (auto [p, n, depth] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{5, 1, 2}, {7, 1, 2}, {5, 2, 4}}) {
    auto F = FiniteField::prime(p);
    TruncatedSeries<FiniteField> R(F, n);
    std::set<std::vector<Series>> images;
    motint::testing::for_each_tuple(n + 1, p, [&](const std::vector<std::uint64_t>& t) {
      Series phi(t.begin(), t.end());
      auto sq = R.mul(phi, phi);
      images.insert({sq, R.mul(sq, phi)});
    });
    auto r = image_count(cusp(), JetMode::Series, F, n, depth);
    EXPECT_EQ(r.lower, r.upper) << "p=" << p << " n=" << n;
    EXPECT_EQ(r.lower, Integer(images.size())) << "p=" << p << " n=" << n;
    if (n < 2) continue;
    // y^2 - x^3 only sees the square class of a in (a t^2, 0) at t^6
    auto shallow = image_count(cusp(), JetMode::Series, F, n, 3);
    EXPECT_LT(shallow.lower, Integer(images.size()));
    EXPECT_GT(shallow.upper, Integer(images.size()));
  }
}

TEST(Image, DimensionBound) {
  for (auto q : {3u, 5u}) {
    auto F = FiniteField::prime(q);
    auto c0 = count_jets(cusp(), JetMode::Series, F, 0);
    for (unsigned n = 1; n <= 2; ++n)
      EXPECT_LE(image_count(cusp(), JetMode::Series, F, n, 2).upper, c0 * ipow(Integer(q), n + 1));
  }
}

TEST(Order, Examples) {
  auto F = FiniteField::prime(3);
  auto x = parse_int_poly("x", {"x"});
  EXPECT_EQ(ord_function(x, jet(A(1), F, {{0, 1, 1}})).value, 1);
  auto z = ord_function(x, jet(A(1), F, {{0, 0, 0, 0, 0}}));
  EXPECT_TRUE(z.at_least);
  EXPECT_EQ(z.value, 5);
  EXPECT_EQ(z.to_string(), ">= 5");
  auto f = parse_int_poly("y^2 - x^3", xy);
  auto amb = make_jet(AffineModel::affine_space("A2", xy), JetMode::Series, FiniteField::prime(5), 3,
                      {{0, 1, 0, 0}, {0, 1, 0, 0}});
  EXPECT_EQ(ord_function(f, amb).value, 2);
}

TEST(Order, JacobianExamples) {
  auto lib = motint::testing::load("blowup.model");
  const auto& h = lib.morphisms.at("blowup");
  auto F = FiniteField::prime(3);
  auto j1 = make_jet(h.source, JetMode::Series, F, 3, {{0, 1, 0, 0}, {1, 0, 0, 0}});
  EXPECT_EQ(ord_jacobian(h, j1).value, 1);
  auto j2 = make_jet(h.source, JetMode::Series, F, 3, {{0, 0, 1, 0}, {0, 1, 0, 0}});
  EXPECT_EQ(ord_jacobian(h, j2).value, 2);
  auto id = ModelMorphism::identity(h.target);
  auto j3 = make_jet(h.target, JetMode::Series, F, 2, {{0, 2, 1}, {1, 0, 0}});
  EXPECT_EQ(ord_jacobian(id, j3).value, 0);
  auto gens = jacobian_ideal_generators(h);
  ASSERT_EQ(gens.size(), 1u);
  EXPECT_EQ(gens[0], parse_int_poly("u", {"u", "v"}));
}
