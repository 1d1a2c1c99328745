#include "oracles.hpp"
#include "motint/padic/padic.hpp"

#include <gtest/gtest.h>

using namespace motint;
using motint::testing::load;
using motint::testing::load_model;

namespace {

VirtualClass L(long k = 1) { return VirtualClass::lefschetz(k); }
const VirtualClass one = VirtualClass::one();

AffineModel A1() { return AffineModel::affine_space("A1", {"x"}); }

CylinderSpec cyl(const AffineModel& X, unsigned n, const std::string& cond) {
  return {X, n, parse_condition(cond, X.vars), Stability::smooth()};
}

WeakNeronPresentation presentation(int d, std::vector<NeronComponent> cs) { return {"P", d, std::move(cs)}; }

}  // namespace

TEST(Condition, ParsesAndPrints) {
  std::vector<std::string> v{"x", "y"};
  auto c = parse_condition("ord(x) = 1 & ord(y) >= 1", v);
  EXPECT_EQ(c.required_level(), 1);
  EXPECT_NO_THROW(c.check_level(1));
  EXPECT_THROW(c.check_level(0), MathError);
  EXPECT_EQ(parse_condition(c.to_string(), v).to_string(), c.to_string());
  EXPECT_NO_THROW(parse_condition("!(x = 0) | (y != 0 && ord(x*y) > 2)", v));
  EXPECT_THROW(parse_condition("ord(z) = 1", v), ParseError);
  EXPECT_THROW(parse_condition("ord(x) = ", v), ParseError);
}

TEST(Condition, EvaluatesOnJets) {
  auto F = FiniteField::prime(3);
  auto j = make_jet(A1(), JetMode::Series, F, 2, {{0, 0, 2}});
  auto holds = [&](const std::string& s) { return ConditionEvaluator(parse_condition(s, {"x"}), F)(j); };
  EXPECT_TRUE(holds("ord(x) = 2"));
  EXPECT_TRUE(holds("ord(x) >= 1"));
  EXPECT_FALSE(holds("ord(x) >= 3"));
  EXPECT_FALSE(holds("x = 0"));
  EXPECT_TRUE(holds("x = 0 | ord(x) = 2"));
  EXPECT_TRUE(holds("x != 0"));
  EXPECT_TRUE(holds("!(ord(x) = 1)"));
  EXPECT_TRUE(holds("true & !false"));
}

TEST(Cylinder, FullSpaceHasMeasureOfSpecialFibre) {
  auto A = cyl(A1(), 1, "true");
  EXPECT_EQ(cylinder_measure_count(A, FiniteField::prime(3)), 1);
  EXPECT_EQ(cylinder_measure_symbolic(A, L(2)), one);
  EXPECT_EQ(cylinder_measure_symbolic(A, std::nullopt), one);
}

TEST(Cylinder, OrderTwoStratum) {
  auto A = cyl(A1(), 2, "ord(x) = 2");
  EXPECT_EQ(cylinder_measure_symbolic(A, std::nullopt), (L() - one) * L(-3));
  EXPECT_EQ(cylinder_measure_count(A, FiniteField::prime(3)), Rational(2, 27));
}

TEST(Cylinder, EmptyCylinder) {
  auto A = cyl(A1(), 1, "ord(x) = 0 & x = 0");
  EXPECT_EQ(cylinder_measure_count(A, FiniteField::prime(3)), 0);
  EXPECT_TRUE(cylinder_measure_symbolic(A, std::nullopt).is_zero());
}

TEST(Cylinder, StabilityIsJustified) {
  auto C = AffineModel::hypersurfaces("cusp", {"x", "y"}, {"y^2 - x^3"}, false);
  EXPECT_THROW(cyl(C, 1, "true").validate(), ModelError);
  CylinderSpec low{C, 1, Condition::always(), Stability::inside(1)};
  EXPECT_THROW(low.validate(), MathError);
  CylinderSpec smooth_part{C, 2, parse_condition("ord(y) = 0", C.vars), Stability::inside(0)};
  EXPECT_EQ(cylinder_measure_count(smooth_part, FiniteField::prime(5)), Rational(4, 5));
  CylinderSpec all{C, 2, Condition::always(), Stability::inside(0)};
  EXPECT_THROW(cylinder_measure_count(all, FiniteField::prime(5), JetMode::Series, {}, 2), MathError);
}

TEST(CylinderProperty, BackendCoherence) {
  struct Case {
    AffineModel X;
    unsigned n;
    std::string cond;
  };
  auto T = load_model("torus");
  auto P = load_model("plane");
  std::vector<Case> cases{{A1(), 0, "true"},
                          {A1(), 2, "ord(x) = 2"},
                          {A1(), 3, "ord(x) >= 2"},
                          {A1(), 2, "x != 0"},
                          {A1(), 2, "ord(x) = 1 | ord(x) = 0"},
                          {T, 1, "true"},
                          {T, 2, "ord(x) = 0"},
                          {P, 2, "ord(x) = 1 & ord(y) >= 1"},
                          {P, 2, "ord(x) = 0 | ord(y) = 2"},
                          {P, 1, "ord(x*y) = 1"},
                          {P, 2, "!(ord(x) = 1)"}};
  for (const auto& c : cases) {
    auto A = cyl(c.X, c.n, c.cond);
    auto cls = symbolic_cylinder_class(A);
    ASSERT_TRUE(cls.has_value()) << c.cond;
    auto mu = cylinder_measure_symbolic(A, cls);
    for (auto q : {2u, 3u, 5u}) {
      auto F = FiniteField::prime(q);
      if (!c.X.claims_smooth_over(q)) continue;
      EXPECT_EQ(mu.specialize_count(F), cylinder_measure_count(A, F)) << c.cond << " on " << c.X.name << " q=" << q;
    }
  }
}

TEST(CylinderProperty, FiniteAdditivityAndMonotonicity) {
  auto P = load_model("plane");
  auto F = FiniteField::prime(3);
  for (unsigned k = 0; k <= 2; ++k) {
    auto a = cyl(P, 2, "ord(x) = " + std::to_string(k));
    auto b = cyl(P, 2, "ord(x) >= " + std::to_string(k + 1));
    auto ab = cyl(P, 2, "ord(x) >= " + std::to_string(k));
    EXPECT_EQ(cylinder_measure_count(a, F) + cylinder_measure_count(b, F), cylinder_measure_count(ab, F));
    auto sa = cylinder_measure_symbolic(a, std::nullopt), sb = cylinder_measure_symbolic(b, std::nullopt),
         sab = cylinder_measure_symbolic(ab, std::nullopt);
    EXPECT_EQ(sa + sb, sab);
    EXPECT_LE(sa.norm(), sab.norm());
    EXPECT_LE(sb.norm(), sab.norm());
  }
}

TEST(Integral, BallPartialSum) {
  auto X = load_model("ball");
  auto f = X.parse("x");
  IntegralOptions opt;
  opt.cutoff = 3;
  auto sym = integral_symbolic(X, f, opt);
  VirtualClass expect;
  for (long n = 0; n <= 3; ++n) expect += (L() - one) * L(-2 * n - 1);
  EXPECT_EQ(sym.partial, expect);
  EXPECT_EQ(sym.tail_level, 4);
  auto F = FiniteField::prime(3);
  auto num = integral_count(X, f, F, opt);
  EXPECT_EQ(num.partial, sym.partial.specialize_count(F));
  EXPECT_EQ(num.partial, motint::testing::ball_partial(3, 3));
  EXPECT_EQ(num.partial, padic_integral(X, f, F, 3).partial);
  EXPECT_EQ(num.tail_bound, Rational(1, 6561));
}

TEST(Integral, TorusUnitIsExact) {
  auto X = load_model("torus");
  IntegralOptions opt;
  opt.unit = true;
  auto sym = integral_symbolic(X, X.parse("x"), opt);
  EXPECT_TRUE(sym.is_exact());
  EXPECT_EQ(sym.partial, (L() - one) * L(-1));
  auto num = integral_count(X, X.parse("x"), FiniteField::prime(3), opt);
  EXPECT_TRUE(num.exact);
  EXPECT_EQ(num.partial, Rational(2, 3));
  EXPECT_EQ(num.strata.by_order, (std::vector<Integer>{2}));
}

TEST(Integral, UnitClaimWithoutFiniteStrataIsNotExact) {
  auto X = load_model("ball");
  IntegralOptions opt;
  opt.unit = true;
  opt.cutoff = 2;
  EXPECT_FALSE(integral_symbolic(X, X.parse("x"), opt).is_exact());
  EXPECT_FALSE(integral_count(X, X.parse("x"), FiniteField::prime(3), opt).exact);
}

TEST(Integral, ConstantIntegrand) {
  auto X = A1();
  IntegralOptions opt;
  opt.unit = true;
  auto sym = integral_symbolic(X, X.parse("1"), opt);
  EXPECT_TRUE(sym.is_exact());
  EXPECT_EQ(sym.partial, one);
  EXPECT_EQ(integral_count(X, X.parse("1"), FiniteField::prime(5), opt).partial, 1);
}

TEST(Integral, RequiresSmoothModel) {
  auto C = AffineModel::hypersurfaces("cusp", {"x", "y"}, {"y^2 - x^3"}, false);
  EXPECT_THROW(integral_symbolic(C, C.parse("x")), ModelError);
}

TEST(Integral, StrataMatchHandCount) {
  auto P = load_model("plane");
  auto F = FiniteField::prime(3);
  auto s = stratum_counts(P, P.parse("x*y"), Condition::always(), F, 1);
  EXPECT_EQ(s.by_order[0], 2 * 3 * 2 * 3);
  EXPECT_EQ(s.by_order[1], 2 * (2 * 2 * 3));
  EXPECT_EQ(s.total(), 81);
}

TEST(Neron, Formula) {
  EXPECT_EQ(neron_integral(presentation(1, {{L(), 0}})), one);
  EXPECT_EQ(neron_integral(presentation(1, {{L() - one, 0}})), (L() - one) * L(-1));
  EXPECT_EQ(neron_integral(presentation(1, {{L(), 0}, {one, 1}})), L(-1) * (L() + L(-1)));
  EXPECT_THROW(neron_integral(presentation(1, {{L(2), 0}})), ModelError);
}

TEST(Neron, ModelIndependenceOnTorus) {
  auto X = load_model("torus");
  IntegralOptions opt;
  opt.unit = true;
  auto direct = integral_symbolic(X, X.parse("1"), opt);
  auto P = load("torus.wnm").nerons.begin()->second;
  EXPECT_TRUE(direct.is_exact());
  EXPECT_EQ(direct.partial, neron_integral(P));
  for (auto q : {3u, 5u})
    EXPECT_EQ(integral_count(X, X.parse("1"), FiniteField::prime(q), opt).partial, neron_integral(P).specialize_count(FiniteField::prime(q)));
}

TEST(Serre, Examples) {
  auto ball = load("ball.wnm").nerons.begin()->second;
  EXPECT_EQ(serre_invariant(ball), one);
  auto three = load("balls3.wnm").nerons.begin()->second;
  EXPECT_EQ(serre_invariant(three), VirtualClass::integer(3));
  auto torus = load("torus.wnm").nerons.begin()->second;
  EXPECT_TRUE(serre_invariant(torus).is_zero());
  for (auto q : {3u, 4u, 5u, 7u}) {
    auto F = FiniteField::of_order(q);
    EXPECT_EQ(serre_residue(ball, F), 1 % (q - 1));
    EXPECT_EQ(serre_residue(three, F), 3 % (q - 1));
    EXPECT_EQ(serre_residue(torus, F), 0);
  }
}

TEST(Serre, InvariantUnderLTwists) {
  motint::testing::Gen gen(17);
  std::vector<AtomPtr> atoms{motint::testing::torus_atom()};
  for (int i = 0; i < 100; ++i) {
    auto c1 = gen.mixed(atoms), c2 = gen.mixed(atoms);
    auto P = presentation(8, {{c1, 0}, {c2, 1}});
    auto Q = presentation(8, {{c1 * L(gen.uniform(-3, 3)), 0}, {c2, 1}});
    EXPECT_EQ(serre_invariant(P), serre_invariant(Q));
  }
}

TEST(CalabiYau, Examples) {
  auto E = load("elliptic.wnm");
  auto P = E.nerons.begin()->second;
  EXPECT_EQ(calabi_yau_class(P), VirtualClass::atom(E.atoms.at("E")));
  auto a = VirtualClass::atom(make_atom("A", 1)), b = VirtualClass::atom(make_atom("B", 1));
  EXPECT_EQ(calabi_yau_class(presentation(1, {{a, 2}, {b, 3}})), a + b * L(-1));
  EXPECT_EQ(calabi_yau_class(presentation(1, {{a, 7}, {b, 8}})), a + b * L(-1));
  EXPECT_THROW(calabi_yau_class(presentation(1, {})), MathError);
}

TEST(Additivity, TrivialCover) {
  auto X = load_model("torus");
  CoverPresentation C{"one", X, {{X.parse("1")}}};
  auto r = additivity_check(C, X.parse("x"), FiniteField::prime(3), {});
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.lhs, r.rhs);
}

TEST(Additivity, LineCover) {
  auto lib = load("line_cover.model");
  const auto& C = lib.covers.begin()->second;
  IntegralOptions opt;
  opt.unit = true;
  auto r = additivity_check(C, C.model.parse("1"), FiniteField::prime(3), opt);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.lhs, 1);
  EXPECT_EQ(r.rhs, 1);
}

TEST(Additivity, TorusCover) {
  auto lib = load("torus_cover.model");
  const auto& C = lib.covers.begin()->second;
  IntegralOptions opt;
  opt.unit = true;
  for (auto [q, v] : std::vector<std::pair<unsigned, Rational>>{{3, Rational(2, 3)}, {5, Rational(4, 5)}}) {
    auto r = additivity_check(C, C.model.parse("x"), FiniteField::prime(q), opt);
    EXPECT_TRUE(r.equal);
    EXPECT_EQ(r.lhs, v);
    EXPECT_EQ(r.rhs, v);
  }
}

TEST(Product, Examples) {
  auto B = load_model("ball");
  auto T = load_model("torus");
  auto F = FiniteField::prime(3);
  IntegralOptions opt;
  opt.unit = true;
  auto r1 = product_check(B, B, B.parse("1"), B.parse("1"), F, opt);
  EXPECT_TRUE(r1.equal);
  EXPECT_EQ(r1.lhs, 1);
  auto r2 = product_check(T, B, T.parse("x"), B.parse("1"), F, opt);
  EXPECT_TRUE(r2.equal);
  EXPECT_EQ(r2.lhs, Rational(2, 3));
  auto r3 = product_check(T, T, T.parse("x"), T.parse("x"), F, opt);
  EXPECT_TRUE(r3.equal);
  EXPECT_EQ(r3.lhs, Rational(4, 9));
  ASSERT_TRUE(r3.lhs_class.has_value());
  EXPECT_EQ(r3.lhs_class->partial, ((L() - one) * L(-1)).pow(2));
}

TEST(Product, NonUnitIntegrands) {
  auto B = load_model("ball");
  IntegralOptions opt;
  opt.cutoff = 2;
  auto r = product_check(B, B, B.parse("x"), B.parse("x"), FiniteField::prime(2), opt);
  EXPECT_TRUE(r.equal);
}

TEST(ChangeOfVariables, BlowupOrderOne) {
  auto lib = load("blowup.model");
  const auto& h = lib.morphisms.at("blowup");
  auto B = parse_condition("ord(u) = 1", h.source.vars);
  auto A = parse_condition("ord(x) = 1 & ord(y) >= 1", h.target.vars);
  for (auto q : {3u, 5u}) {
    auto r = change_of_variables_check(h, B, 2, FiniteField::prime(q), A);
    EXPECT_TRUE(r.verdict()) << q;
    EXPECT_EQ(r.lhs, r.rhs);
    ASSERT_TRUE(r.lhs_class && r.rhs_class);
    EXPECT_EQ(*r.lhs_class, (L() - one) * L(-3));
    EXPECT_EQ(*r.rhs_class, (L() - one) * L(-3));
    if (q == 3) EXPECT_EQ(r.lhs, Rational(2, 27));
  }
}

TEST(ChangeOfVariables, BlowupOrderTwo) {
  auto lib = load("blowup.model");
  const auto& h = lib.morphisms.at("blowup");
  auto B = parse_condition("ord(u) = 2", h.source.vars);
  auto A = parse_condition("ord(x) = 2 & ord(y) >= 2", h.target.vars);
  for (auto q : {3u, 5u}) {
    auto r = change_of_variables_check(h, B, 2, FiniteField::prime(q), A);
    EXPECT_TRUE(r.verdict()) << q;
    EXPECT_TRUE(r.fibres_ok);
    ASSERT_TRUE(r.lhs_class.has_value());
    EXPECT_EQ(*r.lhs_class, (L() - one) * L(-5));
    EXPECT_EQ(r.jacobian_strata.size(), 1u);
    EXPECT_EQ(r.jacobian_strata.begin()->first, 2);
    if (q == 3) {
      EXPECT_EQ(r.lhs, Rational(2, 243));
      EXPECT_EQ(r.rhs, Rational(2, 243));
    }
  }
}

TEST(ChangeOfVariables, Identity) {
  auto P = load_model("plane");
  auto h = ModelMorphism::identity(P);
  auto r = change_of_variables_check(h, parse_condition("ord(x) = 1 | ord(y) = 0", P.vars), 2, FiniteField::prime(3));
  EXPECT_TRUE(r.verdict());
  EXPECT_EQ(r.jacobian_strata.size(), 1u);
  EXPECT_EQ(r.jacobian_strata.begin()->first, 0);
}

TEST(ChangeOfVariables, WrongImageIsReported) {
  auto lib = load("blowup.model");
  const auto& h = lib.morphisms.at("blowup");
  auto B = parse_condition("ord(u) = 1", h.source.vars);
  auto wrong = parse_condition("ord(x) = 1", h.target.vars);
  auto r = change_of_variables_check(h, B, 2, FiniteField::prime(3), wrong);
  EXPECT_FALSE(r.image_matches_a);
  EXPECT_FALSE(r.verdict());
}

TEST(ChangeOfVariables, NonInjectiveMapIsRejected) {
  auto P = load_model("plane");
  ModelMorphism sq{"square", P, P, {P.parse("x^2"), P.parse("y")}, {}};
  auto r = change_of_variables_check(sq, parse_condition("ord(x) = 0", P.vars), 1, FiniteField::prime(3));
  EXPECT_FALSE(r.injective);
  EXPECT_FALSE(r.verdict());
}
