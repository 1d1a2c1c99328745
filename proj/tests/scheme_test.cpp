#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace motint;
using motint::testing::load;
using motint::testing::load_model;

namespace {

const std::vector<std::string> xy{"x", "y"};

AffineModel cusp() { return AffineModel::hypersurfaces("cusp", xy, {"y^2 - x^3"}, false); }
AffineModel torus() { return AffineModel::hypersurfaces("torus", xy, {"x*y - 1"}, true); }

}  // namespace

TEST(Scheme, CuspSingularLocus) {
  auto eqs = singular_locus_equations(cusp());
  ASSERT_EQ(eqs.size(), 3u);
  EXPECT_EQ(eqs[0], parse_int_poly("y^2 - x^3", xy));
  EXPECT_EQ(eqs[1], parse_int_poly("-3*x^2", xy));
  EXPECT_EQ(eqs[2], parse_int_poly("2*y", xy));
  auto F5 = FiniteField::prime(5);
  EXPECT_EQ(singular_points(cusp(), F5), (std::vector<FieldPoint>{{0, 0}}));
  std::size_t brute = 0;
  for (std::uint32_t x = 0; x < 5; ++x)
    for (std::uint32_t y = 0; y < 5; ++y)
      if ((y * y + 5 * 25 - x * x * x) % 5 == 0 && (3 * x * x) % 5 == 0 && (2 * y) % 5 == 0) ++brute;
  EXPECT_EQ(brute, 1u);
}

TEST(Scheme, TorusSingularLocusEmpty) {
  auto eqs = singular_locus_equations(torus());
  ASSERT_EQ(eqs.size(), 3u);
  EXPECT_EQ(eqs[1], parse_int_poly("y", xy));
  EXPECT_EQ(eqs[2], parse_int_poly("x", xy));
  for (auto q : {2u, 3u, 4u, 5u, 7u, 9u}) EXPECT_TRUE(singular_points(torus(), FiniteField::of_order(q)).empty());
}

TEST(Scheme, AffineSpaceHasNoSingularPoints) {
  auto A2 = AffineModel::affine_space("A2", xy);
  for (auto q : {2u, 3u, 5u}) EXPECT_TRUE(singular_points(A2, FiniteField::prime(q)).empty());
}

TEST(Scheme, SmoothPoints) {
  auto F5 = FiniteField::prime(5);
  EXPECT_TRUE(is_smooth_point(cusp(), {1, 1}, F5));
  EXPECT_FALSE(is_smooth_point(cusp(), {0, 0}, F5));
  EXPECT_TRUE(is_smooth_point(torus(), {2, 3}, F5));
  EXPECT_THROW(is_smooth_point(torus(), {2, 2}, F5), ModelError);
}

TEST(Scheme, DeclaredSmoothnessIsChecked) {
  auto fake = AffineModel::hypersurfaces("fake", xy, {"y^2 - x^3"}, true);
  EXPECT_THROW(verify_smooth(fake, FiniteField::prime(5)), ModelError);
  auto E = load_model("elliptic");
  EXPECT_THROW(verify_smooth(E, FiniteField::prime(2)), ModelError);
  EXPECT_NO_THROW(verify_smooth(E, FiniteField::prime(5)));
}

TEST(Scheme, ShippedSmoothModelsHaveNoSingularPoints) {
  for (const auto* name : {"ball", "plane", "torus", "elliptic"}) {
    auto X = load_model(name);
    ASSERT_TRUE(X.smooth);
    for (auto q : {2u, 3u, 4u, 5u, 7u}) {
      auto F = FiniteField::of_order(q);
      if (!X.claims_smooth_over(F.characteristic())) continue;
      EXPECT_TRUE(singular_points(X, F).empty()) << name << " q=" << q;
    }
  }
}

TEST(Scheme, MorphismsPullBackEquations) {
  for (const auto* file : {"blowup.model", "blowup2.model", "blowup_full.model", "identity.model"}) {
    auto lib = load(file);
    for (const auto& h : lib.charts())
      for (auto q : {2u, 3u, 5u}) EXPECT_NO_THROW(verify_morphism(h, FiniteField::prime(q))) << file;
  }
  auto T = torus();
  ModelMorphism bad{"bad", AffineModel::affine_space("A1", {"u"}), T,
                    {parse_int_poly("u", {"u"}), parse_int_poly("u", {"u"})}, {}};
  EXPECT_THROW(verify_morphism(bad, FiniteField::prime(3)), ModelError);
}

TEST(Scheme, CoverIsCheckedPointwise) {
  auto lib = load("torus_cover.model");
  const auto& C = lib.covers.begin()->second;
  EXPECT_NO_THROW(verify_cover(C, FiniteField::prime(3)));
  CoverPresentation partial{"partial", C.model, {{parse_int_poly("x - 1", xy)}}};
  EXPECT_THROW(verify_cover(partial, FiniteField::prime(3)), ModelError);
}

TEST(Scheme, ProductModelRenamesClashes) {
  auto T = torus();
  auto P = product_model(T, T);
  EXPECT_EQ(P.vars, (std::vector<std::string>{"x", "y", "x_2", "y_2"}));
  EXPECT_EQ(P.rel_dim, 2);
  EXPECT_EQ(P.equations.size(), 2u);
  EXPECT_EQ(count_points(P, FiniteField::prime(3)), 4);
}

TEST(ModelFile, ParsesAllShippedFiles) {
  auto lib = load("blowup_full.model");
  EXPECT_EQ(lib.morphism_order, (std::vector<std::string>{"first", "second"}));
  EXPECT_EQ(lib.morphisms.at("second").components[0], parse_int_poly("s*w", {"s", "w"}));
  auto T = load_model("torus");
  EXPECT_EQ(T.rel_dim, 1);
  ASSERT_TRUE(T.special_fibre.has_value());
  EXPECT_EQ(T.special_fibre->to_string(), "L - 1");
  ASSERT_TRUE(T.form.has_value());
  auto E = load("elliptic.wnm");
  auto F5 = FiniteField::prime(5);
  EXPECT_EQ(E.atoms.at("E")->counter(F5), 8);
}

TEST(ModelFile, ReportsErrors) {
  EXPECT_THROW(parse_library("variables = x\n"), FileError);
  EXPECT_THROW(parse_library("[model m]\nvariables = x\nvariables = y\n"), FileError);
  EXPECT_THROW(parse_library("[model m]\nvariables = x\nequations = x +\n"), MathError);
  EXPECT_THROW(parse_library("[model m]\nvariables = x\nsmooth = maybe\n"), FileError);
  EXPECT_THROW(parse_library("[widget w]\n"), FileError);
  EXPECT_THROW(load_library(motint::testing::model_path("no_such_file")), FileError);
}

TEST(ModelFile, ExtensionSuffixOptional) {
  EXPECT_EQ(load_library(motint::testing::model_path("torus")).model().name, "torus");
  EXPECT_EQ(load_library(motint::testing::model_path("torus.model")).model().name, "torus");
}
