#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nkl/catalog.hpp"
#include "nkl/classify.hpp"
#include "nkl/suite.hpp"

using namespace nkl;

namespace {

const double pi = std::numbers::pi;

}  // namespace

TEST(Catalog, NamesAndUnknown) {
  EXPECT_EQ(example_names().size(), 9u);
  EXPECT_THROW(construct_example("4.9"), UnknownExample);
  EXPECT_THROW(expected_properties("x"), UnknownExample);
}

TEST(Catalog, ParameterValidation) {
  ExampleParams prm;
  prm.a = {0, 1, 0, 0};
  prm.b = {0, 1, 1, 0};
  EXPECT_THROW(construct_example("4.6", prm), std::invalid_argument);
  prm.b = {0, 0.6, 0.8, 0};
  EXPECT_THROW(construct_example("4.6", prm), std::invalid_argument);  // unit but not orthogonal to a
  prm.b = {0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(construct_example("4.4", prm), std::invalid_argument);
  prm = {};
  prm.center = {2, 0, 0, 0};
  EXPECT_THROW(construct_example("4.1", prm), std::invalid_argument);
}

TEST(Catalog, ExpectedRecordValues) {
  auto e6 = expected_properties("4.6");
  EXPECT_NEAR(e6.angles[1], 2 * pi / 3, 1e-15);
  EXPECT_NEAR(e6.angles[2], 4 * pi / 3, 1e-15);
  EXPECT_DOUBLE_EQ(*e6.K, 3.0 / 16.0);
  EXPECT_DOUBLE_EQ(*e6.h123, 0.25);
  auto e8 = expected_properties("4.8");
  EXPECT_DOUBLE_EQ(*e8.K, 0.0);
  EXPECT_DOUBLE_EQ(*e8.h123, 0.5);
  for (const auto& n : {"4.1", "4.2", "4.3"}) EXPECT_DOUBLE_EQ(*expected_properties(n).K, 0.75);
  for (const auto& n : {"4.4", "4.5", "4.7"}) {
    auto e = expected_properties(n);
    EXPECT_TRUE(e.totally_geodesic);
    EXPECT_FALSE(e.K.has_value());
  }
}

TEST(Catalog, EverySuitePasses) {
  SuiteConfig cfg;
  cfg.n_points = 6;
  cfg.n_keylemma_points = 3;
  for (const auto& name : example_names()) {
    SuiteResult r = verify_example(name, cfg);
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << name << ' ' << c.id << ' ' << c.max_residual;
    EXPECT_EQ(r.summary.label, classification_label(name)) << name;
  }
}

TEST(Catalog, AlternativeFamilyMembers) {
  SuiteConfig cfg;
  cfg.n_points = 4;
  ExampleParams prm;
  prm.a = {0, 0, 0, 1};
  prm.b = {0, 0.6, 0.8, 0};
  for (const auto& c : verify_example("4.6", cfg, prm).checks) EXPECT_TRUE(c.pass) << c.id;
  prm.b = {0, 0, 0.6, 0.8};
  for (const auto& name : {"4.4", "4.5", "4.7"})
    for (const auto& c : verify_example(name, cfg, prm).checks) EXPECT_TRUE(c.pass) << name << ' ' << c.id;
}

TEST(Classify, LabelsOfExamples) {
  EXPECT_EQ(classification_label("4.6"), kRound316Label);
  EXPECT_EQ(classification_label("4.8"), kFlatTorusLabel);
  EXPECT_EQ(std::string(kFlatTorusLabel), "Theorem 1.1 (5) — flat torus");
  for (const auto& name : example_names()) {
    auto r = classify(construct_example(name), random_chart_points(1, 4), {});
    EXPECT_EQ(r.label, classification_label(name)) << name;
  }
}

TEST(Classify, AngleDistanceIsPermutationAndWrapInvariant) {
  EXPECT_NEAR(angle_triple_distance({0.1, 2.0, 4.0}, {4.0, 0.1, 2.0}), 0.0, 1e-15);
  EXPECT_NEAR(angle_triple_distance({1e-9, 1.0, 2.0}, {2 * pi - 1e-9, 1.0, 2.0}), 2e-9, 1e-15);
  EXPECT_GT(angle_triple_distance({0, 0, 0}, {0, 2 * pi / 3, 4 * pi / 3}), 1.0);
}

TEST(Classify, RandomChartPointsDeterministic) {
  EXPECT_EQ(random_chart_points(5, 3), random_chart_points(5, 3));
  EXPECT_NE(random_chart_points(5, 3), random_chart_points(6, 3));
}
