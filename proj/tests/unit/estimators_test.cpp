#include "support.hpp"

#include "tlab/estimators.hpp"
#include "tlab/normal_cone.hpp"
#include "tlab/scenario.hpp"

#include <cmath>
#include <numbers>

namespace tlab {
namespace {

using test::quick_config;
using test::vec;

constexpr double kPi = std::numbers::pi;

RelativeNormalPair unit_pair(const Vector& v1, const Vector& v2) {
  RelativeNormalPair p;
  p.v1 = v1;
  p.v2 = v2;
  return p;
}

TEST(Subtransversality, IdenticalHalfPlanesGiveOne) {
  EXPECT_DOUBLE_EQ(estimate_subtransversality(catalog::identical_half_planes(), quick_config()).value, 1.0);
}

TEST(Subtransversality, TwoLinesGiveSinHalfAngle) {
  for (double theta : {kPi / 6, kPi / 3, kPi / 2}) {
    const auto est = estimate_subtransversality(catalog::two_lines(theta), quick_config());
    EXPECT_NEAR(est.value, std::sin(theta / 2), 1e-3) << theta;
    EXPECT_GE(est.value, std::sin(theta / 2) - 1e-9);
  }
}

TEST(Subtransversality, TangentialMatchesBruteForcePerRadius) {
  const auto fixture = test::load_fixture("oracle_values.json")["tangential"];
  const auto est = estimate_subtransversality(catalog::tangential_ball_line(), EstimatorConfig{});
  ASSERT_EQ(est.per_radius.size(), fixture.size());
  for (std::size_t k = 0; k < fixture.size(); ++k) {
    EXPECT_DOUBLE_EQ(est.per_radius[k].rho, fixture[k]["rho"].get<double>());
    EXPECT_NEAR(est.per_radius[k].value / fixture[k]["str"].get<double>(), 1.0, 0.02) << k;
  }
}

TEST(Subtransversality, StallPairIsSubtransversal) {
  const auto fixture = test::load_fixture("oracle_values.json")["stall"];
  const auto est = estimate_subtransversality(catalog::stall_union_axis(), quick_config());
  for (std::size_t k = 0; k < fixture.size(); ++k) {
    EXPECT_NEAR(est.per_radius[k].value, fixture[k]["str"].get<double>(), 1e-9);
  }
}

TEST(Transversality, IdenticalLinesGiveZero) {
  EXPECT_DOUBLE_EQ(estimate_transversality(catalog::identical_lines(), quick_config()).value, 0.0);
}

TEST(Transversality, TwoLinesAndTangential) {
  const auto lines = estimate_transversality(catalog::two_lines(kPi / 3), quick_config());
  EXPECT_NEAR(lines.value, 0.5, 0.01);
  EXPECT_EQ(lines.skipped, 0u);
  EXPECT_LE(estimate_transversality(catalog::tangential_ball_line(), quick_config()).value, 1e-3);
}

TEST(Intrinsic, NestedPairUsesConvention) {
  const auto fam = estimate_intrinsic_family(catalog::nested_point_plane(), quick_config());
  EXPECT_DOUBLE_EQ(fam.itr.value, 1.0);
  EXPECT_TRUE(fam.itr.no_witness);
  EXPECT_TRUE(fam.pairs.empty());
  EXPECT_DOUBLE_EQ(fam.itr1.value, 0.0);
  EXPECT_DOUBLE_EQ(fam.itr2.value, -1.0);
  EXPECT_DOUBLE_EQ(fam.itr3.value, std::numbers::sqrt2);
}

TEST(Intrinsic, TwoLinesFamily) {
  const auto fam = estimate_intrinsic_family(catalog::two_lines(kPi / 3), quick_config());
  EXPECT_NEAR(fam.itr.value, 0.5, 0.01);
  EXPECT_NEAR(fam.itr1.value, std::sqrt(3.0), 0.02);
  EXPECT_NEAR(fam.itr2.value, 0.5, 0.02);
  EXPECT_NEAR(fam.itr3.value, std::numbers::sqrt2 / 2, 0.02);
  EXPECT_TRUE(fam.positively_independent);
  EXPECT_NEAR(fam.itr_from_pairs, fam.itr.value, 1e-9);
}

TEST(Intrinsic, TangentialTendsToZero) {
  const auto fam = estimate_intrinsic_family(catalog::tangential_ball_line(), quick_config());
  EXPECT_LE(fam.itr.value, 0.003125);
  for (std::size_t k = 1; k < fam.itr.per_radius.size(); ++k) {
    EXPECT_LT(fam.itr.per_radius[k].value, fam.itr.per_radius[k - 1].value);
  }
}

TEST(Strc, ConventionsAndLines) {
  EXPECT_DOUBLE_EQ(estimate_strc(catalog::nested_point_plane(), quick_config()).value, 1.0);
  EXPECT_NEAR(estimate_strc(catalog::two_lines(kPi / 3), quick_config()).value, 0.5, 0.01);
  EXPECT_LE(estimate_strc(catalog::tangential_ball_line(), quick_config()).value, 0.003125);
}

TEST(Harvest, EmptyWithoutWitnesses) {
  EXPECT_TRUE(harvest_normal_pairs(catalog::nested_point_plane(), 1e-3, 1e-2, 32, 1).empty());
  EXPECT_TRUE(harvest_normal_pairs(catalog::identical_half_planes(), 1e-3, 1e-2, 32, 1).empty());
}

TEST(Harvest, TwoLinesPairsAreUnitNormalsWithSmallDefects) {
  const double theta = kPi / 3;
  const auto pair = catalog::two_lines(theta);
  const auto pairs = harvest_normal_pairs(pair, 1e-3, 1e-2, 64, 5);
  ASSERT_FALSE(pairs.empty());
  const Vector nb = vec({-std::sin(theta), std::cos(theta)});
  for (const auto& p : pairs) {
    EXPECT_NEAR(p.v1.norm(), 1, 1e-12);
    EXPECT_NEAR(p.v2.norm(), 1, 1e-12);
    EXPECT_LE(std::min((p.v1 - vec({0, 1})).norm(), (p.v1 + vec({0, 1})).norm()), 1.5e-2);
    EXPECT_LE(std::min((p.v2 - nb).norm(), (p.v2 + nb).norm()), 1.5e-2);
    EXPECT_LE(p.ratio_defect, 1e-2);
    EXPECT_LE(p.cone1_dist, 1e-2);
    EXPECT_LE(p.cone2_dist, 1e-2);
    EXPECT_TRUE(contains(pair.set_a, p.a, 1e-10));
    EXPECT_FALSE(contains(pair.set_b, p.a, 1e-10));
    EXPECT_TRUE(contains(pair.set_b, p.b, 1e-10));
    EXPECT_FALSE(contains(pair.set_a, p.b, 1e-10));
  }
}

TEST(Harvest, AlignmentDefectIsScaleInvariant) {
  const auto pairs = harvest_normal_pairs(catalog::two_lines(kPi / 4), 1e-2, 5e-2, 16, 2);
  const auto pair = catalog::two_lines(kPi / 4);
  for (const auto& p : pairs) {
    const Vector n1 = normal_cone_projection(pair.set_a, p.a, p.v1);
    EXPECT_NEAR(alignment_defect(3.0 * p.v1, n1), alignment_defect(p.v1, n1), 1e-12);
    EXPECT_NEAR(alignment_defect(p.v1, 0.25 * n1), p.align1_defect, 1e-12);
  }
}

TEST(EuclideanConstants, EmptyConventions) {
  const auto c = derived_euclidean_constants({});
  EXPECT_EQ(c.itr1, 0);
  EXPECT_EQ(c.itr2, -1);
  EXPECT_DOUBLE_EQ(c.itr3, std::numbers::sqrt2);
  EXPECT_EQ(c.itr_from_pairs, 1);
}

TEST(EuclideanConstants, OppositeNormals) {
  const auto c = derived_euclidean_constants({unit_pair(vec({0, 1}), vec({0, -1}))});
  EXPECT_DOUBLE_EQ(c.itr1, 2);
  EXPECT_DOUBLE_EQ(c.itr2, 1);
  EXPECT_DOUBLE_EQ(c.itr_from_pairs, 0);
  EXPECT_NEAR(c.itr3, 0, 1e-12);
}

TEST(EuclideanConstants, TwoLinesPairsMatchClosedForms) {
  const double theta = kPi / 3;
  const Vector v1 = vec({0, 1});
  const Vector v2 = vec({std::sin(theta), -std::cos(theta)});
  const auto c = derived_euclidean_constants({unit_pair(v1, v2), unit_pair(-v1, -v2)});
  EXPECT_NEAR(c.itr_from_pairs, std::sin(theta / 2), 1e-12);
  EXPECT_NEAR(c.itr1, 2 * std::cos(theta / 2), 1e-12);
  EXPECT_NEAR(c.itr2, std::cos(theta), 1e-12);
  EXPECT_NEAR(c.itr3, std::numbers::sqrt2 * std::sin(theta / 2), 1e-5);
  EXPECT_TRUE(c.positively_independent);
}

TEST(EuclideanConstants, PairMinimumAgreesWithDirectEvaluation) {
  Rng rng = make_rng(9, "pairs");
  std::vector<RelativeNormalPair> pairs;
  double direct = 1;
  for (int i = 0; i < 40; ++i) {
    pairs.push_back(unit_pair(random_unit(rng, 3), random_unit(rng, 3)));
    direct = std::min(direct, 0.5 * (pairs.back().v1 + pairs.back().v2).norm());
  }
  EXPECT_NEAR(derived_euclidean_constants(pairs).itr_from_pairs, direct, 1e-9);
}

TEST(EuclideanConstants, RejectsNonUnitPairs) {
  EXPECT_THROW_KIND(derived_euclidean_constants({unit_pair(vec({0, 2}), vec({0, -1}))}), ErrorKind::NonUnitPair);
}

TEST(SphereMesh, SizesAndUnitLength) {
  EXPECT_GE(sphere_mesh(2).size(), 1000u);
  EXPECT_GE(sphere_mesh(3).size(), 1000u);
  for (const auto& v : sphere_mesh(3)) EXPECT_NEAR(v.norm(), 1, 1e-12);
  EXPECT_EQ(sphere_mesh(4), sphere_mesh(4));
}

TEST(Itrhat, NestedConventionAndLines) {
  const auto nested = estimate_itrhat(catalog::nested_point_plane(), quick_config());
  EXPECT_DOUBLE_EQ(nested.itrhat1.value, 1.0);
  EXPECT_DOUBLE_EQ(nested.itrhat2.value, 0.0);
  EXPECT_TRUE(nested.itrhat1.no_witness);
  const auto lines = estimate_itrhat(catalog::two_lines(kPi / 3), quick_config());
  EXPECT_NEAR(lines.itrhat1.value, 0.5, 0.02);
  EXPECT_NEAR(lines.itrhat2.value, std::sqrt(0.75), 0.02);
}

TEST(Itrhat, TangentialTendsToZero) {
  const auto fixture = test::load_fixture("oracle_values.json")["tangential"];
  const auto est = estimate_itrhat(catalog::tangential_ball_line(), quick_config());
  EXPECT_LE(est.itrhat1.value, 0.05);
  for (std::size_t k = 0; k < fixture.size(); ++k) {
    EXPECT_LE(fixture[k]["itrhat1"].get<double>(), 0.05);
    EXPECT_LE(est.itrhat1.per_radius[k].value, 0.05);
  }
}

TEST(EstimateAll, RangesOrderAndDeterminism) {
  const auto pair = catalog::half_planes(kPi / 3);
  const auto a = estimate_all(pair, quick_config(32));
  const auto b = estimate_all(pair, quick_config(32));
  const auto all = a.all();
  ASSERT_EQ(all.size(), 9u);
  const char* names[] = {"str", "tr", "itr", "strc", "itr1", "itr2", "itr3", "itrhat1", "itrhat2"};
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i]->name, names[i]);
    EXPECT_NO_THROW(check_estimate_range(*all[i]));
    const auto* other = b.all()[i];
    ASSERT_EQ(all[i]->per_radius.size(), other->per_radius.size());
    for (std::size_t k = 0; k < all[i]->per_radius.size(); ++k) {
      EXPECT_EQ(all[i]->per_radius[k].value, other->per_radius[k].value) << names[i];
    }
  }
}

TEST(EstimateAll, MoreSamplesNeverWorsenBounds) {
  for (const auto& pair : {catalog::tangential_ball_line(), catalog::ball_line_crossing()}) {
    const auto small = estimate_all(pair, quick_config(24));
    const auto large = estimate_all(pair, quick_config(48));
    for (std::size_t k = 0; k < small.str.per_radius.size(); ++k) {
      EXPECT_LE(large.str.per_radius[k].value, small.str.per_radius[k].value) << pair.label;
      EXPECT_LE(large.tr.per_radius[k].value, small.tr.per_radius[k].value) << pair.label;
      EXPECT_LE(large.itr.per_radius[k].value, small.itr.per_radius[k].value) << pair.label;
      EXPECT_LE(large.strc.per_radius[k].value, small.strc.per_radius[k].value) << pair.label;
      EXPECT_LE(large.itrhat1.per_radius[k].value, small.itrhat1.per_radius[k].value) << pair.label;
      EXPECT_GE(large.itrhat2.per_radius[k].value, small.itrhat2.per_radius[k].value) << pair.label;
    }
  }
}

TEST(EstimateAll, ConicPairsAreScaleInvariant) {
  auto coarse = quick_config(24);
  auto fine = coarse;
  fine.schedule.rho0 = 0.01;
  const auto pair = catalog::two_lines(kPi / 6);
  const auto a = estimate_all(pair, coarse);
  const auto b = estimate_all(pair, fine);
  for (std::size_t i = 0; i < a.all().size(); ++i) {
    EXPECT_NEAR(a.all()[i]->value, b.all()[i]->value, 1e-3) << a.all()[i]->name;
  }
}

TEST(EstimatorConfig, Validation) {
  EstimatorConfig c;
  c.samples = 0;
  EXPECT_THROW_KIND(c.validate(), ErrorKind::InvalidArgument);
  c = {};
  c.schedule.factor = 2;
  EXPECT_THROW_KIND(estimate_subtransversality(catalog::two_lines(1), c), ErrorKind::InvalidArgument);
}

}  // namespace
}  // namespace tlab
