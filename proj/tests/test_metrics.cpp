#include "stereocorr/matching.hpp"
#include "stereocorr/metrics.hpp"
#include "stereocorr/op_count.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace stereocorr;

namespace {

DisparityMap uniform_map(const BlockGrid& grid, int dx, int dy) {
  DisparityMap m = DisparityMap::for_grid(grid);
  for (auto& c : m.cells) c = {dx, dy, 0.0, true};
  return m;
}

}  // namespace

TEST(ApplyDisparity, ZeroMapIsIdentity) {
  const Image t = oracle::random_image(20, 20, 1);
  const BlockGrid grid = partition(20, 20, 5, 2);
  EXPECT_TRUE((apply_disparity(t, uniform_map(grid, 0, 0), grid) == t).all());
}

TEST(ApplyDisparity, UniformShiftReproducesReferenceInterior) {
  const Image t = oracle::random_image(30, 30, 2);
  const Image r = oracle::translate(t, 3, 0);
  const BlockGrid grid = partition(30, 30, 6, 0);
  const Image a = apply_disparity(t, uniform_map(grid, 3, 0), grid);
  EXPECT_TRUE((a.block(0, 3, 30, 27) == r.block(0, 3, 30, 27)).all());
}

TEST(ApplyDisparity, SingleValidBlockMovesOnlyItself) {
  const Image t = oracle::random_image(20, 20, 3);
  const BlockGrid grid = partition(20, 20, 5, 0);
  DisparityMap m = DisparityMap::for_grid(grid);
  m.cells[5] = {1, 2, 0.0, true};  // origin (5, 5)
  const Image a = apply_disparity(t, m, grid);
  EXPECT_TRUE((a.block(7, 6, 5, 5) == t.block(5, 5, 5, 5)).all());
  Image expected = t;
  expected.block(7, 6, 5, 5) = t.block(5, 5, 5, 5);
  EXPECT_TRUE((a == expected).all());
}

TEST(ApplyDisparity, LaterBlocksWinAndOffCanvasIsClipped) {
  Image t = Image::Zero(6, 6);
  t.block(0, 0, 3, 3).setConstant(0.2);
  t.block(0, 3, 3, 3).setConstant(0.8);
  const BlockGrid grid = partition(6, 6, 3, 0);
  DisparityMap m = DisparityMap::for_grid(grid);
  m.cells[0] = {1, 0, 0, true};
  m.cells[1] = {-1, 0, 0, true};
  m.cells[3] = {5, 5, 0, true};
  const Image a = apply_disparity(t, m, grid);
  EXPECT_EQ(a(0, 2), 0.8);
  EXPECT_EQ(a(0, 1), 0.2);
  EXPECT_THROW(apply_disparity(t, DisparityMap{}, grid), std::invalid_argument);
}

TEST(Correlation, IdentityInversionAndAffine) {
  const Image a = oracle::random_image(17, 13, 4);
  EXPECT_NEAR(correlation_coefficient(a, a), 1.0, 1e-12);
  EXPECT_NEAR(correlation_coefficient(a, Image(1.0 - a)), -1.0, 1e-12);
  EXPECT_NEAR(correlation_coefficient(a, Image(0.3 + 0.2 * a)), 1.0, 1e-9);
}

TEST(Correlation, MatchesDirectFormula) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Image a = oracle::random_image(21, 9, seed);
    const Image b = oracle::random_image(21, 9, seed + 50);
    EXPECT_NEAR(correlation_coefficient(a, b), oracle::correlation(a, b), 1e-9);
  }
}

TEST(Correlation, ConstantImages) {
  EXPECT_THROW(correlation_coefficient(Image::Constant(3, 3, 0.5), Image::Zero(3, 3)), std::domain_error);
  EXPECT_EQ(correlation_coefficient(Image::Constant(3, 3, 0.5), oracle::random_image(3, 3, 1)), 0.0);
  EXPECT_THROW(correlation_coefficient(Image::Zero(3, 3), Image::Zero(3, 4)), std::invalid_argument);
}

TEST(Densify, NearestBlockCenter) {
  const BlockGrid grid = partition(12, 6, 4, 0);  // cells at x 0, 4, 8
  DisparityMap m = DisparityMap::for_grid(grid);
  for (int i = 0; i < 3; ++i) m.cells[i] = {i + 1, -i, 0, true};
  m.cells[2].valid = false;
  const DenseDisparity d = densify(m, 12, 6);
  EXPECT_EQ(d.dx(0, 0), 1);
  EXPECT_EQ(d.dx(5, 3), 1);
  EXPECT_EQ(d.dx(0, 4), 2);
  EXPECT_EQ(d.dy(0, 7), -1);
  EXPECT_FALSE(d.valid(0, 8));
  EXPECT_FALSE(d.valid(0, 11));
  EXPECT_TRUE(d.valid(5, 0));
}

TEST(Densify, PerPixelMapCentersOnBlock) {
  const BlockGrid grid = partition(9, 9, 3, 2);  // 7 x 7 lattice, centers at 1..7
  DisparityMap m = DisparityMap::for_grid(grid);
  for (int cy = 0; cy < m.lattice_height; ++cy)
    for (int cx = 0; cx < m.lattice_width; ++cx) m.at(cx, cy) = {cx, cy, 0, true};
  const DenseDisparity d = densify(m, 9, 9);
  EXPECT_EQ(d.dx(4, 4), 3);
  EXPECT_EQ(d.dy(4, 4), 3);
  EXPECT_EQ(d.dx(0, 0), 0);
  EXPECT_EQ(d.dx(8, 8), 6);
}

TEST(RmsError, ExactAndConstantOffset) {
  const BlockGrid grid = partition(10, 10, 2, 1);
  GroundTruthDisparity truth{Eigen::ArrayXXd::Constant(10, 10, 4.0), Mask::Constant(10, 10, true)};
  EXPECT_EQ(rms_disparity_error(uniform_map(grid, 4, 0), truth), 0.0);
  EXPECT_NEAR(rms_disparity_error(uniform_map(grid, 6, 3), truth), 2.0, 1e-12);
  EXPECT_NEAR(rms_disparity_error(uniform_map(grid, -4, 0), truth, -1.0), 0.0, 1e-12);
}

TEST(RmsError, MatchesDirectFormulaAndSkipsInvalid) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> d(-5, 5);
  std::bernoulli_distribution keep(0.7);
  const BlockGrid grid = partition(16, 12, 3, 2);
  DisparityMap m = DisparityMap::for_grid(grid);
  for (auto& c : m.cells) c = {d(rng), d(rng), 0, keep(rng)};
  GroundTruthDisparity truth{Eigen::ArrayXXd(12, 16), Mask(12, 16)};
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x) {
      truth.disparity(y, x) = d(rng) / 3.0;
      truth.valid(y, x) = keep(rng);
    }
  const DenseDisparity dense = densify(m, 16, 12);
  double sum = 0;
  int n = 0;
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x)
      if (dense.valid(y, x) && truth.valid(y, x)) {
        sum += std::pow(dense.dx(y, x) - truth.disparity(y, x), 2);
        ++n;
      }
  EXPECT_NEAR(rms_disparity_error(m, truth), std::sqrt(sum / n), 1e-12);
}

TEST(RmsError, NothingValidThrows) {
  const BlockGrid grid = partition(4, 4, 2, 0);
  GroundTruthDisparity truth{Eigen::ArrayXXd::Zero(4, 4), Mask::Constant(4, 4, false)};
  EXPECT_THROW(rms_disparity_error(uniform_map(grid, 0, 0), truth), std::domain_error);
}

TEST(OpCount, ClosedForms) {
  EXPECT_EQ(op_count(Variant::full_ncc, 128, 1, 1).multiplies, 16384u);
  EXPECT_EQ(op_count(Variant::diagonal_ncc, 128, 1, 1).multiplies, 128u);
  EXPECT_EQ(op_count(Variant::sad, 5, 9, 4).abs_diffs, 25u * 9u * 4u);
  EXPECT_EQ(op_count(Variant::sad, 5, 9, 4).multiplies, 0u);
  for (Variant v : {Variant::full_ncc, Variant::diagonal_ncc, Variant::sad}) EXPECT_EQ(op_count(v, 7, 0, 3), OpCounts{});
  for (std::uint64_t b = 2; b < 200; ++b)
    ASSERT_EQ(op_count(Variant::full_ncc, b, 3, 2).multiplies, b * op_count(Variant::diagonal_ncc, b, 3, 2).multiplies);
}

TEST(OpCount, InstrumentedThreeBlockRun) {
  const Image t = oracle::random_image(36, 16, 7);
  const BlockGrid grid = partition(36, 16, 8, 0, 4);  // 3 blocks in one row
  ASSERT_EQ(grid.size(), 3u);
  const auto w = SearchWindow::symmetric(4, 4);
  OpCounts full, diag, sad;
  MatchOptions o;
  o.counts = &full;
  match_ncc(t, t, grid, w, NccVariant::full, 8, std::nullopt, o);
  o.counts = &diag;
  match_ncc(t, t, grid, w, NccVariant::diagonal, 8, std::nullopt, o);
  o.counts = &sad;
  match_sad(t, t, grid, w, std::nullopt, o);
  EXPECT_EQ(full, op_count(Variant::full_ncc, 8, 81, 3));
  EXPECT_EQ(diag, op_count(Variant::diagonal_ncc, 8, 81, 3));
  EXPECT_EQ(sad, op_count(Variant::sad, 8, 81, 3));
}

TEST(OpCount, VariantNames) {
  for (Variant v : {Variant::full_ncc, Variant::diagonal_ncc, Variant::sad}) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_FALSE(parse_variant("ncc"));
}

TEST(Alignment, PostCorrelationNotBelowPreOnTranslatedPairs) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Image t = oracle::random_image(40, 40, 80 + seed);
    const Image r = oracle::translate(t, static_cast<int>(seed) - 2, 1);
    const BlockGrid grid = partition(40, 40, 8, 0);
    const DisparityMap m = match_ncc(t, r, grid, SearchWindow::symmetric(3, 3), NccVariant::full, 8);
    EXPECT_GE(correlation_coefficient(apply_disparity(t, m, grid), r), correlation_coefficient(t, r));
  }
}

TEST(Perturbation, ScaleAndJitter) {
  const Image t = oracle::random_image(20, 20, 9);
  EXPECT_TRUE((scale_intensity(t, 0.1) - t * 0.1).abs().maxCoeff() < 1e-15);
  const Image j1 = jitter_regions(t, 5, 0.3, 4);
  const Image j2 = jitter_regions(t, 5, 0.3, 4);
  EXPECT_TRUE((j1 == j2).all());
  EXPECT_TRUE(is_normalized(j1));
  const double gain = j1(0, 0) / t(0, 0);
  EXPECT_NEAR(j1(4, 4) / t(4, 4), gain, 1e-12);
  EXPECT_GE(gain, 0.7);
  EXPECT_LE(gain, 1.3);
  EXPECT_THROW(jitter_regions(t, 0, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(jitter_regions(t, 4, 1.5, 1), std::invalid_argument);
}
