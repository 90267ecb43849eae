#include "stereocorr/matching.hpp"
#include "stereocorr/sad.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace stereocorr;

TEST(SadBlock, HandValues) {
  Image r(2, 2), t(2, 2);
  r << 1, 2, 3, 4;
  t << 2, 2, 3, 5;
  r /= 255.0;
  t /= 255.0;
  EXPECT_NEAR(sad_block(r, t), 2.0 / 255.0, 1e-15);
  EXPECT_EQ(sad_block(r, t), sad_block(t, r));
  EXPECT_EQ(sad_block(r, r), 0.0);
  EXPECT_THROW(sad_block(r, Image::Zero(2, 3)), std::invalid_argument);
}

TEST(SadBlock, MetricProperties) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Image a = oracle::random_image(5, 5, seed);
    const Image b = oracle::random_image(5, 5, seed + 1000);
    const Image c = oracle::random_image(5, 5, seed + 2000);
    ASSERT_EQ(sad_block(a, a), 0.0);
    ASSERT_EQ(sad_block(a, b), sad_block(b, a));
    ASSERT_GE(sad_block(a, b), 0.0);
    ASSERT_LE(sad_block(a, c), sad_block(a, b) + sad_block(b, c) + 1e-12);
  }
}

TEST(SadSearch, SelfMatchIsZeroAtTrueShift) {
  const Image ref = oracle::random_image(20, 20, 1);
  const Image t = extract_block(ref, {9, 7}, 5);
  const auto s = sad_search(t, ref, {7, 7}, SearchWindow::symmetric(3, 3));
  const BestShift b = best_shift(s, Extremum::minimize);
  EXPECT_EQ(b.u, 2);
  EXPECT_EQ(b.v, 0);
  EXPECT_EQ(b.score, 0.0);
}

TEST(SadSearch, ConstantDifferenceClosedForm) {
  const Image t = oracle::random_image(6, 6, 2) * 0.5;
  Image ref = Image::Zero(12, 12);
  ref.block(3, 3, 6, 6) = t + 0.125;
  const auto s = sad_search(t, ref, {3, 3}, SearchWindow{0, 0, 0, 0});
  EXPECT_NEAR(s.at(0, 0), 36 * 0.125, 1e-12);
}

TEST(SadSearch, MatchesLiteralEvaluation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image ref = oracle::random_image(11, 11, 10 + seed);
    const Image t = oracle::random_image(5, 5, 20 + seed);
    const auto s = sad_search(t, ref, {3, 3}, SearchWindow::symmetric(3, 3));
    for (int v = -3; v <= 3; ++v)
      for (int u = -3; u <= 3; ++u) {
        const auto o = oracle::sad(t, ref, 3, 3, u, v);
        ASSERT_EQ(s.is_valid(u, v), o.has_value());
        if (o) {
          ASSERT_NEAR(s.at(u, v), *o, 1e-12);
        }
      }
  }
}

TEST(SadSearch, NoiseIsKeyedAndScaled) {
  const Image ref = oracle::random_image(16, 16, 3);
  const Image t = extract_block(ref, {5, 5}, 5);
  const auto w = SearchWindow::symmetric(2, 2);
  const BlockNoise noise{NoiseSpec{0.05, 0.05, 7, 0.5}, 3};
  const auto a = sad_search(t, ref, {5, 5}, w, noise);
  const auto b = sad_search(t, ref, {5, 5}, w, noise);
  const auto clean = sad_search(t, ref, {5, 5}, w);
  EXPECT_TRUE((a.scores == b.scores).all());
  EXPECT_FALSE((a.scores == clean.scores).all());
  // the perturbation is the summed per-sample noise of both stages
  const NoiseStream stream(7, 3, w.shift_id(0, 0));
  double expected = 0.0;
  for (int k = 0; k < 25; ++k) {
    expected += 0.5 * 0.05 * stream.standard_normal(NoiseStage::multiplier, k);
    expected += 0.5 * 0.05 * stream.standard_normal(NoiseStage::integrator, k);
  }
  EXPECT_NEAR(a.at(0, 0) - clean.at(0, 0), expected, 1e-12);
}

TEST(MatchSad, IdenticalImages) {
  const Image img = oracle::random_image(30, 30, 4);
  const BlockGrid grid = partition(30, 30, 5, 2);
  const DisparityMap m = match_sad(img, img, grid, SearchWindow::symmetric(2, 2));
  ASSERT_EQ(m.valid_count(), grid.size());
  for (const auto& c : m.cells) {
    EXPECT_EQ(c.dx, 0);
    EXPECT_EQ(c.dy, 0);
    EXPECT_EQ(c.score, 0.0);
  }
}

TEST(MatchSad, TranslationExactInPerPixelMode) {
  const Image t = oracle::random_image(40, 36, 5);
  const Image r = oracle::translate(t, 2, 1);
  const BlockGrid grid = partition(40, 36, 5, 4, 3);
  const DisparityMap m = match_sad(t, r, grid, SearchWindow::symmetric(3, 3));
  EXPECT_TRUE(m.per_pixel());
  for (const auto& c : m.cells) {
    ASSERT_EQ(c.dx, 2);
    ASSERT_EQ(c.dy, 1);
    ASSERT_EQ(c.score, 0.0);
  }
}

TEST(MatchSad, LatticeFollowsStride) {
  const Image t = oracle::random_image(30, 30, 6);
  for (int overlap = 0; overlap < 5; ++overlap) {
    const BlockGrid grid = partition(30, 30, 5, overlap);
    const DisparityMap m = match_sad(t, t, grid, SearchWindow{0, 0, 0, 0});
    EXPECT_EQ(m.pitch, 5 - overlap);
    EXPECT_EQ(m.lattice_width, grid.columns);
    EXPECT_EQ(m.cell_origin(1, 1), grid.origins[static_cast<std::size_t>(grid.columns) + 1]);
  }
}

TEST(MatchSad, OperationCountsScaleWithInverseStrideSquared) {
  const Image t = oracle::random_image(64, 64, 7);
  const auto w = SearchWindow::symmetric(2, 2);
  auto counted = [&](int overlap) {
    const BlockGrid grid = partition(64, 64, 5, overlap, 2);
    OpCounts c;
    MatchOptions o;
    o.counts = &c;
    match_sad(t, t, grid, w, std::nullopt, o);
    EXPECT_EQ(c, op_count(Variant::sad, 5, w.count(), grid.size()));
    return std::pair{c.abs_diffs, grid.size()};
  };
  const auto [per_pixel_ops, per_pixel_blocks] = counted(4);
  const auto [coarse_ops, coarse_blocks] = counted(3);
  EXPECT_EQ(per_pixel_ops * coarse_blocks, coarse_ops * per_pixel_blocks);
  EXPECT_NEAR(static_cast<double>(per_pixel_ops) / coarse_ops, 4.0, 0.1);
}

TEST(MatchSad, ParallelEqualsSequentialUnderNoise) {
  const Image t = oracle::random_image(40, 40, 8);
  const Image r = oracle::translate(t, -2, 0);
  const BlockGrid grid = partition(40, 40, 5, 4, 2);
  const NoiseSpec noise{0.05, 0.05, 42, image_rms(t)};
  MatchOptions four;
  four.threads = 4;
  const auto w = SearchWindow{-3, 1, -1, 1};
  EXPECT_EQ(match_sad(t, r, grid, w, noise), match_sad(t, r, grid, w, noise, four));
  EXPECT_EQ(match_sad(t, r, grid, w), match_sad(t, r, grid, w, NoiseSpec{0, 0, 42, image_rms(t)}));
}
