#include <doctest.h>

#include <sstream>

#include "lovasz/metrics.hpp"
#include "lovasz/rng.hpp"

using namespace lsv;

TEST_CASE("jaccard index basics") {
  CHECK(jaccard_index({1, 1, 0}, {1, 1, 0}, 1) == 1.0);
  CHECK(jaccard_index({0, 0}, {0, 0}, 7) == 1.0);  // absent from both: 0/0 -> 1
  // pixel sets {0,1} vs {1,2}: intersection 1, union 3
  CHECK(jaccard_index({1, 1, 0, 0}, {0, 1, 1, 0}, 1) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(jaccard_index({1}, {1, 0}, 1), std::invalid_argument);
}

TEST_CASE("dice from jaccard") {
  CHECK(dice({1, 1}, {1, 1}, 1) == 1.0);
  CHECK(dice({1, 1}, {0, 0}, 1) == 0.0);
  CHECK(dice({1, 1, 0, 0}, {0, 1, 1, 0}, 1) == doctest::Approx(0.5));
}

TEST_CASE("accumulator pools exact counts") {
  ConfusionAccumulator acc(2);
  SUBCASE("zero images read as all-ones report") {
    const IoUReport report = dataset_miou(acc);
    CHECK(report.per_class_iou[0] == 1.0);
    CHECK(report.per_class_iou[1] == 1.0);
    CHECK(report.mean_iou == 1.0);
  }
  SUBCASE("perfect prediction") {
    acc.accumulate({0, 1, 1}, {0, 1, 1});
    const IoUReport report = dataset_miou(acc);
    CHECK(report.mean_iou == 1.0);
  }
  SUBCASE("pooled counts differ from averaged ratios") {
    // two images, class 1: per-image IoUs 1 and 0, equal region sizes
    acc.accumulate({1, 1, 0, 0}, {1, 1, 0, 0});
    acc.accumulate({1, 1, 0, 0}, {0, 0, 1, 1});
    CHECK(acc.intersection_count(1) == 2);
    CHECK(acc.union_count(1) == 6);
    const IoUReport report = dataset_miou(acc);
    CHECK(report.per_class_iou[1] == doctest::Approx(2.0 / 6.0));  // not 0.5
  }
  SUBCASE("label outside the class set is rejected") {
    CHECK_THROWS_AS(acc.accumulate({0, 2}, {0, 0}), std::invalid_argument);
  }
}

TEST_CASE("single mispredicted pixel barely moves a large dataset") {
  ConfusionAccumulator acc(2);
  LabelMask gt(1000000, 1), pred = gt;
  pred[0] = 0;
  acc.accumulate(gt, pred);
  const IoUReport report = dataset_miou(acc);
  CHECK(report.per_class_iou[1] >= 1.0 - 2e-6);
}

TEST_CASE("constant prediction over balanced classes") {
  // 100 pixels, 4 balanced classes, everything predicted as class 0
  LabelMask gt(100), pred(100, 0);
  for (int i = 0; i < 100; ++i) gt[static_cast<std::size_t>(i)] = i / 25;
  ConfusionAccumulator acc(4);
  acc.accumulate(gt, pred);
  const IoUReport report = dataset_miou(acc);
  CHECK(report.per_class_iou[0] == doctest::Approx(0.25));
  CHECK(report.per_class_iou[1] == 0.0);
  CHECK(report.per_class_iou[2] == 0.0);
  CHECK(report.per_class_iou[3] == 0.0);
}

TEST_CASE("image-miou basics") {
  SUBCASE("perfect single image") {
    CHECK(image_miou({{0, 1}}, {{0, 1}}, 2) == 1.0);
  }
  SUBCASE("single absent-class false positive zeroes that class") {
    // class 1 absent from gt; predicting one pixel of it drops its IoU 1 -> 0
    const double with_fp = image_miou({{0, 0, 0}}, {{1, 0, 0}}, 2);
    CHECK(with_fp == doctest::Approx((2.0 / 3.0 + 0.0) / 2.0));
  }
  SUBCASE("mean over images") {
    const double v = image_miou({{1, 1}, {1, 1}}, {{1, 1}, {0, 0}}, 2);
    // image 1: classes {0:1, 1:1}; image 2: classes {0:0, 1:0}
    CHECK(v == doctest::Approx(0.5));
  }
  SUBCASE("empty list rejected") {
    CHECK_THROWS_AS(image_miou({}, {}, 2), std::invalid_argument);
  }
}

TEST_CASE("streaming accumulation equals one pass and merge order is free") {
  Rng rng(19);
  const int nc = 3;
  std::vector<LabelMask> gts, preds;
  LabelMask gt_all, pred_all;
  for (int img = 0; img < 5; ++img) {
    const std::size_t pixels = 10 + rng.uniform_index(30);
    LabelMask gt(pixels), pred(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
      gt[i] = static_cast<int>(rng.uniform_index(nc));
      pred[i] = static_cast<int>(rng.uniform_index(nc));
    }
    gt_all.insert(gt_all.end(), gt.begin(), gt.end());
    pred_all.insert(pred_all.end(), pred.begin(), pred.end());
    gts.push_back(std::move(gt));
    preds.push_back(std::move(pred));
  }
  ConfusionAccumulator streaming(nc), pooled(nc), left(nc), right(nc);
  for (std::size_t i = 0; i < gts.size(); ++i) streaming.accumulate(gts[i], preds[i]);
  pooled.accumulate(gt_all, pred_all);
  for (std::size_t i = 0; i < 2; ++i) left.accumulate(gts[i], preds[i]);
  for (std::size_t i = 2; i < gts.size(); ++i) right.accumulate(gts[i], preds[i]);
  right.merge(left);
  for (int c = 0; c < nc; ++c) {
    CHECK(streaming.intersection_count(c) == pooled.intersection_count(c));
    CHECK(streaming.union_count(c) == pooled.union_count(c));
    CHECK(right.intersection_count(c) == pooled.intersection_count(c));
    CHECK(right.union_count(c) == pooled.union_count(c));
  }
}

TEST_CASE("report csv schema") {
  ConfusionAccumulator acc(2);
  acc.accumulate({0, 1, 1, 0}, {0, 1, 0, 0});
  std::ostringstream os;
  write_report_csv(os, acc);
  CHECK(os.str() ==
        "class,intersection,union,iou\n"
        "0,2,3,0.666667\n"
        "1,1,2,0.500000\n"
        "mean,,,0.583333\n");
}

TEST_CASE("image and dataset miou can rank two predictors differently") {
  const std::vector<LabelMask> gt = {{2, 2, 2, 2, 0, 0, 0, 0},
                                     {1, 1, 1, 1, 0, 0, 0, 0}};
  const std::vector<LabelMask> p1 = {{2, 2, 2, 2, 0, 0, 0, 0},
                                     {1, 1, 1, 1, 0, 0, 0, 2}};
  const std::vector<LabelMask> p2 = {{2, 2, 0, 0, 0, 0, 0, 0},
                                     {1, 1, 1, 1, 0, 0, 0, 0}};
  ConfusionAccumulator acc1(3), acc2(3);
  for (int i = 0; i < 2; ++i) {
    acc1.accumulate(gt[static_cast<std::size_t>(i)], p1[static_cast<std::size_t>(i)]);
    acc2.accumulate(gt[static_cast<std::size_t>(i)], p2[static_cast<std::size_t>(i)]);
  }
  // exact expected counts for class 2: P1 (4,5), P2 (2,4)
  CHECK(acc1.intersection_count(2) == 4);
  CHECK(acc1.union_count(2) == 5);
  CHECK(acc2.intersection_count(2) == 2);
  CHECK(acc2.union_count(2) == 4);
  // image-mIoU prefers P2, dataset-mIoU prefers P1
  CHECK(image_miou(gt, p2, 3) > image_miou(gt, p1, 3));
  CHECK(dataset_miou(acc1).mean_iou > dataset_miou(acc2).mean_iou);
}

TEST_CASE("dice stays between iou and one") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t pixels = 1 + rng.uniform_index(30);
    LabelMask gt(pixels), pred(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
      gt[i] = static_cast<int>(rng.uniform_index(3));
      pred[i] = static_cast<int>(rng.uniform_index(3));
    }
    for (int c = 0; c < 3; ++c) {
      const double j = jaccard_index(gt, pred, c);
      const double d = dice(gt, pred, c);
      CHECK(j == jaccard_index(pred, gt, c));
      CHECK(j >= 0.0);
      CHECK(d <= 1.0);
      if (j == 0.0 || j == 1.0)
        CHECK(d == j);
      else
        CHECK(d > j);
    }
  }
}
