#pragma once

#include <cstdint>
#include <iosfwd>

#include "lovasz/types.hpp"

namespace lsv {

/// Jaccard index of class c between two masks: |gt==c and pred==c| over
/// |gt==c or pred==c|, with the 0/0 -> 1 convention when the class is absent
/// from both.
double jaccard_index(const LabelMask& gt, const LabelMask& pred, int c);

/// Dice coefficient, derived from the Jaccard index as 2J/(1+J); 0/0 -> 1.
double dice(const LabelMask& gt, const LabelMask& pred, int c);

/// Per-class IoU plus the mean over the declared class set.
struct IoUReport {
  std::vector<double> per_class_iou;
  double mean_iou = 0.0;
};

/// Streaming per-class intersection/union counts for dataset-level metrics.
/// Counts are exact integers; division happens only at report time, so
/// accumulation is associative and order-independent.
class ConfusionAccumulator {
 public:
  explicit ConfusionAccumulator(int num_classes);

  void accumulate(const LabelMask& gt, const LabelMask& pred);
  /// Count-wise addition, for parallel map-reduce over images.
  void merge(const ConfusionAccumulator& other);

  int num_classes() const { return static_cast<int>(intersection_.size()); }
  std::uint64_t intersection_count(int c) const { return intersection_[static_cast<std::size_t>(c)]; }
  std::uint64_t union_count(int c) const { return union_[static_cast<std::size_t>(c)]; }
  std::uint64_t images_seen() const { return images_seen_; }

 private:
  std::vector<std::uint64_t> intersection_;
  std::vector<std::uint64_t> union_;
  std::uint64_t images_seen_ = 0;
};

/// Dataset-mIoU: per-class IoU from the pooled counts (0/0 -> 1), averaged
/// over the declared class set.
IoUReport dataset_miou(const ConfusionAccumulator& acc);

/// Image-mIoU: mean over images of the mean over the declared class set of
/// the per-image Jaccard index.
double image_miou(const std::vector<LabelMask>& gt_images,
                  const std::vector<LabelMask>& pred_images, int num_classes);

/// CSV report: header `class,intersection,union,iou`, one row per class,
/// final row `mean,,,<miou>`. Real values carry 6 decimal places.
void write_report_csv(std::ostream& os, const ConfusionAccumulator& acc);

}  // namespace lsv
