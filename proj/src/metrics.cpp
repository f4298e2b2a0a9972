#include "lovasz/metrics.hpp"

#include <cstdio>
#include <ostream>

namespace lsv {

double jaccard_index(const LabelMask& gt, const LabelMask& pred, int c) {
  require(gt.size() == pred.size(), "jaccard_index: mask length mismatch");
  std::uint64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const bool a = gt[i] == c;
    const bool b = pred[i] == c;
    inter += (a && b);
    uni += (a || b);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double dice(const LabelMask& gt, const LabelMask& pred, int c) {
  const double j = jaccard_index(gt, pred, c);
  return 2.0 * j / (1.0 + j);
}

ConfusionAccumulator::ConfusionAccumulator(int num_classes) {
  require(num_classes >= 1, "ConfusionAccumulator: need at least one class");
  intersection_.assign(static_cast<std::size_t>(num_classes), 0);
  union_.assign(static_cast<std::size_t>(num_classes), 0);
}

void ConfusionAccumulator::accumulate(const LabelMask& gt, const LabelMask& pred) {
  require(gt.size() == pred.size(), "accumulate: mask length mismatch");
  const int nc = num_classes();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    require(gt[i] >= 0 && gt[i] < nc, "accumulate: ground-truth label outside class set");
    require(pred[i] >= 0 && pred[i] < nc, "accumulate: predicted label outside class set");
    if (gt[i] == pred[i]) {
      intersection_[static_cast<std::size_t>(gt[i])] += 1;
      union_[static_cast<std::size_t>(gt[i])] += 1;
    } else {
      union_[static_cast<std::size_t>(gt[i])] += 1;
      union_[static_cast<std::size_t>(pred[i])] += 1;
    }
  }
  images_seen_ += 1;
}

void ConfusionAccumulator::merge(const ConfusionAccumulator& other) {
  require(other.num_classes() == num_classes(), "merge: class set mismatch");
  for (std::size_t c = 0; c < intersection_.size(); ++c) {
    intersection_[c] += other.intersection_[c];
    union_[c] += other.union_[c];
  }
  images_seen_ += other.images_seen_;
}

IoUReport dataset_miou(const ConfusionAccumulator& acc) {
  IoUReport report;
  const int nc = acc.num_classes();
  report.per_class_iou.resize(static_cast<std::size_t>(nc));
  double sum = 0.0;
  for (int c = 0; c < nc; ++c) {
    const std::uint64_t uni = acc.union_count(c);
    const double iou =
        uni == 0 ? 1.0
                 : static_cast<double>(acc.intersection_count(c)) / static_cast<double>(uni);
    report.per_class_iou[static_cast<std::size_t>(c)] = iou;
    sum += iou;
  }
  report.mean_iou = sum / static_cast<double>(nc);
  return report;
}

double image_miou(const std::vector<LabelMask>& gt_images,
                  const std::vector<LabelMask>& pred_images, int num_classes) {
  require(!gt_images.empty(), "image_miou: empty image list");
  require(gt_images.size() == pred_images.size(), "image_miou: list length mismatch");
  double total = 0.0;
  for (std::size_t img = 0; img < gt_images.size(); ++img) {
    double class_sum = 0.0;
    for (int c = 0; c < num_classes; ++c)
      class_sum += jaccard_index(gt_images[img], pred_images[img], c);
    total += class_sum / static_cast<double>(num_classes);
  }
  return total / static_cast<double>(gt_images.size());
}

void write_report_csv(std::ostream& os, const ConfusionAccumulator& acc) {
  const IoUReport report = dataset_miou(acc);
  os << "class,intersection,union,iou\n";
  char buf[64];
  for (int c = 0; c < acc.num_classes(); ++c) {
    std::snprintf(buf, sizeof(buf), "%.6f", report.per_class_iou[static_cast<std::size_t>(c)]);
    os << c << ',' << acc.intersection_count(c) << ',' << acc.union_count(c) << ','
       << buf << '\n';
  }
  std::snprintf(buf, sizeof(buf), "%.6f", report.mean_iou);
  os << "mean,,," << buf << '\n';
}

}  // namespace lsv
