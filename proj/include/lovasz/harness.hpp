#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lovasz/metrics.hpp"
#include "lovasz/optim.hpp"
#include "lovasz/rng.hpp"
#include "lovasz/types.hpp"

namespace lsv {

/// Loss menu shared by the sweep, the trainer and the CLI.
enum class LossKind {
  kCrossEntropy,
  kHinge,
  kLovaszHinge,
  kLovaszSoftmaxAll,
  kLovaszSoftmaxPresent,
  kRahmanWang,
};

const char* loss_kind_name(LossKind kind);
std::optional<LossKind> parse_loss_kind(const std::string& name);

/// Synthetic circle dataset: binary masks plus one noisy feature per pixel.
struct SyntheticConfig {
  int n_images = 10;
  int height = 50;
  int width = 50;
  double feature_mean_gap = 0.5;  // foreground mean; background uses the negative
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> bias_grid;  // empty -> default_bias_grid()
};

/// Exhaustive-search grid for the bias term: [-3, 3] in steps of 0.01.
std::vector<double> default_bias_grid();

struct SyntheticData {
  int height = 0;
  int width = 0;
  int num_classes = 2;
  std::vector<LabelMask> masks;                 // class indices, row-major
  std::vector<std::vector<double>> features;    // one feature per pixel
};

/// Filled disks of uniform random radius in [0.1, 0.4]*min(h,w) and uniform
/// center; feature = +gap on foreground, -gap on background, plus Gaussian
/// noise. Fully determined by the seed (one derived stream per image).
SyntheticData generate_circles(const SyntheticConfig& cfg);

/// Three-class variant for the multiclass trainer: background, a common disk
/// class and a rare small disk class present in a fraction of the images.
/// Feature means are -1.5 / 0 / +1.5 with unit noise.
struct MulticlassConfig {
  int n_images = 16;
  int height = 32;
  int width = 32;
  double rare_image_fraction = 0.25;
  std::uint64_t seed = 0;
};
SyntheticData generate_multiclass_circles(const MulticlassConfig& cfg);

/// One (loss kind, bias, value) cell of the exhaustive bias search. The
/// discrete Jaccard loss of the induced labeling is emitted under the name
/// "jaccard".
struct BiasSweepRow {
  std::string loss;
  double bias = 0.0;
  double value = 0.0;
};

/// Evaluate every loss in the menu, plus the discrete Jaccard loss, for the
/// thresholding classifier F_i = f_i + b at every bias of the grid. Values
/// are means over images.
std::vector<BiasSweepRow> bias_sweep(const SyntheticData& data,
                                     const std::vector<LossKind>& losses,
                                     const std::vector<double>& bias_grid);

/// Bias of the minimal value among rows with the given loss name.
double bias_sweep_argmin(const std::vector<BiasSweepRow>& rows, const std::string& loss);

/// Value of one menu loss for a binary image given per-pixel scores and its
/// {0,1} mask (cross-entropy and softmax losses see the two-column field
/// [0, F]; Rahman-Wang sees sigmoid probabilities).
double eval_loss_on_image(LossKind kind, const std::vector<double>& scores,
                          const LabelMask& mask01);

/// Cycles over the classes in a fixed seeded order, drawing one sample of
/// each class per visit, so that every window of |C| consecutive draws
/// covers every class.
class EquibatchSampler {
 public:
  struct Draw {
    int class_id = 0;
    int sample_id = 0;
  };

  EquibatchSampler(std::vector<std::vector<int>> class_to_samples, std::uint64_t seed);
  Draw next();

  const std::vector<int>& class_order() const { return class_order_; }

 private:
  std::vector<std::vector<int>> samples_;
  std::vector<int> class_order_;
  std::size_t pos_ = 0;
  Rng rng_;
};

enum class OptimizerKind { kSgd, kMomentum, kProx };

struct TrainConfig {
  LossKind loss = LossKind::kLovaszHinge;
  OptimizerKind optimizer = OptimizerKind::kMomentum;
  int batch_size = 2;
  int epochs = 40;
  double lr_base = 0.5;
  double lr_power = 0.9;
  double momentum_alpha = 0.9;
  bool equibatch = false;
  bool train_bias_only = false;  // freeze the feature weight at 1
  std::uint64_t seed = 0;
  int eval_interval = 50;
};

struct TrainRecord {
  long step = 0;
  double loss = 0.0;
  double image_miou = 0.0;
  double dataset_miou = 0.0;
};

struct ExperimentResult {
  std::vector<TrainRecord> records;
  IoUReport final_report;
  std::vector<double> weights;  // per class for multiclass, single for binary
  std::vector<double> biases;
};

/// Train a per-pixel linear classifier (weight on the feature plus bias, per
/// class) with minibatch first-order optimization. Binary losses are
/// computed per image and averaged over the batch; multiclass losses pool
/// the batch's pixels. Validation is the last 20% of the images.
ExperimentResult train_linear(const SyntheticData& data, const TrainConfig& cfg);

/// CSV serialization of the per-step records: step,loss,image_miou,dataset_miou.
std::string experiment_csv(const ExperimentResult& result);

/// Effect of flipping the first flip_count pixels of one predicted mask to a
/// class absent from that image's ground truth.
struct AbsentClassProbe {
  double image_miou_before = 0.0, image_miou_after = 0.0;
  double dataset_miou_before = 0.0, dataset_miou_after = 0.0;
  double image_class_iou_before = 0.0, image_class_iou_after = 0.0;
  double dataset_class_iou_before = 0.0, dataset_class_iou_after = 0.0;
  std::uint64_t total_pixels = 0;
};

AbsentClassProbe absent_class_probe(const std::vector<LabelMask>& gt,
                                    const std::vector<LabelMask>& pred, int num_classes,
                                    int probe_class, int image_index, int flip_count);

}  // namespace lsv
