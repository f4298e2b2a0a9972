#include "lovasz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "lovasz/jaccard.hpp"
#include "lovasz/parallel.hpp"

namespace lsv {

const char* loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::kCrossEntropy: return "cross_entropy";
    case LossKind::kHinge: return "hinge";
    case LossKind::kLovaszHinge: return "lovasz_hinge";
    case LossKind::kLovaszSoftmaxAll: return "lovasz_softmax_all";
    case LossKind::kLovaszSoftmaxPresent: return "lovasz_softmax_present";
    case LossKind::kRahmanWang: return "rahman_wang";
  }
  return "?";
}

std::optional<LossKind> parse_loss_kind(const std::string& name) {
  for (LossKind kind :
       {LossKind::kCrossEntropy, LossKind::kHinge, LossKind::kLovaszHinge,
        LossKind::kLovaszSoftmaxAll, LossKind::kLovaszSoftmaxPresent,
        LossKind::kRahmanWang})
    if (name == loss_kind_name(kind)) return kind;
  return std::nullopt;
}

std::vector<double> default_bias_grid() {
  std::vector<double> grid;
  grid.reserve(601);
  for (int i = -300; i <= 300; ++i) grid.push_back(static_cast<double>(i) / 100.0);
  return grid;
}

namespace {

void paint_disk(LabelMask& mask, int height, int width, double cy, double cx,
                double radius, int label) {
  const double r2 = radius * radius;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double dy = r - cy;
      const double dx = c - cx;
      if (dy * dy + dx * dx <= r2)
        mask[static_cast<std::size_t>(r) * static_cast<std::size_t>(width) +
             static_cast<std::size_t>(c)] = label;
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

SyntheticData generate_circles(const SyntheticConfig& cfg) {
  require(cfg.n_images >= 1 && cfg.height >= 1 && cfg.width >= 1,
          "generate_circles: dimensions must be positive");
  require(cfg.noise_std > 0.0, "generate_circles: noise_std must be positive");

  SyntheticData data;
  data.height = cfg.height;
  data.width = cfg.width;
  data.num_classes = 2;
  data.masks.resize(static_cast<std::size_t>(cfg.n_images));
  data.features.resize(static_cast<std::size_t>(cfg.n_images));

  const Rng base(cfg.seed);
  const std::size_t pixels =
      static_cast<std::size_t>(cfg.height) * static_cast<std::size_t>(cfg.width);
  parallel_for(static_cast<std::size_t>(cfg.n_images), [&](std::size_t img) {
    Rng rng = base.split(img);
    LabelMask mask(pixels, 0);
    const double min_side = std::min(cfg.height, cfg.width);
    const double radius = rng.uniform(0.1, 0.4) * min_side;
    const double cy = rng.uniform(0.0, static_cast<double>(cfg.height));
    const double cx = rng.uniform(0.0, static_cast<double>(cfg.width));
    paint_disk(mask, cfg.height, cfg.width, cy, cx, radius, 1);

    std::vector<double> feat(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
      const double mean = mask[i] ? cfg.feature_mean_gap : -cfg.feature_mean_gap;
      feat[i] = mean + cfg.noise_std * rng.normal();
    }
    data.masks[img] = std::move(mask);
    data.features[img] = std::move(feat);
  });
  return data;
}

SyntheticData generate_multiclass_circles(const MulticlassConfig& cfg) {
  require(cfg.n_images >= 1 && cfg.height >= 1 && cfg.width >= 1,
          "generate_multiclass_circles: dimensions must be positive");
  require(cfg.rare_image_fraction > 0.0 && cfg.rare_image_fraction <= 1.0,
          "generate_multiclass_circles: fraction must be in (0,1]");

  SyntheticData data;
  data.height = cfg.height;
  data.width = cfg.width;
  data.num_classes = 3;
  data.masks.resize(static_cast<std::size_t>(cfg.n_images));
  data.features.resize(static_cast<std::size_t>(cfg.n_images));

  const int period = std::max(1, static_cast<int>(std::lround(1.0 / cfg.rare_image_fraction)));
  const Rng base(cfg.seed);
  const std::size_t pixels =
      static_cast<std::size_t>(cfg.height) * static_cast<std::size_t>(cfg.width);
  const double means[3] = {-1.5, 0.0, 1.5};

  parallel_for(static_cast<std::size_t>(cfg.n_images), [&](std::size_t img) {
    Rng rng = base.split(img);
    LabelMask mask(pixels, 0);
    const double min_side = std::min(cfg.height, cfg.width);
    paint_disk(mask, cfg.height, cfg.width, rng.uniform(0.0, cfg.height),
               rng.uniform(0.0, cfg.width), rng.uniform(0.15, 0.35) * min_side, 1);
    if (static_cast<int>(img) % period == period - 1)
      paint_disk(mask, cfg.height, cfg.width, rng.uniform(0.0, cfg.height),
                 rng.uniform(0.0, cfg.width), rng.uniform(0.08, 0.15) * min_side, 2);

    std::vector<double> feat(pixels);
    for (std::size_t i = 0; i < pixels; ++i)
      feat[i] = means[mask[i]] + rng.normal();
    data.masks[img] = std::move(mask);
    data.features[img] = std::move(feat);
  });
  return data;
}

namespace {

LabelMask to_pm1(const LabelMask& mask01) {
  LabelMask y(mask01.size());
  for (std::size_t i = 0; i < mask01.size(); ++i) y[i] = mask01[i] == 1 ? 1 : -1;
  return y;
}

ScoreField binary_scores_to_field(const std::vector<double>& scores) {
  ScoreField field(scores.size(), 2, 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) field.at(i, 1) = scores[i];
  return field;
}

}  // namespace

double eval_loss_on_image(LossKind kind, const std::vector<double>& scores,
                          const LabelMask& mask01) {
  const LabelMask y = to_pm1(mask01);
  switch (kind) {
    case LossKind::kHinge:
      return pixel_hinge(scores, y).value;
    case LossKind::kLovaszHinge:
      return lovasz_hinge(scores, y).value;
    case LossKind::kCrossEntropy:
      return cross_entropy(binary_scores_to_field(scores), mask01).value;
    case LossKind::kLovaszSoftmaxAll:
      return lovasz_softmax(binary_scores_to_field(scores), mask01, ClassMode::kAll).value;
    case LossKind::kLovaszSoftmaxPresent:
      return lovasz_softmax(binary_scores_to_field(scores), mask01, ClassMode::kPresent)
          .value;
    case LossKind::kRahmanWang: {
      std::vector<double> probs(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i) probs[i] = sigmoid(scores[i]);
      return rahman_wang_iou(probs, y).value;
    }
  }
  return 0.0;
}

std::vector<BiasSweepRow> bias_sweep(const SyntheticData& data,
                                     const std::vector<LossKind>& losses,
                                     const std::vector<double>& bias_grid) {
  require(data.num_classes == 2, "bias_sweep: binary data required");
  require(!data.masks.empty(), "bias_sweep: empty dataset");
  require(!bias_grid.empty(), "bias_sweep: empty bias grid");
  require(std::is_sorted(bias_grid.begin(), bias_grid.end()),
          "bias_sweep: bias grid must be sorted");

  // Losses are evaluated over the pooled pixels of the whole dataset.
  std::vector<double> pooled_feat;
  LabelMask pooled_mask;
  for (std::size_t img = 0; img < data.masks.size(); ++img) {
    pooled_feat.insert(pooled_feat.end(), data.features[img].begin(),
                       data.features[img].end());
    pooled_mask.insert(pooled_mask.end(), data.masks[img].begin(),
                       data.masks[img].end());
  }

  const std::size_t n_loss = losses.size() + 1;  // + discrete jaccard reference
  std::vector<BiasSweepRow> rows(n_loss * bias_grid.size());

  parallel_for(bias_grid.size(), [&](std::size_t bi) {
    const double bias = bias_grid[bi];
    std::vector<double> scores(pooled_feat.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      scores[i] = pooled_feat[i] + bias;
    for (std::size_t li = 0; li < n_loss; ++li) {
      const std::string name =
          li < losses.size() ? loss_kind_name(losses[li]) : "jaccard";
      const double value =
          li < losses.size()
              ? eval_loss_on_image(losses[li], scores, pooled_mask)
              : discrete_jaccard_loss_binary(scores, to_pm1(pooled_mask));
      rows[li * bias_grid.size() + bi] = {name, bias, value};
    }
  });
  return rows;
}

double bias_sweep_argmin(const std::vector<BiasSweepRow>& rows, const std::string& loss) {
  double best_bias = 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& row : rows)
    if (row.loss == loss && row.value < best_value) {
      best_value = row.value;
      best_bias = row.bias;
      found = true;
    }
  require(found, "bias_sweep_argmin: no rows for loss " + loss);
  return best_bias;
}

EquibatchSampler::EquibatchSampler(std::vector<std::vector<int>> class_to_samples,
                                   std::uint64_t seed)
    : samples_(std::move(class_to_samples)), rng_(Rng(seed).split(0x9eb)) {
  require(!samples_.empty(), "EquibatchSampler: no classes");
  for (std::size_t c = 0; c < samples_.size(); ++c)
    require(!samples_[c].empty(),
            "EquibatchSampler: class " + std::to_string(c) + " has no samples");
  class_order_.resize(samples_.size());
  std::iota(class_order_.begin(), class_order_.end(), 0);
  // One fixed order reused every cycle keeps the window guarantee across
  // cycle boundaries.
  for (std::size_t i = class_order_.size(); i > 1; --i)
    std::swap(class_order_[i - 1],
              class_order_[static_cast<std::size_t>(rng_.uniform_index(i))]);
}

EquibatchSampler::Draw EquibatchSampler::next() {
  const int class_id = class_order_[pos_ % class_order_.size()];
  ++pos_;
  const auto& pool = samples_[static_cast<std::size_t>(class_id)];
  const int sample = pool[static_cast<std::size_t>(rng_.uniform_index(pool.size()))];
  return {class_id, sample};
}

namespace {

// On binary data every loss trains the single-score model F = w x + b; the
// softmax-based losses see the two-column field [0, F], so only column 1
// carries gradient.
BinaryLossResult binary_loss_and_grad(LossKind kind, const std::vector<double>& scores,
                                      const LabelMask& mask01) {
  switch (kind) {
    case LossKind::kHinge:
      return pixel_hinge(scores, to_pm1(mask01));
    case LossKind::kLovaszHinge:
      return lovasz_hinge(scores, to_pm1(mask01));
    case LossKind::kRahmanWang: {
      std::vector<double> probs(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i) probs[i] = sigmoid(scores[i]);
      BinaryLossResult loss = rahman_wang_iou(probs, to_pm1(mask01));
      for (std::size_t i = 0; i < scores.size(); ++i)
        loss.grad[i] *= probs[i] * (1.0 - probs[i]);
      return loss;
    }
    case LossKind::kCrossEntropy:
    case LossKind::kLovaszSoftmaxAll:
    case LossKind::kLovaszSoftmaxPresent: {
      const ScoreField field = binary_scores_to_field(scores);
      MulticlassLossResult mc;
      if (kind == LossKind::kCrossEntropy)
        mc = cross_entropy(field, mask01);
      else
        mc = lovasz_softmax(field, mask01,
                            kind == LossKind::kLovaszSoftmaxAll ? ClassMode::kAll
                                                                : ClassMode::kPresent);
      BinaryLossResult loss;
      loss.value = mc.value;
      loss.grad.resize(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i) loss.grad[i] = mc.grad.at(i, 1);
      return loss;
    }
  }
  return {};
}

struct LinearModel {
  std::vector<double> w;  // one weight per class (single shared feature)
  std::vector<double> b;

  std::vector<double> binary_scores(const std::vector<double>& feat) const {
    std::vector<double> scores(feat.size());
    for (std::size_t i = 0; i < feat.size(); ++i) scores[i] = w[0] * feat[i] + b[0];
    return scores;
  }

  ScoreField multiclass_scores(const std::vector<double>& feat) const {
    ScoreField field(feat.size(), w.size());
    for (std::size_t i = 0; i < feat.size(); ++i)
      for (std::size_t c = 0; c < w.size(); ++c)
        field.at(i, c) = w[c] * feat[i] + b[c];
    return field;
  }
};

bool is_binary_loss(LossKind kind) {
  return kind == LossKind::kHinge || kind == LossKind::kLovaszHinge ||
         kind == LossKind::kRahmanWang;
}

}  // namespace

ExperimentResult train_linear(const SyntheticData& data, const TrainConfig& cfg) {
  const int n = static_cast<int>(data.masks.size());
  require(n >= 2, "train_linear: need at least two images");
  require(cfg.batch_size >= 1 && cfg.epochs >= 1, "train_linear: bad config");
  const int n_val = std::max(1, n / 5);
  const int n_train = n - n_val;
  require(n_train >= 1, "train_linear: no training images left");
  if (is_binary_loss(cfg.loss))
    require(data.num_classes == 2, "train_linear: binary loss needs binary data");
  if (cfg.optimizer == OptimizerKind::kProx)
    require(cfg.loss == LossKind::kLovaszHinge,
            "train_linear: the proximal optimizer applies to the Lovász hinge");

  // binary data always trains the single-score model, whatever the loss
  const bool binary = data.num_classes == 2;
  const std::size_t nc = binary ? 1 : static_cast<std::size_t>(data.num_classes);
  LinearModel model;
  model.w.assign(nc, binary ? 1.0 : 0.0);
  model.b.assign(nc, 0.0);

  const int steps_per_epoch = (n_train + cfg.batch_size - 1) / cfg.batch_size;
  const long total_steps = static_cast<long>(cfg.epochs) * steps_per_epoch;
  const LRSchedule sched{cfg.lr_base, total_steps, cfg.lr_power};

  Rng rng = Rng(cfg.seed).split(0x7ea1);
  std::vector<int> train_order(static_cast<std::size_t>(n_train));
  std::iota(train_order.begin(), train_order.end(), 0);

  std::optional<EquibatchSampler> equibatch;
  if (cfg.equibatch) {
    std::vector<std::vector<int>> class_to_images(
        static_cast<std::size_t>(data.num_classes));
    for (int img = 0; img < n_train; ++img)
      for (int c = 0; c < data.num_classes; ++c)
        if (std::find(data.masks[static_cast<std::size_t>(img)].begin(),
                      data.masks[static_cast<std::size_t>(img)].end(),
                      c) != data.masks[static_cast<std::size_t>(img)].end())
          class_to_images[static_cast<std::size_t>(c)].push_back(img);
    equibatch.emplace(std::move(class_to_images), cfg.seed);
  }

  std::vector<LabelMask> val_gt(data.masks.begin() + n_train, data.masks.end());
  const auto predict_validation = [&] {
    std::vector<LabelMask> preds;
    preds.reserve(val_gt.size());
    for (int img = n_train; img < n; ++img) {
      const auto& feat = data.features[static_cast<std::size_t>(img)];
      LabelMask pred(feat.size(), 0);
      if (binary) {
        for (std::size_t i = 0; i < feat.size(); ++i)
          pred[i] = (model.w[0] * feat[i] + model.b[0]) > 0.0 ? 1 : 0;
      } else {
        for (std::size_t i = 0; i < feat.size(); ++i) {
          int best = 0;
          double best_score = model.w[0] * feat[i] + model.b[0];
          for (std::size_t c = 1; c < nc; ++c) {
            const double s = model.w[c] * feat[i] + model.b[c];
            if (s > best_score) {
              best_score = s;
              best = static_cast<int>(c);
            }
          }
          pred[i] = best;
        }
      }
      preds.push_back(std::move(pred));
    }
    return preds;
  };

  ExperimentResult result;
  MomentumState momentum;
  momentum.velocity.assign(2 * nc, 0.0);

  long step = 0;
  std::size_t order_pos = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (!cfg.equibatch) {
      for (std::size_t i = train_order.size(); i > 1; --i)
        std::swap(train_order[i - 1],
                  train_order[static_cast<std::size_t>(rng.uniform_index(i))]);
      order_pos = 0;
    }
    for (int batch = 0; batch < steps_per_epoch; ++batch, ++step) {
      std::vector<int> batch_images;
      for (int k = 0; k < cfg.batch_size; ++k) {
        if (cfg.equibatch) {
          batch_images.push_back(equibatch->next().sample_id);
        } else {
          batch_images.push_back(train_order[order_pos % train_order.size()]);
          ++order_pos;
        }
      }

      const double eta = poly_lr(sched, step);
      for (std::size_t c = 0; c < nc; ++c)
        if (!std::isfinite(model.w[c]) || !std::isfinite(model.b[c]))
          throw std::runtime_error("train_linear: parameters diverged at step " +
                                   std::to_string(step));
      double batch_loss = 0.0;
      std::vector<double> grad(2 * nc, 0.0);  // layout: weights then biases

      try {
      if (binary) {
        for (int img : batch_images) {
          const auto& feat = data.features[static_cast<std::size_t>(img)];
          const LabelMask& mask01 = data.masks[static_cast<std::size_t>(img)];
          const std::vector<double> scores = model.binary_scores(feat);
          BinaryLossResult loss;
          if (cfg.loss == LossKind::kLovaszHinge &&
              cfg.optimizer == OptimizerKind::kProx) {
            ProxConfig prox_cfg;
            prox_cfg.lambda = 1.0 / std::max(eta, 1e-12);
            loss = lovasz_hinge_prox_grad(scores, to_pm1(mask01), prox_cfg);
          } else {
            loss = binary_loss_and_grad(cfg.loss, scores, mask01);
          }
          batch_loss += loss.value;
          for (std::size_t i = 0; i < feat.size(); ++i) {
            grad[0] += loss.grad[i] * feat[i];
            grad[1] += loss.grad[i];
          }
        }
        const double inv = 1.0 / static_cast<double>(batch_images.size());
        batch_loss *= inv;
        grad[0] *= inv;
        grad[1] *= inv;
      } else {
        // Pool the batch's pixels so the class average runs over the batch
        // ground truth.
        std::size_t rows = 0;
        for (int img : batch_images)
          rows += data.features[static_cast<std::size_t>(img)].size();
        std::vector<double> feat_pool;
        feat_pool.reserve(rows);
        LabelMask y_pool;
        y_pool.reserve(rows);
        for (int img : batch_images) {
          const auto& feat = data.features[static_cast<std::size_t>(img)];
          const auto& mask = data.masks[static_cast<std::size_t>(img)];
          feat_pool.insert(feat_pool.end(), feat.begin(), feat.end());
          y_pool.insert(y_pool.end(), mask.begin(), mask.end());
        }
        ScoreField field = model.multiclass_scores(feat_pool);
        MulticlassLossResult loss;
        switch (cfg.loss) {
          case LossKind::kCrossEntropy:
            loss = cross_entropy(field, y_pool);
            break;
          case LossKind::kLovaszSoftmaxAll:
            loss = lovasz_softmax(field, y_pool, ClassMode::kAll);
            break;
          case LossKind::kLovaszSoftmaxPresent:
            loss = lovasz_softmax(field, y_pool, ClassMode::kPresent);
            break;
          default:
            break;
        }
        batch_loss = loss.value;
        for (std::size_t i = 0; i < feat_pool.size(); ++i)
          for (std::size_t c = 0; c < nc; ++c) {
            grad[c] += loss.grad.at(i, c) * feat_pool[i];
            grad[nc + c] += loss.grad.at(i, c);
          }
      }

      } catch (const std::invalid_argument& e) {
        // non-finite scores reaching a loss layer mean the run blew up
        throw std::runtime_error("train_linear: loss diverged at step " +
                                 std::to_string(step) + " (" + e.what() + ")");
      }
      if (!std::isfinite(batch_loss))
        throw std::runtime_error("train_linear: loss diverged at step " +
                                 std::to_string(step));
      for (double g : grad)
        if (!std::isfinite(g))
          throw std::runtime_error("train_linear: gradient diverged at step " +
                                   std::to_string(step));

      if (cfg.train_bias_only)
        for (std::size_t c = 0; c < nc; ++c) grad[c] = 0.0;

      const double alpha =
          cfg.optimizer == OptimizerKind::kMomentum ? cfg.momentum_alpha : 0.0;
      const std::vector<double> delta = momentum_step(momentum, grad, eta, alpha);
      for (std::size_t c = 0; c < nc; ++c) {
        model.w[c] += delta[c];
        model.b[c] += delta[nc + c];
      }

      if ((step + 1) % cfg.eval_interval == 0 || step + 1 == total_steps) {
        const std::vector<LabelMask> preds = predict_validation();
        ConfusionAccumulator acc(data.num_classes);
        for (std::size_t i = 0; i < val_gt.size(); ++i)
          acc.accumulate(val_gt[i], preds[i]);
        result.records.push_back({step + 1, batch_loss,
                                  image_miou(val_gt, preds, data.num_classes),
                                  dataset_miou(acc).mean_iou});
      }
    }
  }

  const std::vector<LabelMask> preds = predict_validation();
  ConfusionAccumulator acc(data.num_classes);
  for (std::size_t i = 0; i < val_gt.size(); ++i) acc.accumulate(val_gt[i], preds[i]);
  result.final_report = dataset_miou(acc);
  result.weights = model.w;
  result.biases = model.b;
  return result;
}

std::string experiment_csv(const ExperimentResult& result) {
  std::string out = "step,loss,image_miou,dataset_miou\n";
  char buf[160];
  for (const auto& rec : result.records) {
    std::snprintf(buf, sizeof(buf), "%ld,%.9g,%.9g,%.9g\n", rec.step, rec.loss,
                  rec.image_miou, rec.dataset_miou);
    out += buf;
  }
  return out;
}

AbsentClassProbe absent_class_probe(const std::vector<LabelMask>& gt,
                                    const std::vector<LabelMask>& pred, int num_classes,
                                    int probe_class, int image_index, int flip_count) {
  require(gt.size() == pred.size() && !gt.empty(), "absent_class_probe: bad mask lists");
  require(image_index >= 0 && static_cast<std::size_t>(image_index) < gt.size(),
          "absent_class_probe: image index out of range");
  require(probe_class >= 0 && probe_class < num_classes,
          "absent_class_probe: class out of range");
  const auto& gt_img = gt[static_cast<std::size_t>(image_index)];
  require(std::find(gt_img.begin(), gt_img.end(), probe_class) == gt_img.end(),
          "absent_class_probe: class must be absent from the probed image");
  require(flip_count >= 0 &&
              static_cast<std::size_t>(flip_count) <= gt_img.size(),
          "absent_class_probe: flip count out of range");

  std::vector<LabelMask> flipped = pred;
  for (int i = 0; i < flip_count; ++i)
    flipped[static_cast<std::size_t>(image_index)][static_cast<std::size_t>(i)] =
        probe_class;

  const auto dataset_stats = [&](const std::vector<LabelMask>& preds) {
    ConfusionAccumulator acc(num_classes);
    for (std::size_t i = 0; i < gt.size(); ++i) acc.accumulate(gt[i], preds[i]);
    return acc;
  };

  AbsentClassProbe probe;
  probe.image_miou_before = image_miou(gt, pred, num_classes);
  probe.image_miou_after = image_miou(gt, flipped, num_classes);
  const ConfusionAccumulator before = dataset_stats(pred);
  const ConfusionAccumulator after = dataset_stats(flipped);
  probe.dataset_miou_before = dataset_miou(before).mean_iou;
  probe.dataset_miou_after = dataset_miou(after).mean_iou;
  probe.image_class_iou_before =
      jaccard_index(gt_img, pred[static_cast<std::size_t>(image_index)], probe_class);
  probe.image_class_iou_after = jaccard_index(
      gt_img, flipped[static_cast<std::size_t>(image_index)], probe_class);
  probe.dataset_class_iou_before = dataset_miou(before).per_class_iou[static_cast<std::size_t>(probe_class)];
  probe.dataset_class_iou_after = dataset_miou(after).per_class_iou[static_cast<std::size_t>(probe_class)];
  probe.total_pixels = 0;
  for (const auto& mask : gt) probe.total_pixels += mask.size();
  return probe;
}

}  // namespace lsv
