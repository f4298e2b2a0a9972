#pragma once

#include "lovasz/submodular.hpp"
#include "lovasz/types.hpp"

namespace lsv {

/// Which classes enter the multiclass surrogate average: the full declared
/// class set, or only classes present in the batch ground truth.
enum class ClassMode { kAll, kPresent };

/// Jaccard loss as a set function of the misprediction set M:
///   M -> |M| / |{delta=1} union M|,
/// with the empty set mapping to 0 even when delta is all-zero. delta marks
/// the foreground pixels of the class under consideration.
SetFunction jaccard_set_function(const Indicator& delta);

/// Value and gradient of the Lovász extension of the Jaccard loss at m.
/// Equivalent to lovasz_extension(jaccard_set_function(delta), m) but
/// computed with one sort plus two cumulative sums, O(p log p) total.
ExtensionResult jaccard_grad(const ErrorVector& m, const Indicator& delta);

/// Hinge margins m_i = max(1 - F_i * y_i, 0) with the chain-rule factor
/// dm_i/dF_i (-y_i where the margin is strictly positive, 0 where clamped).
struct HingeMargins {
  ErrorVector m;
  std::vector<double> dm_dF;
};
HingeMargins hinge_margins(const std::vector<double>& scores, const LabelMask& y);

/// Lovász hinge: the Jaccard-loss extension evaluated on hinge margins,
/// with the gradient chained back to the scores. Piecewise linear in F.
/// Reduces to the standard hinge loss for a single prediction.
BinaryLossResult lovasz_hinge(const std::vector<double>& scores, const LabelMask& y);

/// Mean per-pixel hinge loss (the Hamming counterpart of the construction).
BinaryLossResult pixel_hinge(const std::vector<double>& scores, const LabelMask& y);

/// Row-wise softmax, computed with a max shift so large scores do not
/// overflow. Rows sum to 1.
ProbField softmax(const ScoreField& scores);

/// Pixel errors for class c: 1 - f_i(c) where the ground truth is c,
/// f_i(c) elsewhere. Entries lie in [0,1].
ErrorVector softmax_errors(const ProbField& probs, const LabelMask& y, int c);

/// Lovász-Softmax: mean over the selected class set of the Jaccard-loss
/// extension applied to the softmax error vectors, with the gradient chained
/// through the errors and the softmax Jacobian.
MulticlassLossResult lovasz_softmax(const ScoreField& scores, const LabelMask& y,
                                    ClassMode mode);

/// Multiclass cross-entropy over softmax probabilities, mean over pixels.
/// Probabilities are clamped below at 1e-12 before the log.
MulticlassLossResult cross_entropy(const ScoreField& scores, const LabelMask& y);

/// Rahman-Wang IoU approximation: loss = 1 - I/U with
/// I = sum_i f_i * [y_i = 1] and U = sum_i (f_i + [y_i = 1]) - I, on the
/// foreground probability column. U = 0 returns loss 0 (0/0 ratio read as 1).
BinaryLossResult rahman_wang_iou(const std::vector<double>& fg_probs,
                                 const LabelMask& y);

/// Discrete Jaccard loss of the thresholded labeling sign(F) against binary
/// ground truth, i.e. the set-function value at the misprediction set.
double discrete_jaccard_loss_binary(const std::vector<double>& scores,
                                    const LabelMask& y);

/// Mean over the selected class set of the discrete Jaccard loss of a
/// multiclass labeling (set-function convention: no mispredictions -> 0).
double discrete_jaccard_loss_multiclass(const LabelMask& pred, const LabelMask& y,
                                        int num_classes, ClassMode mode);

}  // namespace lsv
