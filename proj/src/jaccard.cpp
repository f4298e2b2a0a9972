#include "lovasz/jaccard.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lsv {

namespace {

void check_binary_inputs(const std::vector<double>& scores, const LabelMask& y,
                         const char* who) {
  require(!y.empty(), std::string(who) + ": empty input");
  require(scores.size() == y.size(), std::string(who) + ": size mismatch");
  for (int label : y)
    require(label == 1 || label == -1,
            std::string(who) + ": binary labels must be -1 or +1");
  for (double s : scores)
    require(std::isfinite(s), std::string(who) + ": scores must be finite");
}

Indicator foreground_of(const LabelMask& y) {
  Indicator delta(y.size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) delta[i] = (y[i] == 1) ? 1 : 0;
  return delta;
}

void check_multiclass_inputs(const ScoreField& scores, const LabelMask& y,
                             const char* who) {
  require(scores.rows >= 1, std::string(who) + ": empty input");
  require(scores.cols >= 2, std::string(who) + ": need at least 2 classes");
  require(y.size() == scores.rows, std::string(who) + ": label/score size mismatch");
  for (int label : y)
    require(label >= 0 && static_cast<std::size_t>(label) < scores.cols,
            std::string(who) + ": label outside the declared class set");
  for (double s : scores.data)
    require(std::isfinite(s), std::string(who) + ": scores must be finite");
}

}  // namespace

SetFunction jaccard_set_function(const Indicator& delta) {
  for (auto d : delta) require(d == 0 || d == 1, "jaccard_set_function: delta entries must be 0 or 1");
  const auto p = static_cast<int>(delta.size());
  Indicator fg = delta;
  return SetFunction(p, [fg = std::move(fg)](const Indicator& mis) {
    std::size_t m_count = 0, union_count = 0;
    for (std::size_t i = 0; i < fg.size(); ++i) {
      m_count += mis[i];
      union_count += (fg[i] | mis[i]);
    }
    if (m_count == 0) return 0.0;  // covers the empty-foreground 0/0 case
    return static_cast<double>(m_count) / static_cast<double>(union_count);
  });
}

ExtensionResult jaccard_grad(const ErrorVector& m, const Indicator& delta) {
  const std::size_t p = delta.size();
  require(p >= 1, "jaccard_grad: empty ground set");
  require(m.size() == p, "jaccard_grad: dimension mismatch");
  for (double v : m) {
    require(std::isfinite(v), "jaccard_grad: errors must be finite");
    require(v >= 0.0, "jaccard_grad: errors must be nonnegative");
  }

  // Sort (value, index) pairs directly; the index tiebreak reproduces the
  // stable decreasing order with better locality than permuted gathers.
  std::vector<std::pair<double, int>> sorted(p);
  for (std::size_t i = 0; i < p; ++i) sorted[i] = {m[i], static_cast<int>(i)};
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  double total_fg = 0.0;
  for (auto d : delta) total_fg += d;

  ExtensionResult out;
  out.gradient.assign(p, 0.0);
  // Prefix Jaccard values via a running union count (the prefix itself is the
  // misprediction set, so |M| = i+1), differenced into marginal gains and
  // scattered back to pixel order.
  double union_ = total_fg;
  double prev = 0.0;
  out.value = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const auto idx = static_cast<std::size_t>(sorted[i].second);
    if (!delta[idx]) union_ += 1.0;
    const double jacc = static_cast<double>(i + 1) / union_;
    out.gradient[idx] = jacc - prev;
    prev = jacc;
    // Abel-summed value, exact at 0/1 vertices.
    const double next = (i + 1 < p) ? sorted[i + 1].first : 0.0;
    out.value += jacc * (sorted[i].first - next);
  }
  return out;
}

HingeMargins hinge_margins(const std::vector<double>& scores, const LabelMask& y) {
  check_binary_inputs(scores, y, "hinge_margins");
  HingeMargins hm;
  hm.m.resize(y.size());
  hm.dm_dF.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double margin = 1.0 - scores[i] * y[i];
    hm.m[i] = std::max(margin, 0.0);
    hm.dm_dF[i] = margin > 0.0 ? -static_cast<double>(y[i]) : 0.0;
  }
  return hm;
}

BinaryLossResult lovasz_hinge(const std::vector<double>& scores, const LabelMask& y) {
  const HingeMargins hm = hinge_margins(scores, y);
  const ExtensionResult ext = jaccard_grad(hm.m, foreground_of(y));
  BinaryLossResult out;
  out.value = ext.value;
  out.grad.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out.grad[i] = ext.gradient[i] * hm.dm_dF[i];
  return out;
}

BinaryLossResult pixel_hinge(const std::vector<double>& scores, const LabelMask& y) {
  const HingeMargins hm = hinge_margins(scores, y);
  const double p = static_cast<double>(y.size());
  BinaryLossResult out;
  out.grad.resize(y.size());
  out.value = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.value += hm.m[i] / p;
    out.grad[i] = hm.dm_dF[i] / p;
  }
  return out;
}

ProbField softmax(const ScoreField& scores) {
  for (double s : scores.data)
    require(std::isfinite(s), "softmax: scores must be finite");
  ProbField probs(scores.rows, scores.cols);
  for (std::size_t i = 0; i < scores.rows; ++i) {
    double mx = scores.at(i, 0);
    for (std::size_t c = 1; c < scores.cols; ++c) mx = std::max(mx, scores.at(i, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < scores.cols; ++c) {
      const double e = std::exp(scores.at(i, c) - mx);
      probs.at(i, c) = e;
      sum += e;
    }
    for (std::size_t c = 0; c < scores.cols; ++c) probs.at(i, c) /= sum;
  }
  return probs;
}

ErrorVector softmax_errors(const ProbField& probs, const LabelMask& y, int c) {
  require(c >= 0 && static_cast<std::size_t>(c) < probs.cols,
          "softmax_errors: unknown class");
  require(y.size() == probs.rows, "softmax_errors: label/prob size mismatch");
  for (int label : y)
    require(label >= 0 && static_cast<std::size_t>(label) < probs.cols,
            "softmax_errors: label outside the declared class set");
  ErrorVector m(probs.rows);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    const double f = probs.at(i, static_cast<std::size_t>(c));
    m[i] = (y[i] == c) ? 1.0 - f : f;
  }
  return m;
}

MulticlassLossResult lovasz_softmax(const ScoreField& scores, const LabelMask& y,
                                    ClassMode mode) {
  check_multiclass_inputs(scores, y, "lovasz_softmax");
  const std::size_t p = scores.rows;
  const std::size_t num_classes = scores.cols;

  std::vector<int> selected;
  if (mode == ClassMode::kAll) {
    selected.resize(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) selected[c] = static_cast<int>(c);
  } else {
    std::set<int> present(y.begin(), y.end());
    selected.assign(present.begin(), present.end());
    require(!selected.empty(), "lovasz_softmax: no class present");
  }

  const ProbField probs = softmax(scores);

  // q(i,c) = d(loss)/d(prob f_i(c)); classes outside the average contribute 0.
  Matrix q(p, num_classes, 0.0);
  double value = 0.0;
  for (int c : selected) {
    Indicator delta(p, 0);
    for (std::size_t i = 0; i < p; ++i) delta[i] = (y[i] == c) ? 1 : 0;
    const ErrorVector m = softmax_errors(probs, y, c);
    const ExtensionResult ext = jaccard_grad(m, delta);
    value += ext.value;
    for (std::size_t i = 0; i < p; ++i) {
      const double sign = (y[i] == c) ? -1.0 : 1.0;
      q.at(i, static_cast<std::size_t>(c)) = ext.gradient[i] * sign;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(selected.size());
  value *= inv_n;

  MulticlassLossResult out;
  out.value = value;
  out.grad = Matrix(p, num_classes, 0.0);
  // Chain through the softmax Jacobian: df_i(c)/dF_i(k) = f_i(c)(1{c=k} - f_i(k)).
  for (std::size_t i = 0; i < p; ++i) {
    double dot = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) dot += q.at(i, c) * probs.at(i, c);
    for (std::size_t k = 0; k < num_classes; ++k)
      out.grad.at(i, k) = probs.at(i, k) * (q.at(i, k) - dot) * inv_n;
  }
  return out;
}

MulticlassLossResult cross_entropy(const ScoreField& scores, const LabelMask& y) {
  check_multiclass_inputs(scores, y, "cross_entropy");
  const std::size_t p = scores.rows;
  const ProbField probs = softmax(scores);

  constexpr double kClamp = 1e-12;
  MulticlassLossResult out;
  out.grad = Matrix(p, scores.cols, 0.0);
  out.value = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double f = probs.at(i, static_cast<std::size_t>(y[i]));
    out.value -= std::log(std::max(f, kClamp));
    for (std::size_t c = 0; c < scores.cols; ++c) {
      const double onehot = (static_cast<std::size_t>(y[i]) == c) ? 1.0 : 0.0;
      out.grad.at(i, c) = (probs.at(i, c) - onehot) / static_cast<double>(p);
    }
  }
  out.value /= static_cast<double>(p);
  return out;
}

BinaryLossResult rahman_wang_iou(const std::vector<double>& fg_probs,
                                 const LabelMask& y) {
  require(!y.empty(), "rahman_wang_iou: empty input");
  require(fg_probs.size() == y.size(), "rahman_wang_iou: size mismatch");
  for (int label : y)
    require(label == 1 || label == -1,
            "rahman_wang_iou: binary labels must be -1 or +1");
  for (double f : fg_probs)
    require(f >= 0.0 && f <= 1.0, "rahman_wang_iou: probabilities must lie in [0,1]");

  double inter = 0.0, uni = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double fg = (y[i] == 1) ? 1.0 : 0.0;
    inter += fg_probs[i] * fg;
    uni += fg_probs[i] + fg;
  }
  uni -= inter;

  BinaryLossResult out;
  out.grad.assign(y.size(), 0.0);
  if (uni == 0.0) {
    out.value = 0.0;  // no foreground and all-zero probabilities
    return out;
  }
  out.value = 1.0 - inter / uni;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double di = (y[i] == 1) ? 1.0 : 0.0;  // dI/df_i
    const double du = 1.0 - di;                 // dU/df_i
    out.grad[i] = -(di * uni - inter * du) / (uni * uni);
  }
  return out;
}

double discrete_jaccard_loss_binary(const std::vector<double>& scores,
                                    const LabelMask& y) {
  check_binary_inputs(scores, y, "discrete_jaccard_loss_binary");
  std::size_t mis = 0, uni = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool pred_fg = scores[i] > 0.0;
    const bool gt_fg = y[i] == 1;
    const bool wrong = pred_fg != gt_fg;
    mis += wrong;
    uni += (gt_fg || wrong);
  }
  if (mis == 0) return 0.0;
  return static_cast<double>(mis) / static_cast<double>(uni);
}

double discrete_jaccard_loss_multiclass(const LabelMask& pred, const LabelMask& y,
                                        int num_classes, ClassMode mode) {
  require(pred.size() == y.size() && !y.empty(),
          "discrete_jaccard_loss_multiclass: size mismatch");
  std::vector<int> selected;
  if (mode == ClassMode::kAll) {
    for (int c = 0; c < num_classes; ++c) selected.push_back(c);
  } else {
    std::set<int> present(y.begin(), y.end());
    selected.assign(present.begin(), present.end());
  }
  double total = 0.0;
  for (int c : selected) {
    std::size_t mis = 0, uni = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const bool gt_fg = y[i] == c;
      const bool wrong = (pred[i] == c) != gt_fg;
      mis += wrong;
      uni += (gt_fg || wrong);
    }
    if (mis > 0) total += static_cast<double>(mis) / static_cast<double>(uni);
  }
  return total / static_cast<double>(selected.size());
}

}  // namespace lsv
