#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsv {

/// Subset of a ground set {0..p-1}, stored as a 0/1 indicator vector.
using Indicator = std::vector<std::uint8_t>;

/// Per-pixel nonnegative error magnitudes for one class.
using ErrorVector = std::vector<double>;

/// Integer label per pixel. Binary masks use {-1, +1}, multiclass masks
/// use class indices in [0, num_classes).
using LabelMask = std::vector<int>;

/// Dense row-major matrix of pixels x classes. Used both for unnormalized
/// scores and for softmax probabilities.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

using ScoreField = Matrix;
using ProbField = Matrix;

/// Lovász extension value plus its gradient with respect to the errors.
struct ExtensionResult {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Scalar loss plus gradient with respect to a binary score vector.
struct BinaryLossResult {
  double value = 0.0;
  std::vector<double> grad;
};

/// Scalar loss plus gradient with respect to a pixels x classes score field.
struct MulticlassLossResult {
  double value = 0.0;
  Matrix grad;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace lsv
