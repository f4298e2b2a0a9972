#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lovasz/jaccard.hpp"
#include "lovasz/metrics.hpp"
#include "lovasz/optim.hpp"
#include "lovasz/submodular.hpp"

namespace py = pybind11;
using namespace lsv;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D (pixels x classes) array");
  Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
  std::copy(arr.data(), arr.data() + arr.size(), m.data.begin());
  return m;
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> arr({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
  return arr;
}

py::array_t<double> from_vector(const std::vector<double>& v) {
  py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), arr.mutable_data());
  return arr;
}

ClassMode parse_mode(const std::string& mode) {
  if (mode == "present") return ClassMode::kPresent;
  if (mode == "all") return ClassMode::kAll;
  throw std::invalid_argument("class_mode must be 'present' or 'all'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jaccard/IoU loss surrogates based on the Lovász extension";

  m.def(
      "jaccard_grad",
      [](const std::vector<double>& errors, const std::vector<int>& foreground) {
        Indicator delta(foreground.size());
        for (std::size_t i = 0; i < foreground.size(); ++i)
          delta[i] = foreground[i] ? 1 : 0;
        const ExtensionResult ext = jaccard_grad(errors, delta);
        return py::make_tuple(ext.value, from_vector(ext.gradient));
      },
      py::arg("errors"), py::arg("foreground"),
      "Value and gradient of the Jaccard-loss extension at a vector of errors.");

  m.def(
      "lovasz_hinge",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        const BinaryLossResult out = lovasz_hinge(scores, labels);
        return py::make_tuple(out.value, from_vector(out.grad));
      },
      py::arg("scores"), py::arg("labels"),
      "Lovász hinge for binary labels in {-1, +1}; returns (value, grad).");

  m.def(
      "pixel_hinge",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        const BinaryLossResult out = pixel_hinge(scores, labels);
        return py::make_tuple(out.value, from_vector(out.grad));
      },
      py::arg("scores"), py::arg("labels"), "Mean per-pixel hinge loss.");

  m.def(
      "lovasz_softmax",
      [](const DoubleArray& scores, const std::vector<int>& labels,
         const std::string& class_mode) {
        const MulticlassLossResult out =
            lovasz_softmax(to_matrix(scores), labels, parse_mode(class_mode));
        return py::make_tuple(out.value, from_matrix(out.grad));
      },
      py::arg("scores"), py::arg("labels"), py::arg("class_mode") = "present",
      "Lovász-Softmax over a pixels x classes score array; returns (value, grad).");

  m.def(
      "cross_entropy",
      [](const DoubleArray& scores, const std::vector<int>& labels) {
        const MulticlassLossResult out = cross_entropy(to_matrix(scores), labels);
        return py::make_tuple(out.value, from_matrix(out.grad));
      },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "rahman_wang_iou",
      [](const std::vector<double>& probs, const std::vector<int>& labels) {
        const BinaryLossResult out = rahman_wang_iou(probs, labels);
        return py::make_tuple(out.value, from_vector(out.grad));
      },
      py::arg("foreground_probs"), py::arg("labels"));

  m.def(
      "softmax",
      [](const DoubleArray& scores) { return from_matrix(softmax(to_matrix(scores))); },
      py::arg("scores"));

  m.def("jaccard_index", &jaccard_index, py::arg("gt"), py::arg("pred"),
        py::arg("class_id"),
        "Intersection-over-union of one class, with the 0/0 -> 1 convention.");
  m.def("dice", &dice, py::arg("gt"), py::arg("pred"), py::arg("class_id"));

  m.def(
      "iou_report",
      [](const std::vector<LabelMask>& gt, const std::vector<LabelMask>& pred,
         int num_classes) {
        ConfusionAccumulator acc(num_classes);
        for (std::size_t i = 0; i < gt.size(); ++i) acc.accumulate(gt[i], pred[i]);
        const IoUReport report = dataset_miou(acc);
        return py::make_tuple(from_vector(report.per_class_iou), report.mean_iou,
                              image_miou(gt, pred, num_classes));
      },
      py::arg("gt_images"), py::arg("pred_images"), py::arg("num_classes"),
      "Per-class IoU from pooled counts, dataset-mIoU and image-mIoU.");

  m.def(
      "prox_lovasz_hinge",
      [](const std::vector<double>& margins, const std::vector<int>& foreground,
         double lam) {
        Indicator delta(foreground.size());
        for (std::size_t i = 0; i < foreground.size(); ++i)
          delta[i] = foreground[i] ? 1 : 0;
        ProxConfig cfg;
        cfg.lambda = lam;
        return from_vector(prox_lovasz_hinge(margins, delta, cfg));
      },
      py::arg("margins"), py::arg("foreground"), py::arg("lam"),
      "Proximal operator of the Jaccard-loss extension in margin space.");

  m.def(
      "poly_lr",
      [](double lr_base, long max_iter, double power, long k) {
        return poly_lr(LRSchedule{lr_base, max_iter, power}, k);
      },
      py::arg("lr_base"), py::arg("max_iter"), py::arg("power"), py::arg("k"));

  m.attr("__version__") = "0.1.0";
}
