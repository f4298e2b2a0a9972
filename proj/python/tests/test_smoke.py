import math

import numpy as np
import pytest

import lovasz


def test_jaccard_grad_known_values():
    value, grad = lovasz.jaccard_grad([0.9, 0.5, 0.2], [1, 0, 1])
    assert value == pytest.approx(0.6, abs=1e-12)
    assert grad == pytest.approx([0.5, 1.0 / 6.0, 1.0 / 3.0], abs=1e-12)


def test_lovasz_hinge_reduces_to_hinge_for_one_pixel():
    value, grad = lovasz.lovasz_hinge([0.3], [1])
    assert value == pytest.approx(0.7)
    assert grad == pytest.approx([-1.0])


def test_lovasz_softmax_confident_limit():
    scores = np.array([[50.0, 0.0], [0.0, 50.0]])
    labels = [0, 0]
    value_present, grad = lovasz.lovasz_softmax(scores, labels, class_mode="present")
    assert value_present == pytest.approx(0.5, abs=1e-9)
    assert grad.shape == (2, 2)
    value_all, _ = lovasz.lovasz_softmax(scores, labels, class_mode="all")
    assert value_all == pytest.approx(0.75, abs=1e-9)


def test_cross_entropy_uniform():
    value, grad = lovasz.cross_entropy(np.zeros((4, 3)), [0, 1, 2, 0])
    assert value == pytest.approx(math.log(3.0))
    assert grad.shape == (4, 3)


def test_softmax_rows_sum_to_one():
    probs = lovasz.softmax(np.array([[1.0, 2.0, 3.0], [100.0, 0.0, -50.0]]))
    assert np.allclose(probs.sum(axis=1), 1.0)
    assert probs.min() >= 0.0


def test_metrics():
    assert lovasz.jaccard_index([1, 1, 0, 0], [0, 1, 1, 0], 1) == pytest.approx(1 / 3)
    assert lovasz.dice([1, 1, 0, 0], [0, 1, 1, 0], 1) == pytest.approx(0.5)
    per_class, dataset_miou, image_miou = lovasz.iou_report(
        [[0, 1], [1, 1]], [[0, 1], [1, 0]], 2
    )
    assert per_class.shape == (2,)
    assert 0.0 <= dataset_miou <= 1.0
    assert 0.0 <= image_miou <= 1.0


def test_prox_interior_step():
    out = lovasz.prox_lovasz_hinge([0.4, 0.1], [1, 1], 10.0)
    assert out == pytest.approx([0.35, 0.05], abs=1e-12)


def test_poly_lr():
    assert lovasz.poly_lr(0.5, 100, 0.9, 0) == pytest.approx(0.5)
    assert lovasz.poly_lr(0.5, 100, 0.9, 100) == 0.0


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        lovasz.lovasz_hinge([0.1, 0.2], [1, 0])  # labels must be -1/+1
    with pytest.raises(ValueError):
        lovasz.rahman_wang_iou([1.5], [1])
    with pytest.raises(ValueError):
        lovasz.lovasz_softmax(np.zeros((2, 2)), [0, 3])


def test_rahman_wang():
    value, grad = lovasz.rahman_wang_iou([0.5], [1])
    assert value == pytest.approx(0.5)
    assert grad == pytest.approx([-1.0])
