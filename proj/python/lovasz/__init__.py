"""Jaccard/IoU loss surrogates based on the Lovász extension."""

from lovasz._core import (
    __version__,
    cross_entropy,
    dice,
    iou_report,
    jaccard_grad,
    jaccard_index,
    lovasz_hinge,
    lovasz_softmax,
    pixel_hinge,
    poly_lr,
    prox_lovasz_hinge,
    rahman_wang_iou,
    softmax,
)

__all__ = [
    "__version__",
    "cross_entropy",
    "dice",
    "iou_report",
    "jaccard_grad",
    "jaccard_index",
    "lovasz_hinge",
    "lovasz_softmax",
    "pixel_hinge",
    "poly_lr",
    "prox_lovasz_hinge",
    "rahman_wang_iou",
    "softmax",
]
