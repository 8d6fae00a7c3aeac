"""
Relative field-of-view classifier
"""
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from apps.core.exceptions import GeometryError
from apps.geometry.types import ViewSet

from .classes import FovClassSpec

FOV_CHANNELS = (32, 64, 128, 256, 256)


class FovEstimator(nn.Module):
    """
    Four views stacked channel-wise (12 channels), five stride-2 conv blocks
    with leaky ReLU, global average pooling and a linear head to N logits
    """

    def __init__(self, n_classes: int = 7, channels: Sequence[int] = FOV_CHANNELS, slope: float = 0.2):
        super().__init__()
        layers = []
        in_channels = 12
        for out_channels in channels:
            layers += [
                nn.Conv2d(in_channels, out_channels, kernel_size=3, stride=2, padding=1),
                nn.LeakyReLU(slope),
            ]
            in_channels = out_channels
        self.features = nn.Sequential(*layers)
        self.head = nn.Linear(in_channels, n_classes)

    def forward(self, views: torch.Tensor) -> torch.Tensor:
        """
        Args:
            views: (B, 4, 3, K, K) or (B, 12, K, K)

        Returns:
            (B, N) logits
        """
        if views.dim() == 5:
            views = views.flatten(1, 2)
        features = self.features(views)
        return self.head(features.mean(dim=(2, 3)))


@dataclass(frozen=True)
class FovPrediction:
    logits: np.ndarray
    predicted_class: int
    predicted_fov: float

    def as_dict(self):
        return {
            'predicted_class': self.predicted_class,
            'predicted_fov': self.predicted_fov,
            'logits': [float(x) for x in self.logits],
        }


def views_to_tensor(views: ViewSet) -> torch.Tensor:
    """(4, 3, K, K) float32 tensor from a normalized view set"""
    stacked = np.stack([np.transpose(v, (2, 0, 1)) for v in views.views])
    return torch.from_numpy(np.ascontiguousarray(stacked, dtype=np.float32))


def prediction_from_logits(logits: Union[torch.Tensor, np.ndarray], spec: FovClassSpec) -> FovPrediction:
    values = np.asarray(logits.detach().cpu() if isinstance(logits, torch.Tensor) else logits, dtype=np.float64)
    # np.argmax returns the lowest index among ties
    index = int(np.argmax(values))
    return FovPrediction(logits=values, predicted_class=index, predicted_fov=spec.center_of(index))


@torch.no_grad()
def fov_forward(views: Union[ViewSet, torch.Tensor], model: FovEstimator, spec: FovClassSpec) -> FovPrediction:
    """
    Classify the shared relative fov of one view set

    Raises:
        GeometryError: views of mismatched size (ViewSet validation)
    """
    if isinstance(views, ViewSet):
        tensor = views_to_tensor(views)
    else:
        tensor = views
        if tensor.dim() != 4 or tensor.shape[0] != 4 or tensor.shape[-1] != tensor.shape[-2]:
            raise GeometryError(f"Expected four square views shaped (4, 3, K, K), got {tuple(tensor.shape)}")
    if model.head.out_features != spec.n_classes:
        raise GeometryError(
            f"Classifier has {model.head.out_features} outputs but the fov spec has {spec.n_classes} bins"
        )
    device = next(model.parameters()).device
    was_training = model.training
    model.eval()
    logits = model(tensor.unsqueeze(0).to(device))[0]
    model.train(was_training)
    return prediction_from_logits(logits, spec)


def fov_loss(logits: torch.Tensor, label_class: Union[int, torch.Tensor]) -> torch.Tensor:
    """
    Softmax cross-entropy of the fov logits against the ground-truth bin

    Raises:
        ValueError: label outside [0, N)
    """
    if logits.dim() == 1:
        logits = logits.unsqueeze(0)
    labels = torch.as_tensor(label_class, device=logits.device, dtype=torch.long).reshape(-1)
    n_classes = logits.shape[-1]
    if bool(((labels < 0) | (labels >= n_classes)).any()):
        raise ValueError(f"fov label out of range [0, {n_classes}): {labels.tolist()}")
    return F.cross_entropy(logits, labels)
