"""
Standalone classifier fitting, outside the joint small-stage schedule
"""
import logging
from typing import Optional, Sequence

import torch

from .classes import FovClassSpec
from .network import FOV_CHANNELS, FovEstimator, fov_loss

logger = logging.getLogger(__name__)


def fit_classifier(
    views: torch.Tensor,
    labels: torch.Tensor,
    spec: FovClassSpec,
    steps: int = 500,
    batch_size: int = 32,
    lr: float = 2e-4,
    betas=(0.5, 0.99),
    seed: int = 0,
    channels: Sequence[int] = FOV_CHANNELS,
    model: Optional[FovEstimator] = None,
) -> FovEstimator:
    """
    Fit the classifier with Adam on minibatches drawn with a seeded generator

    Args:
        views: (n, 4, 3, K, K) normalized view sets
        labels: (n,) class indices
    """
    torch.manual_seed(seed)
    generator = torch.Generator().manual_seed(seed)
    model = model or FovEstimator(spec.n_classes, channels)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr, betas=betas)
    model.train()
    n = views.shape[0]
    for step in range(steps):
        batch = torch.randint(n, (min(batch_size, n),), generator=generator)
        loss = fov_loss(model(views[batch]), labels[batch])
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        if (step + 1) % 100 == 0:
            logger.debug("fov fit step %d: loss %.4f", step + 1, loss.item())
    return model


@torch.no_grad()
def classifier_accuracy(model: FovEstimator, views: torch.Tensor, labels: torch.Tensor, batch_size: int = 64) -> float:
    model.eval()
    correct = 0
    for start in range(0, views.shape[0], batch_size):
        logits = model(views[start:start + batch_size])
        correct += int((logits.argmax(dim=1) == labels[start:start + batch_size]).sum())
    return correct / views.shape[0]
