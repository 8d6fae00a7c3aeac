"""
Single place where randomness is seeded and the torch device is chosen
"""
import logging
import random

import numpy as np
import torch
from django.conf import settings

logger = logging.getLogger(__name__)


def seed_everything(seed: int) -> np.random.Generator:
    """
    Seed Python, NumPy and torch from one integer

    Returns:
        A fresh NumPy generator for callers that want an explicit stream
    """
    random.seed(seed)
    np.random.seed(seed % (2**32))
    torch.manual_seed(seed)
    if getattr(settings, 'PANO360_DETERMINISTIC', True):
        torch.use_deterministic_algorithms(True, warn_only=True)
    return np.random.default_rng(seed)


def get_device() -> torch.device:
    choice = getattr(settings, 'PANO360_DEVICE', 'auto')
    if choice == 'auto':
        choice = 'cuda' if torch.cuda.is_available() else 'cpu'
    return torch.device(choice)
