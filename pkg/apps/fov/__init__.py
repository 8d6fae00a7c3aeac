"""
Stage one: relative field-of-view classification and the FOV-constrained
equirect input it produces for synthesis
"""
from .classes import FovClassSpec
from .constrain import constrain_views, empty_mask
from .network import FovEstimator, FovPrediction, fov_forward, fov_loss
from .training import classifier_accuracy, fit_classifier

__all__ = [
    'FovClassSpec',
    'FovEstimator',
    'FovPrediction',
    'classifier_accuracy',
    'constrain_views',
    'empty_mask',
    'fit_classifier',
    'fov_forward',
    'fov_loss',
]
