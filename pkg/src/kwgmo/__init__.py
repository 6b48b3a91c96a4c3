"""Kumaraswamy generalized Marshall-Olkin (KwGMO-G) lifetime distributions.

The package composes a baseline lifetime law with a Marshall-Olkin tilt
(``alpha``) and power (``theta``), and a Kumaraswamy outer transform
(``a``, ``b``). It provides evaluation, sampling, series expansions, maximum
likelihood fitting and a command-line interface.
"""

from __future__ import annotations

from .baseline import BASELINE_IDS, BaselineModel, make_baseline
from .data import Dataset, builtin_dataset, load_dataset, save_dataset
from .estimation import FitResult, fit_mle, information_criteria, log_likelihood, score
from .family import FamilyParams, KwGMODistribution
from .models import ModelSpec

__version__ = "0.1.0"

__all__ = [
    "BASELINE_IDS",
    "BaselineModel",
    "make_baseline",
    "Dataset",
    "builtin_dataset",
    "load_dataset",
    "save_dataset",
    "FitResult",
    "fit_mle",
    "information_criteria",
    "log_likelihood",
    "score",
    "FamilyParams",
    "KwGMODistribution",
    "ModelSpec",
]
