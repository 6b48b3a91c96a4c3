from __future__ import annotations

import sys

import numpy as np
import pytest

from kwgmo.baseline import (
    Exponential,
    ExponentiatedPareto,
    ExtendedWeibull,
    Frechet,
    Gompertz,
    Lomax,
    ModifiedWeibull,
    Weibull,
    ZFunction,
)
from kwgmo.family import FamilyParams, KwGMODistribution

EIGHT_FAMILIES = ("exp", "weibull", "lomax", "frechet", "gompertz", "ew", "mw", "ep")
EW_KINDS = ("linear", "square", "logratio", "gompertz")


def random_baseline(rng: np.random.Generator, family: str):
    """A baseline with moderate random parameters."""
    u = lambda lo, hi: float(rng.uniform(lo, hi))  # noqa: E731
    if family == "exp":
        return Exponential(lam=u(0.3, 3.0))
    if family == "weibull":
        return Weibull(lam=u(0.3, 3.0), beta=u(0.5, 3.0))
    if family == "lomax":
        return Lomax(beta=u(1.0, 5.0), delta=u(0.5, 3.0))
    if family == "frechet":
        return Frechet(lam=u(1.0, 4.0), delta=u(0.5, 3.0))
    if family == "gompertz":
        return Gompertz(beta=u(0.2, 2.0), lam=u(0.2, 2.0))
    if family == "ew":
        kind = EW_KINDS[int(rng.integers(len(EW_KINDS)))]
        beta = u(0.2, 2.0) if kind == "gompertz" else None
        return ExtendedWeibull(delta=u(0.3, 3.0), zfunc=ZFunction(kind, k=u(0.5, 2.0), beta=beta))
    if family == "mw":
        return ModifiedWeibull(sigma=u(0.1, 2.0), beta=u(0.1, 2.0), gamma=u(0.5, 3.0))
    if family == "ep":
        return ExponentiatedPareto(k=u(1.0, 4.0), gamma=u(0.5, 3.0), t_min=u(0.5, 2.0))
    raise ValueError(family)


def random_family(rng: np.random.Generator, lo: float = 0.3, hi: float = 3.0) -> FamilyParams:
    return FamilyParams(
        a=float(rng.uniform(lo, hi)),
        b=float(rng.uniform(lo, hi)),
        alpha=float(np.exp(rng.uniform(np.log(0.2), np.log(5.0)))),
        theta=float(rng.uniform(lo, hi)),
    )


def random_model(rng: np.random.Generator, family: str | None = None) -> KwGMODistribution:
    family = family or EIGHT_FAMILIES[int(rng.integers(len(EIGHT_FAMILIES)))]
    return KwGMODistribution(random_baseline(rng, family), random_family(rng))


def interior_grid(dist: KwGMODistribution, size: int = 100) -> np.ndarray:
    """Points at probability levels spread over (0.001, 0.999) of ``dist``."""
    return np.asarray(dist.ppf(np.linspace(0.001, 0.999, size)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
