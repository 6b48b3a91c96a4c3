"""String-encoded model specifications.

A model string names a generator kind and a baseline, e.g. ``kwgmo:weibull``,
``gmo:exp``, ``kw:lomax`` or ``baseline:gompertz`` (a bare baseline id such
as ``weibull`` also means the baseline alone). The sub-kinds are the
reductions of the full model with the missing generator parameters pinned
at 1:

==========  ==============================  ============================
kind        free generator parameters       pinned at 1
==========  ==============================  ============================
kwgmo       theta, alpha, a, b              none
gmo         theta, alpha                    a, b
kw          a, b                            theta, alpha
baseline    none                            theta, alpha, a, b
==========  ==============================  ============================

Parameter vectors follow the layout ``(theta, alpha, a, b, *baseline)``
restricted to the parameters the kind carries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .baseline import (
    BASELINE_IDS,
    BaselineModel,
    baseline_free_names,
    baseline_options,
    make_baseline,
)
from .family import FamilyParams, KwGMODistribution

__all__ = ["ModelSpec", "KINDS", "FAMILY_NAMES"]

FAMILY_NAMES = ("theta", "alpha", "a", "b")
KINDS: dict[str, tuple[str, ...]] = {
    "kwgmo": ("theta", "alpha", "a", "b"),
    "gmo": ("theta", "alpha"),
    "kw": ("a", "b"),
    "baseline": (),
}
_KIND_ALIASES = {"baseline-only": "baseline"}


@dataclass(frozen=True)
class ModelSpec:
    """Which parameters a model has, which are fixed, and how to build it.

    Attributes:
        kind: ``kwgmo``, ``gmo``, ``kw`` or ``baseline``.
        baseline_id: a baseline id such as ``weibull`` or ``ew:square``.
        fixed: parameters held at a given value during fitting.
        options: fixed baseline constants (``t_min`` for ``ep``, ``k`` for
            ``ew:logratio``).
    """

    kind: str
    baseline_id: str
    fixed: Mapping[str, float] = field(default_factory=dict)
    options: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        kind = _KIND_ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {sorted(KINDS)}")
        object.__setattr__(self, "kind", kind)
        if self.baseline_id not in BASELINE_IDS:
            raise ValueError(
                f"unknown baseline {self.baseline_id!r}; expected one of {', '.join(BASELINE_IDS)}"
            )
        allowed = baseline_options(self.baseline_id)
        for key in self.options:
            if key not in allowed:
                raise ValueError(f"baseline {self.baseline_id!r} does not accept option {key!r}")
        for key, value in self.fixed.items():
            if key not in self.param_names:
                raise ValueError(f"cannot fix {key!r}: model {self.name} has parameters {self.param_names}")
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"fixed value for {key} must be positive")
        object.__setattr__(self, "fixed", {k: float(v) for k, v in self.fixed.items()})
        object.__setattr__(self, "options", {k: float(v) for k, v in self.options.items()})

    @classmethod
    def parse(
        cls,
        text: str,
        fixed: Mapping[str, float] | None = None,
        options: Mapping[str, float] | None = None,
    ) -> "ModelSpec":
        """Parse ``kind:baseline`` (or a bare baseline id)."""
        text = text.strip()
        head, _, rest = text.partition(":")
        head = _KIND_ALIASES.get(head, head)
        if head in KINDS and rest:
            kind, baseline_id = head, rest
        else:
            kind, baseline_id = "baseline", text
        return cls(kind, baseline_id, dict(fixed or {}), dict(options or {}))

    @property
    def name(self) -> str:
        return f"{self.kind}:{self.baseline_id}"

    @property
    def family_names(self) -> tuple[str, ...]:
        return KINDS[self.kind]

    @property
    def baseline_names(self) -> tuple[str, ...]:
        return baseline_free_names(self.baseline_id)

    @property
    def param_names(self) -> tuple[str, ...]:
        return self.family_names + self.baseline_names

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(n for n in self.param_names if n not in self.fixed)

    @property
    def k(self) -> int:
        """Number of free parameters."""
        return len(self.free_names)

    # -- conversions ----------------------------------------------------
    def as_mapping(self, values: Sequence[float] | Mapping[str, float]) -> dict[str, float]:
        """Full name-to-value mapping from a full or free-only vector, or a mapping."""
        if isinstance(values, Mapping):
            out = dict(self.fixed)
            out.update({k: float(v) for k, v in values.items()})
            missing = [n for n in self.param_names if n not in out]
            if missing:
                raise ValueError(f"missing parameters for {self.name}: {missing}")
            unknown = [n for n in out if n not in self.param_names]
            if unknown:
                raise ValueError(f"unknown parameters for {self.name}: {unknown}")
            return {n: out[n] for n in self.param_names}
        values = [float(v) for v in values]
        if len(values) == len(self.param_names):
            return dict(zip(self.param_names, values))
        if len(values) == len(self.free_names):
            out = dict(self.fixed)
            out.update(zip(self.free_names, values))
            return {n: out[n] for n in self.param_names}
        raise ValueError(
            f"{self.name} expects {len(self.param_names)} values {self.param_names} "
            f"(or {len(self.free_names)} free values), got {len(values)}"
        )

    def make_baseline(self, values: Sequence[float] | Mapping[str, float] | None = None) -> BaselineModel:
        if values is None:
            return make_baseline(self.baseline_id, None, **self.options)
        full = self.as_mapping(values)
        return make_baseline(self.baseline_id, [full[n] for n in self.baseline_names], **self.options)

    def build(self, values: Sequence[float] | Mapping[str, float]) -> KwGMODistribution:
        """The distribution for a parameter vector (full or free-only)."""
        full = self.as_mapping(values)
        family = {n: full.get(n, 1.0) for n in FAMILY_NAMES}
        baseline = make_baseline(self.baseline_id, [full[n] for n in self.baseline_names], **self.options)
        return KwGMODistribution(baseline, FamilyParams(family["a"], family["b"], family["alpha"], family["theta"]))

    def to_dict(self) -> dict:
        return {"model": self.name, "fixed": dict(self.fixed), "options": dict(self.options)}
