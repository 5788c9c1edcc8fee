"""Structural parameterization: field definitions, domains, validation, loading.

All downstream modules consume a validated, immutable ``StructuralParams``.
Validation is total: every violated constraint is collected and reported,
not just the first one found.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Mapping

log = logging.getLogger(__name__)

#: Absolute tolerance below which a structural denominator counts as singular.
EPS_SING = 1e-10

_RHO_FIELDS = ("rho_chi", "rho_ybar", "rho_g", "rho_tax", "rho_eps", "rho_u")
_SD_FIELDS = (
    "sd_omega", "sd_eta_g", "sd_taxshock", "sd_lambda", "sd_xi", "sd_v",
    "sd_costpush", "sd_natu", "sd_noise",
)


class Violation:
    """One violated parameter constraint; ``field`` names the offender."""

    kind = "invalid"

    def __init__(self, field: str, detail: str = ""):
        self.field = field
        self.detail = detail

    def __repr__(self):
        return f"{self.kind}({self.field}{': ' + self.detail if self.detail else ''})"

    def __eq__(self, other):
        return (self.kind, self.field) == (getattr(other, "kind", None), getattr(other, "field", None))

    def __hash__(self):
        return hash((self.kind, self.field))


class NonStationary(Violation):
    kind = "NonStationary"


class SingularDenominator(Violation):
    kind = "SingularDenominator"


class NegativeScale(Violation):
    kind = "NegativeScale"


class InvalidDomain(Violation):
    kind = "InvalidDomain"


class InvalidParams(ValueError):
    """Raised by :func:`validate`; carries every violated constraint."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(repr(v) for v in violations))

    def names(self) -> set[str]:
        return {v.field for v in self.violations}


@dataclass(frozen=True)
class StructuralParams:
    """Validated structural-form parameter set.

    Immutable after construction and safe to share across workers.  Use
    :func:`validate` to build one; the raw constructor performs no checks.
    """

    sigma: float      # inverse intertemporal elasticity, > 0
    theta: float      # output-unemployment slope, >= 0
    beta: float       # discount factor, in (0, 1)
    k: float          # Phillips-curve slope, >= 0
    alpha_pi: float   # policy response to inflation
    alpha_y: float    # policy response to the output gap
    c0: float
    c1: float
    c3: float
    c4: float
    s0: float
    s1: float
    s2: float
    s3: float
    s4: float
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    gamma5: float
    phi1: float
    phi2: float
    phi3: float
    rho_chi: float
    rho_ybar: float
    rho_g: float
    rho_tax: float
    rho_eps: float
    rho_u: float
    sd_omega: float
    sd_eta_g: float
    sd_taxshock: float
    sd_lambda: float
    sd_xi: float
    sd_v: float
    sd_costpush: float
    sd_natu: float
    sd_noise: float

    def denominator(self) -> float:
        """Shared denominator of the closed-form interest/output/consumption/
        investment blocks."""
        return self.s1 - self.sigma * (
            self.c1 * (self.gamma2 + self.s2) + self.gamma2 * self.s1
        )

    def taylor_denominator(self) -> float:
        """Denominator of the expected-inflation block."""
        return 1.0 - self.alpha_pi * self.beta

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    def replace(self, **overrides: float) -> "StructuralParams":
        """Validated copy with the given fields overridden."""
        return validate({**self.as_dict(), **overrides})


FIELD_NAMES = tuple(f.name for f in dataclasses.fields(StructuralParams))

#: Conventional small-scale New Keynesian calibration.  These are stock
#: textbook values chosen to sit inside every validity domain; nothing in
#: the test suite depends on the specific numbers.
DEFAULTS: dict[str, float] = {
    "sigma": 1.0, "theta": 0.5, "beta": 0.99, "k": 0.3,
    "alpha_pi": 1.5, "alpha_y": 0.125,
    "c0": 0.0, "c1": 0.6, "c3": 0.2, "c4": 0.2,
    "s0": 0.0, "s1": 0.3, "s2": 0.2, "s3": 0.1, "s4": 0.1,
    "gamma1": 0.5, "gamma2": 0.4, "gamma3": 0.1, "gamma4": 0.1, "gamma5": 0.2,
    "phi1": 1.0, "phi2": 1.0, "phi3": 1.0,
    "rho_chi": 0.5, "rho_ybar": 0.9, "rho_g": 0.8, "rho_tax": 0.8,
    "rho_eps": 0.7, "rho_u": 0.9,
    **{name: 0.01 for name in _SD_FIELDS},
}


def validate(raw: Mapping[str, Any] | StructuralParams) -> StructuralParams:
    """Validate a raw parameter mapping into a :class:`StructuralParams`.

    Missing fields are filled from :data:`DEFAULTS` (with a logged notice);
    unknown keys are rejected.  Raises :class:`InvalidParams` carrying one
    :class:`Violation` per broken constraint.  Idempotent: feeding a
    validated set back in reproduces it exactly.
    """
    if isinstance(raw, StructuralParams):
        raw = raw.as_dict()

    unknown = sorted(set(raw) - set(FIELD_NAMES))
    if unknown:
        raise InvalidParams([InvalidDomain(name, "unknown parameter") for name in unknown])

    missing = [name for name in FIELD_NAMES if name not in raw]
    if raw and missing:
        # a partial specification: say which fields fell back to defaults
        log.info("filling %d missing parameter(s) from defaults: %s",
                 len(missing), ", ".join(missing))

    values: dict[str, float] = {}
    bad_value: list[Violation] = []
    for name in FIELD_NAMES:
        try:
            values[name] = float(raw.get(name, DEFAULTS[name]))
        except (TypeError, ValueError):
            bad_value.append(InvalidDomain(name, "not a number"))
            values[name] = math.nan
    violations: list[Violation] = bad_value

    def finite(name: str) -> bool:
        return math.isfinite(values[name])

    for name in FIELD_NAMES:
        if name not in {v.field for v in bad_value} and not finite(name):
            violations.append(InvalidDomain(name, "not finite"))

    if finite("sigma") and values["sigma"] <= 0:
        violations.append(InvalidDomain("sigma", "must be > 0"))
    if finite("theta") and values["theta"] < 0:
        violations.append(InvalidDomain("theta", "must be >= 0"))
    if finite("beta") and not (0.0 < values["beta"] < 1.0):
        violations.append(InvalidDomain("beta", "must be in (0, 1)"))
    if finite("k") and values["k"] < 0:
        violations.append(InvalidDomain("k", "must be >= 0"))

    for name in _RHO_FIELDS:
        if finite(name) and abs(values[name]) >= 1.0:
            violations.append(NonStationary(name))
    for name in _SD_FIELDS:
        if finite(name) and values[name] < 0:
            violations.append(NegativeScale(name))

    if not violations:
        candidate = StructuralParams(**values)
        if abs(candidate.denominator()) <= EPS_SING:
            violations.append(SingularDenominator(
                "s1", "s1 - sigma*[c1*(gamma2+s2) + gamma2*s1] ~ 0"))
        if abs(candidate.taylor_denominator()) <= EPS_SING:
            violations.append(SingularDenominator("alpha_pi", "1 - alpha_pi*beta ~ 0"))

    if violations:
        raise InvalidParams(violations)
    return StructuralParams(**values)


def load_calibration(path: str) -> dict[str, float]:
    """Read a flat name -> number JSON calibration file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidParams([InvalidDomain("<file>", "calibration must be a JSON object")])
    return data
