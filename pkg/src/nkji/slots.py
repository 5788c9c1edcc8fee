"""Canonical regressor layout shared by the coefficient, simulation and audit code.

Every endogenous variable of the common-knowledge solution is a linear
combination of the same 16 regressors (constant, lagged states, current
innovations).  Internally each variable is stored as a dense length-16
"slot vector" over this layout; the exported per-variable index sets are
a projection of it (see ``INDEX_SETS``).
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

# Slot order.  Fixed; append-only.
CONST = 0
YBAR_LAG2 = 1      # potential-output (drift) state, lag 2
OMEGA_LAG1 = 2     # potential-output innovation, lag 1
G_LAG1 = 3         # government spending, lag 1
ETA = 4            # spending innovation, current
TAX_LAG1 = 5       # tax revenue, lag 1
L_FISC = 6         # tax innovation, current
CHI_LAG1 = 7       # disclosed-information state, lag 1
LAM = 8            # news innovation, current
XI = 9             # preference shock, current
V = 10             # idiosyncratic shock, current
OMEGA = 11         # potential-output innovation, current (unobserved at t)
EPS_LAG1 = 12      # cost-push state, lag 1
VARSIGMA = 13      # cost-push innovation, current
UBAR_LAG1 = 14     # natural unemployment, lag 1
T_NATU = 15        # natural-unemployment innovation, current

NSLOT = 16

SLOT_NAMES = (
    "const", "ybar_lag2", "omega_lag1", "g_lag1", "eta", "tax_lag1", "L",
    "chi_lag1", "lambda", "xi", "v", "omega", "eps_lag1", "sigma_cp",
    "ubar_lag1", "T_natu",
)

# State symbols accepted by the point-wise expectation evaluators (everything
# except the constant, which is implicit).
STATE_NAMES = SLOT_NAMES[1:]

VARIABLES = ("r", "y", "yhat", "Eyhat", "Epi", "pi", "c", "I", "i", "u", "Eu")

# Exported index -> internal slot, per variable.  The index sets differ per
# variable; e.g. the unemployment block's index 12 multiplies the lagged
# natural unemployment rate, which lives in slot 14 internally.
_LOW = tuple(range(11))                      # indices 0..10 <-> slots 0..10
INDEX_SETS: dict[str, tuple[int, ...]] = {
    "r": _LOW,
    "y": _LOW,
    "yhat": _LOW,
    "Eyhat": tuple(range(9)),
    "Epi": tuple(range(14)),
    "pi": tuple(range(14)),
    "c": _LOW,
    "I": _LOW,
    "i": tuple(range(14)),
    "u": _LOW + (OMEGA, UBAR_LAG1),          # indices 11, 12
    "Eu": tuple(range(9)) + (UBAR_LAG1, T_NATU),   # indices 9, 10
}

Vec = NDArray[np.float64]


def unit(slot: int) -> Vec:
    v = np.zeros(NSLOT)
    v[slot] = 1.0
    return v


def to_indexed(var: str, vec: Vec) -> dict[int, float]:
    """Project a slot vector onto the exported index set of ``var``.

    Loadings outside the variable's index set must be structurally zero
    (they are for both the closed forms and the numerical solution); a
    nonzero one signals an assembly defect.
    """
    slots = INDEX_SETS[var]
    out = {idx: float(vec[slot]) for idx, slot in enumerate(slots)}
    rest = set(range(NSLOT)) - set(slots)
    if var == "yhat":
        # the output-gap equation carries a structural -1 on the current
        # potential-output innovation that is not an indexed entry
        rest.discard(OMEGA)
    if var == "u":
        rest.discard(T_NATU)  # unit coefficient on the current innovation
    stray = max((abs(float(vec[s])) for s in rest), default=0.0)
    if stray > 1e-9:
        raise AssertionError(f"variable {var!r} has loadings outside its index set (max {stray:.3e})")
    return out
