"""Ground truth: an independent re-solve of the model and the audits built
on it.

:func:`solve_undetermined` posits, for each endogenous variable, the same
linear combination of the 16 canonical regressors used by the closed forms,
imposes the structural equations, and solves the resulting square linear
system numerically.  Nothing here reuses the closed-form formulas, so the
two routes can cross-validate.

Equation set and conventions (the audit contract):

* consumption, saving and investment respond to the long-run income limit
  ``L_t = E_t[y_t] + rho*mu_t_hat/(1-rho)`` where the drift estimate uses
  only time-t information (the current potential-output innovation is the
  one innovation agents never observe contemporaneously);
* the financial-market clearing condition is imposed by giving saving and
  investment a single shared block;
* the dynamic demand equation (output gap versus expected gap, the policy
  rate, expected inflation and the natural rate) *defines* the
  expected-inflation block: expected inflation is solved as the block that
  makes that equation hold, mirroring how the closed forms present it.
  Its expectational consistency with actual inflation is deliberately not
  imposed; on the current-potential-innovation margin the demand equation,
  the pricing equation and the policy rule cannot all hold under a chained
  expectation, for any parameterization;
* the pricing equation and the policy rule use the true output gap
  (including the unobserved current potential-output innovation), the
  resource constraint and the unemployment link close the system;
* expected gap, expected unemployment and expected output are derived from
  the solved blocks through the AR laws.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import slots
from .coeffs import ReducedForm, _chain_expectation
from .params import StructuralParams, validate, InvalidParams
from .sim import EquilibriumPath
from .slots import NSLOT, Vec

#: blocks carrying free coefficients in the matching system, in column order
FREE_BLOCKS = ("r", "y", "yhat", "pi", "c", "I", "i", "u", "Epi")

#: the two closed-form entries that break their block's construction
#: pattern; key -> (printed description, pattern description)
SUSPECT_ENTRIES = {
    ("pi", 4): ("beta*Epi[4] + k*y[5]", "beta*Epi[4] + k*y[4]"),
    ("Eyhat", 0): ("rho_ybar*yhat[1]", "yhat[0]"),
}

COND_WARN = 1e12


class SingularSystem(RuntimeError):
    pass


class AnsatzInconsistent(RuntimeError):
    pass


def _exogenous(p: StructuralParams):
    e = slots.unit
    mu_l1 = p.rho_ybar * e(slots.YBAR_LAG2) + e(slots.OMEGA_LAG1)
    mu_t = p.rho_ybar * mu_l1 + e(slots.OMEGA)
    g_t = p.rho_g * e(slots.G_LAG1) + e(slots.ETA)
    tax_t = p.rho_tax * e(slots.TAX_LAG1) + e(slots.L_FISC)
    chi_t = p.rho_chi * e(slots.CHI_LAG1) + e(slots.LAM)
    eps_t = p.rho_eps * e(slots.EPS_LAG1) + e(slots.VARSIGMA)
    ubar_t = p.rho_u * e(slots.UBAR_LAG1) + e(slots.T_NATU)
    eta_comp = p.phi1 * e(slots.XI) + p.phi2 * chi_t + p.phi3 * e(slots.V)
    # agents' drift estimate and the discounted drift sum behind the
    # long-run income limit
    mu_hat = p.rho_ybar * mu_l1
    drift_sum = (p.rho_ybar / (1.0 - p.rho_ybar)) * mu_hat
    # natural rate: expected drift change, all on time-t information
    rbar = p.sigma * (p.rho_ybar * mu_hat - mu_hat)
    return mu_t, g_t, tax_t, chi_t, eps_t, ubar_t, eta_comp, drift_sum, rbar


def _project(vec: Vec) -> Vec:
    """Time-t information projection: zero the unobserved current
    potential-output innovation."""
    out = vec.copy()
    out[slots.OMEGA] = 0.0
    return out


def _residual(zflat: Vec, p: StructuralParams) -> Vec:
    z = {v: zflat[j * NSLOT:(j + 1) * NSLOT] for j, v in enumerate(FREE_BLOCKS)}
    mu_t, g_t, tax_t, chi_t, eps_t, ubar_t, eta_comp, drift_sum, rbar = _exogenous(p)
    e0 = slots.unit(slots.CONST)
    y_perceived = _project(z["y"])
    L = y_perceived + drift_sum

    res = [
        # output gap identity
        z["yhat"] - (z["y"] - mu_t),
        # consumption
        z["c"] - (p.c0 * e0 + p.c1 * L + p.c3 * g_t - p.c4 * tax_t + eta_comp),
        # saving (shared block with investment imposes market clearing)
        z["I"] - (p.s0 * e0 + p.s1 * L + p.s2 * z["r"] - p.s3 * g_t
                  - p.s4 * tax_t + eta_comp),
        # investment
        z["I"] - (p.gamma1 * (L - y_perceived) - p.gamma2 * z["r"]
                  - p.gamma3 * g_t - p.gamma4 * tax_t + p.gamma5 * chi_t),
        # dynamic demand; pins the expected-inflation block
        z["yhat"] - (_chain_expectation(z["yhat"], p)
                     - (z["i"] - z["Epi"] - rbar) / p.sigma),
        # unemployment link
        (z["u"] - ubar_t) + p.theta * (z["y"] - mu_t),
        # pricing
        z["pi"] - (p.beta * z["Epi"] + p.k * z["yhat"] + eps_t),
        # policy rule
        z["i"] - (p.alpha_pi * z["pi"] + p.alpha_y * z["yhat"]),
        # resource constraint
        z["y"] - (z["I"] + z["c"] + g_t),
    ]
    return np.concatenate(res)


def solve_undetermined(p: StructuralParams) -> ReducedForm:
    """Solve the matching system for all coefficient blocks.

    Returns a :class:`ReducedForm` interchangeable with the closed-form one
    (same block keys and index sets) with the solver's condition number
    attached.  Raises :class:`SingularSystem` for a numerically singular
    matching matrix and :class:`AnsatzInconsistent` if the solved
    coefficients fail to satisfy the matching equations.
    """
    n = len(FREE_BLOCKS) * NSLOT
    b = -_residual(np.zeros(n), p)
    M = np.empty((n, n))
    eye = np.eye(n)
    for col in range(n):
        M[:, col] = _residual(eye[col], p) + b
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > 1e15:
        raise SingularSystem(f"matching system is singular (cond ~ {cond:.3e})")
    try:
        zflat = np.linalg.solve(M, b)
    except np.linalg.LinAlgError as err:
        raise SingularSystem(str(err)) from err
    gap = float(np.max(np.abs(M @ zflat - b)))
    if gap > 1e-8 * (1.0 + float(np.max(np.abs(b)))):
        raise AnsatzInconsistent(
            f"matching equations unsatisfied after solve (gap {gap:.3e})")

    blocks = {v: zflat[j * NSLOT:(j + 1) * NSLOT].copy()
              for j, v in enumerate(FREE_BLOCKS)}
    blocks["Eyhat"] = _chain_expectation(blocks["yhat"], p)
    blocks["Eu"] = _chain_expectation(blocks["u"], p)
    # scrub numerical dust so structural zeros are exact in the output
    for vec in blocks.values():
        vec[np.abs(vec) < 1e-13] = 0.0
        vec.flags.writeable = False
    return ReducedForm(
        params=p,
        slot_blocks={v: blocks[v] for v in slots.VARIABLES},
        denominator=p.denominator(),
        taylor_denominator=p.taylor_denominator(),
        source="undetermined-coefficients",
        condition_number=cond,
    )


# ---------------------------------------------------------------------------
# structural residual audit on simulated paths

RESIDUAL_EQUATIONS = ("is_curve", "okun", "phillips", "taylor",
                      "saving_investment", "resource")


@dataclass(frozen=True, eq=False)
class ResidualReport:
    max_abs: dict[str, float]
    threshold: float
    series: dict[str, Vec] = field(repr=False)

    def passed(self, eq: str) -> bool:
        return self.max_abs[eq] <= self.threshold

    def all_passed(self) -> bool:
        return all(self.passed(eq) for eq in self.max_abs)


def residuals(ep: EquilibriumPath, p: StructuralParams | None = None,
              threshold: float = 1e-9) -> ResidualReport:
    """Per-period residuals of the structural equations, recomputed from the
    emitted series (expectation terms evaluated from the emitted expectation
    series, not from next-period realizations)."""
    p = p or ep.rf.params
    R = ep.regressors
    path = ep.path
    mu_l1 = p.rho_ybar * R[:, slots.YBAR_LAG2] + R[:, slots.OMEGA_LAG1]
    rbar = p.sigma * p.rho_ybar * (p.rho_ybar - 1.0) * mu_l1
    series = {
        "is_curve": ep["yhat"] - ep["Eyhat"]
                    + (ep["i"] - ep["Epi"] - rbar) / p.sigma,
        "okun": (ep["u"] - path.state("ubar"))
                + p.theta * (ep["y"] - path.state("mu")),
        "phillips": ep["pi"] - p.beta * ep["Epi"] - p.k * ep["yhat"]
                    - path.state("eps"),
        "taylor": ep["i"] - p.alpha_pi * ep["pi"] - p.alpha_y * ep["yhat"],
        "saving_investment": np.zeros(ep.T),   # single shared series
        "resource": ep["y"] - ep["I"] - ep["c"] - path.state("g"),
    }
    if ep.budget_mode == "balanced":
        series["budget"] = path.state("g") - path.state("tax")
    max_abs = {eq: float(np.max(np.abs(s))) for eq, s in series.items()}
    return ResidualReport(max_abs=max_abs, threshold=threshold, series=series)


# ---------------------------------------------------------------------------
# closed-form vs numerical comparison

@dataclass(frozen=True)
class Erratum:
    variable: str
    index: int
    table_value: float
    oracle_value: float
    rel_diff: float
    note: str = ""

    def key(self) -> tuple[str, int]:
        return (self.variable, self.index)


@dataclass(frozen=True, eq=False)
class ErrataReport:
    entries: list[Erratum]
    tol: float
    abs_floor: float
    condition_number: float
    condition_warning: bool
    suspects: dict[str, dict]

    def keys(self) -> set[tuple[str, int]]:
        return {e.key() for e in self.entries}


def _differs(a: float, b: float, tol: float, abs_floor: float) -> tuple[bool, float]:
    diff = abs(a - b)
    scale = max(abs(a), abs(b))
    rel = diff / scale if scale > 0 else 0.0
    return diff > max(tol * scale, abs_floor), rel


def compare(tables: ReducedForm, oracle: ReducedForm,
            tol: float = 1e-6, abs_floor: float = 1e-12) -> ErrataReport:
    """Entry-wise comparison of two coefficient sets over the exported
    index sets, with a resolution of the two pattern-breaking entries.

    For each suspect entry the report states the value as printed, the
    pattern-consistent variant evaluated on the closed-form parent entries,
    and whether the numerical solution supports the variant (its own blocks
    satisfy the pattern exactly and fail the printed form).
    """
    t_idx = tables.as_table()
    o_idx = oracle.as_table()
    entries: list[Erratum] = []
    for var in slots.VARIABLES:
        for idx in sorted(t_idx[var]):
            tv, ov = t_idx[var][idx], o_idx[var][idx]
            bad, rel = _differs(tv, ov, tol, abs_floor)
            if bad:
                note = ""
                if (var, idx) in SUSPECT_ENTRIES:
                    note = "pattern-breaking entry; see suspects"
                entries.append(Erratum(var, idx, tv, ov, rel, note))

    p = tables.params
    suspects: dict[str, dict] = {}

    # inflation block, index 4: printed form references the index-5 output
    # coefficient; the pattern uses index 4
    tb, ob = tables, oracle
    printed_t = p.beta * tb.block("Epi")[4] + p.k * tb.block("y")[5]
    variant_t = p.beta * tb.block("Epi")[4] + p.k * tb.block("y")[4]
    pat_gap = abs(ob.block("pi")[4]
                  - (p.beta * ob.block("Epi")[4] + p.k * ob.block("yhat")[4]))
    printed_gap = abs(ob.block("pi")[4]
                      - (p.beta * ob.block("Epi")[4] + p.k * ob.block("y")[5]))
    scale = max(abs(ob.block("pi")[4]), 1.0)
    suspects["pi[4]"] = {
        "printed": "beta*Epi[4] + k*y[5]",
        "variant": "beta*Epi[4] + k*y[4]",
        "printed_value": float(printed_t),
        "variant_value": float(variant_t),
        "variant_confirmed": bool(pat_gap <= tol * scale and printed_gap > tol * scale),
    }

    # expected-gap block, index 0: printed form repeats the index-1 formula;
    # the pattern (expectation of the gap equation) gives the gap intercept
    printed_t = p.rho_ybar * tb.block("yhat")[slots.YBAR_LAG2]
    variant_t = tb.block("yhat")[slots.CONST]
    pat_gap = abs(ob.block("Eyhat")[slots.CONST] - ob.block("yhat")[slots.CONST])
    printed_gap = abs(ob.block("Eyhat")[slots.CONST]
                      - p.rho_ybar * ob.block("yhat")[slots.YBAR_LAG2])
    scale = max(abs(ob.block("Eyhat")[slots.CONST]), 1.0)
    suspects["Eyhat[0]"] = {
        "printed": "rho_ybar*yhat[1]",
        "variant": "yhat[0]",
        "printed_value": float(printed_t),
        "variant_value": float(variant_t),
        "variant_confirmed": bool(pat_gap <= tol * scale and printed_gap > tol * scale),
    }

    cond = oracle.condition_number or 0.0
    return ErrataReport(entries=entries, tol=tol, abs_floor=abs_floor,
                        condition_number=cond,
                        condition_warning=cond > COND_WARN,
                        suspects=suspects)


def random_params(rng: np.random.Generator) -> StructuralParams:
    """A generic valid parameterization, kept away from the closed-form and
    matching-system singular surfaces."""
    while True:
        cand = {
            "sigma": rng.uniform(0.5, 3.0),
            "theta": rng.uniform(0.1, 1.0),
            "beta": rng.uniform(0.9, 0.999),
            "k": rng.uniform(0.05, 0.6),
            "alpha_pi": rng.uniform(0.2, 2.5),
            "alpha_y": rng.uniform(0.0, 1.0),
            "c0": rng.uniform(0.05, 0.5) * rng.choice((-1.0, 1.0)),
            "s0": rng.uniform(0.05, 0.5) * rng.choice((-1.0, 1.0)),
            "c1": rng.uniform(0.1, 0.9),
            "c3": rng.uniform(0.05, 0.5),
            "c4": rng.uniform(0.05, 0.5),
            "s1": rng.uniform(0.1, 0.9),
            "s2": rng.uniform(0.05, 0.5),
            "s3": rng.uniform(0.05, 0.5),
            "s4": rng.uniform(0.05, 0.5),
            "gamma1": rng.uniform(0.05, 1.2),
            "gamma2": rng.uniform(0.05, 1.2),
            "gamma3": rng.uniform(0.05, 1.2),
            "gamma4": rng.uniform(0.05, 1.2),
            "gamma5": rng.uniform(0.05, 1.2),
            "phi1": rng.uniform(0.1, 1.5),
            "phi2": rng.uniform(0.1, 1.5),
            "phi3": rng.uniform(0.1, 1.5),
            "rho_chi": rng.uniform(0.05, 0.95),
            "rho_ybar": rng.uniform(0.05, 0.95),
            "rho_g": rng.uniform(0.05, 0.95),
            "rho_tax": rng.uniform(0.05, 0.95),
            "rho_eps": rng.uniform(0.05, 0.95),
            "rho_u": rng.uniform(0.05, 0.95),
            **{f: rng.uniform(0.005, 0.05) for f in (
                "sd_omega", "sd_eta_g", "sd_taxshock", "sd_lambda", "sd_xi",
                "sd_v", "sd_costpush", "sd_natu", "sd_noise")},
        }
        try:
            p = validate(cand)
        except InvalidParams:
            continue
        if abs(p.denominator()) < 0.05 or abs(p.taylor_denominator()) < 0.05:
            continue
        return p


def _stability_draw(args: tuple[int, int, float]) -> ErrataReport:
    from .coeffs import compute_all

    seed, draw_index, tol = args
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(draw_index,)))
    p = random_params(rng)
    return compare(compute_all(p), solve_undetermined(p), tol=tol)


def stability_run(n_draws: int, seed: int, tol: float = 1e-6, workers: int = 1
                  ) -> tuple[set[tuple[str, int]], bool, list[ErrataReport]]:
    """Compare closed forms against the numerical solution across random
    parameterizations; a genuine formula divergence flags the same entries
    on every draw, a numerical accident moves around.

    Each draw gets its own counter-derived substream, so results are
    independent of the worker count.
    """
    tasks = [(seed, i, tol) for i in range(n_draws)]
    if workers <= 1:
        reports = [_stability_draw(t) for t in tasks]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_stability_draw, tasks))
    keysets = [r.keys() for r in reports]
    return keysets[0], all(ks == keysets[0] for ks in keysets), reports
