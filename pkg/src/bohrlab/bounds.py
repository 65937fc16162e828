"""Checkers for the coefficient and growth lemmas, and a counterexample explorer.

The Wiener-type bounds and the refined-functional bounds are proved for
scalar-type coefficients (``A_n = a_n I``).  For general matrix coefficients
they are treated as hypotheses: violations are collected and reported,
never asserted away.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ContractError, DomainError, InvalidInputError
from .functionals import FunctionalKind, eval_functional
from .matcore import operator_norm
from .series import (
    DEFAULT_ORDER,
    DEFAULT_SAMPLES,
    MODES,
    MatrixPowerSeries,
    diagonal_blaschke,
    psi_family,
    random_schur_matrix,
    sup_norm_on_circle,
    tail_bound,
)

SLACK = 1e-9
GROWTH_RADII = tuple(round(0.1 * k, 1) for k in range(1, 10))
SCHWARZ_PICK_POINTS = (0.0, 0.3, -0.3, 0.6, -0.6)
SCHWARZ_PICK_MAX_N = 5


@dataclass(frozen=True)
class Violation:
    trial: int
    index: int
    lhs: float
    rhs: float
    slack: float
    detail: str = ""
    descriptor: dict | None = None

    def to_json_dict(self) -> dict:
        out = {
            "trial": self.trial,
            "index": self.index,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }
        if self.detail:
            out["detail"] = self.detail
        if self.descriptor is not None:
            out["descriptor"] = self.descriptor
        return out


@dataclass
class CheckReport:
    name: str
    trials: int = 0
    violations: list[Violation] = field(default_factory=list)
    max_slack_used: float = SLACK
    classification: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, trial: int, index: int, lhs: float, rhs: float, slack: float, detail: str = "",
               descriptor: dict | None = None) -> bool:
        """Append a violation when ``lhs > rhs + slack``; return whether one was added."""
        self.max_slack_used = max(self.max_slack_used, slack)
        if lhs > rhs + slack:
            self.violations.append(Violation(trial, index, float(lhs), float(rhs), slack, detail, descriptor))
            return True
        return False

    def merge(self, other: "CheckReport", trial: int, descriptor: dict | None = None) -> None:
        for v in other.violations:
            self.violations.append(
                Violation(trial, v.index, v.lhs, v.rhs, v.slack, v.detail, descriptor or v.descriptor)
            )
        self.max_slack_used = max(self.max_slack_used, other.max_slack_used)

    def to_json_dict(self) -> dict:
        vs = sorted(self.violations, key=lambda v: (v.trial, v.index, v.detail))
        out = {
            "name": self.name,
            "trials": self.trials,
            "violations": [v.to_json_dict() for v in vs],
            "max_slack_used": self.max_slack_used,
        }
        if self.classification:
            out["classification"] = self.classification
        return out


# ------------------------------------------------------------------ lemma checks


def derivative_coefficient(s: MatrixPowerSeries, a: complex, n: int) -> np.ndarray:
    """``f^{(n)}(a)/n! = sum_{m>=n} C(m, n) A_m a^{m-n}`` on the truncated polynomial."""
    c = s.coeffs
    acc = np.zeros_like(c[0])
    for m in range(s.order, n - 1, -1):
        acc = acc + comb(m, n) * c[m] * (a ** (m - n))
    return acc


def schwarz_pick_sides(s: MatrixPowerSeries, a: complex, n: int) -> tuple[float, float]:
    """Both sides of the operator Schwarz-Pick coefficient inequality at ``a``."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {abs(a)}")
    if n < 1 or n > s.order:
        raise ContractError(f"derivative order must be in 1..{s.order}, got {n}")
    fa = derivative_coefficient(s, a, 0)
    dn = derivative_coefficient(s, a, n)
    eye = np.eye(s.dim)
    lhs = (1.0 - abs(a)) ** (n - 1) * operator_norm(dn)
    left = operator_norm(eye - fa.conj().T @ fa)
    right = operator_norm(eye - fa @ fa.conj().T)
    rhs = math.sqrt(left) * math.sqrt(right) / (1.0 - abs(a) ** 2)
    return lhs, rhs


def check_schwarz_pick(s: MatrixPowerSeries, a: complex, n: int, tol: float = SLACK) -> bool:
    if not s.schur_certified:
        raise ContractError("Schwarz-Pick check needs a Schur-certified series")
    lhs, rhs = schwarz_pick_sides(s, a, n)
    return lhs <= rhs + tol


def growth_rhs(a0_norm: float, r: float) -> float:
    return (a0_norm + r) / (1.0 + a0_norm * r)


def check_growth(
    s: MatrixPowerSeries,
    r_grid: Sequence[float] = GROWTH_RADII,
    tol: float = SLACK,
    samples: int = DEFAULT_SAMPLES,
) -> CheckReport:
    """``sup_{|z|=r} ||f(z)|| <= (||A_0|| + r)/(1 + ||A_0|| r)`` on each radius."""
    if not s.schur_certified or s.a0_scalar is None:
        raise ContractError("growth check needs a certified series with scalar A_0")
    rep = CheckReport("growth", trials=1)
    a0 = abs(s.a0_scalar)
    for i, r in enumerate(r_grid):
        lhs = sup_norm_on_circle(s, r, samples)
        rep.record(0, i, lhs, growth_rhs(a0, r) + tail_bound(s, r), tol, f"r={r}")
    return rep


def check_wiener_bounds(s: MatrixPowerSeries, tol: float = SLACK) -> CheckReport:
    """Odd/even coefficient bounds; ``index`` is the coefficient index checked.

    (a) ``||A_{2k+1}|| <= 1 - sum_{j<=k} ||A_j||^2``
    (b) ``||A_{2k}|| <= 1 - sum_{j<k} ||A_j||^2 - ||A_k||^2/(1 + ||A_0||)``
    """
    if s.a0_scalar is None:
        raise ContractError("Wiener bounds need A_0 = a0 I")
    rep = CheckReport("wiener", trials=1)
    c = s.norms()
    sq = np.concatenate([[0.0], np.cumsum(c * c)])  # sq[m] = sum_{j<m} c_j^2
    for k in range(0, (s.order - 1) // 2 + 1):
        rep.record(0, 2 * k + 1, c[2 * k + 1], 1.0 - sq[k + 1], tol, f"a:k={k}")
    for k in range(1, s.order // 2 + 1):
        rhs = 1.0 - sq[k] - c[k] ** 2 / (1.0 + c[0])
        rep.record(0, 2 * k, c[2 * k], rhs, tol, f"b:k={k}")
    return rep


def theorem_a_sum(s: MatrixPowerSeries, r: float) -> tuple[float, float]:
    lin, _, _ = kernels.power_sums(s.norms(), r)
    return lin, tail_bound(s, r)


def check_theorem_a(s: MatrixPowerSeries, r: float, tol: float = SLACK) -> bool:
    """``sum ||A_n|| r^n + tail <= 1``; guaranteed only for ``r <= 1/3``."""
    if not s.schur_certified or s.a0_scalar is None:
        raise ContractError("classic Bohr check needs a certified series with scalar A_0")
    if r > 1.0 / 3.0 + 1e-15:
        warnings.warn(f"r={r} exceeds 1/3; the classic bound is not guaranteed", stacklevel=2)
    lin, tail = theorem_a_sum(s, r)
    return lin + tail <= 1.0 + tol


# ------------------------------------------------------------- sweeps / explorer


def trial_seed(seed: int, trial: int) -> int:
    """Deterministic per-trial seed derived from ``(seed, trial)``."""
    return int(np.random.SeedSequence([int(seed), int(trial)]).generate_state(1, np.uint64)[0] >> 1)


REFINED_TARGETS = {
    "lemma3-conclusion": (FunctionalKind.G, "lemma3"),
    "lemma4-conclusion": (FunctionalKind.G1, "lemma4"),
    "lemma5-conclusion": (FunctionalKind.G2, "lemma5"),
    "lemma6-conclusion": (FunctionalKind.H, "lemma6"),
    "lemma7-conclusion": (FunctionalKind.H1, "lemma7"),
    "lemma8-conclusion": (FunctionalKind.H2, "lemma8"),
}
TARGETS = ("lem22", "schwarz-pick", "growth", "theorem-a") + tuple(REFINED_TARGETS)

GENERAL_MATRIX_NOTE = (
    "inconsistent with the general-matrix-coefficient statement of the {what}; "
    "the scalar-type (A_n = a_n I) statement is not contradicted by this instance"
)
SCALAR_NOTE = "scalar-type instance: contradicts the {what} even for scalar coefficients"


def forced_instance(target: str, order: int = DEFAULT_ORDER) -> tuple[MatrixPowerSeries, dict]:
    """The hand-checkable non-scalar instances probed by the explorer."""
    if target == "lem22":
        s = diagonal_blaschke([[0.0], [0.0, 0.0, 0.0]], order)
        return s, {"forced": "diag(z, z^3)"}
    if target == "lemma3-conclusion":
        s = diagonal_blaschke([[0.0, 0.0], [0.0, 0.0, 0.0, 0.0]], order)
        return s, {"forced": "diag(z^2, z^4)"}
    if target == "lemma5-conclusion":
        return psi_family(0.5, order, 1), {"forced": "psi_a", "a": 0.5}
    raise ContractError(f"no forced instance for target '{target}'")


def _check_one(target: str, s: MatrixPowerSeries, r: float | None, slack: float, samples: int) -> CheckReport:
    if target == "lem22":
        return check_wiener_bounds(s, slack)
    if target == "growth":
        return check_growth(s, tol=slack, samples=samples)
    if target == "theorem-a":
        rep = CheckReport("theorem-a", 1)
        rr = 1.0 / 3.0 if r is None else r
        lin, tail = theorem_a_sum(s, rr)
        rep.record(0, 0, lin + tail, 1.0, slack, f"r={rr}")
        return rep
    if target == "schwarz-pick":
        rep = CheckReport("schwarz-pick", 1)
        idx = 0
        for a in SCHWARZ_PICK_POINTS:
            for n in range(1, min(SCHWARZ_PICK_MAX_N, s.order) + 1):
                lhs, rhs = schwarz_pick_sides(s, a, n)
                rep.record(0, idx, lhs, rhs, slack, f"a={a},n={n}")
                idx += 1
        return rep
    kind, const_name = REFINED_TARGETS[target]
    if r is None:
        from .radii import sharp_constant

        r = sharp_constant(const_name).value
    res = eval_functional(kind, s, r, samples)
    rep = CheckReport(target, 1)
    rep.record(0, 0, res.value, 1.0, slack, f"{kind.value} at r={r!r}")
    return rep


def _target_label(target: str) -> str:
    if target == "lem22":
        return "operator Wiener-type coefficient lemma"
    if target in REFINED_TARGETS:
        kind, name = REFINED_TARGETS[target]
        return f"refined bound {kind.value} <= 1 ({name} radius)"
    return f"{target} bound"


def explore_counterexamples(
    target: str,
    mode: str,
    trials: int,
    seed: int,
    dim: int = 2,
    order: int = DEFAULT_ORDER,
    r: float | None = None,
    include_forced: bool = False,
    slack: float = SLACK,
    samples: int = DEFAULT_SAMPLES,
) -> CheckReport:
    """Seeded random search for violations of a lemma's claim.

    Trial ``i`` uses ``random_schur_matrix(..., seed=trial_seed(seed, i))``;
    each violation carries that descriptor for replay.  The forced instance,
    when requested, is reported as trial ``-1``.
    """
    if target not in TARGETS:
        raise InvalidInputError(f"unknown target '{target}', expected one of {TARGETS}")
    if mode not in MODES:
        raise InvalidInputError(f"unknown mode '{mode}', expected one of {MODES}")
    # diagonal-blaschke has scalar A_0 only when every entry vanishes at 0
    vanish = target in REFINED_TARGETS or (mode == "diagonal-blaschke" and target != "schwarz-pick")
    rep = CheckReport(target, 0, max_slack_used=slack)
    scalar_hits = general_hits = 0
    if include_forced:
        s, desc = forced_instance(target, order)
        sub = _check_one(target, s, r, slack, samples)
        rep.merge(sub, -1, desc)
        rep.trials += 1
        if sub.violations:
            if desc.get("forced") == "psi_a":
                scalar_hits += 1
            else:
                general_hits += 1
    for i in range(trials):
        ts = trial_seed(seed, i)
        s = random_schur_matrix(dim, order, mode, ts, vanish_at_origin=vanish)
        if target == "lem22" and s.a0_scalar is None:
            raise ContractError("lem22 exploration needs generators with scalar A_0")
        sub = _check_one(target, s, r, slack, samples)
        rep.merge(sub, i, s.descriptor)
        rep.trials += 1
        if sub.violations:
            if mode == "scalar-type":
                scalar_hits += 1
            else:
                general_hits += 1
    what = _target_label(target)
    notes = []
    if general_hits:
        notes.append(GENERAL_MATRIX_NOTE.format(what=what))
    if scalar_hits:
        notes.append(SCALAR_NOTE.format(what=what))
    rep.classification = "; ".join(notes)
    return rep


def sweep(
    check: str,
    mode: str,
    trials: int,
    seed: int,
    dim: int = 2,
    order: int = DEFAULT_ORDER,
    r: float | None = None,
    slack: float = SLACK,
    samples: int = DEFAULT_SAMPLES,
) -> CheckReport:
    """Run one lemma check over seeded random series (no forced instances)."""
    name = {"wiener": "lem22", "schwarz-pick": "schwarz-pick", "growth": "growth", "theorem-a": "theorem-a"}
    if check not in name:
        raise InvalidInputError(f"unknown check '{check}', expected one of {tuple(name)}")
    rep = explore_counterexamples(name[check], mode, trials, seed, dim, order, r, False, slack, samples)
    rep.name = check
    return rep
