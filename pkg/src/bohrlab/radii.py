"""Sharp radii: polynomial root isolation, empirical bisection, sharpness scans, curves."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BracketError, ContractError, DegenerateFamilyError, DomainError
from .functionals import (
    FunctionalKind,
    closed_form_mobius_classic,
    closed_form_psi,
    eval_functional,
    psi_limit,
)
from .series import DEFAULT_ORDER, DEFAULT_SAMPLES, mobius_family, psi_family

ROOT_TOL = 1e-10
RADIUS_TOL = 1e-4
GOLDEN_STEPS = 40
WITNESS_SLACK = 1e-9
DEFAULT_A_GRID = tuple(round(0.01 * k, 2) for k in range(1, 100))
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RadiusResult:
    lo: float
    hi: float
    mid: float
    iterations: int
    residual: float

    def to_json_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "mid": self.mid,
            "iterations": self.iterations,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class Witness:
    """A point ``(a, r)`` of the extremal family where a functional exceeds 1.

    ``limit`` is set when the maximum is the ``a -> 1^-`` limit; ``a`` is then 1.
    """

    a: float
    r: float
    value: float
    limit: bool = False

    def to_json_dict(self) -> dict:
        return {"a": self.a, "r": self.r, "value": self.value, "limit": self.limit}


def polyval(coeffs: Sequence[float], x: float) -> float:
    """Horner evaluation, coefficients in ascending order."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def isolate_root(
    poly: Sequence[float], bracket: tuple[float, float] = (0.0, 1.0), tol: float = ROOT_TOL
) -> RadiusResult:
    """Bisection for a root of an ascending-coefficient polynomial."""
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"empty bracket ({lo}, {hi})")
    flo, fhi = polyval(poly, lo), polyval(poly, hi)
    if flo == 0.0:
        return RadiusResult(lo, lo + tol, lo, 0, 0.0)
    if fhi == 0.0:
        return RadiusResult(hi - tol, hi, hi, 0, 0.0)
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on ({lo}, {hi}): p(lo)={flo:.6g}, p(hi)={fhi:.6g}")
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = polyval(poly, mid)
        if fm == 0.0:
            lo, hi = mid - 0.25 * tol, mid + 0.25 * tol
            break
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
        it += 1
    mid = 0.5 * (lo + hi)
    return RadiusResult(lo, hi, mid, it, abs(polyval(poly, mid)))


@dataclass(frozen=True)
class SharpConstant:
    """A sharp radius stored with its defining integer polynomial (ascending)."""

    name: str
    kind: FunctionalKind
    form: str  # "rational", "algebraic" or "polynomial-root"
    poly: tuple[int, ...]
    bracket: tuple[float, float]
    closed_form: Callable[[], float] | None = None

    @property
    def value(self) -> float:
        if self.closed_form is not None:
            return self.closed_form()
        return isolate_root(self.poly, self.bracket).mid

    def isolate(self, tol: float = ROOT_TOL) -> RadiusResult:
        return isolate_root(self.poly, self.bracket, tol)


SHARP_CONSTANTS: dict[str, SharpConstant] = {
    c.name: c
    for c in (
        SharpConstant("theorem-a", FunctionalKind.CLASSIC, "rational", (-1, 3), (0.0, 1.0), lambda: 1 / 3),
        SharpConstant("lemma3", FunctionalKind.G, "rational", (-3, 5), (0.0, 1.0), lambda: 3 / 5),
        SharpConstant("lemma4", FunctionalKind.G1, "polynomial-root", (23, 22, -121, -68, 44), (0.0, 1.0)),
        SharpConstant(
            "lemma5", FunctionalKind.G2, "algebraic", (-1, 1, 1), (0.0, 1.0), lambda: (math.sqrt(5) - 1) / 2
        ),
        SharpConstant(
            "lemma6", FunctionalKind.H, "algebraic", (-2, 5, -1), (0.0, 1.0), lambda: (5 - math.sqrt(17)) / 2
        ),
        SharpConstant("lemma7", FunctionalKind.H1, "rational", (-1, 3), (0.0, 1.0), lambda: 1 / 3),
        SharpConstant("lemma8", FunctionalKind.H2, "polynomial-root", (2, -5, -1, 2), (0.0, 1.0)),
    )
}

_BY_KIND = {c.kind: c for c in SHARP_CONSTANTS.values()}


def sharp_constant(kind_or_name: "FunctionalKind | str") -> SharpConstant:
    """Look up a sharp constant by table name (``lemma4``) or functional kind (``G1``)."""
    if isinstance(kind_or_name, str) and kind_or_name.lower() in SHARP_CONSTANTS:
        return SHARP_CONSTANTS[kind_or_name.lower()]
    kind = FunctionalKind.parse(kind_or_name)
    if kind not in _BY_KIND:
        raise ContractError(f"no sharp constant for {kind.value}")
    return _BY_KIND[kind]


def golden_max(
    f: Callable[[float], float], lo: float, hi: float, steps: int = GOLDEN_STEPS
) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal ``f`` on ``[lo, hi]``."""
    c = hi - INVPHI * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INVPHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def grid_max(
    f: Callable[[float], float],
    a_grid: Sequence[float],
    limit: Callable[[], float] | None = None,
    steps: int = GOLDEN_STEPS,
    a_max: float = 1.0 - 1e-12,
) -> tuple[float, float, bool]:
    """Maximize ``f`` over a grid, refine around the best cell, compare with the limit.

    Returns ``(a, value, is_limit)``.
    """
    grid = sorted(float(a) for a in a_grid)
    vals = [f(a) for a in grid]
    k = int(np.argmax(vals))
    best_a, best = grid[k], vals[k]
    left = grid[k - 1] if k > 0 else 0.0
    right = grid[k + 1] if k + 1 < len(grid) else a_max
    if steps > 0 and right > left:
        a_ref, v_ref = golden_max(f, left, right, steps)
        if v_ref > best:
            best_a, best = a_ref, v_ref
    if limit is not None:
        v_lim = limit()
        if v_lim > best:
            return 1.0, v_lim, True
    return best_a, best, False


def _family_evaluator(kind: FunctionalKind, family: str, order: int, dim: int, samples: int, evaluator: str):
    if family not in ("psi", "mobius"):
        raise ContractError(f"unknown family '{family}'")
    if family == "psi" and not kind.needs_origin_zero and kind is not FunctionalKind.CLASSIC:
        raise ContractError(f"{kind.value} is not defined on the psi family")
    if family == "mobius" and kind.needs_origin_zero:
        raise ContractError(f"{kind.value} requires f(0)=0, which the mobius family violates")

    if evaluator == "closed-form":
        if family == "psi":
            return lambda a, r: closed_form_psi(kind, a, r)
        return lambda a, r: (
            closed_form_mobius_classic(a, r) if kind is FunctionalKind.CLASSIC else closed_form_psi(kind, a, r)
        )
    if evaluator != "series":
        raise ContractError(f"unknown evaluator '{evaluator}'")
    build = psi_family if family == "psi" else mobius_family

    def value(a: float, r: float) -> float:
        return eval_functional(kind, build(a, order, dim), r, samples).value

    return value


def _family_limit(kind: FunctionalKind, family: str, r: float) -> float:
    if family == "mobius":
        return 1.0 if kind is FunctionalKind.CLASSIC else closed_form_psi(kind, 1.0, r)
    if kind is FunctionalKind.CLASSIC:
        return r
    return psi_limit(kind, r)


def empirical_radius(
    kind: "FunctionalKind | str",
    family: str = "psi",
    a_grid: Sequence[float] = DEFAULT_A_GRID,
    tol: float = RADIUS_TOL,
    order: int = DEFAULT_ORDER,
    dim: int = 2,
    samples: int = DEFAULT_SAMPLES,
    evaluator: str = "series",
    refine_steps: int = GOLDEN_STEPS,
) -> RadiusResult:
    """Largest ``r`` with ``max_a functional(member_a, r) <= 1``, by bisection.

    Each predicate evaluation maximizes over ``a_grid`` with golden-section
    refinement and the explicit ``a -> 1`` limit.  ``evaluator='series'``
    evaluates truncated series members; ``'closed-form'`` uses exact formulas.
    """
    kind = FunctionalKind.parse(kind)
    f = _family_evaluator(kind, family, order, dim, samples, evaluator)

    def worst(r: float) -> float:
        return grid_max(lambda a: f(a, r), a_grid, lambda: _family_limit(kind, family, r), refine_steps)[1]

    lo, hi = tol, 1.0 - tol
    if worst(lo) > 1.0:
        raise DegenerateFamilyError(f"{kind.value} already exceeds 1 at r={lo}")
    if worst(hi) <= 1.0:
        return RadiusResult(hi, 1.0, 0.5 * (hi + 1.0), 0, 0.0)
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if worst(mid) <= 1.0:
            lo = mid
        else:
            hi = mid
        it += 1
    mid = 0.5 * (lo + hi)
    return RadiusResult(lo, hi, mid, it, abs(worst(mid) - 1.0))


def sharpness_scan(
    kind: "FunctionalKind | str",
    r: float,
    a_grid: Sequence[float] = DEFAULT_A_GRID,
    refine_steps: int = GOLDEN_STEPS,
) -> Witness | None:
    """Maximize the closed form over the extremal family at fixed ``r``.

    Returns a :class:`Witness` when the maximum exceeds ``1 + 1e-9``.
    """
    kind = FunctionalKind.parse(kind)
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    if kind is FunctionalKind.SCALAR_REFINED:
        raise ContractError("sharpness scan is defined for classic and the refined kinds")
    if kind is FunctionalKind.CLASSIC:
        f = lambda a: closed_form_mobius_classic(a, r)  # noqa: E731
        lim = lambda: 1.0  # noqa: E731
    else:
        f = lambda a: closed_form_psi(kind, a, r)  # noqa: E731
        lim = lambda: psi_limit(kind, r)  # noqa: E731
    a, value, is_limit = grid_max(f, a_grid, lim, refine_steps)
    if value > 1.0 + WITNESS_SLACK:
        return Witness(a, r, value, is_limit)
    return None


# ---------------------------------------------------------------- figure curves


def phi_quadratic(a: float, r: float) -> float:
    """``2r(1-r)a^2 + a(2r-1) + r^2 + r - 1``; sign of the H-functional bound minus 1."""
    return 2 * r * (1 - r) * a * a + a * (2 * r - 1) + r * r + r - 1


def a1_critical(r: float) -> float:
    return (-r + math.sqrt(4 * r * r - 3 * r + 3)) / (3 * r)


def g4(a: float, r: float) -> float:
    return r * (a + r) * (1 - r) + (a * a * r * r - 1) * (1 - r) + (1 - a * a) * (1 + a * r) * r * r


def g6_at_a1(r: float) -> float:
    """Closed form of ``G6(a1(r), r)``."""
    s = math.sqrt(4 * r * r - 3 * r + 3)
    return (-38 * r**3 + 63 * r * r + 18 * r - 27 + (8 * r * r - 6 * r + 6) * s) / 27


G5_POLY = (23, 22, -121, -68, 44)


def emit_curve(figure: str, r_grid: Iterable[float]) -> tuple[list[str], list[tuple[float, ...]]]:
    """Tabulate a figure curve; returns ``(header, rows)``."""
    rs = [float(r) for r in r_grid]
    if figure == "fig1":
        return ["r", "phi0", "phi1"], [(r, phi_quadratic(0.0, r), phi_quadratic(1.0, r)) for r in rs]
    if figure == "fig2":
        if any(r <= 0.0 for r in rs):
            raise DomainError("fig2 needs r > 0")
        return ["r", "value"], [(r, g6_at_a1(r)) for r in rs]
    if figure == "fig3":
        return ["r", "value"], [(r, polyval(G5_POLY, r)) for r in rs]
    raise ContractError(f"unknown figure '{figure}'")


def curve_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.12g}" for v in row])
    return buf.getvalue()
