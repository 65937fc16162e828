"""Bohr-type functionals of matrix-valued Schur series and their closed forms.

With ``c_n = ||A_n||``, ``w = r/(1-r)`` and ``F = sup_{|z|=r} ||f(z)||``:

* ``classic``        sum_{n>=0} c_n r^n
* ``scalar-refined`` sum_{n>=0} |a_n| r^n + (1/(1+|a_0|) + w) sum_{n>=1} |a_n|^2 r^{2n}
* ``G``              sum_{n>=1} c_n r^n + (1/(1+c_1) + w) sum_{n>=2} c_n^2 r^{2n-1}
* ``G1``, ``G2``     ``F`` or ``F^2`` plus ``G``
* ``H``              sum_{n>=1} c_n r^n + (1/(r(1+c_1)) + 1/(1-r)) sum_{n>=1} c_n^2 r^{2n}
* ``H1``, ``H2``     ``F`` or ``F^2`` plus ``H``

The last six require ``f(0) = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractError, DomainError, InvalidInputError
from .matcore import is_scalar_multiple
from .series import DEFAULT_SAMPLES, FamilyParam, MatrixPowerSeries, sup_norm_on_circle


class FunctionalKind(enum.Enum):
    CLASSIC = "classic"
    SCALAR_REFINED = "scalar-refined"
    G = "G"
    G1 = "G1"
    G2 = "G2"
    H = "H"
    H1 = "H1"
    H2 = "H2"

    @classmethod
    def parse(cls, name: "str | FunctionalKind") -> "FunctionalKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value.lower() == key:
                return kind
        raise InvalidInputError(f"unknown functional '{name}'")

    @property
    def needs_origin_zero(self) -> bool:
        return self not in (FunctionalKind.CLASSIC, FunctionalKind.SCALAR_REFINED)

    @property
    def norm_power(self) -> int:
        """Exponent ``j`` of the ``||f(z)||^j`` term (0 when absent)."""
        return {"G1": 1, "H1": 1, "G2": 2, "H2": 2}.get(self.value, 0)

    @property
    def is_h_type(self) -> bool:
        return self.value.startswith("H")


REFINED_KINDS = tuple(k for k in FunctionalKind if k.needs_origin_zero)


@dataclass(frozen=True)
class EvalResult:
    value: float
    tail: float
    certified_leq_one: bool

    def to_json_dict(self) -> dict:
        return {"value": self.value, "tail": self.tail, "certified_leq_one": self.certified_leq_one}


def _scalar_coefficients(s: MatrixPowerSeries) -> np.ndarray:
    out = np.empty(s.order + 1, dtype=np.complex128)
    for n, a in enumerate(s.coeffs):
        c = is_scalar_multiple(a)
        if c is None:
            raise ContractError(f"scalar-refined functional needs scalar coefficients; A_{n} is not")
        out[n] = c
    return out


def _coefficient_bound(s: MatrixPowerSeries, kind: FunctionalKind) -> float:
    """Uniform bound on the discarded ``||A_n||`` (inf without a certificate)."""
    if s.exact:
        return 0.0
    if not s.schur_certified:
        return math.inf
    if kind.needs_origin_zero:
        # f = z g: the coefficients are those of g, bounded by 1 - |g(0)|^2 when g(0) is scalar
        b0 = is_scalar_multiple(s.coeffs[1]) if s.order >= 1 else 0.0
        return 1.0 if b0 is None else 1.0 - abs(b0) ** 2
    return 1.0 if s.a0_scalar is None else 1.0 - abs(s.a0_scalar) ** 2


def eval_functional(
    kind: "FunctionalKind | str",
    s: MatrixPowerSeries,
    r: float,
    samples: int = DEFAULT_SAMPLES,
) -> EvalResult:
    """Truncated value of a functional plus a rigorous bound on the remainder.

    ``tail`` is infinite for a series that is neither certified nor exact.
    The ``||f(z)||`` term is the sampled circle maximum of the truncated
    polynomial; its sampling error is not part of ``tail``.
    """
    kind = FunctionalKind.parse(kind)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    if kind.needs_origin_zero and np.any(s.coeffs[0]):
        raise ContractError(f"functional {kind.value} requires f(0) = 0")

    N = s.order
    beta = _coefficient_bound(s, kind)
    geo = r ** (N + 1) / (1.0 - r) if r > 0.0 else 0.0
    lin_tail = 0.0 if beta == 0.0 else beta * geo

    if kind is FunctionalKind.SCALAR_REFINED:
        a = np.abs(_scalar_coefficients(s))
        lin, _, sq_h = kernels.power_sums(a, r)
        weight = 1.0 / (1.0 + a[0]) + r / (1.0 - r)
        value = lin + weight * sq_h
        sq_tail = 0.0 if beta == 0.0 else beta**2 * r ** (2 * N + 2) / (1.0 - r * r)
        tail = lin_tail + weight * sq_tail
        return EvalResult(value, tail, value + tail <= 1.0)

    c = s.norms()
    lin, sq_g, sq_h = kernels.power_sums(c, r)
    if kind is FunctionalKind.CLASSIC:
        return EvalResult(lin, lin_tail, lin + lin_tail <= 1.0)

    c1 = c[1] if N >= 1 else 0.0
    if kind.is_h_type:
        # r^{-1} sum c_n^2 r^{2n} = sum c_n^2 r^{2n-1}, finite at r = 0
        sq_odd = float(np.sum(c[1:] ** 2 * r ** (2 * np.arange(1, N + 1) - 1))) if N >= 1 else 0.0
        value = lin + sq_odd / (1.0 + c1) + sq_h / (1.0 - r)
        sq_tail = 0.0 if beta == 0.0 else beta**2 * r ** (2 * N + 1) / (1.0 - r * r)
        tail = lin_tail + sq_tail * (1.0 / (1.0 + c1) + r / (1.0 - r))
    else:
        weight = 1.0 / (1.0 + c1) + r / (1.0 - r)
        value = lin + weight * sq_g
        sq_tail = 0.0 if beta == 0.0 else beta**2 * r ** (2 * N + 1) / (1.0 - r * r)
        tail = lin_tail + weight * sq_tail

    j = kind.norm_power
    if j:
        fnorm = sup_norm_on_circle(s, r, samples)
        value += fnorm**j
        tail += lin_tail if j == 1 else lin_tail * (2.0 * fnorm + lin_tail)
    return EvalResult(float(value), float(tail), bool(value + tail <= 1.0))


def _psi_norm(a: float, r: float) -> float:
    """``||Psi_a(-r)|| = r(a+r)/(1+ar)``, the circle maximum for the extremal family."""
    return r * (a + r) / (1.0 + a * r)


def _psi_sums(a: float, r: float) -> tuple[float, float, float]:
    lin = a * r + (1.0 - a * a) * r * r / (1.0 - a * r)
    g_part = (a * r * (1.0 - r) + (1.0 - a * a) * r * r) / (1.0 - r)
    # H block: (r^{-1}/(1+a) + 1/(1-r)) (a^2 r^2 + (1-a^2)^2 r^4/(1-a^2 r^2))
    sq = a * a * r * r + (1.0 - a * a) ** 2 * r**4 / (1.0 - a * a * r * r)
    if r == 0.0:
        h_part = lin
    else:
        h_part = lin + (1.0 / (r * (1.0 + a)) + 1.0 / (1.0 - r)) * sq
    return lin, g_part, h_part


def closed_form_psi(kind: "FunctionalKind | str", a: "FamilyParam | float", r: float) -> float:
    """Exact value of a functional on ``Psi_a(z) = z(a-z)/(1-az) I``.

    ``a = 1`` is accepted and returns the limit ``a -> 1^-`` (every formula
    is continuous there).
    """
    kind = FunctionalKind.parse(kind)
    a = a.a if isinstance(a, FamilyParam) else float(a)
    if not (0.0 <= a <= 1.0 and 0.0 <= r < 1.0):
        raise DomainError(f"need 0 <= a <= 1 and 0 <= r < 1, got a={a}, r={r}")
    lin, g_part, h_part = _psi_sums(a, r)
    if kind is FunctionalKind.CLASSIC:
        return lin
    if kind is FunctionalKind.SCALAR_REFINED:
        sq = a * a * r * r + (1.0 - a * a) ** 2 * r**4 / (1.0 - a * a * r * r)
        return lin + sq / (1.0 - r)
    base = h_part if kind.is_h_type else g_part
    j = kind.norm_power
    return base + (_psi_norm(a, r) ** j if j else 0.0)


def psi_limit(kind: "FunctionalKind | str", r: float) -> float:
    """Explicit ``a -> 1^-`` limits of the six refined functionals on ``Psi_a``."""
    kind = FunctionalKind.parse(kind)
    table = {
        FunctionalKind.G: r,
        FunctionalKind.G1: 2.0 * r,
        FunctionalKind.G2: r * r + r,
        FunctionalKind.H: (3.0 * r - r * r) / (2.0 - 2.0 * r),
        FunctionalKind.H1: (-3.0 * r * r + 5.0 * r) / (2.0 * (1.0 - r)),
        FunctionalKind.H2: (-2.0 * r**3 + r * r + 3.0 * r) / (2.0 * (1.0 - r)),
    }
    if kind not in table:
        raise ContractError(f"no limit formula for {kind.value}")
    return table[kind]


def closed_form_mobius_classic(a: float, r: float) -> float:
    """Classic sum of ``(a-z)/(1-az)``: ``a + (1-a^2) r/(1-ar)``."""
    return a + (1.0 - a * a) * r / (1.0 - a * r)
