"""Truncated power series with matrix coefficients and generators of Schur functions.

A :class:`MatrixPowerSeries` holds ``A_0..A_N`` as a read-only
``(N+1, d, d)`` complex array.  Generators for constructively inner families
(the extremal family ``z(a-z)/(1-az)``, Moebius maps, finite Blaschke
products) set ``schur_certified`` by construction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ContractError, DomainError, InvalidInputError
from .matcore import ComplexMatrix, MAX_DIM, is_scalar_multiple, random_unitary

DEFAULT_ORDER = 64
DEFAULT_SAMPLES = 256
CERTIFY_RADII = (0.5, 0.9, 0.99)
CERTIFY_SAMPLES = 512
BLASCHKE_DEGREE = 6
BLASCHKE_MAX_MODULUS = 0.9
MODES = ("scalar-type", "diagonal-blaschke", "moebius-conjugated")


@dataclass(frozen=True)
class FamilyParam:
    """Parameter ``a`` in ``[0, 1)`` of the one-parameter extremal families."""

    a: float

    def __post_init__(self):
        if not (0.0 <= self.a < 1.0):
            raise DomainError(f"family parameter must lie in [0, 1), got {self.a}")


@dataclass(frozen=True, eq=False)
class MatrixPowerSeries:
    """Truncated series ``sum_{n<=N} A_n z^n``.

    ``exact`` marks a polynomial whose coefficients beyond ``order`` vanish,
    so every truncation remainder is zero.  ``descriptor`` records how a
    random instance was built, for replay.
    """

    coeffs: np.ndarray
    schur_certified: bool = False
    a0_scalar: complex | None = None
    exact: bool = False
    descriptor: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim == 1:
            c = c[:, None, None]
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0:
            raise InvalidInputError(f"coefficients must have shape (N+1, d, d), got {c.shape}")
        if not 1 <= c.shape[1] <= MAX_DIM:
            raise InvalidInputError(f"matrix dimension must be in 1..{MAX_DIM}")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.a0_scalar is not None:
            a0 = complex(self.a0_scalar)
            object.__setattr__(self, "a0_scalar", a0)
            dev = c[0] - a0 * np.eye(self.dim)
            if np.any(dev) and np.linalg.svd(dev, compute_uv=False)[0] > 1e-12:
                raise InvalidInputError("A_0 differs from a0_scalar * I")
            if self.schur_certified:
                bound = 1.0 - abs(a0) ** 2 + 1e-9
                norms = kernels.coeff_norms(c[1:]) if self.order else np.zeros(0)
                if np.any(norms > bound):
                    n = int(np.argmax(norms > bound)) + 1
                    raise InvalidInputError(
                        f"certified series violates ||A_n|| <= 1 - |a0|^2 at n={n}"
                    )

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    def coefficient(self, n: int) -> ComplexMatrix:
        return ComplexMatrix(self.coeffs[n])

    def norms(self) -> np.ndarray:
        """Operator norms ``||A_n||`` for ``n = 0..N``."""
        return kernels.coeff_norms(self.coeffs)

    def shifted(self) -> "MatrixPowerSeries":
        """The series ``g`` with ``f = z g`` (requires ``A_0 = 0``)."""
        if np.any(self.coeffs[0]):
            raise ContractError("shift requires A_0 = 0")
        b = self.coeffs[1:] if self.order else np.zeros_like(self.coeffs)
        return MatrixPowerSeries(
            b,
            schur_certified=self.schur_certified,
            a0_scalar=is_scalar_multiple(b[0]),
            exact=self.exact,
        )

    def with_coeffs(self, coeffs: np.ndarray, **changes: Any) -> "MatrixPowerSeries":
        kw = dict(
            schur_certified=self.schur_certified,
            a0_scalar=self.a0_scalar,
            exact=self.exact,
            descriptor=self.descriptor,
        )
        kw.update(changes)
        return MatrixPowerSeries(coeffs, **kw)

    def to_json_dict(self) -> dict:
        a0 = None if self.a0_scalar is None else [self.a0_scalar.real, self.a0_scalar.imag]
        out = {
            "dim": self.dim,
            "order": self.order,
            "a0_scalar": a0,
            "schur_certified": bool(self.schur_certified),
            "coeffs": [ComplexMatrix(m).to_literal() for m in self.coeffs],
        }
        if self.exact:
            out["exact"] = True
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "MatrixPowerSeries":
        for key in ("dim", "order", "coeffs"):
            if key not in obj:
                raise InvalidInputError(f"series JSON is missing field '{key}'")
        try:
            mats = [ComplexMatrix.from_literal(m).data for m in obj["coeffs"]]
        except InvalidInputError as exc:
            raise InvalidInputError(f"field 'coeffs': {exc}") from None
        if len(mats) != int(obj["order"]) + 1:
            raise InvalidInputError("field 'order' does not match the number of coefficients")
        if any(m.shape != (int(obj["dim"]),) * 2 for m in mats):
            raise InvalidInputError("field 'dim' does not match the coefficient shapes")
        a0 = obj.get("a0_scalar")
        if a0 is not None:
            if not (isinstance(a0, (list, tuple)) and len(a0) == 2):
                raise InvalidInputError("field 'a0_scalar' must be [re, im] or null")
            a0 = complex(float(a0[0]), float(a0[1]))
        return cls(
            np.stack(mats),
            schur_certified=bool(obj.get("schur_certified", False)),
            a0_scalar=a0,
            exact=bool(obj.get("exact", False)),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "MatrixPowerSeries":
        return cls.from_json_dict(json.loads(text))


def _check_disk(z: complex) -> None:
    if abs(z) >= 1.0:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")


def eval_at(s: MatrixPowerSeries, z: complex) -> ComplexMatrix:
    """Horner evaluation of the truncated polynomial at ``z``."""
    z = complex(z)
    _check_disk(z)
    acc = s.coeffs[-1].copy()
    for n in range(s.order - 1, -1, -1):
        acc = acc * z + s.coeffs[n]
    return ComplexMatrix(acc)


def norm_at(s: MatrixPowerSeries, zs: Iterable[complex]) -> np.ndarray:
    """``||f(z)||`` of the truncated polynomial at each point."""
    return kernels.matpoly_norms(s.coeffs, np.asarray(list(zs) if not isinstance(zs, np.ndarray) else zs))


def sup_norm_on_circle(s: MatrixPowerSeries, r: float, samples: int = DEFAULT_SAMPLES) -> float:
    """Maximum of ``||f||`` over ``samples`` equispaced points of ``|z| = r``.

    The two midpoints adjacent to the best grid point are evaluated as well.
    Doubling ``samples`` therefore never lowers the result: the finer grid
    contains both the old grid and those midpoints.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    if samples < 8:
        raise ContractError("samples must be >= 8")
    if r == 0.0:
        return float(kernels.coeff_norms(s.coeffs[:1])[0])
    h = 2.0 * math.pi / samples
    theta = h * np.arange(samples)
    vals = kernels.matpoly_norms(s.coeffs, r * np.exp(1j * theta))
    k = int(np.argmax(vals))
    mids = theta[k] + np.array([-0.5 * h, 0.5 * h])
    extra = kernels.matpoly_norms(s.coeffs, r * np.exp(1j * mids))
    return float(max(vals[k], extra.max()))


def coefficient_bound(s: MatrixPowerSeries) -> float:
    """Uniform bound on ``||A_n||``, ``n >= 1``, for a certified Schur series."""
    if not s.schur_certified:
        raise ContractError("coefficient bound needs a Schur certificate")
    if s.a0_scalar is None:
        return 1.0
    return 1.0 - abs(s.a0_scalar) ** 2


def tail_bound(s: MatrixPowerSeries, r: float) -> float:
    """Bound on ``sum_{n>N} ||A_n|| r^n`` from ``||A_n|| <= 1 - |a0|^2``."""
    if not s.schur_certified or s.a0_scalar is None:
        raise ContractError("tail bound unavailable: needs schur_certified and a0_scalar")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    if s.exact or r == 0.0:
        return 0.0
    return (1.0 - abs(s.a0_scalar) ** 2) * r ** (s.order + 1) / (1.0 - r)


def _embed(c: np.ndarray, dim: int) -> np.ndarray:
    return c[:, None, None] * np.eye(dim, dtype=np.complex128)[None]


def _param(p: FamilyParam | float) -> float:
    return p.a if isinstance(p, FamilyParam) else FamilyParam(float(p)).a


def psi_coefficients(a: float, order: int) -> np.ndarray:
    """Scalar Taylor coefficients of ``z(a-z)/(1-az)``."""
    c = np.zeros(order + 1)
    if order >= 1:
        c[1] = a
    n = np.arange(2, order + 1)
    c[2:] = -(1.0 - a * a) * a ** (n - 2)
    return c


def psi_family(p: FamilyParam | float, order: int = DEFAULT_ORDER, dim: int = 2) -> MatrixPowerSeries:
    a = _param(p)
    return MatrixPowerSeries(
        _embed(psi_coefficients(a, order), dim),
        schur_certified=True,
        a0_scalar=0.0,
        exact=(a == 0.0 and order >= 2),
        descriptor={"family": "psi", "a": a},
    )


def mobius_family(p: FamilyParam | float, order: int = DEFAULT_ORDER, dim: int = 2) -> MatrixPowerSeries:
    """Coefficients of ``(a-z)/(1-az)`` times ``I``."""
    a = _param(p)
    c = np.zeros(order + 1)
    c[0] = a
    n = np.arange(1, order + 1)
    c[1:] = -(1.0 - a * a) * a ** (n - 1)
    return MatrixPowerSeries(
        _embed(c, dim),
        schur_certified=True,
        a0_scalar=a,
        exact=(a == 0.0),
        descriptor={"family": "mobius", "a": a},
    )


def scalar_embed(
    coeffs: Sequence[complex], dim: int = 1, schur_certified: bool = False, exact: bool = True
) -> MatrixPowerSeries:
    """Series ``sum c_n z^n I`` built from scalar coefficients.

    By default the result is treated as an exact polynomial; pass
    ``exact=False`` when the coefficients are a truncation.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1 or c.size == 0:
        raise InvalidInputError("scalar coefficients must be a non-empty 1-D sequence")
    return MatrixPowerSeries(_embed(c, dim), schur_certified=schur_certified, a0_scalar=c[0], exact=exact)


def blaschke_coefficients(zeros: Sequence[complex], order: int, phase: complex = 1.0) -> np.ndarray:
    """Taylor coefficients of ``phase * prod (z - w)/(1 - conj(w) z)`` up to ``order``."""
    out = np.zeros(order + 1, dtype=np.complex128)
    out[0] = phase
    n = np.arange(order + 1)
    for w in zeros:
        w = complex(w)
        if abs(w) >= 1.0:
            raise DomainError(f"Blaschke zero must lie in the open disk, got {w}")
        f = np.empty(order + 1, dtype=np.complex128)
        f[0] = -w
        if order >= 1:
            f[1:] = (1.0 - abs(w) ** 2) * np.conj(w) ** (n[1:] - 1)
        out = np.convolve(out, f)[: order + 1]
    return out


def diagonal_blaschke(
    zero_lists: Sequence[Sequence[complex]],
    order: int = DEFAULT_ORDER,
    phases: Sequence[complex] | None = None,
    left: np.ndarray | None = None,
    right: np.ndarray | None = None,
) -> MatrixPowerSeries:
    """``U diag(b_1, ..., b_d) V`` with scalar Blaschke products ``b_i``."""
    d = len(zero_lists)
    phases = [1.0] * d if phases is None else list(phases)
    diag = np.zeros((order + 1, d, d), dtype=np.complex128)
    for i, zs in enumerate(zero_lists):
        diag[:, i, i] = blaschke_coefficients(zs, order, phases[i])
    u = np.eye(d) if left is None else np.asarray(left)
    v = np.eye(d) if right is None else np.asarray(right)
    coeffs = u[None] @ diag @ v[None]
    exact = all(abs(complex(w)) == 0.0 for zs in zero_lists for w in zs)
    return MatrixPowerSeries(
        coeffs,
        schur_certified=True,
        a0_scalar=is_scalar_multiple(coeffs[0]),
        exact=exact and order >= max(len(zs) for zs in zero_lists),
    )


def moebius_transform(a0: float, h: MatrixPowerSeries) -> MatrixPowerSeries:
    """Expand ``(a0 I + h)(I + a0 h)^{-1}`` for real ``|a0| < 1`` and ``h(0) = 0``."""
    if not -1.0 < a0 < 1.0:
        raise DomainError(f"a0 must lie in (-1, 1), got {a0}")
    hc = h.coeffs
    if np.any(hc[0]):
        raise ContractError("inner factor must vanish at the origin")
    order, d = h.order, h.dim
    eye = np.eye(d, dtype=np.complex128)
    # G = (I + a0 h)^{-1}:  G_0 = I,  G_n = -a0 sum_{k=1..n} h_k G_{n-k}
    g = np.zeros_like(hc)
    g[0] = eye
    for n in range(1, order + 1):
        g[n] = -a0 * (hc[1 : n + 1] @ g[n - 1 :: -1]).sum(axis=0)
    if not np.all(np.isfinite(g)):
        raise RuntimeError("operator Moebius expansion diverged")
    num = hc.copy()
    num[0] = num[0] + a0 * eye
    out = np.stack([(num[: n + 1] @ g[n::-1]).sum(axis=0) for n in range(order + 1)])
    return MatrixPowerSeries(out, schur_certified=True, a0_scalar=complex(a0), exact=not np.any(hc))


def _disk_points(rng: np.random.Generator, count: int, rmax: float) -> np.ndarray:
    rad = rmax * np.sqrt(rng.random(count))
    return rad * np.exp(2j * math.pi * rng.random(count))


def random_schur_matrix(
    dim: int,
    order: int,
    mode: str,
    seed: int,
    degree: int = BLASCHKE_DEGREE,
    vanish_at_origin: bool = False,
) -> MatrixPowerSeries:
    """Seeded random Schur-class series of the requested construction.

    ``vanish_at_origin`` makes ``f(0) = 0`` by multiplying with ``z`` (an
    extra Blaschke zero at the origin, or ``a0 = 0`` for the Moebius mode).
    """
    if dim < 1 or dim > MAX_DIM:
        raise InvalidInputError(f"dim must be in 1..{MAX_DIM}")
    if order < 2:
        raise InvalidInputError("order must be >= 2")
    if mode not in MODES:
        raise InvalidInputError(f"unknown mode '{mode}', expected one of {MODES}")
    rng = np.random.default_rng(seed)
    desc: dict[str, Any] = {"mode": mode, "seed": int(seed), "dim": dim, "order": order}

    def zeros() -> list[complex]:
        zs = list(_disk_points(rng, degree, BLASCHKE_MAX_MODULUS))
        return ([0j] if vanish_at_origin else []) + zs

    if mode == "scalar-type":
        zs = zeros()
        phase = complex(np.exp(2j * math.pi * rng.random()))
        c = blaschke_coefficients(zs, order, phase)
        desc.update(zeros=[[w.real, w.imag] for w in zs], phase=[phase.real, phase.imag])
        return MatrixPowerSeries(_embed(c, dim), True, complex(c[0]), False, desc)

    if mode == "diagonal-blaschke":
        zls = [zeros() for _ in range(dim)]
        phases = [complex(np.exp(2j * math.pi * rng.random())) for _ in range(dim)]
        u = random_unitary(dim, rng)
        v = random_unitary(dim, rng)
        s = diagonal_blaschke(zls, order, phases, u, v)
        desc.update(zeros=[[[w.real, w.imag] for w in zs] for zs in zls])
        return s.with_coeffs(s.coeffs, descriptor=desc)

    a0 = 0.0 if vanish_at_origin else float(rng.uniform(-0.95, 0.95))
    zls = [list(_disk_points(rng, max(degree - 1, 0), BLASCHKE_MAX_MODULUS)) for _ in range(dim)]
    phases = [complex(np.exp(2j * math.pi * rng.random())) for _ in range(dim)]
    u = random_unitary(dim, rng)
    v = random_unitary(dim, rng)
    inner = diagonal_blaschke(zls, order - 1, phases, u, v).coeffs
    h = np.zeros((order + 1, dim, dim), dtype=np.complex128)
    h[1:] = inner  # h = z * u(z)
    s = moebius_transform(a0, MatrixPowerSeries(h))
    desc.update(a0=a0)
    return s.with_coeffs(s.coeffs, exact=False, descriptor=desc)


def certify_schur(s: MatrixPowerSeries, slack: float = 1e-9) -> bool:
    """Numerical Schur check by circle sampling on the certification radii.

    The truncated polynomial may exceed 1 by at most the remainder, which for
    any Schur function is bounded by ``r^{N+1}/(1-r)`` (``||A_n|| <= 1``).
    """
    for r in CERTIFY_RADII:
        rem = 0.0 if s.exact else r ** (s.order + 1) / (1.0 - r)
        if sup_norm_on_circle(s, r, CERTIFY_SAMPLES) > 1.0 + slack + rem:
            return False
    return True
