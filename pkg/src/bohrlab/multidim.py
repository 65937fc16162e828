"""Complete circular domains, homogeneous expansions and complex-line restriction.

A function on a complete circular domain ``Omega`` in ``C^n`` is given as a
finite multivariate polynomial ``sum_beta A_beta z^beta``.  Restricting it to
the line ``z = alpha t`` gives the one-variable series
``sum_k P_k(alpha) t^k``, on which the one-dimensional functionals are
evaluated.  Verification samples random lines: it can only falsify, never
prove, an inequality over ``r * Omega``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Iterator, Mapping, Sequence

import numpy as np

from .bounds import CheckReport, SLACK, trial_seed
from .errors import ContractError, InvalidInputError
from .functionals import FunctionalKind, eval_functional
from .matcore import ComplexMatrix, is_scalar_multiple
from .radii import sharp_constant, sharpness_scan
from .series import DEFAULT_SAMPLES, MatrixPowerSeries, psi_coefficients

SHAPES = ("polydisk", "ball", "functional")
DEFAULT_DIRECTIONS = 256
WITNESS_ORDER = 32

THEOREMS: dict[str, tuple[FunctionalKind, str]] = {
    "T1": (FunctionalKind.G, "lemma3"),
    "T2": (FunctionalKind.G1, "lemma4"),
    "T3": (FunctionalKind.G2, "lemma5"),
    "T4": (FunctionalKind.H, "lemma6"),
    "T5": (FunctionalKind.H1, "lemma7"),
    "T6": (FunctionalKind.H2, "lemma8"),
}


def theorem_constant(theorem: str) -> float:
    return sharp_constant(_theorem(theorem)[1]).value


def _theorem(theorem: str) -> tuple[FunctionalKind, str]:
    key = str(theorem).upper()
    if key not in THEOREMS:
        raise InvalidInputError(f"unknown theorem '{theorem}', expected one of {tuple(THEOREMS)}")
    return THEOREMS[key]


def _complex(v: Any) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidInputError(f"complex literal must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


@dataclass(frozen=True)
class CircularDomain:
    """Polydisk, euclidean ball, or ``{z : |sum_j alpha_j z_j| < 1 for every listed alpha}``."""

    n: int
    shape: str
    functionals: tuple[tuple[complex, ...], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("dimension n must be >= 1")
        if self.shape not in SHAPES:
            raise InvalidInputError(f"unknown shape '{self.shape}', expected one of {SHAPES}")
        fs = tuple(tuple(complex(x) for x in f) for f in self.functionals)
        if self.shape == "functional":
            if not fs:
                raise InvalidInputError("functional domain needs at least one functional")
            if any(len(f) != self.n for f in fs):
                raise InvalidInputError(f"every functional must have length n={self.n}")
            if any(not any(f) for f in fs):
                raise InvalidInputError("zero functional does not define a proper domain")
        object.__setattr__(self, "functionals", fs)

    def gauge(self, z: Sequence[complex]) -> float:
        """Minkowski functional: ``z`` lies in ``rho * Omega`` iff ``gauge(z) < rho``."""
        z = np.asarray(z, dtype=np.complex128)
        if self.shape == "polydisk":
            return float(np.max(np.abs(z)))
        if self.shape == "ball":
            return float(np.linalg.norm(z))
        return float(max(abs(np.dot(f, z)) for f in self.functionals))

    @classmethod
    def from_json_dict(cls, obj: Mapping[str, Any], n: int | None = None) -> "CircularDomain":
        if "shape" not in obj:
            raise InvalidInputError("domain JSON is missing field 'shape'")
        shape = {"ball": "ball", "euclidean-ball": "ball"}.get(obj["shape"], obj["shape"])
        fs = tuple(tuple(_complex(x) for x in f) for f in obj.get("alphas", []))
        if n is None:
            n = obj.get("n", len(fs[0]) if fs else None)
        if n is None:
            raise InvalidInputError("domain JSON needs field 'n' (or 'alphas')")
        return cls(int(n), shape, fs)

    def to_json_dict(self) -> dict:
        out: dict[str, Any] = {"shape": self.shape, "n": self.n}
        if self.functionals:
            out["alphas"] = [[[x.real, x.imag] for x in f] for f in self.functionals]
        return out


@dataclass(frozen=True)
class Direction:
    alpha: np.ndarray
    normalization: str

    def to_json_dict(self) -> list:
        return [[float(x.real), float(x.imag)] for x in self.alpha]


def normalize_direction(v: Sequence[complex], domain: CircularDomain) -> Direction:
    """Scale ``v`` so the ray ``{v t : |t| < 1}`` touches the boundary of ``domain``."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (domain.n,):
        raise InvalidInputError(f"direction must have length {domain.n}")
    g = domain.gauge(v)
    if g == 0.0:
        raise ContractError("direction lies in the kernel of every functional; the ray is unbounded")
    norm = {"polydisk": "sup", "ball": "l2", "functional": "functional"}[domain.shape]
    return Direction(v / g, norm)


def defining_direction(domain: CircularDomain, index: int = 0) -> Direction:
    """Direction ``conj(alpha)/|alpha|^2`` on which the ``index``-th functional equals 1."""
    if domain.shape != "functional":
        raise ContractError("defining direction exists only for functional domains")
    a = np.asarray(domain.functionals[index])
    return normalize_direction(np.conj(a) / np.vdot(a, a).real, domain)


def random_direction(domain: CircularDomain, rng: np.random.Generator) -> Direction:
    while True:
        v = rng.standard_normal(domain.n) + 1j * rng.standard_normal(domain.n)
        if domain.gauge(v) > 1e-12 * np.linalg.norm(v):
            return normalize_direction(v, domain)


@dataclass(frozen=True, eq=False)
class HomogeneousExpansion:
    """Finite polynomial ``sum_beta A_beta z^beta`` grouped by total degree.

    ``exponents`` is an ``(M, n)`` integer array, ``coeffs`` the matching
    ``(M, d, d)`` stack; ``parts`` maps degree to ``{beta: A_beta}``.
    """

    n: int
    exponents: np.ndarray
    coeffs: np.ndarray
    parts: dict[int, dict[tuple[int, ...], np.ndarray]] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        return max(self.parts) if self.parts else 0

    def constant_term(self) -> np.ndarray:
        return self.parts.get(0, {}).get((0,) * self.n, np.zeros((self.dim, self.dim), dtype=np.complex128))

    def __add__(self, other: "HomogeneousExpansion") -> "HomogeneousExpansion":
        terms = dict(self.terms())
        for beta, a in other.terms():
            terms[beta] = terms.get(beta, 0) + a
        return homogeneous_expand(terms, self.n, self.dim)

    def scaled(self, c: complex) -> "HomogeneousExpansion":
        return homogeneous_expand({b: c * a for b, a in self.terms()}, self.n, self.dim)

    def terms(self) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
        for part in self.parts.values():
            yield from part.items()

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "coeffs": [
                {"alpha": list(beta), "matrix": ComplexMatrix(a).to_literal()}
                for beta, a in sorted(self.terms())
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: Mapping[str, Any]) -> "HomogeneousExpansion":
        for key in ("n", "coeffs"):
            if key not in obj:
                raise InvalidInputError(f"multivariate JSON is missing field '{key}'")
        n = int(obj["n"])
        terms: dict[tuple[int, ...], np.ndarray] = {}
        for i, item in enumerate(obj["coeffs"]):
            if "alpha" not in item or "matrix" not in item:
                raise InvalidInputError(f"field 'coeffs[{i}]' needs 'alpha' and 'matrix'")
            beta = tuple(int(k) for k in item["alpha"])
            terms[beta] = terms.get(beta, 0) + ComplexMatrix.from_literal(item["matrix"]).data
        return homogeneous_expand(terms, n)


def homogeneous_expand(
    poly: Mapping[Sequence[int], Any], n: int, dim: int | None = None
) -> HomogeneousExpansion:
    """Group a multi-indexed coefficient map by total degree.

    Scalar coefficients are embedded as ``c * I`` of size ``dim`` (default 1).
    Exactly-zero coefficients are dropped.
    """
    mats: dict[tuple[int, ...], np.ndarray] = {}
    for beta, a in poly.items():
        beta = tuple(int(k) for k in beta)
        if len(beta) != n or any(k < 0 for k in beta):
            raise InvalidInputError(f"multi-index {beta} is not a length-{n} tuple of non-negative integers")
        arr = np.asarray(a.data if isinstance(a, ComplexMatrix) else a, dtype=np.complex128)
        if arr.ndim == 0:
            arr = complex(arr) * np.eye(dim or 1, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInputError(f"coefficient of {beta} is not a square matrix")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError(f"coefficient of {beta} is not finite")
        mats[beta] = mats[beta] + arr if beta in mats else arr
    mats = {b: a for b, a in mats.items() if np.any(a)}
    d = dim or (next(iter(mats.values())).shape[0] if mats else 1)
    if any(a.shape != (d, d) for a in mats.values()):
        raise InvalidInputError("coefficients have inconsistent matrix sizes")
    keys = sorted(mats, key=lambda b: (sum(b), b))
    exps = np.array(keys, dtype=np.int64).reshape(len(keys), n)
    coeffs = np.array([mats[b] for b in keys], dtype=np.complex128).reshape(len(keys), d, d)
    parts: dict[int, dict[tuple[int, ...], np.ndarray]] = {}
    for b in keys:
        parts.setdefault(sum(b), {})[b] = mats[b]
    return HomogeneousExpansion(n, exps, coeffs, parts)


def _monomials(alpha: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    if exponents.size == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.prod(alpha[None, :] ** exponents, axis=1)


def line_restrict(
    h: HomogeneousExpansion,
    d: "Direction | Sequence[complex]",
    order: int | None = None,
    assume_schur: bool = True,
) -> MatrixPowerSeries:
    """One-variable series ``t -> f(alpha t)`` with coefficients ``P_k(alpha)``.

    ``assume_schur`` carries the caller's hypothesis ``||f|| < 1`` on the
    domain over to the restricted series (valid for boundary-normalized
    directions).
    """
    alpha = np.asarray(d.alpha if isinstance(d, Direction) else d, dtype=np.complex128)
    if alpha.shape != (h.n,):
        raise InvalidInputError(f"direction length {alpha.shape} does not match n={h.n}")
    deg = h.degree
    N = max(deg, 1) if order is None else int(order)
    out = np.zeros((N + 1, h.dim, h.dim), dtype=np.complex128)
    degs = h.exponents.sum(axis=1) if h.exponents.size else np.zeros(0, dtype=np.int64)
    keep = degs <= N
    vals = _monomials(alpha, h.exponents[keep])
    np.add.at(out, degs[keep], h.coeffs[keep] * vals[:, None, None])
    return MatrixPowerSeries(
        out,
        schur_certified=assume_schur,
        a0_scalar=is_scalar_multiple(out[0]),
        exact=N >= deg,
    )


def polydisk_bohr_sum(h: HomogeneousExpansion, z: Sequence[complex]) -> float:
    """``sum_beta ||A_beta|| |z^beta|``."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (h.n,):
        raise InvalidInputError(f"point must have length {h.n}")
    if h.coeffs.shape[0] == 0:
        return 0.0
    from . import kernels

    norms = kernels.coeff_norms(h.coeffs)
    return float(np.dot(norms, np.abs(_monomials(z, h.exponents))))


# ----------------------------------------------------------- test-function builders


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for b1, c1 in p.items():
        for b2, c2 in q.items():
            b = tuple(x + y for x, y in zip(b1, b2))
            out[b] = out.get(b, 0) + c1 * c2
    return out


def _compositions(k: int, n: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


def linear_power(alpha: Sequence[complex], k: int) -> dict[tuple[int, ...], complex]:
    """Multinomial expansion of ``(sum_j alpha_j z_j)^k``."""
    alpha = [complex(a) for a in alpha]
    out = {}
    for beta in _compositions(k, len(alpha)):
        c = factorial(k)
        for bj in beta:
            c //= factorial(bj)
        val = complex(c)
        for aj, bj in zip(alpha, beta):
            val *= aj**bj
        if val != 0:
            out[beta] = val
    return out


def _bounded_linear_form(domain: CircularDomain, rng: np.random.Generator) -> np.ndarray:
    """Random ``w`` with ``sup_{z in Omega} |sum w_j z_j| = 1``."""
    if domain.shape == "functional":
        mu = rng.dirichlet(np.ones(len(domain.functionals)))
        ph = np.exp(2j * math.pi * rng.random(len(domain.functionals)))
        return (mu * ph) @ np.array(domain.functionals)
    w = rng.standard_normal(domain.n) + 1j * rng.standard_normal(domain.n)
    if domain.shape == "polydisk":
        return w / np.sum(np.abs(w))
    return w / np.linalg.norm(w)


def random_test_function(
    domain: CircularDomain,
    seed: int,
    max_degree: int = 6,
    terms: int = 3,
    dim: int = 2,
) -> HomogeneousExpansion:
    """Seeded scalar-type polynomial with ``f(0) = 0`` and ``|f| <= 1`` on ``domain``.

    ``f = sum_m lam_m u_m prod_i L_{m,i}`` with ``sum lam_m = 1``, unimodular
    ``u_m`` and linear forms bounded by 1 on the domain.
    """
    rng = np.random.default_rng(seed)
    lam = rng.dirichlet(np.ones(terms))
    total: dict = {}
    for m in range(terms):
        k = int(rng.integers(1, max_degree + 1))
        p: dict = {(0,) * domain.n: complex(lam[m] * np.exp(2j * math.pi * rng.random()))}
        for _ in range(k):
            w = _bounded_linear_form(domain, rng)
            p = _poly_mul(p, {tuple(int(i == j) for i in range(domain.n)): w[j] for j in range(domain.n)})
        for b, c in p.items():
            total[b] = total.get(b, 0) + c
    return homogeneous_expand(total, domain.n, dim)


def compose_linear(coeffs: Sequence[complex], alpha: Sequence[complex], dim: int = 2) -> HomogeneousExpansion:
    """Expansion of ``chi(phi(z)) I`` for scalar ``chi = sum c_k eta^k`` and ``phi(z) = sum alpha_j z_j``."""
    total: dict = {}
    for k, ck in enumerate(coeffs):
        if ck == 0:
            continue
        for b, v in linear_power(alpha, k).items():
            total[b] = total.get(b, 0) + complex(ck) * v
    return homogeneous_expand(total, len(alpha), dim)


def sharpness_witness(
    theorem: str,
    domain: CircularDomain,
    a: float | None = None,
    order: int = WITNESS_ORDER,
    index: int = 0,
    dim: int = 2,
    probe_offset: float = 0.01,
) -> HomogeneousExpansion:
    """``f = Psi_a o phi`` on a functional domain, truncated at ``order``.

    ``a=None`` takes the maximizing parameter of the extremal scan at
    ``constant + probe_offset`` (capped at 0.999 when the supremum is the
    ``a -> 1`` limit).  ``a=0.6`` gives the explicit ``chi_1`` coefficients.
    """
    kind, _ = _theorem(theorem)
    if domain.shape != "functional":
        raise ContractError("sharpness witness needs a functional-type domain")
    if a is None:
        w = sharpness_scan(kind, theorem_constant(theorem) + probe_offset)
        a = 0.5 if w is None else min(w.a, 0.999)
    return compose_linear(psi_coefficients(float(a), order), domain.functionals[index], dim)


def verify_homothetic(
    theorem: str,
    h: HomogeneousExpansion,
    domain: CircularDomain,
    scale: float | None = None,
    directions: int = DEFAULT_DIRECTIONS,
    seed: int = 0,
    tol: float = SLACK,
    samples: int = DEFAULT_SAMPLES,
    extra_directions: Sequence[Direction] = (),
) -> CheckReport:
    """Sample lines through 0 and check the theorem's functional at ``r = scale``.

    Extra directions are checked first and reported as trials ``-1, -2, ...``.
    """
    kind, _ = _theorem(theorem)
    if scale is None:
        scale = theorem_constant(theorem)
    if not 0.0 < scale < 1.0:
        raise ContractError(f"scale must lie in (0, 1), got {scale}")
    if h.n != domain.n:
        raise InvalidInputError(f"function has n={h.n} but domain has n={domain.n}")
    if np.any(h.constant_term()):
        raise ContractError("homothetic theorems require f(0) = 0")
    rep = CheckReport(f"{theorem.upper()}@{scale!r}", 0, max_slack_used=tol)
    dirs = [(-(i + 1), d) for i, d in enumerate(extra_directions)]
    for i in range(directions):
        dirs.append((i, random_direction(domain, np.random.default_rng(trial_seed(seed, i)))))
    for trial, d in dirs:
        s = line_restrict(h, d)
        res = eval_functional(kind, s, scale, samples)
        rep.record(trial, 0, res.value + res.tail, 1.0, tol, f"{kind.value} at r={scale!r}",
                   {"direction": d.to_json_dict()})
        rep.trials += 1
    return rep
