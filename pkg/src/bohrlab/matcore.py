"""Small dense complex matrices: operator norm, adjoint, positive square root.

Matrices are stored as read-only ``complex128`` arrays wrapped in
:class:`ComplexMatrix`.  The JSON literal format is a row-major nested list of
``[re, im]`` pairs.
"""
from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from .errors import DomainError, InvalidInputError

MAX_DIM = 16


class ComplexMatrix:
    """Immutable square complex matrix."""

    __slots__ = ("_data",)

    def __init__(self, entries: Any):
        arr = np.array(entries, dtype=np.complex128)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InvalidInputError(f"matrix must be square and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("matrix has non-finite entries")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def identity(cls, dim: int, scale: complex = 1.0) -> "ComplexMatrix":
        return cls(scale * np.eye(dim, dtype=np.complex128))

    @classmethod
    def zeros(cls, dim: int) -> "ComplexMatrix":
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    @classmethod
    def from_literal(cls, rows: Sequence[Sequence[Sequence[float]]]) -> "ComplexMatrix":
        """Parse the ``[[ [re, im], ... ], ...]`` literal format."""
        try:
            arr = np.array(rows, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"matrix literal is not numeric: {exc}") from None
        if arr.ndim != 3 or arr.shape[-1] != 2:
            raise InvalidInputError("matrix literal must be rows of [re, im] pairs")
        return cls(arr[..., 0] + 1j * arr[..., 1])

    def to_literal(self) -> list:
        return [[[float(v.real), float(v.imag)] for v in row] for row in self._data]

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self._data @ as_array(other))

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self._data + as_array(other))

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self._data - as_array(other))

    def __mul__(self, c: complex) -> "ComplexMatrix":
        return ComplexMatrix(complex(c) * self._data)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.all(self._data == other._data))

    def __hash__(self) -> int:
        return hash(self._data.tobytes())

    def __repr__(self) -> str:
        return f"ComplexMatrix({self._data.tolist()!r})"


def as_array(m: Any) -> np.ndarray:
    """Return the underlying array, validating plain array-likes on the way."""
    if isinstance(m, ComplexMatrix):
        return m.data
    return ComplexMatrix(m).data


def operator_norm(m: Any, tol: float = 1e-12) -> float:
    """Largest singular value of ``m``.

    LAPACK's SVD is accurate to a few ulps relative to the norm, well inside
    any admissible ``tol``.
    """
    if not 0 < tol <= 1e-6:
        raise InvalidInputError(f"tol must lie in (0, 1e-6], got {tol}")
    a = as_array(m)
    if not np.any(a):
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def adjoint(m: Any) -> ComplexMatrix:
    return ComplexMatrix(as_array(m).conj().T)


def positive_sqrt(m: Any, tol: float = 1e-12) -> ComplexMatrix:
    """Unique positive semidefinite square root of a positive matrix.

    Raises DomainError when ``m`` is not Hermitian or has an eigenvalue below
    ``-tol * (1 + ||m||)``.
    """
    a = as_array(m)
    scale = 1.0 + (float(np.linalg.svd(a, compute_uv=False)[0]) if np.any(a) else 0.0)
    if np.max(np.abs(a - a.conj().T)) > tol * scale:
        raise DomainError("matrix is not self-adjoint")
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    if w[0] < -tol * scale:
        raise DomainError(f"matrix is not positive semidefinite: eigenvalue estimate {w[0]:.6g}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return ComplexMatrix(0.5 * (root + root.conj().T))


def is_contraction(m: Any, tol: float = 1e-12) -> bool:
    return operator_norm(m, tol) <= 1.0 + tol


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def is_scalar_multiple(a: np.ndarray, atol: float = 1e-12) -> complex | None:
    """Return ``c`` when ``a`` equals ``c * I`` within ``atol`` in operator norm."""
    c = complex(np.trace(a) / a.shape[0])
    resid = a - c * np.eye(a.shape[0])
    if not np.any(resid):
        return c
    return c if float(np.linalg.svd(resid, compute_uv=False)[0]) <= atol else None
