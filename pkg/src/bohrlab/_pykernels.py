"""NumPy implementations of the hot kernels (fallback backend)."""
from __future__ import annotations

import numpy as np


def _spectral_norms(mats: np.ndarray) -> np.ndarray:
    if mats.shape[-1] == 1:
        return np.abs(mats[:, 0, 0])
    return np.linalg.svd(mats, compute_uv=False)[:, 0]


def coeff_norms(coeffs: np.ndarray) -> np.ndarray:
    """Operator norm of each coefficient of a ``(N+1, d, d)`` stack."""
    return _spectral_norms(np.ascontiguousarray(coeffs, dtype=np.complex128))


def matpoly_norms(coeffs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """``|| sum_n A_n z^n ||`` for every ``z`` in ``zs`` (Horner, batched)."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    z = zs[:, None, None]
    acc = np.broadcast_to(coeffs[-1], (zs.size,) + coeffs.shape[1:]).copy()
    for n in range(coeffs.shape[0] - 2, -1, -1):
        acc *= z
        acc += coeffs[n]
    return _spectral_norms(acc)


def power_sums(norms: np.ndarray, r: float) -> tuple[float, float, float]:
    """Return ``(sum c_n r^n, sum_{n>=2} c_n^2 r^(2n-1), sum_{n>=1} c_n^2 r^(2n))``."""
    c = np.asarray(norms, dtype=np.float64)
    n = np.arange(c.size)
    rp = r ** n
    lin = float(np.dot(c, rp))
    sq = c * c * rp * rp
    sq_h = float(np.sum(sq[1:]))
    if r == 0.0:
        return lin, 0.0, sq_h
    sq_g = float(np.sum(sq[2:])) / r
    return lin, sq_g, sq_h
