"""State containers and the reference states used across the test laws."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import check_dims, dag, eigh_checked, partial_trace

NORM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class State:
    """A pure vector or density operator together with its subsystem dims.

    ``data`` is 1-D for a pure state, 2-D (square) for a density operator.
    Use the ``pure_state`` / ``density_state`` factories to get validation.
    """

    data: np.ndarray
    dims: tuple[int, ...]

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def marginal(self, keep) -> np.ndarray:
        return partial_trace(self.density(), self.dims, keep)


def pure_state(vec: np.ndarray, dims: tuple[int, ...]) -> State:
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    check_dims(vec.shape[0], tuple(dims))
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"pure state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
    return State(vec, tuple(int(d) for d in dims))


def density_state(mat: np.ndarray, dims: tuple[int, ...]) -> State:
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"density operator must be square, got shape {mat.shape}")
    check_dims(mat.shape[0], tuple(dims))
    if abs(np.trace(mat).real - 1.0) > TRACE_TOL or abs(np.trace(mat).imag) > TRACE_TOL:
        raise ValueError(f"density trace {np.trace(mat)!r} deviates from 1 beyond {TRACE_TOL}")
    w, _ = eigh_checked(mat)  # also rejects non-Hermitian input
    if w[0] < -PSD_TOL:
        raise ValueError(f"density operator not PSD: min eigenvalue {w[0]:.3e}")
    return State(mat, tuple(int(d) for d in dims))


def generalized_ghz(alpha: float) -> State:
    """alpha|000> + sqrt(1-alpha^2)|111> on three qubits, 0 < alpha < 1."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    vec = np.zeros(8, dtype=np.complex128)
    vec[0] = alpha
    vec[7] = np.sqrt(1.0 - alpha * alpha)
    return State(vec, (2, 2, 2))


def w_state() -> State:
    vec = np.zeros(8, dtype=np.complex128)
    vec[1] = vec[2] = vec[4] = 1.0 / np.sqrt(3.0)  # |001>, |010>, |100>
    return State(vec, (2, 2, 2))


def maximally_entangled(d: int) -> State:
    """sum_i |ii> / sqrt(d) on a d x d system."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    vec = np.zeros(d * d, dtype=np.complex128)
    vec[:: d + 1] = 1.0 / np.sqrt(d)
    return State(vec, (d, d))


def random_pure(dims: tuple[int, ...], seed: int) -> State:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return State(vec / np.linalg.norm(vec), dims)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def is_density(mat: np.ndarray, tol_eig: float = PSD_TOL) -> bool:
    """Loose check used by tests; factories raise with specifics instead."""
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return False
    if np.max(np.abs(mat - dag(mat))) > 1e-10:
        return False
    if abs(np.trace(mat) - 1.0) > 1e-10:
        return False
    return bool(np.linalg.eigvalsh(mat)[0] >= -tol_eig)
