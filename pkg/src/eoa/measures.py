"""Entanglement measures: Wootters concurrence, its assisted ceiling, and
the d x d generalization.

Two-qubit quantities are derived from the spectrum of the Hermitian proxy
sqrt(rho) rho~ sqrt(rho); the non-Hermitian product rho rho~ is never
diagonalized directly.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .linalg import check_dims, eigh_checked, kron, partial_trace
from .states import State

DENSITY_TOL = 1e-10
NORM_TOL = 1e-12


def _check_two_qubit_density(rho: np.ndarray) -> np.ndarray:
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit density, got shape {rho.shape}")
    if abs(np.trace(rho) - 1.0) > DENSITY_TOL:
        raise ValueError(f"density trace {np.trace(rho)!r} is not 1")
    w, _ = eigh_checked(rho, tol=1e-10)
    if w[0] < -DENSITY_TOL:
        raise ValueError(f"density not PSD: min eigenvalue {w[0]:.3e}")
    return rho


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """(sy x sy) rho* (sy x sy) on a two-qubit operator."""
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got shape {rho.shape}")
    return kernels.SYSY @ rho.conj() @ kernels.SYSY


def concurrence_lambdas(rho: np.ndarray) -> np.ndarray:
    """The four lambda values, descending."""
    rho = _check_two_qubit_density(rho)
    return kernels.lambda_spectrum(rho)[::-1]


def wootters_concurrence(rho: np.ndarray) -> float:
    """max(0, l1 - l2 - l3 - l4) of a two-qubit density."""
    lam = concurrence_lambdas(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def coa(rho: np.ndarray) -> float:
    """Concurrence of assistance: l1 + l2 + l3 + l4.

    This is the best average pure-state concurrence any decomposition of
    ``rho`` can reach, hence an upper ceiling for the assisted protocols.
    """
    return float(concurrence_lambdas(rho).sum())


def pure_concurrence(psi: np.ndarray, dims: tuple[int, int]) -> float:
    """sqrt(2 (1 - tr rho_A^2)) across the bipartition given by ``dims``."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    d1, d2 = int(dims[0]), int(dims[1])
    check_dims(psi.shape[0], (d1, d2))
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("pure_concurrence expects a normalized state vector")
    x = psi.reshape(d1, d2)
    rho_a = x @ x.conj().T
    pur = float(np.real(np.sum(rho_a * rho_a.conj())))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - pur))))


def so_generators(d: int) -> list[np.ndarray]:
    """The d(d-1)/2 antisymmetric generators E_ab - E_ba, a < b."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    gens = []
    for a in range(d):
        for b in range(a + 1, d):
            g = np.zeros((d, d), dtype=np.complex128)
            g[a, b] = 1.0
            g[b, a] = -1.0
            gens.append(g)
    return gens


def i_concurrence_generators(psi: np.ndarray, d: int) -> float:
    """Pure d x d I-concurrence from the generator form.

    sqrt( sum_{mn} |psi^T (L_m x L_n) psi|^2 ) over all generator pairs;
    agrees with the marginal-purity form on normalized input.
    """
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    check_dims(psi.shape[0], (d, d))
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("i_concurrence_generators expects a normalized state vector")
    gens = so_generators(d)
    total = 0.0
    for lm in gens:
        for ln in gens:
            amp = psi @ kron(lm, ln) @ psi
            total += float(np.abs(amp)) ** 2
    return float(np.sqrt(total))


def eoa_pure_tripartite(state: State) -> float:
    """Entanglement of assistance of a pure (2, 2, n3) state.

    For pure states the third party's best measurement realizes the best
    decomposition of the pair marginal, so this is coa of that marginal.
    """
    if not state.is_pure:
        raise ValueError("eoa_pure_tripartite needs a pure state; use the optimizer for mixed input")
    if len(state.dims) != 3 or state.dims[0] != 2 or state.dims[1] != 2:
        raise ValueError(f"expected dims (2, 2, n3), got {state.dims}")
    return coa(partial_trace(state.density(), state.dims, (0, 1)))
