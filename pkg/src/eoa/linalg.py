"""Dense complex linear algebra helpers for small multipartite systems.

Everything operates on plain numpy arrays (complex128).  Composite-system
matrices are indexed row-major over the subsystem dims, so ``kron(a, b)``
acts on the first subsystem with ``a``.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

HERM_TOL = 1e-12
PSD_TOL = 1e-10
RECON_TOL = 1e-10


def dag(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators, left factor first."""
    if not ops:
        raise ValueError("kron needs at least one operator")
    return reduce(np.kron, ops)


def check_dims(size: int, dims: tuple[int, ...]) -> None:
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dims must be positive, got {dims}")
    if int(np.prod(dims)) != size:
        raise ValueError(f"dims {dims} do not multiply to size {size}")


def partial_trace(m: np.ndarray, dims: tuple[int, ...], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    m : square matrix on the full composite space
    dims : dimension of each subsystem, in tensor order
    keep : index or iterable of indices of subsystems to retain
            (output ordering follows the original tensor order)
    """
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(sorted(int(k) for k in keep))
    n = len(dims)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    check_dims(m.shape[0], tuple(dims))
    if any(k < 0 or k >= n for k in keep):
        raise IndexError(f"keep indices {keep} out of range for {n} subsystems")

    t = m.reshape(tuple(dims) * 2)
    # row index j and column index n + j; traced pairs share a label
    row = list(range(n))
    col = [n + j if j in keep else j for j in range(n)]
    out = [j for j in keep] + [n + j for j in keep]
    t = np.einsum(t, row + col, out)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    return bool(np.max(np.abs(m - dag(m))) <= tol)


def eigh_checked(m: np.ndarray, tol: float = HERM_TOL):
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Rejects input whose anti-Hermitian part exceeds ``tol``; callers that
    only hold a numerically-Hermitian matrix should symmetrize first.
    """
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m, tol):
        raise ValueError(f"matrix is not Hermitian within {tol}")
    w, v = np.linalg.eigh(m)
    return w, v


def hermitize(m: np.ndarray) -> np.ndarray:
    """Average away the anti-Hermitian round-off part."""
    return (m + dag(m)) / 2


def psd_sqrt(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive-semidefinite matrix.

    Eigenvalues in [-tol, 0) are clipped to zero; anything lower is a
    genuine negativity and gets rejected.
    """
    w, v = eigh_checked(m)
    if w[0] < -tol:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    s = np.sqrt(np.clip(w, 0.0, None))
    return (v * s) @ dag(v)


def haar_isometry(n_rows: int, n_cols: int, seed: int) -> np.ndarray:
    """Haar-random isometry via QR of a complex Gaussian matrix.

    The diagonal of R is phase-fixed so the distribution is exactly the
    Haar measure rather than the raw (biased) QR output.  n_rows == n_cols
    gives a Haar-random unitary.
    """
    rng = np.random.default_rng(seed)
    return haar_isometry_rng(rng, n_rows, n_cols)


def haar_isometry_rng(rng: np.random.Generator, n_rows: int, n_cols: int) -> np.ndarray:
    if n_rows < n_cols:
        raise ValueError(f"need n_rows >= n_cols, got {n_rows} x {n_cols}")
    z = (rng.standard_normal((n_rows, n_cols)) + 1j * rng.standard_normal((n_rows, n_cols))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def instance_seed(master: int, index: int) -> int:
    """Derive the seed of instance ``index`` from a master seed.

    Counter-based, so instance k is reproducible without generating the
    first k-1 streams.
    """
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
