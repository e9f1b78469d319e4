"""Hot numeric kernels for the assistance optimizers.

The stochastic ascent over measurement isometries evaluates its objective
hundreds of thousands of times per batch, each evaluation a handful of
small complex eigenproblems.  When numba is importable (and not disabled)
the kernels below are compiled with ``@njit``; otherwise the exact same
function bodies run as plain numpy.  Select the fallback explicitly with::

    EOA_BACKEND=numpy

Randomness never lives inside a kernel: callers pre-draw every perturbation
from a seeded numpy Generator and pass it in, so both backends consume the
same proposal sequence for the same seed.  Compiled reductions can round
differently from numpy's vectorized ones, so cross-backend optima agree to
the last ulp or two rather than bitwise.
"""
from __future__ import annotations

import os

import numpy as np

BACKEND = "numpy"
if os.environ.get("EOA_BACKEND", "").strip().lower() != "numpy":
    try:
        from numba import njit as _njit

        BACKEND = "numba"
    except ImportError:
        pass

if BACKEND == "numba":
    def _compiled(f):
        return _njit(cache=True)(f)
else:
    def _compiled(f):
        return f

# sigma_y (x) sigma_y, the two-qubit spin-flip kernel
SYSY = np.array(
    [[0.0, 0.0, 0.0, -1.0],
     [0.0, 0.0, 1.0, 0.0],
     [0.0, 1.0, 0.0, 0.0],
     [-1.0, 0.0, 0.0, 0.0]],
    dtype=np.complex128,
)

# objective selector for the shared ascent driver
MODE_COA_MIX = 0
MODE_WOOTTERS_POVM = 1
MODE_PURE_POVM = 2
MODE_EIGAVG_POVM = 3
MODE_SUPPORT2_POVM = 4

_EIG_CUT = 1e-14

# Eigenvalues below _RANK_CUT * lambda_max are numerical zeros; sqrt would
# amplify their rounding noise (~1e-16) into ~1e-8 spectral garbage, so they
# are zeroed before the root is taken.
_RANK_CUT = 1e-13


@_compiled
def _sqrt_clipped(w):
    cut = max(w[-1], 0.0) * _RANK_CUT
    out = np.empty_like(w)
    for q in range(w.shape[0]):
        out[q] = np.sqrt(w[q]) if w[q] > cut else 0.0
    return out


@_compiled
def lambda_spectrum(sigma):
    """Square roots of the eigenvalues of sqrt(s) s~ sqrt(s), ascending.

    ``sigma`` is a Hermitian PSD 4x4 block, not necessarily normalized;
    the spectrum scales linearly with a scalar factor on sigma.  Only the
    Hermitian proxy is ever diagonalized, never the non-Hermitian product
    sigma @ sigma~.
    """
    w, v = np.linalg.eigh(sigma)
    s = _sqrt_clipped(w)
    root = (v * s) @ v.conj().T
    tilde = SYSY @ sigma.conj() @ SYSY
    proxy = root @ tilde @ root
    proxy = (proxy + proxy.conj().T) / 2.0
    return _sqrt_clipped(np.linalg.eigvalsh(proxy))


@_compiled
def wootters_raw(sigma):
    """max(0, l1 - l2 - l3 - l4); scales linearly with a factor on sigma."""
    lam = lambda_spectrum(sigma)
    return max(0.0, 2.0 * lam[-1] - lam.sum())


@_compiled
def coa_raw(sigma):
    return lambda_spectrum(sigma).sum()


@_compiled
def _conditional_block(t4, v, i):
    """(1 x <c_i|) rho (1 x |c_i>) for the rank-1 element built from row i.

    ``t4`` is the density reshaped to (m, n3, m, n3); the unnormalized
    output carries the outcome probability as its trace.
    """
    m = t4.shape[0]
    n3 = t4.shape[1]
    sig = np.zeros((m, m), dtype=np.complex128)
    for c in range(n3):
        for cp in range(n3):
            w = v[i, c] * np.conj(v[i, cp])
            sig += w * t4[:, c, :, cp].copy()
    return sig


@_compiled
def _pure_iconc_raw(x):
    """p * C(psi/sqrt(p)) for an unnormalized pure block, via marginal purity.

    ``x`` is the state reshaped to (d1, d2); the value is
    sqrt(2 * (p^2 - tr rho_A^2)) with everything left unnormalized.
    """
    rho_a = x @ x.conj().T
    p = np.real(np.trace(rho_a))
    purity = np.real(np.sum(rho_a * rho_a.conj()))
    return np.sqrt(2.0 * max(0.0, p * p - purity))


@_compiled
def objective(mode, mat, t4, d1, d2, v):
    """Average entanglement for one isometry, plus a certification leak.

    mode 0: HJW mix over ``mat`` rows (sqrt-weighted eigenvectors of a
            two-qubit density); average pure concurrence 2|ad - bc|.
    mode 1: rank-1 POVM rows on subsystem C of a (2,2,n3) density ``t4``;
            average Wootters concurrence of the conditional blocks.
    mode 2: rank-1 POVM on C of a pure state, columns of ``mat`` holding
            the (d1*d2, n3) reshape; exact pure-state I-concurrence.
    mode 3: as mode 1 on a (d1,d1,n3) density, conditional blocks scored
            by their eigen-ensemble average pure I-concurrence (an upper
            proxy for the convex roof; heuristic, not certified).
    mode 4: as mode 1 on a (d1,2,n3) density; each conditional block is
            projected onto the rank-<=2 support of its A marginal and
            scored with Wootters there.  ``leak`` reports the largest
            relative weight discarded by that projection; exact whenever
            leak vanishes.

    Returns (value, leak); leak is 0 except in mode 4.
    """
    k = v.shape[0]
    total = 0.0
    leak = 0.0
    if mode == MODE_COA_MIX:
        members = v @ mat  # (k, 4) unnormalized ensemble members
        for i in range(k):
            total += 2.0 * abs(members[i, 0] * members[i, 3] - members[i, 1] * members[i, 2])
        return total, 0.0
    if mode == MODE_PURE_POVM:
        for i in range(k):
            w = mat @ v[i]  # unnormalized conditional pure state
            total += _pure_iconc_raw(w.reshape(d1, d2).copy())
        return total, 0.0
    for i in range(k):
        sig = _conditional_block(t4, v, i)
        p = np.real(np.trace(sig))
        if p < 1e-12:
            continue
        if mode == MODE_WOOTTERS_POVM:
            total += wootters_raw(sig)
        elif mode == MODE_EIGAVG_POVM:
            w, vecs = np.linalg.eigh(sig)
            for q in range(w.shape[0]):
                if w[q] > _EIG_CUT:
                    total += w[q] * _pure_iconc_raw(vecs[:, q].reshape(d1, d2).copy())
        else:  # MODE_SUPPORT2_POVM
            m = sig.shape[0]
            rho_a = np.zeros((d1, d1), dtype=np.complex128)
            for a in range(d1):
                for ap in range(d1):
                    rho_a[a, ap] = sig[2 * a, 2 * ap] + sig[2 * a + 1, 2 * ap + 1]
            wa, va = np.linalg.eigh(rho_a)
            if d1 > 2:
                rel = wa[d1 - 3] / p
                if rel > leak:
                    leak = rel
            proj = np.zeros((4, 4), dtype=np.complex128)
            for s in range(2):
                for sp in range(2):
                    col = va[:, d1 - 2 + s]
                    colp = va[:, d1 - 2 + sp]
                    for b in range(2):
                        for bp in range(2):
                            acc = 0.0 + 0.0j
                            for a in range(d1):
                                for ap in range(d1):
                                    acc += np.conj(col[a]) * sig[2 * a + b, 2 * ap + bp] * colp[ap]
                            proj[2 * s + b, 2 * sp + bp] = acc
            total += wootters_raw(proj)
    return total, leak


@_compiled
def ascent(mode, mat, t4, d1, d2, v0, noise, sigma0, sigma_floor, obj_tol):
    """One greedy hill-climb restart over the isometry manifold.

    Perturbs with pre-drawn Gaussian noise of geometrically decaying scale,
    re-orthonormalizes by QR, and keeps a move only when it improves the
    objective by more than ``obj_tol``.  Returns (best value, best isometry,
    leak at the best point).
    """
    iters = noise.shape[0]
    v = v0.copy()
    best, best_leak = objective(mode, mat, t4, d1, d2, v)
    if iters > 1:
        decay = (sigma_floor / sigma0) ** (1.0 / (iters - 1))
    else:
        decay = 1.0
    sigma = sigma0
    for k in range(iters):
        cand = v + sigma * noise[k]
        q, r = np.linalg.qr(cand)
        q = np.ascontiguousarray(q)
        val, lk = objective(mode, mat, t4, d1, d2, q)
        if val > best + obj_tol:
            best = val
            best_leak = lk
            v = q
        sigma *= decay
    return best, v, best_leak
