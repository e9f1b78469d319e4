"""Brute-force assisted-entanglement optimizers.

These searches are the independent side of every law check: they know
nothing about the closed forms they are compared against.  Two families:

* ensemble search -- climb over HJW mixing isometries applied to the
  eigen-ensemble of a two-qubit density (decomposition ceiling);
* measurement search -- climb over rank-1 POVMs on the assisting party C
  of a tripartite state (certified lower bounds on the assistance value).

All optimized values inherit optimizer slack: treat them as bounds with a
tolerance near ``OPT_TOL``, never as exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .linalg import dag, haar_isometry_rng, instance_seed, kron, partial_trace, psd_sqrt
from .measures import _check_two_qubit_density, wootters_concurrence
from .states import State

OPT_TOL = 1e-3        # slack granted to optimized bounds in law checks
ISOMETRY_TOL = 1e-10
RANK_TOL = 1e-10
STEP_SCALE = 0.5      # initial perturbation scale of the ascent

_DUMMY_MAT = np.zeros((1, 1), dtype=np.complex128)
_DUMMY_T4 = np.zeros((1, 1, 1, 1), dtype=np.complex128)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iters: int = 500
    step_tol: float = 1e-4   # floor of the decaying perturbation scale
    obj_tol: float = 1e-12   # minimum improvement kept by the climb
    seed: int = 0


@dataclass(frozen=True)
class Povm:
    """Rank-1 generalized measurement; elements sum to the identity."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("POVM needs at least one element")
        d = self.elements[0].shape[0]
        acc = np.zeros((d, d), dtype=np.complex128)
        for e in self.elements:
            if e.shape != (d, d):
                raise ValueError("POVM elements must share one square shape")
            if np.linalg.eigvalsh((e + dag(e)) / 2)[0] < -1e-10:
                raise ValueError("POVM element is not PSD")
            acc += e
        resid = np.max(np.abs(acc - np.eye(d)))
        if resid > 1e-10:
            raise ValueError(f"POVM does not resolve the identity: residual {resid:.3e}")

    @property
    def arity(self) -> int:
        return len(self.elements)


def povm_from_isometry(v: np.ndarray) -> Povm:
    """Rank-1 POVM whose i-th element comes from row i of the isometry.

    ``v`` is (arity, d) with orthonormal columns; E_i = conj(row_i) x row_i.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] < v.shape[1]:
        raise ValueError(f"expected a tall isometry, got shape {v.shape}")
    if np.max(np.abs(dag(v) @ v - np.eye(v.shape[1]))) > ISOMETRY_TOL:
        raise ValueError("isometry columns are not orthonormal")
    return Povm(tuple(np.outer(row.conj(), row) for row in v))


@dataclass(frozen=True)
class Ensemble:
    """A pure-state decomposition: sum_i weights[i] |vectors[i]><vectors[i]|."""

    weights: np.ndarray
    vectors: np.ndarray  # (size, dim), rows normalized

    def __post_init__(self):
        if abs(self.weights.sum() - 1.0) > 1e-10:
            raise ValueError(f"ensemble weights sum to {self.weights.sum()!r}")

    @property
    def size(self) -> int:
        return len(self.weights)

    def average(self, fn) -> float:
        return float(sum(w * fn(vec) for w, vec in zip(self.weights, self.vectors)))


def hjw_ensemble(rho: np.ndarray, mix: np.ndarray) -> Ensemble:
    """Decomposition of ``rho`` obtained by mixing its eigen-ensemble.

    Rows of the isometry ``mix`` (arity x rank) combine the sqrt-weighted
    eigenvectors; every decomposition of ``rho`` arises this way for some
    mix, which is what the ensemble search sweeps over.
    """
    rho = _check_two_qubit_density(rho)
    w, vecs = np.linalg.eigh(rho)
    support = w > RANK_TOL
    mu = w[support][::-1]
    basis = vecs[:, support][:, ::-1]  # columns, descending weight
    r = len(mu)
    mix = np.asarray(mix, dtype=np.complex128)
    if mix.ndim != 2 or mix.shape[1] != r or mix.shape[0] < r:
        raise ValueError(f"mix must be (arity >= {r}) x {r}, got {mix.shape}")
    if np.max(np.abs(dag(mix) @ mix - np.eye(r))) > ISOMETRY_TOL:
        raise ValueError("mix columns are not orthonormal")
    raw = mix @ (basis * np.sqrt(mu)).T  # rows are unnormalized members
    weights = np.einsum("ij,ij->i", raw, raw.conj()).real
    keep = weights > 1e-12
    raw, weights = raw[keep], weights[keep]
    ensemble = Ensemble(weights, raw / np.sqrt(weights)[:, None])
    recon = (ensemble.vectors.T * ensemble.weights) @ ensemble.vectors.conj()
    if np.max(np.abs(recon - rho)) > 1e-9:
        raise ValueError("ensemble does not reconstruct the input density")
    return ensemble


def assisted_average(state: State, povm: Povm) -> float:
    """Average conditional concurrence when C is measured with ``povm``.

    Outcomes with probability below 1e-12 contribute zero.
    """
    if len(state.dims) != 3 or state.dims[:2] != (2, 2):
        raise ValueError(f"expected dims (2, 2, n3), got {state.dims}")
    n3 = state.dims[2]
    if povm.elements[0].shape[0] != n3:
        raise ValueError("POVM dimension does not match subsystem C")
    rho = state.density()
    eye_ab = np.eye(4, dtype=np.complex128)
    total = 0.0
    for e in povm.elements:
        lifted = kron(eye_ab, psd_sqrt(e))
        sigma = partial_trace(lifted @ rho @ lifted, state.dims, (0, 1))
        p = float(np.real(np.trace(sigma)))
        if p < 1e-12:
            continue
        total += p * wootters_concurrence(np.ascontiguousarray(sigma / p))
    return total


def _climb(mode, mat, t4, d1, d2, n_cols, arity, cfg: OptimizerConfig):
    """Restart loop around the kernel ascent; returns (best, isometry, leak).

    Restart r draws its start and noise from a counter-derived seed, so any
    single restart reproduces in isolation and restarts could fan out to
    workers without changing the result.
    """
    mat = np.ascontiguousarray(mat)
    t4 = np.ascontiguousarray(t4)
    best = -np.inf
    best_v = None
    best_leak = 0.0
    for r in range(cfg.restarts):
        rng = np.random.default_rng(instance_seed(cfg.seed, r))
        v0 = np.ascontiguousarray(haar_isometry_rng(rng, arity, n_cols))
        shape = (cfg.max_iters, arity, n_cols)
        noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
        val, v, leak = kernels.ascent(
            mode, mat, t4, d1, d2, v0, noise, STEP_SCALE, cfg.step_tol, cfg.obj_tol
        )
        if val > best:
            best, best_v, best_leak = val, v, leak
    return float(best), best_v, float(best_leak)


def coa_convex_max(rho: np.ndarray, cfg: OptimizerConfig, arity: int | None = None) -> float:
    """Best average pure concurrence found over HJW decompositions of rho.

    A lower bound on the decomposition ceiling that coa() computes in
    closed form (and never exceeds it beyond round-off).
    """
    rho = _check_two_qubit_density(rho)
    w, vecs = np.linalg.eigh(rho)
    support = w > RANK_TOL
    mu = w[support][::-1]
    basis = vecs[:, support][:, ::-1]
    r = len(mu)
    if arity is None:
        arity = 2 * r
    if arity < r:
        raise ValueError(f"arity {arity} below rank {r}")
    mat = (basis * np.sqrt(mu)).T  # rows sqrt(mu_j) e_j
    best, _, _ = _climb(kernels.MODE_COA_MIX, mat, _DUMMY_T4, 0, 0, r, arity, cfg)
    return best


def _povm_input(state: State, expect_b: int | None = None):
    if len(state.dims) != 3:
        raise ValueError(f"expected three subsystems, got dims {state.dims}")
    d1, d2, n3 = state.dims
    if expect_b is not None and d2 != expect_b:
        raise ValueError(f"expected middle dim {expect_b}, got {d2}")
    t4 = state.density().reshape(d1 * d2, n3, d1 * d2, n3)
    return t4, d1, d2, n3


def eoa_lower_bound(state: State, cfg: OptimizerConfig, arity: int | None = None) -> float:
    """Certified lower bound on the assistance value of a (2,2,n3) state.

    Measurement search over rank-1 POVMs on C with exact conditional
    concurrences; every reported value is attained by a concrete POVM.
    """
    t4, d1, d2, n3 = _povm_input(state)
    if (d1, d2) != (2, 2):
        raise ValueError(f"expected dims (2, 2, n3), got {state.dims}")
    if arity is None:
        arity = 2 * n3
    if arity < n3:
        raise ValueError(f"arity {arity} below n3 {n3}")
    best, _, _ = _climb(kernels.MODE_WOOTTERS_POVM, _DUMMY_MAT, t4, d1, d2, n3, arity, cfg)
    return best


def eoa_pure_povm_opt(state: State, cfg: OptimizerConfig, arity: int | None = None) -> float:
    """Assistance lower bound for a pure (d1,d2,n3) state, exact inner values.

    Conditionals of a pure state under rank-1 POVMs stay pure, so each
    outcome is scored with the exact pure I-concurrence.
    """
    if not state.is_pure:
        raise ValueError("eoa_pure_povm_opt needs a pure state")
    d1, d2, n3 = state.dims
    mat = state.data.reshape(d1 * d2, n3)
    if arity is None:
        arity = 2 * n3
    best, _, _ = _climb(kernels.MODE_PURE_POVM, mat, _DUMMY_T4, d1, d2, n3, arity, cfg)
    return best


def eoa_support2_opt(state: State, cfg: OptimizerConfig, arity: int | None = None):
    """Assistance lower bound for a mixed (d,2,n3) state.

    Each conditional is projected onto the rank-<=2 support of its A
    marginal and scored with Wootters there.  Returns (value, leak): the
    bound is exact-inner (certified) only when leak is negligible, which
    holds whenever the state is a channel image of a pure state.
    """
    t4, d1, d2, n3 = _povm_input(state, expect_b=2)
    if arity is None:
        arity = 2 * n3
    best, _, leak = _climb(kernels.MODE_SUPPORT2_POVM, _DUMMY_MAT, t4, d1, d2, n3, arity, cfg)
    return best, leak


def eoa_eigavg_estimate(state: State, cfg: OptimizerConfig, arity: int | None = None) -> float:
    """Heuristic assistance estimate for a mixed (d,d,n3) state.

    Conditionals are scored by their eigen-ensemble average pure
    I-concurrence, which over-counts the convex roof; the optimized value
    is an advisory estimate, not a certified bound in either direction.
    """
    t4, d1, d2, n3 = _povm_input(state)
    if arity is None:
        arity = 2 * n3
    best, _, _ = _climb(kernels.MODE_EIGAVG_POVM, _DUMMY_MAT, t4, d1, d2, n3, arity, cfg)
    return best


def roof_upper_bound(sigma: np.ndarray, dims: tuple[int, int], cfg: OptimizerConfig,
                     arity: int | None = None) -> float:
    """Upper bound on the mixed-state I-concurrence of a d1 x d2 density.

    The convex roof is an infimum over decompositions, so the average pure
    I-concurrence of any decomposition upper-bounds it; this descends over
    HJW mixes to tighten that average, starting from the eigen-ensemble.
    """
    d1, d2 = int(dims[0]), int(dims[1])
    sigma = np.asarray(sigma, dtype=np.complex128)
    w, vecs = np.linalg.eigh((sigma + dag(sigma)) / 2)
    support = w > RANK_TOL
    mu = w[support][::-1]
    basis = vecs[:, support][:, ::-1]
    r = len(mu)
    if arity is None:
        arity = 2 * r
    mat = (basis * np.sqrt(mu)).T  # (r, d1*d2)

    def avg(mix):
        members = (mix @ mat).reshape(-1, d1, d2)
        gram = members @ members.conj().transpose(0, 2, 1)
        p = np.einsum("kii->k", gram).real
        pur = np.einsum("kij,kij->k", gram, gram.conj()).real
        return float(np.sum(np.sqrt(np.maximum(0.0, 2.0 * (p * p - pur)))))

    best = np.inf
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(instance_seed(cfg.seed, restart))
        if restart == 0:
            mix = np.eye(arity, r, dtype=np.complex128)  # eigen-ensemble start
        else:
            mix = haar_isometry_rng(rng, arity, r)
        cur = avg(mix)
        sigma_step = STEP_SCALE
        decay = (cfg.step_tol / STEP_SCALE) ** (1.0 / max(1, cfg.max_iters - 1))
        for _ in range(cfg.max_iters):
            noise = (rng.standard_normal((arity, r)) + 1j * rng.standard_normal((arity, r))) / np.sqrt(2)
            q, _ = np.linalg.qr(mix + sigma_step * noise)
            val = avg(q)
            if val < cur - cfg.obj_tol:
                cur, mix = val, q
            sigma_step *= decay
        best = min(best, cur)
    return float(best)
