"""Kraus channels, parametrized families, and channel application."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dag, haar_isometry, kron
from .states import State, density_state

COMPLETENESS_TOL = 1e-10

PHASE_DAMPING = "phase-damping"
GAD = "generalized-amplitude-damping"
IDENTITY = "identity"
FAMILY_NAMES = (PHASE_DAMPING, GAD, IDENTITY)


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("channel needs at least one Kraus operator")
        shape = self.kraus[0].shape
        if len(shape) != 2:
            raise ValueError(f"Kraus operators must be matrices, got shape {shape}")
        for k in self.kraus:
            if k.shape != shape:
                raise ValueError("all Kraus operators must share one shape")
        acc = sum(dag(k) @ k for k in self.kraus)
        resid = np.max(np.abs(acc - np.eye(shape[1])))
        if resid > COMPLETENESS_TOL:
            raise ValueError(f"Kraus completeness violated: residual {resid:.3e}")

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]


def _decay(gamma_t: float) -> float:
    if np.isnan(gamma_t) or gamma_t < 0:
        raise ValueError(f"gamma_t must be >= 0, got {gamma_t}")
    return float(np.exp(-gamma_t))


def phase_damping(gamma_t: float) -> KrausChannel:
    """Qubit phase damping: diag(1, nu) and diag(0, sqrt(1 - nu^2))."""
    nu = _decay(gamma_t)
    omega = np.sqrt(1.0 - nu * nu)
    m0 = np.diag([1.0, nu]).astype(np.complex128)
    m1 = np.diag([0.0, omega]).astype(np.complex128)
    return KrausChannel((m0, m1), label=f"{PHASE_DAMPING}({gamma_t:g})")


def generalized_amplitude_damping(gamma_t: float, p: float) -> KrausChannel:
    """Qubit relaxation toward a p / (1-p) population mixture."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    nu = _decay(gamma_t)
    omega = np.sqrt(1.0 - nu * nu)
    sp, sq = np.sqrt(p), np.sqrt(1.0 - p)
    k0 = sp * np.diag([1.0, nu]).astype(np.complex128)
    k1 = sp * np.array([[0.0, omega], [0.0, 0.0]], dtype=np.complex128)
    k2 = sq * np.diag([nu, 1.0]).astype(np.complex128)
    k3 = sq * np.array([[0.0, 0.0], [omega, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1, k2, k3), label=f"{GAD}({gamma_t:g}, p={p:g})")


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=np.complex128),), label=f"{IDENTITY}({d})")


def random_channel(d: int, kraus_count: int, seed: int) -> KrausChannel:
    """Random channel from a Haar isometry into a kraus_count environment.

    Stacking the isometry's row blocks gives Kraus operators whose
    completeness is exact by construction.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if kraus_count < 1:
        raise ValueError(f"need kraus_count >= 1, got {kraus_count}")
    v = haar_isometry(d * kraus_count, d, seed)
    ops = tuple(np.ascontiguousarray(v[j * d : (j + 1) * d, :]) for j in range(kraus_count))
    return KrausChannel(ops, label=f"random({d}, k={kraus_count}, seed={seed})")


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """outer after inner, by multiplying out the Kraus families."""
    if inner.out_dim != outer.in_dim:
        raise ValueError(f"cannot compose: {inner.out_dim} -> {outer.in_dim}")
    ops = tuple(a @ b for a in outer.kraus for b in inner.kraus)
    return KrausChannel(ops, label=f"({outer.label} o {inner.label})")


def apply_channel(state: State, channel: KrausChannel, subsystem: int) -> State:
    """Act with the channel on one subsystem; always returns a density kind."""
    dims = state.dims
    if subsystem < 0 or subsystem >= len(dims):
        raise IndexError(f"subsystem {subsystem} out of range for dims {dims}")
    if channel.in_dim != dims[subsystem]:
        raise ValueError(
            f"channel acts on dim {channel.in_dim} but subsystem {subsystem} has dim {dims[subsystem]}"
        )
    d_before = int(np.prod(dims[:subsystem]))
    d_after = int(np.prod(dims[subsystem + 1 :]))
    eye_b = np.eye(d_before, dtype=np.complex128)
    eye_a = np.eye(d_after, dtype=np.complex128)
    rho = state.density()
    out = np.zeros_like(rho, shape=(d_before * channel.out_dim * d_after,) * 2)
    for k in channel.kraus:
        lifted = kron(eye_b, k, eye_a)
        out += lifted @ rho @ dag(lifted)
    new_dims = dims[:subsystem] + (channel.out_dim,) + dims[subsystem + 1 :]
    return density_state(out, new_dims)


@dataclass(frozen=True)
class ChannelFamily:
    """A one-parameter channel family evaluated at dimensionless gamma_t."""

    name: str
    p: float | None = None

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise ValueError(f"unknown channel family {self.name!r}; options: {FAMILY_NAMES}")
        if self.name == GAD and self.p is None:
            raise ValueError("generalized-amplitude-damping needs the stationary parameter p")

    def channel(self, gamma_t: float) -> KrausChannel:
        if self.name == PHASE_DAMPING:
            return phase_damping(gamma_t)
        if self.name == GAD:
            return generalized_amplitude_damping(gamma_t, self.p)
        return identity_channel(2)
