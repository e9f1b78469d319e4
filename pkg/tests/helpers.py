"""Shared random-instance builders for the test suite."""
import numpy as np

from eoa.linalg import instance_seed
from eoa.states import State, density_state, random_pure


def rank2_density(seed: int, dims=(2, 2)) -> np.ndarray:
    """Mixture of two Haar-random pure states with a random weight."""
    rng = np.random.default_rng(instance_seed(seed, 7))
    lam = rng.uniform(0.1, 0.9)
    a = random_pure(dims, instance_seed(seed, 8)).density()
    b = random_pure(dims, instance_seed(seed, 9)).density()
    return lam * a + (1.0 - lam) * b


def wishart_density(seed: int, d: int = 4) -> np.ndarray:
    """Full-rank random density from a complex Wishart draw."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def mixed_state(seed: int, dims) -> State:
    return density_state(rank2_density(seed, dims), dims)


def werner(p: float) -> np.ndarray:
    """p |phi+><phi+| + (1-p) I/4; concurrence max(0, (3p-1)/2)."""
    bell = np.zeros(4, dtype=np.complex128)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    return p * np.outer(bell, bell.conj()) + (1.0 - p) * np.eye(4) / 4.0
