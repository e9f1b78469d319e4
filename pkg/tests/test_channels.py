import numpy as np
import pytest

from eoa.channels import (
    FAMILY_NAMES,
    GAD,
    IDENTITY,
    PHASE_DAMPING,
    ChannelFamily,
    KrausChannel,
    apply_channel,
    compose,
    generalized_amplitude_damping,
    identity_channel,
    phase_damping,
    random_channel,
)
from eoa.linalg import dag, kron
from eoa.states import density_state, pure_state, random_pure
from helpers import wishart_density


def completeness_residual(ch):
    acc = sum(dag(k) @ k for k in ch.kraus)
    return np.max(np.abs(acc - np.eye(ch.in_dim)))


@pytest.mark.parametrize("gamma_t", [0.0, 0.05, 0.5, 1.0, 3.0, 25.0, np.inf])
def test_phase_damping_complete(gamma_t):
    assert completeness_residual(phase_damping(gamma_t)) < 1e-12


@pytest.mark.parametrize("gamma_t", [0.0, 0.3, 1.0, 10.0])
@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 1.0])
def test_gad_complete(gamma_t, p):
    assert completeness_residual(generalized_amplitude_damping(gamma_t, p)) < 1e-12


def test_gad_validation():
    with pytest.raises(ValueError):
        generalized_amplitude_damping(0.5, -0.1)
    with pytest.raises(ValueError):
        generalized_amplitude_damping(0.5, 1.1)
    with pytest.raises(ValueError):
        generalized_amplitude_damping(-0.5, 0.5)
    with pytest.raises(ValueError):
        phase_damping(float("nan"))


def test_phase_damping_scales_coherence():
    plus = pure_state(np.array([1.0, 1.0]) / np.sqrt(2.0), (2,))
    for gt in (0.0, 0.4, 2.0):
        out = apply_channel(plus, phase_damping(gt), 0)
        nu = np.exp(-gt)
        assert abs(out.data[0, 1] - nu / 2.0) < 1e-12
        assert abs(out.data[0, 0] - 0.5) < 1e-12


def test_gad_stationary_population():
    rho = density_state(wishart_density(5, 2), (2,))
    for p in (0.0, 0.3, 0.5, 0.9):
        out = apply_channel(rho, generalized_amplitude_damping(60.0, p), 0)
        assert np.max(np.abs(out.data - np.diag([p, 1.0 - p]))) < 1e-10


def test_kraus_channel_rejects_incomplete():
    half = (np.eye(2, dtype=np.complex128) * 0.9,)
    with pytest.raises(ValueError):
        KrausChannel(half)
    with pytest.raises(ValueError):
        KrausChannel(())
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2, dtype=np.complex128), np.zeros((3, 3), dtype=np.complex128)))


def test_random_channel_complete_and_deterministic():
    for d, k in ((2, 1), (2, 3), (3, 2), (4, 4)):
        ch = random_channel(d, k, seed=13)
        assert len(ch.kraus) == k
        assert ch.in_dim == d and ch.out_dim == d
        assert completeness_residual(ch) < 1e-12
    a = random_channel(2, 3, seed=4)
    b = random_channel(2, 3, seed=4)
    for ka, kb in zip(a.kraus, b.kraus):
        assert np.array_equal(ka, kb)
    with pytest.raises(ValueError):
        random_channel(1, 2, seed=0)
    with pytest.raises(ValueError):
        random_channel(2, 0, seed=0)


def test_single_kraus_random_channel_is_unitary():
    ch = random_channel(3, 1, seed=2)
    (u,) = ch.kraus
    assert np.max(np.abs(dag(u) @ u - np.eye(3))) < 1e-12
    assert np.max(np.abs(u @ dag(u) - np.eye(3))) < 1e-12


def test_apply_channel_matches_manual_lift():
    state = random_pure((2, 2, 3), seed=6)
    ch = random_channel(2, 3, seed=9)
    out = apply_channel(state, ch, 1)
    rho = state.density()
    want = np.zeros_like(rho)
    for k in ch.kraus:
        lifted = kron(np.eye(2), k, np.eye(3))
        want += lifted @ rho @ dag(lifted)
    assert np.max(np.abs(out.data - want)) < 1e-12
    assert out.dims == (2, 2, 3)


def test_apply_channel_leaves_other_marginals():
    state = random_pure((2, 2, 2), seed=3)
    ch = random_channel(2, 2, seed=1)
    out = apply_channel(state, ch, 0)
    assert np.max(np.abs(out.marginal((1, 2)) - state.marginal((1, 2)))) < 1e-12


def test_apply_channel_errors():
    state = random_pure((2, 3), seed=0)
    with pytest.raises(IndexError):
        apply_channel(state, phase_damping(0.1), 2)
    with pytest.raises(ValueError):
        apply_channel(state, phase_damping(0.1), 1)


def test_compose_phase_damping_adds_rates():
    rho = density_state(wishart_density(11, 2), (2,))
    ch = compose(phase_damping(0.3), phase_damping(0.9))
    once = apply_channel(rho, ch, 0)
    direct = apply_channel(rho, phase_damping(1.2), 0)
    assert np.max(np.abs(once.data - direct.data)) < 1e-12
    assert completeness_residual(ch) < 1e-12
    with pytest.raises(ValueError):
        compose(phase_damping(0.1), identity_channel(3))


def test_channel_family_dispatch():
    fam = ChannelFamily(PHASE_DAMPING)
    assert fam.channel(0.7).label.startswith(PHASE_DAMPING)
    fam = ChannelFamily(GAD, p=0.5)
    assert len(fam.channel(0.7).kraus) == 4
    fam = ChannelFamily(IDENTITY)
    for t in (0.0, 1.0, 9.0):
        assert np.array_equal(fam.channel(t).kraus[0], np.eye(2))
    with pytest.raises(ValueError):
        ChannelFamily("depolarizing")
    with pytest.raises(ValueError):
        ChannelFamily(GAD)
    assert set(FAMILY_NAMES) == {PHASE_DAMPING, GAD, IDENTITY}
