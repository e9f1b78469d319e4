"""Fast end-to-end invariant suite behind ``eoa selftest``.

Each suite is a plain function that raises AssertionError with a specific
message on the first broken invariant.  Randomized suites derive all their
draws from the given seed, so a failure report is reproducible as-is.
"""
from __future__ import annotations

import time

import numpy as np

from .assistance import OptimizerConfig, coa_convex_max, eoa_lower_bound
from .channels import (
    GAD,
    PHASE_DAMPING,
    ChannelFamily,
    generalized_amplitude_damping,
    phase_damping,
    random_channel,
)
from .laws import channel_factor, sudden_death_time, tau, verify_tau_evolution
from .linalg import dag, haar_isometry, instance_seed, partial_trace, psd_sqrt
from .measures import coa, i_concurrence_generators, pure_concurrence, wootters_concurrence
from .states import density_state, generalized_ghz, maximally_entangled, random_pure, w_state

_GAMMA_GRID = (0.0, 0.1, 0.5, 1.0, 2.5, float("inf"))


def _kraus_residual(ops) -> float:
    acc = sum(dag(k) @ k for k in ops)
    return float(np.max(np.abs(acc - np.eye(ops[0].shape[1]))))


def suite_kraus_completeness(seed: int, inject_fault: str | None = None) -> None:
    for gt in _GAMMA_GRID:
        ops = list(phase_damping(gt).kraus)
        if inject_fault == "kraus":
            ops[0] = ops[0] * np.sqrt(1.0 + 1e-3)
        resid = _kraus_residual(ops)
        assert resid <= 1e-10, f"phase-damping completeness residual {resid:.3e} at gamma_t={gt}"
        for p in (0.0, 0.3, 0.5, 1.0):
            resid = _kraus_residual(generalized_amplitude_damping(gt, p).kraus)
            assert resid <= 1e-10, f"GAD completeness residual {resid:.3e} at gamma_t={gt}, p={p}"
    for i in range(5):
        ch = random_channel(2, 1 + i % 4, instance_seed(seed, i))
        resid = _kraus_residual(ch.kraus)
        assert resid <= 1e-10, f"random channel completeness residual {resid:.3e}"


def suite_partial_trace(seed: int) -> None:
    w_marg = partial_trace(w_state().density(), (2, 2, 2), 0)
    assert np.max(np.abs(w_marg - np.diag([2 / 3, 1 / 3]))) < 1e-12, "W marginal is not diag(2/3, 1/3)"
    for i in range(5):
        psi = random_pure((2, 3, 2), instance_seed(seed, 10 + i))
        rho = psi.density()
        for keep in ((0,), (1,), (0, 1), (1, 2)):
            red = partial_trace(rho, psi.dims, keep)
            assert abs(np.trace(red) - 1.0) < 1e-12, f"partial trace not trace preserving for keep={keep}"


def suite_psd_sqrt(seed: int) -> None:
    for i in range(5):
        rho = random_pure((4, 4), instance_seed(seed, 20 + i)).marginal(0)
        root = psd_sqrt(rho)
        resid = float(np.max(np.abs(root @ root - rho)))
        assert resid <= 1e-9, f"psd_sqrt reconstruction residual {resid:.3e}"


def suite_haar_isometry(seed: int) -> None:
    v = haar_isometry(6, 3, seed)
    resid = float(np.max(np.abs(dag(v) @ v - np.eye(3))))
    assert resid <= 1e-10, f"isometry residual {resid:.3e}"
    assert np.array_equal(v, haar_isometry(6, 3, seed)), "haar_isometry is not deterministic per seed"


def suite_measures(seed: int) -> None:
    ghz_marg = generalized_ghz(2 ** -0.5).marginal((0, 1))
    assert abs(coa(ghz_marg) - 1.0) < 1e-9, "coa of the GHZ pair marginal is not 1"
    w_marg = w_state().marginal((0, 1))
    assert abs(coa(w_marg) - 2 / 3) < 1e-9, "coa of the W pair marginal is not 2/3"
    assert abs(wootters_concurrence(w_marg) - 2 / 3) < 1e-9, "W marginal concurrence is not 2/3"
    chi3 = maximally_entangled(3)
    assert abs(pure_concurrence(chi3.data, (3, 3)) - 2 / np.sqrt(3)) < 1e-9, "d=3 I-concurrence is not 2/sqrt(3)"
    for d in (2, 3):
        psi = random_pure((d, d), instance_seed(seed, 30 + d))
        a = i_concurrence_generators(psi.data, d)
        b = pure_concurrence(psi.data, (d, d))
        assert abs(a - b) < 1e-10, f"generator and purity forms disagree by {abs(a - b):.3e} at d={d}"


def suite_factor_closed_forms(seed: int) -> None:
    for gt in (0.0, 0.3, 1.0, 2.0):
        nu = np.exp(-gt)
        f = channel_factor(phase_damping(gt), 2).value
        assert abs(f - nu) < 1e-9, f"phase-damping factor {f} != exp(-gamma_t) at gamma_t={gt}"
        g = channel_factor(generalized_amplitude_damping(gt, 0.5), 2).value
        expect = max(0.0, (nu * nu + 2 * nu - 1) / 2)
        assert abs(g - expect) < 1e-9, f"GAD factor {g} != closed form {expect} at gamma_t={gt}"


def suite_optimizer(seed: int) -> None:
    cfg = OptimizerConfig(restarts=6, max_iters=300, seed=seed)
    got = eoa_lower_bound(generalized_ghz(2 ** -0.5), cfg)
    assert got >= 1.0 - 1e-3, f"POVM search reached only {got} on GHZ (target 1)"
    got = coa_convex_max(w_state().marginal((0, 1)), cfg)
    assert abs(got - 2 / 3) <= 1e-3, f"ensemble search reached {got} on the W marginal (target 2/3)"


def suite_sudden_death(seed: int) -> None:
    res = sudden_death_time(ChannelFamily(GAD, p=0.5), bracket=(0.0, 3.0), tol=1e-8)
    target = float(np.log(1 + np.sqrt(2)))
    assert res.t_star is not None and abs(res.t_star - target) < 1e-6, (
        f"GAD death time {res.t_star} != ln(1+sqrt(2)) = {target:.7f}"
    )
    res = sudden_death_time(ChannelFamily(PHASE_DAMPING), bracket=(0.0, 3.0))
    assert res.t_star is None, "phase damping must not show sudden death"


def suite_tau(seed: int) -> None:
    assert abs(tau(generalized_ghz(2 ** -0.5)) - 1.0) < 1e-9, "tau(GHZ) is not 1"
    assert abs(tau(w_state())) < 1e-9, "tau(W) is not 0"
    rec = verify_tau_evolution(generalized_ghz(2 ** -0.5), phase_damping(0.7))
    nu = np.exp(-0.7)
    assert rec.passed and abs(rec.lhs.value - nu * nu) < 1e-9, "GHZ phase-damping tau is not nu^2"
    for i in range(5):
        psi = random_pure((2, 2, 2), instance_seed(seed, 40 + i))
        ch = random_channel(2, 1 + i % 4, instance_seed(seed, 50 + i))
        rec = verify_tau_evolution(psi, ch)
        assert rec.passed, f"tau evolution failed on random instance {i}: gap {rec.gap:.3e}"


SUITES = (
    ("kraus-completeness", suite_kraus_completeness),
    ("partial-trace", suite_partial_trace),
    ("psd-sqrt", suite_psd_sqrt),
    ("haar-isometry", suite_haar_isometry),
    ("measures", suite_measures),
    ("factor-closed-forms", suite_factor_closed_forms),
    ("optimizer", suite_optimizer),
    ("sudden-death", suite_sudden_death),
    ("tau", suite_tau),
)


def run_selftest(seed: int, inject_fault: str | None = None, echo=print) -> bool:
    """Run all suites; returns True when everything passed."""
    failures = 0
    for name, fn in SUITES:
        start = time.perf_counter()
        try:
            if name == "kraus-completeness":
                fn(seed, inject_fault)
            else:
                fn(seed)
        except AssertionError as exc:
            elapsed = time.perf_counter() - start
            echo(f"FAIL {name:<22s} {elapsed:6.2f} s")
            echo(f"     {exc} (seed={seed})")
            failures += 1
        else:
            elapsed = time.perf_counter() - start
            echo(f"ok   {name:<22s} {elapsed:6.2f} s")
    echo(f"selftest: {len(SUITES) - failures}/{len(SUITES)} suites passed (seed={seed})")
    return failures == 0
