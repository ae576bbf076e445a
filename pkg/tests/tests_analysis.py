import math

import numpy as np
import pytest

from weak_ot import analysis, qlin
from weak_ot.analysis import (
    CKS_ROUND, PROTOCOL_B, CheatScenario, CheatUnitarySpec, TrialResult
)
from weak_ot.exceptions import (
    DimensionMismatch, DomainError, ImproperlyConfigured, PreconditionViolation
)
from weak_ot.strategies import computational_channel, identity_channel
from weak_ot.weakot import CHECK_MISMATCH, NO_USEFUL_RUN


def ket(*amps):
    vector = np.array(amps, dtype=np.complex128)
    return vector / np.linalg.norm(vector)


# Bounds from Bob's states
# ========================

def test_delta_and_f_on_cks_states():
    states = analysis.cks_bob_states()
    assert len(states) == 8
    assert analysis.delta_quantity(states) == pytest.approx(0, abs=1e-12)
    assert analysis.f_quantity(states) == pytest.approx(4)


def test_bounds():
    assert analysis.p_bob_bound(0) == 0.5
    assert analysis.p_bob_bound(4) == 1.0
    assert analysis.p_alice_bound(4) == 0.75
    assert analysis.p_alice_bound(0) == 0.5


def test_bounds_out_of_range():
    with pytest.raises(DomainError) as e:
        analysis.p_bob_bound(5)
    assert str(e.value) == "'delta' should lie in [0.0, 4.0], got 5."
    with pytest.raises(DomainError):
        analysis.p_alice_bound(-0.5)


def test_states_should_be_complete():
    states = analysis.cks_bob_states()
    del states[(1, 1, 1)]
    with pytest.raises(ValueError):
        analysis.delta_quantity(states)


def test_distinguishable_states():
    states = {key: qlin.ket(key[1 + (1 - key[0])], 2).density() for key in analysis.STATE_KEYS}
    assert analysis.delta_quantity(states) == pytest.approx(4)
    assert analysis.f_quantity(states) == pytest.approx(0, abs=1e-9)


# Fidelity and trace distance
# ===========================

def test_fuchs_vdg_on_pure_states():
    plus = qlin.superposition([(1, 0), (1, 1)], 2).density()
    check = analysis.fuchs_vdg_check(qlin.ket(0, 2).density(), plus)
    assert check.holds
    assert check.trace_norm == pytest.approx(math.sqrt(2))
    assert check.upper_slack == pytest.approx(0, abs=1e-9)


def test_fuchs_vdg_sweep():
    assert analysis.fuchs_vdg_sweep(pairs=200, seed=1) == 0


# Reliability
# ===========

def plus_minus_spec():
    p0 = np.diag([1, 0])
    p1 = np.diag([0, 1])
    return CheatUnitarySpec(2, ket(1, 1), ket(1, -1), ket(1, 1), [p0, p1])


def test_reliable_spec_hides_b():
    report = analysis.theorem1_verify(plus_minus_spec())
    assert report.holds
    assert report.view_distance == pytest.approx(0, abs=1e-12)
    assert report.pre_measurement_distance == pytest.approx(0.5)
    assert np.allclose(report.outcome_probabilities, [[0.5, 0.5], [0.5, 0.5]])


def test_unreliable_spec():
    spec = CheatUnitarySpec(2, ket(0, 1), ket(0, 1), ket(1, 0), [np.diag([1, 0]), np.diag([0, 1])])
    with pytest.raises(PreconditionViolation) as e:
        analysis.theorem1_verify(spec)
    assert str(e.value) == 'Outcome 0 of M does not determine x_b for b=0.'


def test_branch_weights():
    weights, aborts = analysis.branch_weights(plus_minus_spec())
    assert np.allclose(weights[0], [(0.5, 0), (0.5, 0)])
    assert np.allclose(weights[1], [(0.5, 0), (0, 0.5)])
    assert aborts == [pytest.approx(0), pytest.approx(0)]


def test_spec_validation():
    with pytest.raises(DimensionMismatch) as e:
        CheatUnitarySpec(3, ket(1, 0), ket(1, 0), ket(1, 0), [np.eye(3)])
    assert str(e.value) == "'f0' should have 3 entries."


def test_random_specs_are_reliable(rng):
    for _ in range(20):
        spec = analysis.random_cheat_spec(rng)
        analysis.check_reliability(spec)


def test_theorem1_sweep():
    sweep = analysis.theorem1_sweep(specs=100, seed=2)
    assert sweep.counterexamples == 0
    assert sweep.max_view_distance < 1e-10
    assert sweep.max_pre_measurement_distance > 0


# Individual attacks
# ==================

def test_epsilon_exact():
    assert analysis.epsilon_exact(computational_channel(), 'zeros') == pytest.approx(0.5)
    assert analysis.epsilon_exact(identity_channel(), 'zeros') == pytest.approx(0)
    assert analysis.epsilon_exact(identity_channel(), 'uniform') == pytest.approx(0.5)


def test_guess_exact():
    assert analysis.basis_attack_exact() == pytest.approx(0.75)
    assert analysis.guess_exact(identity_channel()) == pytest.approx(0.5)


def test_individual_bound():
    assert analysis.individual_bound(1, 0) == pytest.approx(0.75)
    assert analysis.individual_bound(3, 0.5) == pytest.approx(5 / 12)
    with pytest.raises(DomainError) as e:
        analysis.individual_bound(0, 0.5)
    assert str(e.value) == "'n' should be at least 1, got 0."


def test_p_decomposition():
    encoding_cap, checked_cap, combined = analysis.p_decomposition(1 / 3, 3, 0.5)
    assert encoding_cap == pytest.approx(0.75)
    assert checked_cap == pytest.approx(0.25)
    assert combined == pytest.approx(5 / 12)
    assert analysis.p_decomposition(1 / 15, 15, 0.5).combined == pytest.approx(0.2833333, abs=1e-6)
    assert analysis.p_decomposition(1 / 30, 30, 0.5).combined == pytest.approx(0.2666667, abs=1e-6)


def test_decomposition_is_decreasing():
    assert analysis.is_decreasing_in_p(3, 0.5)
    assert analysis.is_decreasing_in_p(30, 0.5)
    assert not analysis.is_decreasing_in_p(3, 0.0)


# Collective attacks
# ==================

def test_collective_formula():
    assert analysis.collective_formula(1, 1) == pytest.approx(0.75)
    assert analysis.collective_formula(1 / 3, 1) == pytest.approx(7 / 12)
    assert analysis.collective_formula(0, 1) == pytest.approx(0.5)


def test_one_pair_exact():
    assert analysis.one_pair_exact() == pytest.approx(2 / 3)


def test_no_useful_probability():
    assert analysis.no_useful_probability(1) == 0.75
    assert analysis.no_useful_probability(2) == pytest.approx(0.5625)


def test_select_k():
    assert analysis.select_k(0.5) == 1
    assert analysis.select_k(0.01) == 9
    with pytest.raises(DomainError) as e:
        analysis.select_k(0)
    assert str(e.value) == "'zeta' should be positive, got 0."


# Estimation
# ==========

def test_wilson_interval():
    low, high = analysis.wilson_interval(50, 100)
    assert low + high == pytest.approx(1)
    assert low < 0.5 < high
    assert analysis.wilson_interval(0, 10)[0] == 0.0
    assert analysis.wilson_interval(10, 10)[1] == 1.0
    assert analysis.wilson_interval(0, 0) == (0.0, 1.0)


def test_verdict_tolerance():
    assert analysis.verdict_tolerance(0.5, 10000, 0.01) == pytest.approx(2.5758 * 0.005, abs=1e-4)
    assert analysis.verdict_tolerance(0.5, 10 ** 8, 0.01) == 0.01
    assert analysis.verdict_tolerance(1.0, 100, 0.0) == 0.0


def test_summarize_leaves_out_excluded():
    estimate = analysis.summarize([
        TrialResult(True, True, False),
        TrialResult(False, False, True, NO_USEFUL_RUN),
        TrialResult(False, False, False, CHECK_MISMATCH),
    ])
    assert estimate.trials == 3
    assert estimate.excluded == 1
    assert estimate.scored == 2
    assert estimate.p_hat == 0.5
    assert estimate.abort_rate == 0.5
    assert estimate.check_fail_rate == 0.5
    assert estimate.definite_rate is None


def test_definite_rate_counts_completed_trials():
    estimate = analysis.summarize([
        TrialResult(True, True, False, definite=True),
        TrialResult(False, True, False, definite=False),
        TrialResult(False, False, False, CHECK_MISMATCH),
        TrialResult(False, False, False, CHECK_MISMATCH),
    ])
    assert estimate.scored == 4
    assert estimate.definite_rate == 0.5


def test_scenario_validation():
    with pytest.raises(ImproperlyConfigured) as e:
        CheatScenario(protocol='protocol-c')
    assert str(e.value) == (
        "'protocol' should be one of cks-round, protocol-a, protocol-b, got 'protocol-c'."
    )
    with pytest.raises(ImproperlyConfigured):
        CheatScenario(alice='eve')
    with pytest.raises(ImproperlyConfigured):
        CheatScenario(score='eve')


def test_scenario_zeta_selects_k():
    scenario = CheatScenario(zeta=0.01)
    assert scenario.k == 9
    assert scenario.n == 27


def test_estimate_basis_attack():
    scenario = CheatScenario(protocol=CKS_ROUND, alice='basis-attack', trials=4000, seed=3)
    estimate = analysis.estimate(scenario, workers=2)
    assert estimate.p_hat == pytest.approx(0.75, abs=0.03)
    assert estimate.abort_rate == 0.0
    assert estimate.contains(estimate.p_hat)


def test_estimate_does_not_depend_on_workers():
    scenario = CheatScenario(protocol=PROTOCOL_B, k=2, alice='basis-attack', trials=300, seed=4)
    estimates = [analysis.estimate(scenario, workers) for workers in (1, 3, 7)]
    assert estimates[0] == estimates[1] == estimates[2]


def test_trial_is_reproducible():
    scenario = CheatScenario(protocol=PROTOCOL_B, k=2, alice='one-pair', trials=10, seed=5)
    assert [scenario.run_trial(i) for i in range(10)] == [scenario.run_trial(i) for i in range(10)]


def test_estimate_collective_triple():
    scenario = CheatScenario(protocol=PROTOCOL_B, k=3, alice='collective-triple', trials=1500, seed=6)
    estimate = analysis.estimate(scenario, workers=2)
    assert estimate.p_hat == pytest.approx(0.75, abs=0.06)
    assert estimate.definite_rate == pytest.approx(0.5, abs=0.07)
    assert estimate.check_fail_rate == 0.0
    assert estimate.abort_rate == 0.0


def test_estimate_one_pair():
    scenario = CheatScenario(protocol=PROTOCOL_B, k=3, alice='one-pair', trials=1500, seed=7)
    estimate = analysis.estimate(scenario, workers=2)
    assert estimate.p_hat == pytest.approx(analysis.one_pair_exact(), abs=0.06)
    assert estimate.check_fail_rate == 0.0


def channel_estimate(k, trials):
    scenario = CheatScenario(
        protocol=PROTOCOL_B,
        k=k,
        alice='channel-attack',
        alice_params={'channel': 'computational', 'cheat_count': 1, 'announce_rule': 'zeros'},
        trials=trials,
        seed=8,
    )
    return analysis.estimate(scenario, workers=2)


def test_individual_estimates_fall_with_n():
    n3 = channel_estimate(1, 3000)
    n15 = channel_estimate(5, 3000)
    n30 = channel_estimate(10, 3000)
    assert n3.ci_low > n15.ci_high
    assert n30.ci_low <= n15.ci_high
    for estimate, n in ((n3, 3), (n15, 15), (n30, 30)):
        target = analysis.p_decomposition(1 / n, n, 0.5).combined
        assert estimate.p_hat == pytest.approx(target, abs=0.04)
        assert estimate.p_hat <= 0.5 + 1 / (4 * n) + 3 * estimate.sigma


def test_bound_report():
    report = analysis.bound_report(0.75, 0.5)
    assert report.two_pa_plus_pb == 2.0
    assert [row[0] for row in report.rows()] == ['general-bound', 'max-violation', 'limited-lower']
    assert report.vs_general_bound == pytest.approx(0)
    assert report.vs_max_violation == pytest.approx(0.5)
    assert report.vs_limited_lower == pytest.approx(1 / 3)


# Introspection
# =============

def test_hiding_independence():
    report = analysis.hiding_independence_test(trials=2000, k=2, seed=8)
    assert report.executions == sum(map(sum, report.table))
    assert report.executions > 750
    assert report.independent(significance=0.001)


def test_measurement_success():
    rho0 = qlin.ket(0, 2).density()
    rho1 = qlin.ket(1, 2).density()
    assert analysis.measurement_success(rho0, rho1, qlin.computational_basis(2)) == pytest.approx(1)
    assert analysis.measurement_success(rho0, rho1, qlin.plus_minus_basis()) == pytest.approx(0.5)


def test_helstrom_oracle():
    report = analysis.helstrom_oracle_check(pairs=5, samples=200, seed=9)
    assert report.holds
