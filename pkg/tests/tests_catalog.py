import pytest

from weak_ot.catalog import (
    FAIL, INFO, PASS, ResultRow, Scenario, run_scenario, scenarios
)
from weak_ot.exceptions import ImproperlyConfigured, UnknownScenario


def verdicts(rows):
    return {row.scenario: row.verdict for row in rows}


# Registry
# ========

def test_registered_scenarios():
    assert 'cks-basis-attack' in scenarios.names()
    assert 'custom' in scenarios.names()
    assert len(scenarios.names()) == 15


def test_unknown_scenario():
    with pytest.raises(UnknownScenario) as e:
        scenarios.get('bogus')
    assert str(e.value).startswith("Unknown scenario 'bogus', choose one of cks-basis-attack, ")


def test_scenario_validation():
    with pytest.raises(ImproperlyConfigured) as e:
        scenarios.create('fuchs-vdg', trials=0)
    assert str(e.value) == "'trials' should be at least 1."


def test_label():
    scenario = scenarios.create('fuchs-vdg')
    assert scenario.label() == 'fuchs-vdg'
    assert scenario.label('violations') == 'fuchs-vdg:violations'


def test_exact_row():
    scenario = Scenario()
    scenario.name = 'x'
    assert scenario.exact_row(0.5, 0.5, 0.0).verdict == PASS
    assert scenario.exact_row(0.6, 0.5, 0.05).verdict == FAIL


def test_row_payload():
    row = ResultRow('x', 10, 0.5, 0.4, 0.6)
    assert row.to_payload() == {
        'scenario': 'x',
        'trials': 10,
        'p_hat': 0.5,
        'ci_low': 0.4,
        'ci_high': 0.6,
        'target': None,
        'margin': None,
        'verdict': INFO,
    }


# Scenarios
# =========

def test_cks_bound_quantities():
    rows = run_scenario('cks-bound-quantities')
    assert [row.scenario for row in rows] == [
        'cks-bound-quantities:delta',
        'cks-bound-quantities:f',
        'cks-bound-quantities:p-bob-bound',
        'cks-bound-quantities:p-alice-bound',
    ]
    assert all(row.verdict == PASS for row in rows)


def test_cks_basis_attack():
    rows = run_scenario('cks-basis-attack', trials=4000, tolerance=0.03)
    assert verdicts(rows) == {
        'cks-basis-attack': PASS,
        'cks-basis-attack:abort-rate': PASS,
    }
    assert rows[0].target == pytest.approx(0.75)


def test_honest_completeness():
    rows = run_scenario('honest-completeness', trials=500, k=2, tolerance=0.1)
    assert verdicts(rows) == {
        'honest-completeness:bob-correct': PASS,
        'honest-completeness:no-useful-rate': PASS,
    }
    assert rows[1].target == pytest.approx(0.5625)


def test_individual_channel_n3():
    rows = run_scenario('individual-channel-n3', trials=4000, tolerance=0.04)
    assert rows[0].target == pytest.approx(5 / 12)
    assert all(row.verdict == PASS for row in rows)


def test_theorem1_sweep():
    rows = run_scenario('theorem1-sweep', trials=50)
    assert [row.verdict for row in rows] == [PASS, PASS, INFO]


def test_fuchs_vdg():
    rows = run_scenario('fuchs-vdg', trials=100, seed=3)
    assert rows[0].verdict == PASS
    assert rows[0].trials == 100


def test_helstrom_oracle():
    rows = run_scenario('helstrom-oracle', trials=3)
    assert all(row.verdict == PASS for row in rows)
    assert rows[0].trials == 3000


def test_determinism():
    rows = run_scenario('determinism', trials=100)
    assert rows[0].verdict == PASS


def test_protocol_a_honest():
    rows = run_scenario('protocol-a-honest', trials=100)
    assert rows[0].verdict == PASS
    assert rows[0].p_hat == 1.0


def test_custom():
    rows = run_scenario('custom', trials=50, k=1, alice='basis-attack', bob='curious', score='bob')
    assert len(rows) == 1
    assert rows[0].scenario == 'custom:bob'
    assert rows[0].verdict == INFO


def test_custom_unknown_strategy():
    with pytest.raises(ImproperlyConfigured):
        run_scenario('custom', trials=5, alice='eve')


def test_strategies_only_for_custom():
    with pytest.raises(ImproperlyConfigured) as e:
        scenarios.create('cks-basis-attack', alice='honest', score='bob')
    assert str(e.value) == (
        "'cks-basis-attack' does not take strategy options (alice, score), only 'custom' does."
    )


def test_collective_triple():
    rows = run_scenario('collective-triple', trials=1000, k=2, tolerance=0.05)
    assert verdicts(rows) == {
        'collective-triple': PASS,
        'collective-triple:check-fail-rate': PASS,
        'collective-triple:definite-b': PASS,
    }
    assert rows[2].target == 0.5


def test_limited_collective_one_pair():
    rows = run_scenario('limited-collective-one-pair', trials=1000, k=2)
    assert [row.scenario for row in rows] == [
        'limited-collective-one-pair:p-alice',
        'limited-collective-one-pair:p-bob',
        'limited-collective-one-pair:collective-formula',
        'limited-collective-one-pair:two-pa-plus-pb',
        'limited-collective-one-pair:vs-general-bound',
        'limited-collective-one-pair:vs-max-violation',
        'limited-collective-one-pair:vs-limited-lower',
    ]
    assert [row.verdict for row in rows[:2]] == [PASS, PASS]
    assert rows[3].verdict == PASS
    assert rows[3].p_hat == pytest.approx(2 * 2 / 3 + 0.5, abs=0.1)


@pytest.mark.parametrize('name,target', [
    ('individual-channel-n15', 0.2833333),
    ('individual-channel-n30', 0.2666667),
])
def test_individual_channel_large_n(name, target):
    rows = run_scenario(name, trials=2000, tolerance=0.04)
    assert rows[0].target == pytest.approx(target, abs=1e-6)
    assert verdicts(rows) == {name: PASS, name + ':individual-bound': PASS}


def test_maximal_violation():
    rows = run_scenario('maximal-violation', trials=1000)
    assert [row.scenario for row in rows[:4]] == [
        'maximal-violation:p-alice-honest',
        'maximal-violation:p-alice-channel',
        'maximal-violation:p-bob',
        'maximal-violation:two-pa-plus-pb',
    ]
    assert all(row.verdict == INFO for row in rows[:3])
    assert rows[3].target == pytest.approx(1.5)
    assert rows[3].p_hat == pytest.approx(1.5, abs=0.12)
