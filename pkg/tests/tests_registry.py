import numpy as np
import pytest

from weak_ot import cks, qlin
from weak_ot.exceptions import OwnershipError, StaleHandle
from weak_ot.registry import ALICE, BOB, Registry
from weak_ot.utils import trial_rng


def bell():
    return qlin.superposition([(1, (0, 0)), (1, (1, 1))], (2, 2))


# Ownership
# =========

def test_alloc_handles(registry):
    a, b = registry.alloc(ALICE, bell(), labels=['a', 'b'])
    assert (a.owner, b.owner) == (ALICE, ALICE)
    assert (a.dim, b.dim) == (2, 2)
    assert len(registry.factors) == 1


def test_alloc_unknown_owner(registry):
    with pytest.raises(ValueError) as e:
        registry.alloc('eve', bell())
    assert str(e.value) == "'owner' should be one of ('alice', 'bob')."


def test_only_owner_may_operate(registry):
    a, _ = registry.alloc(ALICE, bell(), labels=['a', 'b'])
    x = qlin.Operator([[0, 1], [1, 0]], 2, qlin.UNITARY)
    with pytest.raises(OwnershipError) as e:
        registry.apply_local(BOB, x, [a])
    assert str(e.value) == "'bob' does not own <SubsystemHandle 0 a dim=2 owner=alice>."


def test_transfer_moves_ownership(registry):
    a, b = registry.alloc(BOB, bell())
    registry.transfer(BOB, a, ALICE)
    x = qlin.Operator([[0, 1], [1, 0]], 2, qlin.UNITARY)
    registry.apply_local(ALICE, x, [a])
    with pytest.raises(OwnershipError):
        registry.transfer(BOB, a, BOB)


def test_handles_of_another_registry(registry):
    a, _ = Registry().alloc(ALICE, bell())
    with pytest.raises(StaleHandle):
        registry.reduced_state([a])


# Factors
# =======

def test_merge_on_joint_operation(registry):
    a, = registry.alloc(ALICE, qlin.ket(0, 2))
    b, = registry.alloc(ALICE, qlin.ket(1, 2))
    assert len(registry.factors) == 2
    swap = qlin.Operator(np.eye(4)[[0, 2, 1, 3]], (2, 2), qlin.UNITARY)
    registry.apply_local(ALICE, swap, [a, b])
    assert registry.largest_factor_dim() == 4
    assert registry.state_of([a, b]).equals(qlin.ket((1, 0), (2, 2)))


def test_measurement_splits_factor(registry, rng):
    a, b = registry.alloc(ALICE, bell())
    k = registry.measure(ALICE, qlin.computational_basis(2), [a], rng)
    assert len(registry.factors) == 2
    assert registry.state_of([b]).equals(qlin.ket(k, 2))


def test_state_of_partial_factor(registry):
    a, _ = registry.alloc(ALICE, bell())
    assert registry.state_of([a]) is None


def test_discard_product_subsystem(registry):
    a, b = registry.alloc(ALICE, qlin.tensor(qlin.ket(1, 2), qlin.ket(0, 3)))
    registry.discard(ALICE, [a])
    assert not a.alive
    assert registry.state_of([b]).equals(qlin.ket(0, 3))
    with pytest.raises(StaleHandle):
        registry.reduced_state([a])


def test_discard_entangled_needs_rng(registry):
    a, _ = registry.alloc(ALICE, bell())
    with pytest.raises(ValueError) as e:
        registry.discard(ALICE, [a])
    assert str(e.value) == "'rng' is required to discard entangled subsystems."


def test_discard_entangled_collapses_partner(registry, rng):
    a, b = registry.alloc(ALICE, bell())
    registry.discard(ALICE, [a], rng)
    rho = registry.reduced_state([b])
    assert rho.purity() == pytest.approx(1)
    assert len(registry.factors) == 1


# Reduced states
# ==============

def test_reduced_state_of_sent_qutrit(registry):
    beta, beta_prime = cks.bob_prepare(0, registry)
    rho = registry.reduced_state([beta])
    assert np.allclose(rho.entries, np.diag([0.5, 0, 0.5]))
    assert beta.owner == ALICE
    assert beta_prime.owner == BOB


def test_reduced_state_order(registry):
    a, = registry.alloc(ALICE, qlin.ket(1, 2))
    b, = registry.alloc(BOB, qlin.ket(2, 3))
    rho = registry.reduced_state([b, a])
    assert rho.dims == (3, 2)
    assert np.allclose(rho.entries, qlin.ket((2, 1), (3, 2)).density().entries)


def test_local_unitary_does_not_signal(registry):
    beta, beta_prime = cks.bob_prepare(1, registry)
    before = registry.reduced_state([beta_prime]).entries
    registry.apply_local(ALICE, cks.phase_unitary(1, 1), [beta])
    after = registry.reduced_state([beta_prime]).entries
    assert np.allclose(before, after)


# Commutation
# ===========

def entangled():
    return qlin.superposition([(1, (0, 0)), (2, (1, 1)), (1, (0, 1))], (2, 2))


def joint_frequencies(first, samples, seed):
    counts = np.zeros((2, 2))
    for index in range(samples):
        rng = trial_rng(seed, index)
        registry = Registry()
        a, b = registry.alloc(ALICE, entangled())
        registry.transfer(ALICE, b, BOB)
        if first == ALICE:
            s = registry.measure(ALICE, qlin.plus_minus_basis(), [a], rng)
            m = registry.measure(BOB, qlin.computational_basis(2), [b], rng)
        else:
            m = registry.measure(BOB, qlin.computational_basis(2), [b], rng)
            s = registry.measure(ALICE, qlin.plus_minus_basis(), [a], rng)
        counts[s, m] += 1
    return counts / samples


def test_local_measurements_commute():
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    exact = np.abs(hadamard @ entangled().amps.reshape(2, 2)) ** 2
    alice_first = joint_frequencies(ALICE, 3000, 16)
    bob_first = joint_frequencies(BOB, 3000, 17)
    assert np.allclose(alice_first, exact, atol=0.04)
    assert np.allclose(bob_first, exact, atol=0.04)
    assert np.allclose(alice_first, bob_first, atol=0.05)
