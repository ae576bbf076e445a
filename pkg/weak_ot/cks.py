"""
One round of the qutrit one-out-of-two oblivious transfer.

Bob prepares (|bb> + |22>)/sqrt(2), sends the first qutrit to Alice, who
applies phases (-1)^x0 on |0> and (-1)^x1 on |1> and sends it back. Bob's
three-outcome measurement then yields x_b with certainty or an abort.
"""
import functools
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import qlin
from .registry import ALICE, BOB, Registry
from .utils import check_bit

QUTRIT = 3
PAIR_DIMS = (QUTRIT, QUTRIT)


@dataclass(frozen=True)
class Decoded:
    bit: int


class Abort:
    """
    Bob's third measurement outcome.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'ABORT'

    def __reduce__(self):
        return (Abort, ())


ABORT = Abort()


@dataclass
class CksRound:
    index: int
    b: int
    x0: Optional[int]
    x1: Optional[int]
    bob_outcome: Any
    alice_record: Any = None
    beta: Any = field(default=None, repr=False)
    beta_prime: Any = field(default=None, repr=False)

    @property
    def aborted(self):
        return self.bob_outcome is ABORT

    @property
    def decoded_bit(self):
        return None if self.aborted else self.bob_outcome.bit


# States and operators

def phi(b):
    """
    Returns (|bb> + |22>)/sqrt(2).
    """
    b = check_bit(b, 'b')
    return qlin.superposition([(1, (b, b)), (1, (2, 2))], PAIR_DIMS)


def phi_prime(b):
    """
    Returns (-|bb> + |22>)/sqrt(2).
    """
    b = check_bit(b, 'b')
    return qlin.superposition([(-1, (b, b)), (1, (2, 2))], PAIR_DIMS)


def phase_unitary(x0, x1):
    x0 = check_bit(x0, 'x0')
    x1 = check_bit(x1, 'x1')
    return qlin.Operator(np.diag([(-1) ** x0, (-1) ** x1, 1]), QUTRIT, qlin.UNITARY)


@functools.lru_cache(maxsize=None)
def decode_measurement(b):
    """
    Returns {Pi0 = |phi_b><phi_b|, Pi1 = |phi'_b><phi'_b|, I - Pi0 - Pi1}.
    """
    pi0 = qlin.projector(phi(b))
    pi1 = qlin.projector(phi_prime(b))
    rest = np.eye(QUTRIT ** 2) - pi0.matrix - pi1.matrix
    return qlin.ProjectiveMeasurement([pi0, pi1, rest], labels=[0, 1, None])


def expected_state(b, x0, x1):
    """
    Returns the pair state after an honest phase, ((-1)^x_b |bb> + |22>)/sqrt(2).
    """
    return phi_prime(b) if (x0, x1)[b] else phi(b)


def outcome_from_index(index):
    label = decode_measurement(0).labels[index]
    return ABORT if label is None else Decoded(label)


# Steps

def bob_prepare(b, reg, rng=None):
    """
    Returns (beta, beta_prime) after Bob sent beta to Alice.
    """
    beta, beta_prime = reg.alloc(BOB, phi(b), PAIR_DIMS, labels=['beta', 'beta_prime'])
    reg.transfer(BOB, beta, ALICE)
    return beta, beta_prime


def alice_honest_phase(x0, x1, beta, reg):
    reg.apply_local(ALICE, phase_unitary(x0, x1), [beta])
    reg.transfer(ALICE, beta, BOB)


def bob_decode(b, beta, beta_prime, reg, rng):
    """
    Returns Decoded(x_b) or ABORT.

    Both qutrits stay alive after the measurement so a curious Bob can keep
    working on them.
    """
    index = reg.apply_local(BOB, decode_measurement(b), [beta, beta_prime], rng)
    return outcome_from_index(index)


def run_cks_round(alice, b, rng, registry=None, bob=None, round_index=0):
    """
    Returns the CksRound of one full round with `alice` and Bob's choice `b`.
    """
    b = check_bit(b, 'b')
    reg = Registry() if registry is None else registry
    beta, beta_prime = bob_prepare(b, reg, rng)
    record = alice.on_round(beta, round_index, reg, rng)
    if bob is None:
        outcome = bob_decode(b, beta, beta_prime, reg, rng)
    else:
        outcome = bob.decode(b, beta, beta_prime, reg, rng)
    x0, x1 = alice.round_bits(round_index)
    return CksRound(
        index=round_index,
        b=b,
        x0=x0,
        x1=x1,
        bob_outcome=outcome,
        alice_record=record,
        beta=beta,
        beta_prime=beta_prime,
    )
