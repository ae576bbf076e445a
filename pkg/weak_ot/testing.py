import pytest

from .cks import alice_honest_phase
from .registry import Registry
from .strategies import AliceStrategy
from .utils import (  # noqa: F401
    get_rng, random_density, random_state, random_unitary, trial_rng
)

TEST_SEED = 20240607


@pytest.fixture
def rng():
    return get_rng(TEST_SEED)


@pytest.fixture
def registry():
    return Registry()


class ScriptedAlice(AliceStrategy):
    """
    Honest phases with given per-round bits and announcements that may lie.
    """
    name = 'scripted'

    def __init__(self, bits, announcements=None, guess=0):
        super().__init__()
        self.bits = dict(enumerate(bits)) if not isinstance(bits, dict) else dict(bits)
        self.announcements = announcements or {}
        self.guess = guess

    def round_bits(self, index):
        return self.bits[index]

    def process(self, beta, index, reg, rng):
        alice_honest_phase(*self.bits[index], beta, reg)
        return self.bits[index]

    def reveal(self, index, reg, rng):
        return self.announcements.get(index, self.bits[index])

    def guess_b(self, rng):
        return self.guess
