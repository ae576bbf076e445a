import numpy as np
from scipy.stats import unitary_group

from . import settings
from .qlin import DensityMatrix, StateVector, as_layout


def trial_rng(seed, index):
    """
    Returns the random stream of trial `index` under the master `seed`.

    Streams come from a counter-based generator keyed by (seed, index) so a
    trial draws the same numbers whichever worker runs it.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(sequence))


def get_rng(rng=None):
    """
    Returns `rng` or a fresh generator seeded with the default seed.
    """
    if rng is None:
        return np.random.default_rng(settings.DEFAULT_SEED)
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def coin(rng):
    return int(rng.integers(2))


def check_bit(value, name='bit'):
    if value not in (0, 1) or isinstance(value, float):
        raise ValueError(
            "'{name}' should be 0 or 1, got {value!r}.".format(
                name=name,
                value=value,
            )
        )
    return int(value)


def parse_word(word):
    """
    Returns a bit tuple for '010', [0, 1, 0] or (0, 1, 0).
    """
    if isinstance(word, str):
        if not word or set(word) - {'0', '1'}:
            raise ValueError(
                "'{word}' should be a nonempty string of 0 and 1.".format(
                    word=word,
                )
            )
        return tuple(int(c) for c in word)
    return tuple(check_bit(bit) for bit in word)


def format_word(bits):
    return ''.join(str(int(bit)) for bit in bits)


# Random instances

def random_unitary(dim, rng=None):
    """
    Returns a Haar-random unitary matrix.
    """
    return unitary_group.rvs(dim, random_state=get_rng(rng))


def random_state(dims, rng=None):
    """
    Returns a Haar-random pure state over `dims`.
    """
    rng = get_rng(rng)
    layout = as_layout(dims)
    amps = rng.normal(size=layout.total_dim) + 1j * rng.normal(size=layout.total_dim)
    return StateVector(amps / np.linalg.norm(amps), layout)


def random_density(dims, rng=None, rank=None):
    """
    Returns a random density matrix of the given rank, full rank by default.
    """
    rng = get_rng(rng)
    layout = as_layout(dims)
    rank = rank or layout.total_dim
    g = rng.normal(size=(layout.total_dim, rank)) + 1j * rng.normal(size=(layout.total_dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, layout)
