"""
Honest and adversarial party behaviours.

A strategy is bound to one protocol execution. The harness calls Alice's
hooks in protocol order:

    on_start(blocks, reg, rng)        # once, before the first round
    on_round(beta, index, reg, rng)   # Alice holds beta, must send it back
    on_reveal(index, reg, rng)        # returns the announced (x0, x1)
    on_encode(index, targets, reg, rng)  # returns (d0, d1)
    guess_b(rng)                      # Alice's guess of Bob's choice bit

`blocks` is a list of (CodewordSet, round positions) pairs, one per group
of rounds sharing a string pair. The set is None for a bare round.
"""
import numpy as np

from . import cks, qlin, settings
from .exceptions import AlreadyRegistered, ImproperlyConfigured, InvalidOperator
from .registry import ALICE, BOB
from .utils import check_bit, coin


# Channels

class KrausChannel:
    """
    Alice's individual processing of the received qutrit, one Kraus
    operator per classical outcome.
    """

    def __init__(self, operators, labels=None, name=''):
        matrices = [np.asarray(qlin.as_matrix(op), dtype=np.complex128) for op in operators]
        if any(m.shape != (cks.QUTRIT, cks.QUTRIT) for m in matrices):
            raise InvalidOperator('Kraus operators should act on one qutrit.')
        qlin.check_kraus_completeness(matrices)
        self.operators = [qlin.Operator(m, cks.QUTRIT, qlin.KRAUS) for m in matrices]
        self.labels = list(range(len(matrices))) if labels is None else list(labels)
        self.name = name

    def __len__(self):
        return len(self.operators)

    def __repr__(self):
        return '<KrausChannel {name} outcomes={count}>'.format(
            name=self.name,
            count=len(self),
        )

    def branches(self, b):
        """
        Returns [(probability, post pair state or None)] per outcome when the
        channel acts on beta of |phi_b>.
        """
        probabilities, vectors = qlin.outcome_distribution(
            cks.phi(b), self.operators, [0],
        )
        result = []
        for p, v in zip(probabilities, vectors):
            state = qlin.StateVector(v / np.sqrt(p), cks.PAIR_DIMS) if p > settings.EXACT_ATOL else None
            result.append((float(p), state))
        return result

    def outcome_likelihoods(self, b):
        """
        Returns p(m | b) for every outcome m.
        """
        return np.array([p for p, _ in self.branches(b)])

    def guess_b(self, outcome, rng):
        """
        Returns the b maximizing p(outcome | b), a coin on ties.
        """
        l0 = self.outcome_likelihoods(0)[outcome]
        l1 = self.outcome_likelihoods(1)[outcome]
        if abs(l0 - l1) <= settings.ATOL:
            return coin(rng)
        return 0 if l0 > l1 else 1


def identity_channel():
    return KrausChannel([np.eye(cks.QUTRIT)], name='identity')


def computational_channel():
    operators = [np.diag(np.eye(cks.QUTRIT)[i]) for i in range(cks.QUTRIT)]
    return KrausChannel(operators, name='computational')


def phase_channel(x0, x1):
    return KrausChannel([cks.phase_unitary(x0, x1)], name='phase{x0}{x1}'.format(x0=x0, x1=x1))


# Announcement rules

class AnnounceRule:
    """
    Maps a channel outcome to a distribution over announced (x0, x1).
    """
    name = None

    def distribution(self, outcome):
        raise NotImplementedError

    def sample(self, outcome, rng):
        items = sorted(self.distribution(outcome).items())
        index = qlin.sample_outcome(np.array([p for _, p in items]), rng)
        return items[index][0]

    def __repr__(self):
        return '<{cls} {name}>'.format(cls=self.__class__.__name__, name=self.name)


class FixedAnnouncement(AnnounceRule):

    def __init__(self, x0, x1):
        self.bits = (check_bit(x0, 'x0'), check_bit(x1, 'x1'))
        self.name = 'fixed{}{}'.format(*self.bits)

    def distribution(self, outcome):
        return {self.bits: 1.0}


class UniformAnnouncement(AnnounceRule):
    name = 'uniform'

    def distribution(self, outcome):
        return {(x0, x1): 0.25 for x0 in (0, 1) for x1 in (0, 1)}


class OutcomeAnnouncement(AnnounceRule):
    """
    Announces a fixed pair per outcome.
    """
    name = 'outcome'

    def __init__(self, table):
        self.table = {m: (check_bit(p[0], 'x0'), check_bit(p[1], 'x1')) for m, p in table.items()}

    def distribution(self, outcome):
        return {self.table[outcome]: 1.0}


def announce_zeros():
    rule = FixedAnnouncement(0, 0)
    rule.name = 'zeros'
    return rule


def announce_fixed(x0, x1):
    return FixedAnnouncement(x0, x1)


def announce_uniform():
    return UniformAnnouncement()


ANNOUNCE_RULES = {
    'zeros': announce_zeros,
    'uniform': announce_uniform,
}

CHANNELS = {
    'identity': identity_channel,
    'computational': computational_channel,
}


def get_announce_rule(rule):
    """
    Returns `rule` or the rule registered under that name.
    """
    if rule is None or isinstance(rule, AnnounceRule):
        return rule
    try:
        return ANNOUNCE_RULES[rule]()
    except KeyError:
        raise ImproperlyConfigured(
            "Unknown announcement rule '{rule}', choose one of {names}.".format(
                rule=rule,
                names=', '.join(sorted(ANNOUNCE_RULES)),
            )
        )


def get_channel(channel):
    if channel is None or isinstance(channel, KrausChannel):
        return channel
    try:
        return CHANNELS[channel]()
    except KeyError:
        raise ImproperlyConfigured(
            "Unknown channel '{channel}', choose one of {names}.".format(
                channel=channel,
                names=', '.join(sorted(CHANNELS)),
            )
        )


# Alice

class AliceStrategy:
    # You should override
    name = None

    # You may override
    description = ''

    def __init__(self):
        self.blocks = []
        self.records = {}
        self.announced = {}
        self.registry = None
        self.target_index = None
        self.last_round = None

    # Handling

    def on_start(self, blocks, reg, rng):
        self.registry = reg
        self.blocks = [(codewords, tuple(positions)) for codewords, positions in blocks]

    def on_round(self, beta, index, reg, rng):
        """
        Processes beta of round `index` and sends it back to Bob.
        """
        self.last_round = index
        record = self.process(beta, index, reg, rng)
        self.records[index] = record
        if beta.owner == ALICE:
            reg.transfer(ALICE, beta, BOB)
        return record

    def on_reveal(self, index, reg, rng):
        """
        Returns the announced (x0, x1) of round `index`, always the same
        pair for repeated requests.
        """
        if index not in self.announced:
            self.announced[index] = tuple(int(x) for x in self.reveal(index, reg, rng))
        return self.announced[index]

    def on_encode(self, index, targets, reg, rng):
        """
        Returns (d0, d1) masking `targets` with the bits of round `index`.
        """
        self.target_index = index
        x0, x1 = self.encoding_bits(index, reg, rng)
        return targets[0] ^ x0, targets[1] ^ x1

    def round_bits(self, index):
        """
        Returns the classical (x0, x1) of round `index` or (None, None) when
        Alice holds none.
        """
        return None, None

    def block_of(self, index):
        for codewords, positions in self.blocks:
            if index in positions:
                return codewords, positions
        raise KeyError(index)

    @property
    def positions(self):
        return [p for _, positions in self.blocks for p in positions]

    @property
    def guess_index(self):
        return self.target_index if self.target_index is not None else self.last_round

    # You should override

    def process(self, beta, index, reg, rng):
        raise NotImplementedError

    def reveal(self, index, reg, rng):
        raise NotImplementedError

    def guess_b(self, rng):
        raise NotImplementedError

    # You may override

    def encoding_bits(self, index, reg, rng):
        return self.on_reveal(index, reg, rng)


class HonestAlice(AliceStrategy):
    name = 'honest'
    description = 'Draws each string pair uniformly from the codeword set.'

    def __init__(self, x_pairs=None):
        super().__init__()
        if x_pairs is None:
            self.bits = {}
            self.fixed = False
        else:
            if not isinstance(x_pairs, dict):
                x_pairs = dict(enumerate(x_pairs))
            self.bits = {
                i: (check_bit(x0, 'x0'), check_bit(x1, 'x1'))
                for i, (x0, x1) in x_pairs.items()
            }
            self.fixed = True

    def on_start(self, blocks, reg, rng):
        super().on_start(blocks, reg, rng)
        if self.fixed:
            return
        for codewords, positions in self.blocks:
            if codewords is None:
                continue
            words = codewords.enumerate()
            x0 = words[rng.integers(len(words))]
            x1 = words[rng.integers(len(words))]
            for offset, position in enumerate(positions):
                self.bits[position] = (x0[offset], x1[offset])

    def round_bits(self, index):
        return self.bits.get(index, (None, None))

    def process(self, beta, index, reg, rng):
        if index not in self.bits:
            self.bits[index] = (coin(rng), coin(rng))
        x0, x1 = self.bits[index]
        cks.alice_honest_phase(x0, x1, beta, reg)
        return x0, x1

    def reveal(self, index, reg, rng):
        return self.bits[index]

    def guess_b(self, rng):
        return coin(rng)


class ChannelAttackAlice(AliceStrategy):
    """
    Applies a Kraus channel to beta on the cheat rounds and the identity
    phase elsewhere.
    """
    name = 'channel-attack'
    description = 'Individual attack with a classical record per cheated run.'

    ALL = 'all'

    def __init__(self, channel=None, cheat_rounds=None, cheat_count=1, announce_rule=None):
        super().__init__()
        self.channel = get_channel(channel) or computational_channel()
        self.announce_rule = get_announce_rule(announce_rule) or announce_zeros()
        if cheat_rounds not in (None, self.ALL):
            cheat_rounds = set(cheat_rounds)
        self.cheat_rounds = cheat_rounds
        self.cheat_count = cheat_count
        self.cheats = set() if cheat_rounds in (None, self.ALL) else set(cheat_rounds)
        self.outcomes = {}

    def on_start(self, blocks, reg, rng):
        super().on_start(blocks, reg, rng)
        if self.cheat_rounds is not None:
            return
        positions = self.positions
        if not 0 <= self.cheat_count <= len(positions):
            raise ImproperlyConfigured(
                "'{cls}' cannot cheat in {count} of {n} runs.".format(
                    cls=self.__class__.__name__,
                    count=self.cheat_count,
                    n=len(positions),
                )
            )
        chosen = rng.choice(len(positions), size=self.cheat_count, replace=False)
        self.cheats = {positions[i] for i in chosen}

    def is_cheat(self, index):
        return self.cheat_rounds == self.ALL or index in self.cheats

    def round_bits(self, index):
        return (None, None) if self.is_cheat(index) else (0, 0)

    def process(self, beta, index, reg, rng):
        if not self.is_cheat(index):
            cks.alice_honest_phase(0, 0, beta, reg)
            return None
        outcome = reg.apply_local(ALICE, self.channel.operators, [beta], rng)
        self.outcomes[index] = outcome
        return outcome

    def reveal(self, index, reg, rng):
        if index in self.outcomes:
            return self.announce_rule.sample(self.outcomes[index], rng)
        return 0, 0

    def guess_b(self, rng):
        index = self.guess_index
        if index in self.outcomes:
            return self.channel.guess_b(self.outcomes[index], rng)
        return coin(rng)


class BasisAttackAlice(ChannelAttackAlice):
    name = 'basis-attack'
    description = 'Measures every received qutrit in the computational basis.'

    def __init__(self, announce_rule=None):
        super().__init__(computational_channel(), self.ALL, announce_rule=announce_rule)


def control_unitary():
    """
    Returns T on (c0, c1, beta): phase (-1)^c0 on |0>, (-1)^c1 on |1>.
    """
    diagonal = []
    for c0 in (0, 1):
        for c1 in (0, 1):
            diagonal.extend([(-1) ** c0, (-1) ** c1, 1])
    return qlin.Operator(np.diag(diagonal), (2, 2, cks.QUTRIT), qlin.UNITARY)


def control_state(codewords):
    """
    Returns the equal superposition of |X0>|X1> over all X0, X1 in the set,
    ordered c0 of every position, then c1 of every position.
    """
    n = codewords.n
    dims = [2] * (2 * n)
    words = codewords.enumerate()
    return qlin.superposition(
        [(1, x0 + x1) for x0 in words for x1 in words],
        dims,
    )


class ControlQubitAlice(AliceStrategy):
    """
    Keeps (x0, x1) of some rounds in control qubits and defers measurement.

    Reveals measure both controls in the computational basis. On the
    encoding run the controls are measured in the +/- basis: a - on c_j
    means b = j.
    """

    def __init__(self):
        super().__init__()
        self.controls = {}
        self.definite_b = None

    def round_bits(self, index):
        return (None, None) if index in self.controls else (0, 0)

    def process(self, beta, index, reg, rng):
        if index not in self.controls:
            cks.alice_honest_phase(0, 0, beta, reg)
            return None
        c0, c1 = self.controls[index]
        reg.apply_local(ALICE, control_unitary(), [c0, c1, beta])
        return None

    def reveal(self, index, reg, rng):
        if index not in self.controls:
            return 0, 0
        outcome = reg.measure(ALICE, qlin.computational_basis((2, 2)), self.controls[index], rng)
        return divmod(outcome, 2)

    def encoding_bits(self, index, reg, rng):
        if index not in self.controls:
            return self.on_reveal(index, reg, rng)
        basis = qlin.plus_minus_basis()
        signs = [basis.labels[reg.measure(ALICE, basis, [c], rng)] for c in self.controls[index]]
        for j, sign in enumerate(signs):
            if sign == 1:
                self.definite_b = j
                break
        return 0, 0

    def guess_b(self, rng):
        if self.definite_b is not None:
            return self.definite_b
        return coin(rng)


class CollectiveTripleAlice(ControlQubitAlice):
    name = 'collective-triple'
    description = 'Control qubits in a superposition over all allowed string pairs.'

    def on_start(self, blocks, reg, rng):
        super().on_start(blocks, reg, rng)
        for codewords, positions in self.blocks:
            if codewords is None:
                raise ImproperlyConfigured(
                    "'{cls}' should be run on blocks with a codeword set.".format(
                        cls=self.__class__.__name__,
                    )
                )
            labels = ['c0[{}]'.format(p) for p in positions] + ['c1[{}]'.format(p) for p in positions]
            handles = reg.alloc(ALICE, control_state(codewords), labels=labels)
            n = len(positions)
            for offset, position in enumerate(positions):
                self.controls[position] = (handles[offset], handles[n + offset])


class OnePairCollectiveAlice(ControlQubitAlice):
    name = 'one-pair'
    description = 'One run per block at the quantum level, the other runs honest with zeros.'

    def __init__(self, rng=None):
        super().__init__()
        self.rng = rng

    def on_start(self, blocks, reg, rng):
        super().on_start(blocks, reg, rng)
        rng = self.rng if self.rng is not None else rng
        plus = qlin.superposition([(1, (0, 0)), (1, (0, 1)), (1, (1, 0)), (1, (1, 1))], (2, 2))
        for _, positions in self.blocks:
            position = positions[rng.integers(len(positions))]
            labels = ['c0[{}]'.format(position), 'c1[{}]'.format(position)]
            self.controls[position] = tuple(reg.alloc(ALICE, plus, labels=labels))


# Bob

class BobStrategy:
    # You should override
    name = None

    # You may override
    description = ''

    def choose_b(self, index, rng):
        return coin(rng)

    def decode(self, b, beta, beta_prime, reg, rng):
        return cks.bob_decode(b, beta, beta_prime, reg, rng)

    def guess_other(self, cks_round, reg, rng):
        """
        Returns a guess of x_{not b} of `cks_round` or None.
        """
        return None


class HonestBob(BobStrategy):
    name = 'honest'
    description = 'Uniform choice bit, decodes and checks.'


class CuriousBob(HonestBob):
    name = 'curious'
    description = 'Honest, then guesses the other bit with a Helstrom measurement.'

    def guess_other(self, cks_round, reg, rng):
        if cks_round.aborted:
            return None
        b = cks_round.b
        states = []
        for other in (0, 1):
            bits = [0, 0]
            bits[b] = cks_round.decoded_bit
            bits[1 - b] = other
            states.append(cks.expected_state(b, *bits).density())
        measurement = qlin.helstrom_measurement(*states)
        outcome = reg.measure(BOB, measurement, [cks_round.beta, cks_round.beta_prime], rng)
        label = measurement.labels[outcome]
        return coin(rng) if label is None else label


# Registry of names

class StrategyRegistry:
    """
    Strategy classes addressable by name.
    """

    def __init__(self, base):
        self.base = base
        self._registry = {}

    def register(self, *strategies):
        for strategy in strategies:
            assert issubclass(strategy, self.base), (
                "'{cls}' should be a subclass of '{base}'.".format(
                    cls=strategy.__name__,
                    base=self.base.__name__,
                )
            )
            assert strategy.name is not None, (
                "'{cls}' should include a 'name' attribute.".format(cls=strategy.__name__)
            )
            if strategy.name in self._registry:
                raise AlreadyRegistered(
                    "The name '{name}' is registered for '{strategy}' "
                    "already.".format(
                        name=strategy.name,
                        strategy=self._registry[strategy.name].__name__,
                    )
                )
            self._registry[strategy.name] = strategy

    def names(self):
        return sorted(self._registry)

    def get(self, name):
        try:
            return self._registry[name]
        except KeyError:
            raise ImproperlyConfigured(
                "Unknown strategy '{name}', choose one of {names}.".format(
                    name=name,
                    names=', '.join(self.names()),
                )
            )

    def create(self, name, **params):
        return self.get(name)(**params)


alice_strategies = StrategyRegistry(AliceStrategy)
alice_strategies.register(
    HonestAlice,
    ChannelAttackAlice,
    BasisAttackAlice,
    CollectiveTripleAlice,
    OnePairCollectiveAlice,
)

bob_strategies = StrategyRegistry(BobStrategy)
bob_strategies.register(HonestBob, CuriousBob)


# Factories

def honest_alice(x_pairs=None):
    return HonestAlice(x_pairs)


def basis_attack_alice(announce_rule=None):
    return BasisAttackAlice(announce_rule)


def channel_attack_alice(ch, cheat_rounds=None, announce_rule=None, cheat_count=1):
    return ChannelAttackAlice(ch, cheat_rounds, cheat_count, announce_rule)


def collective_triple_alice():
    return CollectiveTripleAlice()


def one_pair_collective_alice(rng=None):
    return OnePairCollectiveAlice(rng)


def honest_bob():
    return HonestBob()


def curious_bob():
    return CuriousBob()
