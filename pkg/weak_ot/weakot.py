"""
Weak oblivious transfer built from n rounds of the qutrit protocol.

Protocol A works with any agreed codeword set S of n-bit strings: Bob
checks m random runs and encodes on an admissible unchecked run. Protocol B
fixes S = {000, 001, 010, 100}, groups the rounds in k triples, checks two
runs per triple and encodes on the third run of a useful triple.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from . import settings, transcript as wire
from .cks import run_cks_round
from .exceptions import ImproperlyConfigured
from .registry import ALICE, BOB, Registry
from .strategies import HonestBob
from .transcript import ProtocolTranscript
from .utils import check_bit, coin, format_word, get_rng, parse_word

logger = logging.getLogger(__name__)

CHECK_MISMATCH = 'check-mismatch'
BOB_MEASUREMENT_ABORT = 'bob-measurement-abort'
NO_USEFUL_RUN = 'no-useful-run'
SET_VIOLATION = 'set-violation'
ADMISSIBILITY_FAILURE = 'admissibility-failure'

ABORT_REASONS = (
    CHECK_MISMATCH,
    BOB_MEASUREMENT_ABORT,
    NO_USEFUL_RUN,
    SET_VIOLATION,
    ADMISSIBILITY_FAILURE,
)

PROTOCOL_A = 'A'
PROTOCOL_B = 'B'


class CodewordSet:
    """
    Agreed set of classical n-bit strings.
    """

    def __init__(self, words):
        words = sorted({parse_word(word) for word in words})
        if not words:
            raise ValueError('A codeword set should not be empty.')
        lengths = {len(word) for word in words}
        if len(lengths) != 1:
            raise ValueError('All codewords should have the same length.')
        self.n = lengths.pop()
        self.words = words
        self._members = set(words)

    @classmethod
    def full(cls, n):
        return cls(itertools.product((0, 1), repeat=n))

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return self.membership(word)

    def __eq__(self, other):
        return isinstance(other, CodewordSet) and self.words == other.words

    def __repr__(self):
        return 'CodewordSet({words})'.format(words=self.as_strings())

    def membership(self, word):
        try:
            return parse_word(word) in self._members
        except ValueError:
            return False

    def enumerate(self):
        return list(self.words)

    def as_strings(self):
        return [format_word(word) for word in self.words]

    def count_completions(self, partial):
        """
        Returns the number of words agreeing with `partial`, a mapping of
        0-based position to bit.
        """
        return sum(
            all(word[position] == bit for position, bit in partial.items())
            for word in self.words
        )


def default_set_s():
    return CodewordSet(['000', '001', '010', '100'])


@dataclass
class ProtocolConfig:
    k: int = 1
    m: Optional[int] = None
    targets: Optional[Tuple[int, int]] = None
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        assert self.k >= 1, "'k' should be at least 1."
        if self.targets is not None:
            self.targets = (check_bit(self.targets[0], 'x0'), check_bit(self.targets[1], 'x1'))

    @property
    def n(self):
        return 3 * self.k


@dataclass
class RunOutcome:
    completed: bool
    abort_reason: Optional[str] = None
    bob_target_bit: Optional[int] = None
    alice_b_guess: Optional[int] = None
    bob_true_b: Optional[int] = None
    bob_other_guess: Optional[int] = None
    targets: Optional[Tuple[int, int]] = None
    encoding_index: Optional[int] = None
    checks_passed: bool = True

    def __post_init__(self):
        assert self.completed != (self.abort_reason is not None), (
            "'RunOutcome' should either complete or carry an abort reason."
        )
        assert self.abort_reason is None or self.abort_reason in ABORT_REASONS

    @property
    def excluded(self):
        return self.abort_reason == NO_USEFUL_RUN

    @property
    def alice_success(self):
        """
        Alice learned b while Bob completed and every check passed.
        """
        return bool(
            self.completed and self.checks_passed and self.alice_b_guess == self.bob_true_b
        )

    @property
    def bob_success(self):
        """
        Bob learned x_b and guessed x_{not b} correctly.
        """
        if not self.completed or self.bob_other_guess is None:
            return False
        b = self.bob_true_b
        return (
            self.bob_target_bit == self.targets[b]
            and self.bob_other_guess == self.targets[1 - b]
        )

    @property
    def bob_correct(self):
        return self.completed and self.bob_target_bit == self.targets[self.bob_true_b]

    def to_payload(self):
        return {
            'type': 'outcome',
            'completed': self.completed,
            'abort_reason': self.abort_reason,
            'bob_target_bit': self.bob_target_bit,
            'alice_b_guess': self.alice_b_guess,
            'bob_true_b': self.bob_true_b,
            'bob_other_guess': self.bob_other_guess,
            'targets': list(self.targets) if self.targets is not None else None,
            'encoding_index': self.encoding_index,
        }


@dataclass
class TripleVerdict:
    passed: bool
    useful: bool
    needs_reveal: bool = False
    reason: Optional[str] = None
    checked: tuple = ()


# Checks

def security_check_triple(records, announcements, revealed_i3=None, codewords=None):
    """
    Returns the TripleVerdict of one triple.

    `records` maps the round index of every announced run to its CksRound,
    `announcements` maps the two checked runs to the announced (x0, x1) and
    `revealed_i3` is the (round index, (x0, x1)) of the third run, if
    requested. Only the decoded bit x_{b_i} of each run can be checked.
    """
    codewords = codewords or default_set_s()
    announced = dict(announcements)
    if revealed_i3 is not None:
        announced[revealed_i3[0]] = tuple(revealed_i3[1])
    checked = tuple(sorted(announced))
    for index in checked:
        record = records[index]
        if announced[index][record.b] != record.decoded_bit:
            return TripleVerdict(False, False, reason=CHECK_MISMATCH, checked=checked)
    useful = all(bit == 0 for pair in announcements.values() for bit in pair)
    if revealed_i3 is None:
        return TripleVerdict(True, useful, needs_reveal=not useful, checked=checked)
    for j in (0, 1):
        if tuple(announced[i][j] for i in checked) not in codewords:
            return TripleVerdict(False, useful, reason=SET_VIOLATION, checked=checked)
    return TripleVerdict(True, useful, checked=checked)


def a5_admissibility(codewords, announced, index):
    """
    Returns whether run `index` may carry the encoding.

    For each of the two strings, the completions of the announced bits with
    bit `index` set to 0 and set to 1 must both exist and be equal in number.
    """
    if index in announced:
        return False
    for j in (0, 1):
        partial = {i: pair[j] for i, pair in announced.items()}
        zeros = codewords.count_completions({**partial, index: 0})
        ones = codewords.count_completions({**partial, index: 1})
        if zeros < 1 or zeros != ones:
            return False
    return True


def encode_targets(targets, run_bits):
    return targets[0] ^ run_bits[0], targets[1] ^ run_bits[1]


def decode_target(announced, b, decoded_bit):
    return announced[b] ^ decoded_bit


def encode_decode_targets(x0, x1, x0_run, x1_run, bob_decoded):
    """
    Returns ((d0, d1), Bob's target bit) where d_j = x_j xor x_j of the
    encoding run and Bob computes d_b xor his decoded bit.
    """
    announced = encode_targets((x0, x1), (x0_run, x1_run))
    b, decoded_bit = bob_decoded
    return announced, decode_target(announced, b, decoded_bit)


# Runs

class ProtocolRun:
    """
    Shared plumbing of one execution: transcript, rounds, aborts.
    """
    protocol = None

    def __init__(self, cfg, codewords, alice, bob=None, rng=None, registry=None):
        self.cfg = cfg
        self.codewords = codewords
        self.alice = alice
        self.bob = bob or HonestBob()
        self.seeded = rng is None
        self.rng = get_rng(cfg.seed) if rng is None else rng
        self.registry = registry or Registry()
        self.transcript = ProtocolTranscript()
        self.rounds = {}
        self.announced = {}
        self.targets = None

    def start(self, blocks, **params):
        rng = self.rng
        # two draws whether or not the targets are fixed
        drawn = (coin(rng), coin(rng))
        self.targets = self.cfg.targets or drawn
        self.transcript.add(
            wire.SETUP, wire.PROTOCOL,
            type='config',
            protocol=self.protocol,
            codewords=self.codewords.as_strings(),
            targets=list(self.targets),
            seed=self.cfg.seed if self.seeded else None,
            **params
        )
        self.alice.on_start(blocks, self.registry, rng)

    def run_rounds(self, n):
        """
        Returns False when Bob aborted in some round.
        """
        for index in range(n):
            b = int(self.bob.choose_b(index, self.rng))
            cks_round = run_cks_round(
                self.alice, b, self.rng, self.registry, self.bob, index,
            )
            self.rounds[index] = cks_round
            x0, x1 = cks_round.x0, cks_round.x1
            self.transcript.add(
                wire.CKS, BOB,
                type='round',
                round=index,
                b=b,
                outcome='abort' if cks_round.aborted else cks_round.decoded_bit,
                x0=x0,
                x1=x1,
            )
            if cks_round.aborted:
                return False
        return True

    def reveal(self, index, phase):
        self.transcript.add(phase, BOB, type='reveal-request', round=index)
        pair = self.alice.on_reveal(index, self.registry, self.rng)
        pair = (int(pair[0]), int(pair[1]))
        self.announced[index] = pair
        self.transcript.add(phase, ALICE, type='announce', round=index, x0=pair[0], x1=pair[1])
        return pair

    def verdict(self, phase, verdict, **params):
        self.transcript.add(
            phase, BOB,
            type='verdict',
            checked=list(verdict.checked),
            passed=verdict.passed,
            useful=verdict.useful,
            reason=verdict.reason,
            **params
        )

    def abort(self, reason, **params):
        logger.debug('Protocol %s aborted: %s', self.protocol, reason)
        outcome = RunOutcome(
            completed=False,
            abort_reason=reason,
            targets=self.targets,
            checks_passed=reason not in (CHECK_MISMATCH, SET_VIOLATION),
            **params
        )
        return self.finish(outcome)

    def encode(self, index):
        d0, d1 = self.alice.on_encode(index, self.targets, self.registry, self.rng)
        d0, d1 = int(d0), int(d1)
        self.transcript.add(wire.ENCODE, ALICE, type='encode', d0=d0, d1=d1)
        return d0, d1

    def complete(self, index, announced):
        cks_round = self.rounds[index]
        b = cks_round.b
        target_bit = decode_target(announced, b, cks_round.decoded_bit)
        guess = int(self.alice.guess_b(self.rng))
        other = self.bob.guess_other(cks_round, self.registry, self.rng)
        if other is not None:
            other = int(other) ^ announced[1 - b]
        outcome = RunOutcome(
            completed=True,
            bob_target_bit=target_bit,
            alice_b_guess=guess,
            bob_true_b=b,
            bob_other_guess=other,
            targets=self.targets,
            encoding_index=index,
        )
        return self.finish(outcome)

    def finish(self, outcome):
        self.transcript.add(wire.OUTCOME, wire.PROTOCOL, **outcome.to_payload())
        return outcome, self.transcript


class ProtocolB(ProtocolRun):
    protocol = PROTOCOL_B

    def __init__(self, cfg, alice, bob=None, rng=None, registry=None, codewords=None):
        codewords = codewords or default_set_s()
        if codewords.n != 3:
            raise ImproperlyConfigured(
                "'ProtocolB' should use a set of 3-bit strings, got n={n}.".format(n=codewords.n)
            )
        super().__init__(cfg, codewords, alice, bob, rng, registry)

    def run(self):
        rng = self.rng
        triples = [tuple(range(3 * j, 3 * j + 3)) for j in range(self.cfg.k)]
        self.start([(self.codewords, triple) for triple in triples], k=self.cfg.k, n=self.cfg.n)
        if not self.run_rounds(self.cfg.n):
            return self.abort(BOB_MEASUREMENT_ABORT)

        useful = []
        for j, triple in enumerate(triples):
            picks = sorted(int(p) for p in rng.choice(3, size=2, replace=False))
            checked = [triple[p] for p in picks]
            third = triple[3 - sum(picks)]
            announcements = {i: self.reveal(i, wire.CHECK) for i in checked}
            verdict = security_check_triple(self.rounds, announcements, codewords=self.codewords)
            if verdict.passed and verdict.needs_reveal:
                revealed = (third, self.reveal(third, wire.CHECK))
                verdict = security_check_triple(
                    self.rounds, announcements, revealed, self.codewords,
                )
            self.verdict(wire.CHECK, verdict, triple=j)
            if not verdict.passed:
                return self.abort(verdict.reason)
            if verdict.useful:
                useful.append((j, third, announcements))

        if not useful:
            return self.abort(NO_USEFUL_RUN)

        chosen, index, _ = useful[int(rng.integers(len(useful)))]
        self.transcript.add(wire.ENCODE, BOB, type='choose', triple=chosen, round=index)
        announced = self.encode(index)

        for j, third, announcements in useful:
            if j == chosen:
                continue
            revealed = (third, self.reveal(third, wire.VERIFY))
            verdict = security_check_triple(self.rounds, announcements, revealed, self.codewords)
            self.verdict(wire.VERIFY, verdict, triple=j)
            if not verdict.passed:
                return self.abort(verdict.reason, encoding_index=index)

        return self.complete(index, announced)


class ProtocolA(ProtocolRun):
    protocol = PROTOCOL_A

    def run(self):
        rng = self.rng
        n = self.codewords.n
        m = self.cfg.m
        if m is None or not 0 < m < n:
            raise ImproperlyConfigured(
                "'m' should satisfy 0 < m < {n}, got {m}.".format(n=n, m=m)
            )
        self.start([(self.codewords, tuple(range(n)))], n=n, m=m)
        if not self.run_rounds(n):
            return self.abort(BOB_MEASUREMENT_ABORT)

        checked = sorted(int(i) for i in rng.choice(n, size=m, replace=False))
        announced = {i: self.reveal(i, wire.CHECK) for i in checked}
        reason = None
        for i in checked:
            record = self.rounds[i]
            if announced[i][record.b] != record.decoded_bit:
                reason = CHECK_MISMATCH
                break
        if reason is None:
            for j in (0, 1):
                if self.codewords.count_completions({i: pair[j] for i, pair in announced.items()}) < 1:
                    reason = SET_VIOLATION
                    break
        verdict = TripleVerdict(reason is None, False, reason=reason, checked=tuple(checked))
        self.verdict(wire.CHECK, verdict)
        if reason is not None:
            return self.abort(reason)

        admissible = [
            i for i in range(n)
            if i not in announced and a5_admissibility(self.codewords, announced, i)
        ]
        if not admissible:
            return self.abort(ADMISSIBILITY_FAILURE)

        index = admissible[int(rng.integers(len(admissible)))]
        self.transcript.add(wire.ENCODE, BOB, type='choose', round=index, admissible=admissible)
        announced_targets = self.encode(index)
        return self.complete(index, announced_targets)


def run_protocol_b(cfg, alice, bob=None, rng=None, registry=None, codewords=None):
    """
    Returns (RunOutcome, ProtocolTranscript) of one Protocol B execution.
    """
    return ProtocolB(cfg, alice, bob, rng, registry, codewords).run()


def run_protocol_a(cfg, codewords, alice, bob=None, rng=None, registry=None):
    """
    Returns (RunOutcome, ProtocolTranscript) of one Protocol A execution.
    """
    return ProtocolA(cfg, codewords, alice, bob, rng, registry).run()


# Transcript introspection

def checked_runs(transcript):
    """
    Returns the set of rounds whose decoded bit was checked.
    """
    runs = set()
    for event in transcript.of_type('verdict'):
        runs.update(event.payload['checked'])
    return runs


def transcript_codec(transcript):
    return wire.encode(transcript)


def parse_transcript(data):
    return wire.parse(data)


def replay(transcript, alice, bob=None):
    """
    Reruns a seeded execution recorded in `transcript` with fresh
    strategies and returns (RunOutcome, ProtocolTranscript).
    """
    if isinstance(transcript, bytes):
        transcript = wire.parse(transcript)
    setup = transcript.setup.payload
    if setup.get('seed') is None:
        raise ValueError('Only executions seeded from their config can be replayed.')
    codewords = CodewordSet(setup['codewords'])
    targets = tuple(setup['targets'])
    if setup['protocol'] == PROTOCOL_B:
        cfg = ProtocolConfig(k=setup['k'], targets=targets, seed=setup['seed'])
        return run_protocol_b(cfg, alice, bob, codewords=codewords)
    cfg = ProtocolConfig(m=setup['m'], targets=targets, seed=setup['seed'])
    return run_protocol_a(cfg, codewords, alice, bob)
