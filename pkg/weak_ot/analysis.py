"""
Exact verifiers, closed-form bounds and Monte Carlo estimation of cheating
probabilities.
"""
import asyncio
import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from asgiref.sync import async_to_sync, sync_to_async
from scipy.stats import chi2_contingency, norm

from . import cks, qlin, settings
from .exceptions import (
    DimensionMismatch, DomainError, ImproperlyConfigured, InvalidOperator,
    InvalidState, PreconditionViolation
)
from .registry import Registry
from .strategies import (
    ControlQubitAlice, HonestAlice, HonestBob, alice_strategies, bob_strategies,
    computational_channel, get_announce_rule
)
from .utils import random_density, random_state, random_unitary, get_rng, trial_rng
from .weakot import (
    BOB_MEASUREMENT_ABORT, CHECK_MISMATCH, SET_VIOLATION, CodewordSet,
    ProtocolConfig, RunOutcome, default_set_s, run_protocol_a, run_protocol_b
)

logger = logging.getLogger(__name__)

CKS_ROUND = 'cks-round'
PROTOCOL_A = 'protocol-a'
PROTOCOL_B = 'protocol-b'

PROTOCOLS = (CKS_ROUND, PROTOCOL_A, PROTOCOL_B)

# Score name and the RunOutcome flag it counts
SCORES = {
    'alice': 'alice_success',
    'bob': 'bob_success',
    'correct': 'bob_correct',
}

GENERAL_BOUND = 2.0
MAX_VIOLATION = 1.5
LIMITED_LOWER = 5 / 3

STATE_KEYS = [(b, x0, x1) for b in (0, 1) for x0 in (0, 1) for x1 in (0, 1)]


def _check_range(value, low, high, name):
    if not low - settings.ATOL <= value <= high + settings.ATOL:
        raise DomainError(
            "'{name}' should lie in [{low}, {high}], got {value}.".format(
                name=name,
                low=low,
                high=high,
                value=value,
            )
        )
    return min(max(value, low), high)


# Bob's states and the general bounds

def cks_bob_states():
    """
    Returns Bob's pair state after an honest round for every (b, x0, x1).
    """
    return {key: cks.expected_state(*key).density() for key in STATE_KEYS}


def _check_states(states):
    missing = [key for key in STATE_KEYS if key not in states]
    if missing:
        raise ValueError('States are missing for {keys}.'.format(keys=missing))
    first = states[STATE_KEYS[0]]
    for key in STATE_KEYS[1:]:
        qlin.check_same_layout(first, states[key])


def _state_pairs(states):
    """
    Returns the four pairs differing only in the bit Bob should not learn.
    """
    pairs = [(states[(0, x0, 0)], states[(0, x0, 1)]) for x0 in (0, 1)]
    pairs += [(states[(1, 0, x1)], states[(1, 1, x1)]) for x1 in (0, 1)]
    return pairs


def delta_quantity(states):
    """
    Returns half the summed trace norms between the states that differ only
    in x_{not b}, a value in [0, 4].
    """
    _check_states(states)
    return 0.5 * sum(qlin.trace_norm(a - b) for a, b in _state_pairs(states))


def f_quantity(states):
    """
    Returns the summed fidelities of the same four pairs, a value in [0, 4].
    """
    _check_states(states)
    return sum(qlin.fidelity(a, b) for a, b in _state_pairs(states))


def p_bob_bound(delta):
    delta = _check_range(delta, 0.0, 4.0, 'delta')
    return 0.5 + delta / 8


def p_alice_bound(f):
    f = _check_range(f, 0.0, 4.0, 'f')
    return 0.5 + f / 16


@dataclass
class FuchsCheck:
    lower_ok: bool
    upper_ok: bool
    lower_slack: float
    upper_slack: float
    fidelity: float
    trace_norm: float

    @property
    def holds(self):
        return self.lower_ok and self.upper_ok


def fuchs_vdg_check(rho, xi):
    """
    Returns both sides of 1 - |rho - xi|/2 <= F(rho, xi) <= sqrt(1 - |rho - xi|^2/4).
    """
    distance = qlin.trace_norm(rho - xi)
    fid = qlin.fidelity(rho, xi)
    lower_slack = fid - (1 - distance / 2)
    upper_slack = np.sqrt(max(1 - distance ** 2 / 4, 0.0)) - fid
    return FuchsCheck(
        lower_ok=lower_slack >= -settings.ATOL,
        upper_ok=upper_slack >= -settings.ATOL,
        lower_slack=float(lower_slack),
        upper_slack=float(upper_slack),
        fidelity=fid,
        trace_norm=distance,
    )


def fuchs_vdg_sweep(pairs=1000, seed=settings.DEFAULT_SEED):
    """
    Returns the number of random density pairs in dims 2 to 4 violating
    either inequality.
    """
    rng = get_rng(seed)
    violations = 0
    for _ in range(pairs):
        dim = int(rng.integers(2, 5))
        rho = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
        xi = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
        if not fuchs_vdg_check(rho, xi).holds:
            violations += 1
    return violations


# Reliability theorem

@dataclass
class CheatUnitarySpec:
    """
    Alice's general single-round attack with reliability 1.

    Her unitary on (ancilla, beta) maps |e>|j> to |f_j>|j> for j = 0, 1 and
    |e>|2> to |fprime>|2>, then she measures the ancilla with `M`.
    """
    d: int
    f0: np.ndarray
    f1: np.ndarray
    fprime: np.ndarray
    M: object

    def __post_init__(self):
        for name in ('f0', 'f1', 'fprime'):
            vector = np.asarray(getattr(self, name), dtype=np.complex128).reshape(-1)
            if vector.shape != (self.d,):
                raise DimensionMismatch(
                    "'{name}' should have {d} entries.".format(name=name, d=self.d)
                )
            if abs(np.vdot(vector, vector).real - 1) > settings.ATOL:
                raise InvalidState("'{name}' should be a unit vector.".format(name=name))
            setattr(self, name, vector)
        if not isinstance(self.M, qlin.ProjectiveMeasurement):
            self.M = qlin.ProjectiveMeasurement(self.M)
        if len(self.M) != 2:
            raise InvalidOperator("'M' should have two outcomes.")
        if self.M.dim != self.d:
            raise DimensionMismatch("'M' should act on the {d}-dim ancilla.".format(d=self.d))

    def f(self, b):
        return self.f1 if b else self.f0

    def alice_state(self, b):
        """
        Returns Alice's ancilla state before measuring, averaged over Bob's
        outcomes.
        """
        f_b = self.f(b)
        return (np.outer(f_b, f_b.conj()) + np.outer(self.fprime, self.fprime.conj())) / 2


@dataclass
class Theorem1Report:
    view_distance: float
    pre_measurement_distance: float
    outcome_probabilities: list

    @property
    def holds(self):
        return self.view_distance <= settings.THEOREM_ATOL


def branch_weights(spec):
    """
    Returns w[b][k] = (weight of Bob's outcome 0, weight of Bob's outcome 1)
    jointly with Alice's outcome k, and the abort weight per b.
    """
    weights = []
    aborts = []
    for b in (0, 1):
        f_b = spec.f(b)
        rows = []
        for p in spec.M.operators:
            w0 = np.linalg.norm(p @ (spec.fprime + f_b)) ** 2 / 4
            w1 = np.linalg.norm(p @ (spec.fprime - f_b)) ** 2 / 4
            rows.append((float(w0), float(w1)))
        weights.append(rows)
        aborts.append(max(0.0, 1 - sum(w0 + w1 for w0, w1 in rows)))
    return weights, aborts


def check_reliability(spec):
    """
    Raises PreconditionViolation unless every outcome of M fixes Bob's
    decoded bit and Bob never aborts.
    """
    weights, aborts = branch_weights(spec)
    for b in (0, 1):
        if aborts[b] > settings.ATOL:
            raise PreconditionViolation(
                'Bob aborts with probability {p} for b={b}.'.format(p=aborts[b], b=b)
            )
        for k, (w0, w1) in enumerate(weights[b]):
            if w0 > settings.ATOL and w1 > settings.ATOL:
                raise PreconditionViolation(
                    'Outcome {k} of M does not determine x_b for b={b}.'.format(k=k, b=b)
                )
    return weights


def theorem1_verify(spec):
    """
    Returns the distance between Alice's classical-quantum views for b = 0
    and b = 1 after she measured M.
    """
    check_reliability(spec)
    rho = [spec.alice_state(b) for b in (0, 1)]
    view = 0.0
    probabilities = [[], []]
    for p in spec.M.operators:
        blocks = [p @ r @ p for r in rho]
        view += 0.5 * qlin.trace_norm(blocks[0] - blocks[1])
        for b in (0, 1):
            probabilities[b].append(float(np.trace(blocks[b]).real))
    return Theorem1Report(
        view_distance=float(view),
        pre_measurement_distance=0.5 * qlin.trace_norm(rho[0] - rho[1]),
        outcome_probabilities=probabilities,
    )


def random_cheat_spec(rng=None, d=None):
    """
    Returns a random spec with reliability 1.

    M splits the ancilla space in random complementary subspaces. On each of
    them f_b agrees with fprime up to a sign, which is exactly the
    reliability condition.
    """
    rng = get_rng(rng)
    d = int(rng.integers(2, 5)) if d is None else d
    u = random_unitary(d, rng)
    rank = int(rng.integers(1, d))
    p0 = u[:, :rank] @ u[:, :rank].conj().T
    p1 = np.eye(d) - p0
    fprime = random_state(d, rng).amps
    fs = []
    for _ in (0, 1):
        s0, s1 = rng.choice([-1, 1], size=2)
        f = (s0 * p0 + s1 * p1) @ fprime
        fs.append(f / np.linalg.norm(f))
    return CheatUnitarySpec(d, fs[0], fs[1], fprime, [p0, p1])


@dataclass
class Theorem1Sweep:
    specs: int
    counterexamples: int
    max_view_distance: float
    max_pre_measurement_distance: float


def theorem1_sweep(specs=1000, seed=settings.DEFAULT_SEED):
    rng = get_rng(seed)
    counterexamples = 0
    max_view = 0.0
    max_pre = 0.0
    for _ in range(specs):
        report = theorem1_verify(random_cheat_spec(rng))
        if not report.holds:
            counterexamples += 1
        max_view = max(max_view, report.view_distance)
        max_pre = max(max_pre, report.pre_measurement_distance)
    logger.info('Reliability sweep: %d specs, %d counterexamples', specs, counterexamples)
    return Theorem1Sweep(specs, counterexamples, max_view, max_pre)


# Individual attacks

def epsilon_exact(channel, announce_rule):
    """
    Returns the exact probability that a run processed by `channel` fails
    Bob's check when announced with `announce_rule`, for a uniform b.
    """
    rule = get_announce_rule(announce_rule)
    total = 0.0
    for b in (0, 1):
        measurement = cks.decode_measurement(b)
        for m, (p, state) in enumerate(channel.branches(b)):
            if state is None:
                continue
            probabilities, _ = qlin.outcome_distribution(state, measurement.operators)
            announced = rule.distribution(m)
            for q, label in zip(probabilities, measurement.labels):
                if label is None:
                    fail = 1.0
                else:
                    fail = sum(w for pair, w in announced.items() if pair[b] != label)
                total += 0.5 * p * q * fail
    return float(total)


def guess_exact(channel):
    """
    Returns Alice's exact probability of guessing b from one channel record.
    """
    likelihoods = [channel.outcome_likelihoods(b) for b in (0, 1)]
    total = 0.0
    for l0, l1 in zip(*likelihoods):
        if abs(l0 - l1) <= settings.ATOL:
            total += 0.5 * (l0 + l1) / 2
        else:
            total += 0.5 * max(l0, l1)
    return float(total)


def basis_attack_exact():
    return guess_exact(computational_channel())


def individual_bound(n, eps):
    if n < 1:
        raise DomainError("'n' should be at least 1, got {n}.".format(n=n))
    eps = _check_range(eps, 0.0, 1.0, 'eps')
    return 0.5 + 1 / (4 * n) - eps / 2 * (1 - 1 / n)


@dataclass
class Decomposition:
    encoding_cap: float
    checked_cap: float
    combined: float

    def __iter__(self):
        return iter((self.encoding_cap, self.checked_cap, self.combined))


def p_decomposition(p, n, eps):
    """
    Returns the caps when Alice cheats in a fraction `p` of the n runs: the
    encoding run is cheated, or it is not and a cheated run gets checked.
    """
    if n < 1:
        raise DomainError("'n' should be at least 1, got {n}.".format(n=n))
    eps = _check_range(eps, 0.0, 1.0, 'eps')
    p = _check_range(p, 1 / n, 1.0, 'p')
    cheats = p * n
    encoding_cap = 0.75 * (1 - eps) ** (cheats - 1)
    checked_cap = 0.5 * (1 - eps) ** cheats
    return Decomposition(encoding_cap, checked_cap, p * encoding_cap + (1 - p) * checked_cap)


def is_decreasing_in_p(n, eps, points=50):
    """
    Returns whether the combined cap strictly decreases on a grid of p in
    [1/n, 1].
    """
    values = [p_decomposition(p, n, eps).combined for p in np.linspace(1 / n, 1, points)]
    return all(b < a for a, b in zip(values, values[1:]))


def collective_formula(p, p_c):
    p = _check_range(p, 0.0, 1.0, 'p')
    p_c = _check_range(p_c, 0.0, 1.0, 'p_c')
    return (0.5 + p / 4) * p_c


def one_pair_exact():
    """
    Returns Alice's exact success with one quantum run per triple and
    reveals that are uniform on that run.

    The useful-run rule favours triples whose quantum run went unchecked, so
    the encoding run is the quantum run with probability 2/3.
    """
    useful = 0.0
    quantum_encoding = 0.0
    for quantum in range(3):
        for picks in itertools.combinations(range(3), 2):
            weight = 1 / 9 * (0.25 if quantum in picks else 1.0)
            useful += weight
            if quantum not in picks:
                quantum_encoding += weight
    share = quantum_encoding / useful
    return share * 0.75 + (1 - share) * 0.5


def no_useful_probability(k):
    """
    Returns the probability that none of k honest triples is useful.
    """
    return 0.75 ** k


def select_k(zeta):
    """
    Returns the smallest triple count with n = 3k > 1/(4 zeta).
    """
    if zeta <= 0:
        raise DomainError("'zeta' should be positive, got {zeta}.".format(zeta=zeta))
    k = 1
    while 3 * k <= 1 / (4 * zeta):
        k += 1
    return k


# Monte Carlo

@dataclass
class TrialResult:
    success: bool
    completed: bool
    excluded: bool
    abort_reason: Optional[str] = None
    definite: Optional[bool] = None

    @property
    def check_failed(self):
        return self.abort_reason in (CHECK_MISMATCH, SET_VIOLATION)


@dataclass
class CheatScenario:
    """
    One estimation setup: a protocol, both strategies and the trial count.
    """
    protocol: str = PROTOCOL_B
    alice: str = 'honest'
    alice_params: dict = field(default_factory=dict)
    bob: str = 'honest'
    bob_params: dict = field(default_factory=dict)
    k: int = 1
    m: Optional[int] = None
    codewords: Optional[list] = None
    targets: Optional[tuple] = None
    trials: int = 1000
    seed: int = settings.DEFAULT_SEED
    zeta: Optional[float] = None
    score: str = 'alice'

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ImproperlyConfigured(
                "'protocol' should be one of {protocols}, got '{protocol}'.".format(
                    protocols=', '.join(PROTOCOLS),
                    protocol=self.protocol,
                )
            )
        if self.score not in SCORES:
            raise ImproperlyConfigured(
                "'score' should be one of {scores}, got '{score}'.".format(
                    scores=', '.join(SCORES),
                    score=self.score,
                )
            )
        if self.trials < 1:
            raise ImproperlyConfigured("'trials' should be at least 1.")
        alice_strategies.get(self.alice)
        bob_strategies.get(self.bob)
        if self.zeta is not None:
            self.k = select_k(self.zeta)

    @property
    def n(self):
        if self.protocol == CKS_ROUND:
            return 1
        if self.protocol == PROTOCOL_A:
            return self.codeword_set.n
        return 3 * self.k

    @property
    def codeword_set(self):
        return CodewordSet(self.codewords) if self.codewords else default_set_s()

    def make_alice(self):
        return alice_strategies.create(self.alice, **self.alice_params)

    def make_bob(self):
        return bob_strategies.create(self.bob, **self.bob_params)

    def run(self, rng):
        """
        Returns the RunOutcome and Alice of one execution drawing from `rng`.
        """
        alice = self.make_alice()
        bob = self.make_bob()
        if self.protocol == CKS_ROUND:
            return run_cks_scenario(alice, bob, rng), alice
        cfg = ProtocolConfig(k=self.k, m=self.m, targets=self.targets, seed=self.seed)
        if self.protocol == PROTOCOL_A:
            outcome, _ = run_protocol_a(cfg, self.codeword_set, alice, bob, rng=rng)
        else:
            outcome, _ = run_protocol_b(cfg, alice, bob, rng=rng, codewords=self.codeword_set)
        return outcome, alice

    def run_trial(self, index):
        outcome, alice = self.run(trial_rng(self.seed, index))
        success = getattr(outcome, SCORES[self.score])
        definite = None
        if isinstance(alice, ControlQubitAlice) and outcome.completed:
            definite = alice.definite_b is not None
        return TrialResult(
            success=bool(success),
            completed=outcome.completed,
            excluded=outcome.excluded,
            abort_reason=outcome.abort_reason,
            definite=definite,
        )


def run_cks_scenario(alice, bob, rng):
    """
    Returns the RunOutcome of one bare round where Alice guesses b right
    after Bob decoded.
    """
    reg = Registry()
    alice.on_start([(None, (0,))], reg, rng)
    b = int(bob.choose_b(0, rng))
    cks_round = cks.run_cks_round(alice, b, rng, reg, bob, 0)
    if cks_round.aborted:
        return RunOutcome(completed=False, abort_reason=BOB_MEASUREMENT_ABORT, bob_true_b=b)
    guess = int(alice.guess_b(rng))
    other = bob.guess_other(cks_round, reg, rng)
    return RunOutcome(
        completed=True,
        bob_target_bit=cks_round.decoded_bit,
        alice_b_guess=guess,
        bob_true_b=b,
        bob_other_guess=None if other is None else int(other),
        targets=alice.round_bits(0),
        encoding_index=0,
    )


def wilson_interval(successes, n, confidence=None):
    """
    Returns the two-sided Wilson score interval of a binomial proportion.
    """
    if n == 0:
        return 0.0, 1.0
    confidence = settings.CONFIDENCE if confidence is None else confidence
    z = norm.ppf(1 - (1 - confidence) / 2)
    p = successes / n
    denominator = 1 + z ** 2 / n
    center = (p + z ** 2 / (2 * n)) / denominator
    half = z * np.sqrt(p * (1 - p) / n + z ** 2 / (4 * n ** 2)) / denominator
    return float(min(max(center - half, 0.0), p)), float(max(min(center + half, 1.0), p))


def verdict_tolerance(target, trials, tolerance=0.0, confidence=None):
    """
    Returns the larger of `tolerance` and the z-scaled binomial standard
    deviation at `target`.
    """
    confidence = settings.CONFIDENCE if confidence is None else confidence
    z = norm.ppf(1 - (1 - confidence) / 2)
    sigma = np.sqrt(max(target * (1 - target), 0.0) / max(trials, 1))
    return float(max(tolerance, z * sigma))


@dataclass
class CheatEstimate:
    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    abort_rate: float = 0.0
    check_fail_rate: float = 0.0
    excluded: int = 0
    definite_rate: Optional[float] = None

    def __post_init__(self):
        assert 0 <= self.ci_low <= self.p_hat <= self.ci_high <= 1, (
            "'CheatEstimate' should satisfy 0 <= ci_low <= p_hat <= ci_high <= 1."
        )

    @property
    def scored(self):
        return self.trials - self.excluded

    @property
    def sigma(self):
        if not self.scored:
            return 0.0
        return float(np.sqrt(self.p_hat * (1 - self.p_hat) / self.scored))

    def contains(self, value):
        return self.ci_low <= value <= self.ci_high


def summarize(results, confidence=None):
    """
    Returns the CheatEstimate of trial results. Runs without a useful triple
    are left out of every rate.
    """
    trials = len(results)
    excluded = sum(r.excluded for r in results)
    scored = [r for r in results if not r.excluded]
    successes = sum(r.success for r in scored)
    count = len(scored)
    low, high = wilson_interval(successes, count, confidence)
    definites = [r.definite for r in scored if r.definite is not None]
    return CheatEstimate(
        p_hat=successes / count if count else 0.0,
        trials=trials,
        ci_low=low,
        ci_high=high,
        abort_rate=sum(not r.completed for r in scored) / count if count else 0.0,
        check_fail_rate=sum(r.check_failed for r in scored) / count if count else 0.0,
        excluded=excluded,
        definite_rate=sum(definites) / len(definites) if definites else None,
    )


def run_trials(scenario, indices):
    return [scenario.run_trial(index) for index in indices]


async def estimate_async(scenario, workers=None, confidence=None):
    """
    Returns the CheatEstimate of `scenario`, trials split across `workers`
    threads. Results do not depend on the worker count.
    """
    workers = max(1, min(workers or settings.DEFAULT_WORKERS, scenario.trials))
    chunks = np.array_split(np.arange(scenario.trials), workers)
    logger.info(
        'Estimating %s/%s on %s, %d trials, %d workers',
        scenario.alice, scenario.bob, scenario.protocol, scenario.trials, workers,
    )
    batches = await asyncio.gather(*[
        sync_to_async(run_trials, thread_sensitive=False)(scenario, chunk.tolist())
        for chunk in chunks
    ])
    estimate = summarize([r for batch in batches for r in batch], confidence)
    logger.info('Estimated p_hat=%.6f over %d scored trials', estimate.p_hat, estimate.scored)
    return estimate


def estimate(scenario, workers=None, confidence=None):
    return async_to_sync(estimate_async)(scenario, workers, confidence)


@dataclass
class BoundReport:
    two_pa_plus_pb: float
    vs_general_bound: float
    vs_max_violation: float
    vs_limited_lower: float

    def rows(self):
        return [
            ('general-bound', GENERAL_BOUND, self.vs_general_bound),
            ('max-violation', MAX_VIOLATION, self.vs_max_violation),
            ('limited-lower', LIMITED_LOWER, self.vs_limited_lower),
        ]


def bound_report(pa, pb):
    """
    Returns 2 P_Alice + P_Bob with its signed margins against 2, 3/2 and 5/3.
    """
    pa = pa.p_hat if isinstance(pa, CheatEstimate) else float(pa)
    pb = pb.p_hat if isinstance(pb, CheatEstimate) else float(pb)
    value = 2 * pa + pb
    return BoundReport(
        two_pa_plus_pb=value,
        vs_general_bound=value - GENERAL_BOUND,
        vs_max_violation=value - MAX_VIOLATION,
        vs_limited_lower=value - LIMITED_LOWER,
    )


# Protocol introspection

@dataclass
class HidingReport:
    executions: int
    statistic: float
    p_value: float
    dof: int
    table: list

    def independent(self, significance=0.01):
        return self.p_value >= significance


def hiding_independence_test(trials=10000, k=2, seed=settings.DEFAULT_SEED):
    """
    Returns a chi-square test of the encoding run's bits against the number
    of ones among all other revealed bits, over honest executions.
    """
    table = np.zeros((4, 3), dtype=int)
    executions = 0
    for index in range(trials):
        alice = HonestAlice()
        outcome, transcript = run_protocol_b(
            ProtocolConfig(k=k), alice, HonestBob(), rng=trial_rng(seed, index),
        )
        if not outcome.completed:
            continue
        executions += 1
        x0, x1 = alice.round_bits(outcome.encoding_index)
        ones = sum(
            e.payload['x0'] + e.payload['x1'] for e in transcript.of_type('announce')
            if e.payload['round'] != outcome.encoding_index
        )
        table[2 * x0 + x1, min(ones, 2)] += 1
    observed = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
    statistic, p_value, dof, _ = chi2_contingency(observed)
    return HidingReport(executions, float(statistic), float(p_value), int(dof), table.tolist())


@dataclass
class HelstromReport:
    pairs: int
    samples: int
    max_excess: float
    max_mismatch: float

    @property
    def holds(self):
        return self.max_excess <= settings.ATOL and self.max_mismatch <= settings.ATOL


def measurement_success(rho0, rho1, measurement):
    """
    Returns the success of guessing with `measurement` at equal priors, a
    coin on outcomes labelled None.
    """
    total = 0.0
    for p, label in zip(measurement.operators, measurement.labels):
        w0 = np.trace(p @ rho0.entries).real
        w1 = np.trace(p @ rho1.entries).real
        if label is None:
            total += 0.25 * (w0 + w1)
        else:
            total += 0.5 * (w0 if label == 0 else w1)
    return float(total)


def helstrom_oracle_check(pairs=100, samples=1000, seed=settings.DEFAULT_SEED, dim=3):
    """
    Returns how far sampled two-outcome projective measurements exceed the
    Helstrom optimum and how far the Helstrom measurement misses it.
    """
    rng = get_rng(seed)
    max_excess = -np.inf
    max_mismatch = 0.0
    for _ in range(pairs):
        rho0 = random_density(dim, rng)
        rho1 = random_density(dim, rng)
        optimum = qlin.helstrom_success(rho0, rho1)
        achieved = measurement_success(rho0, rho1, qlin.helstrom_measurement(rho0, rho1))
        max_mismatch = max(max_mismatch, abs(achieved - optimum))
        for _ in range(samples):
            u = random_unitary(dim, rng)
            rank = int(rng.integers(0, dim + 1))
            p0 = u[:, :rank] @ u[:, :rank].conj().T
            success = 0.5 * (np.trace(p0 @ rho0.entries).real + 1 - np.trace(p0 @ rho1.entries).real)
            max_excess = max(max_excess, success - optimum)
    return HelstromReport(pairs, samples, float(max_excess), float(max_mismatch))
