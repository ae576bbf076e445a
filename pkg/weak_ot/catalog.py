"""
Built-in scenarios, one per claim, each producing report rows with a
verdict.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import analysis, settings
from .analysis import CKS_ROUND, PROTOCOL_A, PROTOCOL_B, CheatScenario
from .exceptions import ImproperlyConfigured, UnknownScenario
from .strategies import StrategyRegistry, computational_channel

logger = logging.getLogger(__name__)

PASS = 'PASS'
FAIL = 'FAIL'
INFO = 'INFO'


@dataclass
class ResultRow:
    scenario: str
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    target: Optional[float] = None
    margin: Optional[float] = None
    verdict: str = INFO

    def to_payload(self):
        return asdict(self)


class Scenario:
    # You should override
    name = None

    # You may override
    description = ''
    trials = 1000
    tolerance = 0.0
    k = 1
    takes_strategies = False

    def __init__(self, trials=None, seed=None, k=None, tolerance=None, workers=None, **params):
        if params and not self.takes_strategies:
            raise ImproperlyConfigured(
                "'{name}' does not take strategy options ({keys}), only 'custom' does.".format(
                    name=self.name,
                    keys=', '.join(sorted(params)),
                )
            )
        self.trials = self.trials if trials is None else int(trials)
        self.seed = settings.DEFAULT_SEED if seed is None else int(seed)
        self.k = self.k if k is None else int(k)
        self.tolerance = self.tolerance if tolerance is None else float(tolerance)
        self.workers = workers
        self.params = params
        if self.trials < 1:
            raise ImproperlyConfigured("'trials' should be at least 1.")
        if self.k < 1:
            raise ImproperlyConfigured("'k' should be at least 1.")

    def run(self):
        raise NotImplementedError

    @property
    def n(self):
        return 3 * self.k

    def label(self, suffix=None):
        return self.name if suffix is None else '{name}:{suffix}'.format(name=self.name, suffix=suffix)

    def estimate(self, **params):
        params.setdefault('trials', self.trials)
        params.setdefault('seed', self.seed)
        return analysis.estimate(CheatScenario(**params), self.workers)

    # Rows

    def estimate_row(self, estimate, target, tolerance=None, suffix=None, trials=None):
        """
        Returns a row passing when the estimate lies within the tolerance of
        `target`, widened to the binomial spread at the scored trial count.
        """
        tolerance = self.tolerance if tolerance is None else tolerance
        allowed = analysis.verdict_tolerance(target, estimate.scored, tolerance)
        margin = estimate.p_hat - target
        return ResultRow(
            scenario=self.label(suffix),
            trials=estimate.trials if trials is None else trials,
            p_hat=estimate.p_hat,
            ci_low=estimate.ci_low,
            ci_high=estimate.ci_high,
            target=target,
            margin=margin,
            verdict=PASS if abs(margin) <= allowed else FAIL,
        )

    def exact_row(self, value, target, tolerance, suffix=None, trials=0, passed=None):
        margin = value - target
        if passed is None:
            passed = abs(margin) <= tolerance
        return ResultRow(
            scenario=self.label(suffix),
            trials=trials,
            p_hat=value,
            ci_low=value,
            ci_high=value,
            target=target,
            margin=margin,
            verdict=PASS if passed else FAIL,
        )

    def info_row(self, estimate, target=None, suffix=None):
        return ResultRow(
            scenario=self.label(suffix),
            trials=estimate.trials,
            p_hat=estimate.p_hat,
            ci_low=estimate.ci_low,
            ci_high=estimate.ci_high,
            target=target,
            margin=None if target is None else estimate.p_hat - target,
            verdict=INFO,
        )

    def bound_rows(self, pa, pb, passed=None, target=analysis.LIMITED_LOWER):
        """
        Returns the 2 P_Alice + P_Bob row against `target` and informational
        rows against 2, 3/2 and 5/3.
        """
        report = analysis.bound_report(pa, pb)
        low = 2 * pa.ci_low + pb.ci_low
        high = 2 * pa.ci_high + pb.ci_high
        rows = []
        if passed is not None:
            rows.append(ResultRow(
                scenario=self.label('two-pa-plus-pb'),
                trials=pa.trials + pb.trials,
                p_hat=report.two_pa_plus_pb,
                ci_low=low,
                ci_high=high,
                target=target,
                margin=report.two_pa_plus_pb - target,
                verdict=PASS if passed else FAIL,
            ))
        for name, bound, margin in report.rows():
            rows.append(ResultRow(
                scenario=self.label('vs-' + name),
                trials=pa.trials + pb.trials,
                p_hat=report.two_pa_plus_pb,
                ci_low=low,
                ci_high=high,
                target=bound,
                margin=margin,
                verdict=INFO,
            ))
        return rows


class ScenarioRegistry(StrategyRegistry):

    def get(self, name):
        try:
            return self._registry[name]
        except KeyError:
            raise UnknownScenario(
                "Unknown scenario '{name}', choose one of {names}.".format(
                    name=name,
                    names=', '.join(self.names()),
                )
            )


class CheatEstimateView:
    """
    Another rate over the same scored trials as `estimate`.
    """

    def __init__(self, estimate, p_hat):
        self.trials = estimate.trials
        self.scored = estimate.scored
        self.p_hat = p_hat
        self.ci_low, self.ci_high = analysis.wilson_interval(round(p_hat * self.scored), self.scored)


# Scenarios

class HonestCompleteness(Scenario):
    name = 'honest-completeness'
    description = 'Honest Protocol B: Bob always decodes, aborts only without a useful triple.'
    trials = 10000
    k = 4

    def run(self):
        estimate = self.estimate(protocol=PROTOCOL_B, k=self.k, score='correct')
        correct = self.exact_row(
            estimate.p_hat, 1.0, 0.0,
            suffix='bob-correct',
            trials=estimate.trials,
            passed=estimate.p_hat == 1.0 and estimate.abort_rate == 0.0,
        )
        target = analysis.no_useful_probability(self.k)
        rate = estimate.excluded / estimate.trials
        low, high = analysis.wilson_interval(estimate.excluded, estimate.trials)
        allowed = max(self.tolerance, 3 * np.sqrt(target * (1 - target) / estimate.trials))
        no_useful = ResultRow(
            scenario=self.label('no-useful-rate'),
            trials=estimate.trials,
            p_hat=rate,
            ci_low=low,
            ci_high=high,
            target=target,
            margin=rate - target,
            verdict=PASS if abs(rate - target) <= allowed else FAIL,
        )
        return [correct, no_useful]


class CksBasisAttack(Scenario):
    name = 'cks-basis-attack'
    description = 'Computational-basis measurement on a bare round: P_Alice = 3/4, no aborts.'
    trials = 100000
    tolerance = 0.01

    def run(self):
        estimate = self.estimate(protocol=CKS_ROUND, alice='basis-attack')
        row = self.estimate_row(estimate, analysis.basis_attack_exact())
        if estimate.abort_rate:
            row.verdict = FAIL
        aborts = self.exact_row(
            estimate.abort_rate, 0.0, 0.0, suffix='abort-rate', trials=estimate.trials,
        )
        return [row, aborts]


class CksBoundQuantities(Scenario):
    name = 'cks-bound-quantities'
    description = 'Delta = 0 and F = 4 on the states Bob holds after a round.'

    def run(self):
        states = analysis.cks_bob_states()
        delta = analysis.delta_quantity(states)
        f = analysis.f_quantity(states)
        return [
            self.exact_row(delta, 0.0, settings.EXACT_ATOL, suffix='delta'),
            self.exact_row(f, 4.0, settings.ATOL, suffix='f'),
            self.exact_row(analysis.p_bob_bound(delta), 0.5, settings.EXACT_ATOL, suffix='p-bob-bound'),
            self.exact_row(analysis.p_alice_bound(f), 0.75, settings.ATOL, suffix='p-alice-bound'),
        ]


class Theorem1Sweep(Scenario):
    name = 'theorem1-sweep'
    description = "Random reliable attacks leave Alice's view independent of b."

    def run(self):
        sweep = analysis.theorem1_sweep(self.trials, self.seed)
        rate = sweep.counterexamples / sweep.specs
        return [
            self.exact_row(rate, 0.0, 0.0, suffix='counterexamples', trials=sweep.specs),
            self.exact_row(
                sweep.max_view_distance, 0.0, settings.THEOREM_ATOL,
                suffix='max-view-distance', trials=sweep.specs,
            ),
            ResultRow(
                scenario=self.label('max-pre-measurement-distance'),
                trials=sweep.specs,
                p_hat=sweep.max_pre_measurement_distance,
                ci_low=sweep.max_pre_measurement_distance,
                ci_high=sweep.max_pre_measurement_distance,
            ),
        ]


class CollectiveTriple(Scenario):
    name = 'collective-triple'
    description = 'Control qubits over all string pairs: checks pass, P_Alice = 3/4.'
    trials = 20000
    tolerance = 0.01
    k = 4

    def run(self):
        estimate = self.estimate(protocol=PROTOCOL_B, k=self.k, alice='collective-triple')
        definite = CheatEstimateView(estimate, estimate.definite_rate or 0.0)
        return [
            self.estimate_row(estimate, 0.75),
            self.exact_row(
                estimate.check_fail_rate, 0.0, 0.0,
                suffix='check-fail-rate', trials=estimate.trials,
            ),
            self.estimate_row(definite, 0.5, tolerance=0.015, suffix='definite-b'),
        ]


class LimitedCollectiveOnePair(Scenario):
    name = 'limited-collective-one-pair'
    description = 'One quantum run per triple: 5/3 <= 2 P_Alice + P_Bob < 2.'
    trials = 20000
    tolerance = 0.02
    k = 4

    def run(self):
        pa = self.estimate(protocol=PROTOCOL_B, k=self.k, alice='one-pair')
        pb = self.estimate(protocol=PROTOCOL_B, k=self.k, bob='curious', score='bob', seed=self.seed + 1)
        value = 2 * pa.p_hat + pb.p_hat
        formula = analysis.collective_formula(1 / 3, 1)
        passed = analysis.LIMITED_LOWER - self.tolerance <= value < analysis.GENERAL_BOUND
        return [
            self.estimate_row(pa, analysis.one_pair_exact(), tolerance=0.0, suffix='p-alice'),
            self.estimate_row(pb, 0.5, tolerance=0.0, suffix='p-bob'),
            self.info_row(pa, formula, suffix='collective-formula'),
        ] + self.bound_rows(pa, pb, passed=passed)


class IndividualChannel(Scenario):
    """
    Computational-basis measurement on one random run, zeros announced.
    """
    description = 'Single cheated run: P_Alice follows the decomposition, never above 1/2 + 1/(4n).'
    trials = 20000

    def channel_estimate(self):
        return self.estimate(
            protocol=PROTOCOL_B,
            k=self.k,
            alice='channel-attack',
            alice_params={'channel': 'computational', 'cheat_count': 1, 'announce_rule': 'zeros'},
        )

    def target(self):
        eps = analysis.epsilon_exact(computational_channel(), 'zeros')
        return analysis.p_decomposition(1 / self.n, self.n, eps).combined

    def run(self):
        estimate = self.channel_estimate()
        bound = 0.5 + 1 / (4 * self.n)
        below = estimate.p_hat <= bound + 3 * np.sqrt(bound * (1 - bound) / estimate.scored)
        return [
            self.estimate_row(estimate, self.target()),
            self.exact_row(
                estimate.p_hat, bound, 0.0,
                suffix='individual-bound',
                trials=estimate.trials,
                passed=below,
            ),
        ]


class IndividualChannelN3(IndividualChannel):
    name = 'individual-channel-n3'
    k = 1


class IndividualChannelN15(IndividualChannel):
    name = 'individual-channel-n15'
    k = 5


class IndividualChannelN30(IndividualChannel):
    name = 'individual-channel-n30'
    k = 10


class MaximalViolation(IndividualChannel):
    name = 'maximal-violation'
    description = 'Best of honest guessing and one cheated run at n = 30 with a curious Bob: about 3/2.'
    k = 10
    limit = 1.52

    def run(self):
        honest = self.estimate(protocol=PROTOCOL_B, k=self.k)
        channel = self.channel_estimate()
        pa = max(honest, channel, key=lambda e: e.p_hat)
        pb = self.estimate(protocol=PROTOCOL_B, k=self.k, bob='curious', score='bob', seed=self.seed + 1)
        value = 2 * pa.p_hat + pb.p_hat
        return [
            self.info_row(honest, 0.5, suffix='p-alice-honest'),
            self.info_row(channel, self.target(), suffix='p-alice-channel'),
            self.info_row(pb, 0.5, suffix='p-bob'),
        ] + self.bound_rows(pa, pb, passed=value <= self.limit, target=analysis.MAX_VIOLATION)


class FuchsVdg(Scenario):
    name = 'fuchs-vdg'
    description = 'Fidelity and trace distance inequalities on random density pairs.'

    def run(self):
        violations = analysis.fuchs_vdg_sweep(self.trials, self.seed)
        return [self.exact_row(violations / self.trials, 0.0, 0.0, suffix='violations', trials=self.trials)]


class HelstromOracle(Scenario):
    name = 'helstrom-oracle'
    description = 'No sampled measurement beats the Helstrom optimum, which is attained.'
    trials = 100
    samples = 1000

    def run(self):
        report = analysis.helstrom_oracle_check(self.trials, self.samples, self.seed)
        return [
            self.exact_row(
                max(report.max_excess, 0.0), 0.0, settings.ATOL,
                suffix='max-excess', trials=report.pairs * report.samples,
            ),
            self.exact_row(
                report.max_mismatch, 0.0, settings.ATOL,
                suffix='max-mismatch', trials=report.pairs,
            ),
        ]


class Determinism(Scenario):
    name = 'determinism'
    description = 'Estimates do not depend on the worker count.'
    trials = 2000

    def run(self):
        scenario = CheatScenario(
            protocol=PROTOCOL_B,
            k=2,
            alice='basis-attack',
            trials=self.trials,
            seed=self.seed,
        )
        estimates = [analysis.estimate(scenario, workers) for workers in (1, 2, 5)]
        identical = all(e == estimates[0] for e in estimates[1:])
        return [self.exact_row(
            1.0 if identical else 0.0, 1.0, 0.0,
            suffix='identical', trials=self.trials, passed=identical,
        )]


class ProtocolAHonest(Scenario):
    name = 'protocol-a-honest'
    description = 'Protocol A with all 3-bit strings, two checked runs: Bob always decodes.'

    def run(self):
        estimate = self.estimate(
            protocol=PROTOCOL_A,
            codewords=['000', '001', '010', '011', '100', '101', '110', '111'],
            m=2,
            score='correct',
        )
        return [self.exact_row(
            estimate.p_hat, 1.0, 0.0,
            suffix='bob-correct',
            trials=estimate.trials,
            passed=estimate.p_hat == 1.0,
        )]


class Custom(Scenario):
    name = 'custom'
    description = 'Protocol B with the strategies given on the command line.'
    takes_strategies = True

    def run(self):
        params = dict(self.params)
        score = params.pop('score', 'alice')
        estimate = self.estimate(protocol=PROTOCOL_B, k=self.k, score=score, **params)
        return [self.info_row(estimate, suffix=score)]


scenarios = ScenarioRegistry(Scenario)
scenarios.register(
    HonestCompleteness,
    CksBasisAttack,
    CksBoundQuantities,
    Theorem1Sweep,
    CollectiveTriple,
    LimitedCollectiveOnePair,
    IndividualChannelN3,
    IndividualChannelN15,
    IndividualChannelN30,
    MaximalViolation,
    FuchsVdg,
    HelstromOracle,
    Determinism,
    ProtocolAHonest,
    Custom,
)


def run_scenario(name, **overrides):
    """
    Returns the report rows of the scenario registered under `name`.
    """
    scenario = scenarios.create(name, **overrides)
    logger.info('Running scenario %s', name)
    rows = scenario.run()
    for row in rows:
        if row.verdict != INFO:
            logger.info('%s: %s', row.scenario, row.verdict)
    return rows
