"""
Shared quantum state of one protocol execution.

The global state is a tensor product of pure factors. Every subsystem has a
handle owned by one party and only that party may operate on it; sending a
qutrit is an ownership transfer.
"""
import itertools
import logging

import numpy as np

from . import qlin
from .exceptions import DimensionMismatch, OwnershipError, StaleHandle

logger = logging.getLogger(__name__)

ALICE = 'alice'
BOB = 'bob'
PARTIES = (ALICE, BOB)


class SubsystemHandle:
    """
    Opaque reference to one subsystem of a registry.
    """

    def __init__(self, registry, id, dim, owner, label=None):
        self.registry = registry
        self.id = id
        self.dim = dim
        self.owner = owner
        self.label = label
        self.alive = True

    def __repr__(self):
        return '<SubsystemHandle {id} {label} dim={dim} owner={owner}{dead}>'.format(
            id=self.id,
            label=self.label or '',
            dim=self.dim,
            owner=self.owner,
            dead='' if self.alive else ' discarded',
        )


class StateFactor:

    def __init__(self, handles, state):
        if tuple(h.dim for h in handles) != state.dims:
            raise DimensionMismatch(
                'Handle dims {handles} do not match state dims {state}.'.format(
                    handles=tuple(h.dim for h in handles),
                    state=state.dims,
                )
            )
        self.handles = list(handles)
        self.state = state

    def __repr__(self):
        return '<StateFactor {labels}>'.format(
            labels=[h.label or h.id for h in self.handles],
        )

    @property
    def dim(self):
        return self.state.layout.total_dim

    def positions(self, handles):
        return [self.handles.index(h) for h in handles]


class Registry:
    """
    Holds the disjoint pure factors and the ownership of their subsystems.
    """

    def __init__(self):
        self._ids = itertools.count()
        self._factors = {}

    def __repr__(self):
        return '<Registry factors={count}>'.format(count=len(self.factors))

    @property
    def factors(self):
        unique = {id(f): f for f in self._factors.values()}
        return list(unique.values())

    def factor_of(self, handle):
        self._check_live(handle)
        return self._factors[handle.id]

    # Checks

    def _check_live(self, handle):
        if handle.registry is not self:
            raise StaleHandle('{handle!r} belongs to another registry.'.format(handle=handle))
        if not handle.alive:
            raise StaleHandle('{handle!r} was discarded.'.format(handle=handle))

    def _check_owner(self, party, handles):
        if party not in PARTIES:
            raise ValueError("'party' should be one of {parties}.".format(parties=PARTIES))
        for handle in handles:
            self._check_live(handle)
            if handle.owner != party:
                raise OwnershipError(
                    "'{party}' does not own {handle!r}.".format(
                        party=party,
                        handle=handle,
                    )
                )
        if len({h.id for h in handles}) != len(handles):
            raise DimensionMismatch('Target handles should be distinct.')

    # Factor bookkeeping

    def _set_factor(self, factor):
        for handle in factor.handles:
            self._factors[handle.id] = factor

    def _merge(self, handles):
        """
        Returns the single factor holding all `handles`, merging lazily.
        """
        factors = []
        for handle in handles:
            factor = self._factors[handle.id]
            if all(f is not factor for f in factors):
                factors.append(factor)
        if len(factors) == 1:
            return factors[0]
        merged_handles = list(factors[0].handles)
        state = factors[0].state
        for factor in factors[1:]:
            merged_handles.extend(factor.handles)
            state = qlin.tensor(state, factor.state)
        merged = StateFactor(merged_handles, state)
        self._set_factor(merged)
        logger.debug('Merged %d factors into dim %d', len(factors), merged.dim)
        return merged

    def _split(self, factor, handles):
        """
        Splits `handles` off `factor` when they are in a product state with
        the rest. Returns the new factor or None.
        """
        if len(handles) == len(factor.handles):
            return factor
        positions = factor.positions(handles)
        parts = qlin.schmidt_split(factor.state, positions)
        if parts is None:
            return None
        target_state, rest_state = parts
        rest = [h for h in factor.handles if h not in handles]
        target_factor = StateFactor(handles, target_state)
        self._set_factor(target_factor)
        self._set_factor(StateFactor(rest, rest_state))
        logger.debug('Split dim %d off a factor of dim %d', target_factor.dim, factor.dim)
        return target_factor

    # Operations

    def alloc(self, owner, state, dims=None, labels=None):
        """
        Returns handles for a new factor holding `state`, owned by `owner`.
        """
        if owner not in PARTIES:
            raise ValueError("'owner' should be one of {parties}.".format(parties=PARTIES))
        if not isinstance(state, qlin.StateVector):
            state = qlin.StateVector(state, dims)
        if dims is not None and tuple(dims) != state.dims:
            raise DimensionMismatch(
                'Dims {dims} do not match state dims {state}.'.format(
                    dims=tuple(dims),
                    state=state.dims,
                )
            )
        labels = labels or [None] * len(state.dims)
        handles = [
            SubsystemHandle(self, next(self._ids), dim, owner, label)
            for dim, label in zip(state.dims, labels)
        ]
        self._set_factor(StateFactor(handles, state))
        return handles

    def transfer(self, party, handle, to):
        self._check_owner(party, [handle])
        if to not in PARTIES:
            raise ValueError("'to' should be one of {parties}.".format(parties=PARTIES))
        handle.owner = to

    def apply_local(self, party, op, targets, rng=None):
        """
        Applies `op` on `targets` on behalf of `party`.

        `op` is an Operator, a ProjectiveMeasurement or a sequence of Kraus
        operators. Measurements return the outcome index, operators None.
        """
        targets = list(targets)
        self._check_owner(party, targets)
        factor = self._merge(targets)
        positions = factor.positions(targets)
        if isinstance(op, qlin.ProjectiveMeasurement):
            outcome, post, _ = qlin.measure_projective(factor.state, op, rng, positions)
        elif isinstance(op, qlin.Operator):
            factor.state = qlin.apply_on_subsystems(factor.state, op, positions)
            return None
        else:
            outcome, post, _ = qlin.measure_kraus(factor.state, list(op), rng, positions)
        factor.state = post
        self._split(factor, targets)
        return outcome

    def measure(self, party, measurement, targets, rng):
        return self.apply_local(party, measurement, targets, rng)

    def discard(self, party, handles, rng=None):
        """
        Removes `handles` from the global state and invalidates them.

        Subsystems in a product state with the rest of their factor are
        split off exactly; otherwise an unrecorded computational-basis
        measurement selects the surviving branch first.
        """
        handles = list(handles)
        self._check_owner(party, handles)
        factor = self._merge(handles)
        if self._split(factor, handles) is None:
            if rng is None:
                raise ValueError("'rng' is required to discard entangled subsystems.")
            measurement = qlin.computational_basis([h.dim for h in handles])
            positions = factor.positions(handles)
            _, factor.state, _ = qlin.measure_projective(factor.state, measurement, rng, positions)
            self._split(factor, handles)
        for handle in handles:
            del self._factors[handle.id]
            handle.alive = False

    def reduced_state(self, handles):
        """
        Returns the density matrix of `handles`, in the given order.

        Introspection only, strategies never call it during a run.
        """
        handles = list(handles)
        for handle in handles:
            self._check_live(handle)
        if len({h.id for h in handles}) != len(handles):
            raise DimensionMismatch('Handles should be distinct.')
        order = []
        rho = None
        groups = {}
        for handle in handles:
            groups.setdefault(id(self._factors[handle.id]), []).append(handle)
        for group in groups.values():
            factor = self._factors[group[0].id]
            part = qlin.reduced_pure(factor.state, factor.positions(group))
            rho = part if rho is None else qlin.tensor(rho, part)
            order.extend(group)
        permutation = [order.index(h) for h in handles]
        if permutation == list(range(len(handles))):
            return rho
        return qlin.partial_trace(rho, permutation)

    def state_of(self, handles):
        """
        Returns the pure state of `handles` if they form a whole factor.
        """
        handles = list(handles)
        for handle in handles:
            self._check_live(handle)
        factor = self._merge(handles) if handles else None
        if factor is None or len(factor.handles) != len(handles):
            return None
        permutation = factor.positions(handles)
        amps = np.moveaxis(
            factor.state.amps.reshape(factor.state.dims),
            permutation,
            tuple(range(len(handles))),
        ).reshape(-1)
        return qlin.StateVector(amps, [h.dim for h in handles])

    def largest_factor_dim(self):
        return max((f.dim for f in self.factors), default=0)
