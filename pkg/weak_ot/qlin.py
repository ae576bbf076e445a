"""
Dense complex linear algebra over small composite Hilbert spaces.

Basis ordering is big-endian mixed radix: for dims (d0, d1, ..., dk) the
basis index of digits (i0, i1, ..., ik) is ((i0 * d1 + i1) * d2 + ...).
All values wrap complex128 numpy arrays and are read-only after
construction.
"""
import numpy as np
from scipy.linalg import svdvals

from . import settings
from .exceptions import (
    DimensionMismatch, InvalidOperator, InvalidState, NotHermitian
)

UNITARY = 'unitary'
PROJECTOR = 'projector'
KRAUS = 'kraus'
HERMITIAN = 'hermitian'
GENERIC = 'generic'

OPERATOR_KINDS = (UNITARY, PROJECTOR, KRAUS, HERMITIAN, GENERIC)


def _frozen(array, error):
    array = np.array(array, dtype=np.complex128)
    if not np.all(np.isfinite(array)):
        raise error('Amplitudes and entries should be finite.')
    array.setflags(write=False)
    return array


class SubsystemLayout:
    """
    Ordered per-subsystem dimensions of a composite space.
    """

    def __init__(self, dims):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 2 for d in dims):
            raise DimensionMismatch(
                'Every subsystem should have dimension >= 2, got {dims}.'.format(
                    dims=dims,
                )
            )
        self.dims = dims
        self.total_dim = int(np.prod(dims))

    def __len__(self):
        return len(self.dims)

    def __eq__(self, other):
        return isinstance(other, SubsystemLayout) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    def __repr__(self):
        return 'SubsystemLayout{dims}'.format(dims=self.dims)

    def digits(self, index):
        return tuple(int(d) for d in np.unravel_index(index, self.dims))

    def index(self, digits):
        return int(np.ravel_multi_index(tuple(digits), self.dims))

    def check_targets(self, targets):
        targets = tuple(int(t) for t in targets)
        if not targets:
            raise DimensionMismatch('At least one target subsystem is required.')
        if len(set(targets)) != len(targets):
            raise DimensionMismatch(
                'Targets should be distinct, got {targets}.'.format(
                    targets=targets,
                )
            )
        for target in targets:
            if not 0 <= target < len(self.dims):
                raise DimensionMismatch(
                    'Target {target} is out of range for {layout!r}.'.format(
                        target=target,
                        layout=self,
                    )
                )
        return targets

    def target_dim(self, targets):
        return int(np.prod([self.dims[t] for t in targets]))


def as_layout(dims):
    if isinstance(dims, SubsystemLayout):
        return dims
    if isinstance(dims, int):
        return SubsystemLayout((dims,))
    return SubsystemLayout(dims)


class StateVector:
    """
    A pure state over a layout.

    `probability` is 1 for normalized states. Branches produced by applying a
    non-unitary operator carry their squared norm there while `amps` stays
    normalized.
    """

    def __init__(self, amps, dims=None, probability=1.0):
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        self.layout = as_layout(dims if dims is not None else amps.shape[0])
        if amps.shape[0] != self.layout.total_dim:
            raise DimensionMismatch(
                'Expected {expected} amplitudes for {layout!r}, got {got}.'.format(
                    expected=self.layout.total_dim,
                    layout=self.layout,
                    got=amps.shape[0],
                )
            )
        self.amps = _frozen(amps, InvalidState)
        norm = np.vdot(self.amps, self.amps).real
        if abs(norm - 1) > settings.ATOL:
            raise InvalidState(
                'State should be normalized, squared norm is {norm}.'.format(
                    norm=norm,
                )
            )
        self.probability = float(probability)

    @classmethod
    def from_amplitudes(cls, amps, dims=None):
        """
        Returns `amps` scaled to unit norm as a state of probability 1.
        """
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        norm = np.vdot(amps, amps).real
        if norm <= settings.EXACT_ATOL:
            raise InvalidState('Cannot normalize a zero vector.')
        return cls(amps / np.sqrt(norm), dims)

    @classmethod
    def normalized(cls, amps, dims=None, probability=1.0):
        """
        Returns the normalized branch of `amps`, multiplying its squared
        norm into `probability`.
        """
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        norm = np.vdot(amps, amps).real
        if norm <= settings.EXACT_ATOL:
            raise InvalidState('Cannot normalize a zero vector.')
        return cls(amps / np.sqrt(norm), dims, probability * norm)

    @property
    def dims(self):
        return self.layout.dims

    def __repr__(self):
        return 'StateVector(dims={dims})'.format(dims=self.dims)

    def overlap(self, other):
        return complex(np.vdot(self.amps, other.amps))

    def equals(self, other, atol=None, up_to_phase=True):
        if self.layout != other.layout:
            return False
        atol = settings.ATOL if atol is None else atol
        if up_to_phase:
            return abs(abs(self.overlap(other)) - 1) <= atol
        return bool(np.allclose(self.amps, other.amps, atol=atol))

    def density(self):
        return DensityMatrix(np.outer(self.amps, self.amps.conj()), self.layout)


class DensityMatrix:

    def __init__(self, entries, dims=None):
        entries = np.asarray(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch('Density matrix should be square.')
        self.layout = as_layout(dims if dims is not None else entries.shape[0])
        if entries.shape[0] != self.layout.total_dim:
            raise DimensionMismatch(
                'Density matrix of size {size} does not fit {layout!r}.'.format(
                    size=entries.shape[0],
                    layout=self.layout,
                )
            )
        check_hermitian(entries)
        trace = np.trace(entries).real
        if abs(trace - 1) > settings.ATOL:
            raise InvalidState(
                'Density matrix should have unit trace, got {trace}.'.format(
                    trace=trace,
                )
            )
        entries = (entries + entries.conj().T) / 2
        if np.linalg.eigvalsh(entries)[0] < -settings.ATOL:
            raise InvalidState('Density matrix should be positive semidefinite.')
        self.entries = _frozen(entries, InvalidState)

    @property
    def dims(self):
        return self.layout.dims

    def __repr__(self):
        return 'DensityMatrix(dims={dims})'.format(dims=self.dims)

    def __sub__(self, other):
        check_same_layout(self, other)
        return Operator(self.entries - other.entries, self.layout, HERMITIAN)

    def purity(self):
        return float(np.trace(self.entries @ self.entries).real)


class Operator:
    """
    A square matrix over a layout, validated once against its kind.
    """

    def __init__(self, matrix, dims=None, kind=GENERIC):
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch('Operator should be a square matrix.')
        if kind not in OPERATOR_KINDS:
            raise ValueError(
                "'kind' should be one of {kinds}, got {kind!r}.".format(
                    kinds=OPERATOR_KINDS,
                    kind=kind,
                )
            )
        self.layout = as_layout(dims if dims is not None else matrix.shape[0])
        if matrix.shape[0] != self.layout.total_dim:
            raise DimensionMismatch(
                'Operator of size {size} does not fit {layout!r}.'.format(
                    size=matrix.shape[0],
                    layout=self.layout,
                )
            )
        self.matrix = _frozen(matrix, InvalidOperator)
        self.kind = kind
        self.validate()

    @property
    def dims(self):
        return self.layout.dims

    @property
    def dim(self):
        return self.layout.total_dim

    def __repr__(self):
        return 'Operator(kind={kind}, dims={dims})'.format(
            kind=self.kind,
            dims=self.dims,
        )

    def validate(self):
        matrix = self.matrix
        identity = np.eye(self.dim)
        if self.kind == UNITARY:
            if not np.allclose(matrix.conj().T @ matrix, identity,
                               atol=settings.ATOL, rtol=0):
                raise InvalidOperator('Operator of kind unitary is not unitary.')
        elif self.kind == PROJECTOR:
            check_hermitian(matrix)
            if not np.allclose(matrix @ matrix, matrix,
                               atol=settings.ATOL, rtol=0):
                raise InvalidOperator('Operator of kind projector is not idempotent.')
        elif self.kind == HERMITIAN:
            check_hermitian(matrix)


def check_hermitian(matrix):
    matrix = np.asarray(matrix)
    deviation = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0
    if deviation > settings.ATOL:
        raise NotHermitian(
            'Matrix should be Hermitian, deviation is {deviation}.'.format(
                deviation=deviation,
            )
        )


def check_same_layout(a, b):
    if a.layout != b.layout:
        raise DimensionMismatch(
            'Layouts differ: {a!r} and {b!r}.'.format(a=a.layout, b=b.layout)
        )


def as_matrix(op):
    if isinstance(op, (Operator, DensityMatrix)):
        return op.matrix if isinstance(op, Operator) else op.entries
    return np.asarray(op, dtype=np.complex128)


# Constructors

def ket(digits, dims):
    """
    Returns the computational basis state with the given digits.
    """
    layout = as_layout(dims)
    if isinstance(digits, int):
        digits = (digits,)
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[layout.index(digits)] = 1
    return StateVector(amps, layout)


def superposition(terms, dims):
    """
    Returns the normalized sum of `coefficient * |digits>` over `terms`.
    """
    layout = as_layout(dims)
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    for coefficient, digits in terms:
        if isinstance(digits, int):
            digits = (digits,)
        amps[layout.index(digits)] += coefficient
    return StateVector.from_amplitudes(amps, layout)


def projector(state):
    return Operator(np.outer(state.amps, state.amps.conj()), state.layout, PROJECTOR)


def identity(dims):
    layout = as_layout(dims)
    return Operator(np.eye(layout.total_dim), layout, UNITARY)


def computational_basis(dims):
    layout = as_layout(dims)
    return ProjectiveMeasurement(
        [projector(ket(layout.digits(i), layout)) for i in range(layout.total_dim)]
    )


def plus_minus_basis():
    """
    Returns the {|+>, |->} measurement of a qubit, labels 0 for + and 1 for -.
    """
    plus = superposition([(1, 0), (1, 1)], 2)
    minus = superposition([(1, 0), (-1, 1)], 2)
    return ProjectiveMeasurement([projector(plus), projector(minus)], labels=[0, 1])


# Composition

def tensor(a, b):
    """
    Returns the tensor product of two values of the same kind.
    """
    if type(a) is not type(b):
        raise TypeError(
            "'tensor' should be called with operands of the same kind, got "
            "'{a}' and '{b}'.".format(a=type(a).__name__, b=type(b).__name__)
        )
    dims = a.dims + b.dims
    if isinstance(a, StateVector):
        return StateVector(np.kron(a.amps, b.amps), dims, a.probability * b.probability)
    if isinstance(a, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries), dims)
    if isinstance(a, Operator):
        kind = a.kind if a.kind == b.kind and a.kind != KRAUS else GENERIC
        return Operator(np.kron(a.matrix, b.matrix), dims, kind)
    raise TypeError("'{name}' cannot be tensored.".format(name=type(a).__name__))


def apply_matrix(array, dims, matrix, targets):
    """
    Returns `matrix` applied on `targets` of the leading axis of `array`.

    `array` has shape (total_dim,) or (total_dim, batch).
    """
    dims = tuple(dims)
    targets = tuple(targets)
    batch = array.shape[1:]
    n = len(dims)
    tensor_ = array.reshape(dims + batch)
    tensor_ = np.moveaxis(tensor_, targets, tuple(range(len(targets))))
    moved_shape = tensor_.shape
    target_dim = int(np.prod([dims[t] for t in targets]))
    tensor_ = matrix @ tensor_.reshape(target_dim, -1)
    tensor_ = np.moveaxis(tensor_.reshape(moved_shape), tuple(range(len(targets))), targets)
    return tensor_.reshape((int(np.prod(dims[:n])),) + batch)


def _check_op_fits(layout, op, targets):
    targets = layout.check_targets(targets)
    dim = as_matrix(op).shape[0]
    if dim != layout.target_dim(targets):
        raise DimensionMismatch(
            'Operator of size {dim} does not fit targets {targets} of '
            '{layout!r}.'.format(dim=dim, targets=targets, layout=layout)
        )
    return targets


def apply_on_subsystems(state, op, targets):
    """
    Returns `op` applied to the `targets` subsystems of `state`.

    Non-unitary operators yield a normalized branch whose squared norm is
    multiplied into `probability`.
    """
    targets = _check_op_fits(state.layout, op, targets)
    amps = apply_matrix(state.amps, state.dims, as_matrix(op), targets)
    if isinstance(op, Operator) and op.kind == UNITARY:
        return StateVector(amps, state.layout, state.probability)
    return StateVector.normalized(amps, state.layout, state.probability)


def apply_kraus(rho, kraus_ops, targets):
    """
    Returns the sum of K rho K^dagger over `kraus_ops` acting on `targets`.
    """
    check_kraus_completeness(kraus_ops)
    targets = _check_op_fits(rho.layout, kraus_ops[0], targets)
    result = np.zeros_like(rho.entries)
    for op in kraus_ops:
        matrix = as_matrix(op)
        half = apply_matrix(rho.entries, rho.dims, matrix, targets)
        result = result + apply_matrix(half.conj().T, rho.dims, matrix, targets).conj().T
    return DensityMatrix(result, rho.layout)


def check_kraus_completeness(kraus_ops):
    if not kraus_ops:
        raise InvalidOperator('A Kraus family should contain at least one operator.')
    matrices = [as_matrix(op) for op in kraus_ops]
    dim = matrices[0].shape[0]
    if any(m.shape != (dim, dim) for m in matrices):
        raise DimensionMismatch('Kraus operators should share one square shape.')
    total = sum(m.conj().T @ m for m in matrices)
    if not np.allclose(total, np.eye(dim), atol=settings.ATOL, rtol=0):
        raise InvalidOperator('Kraus family is not complete.')


def partial_trace(rho, keep):
    """
    Returns the reduced density matrix on `keep`, in the given order.
    """
    keep = rho.layout.check_targets(keep)
    dims = rho.dims
    n = len(dims)
    rows = list(range(n))
    cols = [i if i not in keep else n + i for i in range(n)]
    out = list(keep) + [n + i for i in keep]
    reduced = np.einsum(
        rho.entries.reshape(dims + dims), rows + cols, out,
    )
    dim = rho.layout.target_dim(keep)
    return DensityMatrix(reduced.reshape(dim, dim), [dims[i] for i in keep])


def reduced_pure(state, keep):
    """
    Returns the reduced density matrix of a pure state on `keep`.
    """
    keep = state.layout.check_targets(keep)
    dims = state.dims
    moved = np.moveaxis(state.amps.reshape(dims), keep, tuple(range(len(keep))))
    dim = state.layout.target_dim(keep)
    matrix = moved.reshape(dim, -1)
    return DensityMatrix(matrix @ matrix.conj().T, [dims[i] for i in keep])


def schmidt_split(state, targets, atol=None):
    """
    Returns (target state, rest state) if `state` is a product across
    `targets` and the remaining subsystems, else None.
    """
    targets = state.layout.check_targets(targets)
    rest = tuple(i for i in range(len(state.dims)) if i not in targets)
    if not rest:
        return None
    atol = settings.ATOL if atol is None else atol
    moved = np.moveaxis(state.amps.reshape(state.dims), targets, tuple(range(len(targets))))
    dim = state.layout.target_dim(targets)
    u, s, vh = np.linalg.svd(moved.reshape(dim, -1), full_matrices=False)
    if len(s) > 1 and s[1] > atol:
        return None
    target_state = StateVector(u[:, 0], [state.dims[t] for t in targets], state.probability)
    rest_state = StateVector.from_amplitudes(vh[0], [state.dims[r] for r in rest])
    return target_state, rest_state


# Spectra and distances

def hermitian_eigensystem(h):
    """
    Returns eigenvalues sorted descending and the matching eigenvectors as
    columns.
    """
    matrix = as_matrix(h)
    check_hermitian(matrix)
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    return values[::-1].copy(), vectors[:, ::-1].copy()


def trace_norm(h):
    values, _ = hermitian_eigensystem(h)
    return float(np.sum(np.abs(values)))


def psd_sqrt(rho):
    values, vectors = hermitian_eigensystem(rho)
    if values[-1] < -settings.ATOL:
        raise InvalidState('Matrix should be positive semidefinite.')
    values = np.sqrt(np.where(values > settings.EXACT_ATOL, values, 0.0))
    return (vectors * values) @ vectors.conj().T


def fidelity(rho, xi):
    """
    Returns the square-root fidelity, the trace norm of sqrt(rho) sqrt(xi).
    """
    check_same_layout(rho, xi)
    value = svdvals(psd_sqrt(rho) @ psd_sqrt(xi)).sum()
    return float(np.clip(value, 0.0, 1.0))


def trace_distance(rho, xi):
    check_same_layout(rho, xi)
    return 0.5 * trace_norm(rho.entries - xi.entries)


def helstrom_success(rho0, rho1):
    """
    Returns the optimal probability of telling rho0 from rho1 at equal priors.
    """
    check_same_layout(rho0, rho1)
    return 0.5 + 0.25 * trace_norm(rho0.entries - rho1.entries)


def helstrom_measurement(rho0, rho1, atol=None):
    """
    Returns the optimal measurement telling rho0 from rho1.

    Labels are 0 for the positive part of rho0 - rho1, 1 for the negative
    part and None for the kernel, where a guess is a coin flip.
    """
    check_same_layout(rho0, rho1)
    atol = settings.ATOL if atol is None else atol
    values, vectors = hermitian_eigensystem(rho0.entries - rho1.entries)
    parts = []
    for label, mask in ((0, values > atol), (1, values < -atol), (None, np.abs(values) <= atol)):
        if mask.any():
            v = vectors[:, mask]
            parts.append((label, Operator(v @ v.conj().T, rho0.layout, PROJECTOR)))
    return ProjectiveMeasurement(
        [p for _, p in parts],
        labels=[label for label, _ in parts],
    )


# Measurement

class ProjectiveMeasurement:
    """
    Complete family of pairwise orthogonal projectors with outcome labels.
    """

    def __init__(self, projectors, labels=None):
        projectors = [self.as_projector(p) for p in projectors]
        if not projectors:
            raise InvalidOperator('A measurement should have at least one outcome.')
        layout = projectors[0].layout
        for p in projectors:
            if p.dim != layout.total_dim:
                raise DimensionMismatch('Projectors should share one dimension.')
        matrices = [p.matrix for p in projectors]
        for i, a in enumerate(matrices):
            for b in matrices[i + 1:]:
                if not np.allclose(a @ b, 0, atol=settings.ATOL):
                    raise InvalidOperator('Projectors should be pairwise orthogonal.')
        if not np.allclose(sum(matrices), np.eye(layout.total_dim), atol=settings.ATOL):
            raise InvalidOperator('Projectors should sum to the identity.')
        self.projectors = projectors
        self.layout = layout
        self.labels = list(range(len(projectors))) if labels is None else list(labels)
        if len(self.labels) != len(projectors):
            raise ValueError("'labels' should have one entry per projector.")

    @staticmethod
    def as_projector(p):
        if not isinstance(p, Operator):
            return Operator(p, kind=PROJECTOR)
        if p.kind != PROJECTOR:
            return Operator(p.matrix, p.layout, PROJECTOR)
        return p

    def __len__(self):
        return len(self.projectors)

    @property
    def dim(self):
        return self.layout.total_dim

    @property
    def operators(self):
        return [p.matrix for p in self.projectors]


def outcome_distribution(state, operators, targets=None):
    """
    Returns the outcome probabilities and the unnormalized branches.
    """
    if targets is None:
        targets = range(len(state.dims))
    targets = _check_op_fits(state.layout, operators[0], targets)
    branches = [apply_matrix(state.amps, state.dims, as_matrix(op), targets) for op in operators]
    probabilities = np.array([np.vdot(v, v).real for v in branches])
    return probabilities, branches


def sample_outcome(probabilities, rng):
    cumulative = np.cumsum(probabilities)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side='right'))
    return min(index, len(probabilities) - 1)


def measure_kraus(state, operators, rng, targets=None):
    """
    Returns (outcome index, post state, probability) for a Kraus instrument.
    """
    check_kraus_completeness(operators)
    probabilities, branches = outcome_distribution(state, operators, targets)
    k = sample_outcome(probabilities, rng)
    post = StateVector(branches[k] / np.sqrt(probabilities[k]), state.layout)
    return k, post, float(probabilities[k])


def measure_projective(state, projectors, rng, targets=None):
    """
    Returns (outcome index, post state, probability).

    The outcome k is drawn with probability ||P_k s||^2 and the post state
    is P_k s renormalized.
    """
    if not isinstance(projectors, ProjectiveMeasurement):
        projectors = ProjectiveMeasurement(projectors)
    probabilities, branches = outcome_distribution(state, projectors.operators, targets)
    k = sample_outcome(probabilities, rng)
    post = StateVector(branches[k] / np.sqrt(probabilities[k]), state.layout)
    return k, post, float(probabilities[k])
