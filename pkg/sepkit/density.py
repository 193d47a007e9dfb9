"""
Validated density matrices, partial transposition, the Peres-Horodecki test
and seeded random states.
"""
import numpy as np

from . import linalg
from .linalg import PAULIS, NotHermitian


PSD_TOL         = 1e-10
TRACE_TOL       = 1e-10
MAX_REJECTIONS  = 100000


class InvalidDensityMatrix(ValueError):
    def __init__(self, message, violation=None):
        super(InvalidDensityMatrix, self).__init__(message)
        self.violation = violation

class BadDimension(InvalidDensityMatrix): pass
class BadTrace(InvalidDensityMatrix): pass
class NotPositive(InvalidDensityMatrix): pass
class InvalidState(InvalidDensityMatrix): pass
class BadSubsystem(ValueError): pass
class RejectionLimit(RuntimeError): pass


class DensityMatrix(object):
    """
    A Hermitian, unit-trace, positive semidefinite 2^n x 2^n matrix.

    Build through `validate`; the wrapped array is read-only.
    """
    def __init__(self, n_qubits, mat):
        self.n_qubits   = n_qubits
        self.mat        = np.array(mat, dtype=complex)
        self.mat.setflags(write=False)

    @property
    def dim(self):
        return 2 ** self.n_qubits

    def purity(self):
        return float(np.real(np.trace(self.mat @ self.mat)))

    def __repr__(self):
        return 'DensityMatrix(n_qubits={0})'.format(self.n_qubits)


class PtReport(object):
    def __init__(self, subsystem, pt_eigenvalues):
        self.subsystem      = subsystem
        self.pt_eigenvalues = pt_eigenvalues
        self.min_eigenvalue = float(pt_eigenvalues[0])

    @property
    def entangled(self):
        return self.min_eigenvalue < -PSD_TOL


def as_matrix(rho):
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


def validate(m, n_qubits):
    """
    Check the density-matrix invariants and wrap `m`.

    Raises BadDimension, NotHermitian, BadTrace or NotPositive, each carrying
    the measured violation.
    """
    m = np.asarray(m, dtype=complex)
    if n_qubits not in (1, 2, 3):
        raise BadDimension('Only 1 to 3 qubits are supported, got {0}'.format(n_qubits), n_qubits)
    dim = 2 ** n_qubits
    if m.shape != (dim, dim):
        raise BadDimension('Expected a {0}x{0} matrix, got shape {1}'.format(dim, m.shape), m.shape)
    if not np.all(np.isfinite(m)):
        raise BadDimension('Matrix has non-finite entries', float('nan'))

    asymmetry = linalg.hermitian_violation(m)
    if asymmetry > linalg.HERMITIAN_TOL:
        raise NotHermitian(asymmetry)

    trace_error = abs(np.trace(m) - 1.0)
    if trace_error > TRACE_TOL:
        raise BadTrace('Trace differs from 1 by {0:.3e}'.format(trace_error), trace_error)

    smallest = float(linalg.hermitian_eigenvalues(m)[0])
    if smallest < -PSD_TOL:
        raise NotPositive('Smallest eigenvalue is {0:.3e}'.format(smallest), smallest)

    return DensityMatrix(n_qubits, m)


def bloch_state(vector):
    """
    Single-qubit state (I + n.sigma) / 2 for a Bloch vector with |n| <= 1.
    """
    x, y, z = vector
    return (PAULIS[0] + x * PAULIS[1] + y * PAULIS[2] + z * PAULIS[3]) / 2


def bloch_vector(state):
    state = as_matrix(state)
    return np.array([np.real(np.trace(state @ p)) for p in PAULIS[1:]])


def partial_transpose(rho, subsystem):
    """
    Transpose the indices of one qubit.

    For three qubits this is the bipartition "that qubit vs. the rest".
    """
    m = as_matrix(rho)
    n_qubits = int(round(np.log2(m.shape[0])))
    if not 0 <= subsystem < n_qubits:
        raise BadSubsystem('Subsystem {0} out of range for {1} qubits'.format(subsystem, n_qubits))
    tensor = m.reshape((2,) * (2 * n_qubits))
    # row index axes are 0..n-1, column index axes n..2n-1
    axes = list(range(2 * n_qubits))
    axes[subsystem], axes[n_qubits + subsystem] = axes[n_qubits + subsystem], axes[subsystem]
    return tensor.transpose(axes).reshape(m.shape)


def ph_test(rho, subsystem):
    pt = partial_transpose(rho, subsystem)
    return PtReport(subsystem, linalg.hermitian_eigenvalues(pt))


def ph_all_cuts(rho, cuts=None):
    m = as_matrix(rho)
    n_qubits = int(round(np.log2(m.shape[0])))
    if cuts is None:
        cuts = range(n_qubits)
    return [ph_test(m, cut) for cut in cuts]


def _rng(seed):
    return np.random.default_rng(seed)


def random_mixed(n_qubits, rank, seed):
    """
    Ginibre-ensemble state G G^H / tr(G G^H) with a 2^n x rank complex
    Gaussian factor.
    """
    dim = 2 ** n_qubits
    if not 1 <= rank <= dim:
        raise ValueError('rank must lie in [1, {0}]'.format(dim))
    rng = _rng(seed)
    g = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))) / np.sqrt(2)
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return DensityMatrix(n_qubits, (m + m.conj().T) / 2)


def random_correlation_only(n_qubits, scale, seed):
    """
    Rejection-sample a state with only the highest-order Pauli correlations
    (t for two qubits, G for three), entries uniform in [-scale, scale].
    """
    from .hs import HS2, hs2_reconstruct, g_reconstruct

    if n_qubits not in (2, 3):
        raise ValueError('Correlation-only states need 2 or 3 qubits')
    if not 0 < scale <= 1:
        raise ValueError('scale must lie in (0, 1]')
    rng = _rng(seed)
    for _ in range(MAX_REJECTIONS):
        if n_qubits == 2:
            m = hs2_reconstruct(HS2(t=rng.uniform(-scale, scale, (3, 3))))
        else:
            m = g_reconstruct(rng.uniform(-scale, scale, (3, 3, 3)))
        if linalg.hermitian_eigenvalues(m)[0] >= -PSD_TOL:
            return DensityMatrix(n_qubits, m)
    raise RejectionLimit('No positive sample after {0} attempts'.format(MAX_REJECTIONS))


def random_correlation_scaled(n_qubits, fraction, seed):
    """
    Correlation-only state along a random direction, at `fraction` of the
    largest multiple that is still positive. Never rejects, so it reaches
    states near the boundary that uniform sampling almost never hits.
    """
    from .hs import HS2, hs2_reconstruct, g_reconstruct

    if n_qubits not in (2, 3):
        raise ValueError('Correlation-only states need 2 or 3 qubits')
    if not 0 < fraction <= 1:
        raise ValueError('fraction must lie in (0, 1]')
    rng = _rng(seed)
    if n_qubits == 2:
        build = lambda c: hs2_reconstruct(HS2(t=c))
        direction = rng.uniform(-1, 1, (3, 3))
    else:
        build = g_reconstruct
        direction = rng.uniform(-1, 1, (3, 3, 3))
    # eigenvalues of the traceless part scale linearly with the coefficients
    smallest = linalg.hermitian_eigenvalues(build(direction) - np.eye(2 ** n_qubits) / 2 ** n_qubits)[0]
    limit = (1.0 / 2 ** n_qubits) / -smallest
    m = build(fraction * limit * direction)
    return DensityMatrix(n_qubits, (m + m.conj().T) / 2)


def random_bloch_unit(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_separable(n_qubits, n_terms, seed):
    """
    Random convex combination of pure product states, returned together with
    the ensemble that generated it.
    """
    from .decomposition import SeparableDecomposition, Term, recombine

    if n_terms < 1:
        raise ValueError('n_terms must be at least 1')
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    terms = [
        Term(weight, [bloch_state(random_bloch_unit(rng)) for _ in range(n_qubits)])
        for weight in weights
    ]
    ensemble = SeparableDecomposition(n_qubits, terms, frame_note='generating ensemble')
    m = recombine(ensemble)
    return DensityMatrix(n_qubits, (m + m.conj().T) / 2), ensemble
