"""
Separable ensembles (sum_j p_j rho_A^j (x) rho_B^j [(x) rho_C^j]) and their
verification against a target state.
"""
import numpy as np

from . import linalg
from .density import as_matrix, bloch_state, bloch_vector


DEFAULT_TOLERANCE   = 1e-10
WEIGHT_TOLERANCE    = 1e-12
FACTOR_TOLERANCE    = 1e-10

SEPARABLE       = 'Separable'
ENTANGLED       = 'Entangled'
INDETERMINATE   = 'Indeterminate'


class NotCertifiedSeparable(ValueError): pass
class DimensionMismatch(ValueError): pass
class InconsistentCriteria(RuntimeError): pass


class Criterion(object):
    """
    One named test with its measured value, threshold and outcome.
    """
    def __init__(self, name, value, threshold, outcome):
        self.name       = name
        self.value      = float(value)
        self.threshold  = float(threshold)
        self.outcome    = outcome

    def __repr__(self):
        return 'Criterion({0}={1:.6g} vs {2:.6g}: {3})'.format(self.name, self.value, self.threshold, self.outcome)


class Term(object):
    def __init__(self, weight, factors):
        self.weight     = float(weight)
        self.factors    = [np.asarray(f, dtype=complex) for f in factors]


class SeparableDecomposition(object):
    """
    A weighted list of product states certifying separability.

    `frame_note` describes any local transformation relating the certificate
    to the state it was derived from.
    """
    def __init__(self, n_qubits, terms, frame_note=None, frame=None):
        self.n_qubits   = n_qubits
        self.terms      = list(terms)
        self.frame_note = frame_note
        # optional named matrices (rotations, Lorentz factors) behind frame_note
        self.frame      = frame

    @property
    def weights(self):
        return np.array([term.weight for term in self.terms])

    def __len__(self):
        return len(self.terms)

    def purified(self):
        """
        Equivalent ensemble of pure product states: each mixed factor
        (I + r n.sigma)/2 is split into (1 +- r)/2 (I +- n.sigma)/2.
        """
        terms = []
        for term in self.terms:
            expanded = [(term.weight, [])]
            for factor in term.factors:
                vector = bloch_vector(factor)
                length = np.linalg.norm(vector)
                if length >= 1.0 - 1e-12:
                    expanded = [(w, fs + [factor]) for w, fs in expanded]
                    continue
                axis = vector / length if length > 0 else np.array([0.0, 0.0, 1.0])
                expanded = [
                    (w * (1 + sign * length) / 2, fs + [bloch_state(sign * axis)])
                    for w, fs in expanded
                    for sign in (1, -1)
                    if (1 + sign * length) > 0
                ]
            terms.extend(Term(w, fs) for w, fs in expanded)
        return SeparableDecomposition(self.n_qubits, terms, self.frame_note, self.frame)


class VerificationReport(object):
    def __init__(self, residual_max_abs, weight_sum_error, worst_factor_violation, tolerance):
        self.residual_max_abs       = float(residual_max_abs)
        self.weight_sum_error       = float(weight_sum_error)
        self.worst_factor_violation = float(worst_factor_violation)
        self.tolerance              = tolerance
        self.passed = (
            self.residual_max_abs <= tolerance
            and self.weight_sum_error <= WEIGHT_TOLERANCE
            and self.worst_factor_violation <= FACTOR_TOLERANCE
        )

    @property
    def verdict(self):
        return 'pass' if self.passed else 'fail'


def recombine(d):
    dim = 2 ** d.n_qubits
    total = np.zeros((dim, dim), dtype=complex)
    for term in d.terms:
        total += term.weight * linalg.kron_all(*term.factors)
    return total


def factor_violation(factor):
    """
    How far a 2x2 matrix is from being a qubit density matrix.
    """
    factor = np.asarray(factor, dtype=complex)
    if factor.shape != (2, 2):
        return float('inf')
    asymmetry = linalg.hermitian_violation(factor)
    hermitian = (factor + factor.conj().T) / 2
    return max(
        asymmetry,
        abs(np.trace(factor) - 1.0),
        max(0.0, -float(np.linalg.eigvalsh(hermitian)[0])),
    )


def verify(d, target, tol=DEFAULT_TOLERANCE):
    target = as_matrix(target)
    dim = 2 ** d.n_qubits
    if target.shape != (dim, dim):
        raise DimensionMismatch('Certificate is for {0} qubits but target has shape {1}'.format(d.n_qubits, target.shape))
    worst = 0.0
    for term in d.terms:
        if term.weight <= 0 or len(term.factors) != d.n_qubits:
            worst = float('inf')
            break
        for factor in term.factors:
            worst = max(worst, factor_violation(factor))
    residual = np.max(np.abs(recombine(d) - target)) if d.terms else float('inf')
    return VerificationReport(
        residual,
        abs(float(np.sum(d.weights)) - 1.0),
        worst,
        tol,
    )


def transform_certificate(d, operators, frame_note=None):
    """
    Certificate for (A (x) B ...) rho (A (x) B ...)^H, renormalized: every
    factor f becomes A f A^H / tr(A f A^H) and the traces move into the weights.
    """
    terms = []
    for term in d.terms:
        weight = term.weight
        factors = []
        for op, factor in zip(operators, term.factors):
            image = op @ factor @ op.conj().T
            image = (image + image.conj().T) / 2
            trace = float(np.real(np.trace(image)))
            weight *= trace
            factors.append(image / trace)
        terms.append(Term(weight, factors))
    return SeparableDecomposition(d.n_qubits, normalized(terms), frame_note or d.frame_note, d.frame)


def normalized(terms):
    """
    Drop non-positive weights and rescale the rest to sum to one.
    """
    terms = [term for term in terms if term.weight > 0]
    total = sum(term.weight for term in terms)
    for term in terms:
        term.weight /= total
    return terms
