"""
Two-qubit states with local Bloch vectors.

A sufficient ensemble exists when 1 - |a| - |b| - sum |t_i| >= 0 (t diagonal).
For the exact criterion the HS matrix R is brought to its Lorentz normal form
R = L1 Sigma L2^T; in the generic (diagonal) case s1 + s2 + |s3| <= s0 decides
separability and yields an ensemble for the normal-form state, which the
SL(2, C) lifts of L1, L2 carry back to the supplied state.
"""
import logging

import numpy as np
import scipy.linalg

from . import linalg
from .corr2 import SEPARABILITY_TOL
from .decomposition import (
    Criterion, InconsistentCriteria, NotCertifiedSeparable, SeparableDecomposition, Term,
    ENTANGLED, SEPARABLE, normalized, transform_certificate, verify,
)
from .density import PSD_TOL, InvalidState, as_matrix, bloch_state, ph_all_cuts
from .hs import HS2, hs2_decompose, hs2_reconstruct, r_matrix
from .linalg import ETA


SUFFICIENT_TOL      = 1e-12
DIAGONAL_TOL        = 1e-10
RECONSTRUCTION_TOL  = 1e-8
ZERO_WEIGHT         = 1e-14
ZERO_S              = 1e-12
# relative spread under which eigenvalues of R^T eta R eta count as one
DEGENERACY_TOL      = 1e-7
PRODUCT_TOL         = 1e-12
CONCURRENCE_TOL     = 1e-9
TAKAGI_ZERO         = 1e-13

logger = logging.getLogger('sepkit.general2')

MAXIMALLY_MIXED = bloch_state((0, 0, 0))


class TNotDiagonal(ValueError): pass
class NormalFormFailure(RuntimeError): pass


class GenericSigma(object):
    """
    Sigma = diag(s0, s1, s2, s3) with s0 >= s1 >= s2 >= |s3|.
    """
    is_generic = True

    def __init__(self, s0, s1, s2, s3):
        self.s0 = float(s0)
        self.s1 = float(s1)
        self.s2 = float(s2)
        self.s3 = float(s3)

    @property
    def values(self):
        return np.array([self.s0, self.s1, self.s2, self.s3])

    def matrix(self):
        return np.diag(self.values)

    def __repr__(self):
        return 'GenericSigma({0:.6g}, {1:.6g}, {2:.6g}, {3:.6g})'.format(*self.values)


class NonGenericSigma(object):
    """
    The non-diagonal normal form

        a  0   0  b
        0  d   0  0
        0  0  -d  0
        c  0   0  a+c-b
    """
    is_generic = False

    def __init__(self, a, b, c, d):
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        self.d = float(d)

    def matrix(self):
        return np.array([
            [self.a, 0.0, 0.0, self.b],
            [0.0, self.d, 0.0, 0.0],
            [0.0, 0.0, -self.d, 0.0],
            [self.c, 0.0, 0.0, self.a + self.c - self.b],
        ])

    def __repr__(self):
        return 'NonGenericSigma(a={0:.6g}, b={1:.6g}, c={2:.6g}, d={3:.6g})'.format(self.a, self.b, self.c, self.d)


class LorentzFactors(object):
    def __init__(self, l1, l2, sigma, reason=None):
        self.l1     = l1
        self.l2     = l2
        self.sigma  = sigma
        self.reason = reason

    def reconstruct(self):
        return self.l1 @ self.sigma.matrix() @ self.l2.T


class GenericVerdict(object):
    def __init__(self, verdict, criteria):
        self.verdict    = verdict
        self.criteria   = criteria


def rotate_to_diagonal(hs):
    """
    Apply the proper rotations that diagonalize t; the local Bloch vectors
    are expressed in the same rotated frames.

    Returns (rotated HS2, o_a, o_b).
    """
    u, d, v = linalg.svd3(hs.t)
    return HS2(r=u.T @ hs.r, s=v.T @ hs.s, t=np.diag(d)), u, v


def rotate_certificate(decomposition, o_a, o_b):
    """
    Express a certificate built in rotated frames in the original frames.
    """
    return transform_certificate(
        decomposition,
        [linalg.rotation_to_unitary(o_a), linalg.rotation_to_unitary(o_b)],
        frame_note='built in the frame that diagonalizes t and rotated back to the input frame',
    )


def sufficient_condition(hs):
    return 1.0 - np.linalg.norm(hs.r) - np.linalg.norm(hs.s) - float(np.sum(np.abs(np.diag(hs.t))))


def sufficient_decompose_general(hs):
    """
    Ensemble for a state with diagonal t when 1 - |a| - |b| - sum |t_i| >= 0,
    otherwise None (the state may still be separable).
    """
    off_diagonal = np.max(np.abs(hs.t - np.diag(np.diag(hs.t))))
    if off_diagonal > DIAGONAL_TOL:
        raise TNotDiagonal('t has off-diagonal entries up to {0:.3e}'.format(off_diagonal))
    smallest = linalg.hermitian_eigenvalues(hs2_reconstruct(hs))[0]
    if smallest < -PSD_TOL:
        raise InvalidState('HS parameters do not describe a positive state', float(smallest))

    condition = sufficient_condition(hs)
    if condition < -SUFFICIENT_TOL:
        logger.debug('Sufficient condition fails: 1 - a - b - sum|t| = {0:.6g}'.format(condition))
        return None

    terms = []
    for i, ti in enumerate(np.diag(hs.t)):
        if abs(ti) <= ZERO_WEIGHT:
            continue
        axis = np.eye(3)[i]
        for sign in (1, -1):
            terms.append(Term(abs(ti) / 2, [bloch_state(sign * np.sign(ti) * axis), bloch_state(sign * axis)]))
    a, b = np.linalg.norm(hs.r), np.linalg.norm(hs.s)
    if a > ZERO_WEIGHT:
        terms.append(Term(a, [bloch_state(hs.r / a), MAXIMALLY_MIXED]))
    if b > ZERO_WEIGHT:
        terms.append(Term(b, [MAXIMALLY_MIXED, bloch_state(hs.s / b)]))
    if condition > ZERO_WEIGHT:
        terms.append(Term(condition, [MAXIMALLY_MIXED, MAXIMALLY_MIXED]))
    return SeparableDecomposition(2, normalized(terms))


def _real_basis(vectors):
    """
    Real orthonormal basis for the span of possibly complex eigenvectors
    belonging to a real eigenvalue.
    """
    stacked = np.hstack([np.real(vectors), np.imag(vectors)])
    u, _, _ = np.linalg.svd(stacked)
    return u[:, :vectors.shape[1]]


def _eta_orthonormal_eigenvectors(k):
    """
    Eigen-decompose K = R^T eta R eta into (eigenvalue, vector, eta-norm sign)
    triples with vectors eta-orthonormal, or return a reason string.
    """
    evals, evecs = np.linalg.eig(k)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if np.max(np.abs(np.imag(evals))) > DEGENERACY_TOL * scale:
        return 'complex eigenvalues'
    evals = np.real(evals)
    if evals.min() < -PSD_TOL * scale:
        return 'negative eigenvalue {0:.3e}'.format(evals.min())

    order = np.argsort(evals)
    groups = [[order[0]]]
    for index in order[1:]:
        if evals[index] - evals[groups[-1][-1]] <= DEGENERACY_TOL * scale:
            groups[-1].append(index)
        else:
            groups.append([index])

    result = []
    for group in groups:
        basis = _real_basis(evecs[:, group])
        gram = basis.T @ ETA @ basis
        norms, mix = np.linalg.eigh((gram + gram.T) / 2)
        if np.min(np.abs(norms)) < 1e-10:
            return 'null eigenvector (defective normal form)'
        value = float(np.mean(evals[group]))
        for norm, column in zip(norms, (basis @ mix).T):
            result.append((value, column / np.sqrt(abs(norm)), 1 if norm > 0 else -1))
    return result


def _non_generic(r, reason, l1=None, l2=None):
    transformed = r
    if l1 is not None and l2 is not None:
        try:
            transformed = np.linalg.solve(l1, r) @ np.linalg.inv(l2).T
        except np.linalg.LinAlgError:
            l1, l2 = None, None
    sigma = NonGenericSigma(transformed[0, 0], transformed[0, 3], transformed[3, 0], transformed[1, 1])
    logger.warning('Lorentz normal form is not generic ({0}); reporting best-effort {1}'.format(reason, sigma))
    return LorentzFactors(l1, l2, sigma, reason)


def lorentz_normal_form(r):
    """
    Factor R = L1 Sigma L2^T with proper orthochronous Lorentz L1, L2.

    L2 comes from the eigenvectors of R^T eta R eta (eigenvalues s_i^2), L1
    from the columns of R eta L2 eta = L1 Sigma. The generic result is
    checked by reconstruction; anything else is reported as non-generic.
    """
    values = r.values if hasattr(r, 'values') else np.asarray(r, dtype=float)
    if values.shape != (4, 4) or not np.all(np.isfinite(values)) or values[0, 0] <= 0:
        raise NormalFormFailure('R must be a finite 4x4 matrix with R00 > 0')

    try:
        eigen = _eta_orthonormal_eigenvectors(values.T @ ETA @ values @ ETA)
    except np.linalg.LinAlgError as error:
        raise NormalFormFailure(str(error))
    if isinstance(eigen, str):
        return _non_generic(values, eigen)

    timelike = [vector for _, vector, sign in eigen if sign > 0]
    if len(timelike) != 1:
        return _non_generic(values, '{0} timelike eigenvectors'.format(len(timelike)))
    spacelike = sorted(((value, vector) for value, vector, sign in eigen if sign < 0), key=lambda item: -item[0])

    t0 = timelike[0] if timelike[0][0] > 0 else -timelike[0]
    l2 = np.column_stack([t0] + [vector for _, vector in spacelike])
    if np.linalg.det(l2) < 0:
        l2[:, 3] *= -1

    c = values @ ETA @ l2 @ ETA
    s0_squared = c[:, 0] @ ETA @ c[:, 0]
    if s0_squared <= 0 or c[0, 0] <= 0:
        return _non_generic(values, 'image of the timelike axis is not future timelike', None, l2)
    s = [np.sqrt(s0_squared)]
    columns = [c[:, 0] / s[0]]
    for i in (1, 2, 3):
        v = c[:, i].copy()
        for column in columns:
            v -= (column @ ETA @ v) / (column @ ETA @ column) * column
        length = np.sqrt(max(0.0, -(v @ ETA @ v)))
        if len(columns) == i and length > ZERO_S * s[0]:
            columns.append(v / length)
            s.append(-(c[:, i] @ ETA @ columns[-1]))
        else:
            s.append(0.0)
    # zero s_i sort last, so the missing columns are the trailing ones
    l1 = np.column_stack(linalg.minkowski_complete(columns))
    if l1.shape != (4, 4):
        return _non_generic(values, 'could not complete L1', None, l2)
    if np.linalg.det(l1) < 0:
        l1[:, 3] *= -1
        s[3] = -s[3]

    factors = LorentzFactors(l1, l2, GenericSigma(*s))
    sigma = factors.sigma
    ordered = (sigma.s0 >= sigma.s1 - 1e-9 and sigma.s1 >= sigma.s2 - 1e-9 and sigma.s2 >= abs(sigma.s3) - 1e-9)
    error = np.max(np.abs(factors.reconstruct() - values))
    if not (linalg.is_proper_lorentz(l1) and linalg.is_proper_lorentz(l2)) or error > RECONSTRUCTION_TOL or not ordered:
        return _non_generic(values, 'generic factorization did not validate (error {0:.3e})'.format(error), l1, l2)
    logger.debug('Lorentz normal form {0}, reconstruction error {1:.3e}'.format(sigma, error))
    return factors


def normal_form_eigenvalues(sigma):
    """
    Eigenvalues of the unnormalized normal-form state (1/4) sum Sigma_aa sigma_a (x) sigma_a.
    """
    s0, s1, s2, s3 = sigma.values
    return np.array([
        s0 - s1 - s2 - s3,
        s0 + s1 + s2 - s3,
        s0 + s1 - s2 + s3,
        s0 - s1 + s2 + s3,
    ]) / 4


def classify_generic(sigma, rho=None):
    """
    s1 + s2 + |s3| <= s0 decides separability of a generic normal form. With
    `rho`, the verdict is checked against the partial-transpose test.
    """
    total = sigma.s1 + sigma.s2 + abs(sigma.s3)
    lam_max, bound, holds = eigenvalue_bound_generic(sigma)
    criteria = [
        Criterion('lorentz_s_sum', total, sigma.s0 + SEPARABILITY_TOL,
                  SEPARABLE if total <= sigma.s0 + SEPARABILITY_TOL else ENTANGLED),
        Criterion('normal_form_max_eigenvalue', lam_max, bound + SEPARABILITY_TOL / 4, SEPARABLE if holds else ENTANGLED),
    ]
    verdict = criteria[0].outcome
    if rho is not None:
        pt_min = min(report.min_eigenvalue for report in ph_all_cuts(rho))
        ph_outcome = SEPARABLE if pt_min >= -PSD_TOL else ENTANGLED
        criteria.append(Criterion('ph_min_eigenvalue', pt_min, -PSD_TOL, ph_outcome))
        if ph_outcome != verdict:
            raise InconsistentCriteria('Normal form {0} says {1} but the partial transpose says {2}'.format(sigma, verdict, ph_outcome))
    return GenericVerdict(verdict, criteria)


def decompose_generic(sigma, factors=None):
    """
    Ensemble for the normalized normal-form state rho_Sigma; all weights are
    divided by s0. The Lorentz factors, when given, are kept on the
    certificate so it can be carried back with `transfer_certificate`.
    """
    total = sigma.s1 + sigma.s2 + abs(sigma.s3)
    if total > sigma.s0 + SEPARABILITY_TOL:
        raise NotCertifiedSeparable('s1 + s2 + |s3| = {0!r} exceeds s0 = {1!r}'.format(total, sigma.s0))

    terms = []
    for i, si, sign_b in ((0, sigma.s1, 1.0), (1, sigma.s2, 1.0), (2, sigma.s3, np.sign(sigma.s3))):
        if abs(si) <= ZERO_WEIGHT:
            continue
        axis = np.eye(3)[i]
        for sign in (1, -1):
            terms.append(Term(abs(si) / (2 * sigma.s0), [bloch_state(sign * axis), bloch_state(sign * sign_b * axis)]))
    remainder = (sigma.s0 - total) / sigma.s0
    if remainder > ZERO_WEIGHT:
        terms.append(Term(remainder, [MAXIMALLY_MIXED, MAXIMALLY_MIXED]))

    frame = None
    if factors is not None:
        frame = {'l1': factors.l1, 'l2': factors.l2}
    return SeparableDecomposition(
        2, normalized(terms),
        frame_note='ensemble for the Lorentz normal form; (A x B) rho (A x B)^H preserves positivity and separability',
        frame=frame,
    )


def transfer_certificate(decomposition, factors):
    """
    Carry a normal-form ensemble back to the state R = L1 Sigma L2^T.
    """
    return transform_certificate(
        decomposition,
        [linalg.lorentz_to_sl2c(factors.l1), linalg.lorentz_to_sl2c(factors.l2)],
        frame_note='normal-form ensemble mapped back through the SL(2,C) lifts of L1 and L2',
    )


def eigenvalue_bound_generic(sigma):
    """
    Largest eigenvalue of the unnormalized normal-form state against the
    bound s0 / 2; returns (largest, bound, holds).
    """
    largest = float(normal_form_eigenvalues(sigma).max())
    bound = sigma.s0 / 2
    return largest, bound, largest <= bound + SEPARABILITY_TOL / 4


def product_certificate(rho, tol=PRODUCT_TOL):
    """
    Single-term certificate rho_A (x) rho_B when t = r s^T, i.e. when the
    state is the product of its reduced states; None otherwise.
    """
    hs = hs2_decompose(rho)
    mismatch = float(np.max(np.abs(hs.t - np.outer(hs.r, hs.s))))
    if mismatch > tol:
        return None
    return SeparableDecomposition(
        2, [Term(1.0, [bloch_state(hs.r), bloch_state(hs.s)])], frame_note='product of the reduced states',
    )


# sigma_y (x) sigma_y is real
SPIN_FLIP = np.real(np.kron(linalg.SY, linalg.SY))

# real symmetric orthogonal mixing of four columns; every entry is +-1/2
HADAMARD_4 = np.array([
    [1,  1,  1,  1],
    [1,  1, -1, -1],
    [1, -1,  1, -1],
    [1, -1, -1,  1],
]) / 2.0


def _takagi(tau):
    """
    tau = Q diag(values) Q^T for a complex symmetric tau, Q unitary and the
    values non-negative and descending.

    The positive values come from the real symmetric embedding
    [[Re tau, Im tau], [Im tau, -Re tau]], whose spectrum is +-values; the
    columns for zero values span the orthogonal complement.
    """
    n = tau.shape[0]
    b, c = np.real(tau), np.imag(tau)
    evals, evecs = np.linalg.eigh(np.block([[b, c], [c, -b]]))
    order = np.argsort(evals)[::-1][:n]
    values = np.clip(evals[order], 0.0, None)
    q = evecs[:n, order] + 1j * evecs[n:, order]

    kept = int(np.sum(values > TAKAGI_ZERO * max(1.0, values[0])))
    if kept < n:
        complement = scipy.linalg.null_space(q[:, :kept].conj().T) if kept else np.eye(n, dtype=complex)
        q = np.hstack([q[:, :kept], complement])
        values = np.concatenate([values[:kept], np.zeros(n - kept)])
    return q, values


def _subnormalized_vectors(rho):
    """
    Columns x_j with sum x_j x_j^H = rho and x_j^T (sigma_y (x) sigma_y) x_k
    = values_j delta_jk; returns (x, values).
    """
    m = as_matrix(rho)
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    v = evecs * np.sqrt(np.clip(evals, 0.0, None))
    q, values = _takagi(v.T @ SPIN_FLIP @ v)
    return v @ q.conj(), values


def concurrence(rho):
    """
    max(0, l1 - l2 - l3 - l4) for the descending square roots l_i of the
    eigenvalues of rho (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).
    """
    _, values = _subnormalized_vectors(rho)
    return max(0.0, float(values[0] - values[1:].sum()))


def _closing_phases(values):
    """
    Angles theta_j with sum_j exp(i theta_j) values_j = 0 for descending
    values with values_0 <= values_1 + values_2 + values_3: values_0 and
    values_3 point opposite ways and the other two close the triangle.
    """
    l1, l2, l3, l4 = values
    d = l1 - l4
    if d <= TAKAGI_ZERO or l2 <= TAKAGI_ZERO:
        return np.array([0.0, 0.0, np.pi, np.pi])
    cos_a = np.clip((l2 ** 2 + d ** 2 - l3 ** 2) / (2 * l2 * d), -1.0, 1.0)
    theta2 = np.pi + np.arccos(cos_a)
    w = -d - l2 * np.exp(1j * theta2)
    theta3 = float(np.angle(w)) if abs(w) > TAKAGI_ZERO else 0.0
    return np.array([0.0, theta2, theta3, np.pi])


def _product_factors(z):
    """
    Split a two-qubit vector with z^T (sigma_y (x) sigma_y) z = 0 into the
    normalized single-qubit projectors of its leading Schmidt term.
    """
    u, _, vh = np.linalg.svd(np.reshape(z, (2, 2)))
    a, b = u[:, 0], vh[0, :]
    return [np.outer(a, a.conj()), np.outer(b, b.conj())]


def spin_flip_decompose(rho, tol=CONCURRENCE_TOL):
    """
    Ensemble of at most four pure product states for a two-qubit state of
    zero concurrence, or None when the concurrence exceeds `tol`.

    The subnormalized vectors x_j are given phases that make
    sum_j exp(i theta_j) values_j vanish; mixing them with a +-1/2 orthogonal
    matrix then yields vectors z_i with sum z_i z_i^H = rho and
    z_i^T (sigma_y (x) sigma_y) z_i = 0, i.e. product vectors.
    """
    x, values = _subnormalized_vectors(rho)
    excess = float(values[0] - values[1:].sum())
    if excess > tol:
        logger.debug('concurrence {0:.3e}; no product ensemble'.format(excess))
        return None

    y = x * np.exp(0.5j * _closing_phases(values))
    z = y @ HADAMARD_4
    terms = []
    for column in z.T:
        weight = float(np.real(np.vdot(column, column)))
        if weight <= ZERO_WEIGHT:
            continue
        terms.append(Term(weight, _product_factors(column / np.sqrt(weight))))
    return SeparableDecomposition(2, normalized(terms), frame_note='pure product states from the spin-flip construction')


def certify_general(rho, factors=None):
    """
    Constructive certificate for a two-qubit state, or None.

    The Bloch-vector ensemble in the frame that diagonalizes t is tried
    first; failing that, a generic separable normal form is decomposed and
    carried back through the Lorentz factors. Product states get a single
    term, and any remaining state of zero concurrence (every PPT state,
    generic or not) gets the spin-flip ensemble of pure product states.
    """
    rotated, o_a, o_b = rotate_to_diagonal(hs2_decompose(rho))
    certificate = sufficient_decompose_general(rotated)
    if certificate is not None:
        return rotate_certificate(certificate, o_a, o_b)

    factors = factors or lorentz_normal_form(r_matrix(rho))
    sigma = factors.sigma
    if sigma.is_generic and sigma.s1 + sigma.s2 + abs(sigma.s3) <= sigma.s0 + SEPARABILITY_TOL:
        certificate = transfer_certificate(decompose_generic(sigma, factors), factors)
        if verify(certificate, rho).passed:
            return certificate
        logger.debug('normal-form ensemble did not survive the transfer; trying the spin-flip ensemble')

    certificate = product_certificate(rho)
    if certificate is not None:
        return certificate
    return spin_flip_decompose(rho)
