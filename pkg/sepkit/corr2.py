"""
Two-qubit correlation states 4 rho = I + sum t_mn sigma_m (x) sigma_n.

Local rotations bring t to diag(t1, t2, t3); the state is separable iff
|t1| + |t2| + |t3| <= 1, and then an explicit ensemble of at most seven
product terms exists.
"""
import logging

import numpy as np

from . import linalg
from .decomposition import (
    Criterion, InconsistentCriteria, NotCertifiedSeparable, SeparableDecomposition, Term,
    ENTANGLED, SEPARABLE, normalized,
)
from .density import PSD_TOL, InvalidState, bloch_state, ph_test
from .hs import HS2, hs2_reconstruct


# sum|t| = 1 + 4x  <=>  lambda_max = 1/2 + x  <=>  PT min = -x
SEPARABILITY_TOL    = 4 * PSD_TOL
CORRELATION_TOL     = 1e-10
ZERO_WEIGHT         = 1e-14

logger = logging.getLogger('sepkit.corr2')


class NotCorrelationOnly(ValueError): pass
class BadSpectrum(ValueError): pass


class DiagonalCorrelation(object):
    """
    diag(t1, t2, t3) = o_a^T t o_b, with t1 >= t2 >= |t3| and t1, t2 >= 0.
    """
    def __init__(self, t1, t2, t3, o_a=None, o_b=None):
        self.t1 = float(t1)
        self.t2 = float(t2)
        self.t3 = float(t3)
        self.o_a = np.eye(3) if o_a is None else np.asarray(o_a, dtype=float)
        self.o_b = np.eye(3) if o_b is None else np.asarray(o_b, dtype=float)

    @property
    def t(self):
        return np.array([self.t1, self.t2, self.t3])

    def __repr__(self):
        return 'DiagonalCorrelation({0:.6g}, {1:.6g}, {2:.6g})'.format(self.t1, self.t2, self.t3)


class Spectra(object):
    """
    Closed-form eigenvalues of rho and of its partial transpose, each in the
    labeled order lambda_1..lambda_4.
    """
    def __init__(self, lam_rho, lam_pt):
        self.lam_rho    = np.asarray(lam_rho, dtype=float)
        self.lam_pt     = np.asarray(lam_pt, dtype=float)


class CorrelationVerdict(object):
    def __init__(self, verdict, criteria, spectra):
        self.verdict    = verdict
        self.criteria   = criteria
        self.spectra    = spectra


def separability_form2(t):
    """
    sum |t_mn| before any rotation; <= 1 is sufficient for separability.
    """
    return float(np.sum(np.abs(t)))


def diagonalize_t(hs, tol=CORRELATION_TOL):
    if not hs.is_correlation_only(tol):
        raise NotCorrelationOnly(
            'Local Bloch vectors are nonzero (|r| = {0:.3e}, |s| = {1:.3e})'.format(np.linalg.norm(hs.r), np.linalg.norm(hs.s))
        )
    u, d, v = linalg.svd3(hs.t)
    return DiagonalCorrelation(d[0], d[1], d[2], u, v)


def spectra_from_t(t1, t2, t3):
    lam_rho = np.array([
        1 - t1 - t2 - t3,
        1 + t1 + t2 - t3,
        1 + t1 - t2 + t3,
        1 - t1 + t2 + t3,
    ]) / 4
    lam_pt = np.array([
        1 + t1 - t2 - t3,
        1 - t1 + t2 - t3,
        1 - t1 - t2 + t3,
        1 + t1 + t2 + t3,
    ]) / 4
    return Spectra(lam_rho, lam_pt)


def t_from_spectrum(lam_rho, relabel=False, tol=1e-10):
    """
    Invert the labeled spectrum of rho back to (t1, t2, t3).

    With relabel=True the two-sign-flip image (-t1, -t2, t3) is returned,
    which is the same state with lambda_1 <-> lambda_2 and lambda_3 <-> lambda_4
    renamed.
    """
    l1, l2, l3, l4 = (float(x) for x in lam_rho)
    error = abs(l1 + l2 + l3 + l4 - 1.0)
    if error > tol:
        raise BadSpectrum('Eigenvalues sum to {0!r}, not 1'.format(l1 + l2 + l3 + l4))
    t1 = 2 * (l2 + l3) - 1
    t2 = 2 * (l2 + l4) - 1
    t3 = 2 * (l3 + l4) - 1
    if relabel:
        return -t1, -t2, t3
    return t1, t2, t3


def pt_pairing_check(s):
    """
    Largest violation of lambda_i(PT) = 1/2 - lambda_{5-i}(rho).
    """
    return float(np.max(np.abs(s.lam_pt - (0.5 - s.lam_rho[::-1]))))


def correlation_state(t1, t2, t3):
    return hs2_reconstruct(HS2(t=np.diag([t1, t2, t3])))


def classify_corr(t1, t2, t3):
    """
    Decide separability of diag(t1, t2, t3) three ways: sum |t_i| <= 1, every
    eigenvalue of rho at most 1/2, and positivity of the partial transpose.

    The three must agree; a disagreement raises InconsistentCriteria.
    """
    spectra = spectra_from_t(t1, t2, t3)
    if spectra.lam_rho.min() < -PSD_TOL:
        raise InvalidState('diag({0}, {1}, {2}) is not positive (eigenvalue {3:.3e})'.format(t1, t2, t3, spectra.lam_rho.min()),
                           float(spectra.lam_rho.min()))

    total = abs(t1) + abs(t2) + abs(t3)
    lam_max = float(spectra.lam_rho.max())
    pt_min = ph_test(correlation_state(t1, t2, t3), 1).min_eigenvalue

    criteria = [
        Criterion('sum_abs_t', total, 1 + SEPARABILITY_TOL,
                  SEPARABLE if total <= 1 + SEPARABILITY_TOL else ENTANGLED),
        Criterion('max_eigenvalue', lam_max, 0.5 + PSD_TOL,
                  SEPARABLE if lam_max <= 0.5 + PSD_TOL else ENTANGLED),
        Criterion('ph_min_eigenvalue', pt_min, -PSD_TOL,
                  SEPARABLE if pt_min >= -PSD_TOL else ENTANGLED),
    ]
    outcomes = set(c.outcome for c in criteria)
    if len(outcomes) != 1:
        raise InconsistentCriteria('Criteria disagree for t = ({0!r}, {1!r}, {2!r}): {3}'.format(t1, t2, t3, criteria))
    logger.debug('classify_corr t=({0:.6g}, {1:.6g}, {2:.6g}): {3}'.format(t1, t2, t3, criteria[0].outcome))
    return CorrelationVerdict(criteria[0].outcome, criteria, spectra)


def decompose_corr(d):
    """
    Explicit ensemble for a certified correlation state.

    Each nonzero t_i contributes (I +- sigma_i)/2 (x) (I +- sign(t_i) sigma_i)/2
    with weight |t_i|/2 apiece, the remainder sits on I/2 (x) I/2; the Pauli
    axes are those of the frame the state was supplied in.
    """
    total = float(np.sum(np.abs(d.t)))
    if total > 1 + SEPARABILITY_TOL:
        raise NotCertifiedSeparable('sum |t_i| = {0!r} exceeds 1'.format(total))

    terms = []
    for i, ti in enumerate(d.t):
        if abs(ti) <= ZERO_WEIGHT:
            continue
        axis_a, axis_b = d.o_a[:, i], np.sign(ti) * d.o_b[:, i]
        for sign in (1, -1):
            terms.append(Term(abs(ti) / 2, [bloch_state(sign * axis_a), bloch_state(sign * axis_b)]))
    remainder = 1.0 - total
    if remainder > ZERO_WEIGHT:
        terms.append(Term(remainder, [bloch_state((0, 0, 0)), bloch_state((0, 0, 0))]))

    frame_note = None
    if not (np.allclose(d.o_a, np.eye(3)) and np.allclose(d.o_b, np.eye(3))):
        frame_note = 'built in the frame that diagonalizes t and rotated back to the input frame'
    return SeparableDecomposition(2, normalized(terms), frame_note)
