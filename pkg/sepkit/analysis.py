"""
Runs every criterion that applies to a validated state and, when the state
is certified separable, attaches a verified ensemble.
"""
import logging

import numpy as np

from . import linalg
from .corr2 import classify_corr, decompose_corr, diagonalize_t, separability_form2
from .corr3 import MinimizeConfig, classify3, decompose3
from .decomposition import (
    Criterion, SeparableDecomposition, Term, ENTANGLED, INDETERMINATE, SEPARABLE, DEFAULT_TOLERANCE, verify,
)
from .density import PSD_TOL, ph_all_cuts
from .general2 import (
    certify_general, classify_generic, lorentz_normal_form, rotate_to_diagonal, sufficient_condition,
)
from .hs import g_extract, hs2_decompose, r_matrix


CORRELATION_RESIDUAL_TOL = 1e-10

logger = logging.getLogger('sepkit.analysis')


class Analysis(object):
    """
    Outcome of `analyze`: the verdict, every criterion that was evaluated,
    the certificate (if any) with its verification, and summary numbers used
    by the ensemble study.
    """
    def __init__(self, n_qubits):
        self.n_qubits       = n_qubits
        self.verdict        = INDETERMINATE
        self.criteria       = []
        self.certificate    = None
        self.verification   = None
        self.pt_reports     = []
        self.notes          = []
        self.summary        = {}
        self.rotations      = None

    @property
    def ph_min(self):
        return min(report.min_eigenvalue for report in self.pt_reports) if self.pt_reports else None


def _ph_criterion(analysis, rho, cuts):
    analysis.pt_reports = ph_all_cuts(rho, cuts)
    ph_min = analysis.ph_min
    outcome = ENTANGLED if ph_min < -PSD_TOL else (SEPARABLE if analysis.n_qubits == 2 else INDETERMINATE)
    for report in analysis.pt_reports:
        analysis.criteria.append(Criterion(
            'ph_cut_{0}'.format(report.subsystem), report.min_eigenvalue, -PSD_TOL,
            ENTANGLED if report.entangled else (SEPARABLE if analysis.n_qubits == 2 else INDETERMINATE),
        ))
    analysis.summary['ph_min'] = ph_min
    analysis.summary['verdict_ph'] = outcome
    return outcome


def _undecided(analysis, note):
    """
    A Separable verdict without a verified ensemble is reported as Indeterminate.
    """
    logger.warning(note)
    analysis.notes.append(note)
    analysis.verdict = INDETERMINATE


def _analyze_one(analysis, rho):
    analysis.verdict = SEPARABLE
    analysis.certificate = SeparableDecomposition(1, [Term(1.0, [rho.mat])], frame_note='single qubit')


def _analyze_two(analysis, rho, cuts):
    ph_outcome = _ph_criterion(analysis, rho, cuts)
    hs = hs2_decompose(rho)
    form = separability_form2(hs.t)
    analysis.criteria.append(Criterion('sum_abs_t_mn', form, 1.0, SEPARABLE if form <= 1.0 else INDETERMINATE))
    analysis.summary['lambda_max'] = float(linalg.hermitian_eigenvalues(rho.mat)[-1])

    if hs.is_correlation_only():
        diagonal = diagonalize_t(hs)
        result = classify_corr(diagonal.t1, diagonal.t2, diagonal.t3)
        analysis.criteria.extend(c for c in result.criteria if c.name != 'ph_min_eigenvalue')
        analysis.verdict = result.verdict
        analysis.summary['sep_form'] = analysis.summary['sep_form_min'] = float(np.sum(np.abs(diagonal.t)))
        analysis.summary['verdict_form'] = result.verdict
        if result.verdict == SEPARABLE:
            analysis.certificate = decompose_corr(diagonal)
        return

    rotated, _, _ = rotate_to_diagonal(hs)
    condition = sufficient_condition(rotated)
    analysis.criteria.append(Criterion('bloch_sufficient_margin', condition, 0.0, SEPARABLE if condition >= -1e-12 else INDETERMINATE))
    factors = lorentz_normal_form(r_matrix(rho))
    if factors.sigma.is_generic:
        result = classify_generic(factors.sigma, rho)
        analysis.criteria.extend(c for c in result.criteria if c.name != 'ph_min_eigenvalue')
        analysis.verdict = result.verdict
        ratio = (factors.sigma.s1 + factors.sigma.s2 + abs(factors.sigma.s3)) / factors.sigma.s0
        analysis.summary['sep_form'] = analysis.summary['sep_form_min'] = ratio
        analysis.summary['verdict_form'] = result.verdict
    else:
        # Positivity of the partial transpose is necessary and sufficient for two qubits.
        analysis.verdict = ph_outcome
        analysis.notes.append(
            'Lorentz normal form is non-generic ({0}: {1}); verdict from the partial-transpose test'.format(factors.sigma, factors.reason)
        )
    if analysis.verdict == SEPARABLE:
        analysis.certificate = certify_general(rho, factors)
        if analysis.certificate is None:
            _undecided(analysis, 'separable by the partial-transpose criterion but no ensemble could be built')


def _analyze_three(analysis, rho, cuts, config, threads):
    g, residual = g_extract(rho)
    analysis.criteria.append(Criterion('correlation_residual', residual, CORRELATION_RESIDUAL_TOL,
                                       SEPARABLE if residual <= CORRELATION_RESIDUAL_TOL else INDETERMINATE))
    if residual > CORRELATION_RESIDUAL_TOL:
        ph_outcome = _ph_criterion(analysis, rho, cuts)
        analysis.verdict = ph_outcome
        analysis.notes.append('not a pure-correlation state (lower-order Pauli residual {0:.3e}); only the partial-transpose test applies'.format(residual))
        return

    result = classify3(g, config, threads, cuts)
    analysis.pt_reports = result.pt_reports
    for report in result.pt_reports:
        analysis.criteria.append(Criterion('ph_cut_{0}'.format(report.subsystem), report.min_eigenvalue, -PSD_TOL,
                                           ENTANGLED if report.entangled else INDETERMINATE))
    analysis.criteria.extend(c for c in result.criteria if c.name != 'ph_min_eigenvalue')
    analysis.verdict = result.verdict
    analysis.rotations = result.rotations
    analysis.summary.update({
        'ph_min': analysis.ph_min,
        'verdict_ph': ENTANGLED if analysis.ph_min < -PSD_TOL else INDETERMINATE,
        'sep_form': result.form_before,
        'sep_form_min': result.form_after,
        'verdict_form': SEPARABLE if result.verdict == SEPARABLE else INDETERMINATE,
    })
    if result.verdict == SEPARABLE:
        analysis.certificate = decompose3(g, None if result.rotations.is_identity() else result.rotations)


def analyze(rho, cuts=None, config=None, threads=1, tol=DEFAULT_TOLERANCE):
    """
    Analyze a validated DensityMatrix. `cuts` restricts the partial-transpose
    tests to the given qubits; `config` tunes the three-qubit minimizer.
    """
    analysis = Analysis(rho.n_qubits)
    if rho.n_qubits == 1:
        _analyze_one(analysis, rho)
    elif rho.n_qubits == 2:
        _analyze_two(analysis, rho, cuts)
    else:
        _analyze_three(analysis, rho, cuts, config or MinimizeConfig(), threads)

    if analysis.certificate is not None:
        analysis.verification = verify(analysis.certificate, rho, tol)
        if not analysis.verification.passed:
            logger.error('Certificate failed verification (residual {0:.3e}); dropping it'.format(analysis.verification.residual_max_abs))
            analysis.certificate = None
            _undecided(analysis, 'certificate failed verification (residual {0:.3e}, weight error {1:.3e}, factor violation {2:.3e}) and was dropped'.format(
                analysis.verification.residual_max_abs, analysis.verification.weight_sum_error, analysis.verification.worst_factor_violation))
    logger.debug('analysis verdict {0}'.format(analysis.verdict))
    return analysis
