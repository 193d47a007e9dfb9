import logging
import sys

import numpy as np

from . import __version__
from .analysis import analyze
from .corr3 import MinimizeConfig, minimize_sep_form
from .decomposition import (
    SeparableDecomposition, Term, DEFAULT_TOLERANCE, ENTANGLED, INDETERMINATE, SEPARABLE, verify,
)
from .density import BadDimension, InvalidDensityMatrix, bloch_state, validate
from .ensemble import Study
from .hs import HS2, g_extract, g_reconstruct, hs2_reconstruct
from .middleware import InputError, Middleware
from .schema import (
    request_schema, response_schema, CERTIFICATE_SCHEMA, MINIMIZE_SCHEMA, REPORT_SCHEMA, STATE_FILE_SCHEMA,
)


EXIT_SEPARABLE      = 0
EXIT_IO             = 1
EXIT_INVALID_STATE  = 2
EXIT_ENTANGLED      = 3
EXIT_INDETERMINATE  = 4

VERDICT_EXIT_CODES = {
    SEPARABLE:      EXIT_SEPARABLE,
    ENTANGLED:      EXIT_ENTANGLED,
    INDETERMINATE:  EXIT_INDETERMINATE,
}

CORRELATION_RESIDUAL_TOL = 1e-10


class NotCorrelationForm(InvalidDensityMatrix): pass


class BaseCommand(object):
    """
    Shared plumbing for the subcommands: reading a state file through the
    middleware, turning numpy objects into JSON-ready documents and back.
    """
    def __init__(self, logger=None, threads=1, middleware=None):
        if logger is None:
            logger = logging.getLogger('sepkit')
        self.logger     = logger
        self.threads    = threads
        self.middleware = middleware or Middleware(logger)

    def execute(self, path):
        """
        Returns (exit code, output document text).
        """
        context = {}
        self.middleware.process_request(self, path, context)
        code = self.run(context)
        self.middleware.process_response(self, context)
        return code, context.get('body')

    def deserialize_matrix(self, rows):
        try:
            return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
        except ValueError:
            raise BadDimension('Matrix rows have different lengths')

    def deserialize_state(self, doc):
        n_qubits = doc['qubits']
        if 'matrix' in doc:
            return validate(self.deserialize_matrix(doc['matrix']), n_qubits)

        coefficients = doc['coefficients']
        if n_qubits == 1:
            if set(coefficients) - {'r'}:
                raise InputError('A one-qubit state only takes an "r" Bloch vector')
            m = bloch_state(coefficients.get('r', (0.0, 0.0, 0.0)))
        elif n_qubits == 2:
            if 'g' in coefficients:
                raise InputError('"g" coefficients describe three qubits, not two')
            m = hs2_reconstruct(HS2(coefficients.get('r'), coefficients.get('s'), coefficients.get('t')))
        else:
            if set(coefficients) - {'g'}:
                raise InputError('Three-qubit coefficient input only takes "g"')
            m = g_reconstruct(coefficients.get('g', np.zeros((3, 3, 3))))
        return validate(m, n_qubits)

    def serialize_matrix(self, m):
        return [[[float(np.real(z)), float(np.imag(z))] for z in row] for row in np.asarray(m)]

    def serialize_verification(self, report):
        return {
            'residual_max_abs':         report.residual_max_abs,
            'weight_sum_error':         report.weight_sum_error,
            'worst_factor_violation':   report.worst_factor_violation,
            'tolerance':                float(report.tolerance),
            'verdict':                  report.verdict,
        }

    def serialize_certificate(self, decomposition, verification=None):
        data = {
            'qubits':       decomposition.n_qubits,
            'frame_note':   decomposition.frame_note,
            'terms': [
                {'weight': term.weight, 'factors': [self.serialize_matrix(f) for f in term.factors]}
                for term in decomposition.terms
            ],
        }
        if decomposition.frame:
            data['frame'] = {
                name: np.asarray(value, dtype=float).tolist()
                for name, value in sorted(decomposition.frame.items())
            }
        if verification is not None:
            data['verification'] = self.serialize_verification(verification)
        return data

    def deserialize_certificate(self, doc):
        terms = [
            Term(term['weight'], [self.deserialize_matrix(factor) for factor in term['factors']])
            for term in doc['terms']
        ]
        return SeparableDecomposition(doc['qubits'], terms, doc.get('frame_note'))

    def provenance(self, context):
        return {
            'tool':         'sepkit',
            'version':      __version__,
            'input_digest': context['digest'],
        }

    def serialize_analysis(self, analysis, context):
        data = self.provenance(context)
        data.update({
            'qubits':   analysis.n_qubits,
            'verdict':  analysis.verdict,
            'criteria': [
                {'name': c.name, 'value': c.value, 'threshold': c.threshold, 'outcome': c.outcome}
                for c in analysis.criteria
            ],
            'certificate': None,
            'notes': list(analysis.notes),
            'rotations': None,
            'pt_cuts': [
                {'subsystem': report.subsystem, 'eigenvalues': [float(x) for x in report.pt_eigenvalues]}
                for report in analysis.pt_reports
            ],
        })
        if analysis.certificate is not None:
            data['certificate'] = self.serialize_certificate(analysis.certificate, analysis.verification)
        if analysis.rotations is not None:
            data['rotations'] = [o.tolist() for o in analysis.rotations.rotations]
        return data


@request_schema(STATE_FILE_SCHEMA, method_name='run')
@response_schema(REPORT_SCHEMA, method_name='run')
class AnalyzeCommand(BaseCommand):
    def __init__(self, cuts=None, config=None, **kwargs):
        super(AnalyzeCommand, self).__init__(**kwargs)
        self.cuts   = cuts
        self.config = config

    def run(self, context):
        rho = self.deserialize_state(context['doc'])
        analysis = analyze(rho, self.cuts, self.config, self.threads)
        for note in analysis.notes:
            self.logger.info(note)
        context['analysis'] = analysis
        context['result'] = self.serialize_analysis(analysis, context)
        return VERDICT_EXIT_CODES[analysis.verdict]


@request_schema(STATE_FILE_SCHEMA, method_name='run')
@request_schema(CERTIFICATE_SCHEMA, method_name='reload')
@response_schema(CERTIFICATE_SCHEMA, method_name='run')
class DecomposeCommand(BaseCommand):
    """
    Writes the certificate of a separable state. Anything short of a
    verified certificate is a failure: 3 when the state is entangled, 4 when
    no constructive certificate is available.
    """
    def __init__(self, out=None, pure=False, config=None, tol=DEFAULT_TOLERANCE, **kwargs):
        super(DecomposeCommand, self).__init__(**kwargs)
        self.out    = out
        self.pure   = pure
        self.config = config
        self.tol    = tol

    def run(self, context):
        rho = self.deserialize_state(context['doc'])
        context['state'] = rho
        analysis = analyze(rho, config=self.config, threads=self.threads, tol=self.tol)
        if analysis.verdict == ENTANGLED:
            self.logger.error('State is entangled (partial-transpose minimum {0!r}); no certificate exists'.format(analysis.ph_min))
            return EXIT_ENTANGLED
        if analysis.certificate is None:
            for note in analysis.notes:
                self.logger.error(note)
            self.logger.error('No constructive certificate available (verdict {0})'.format(analysis.verdict))
            return EXIT_INDETERMINATE

        certificate = analysis.certificate.purified() if self.pure else analysis.certificate
        verification = verify(certificate, rho, self.tol)
        context['result'] = self.serialize_certificate(certificate, verification)
        return EXIT_SEPARABLE if verification.passed else EXIT_INDETERMINATE

    def execute(self, path):
        code, body = super(DecomposeCommand, self).execute(path)
        if body is None or self.out is None:
            return code, body

        with open(self.out, 'w') as handle:
            handle.write(body + '\n')
        if not self.reverify(self.out, path):
            return EXIT_INDETERMINATE, None
        return code, None

    def reverify(self, certificate_path, state_path):
        """
        Load a written certificate and check it against the state file again.
        """
        context = {}
        self.middleware.process_request(self, certificate_path, context, method_name='reload')
        certificate = self.deserialize_certificate(context['doc'])

        state_context = {}
        self.middleware.process_request(self, state_path, state_context)
        rho = self.deserialize_state(state_context['doc'])

        report = verify(certificate, rho, self.tol)
        if not report.passed:
            self.logger.error('Written certificate does not re-verify (residual {0!r})'.format(report.residual_max_abs))
        else:
            self.logger.debug('Written certificate re-verified, residual {0!r}'.format(report.residual_max_abs))
        return report.passed


@request_schema(STATE_FILE_SCHEMA, method_name='run')
@response_schema(MINIMIZE_SCHEMA, method_name='run')
class MinimizeCommand(BaseCommand):
    def __init__(self, config=None, **kwargs):
        super(MinimizeCommand, self).__init__(**kwargs)
        self.config = config or MinimizeConfig()

    def run(self, context):
        rho = self.deserialize_state(context['doc'])
        if rho.n_qubits != 3:
            raise NotCorrelationForm('minimize needs a three-qubit state, got {0} qubits'.format(rho.n_qubits), rho.n_qubits)
        g, residual = g_extract(rho)
        if residual > CORRELATION_RESIDUAL_TOL:
            raise NotCorrelationForm(
                'State has lower-order Pauli terms (residual {0:.3e}); only pure three-qubit correlation states can be minimized'.format(residual),
                residual,
            )

        before = float(np.sum(np.abs(g)))
        rotations, _, after = minimize_sep_form(g, self.config, self.threads)
        data = self.provenance(context)
        data.update({
            'before':           before,
            'after':            float(after),
            'angles':           rotations.euler_angles(),
            'sufficient_after': bool(after <= 1.0 + 1e-10),
            'restarts':         self.config.restarts,
            'seed':             self.config.seed,
        })
        context['result'] = data
        return EXIT_SEPARABLE


class EnsembleCommand(BaseCommand):
    def __init__(self, kind, count, seed=0, n_qubits=2, config=None, timings=False, **kwargs):
        super(EnsembleCommand, self).__init__(**kwargs)
        self.study = Study(kind, count, seed, n_qubits, config, self.threads, timings)

    def execute(self, path=None):
        if path is None or path == '-':
            self.study.write(sys.stdout)
            return EXIT_SEPARABLE, None
        try:
            with open(path, 'w', newline='') as handle:
                self.study.write(handle)
        except (IOError, OSError) as error:
            raise InputError('Could not write {0}: {1}'.format(path, error))
        return EXIT_SEPARABLE, None
