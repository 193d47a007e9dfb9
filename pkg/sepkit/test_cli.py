import json
import unittest.mock

import numpy as np

from . import __version__
from .cli import THREADS_VARIABLE, resolve_threads
from .commands import DecomposeCommand
from .decomposition import verify
from .test_base import BaseTestCase
from .test_fixtures import (
    bell_phi_plus, coefficient_doc, ghz, identity_certificate, maximally_mixed, matrix_doc, product_state, single_entry_g,
    werner,
)


class AnalyzeCliTest(BaseTestCase):
    def test_maximally_mixed(self):
        code, report = self.run_json('analyze', self.write_doc(matrix_doc(maximally_mixed(2))))
        self.assertEqual(code, 0)
        self.assertEqual(report['verdict'], 'Separable')
        self.assertEqual(report['tool'], 'sepkit')
        self.assertEqual(report['version'], __version__)
        self.assertEqual(len(report['input_digest']), 64)
        self.assertEqual(report['certificate']['verification']['verdict'], 'pass')

    def test_bell(self):
        code, report = self.run_json('analyze', self.write_doc(matrix_doc(bell_phi_plus())))
        self.assertEqual(code, 3)
        self.assertEqual(report['verdict'], 'Entangled')
        self.assertIsNone(report['certificate'])
        self.assertAlmostEqual(min(report['pt_cuts'][0]['eigenvalues']), -0.5)

    def test_werner_boundary(self):
        code, report = self.run_json('analyze', self.write_doc(matrix_doc(werner(1.0 / 3))))
        self.assertEqual(code, 0)
        self.assertEqual(len(report['certificate']['terms']), 6)

    def test_coefficient_file(self):
        path = self.write_doc(coefficient_doc(2, t=np.diag([-0.2, -0.2, -0.2])))
        code, report = self.run_json('analyze', path)
        self.assertEqual(code, 0)
        self.assertEqual(report['qubits'], 2)

    def test_three_qubit_rotations(self):
        path = self.write_doc(coefficient_doc(3, g=single_entry_g(0.5)))
        code, report = self.run_json('analyze', '--restarts', '2', path)
        self.assertEqual(code, 0)
        self.assertEqual(np.shape(report['rotations']), (3, 3, 3))

    def test_cut_option(self):
        code, report = self.run_json('analyze', '--cut', '1', self.write_doc(matrix_doc(bell_phi_plus())))
        self.assertEqual(code, 3)
        self.assertEqual([cut['subsystem'] for cut in report['pt_cuts']], [1])

    def test_bad_cut(self):
        code, _ = self.run_cli('analyze', '--cut', '5', self.write_doc(matrix_doc(bell_phi_plus())))
        self.assertEqual(code, 1)

    def test_digest_tracks_input(self):
        first = self.run_json('analyze', self.write_doc(matrix_doc(werner(0.1)), 'a.json'))[1]
        second = self.run_json('analyze', self.write_doc(matrix_doc(werner(0.2)), 'b.json'))[1]
        self.assertNotEqual(first['input_digest'], second['input_digest'])


class InvalidInputCliTest(BaseTestCase):
    def test_failed_verification_exits_indeterminate(self):
        state = self.write_doc(matrix_doc(werner(0.2)))
        with unittest.mock.patch('sepkit.analysis.decompose_corr', return_value=identity_certificate()):
            code, report = self.run_json('analyze', state)
        self.assertEqual(code, 4)
        self.assertEqual(report['verdict'], 'Indeterminate')
        self.assertIsNone(report['certificate'])

    def test_missing_file(self):
        code, out = self.run_cli('analyze', self.path('missing.json'))
        self.assertEqual(code, 1)
        self.assertEqual(out, '')

    def test_malformed_json(self):
        path = self.path('broken.json')
        with open(path, 'w') as handle:
            handle.write('{"qubits": 2, "matrix": [')
        self.assertEqual(self.run_cli('analyze', path)[0], 1)

    def test_schema_violation(self):
        self.assertEqual(self.run_cli('analyze', self.write_doc({'qubits': 2}))[0], 1)

    def test_not_positive(self):
        doc = matrix_doc(np.diag([1.5, -0.5, 0.0, 0.0]))
        self.assertEqual(self.run_cli('analyze', self.write_doc(doc))[0], 2)

    def test_not_hermitian(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 0.2
        self.assertEqual(self.run_cli('analyze', self.write_doc(matrix_doc(m)))[0], 2)

    def test_wrong_dimension(self):
        doc = matrix_doc(np.eye(4) / 4)
        doc['qubits'] = 3
        self.assertEqual(self.run_cli('analyze', self.write_doc(doc))[0], 2)

    def test_ragged_rows(self):
        doc = matrix_doc(np.eye(2) / 2)
        doc['matrix'][1].append([0.0, 0.0])
        self.assertEqual(self.run_cli('analyze', self.write_doc(doc))[0], 2)

    def test_mismatched_coefficients(self):
        doc = coefficient_doc(2, g=single_entry_g(0.5))
        self.assertEqual(self.run_cli('analyze', self.write_doc(doc))[0], 1)


class DecomposeCliTest(BaseTestCase):
    def test_werner_to_file(self):
        state = self.write_doc(matrix_doc(werner(0.2)))
        out = self.path('certificate.json')
        code, text = self.run_cli('decompose', '--out', out, state)
        self.assertEqual(code, 0)
        self.assertEqual(text, '')
        with open(out) as handle:
            certificate = json.load(handle)
        self.assertEqual(len(certificate['terms']), 7)
        self.assertEqual(certificate['verification']['verdict'], 'pass')

        # the written file loads back into a certificate that verifies
        command = DecomposeCommand()
        self.assertTrue(verify(command.deserialize_certificate(certificate), werner(0.2)).passed)

    def test_three_qubit_coefficients(self):
        state = self.write_doc(coefficient_doc(3, g=single_entry_g(1.0)))
        out = self.path('certificate.json')
        self.assertEqual(self.run_cli('decompose', '--out', out, state)[0], 0)
        with open(out) as handle:
            self.assertEqual(len(json.load(handle)['terms']), 4)

    def test_standard_output(self):
        code, certificate = self.run_json('decompose', self.write_doc(matrix_doc(werner(0.2))))
        self.assertEqual(code, 0)
        self.assertEqual(certificate['qubits'], 2)

    def test_pure_terms(self):
        code, certificate = self.run_json('decompose', '--pure', self.write_doc(matrix_doc(werner(0.2))))
        self.assertEqual(code, 0)
        self.assertEqual(len(certificate['terms']), 10)

    def test_pure_product_state(self):
        plus_zero = self.write_doc(matrix_doc(product_state((1, 0, 0), (0, 0, 1))))
        code, certificate = self.run_json('decompose', plus_zero)
        self.assertEqual(code, 0)
        self.assertGreaterEqual(len(certificate['terms']), 1)
        self.assertEqual(certificate['verification']['verdict'], 'pass')

    def test_entangled(self):
        code, out = self.run_cli('decompose', self.write_doc(matrix_doc(bell_phi_plus())))
        self.assertEqual(code, 3)
        self.assertEqual(out, '')

    def test_no_certificate(self):
        # GHZ is not a pure-correlation state: entangled, so still no certificate
        self.assertEqual(self.run_cli('decompose', self.write_doc(matrix_doc(ghz())))[0], 3)

    def test_reverify_detects_tampering(self):
        state = self.write_doc(matrix_doc(werner(0.2)))
        out = self.path('certificate.json')
        self.run_cli('decompose', '--out', out, state)
        with open(out) as handle:
            certificate = json.load(handle)
        certificate['terms'][0]['weight'] += 0.01
        tampered = self.write_doc(certificate, 'tampered.json')
        self.assertFalse(DecomposeCommand().reverify(tampered, state))


class MinimizeCliTest(BaseTestCase):
    def test_already_minimal(self):
        path = self.write_doc(coefficient_doc(3, g=single_entry_g(0.8)))
        code, result = self.run_json('minimize', '--restarts', '4', path)
        self.assertEqual(code, 0)
        self.assertAlmostEqual(result['before'], 0.8)
        self.assertAlmostEqual(result['after'], 0.8, places=9)
        self.assertEqual(len(result['angles']), 9)
        self.assertTrue(result['sufficient_after'])
        self.assertEqual(result['restarts'], 4)

    def test_ghz_is_not_correlation_form(self):
        self.assertEqual(self.run_cli('minimize', self.write_doc(matrix_doc(ghz())))[0], 2)

    def test_two_qubit_state(self):
        self.assertEqual(self.run_cli('minimize', self.write_doc(matrix_doc(werner(0.2))))[0], 2)


class EnsembleCliTest(BaseTestCase):
    def test_standard_output(self):
        code, out = self.run_cli('ensemble', '--kind', 'corr2', '--count', '5', '--seed', '3')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(len(lines), 7)
        self.assertTrue(lines[0].startswith('index,kind,qubits'))

    def test_csv_file(self):
        path = self.path('study.csv')
        code, out = self.run_cli('ensemble', '--kind', 'separable', '--count', '4', '--csv', path, '--timings')
        self.assertEqual(code, 0)
        self.assertEqual(out, '')
        with open(path) as handle:
            header = handle.readline().strip()
        self.assertTrue(header.endswith(',seconds'))

    def test_unwritable_csv(self):
        code, _ = self.run_cli('ensemble', '--kind', 'mixed', '--count', '1', '--csv', self.path('no/such/dir.csv'))
        self.assertEqual(code, 1)


class ThreadsTest(BaseTestCase):
    def test_flag_wins(self):
        self.assertEqual(resolve_threads(3, {THREADS_VARIABLE: '5'}), 3)

    def test_environment(self):
        self.assertEqual(resolve_threads(None, {THREADS_VARIABLE: '5'}), 5)

    def test_default_is_positive(self):
        self.assertGreaterEqual(resolve_threads(None, {}), 1)
        self.assertGreaterEqual(resolve_threads(0, {}), 1)
        self.assertGreaterEqual(resolve_threads(None, {THREADS_VARIABLE: 'many'}), 1)
