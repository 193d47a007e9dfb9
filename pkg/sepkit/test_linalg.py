import numpy as np
from hypothesis import given, settings
from scipy.spatial.transform import Rotation

from . import linalg
from .linalg import ETA, PAULIS, NotHermitian
from .test_base import BaseTestCase
from .test_fixtures import angles, bounded_arrays, seeds


class KroneckerTest(BaseTestCase):
    def test_dimensions_multiply(self):
        self.assertEqual(linalg.kron(np.eye(2), np.eye(4)).shape, (8, 8))
        self.assertEqual(linalg.kron_all(*PAULIS[1:]).shape, (8, 8))

    def test_identity_product(self):
        self.assertMatrixAlmostEqual(linalg.kron_all(np.eye(2), np.eye(2), np.eye(2)), np.eye(8))


class HermitianEigenvaluesTest(BaseTestCase):
    def test_ascending(self):
        values = linalg.hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0]))
        self.assertMatrixAlmostEqual(values, [-1.0, 2.0, 3.0])

    def test_pauli_spectra(self):
        for pauli in PAULIS[1:]:
            self.assertMatrixAlmostEqual(linalg.hermitian_eigenvalues(pauli), [-1.0, 1.0])

    def test_not_hermitian(self):
        with self.assertRaises(NotHermitian) as context:
            linalg.hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
        self.assertAlmostEqual(context.exception.violation, 1.0)

    def test_not_square(self):
        with self.assertRaises(NotHermitian):
            linalg.hermitian_eigenvalues(np.zeros((2, 3)))


class Svd3Test(BaseTestCase):
    def check(self, t):
        u, d, v = linalg.svd3(t)
        self.assertTrue(linalg.is_rotation(u, 1e-10))
        self.assertTrue(linalg.is_rotation(v, 1e-10))
        self.assertMatrixAlmostEqual(u.T @ t @ v, np.diag(d), atol=1e-12)
        self.assertGreaterEqual(d[0], 0.0)
        self.assertGreaterEqual(d[1], 0.0)
        self.assertGreaterEqual(abs(d[0]), abs(d[1]))
        self.assertGreaterEqual(abs(d[1]), abs(d[2]) - 1e-15)
        det = np.linalg.det(t)
        if abs(det) > 1e-12:
            self.assertEqual(np.sign(d[2]), np.sign(det))
        return d

    @settings(max_examples=200, deadline=None)
    @given(bounded_arrays((3, 3)))
    def test_random_matrices(self, t):
        self.check(t)

    def test_improper_input_gives_negative_third_value(self):
        d = self.check(-np.eye(3))
        self.assertMatrixAlmostEqual(d, [1.0, 1.0, -1.0])

    def test_werner_correlations(self):
        d = self.check(np.diag([-0.3, -0.3, -0.3]))
        self.assertMatrixAlmostEqual(d, [0.3, 0.3, -0.3])

    def test_zero_matrix(self):
        u, d, v = linalg.svd3(np.zeros((3, 3)))
        self.assertMatrixAlmostEqual(d, np.zeros(3))
        self.assertMatrixAlmostEqual(u, np.eye(3))

    def test_rank_deficient(self):
        self.check(np.outer([1.0, 2.0, 0.5], [0.3, -0.1, 0.7]))


class RotationTest(BaseTestCase):
    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_angles_round_trip(self, seed):
        o = linalg.random_rotation(np.random.default_rng(seed))
        self.assertTrue(linalg.is_rotation(o, 1e-12))
        self.assertMatrixAlmostEqual(linalg.so3_from_angles(*linalg.angles_from_so3(o)), o, atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(angles, angles, angles)
    def test_closed_form_matches_scipy(self, alpha, beta, gamma):
        o = linalg.so3_from_angles(alpha, beta, gamma)
        self.assertMatrixAlmostEqual(o, Rotation.from_euler('ZYZ', [alpha, beta, gamma]).as_matrix(), atol=1e-12)
        self.assertTrue(linalg.is_rotation(o, 1e-12))

    @settings(max_examples=20, deadline=None)
    @given(bounded_arrays((5, 3), np.pi))
    def test_stacked_angles(self, table):
        stack = linalg.so3_from_angles(*table.T)
        self.assertEqual(stack.shape, (5, 3, 3))
        for row, o in zip(table, stack):
            self.assertMatrixAlmostEqual(o, linalg.so3_from_angles(*row))

    def test_zyz_convention(self):
        quarter = np.pi / 2
        self.assertMatrixAlmostEqual(
            linalg.so3_from_angles(quarter, 0.0, 0.0),
            [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        )

    def test_rotation_to_unitary_conjugation(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            o = linalg.random_rotation(rng)
            u = linalg.rotation_to_unitary(o)
            self.assertMatrixAlmostEqual(u @ u.conj().T, np.eye(2))
            for j in range(3):
                expected = sum(o[i, j] * PAULIS[i + 1] for i in range(3))
                self.assertMatrixAlmostEqual(u @ PAULIS[j + 1] @ u.conj().T, expected)


class LorentzTest(BaseTestCase):
    def test_boost_and_rotation_are_proper(self):
        self.assertTrue(linalg.is_proper_lorentz(linalg.lorentz_boost(0.7, (1.0, 2.0, -1.0))))
        self.assertTrue(linalg.is_proper_lorentz(linalg.lorentz_rotation(linalg.so3_from_angles(0.1, 0.2, 0.3))))

    def test_improper_rejected(self):
        self.assertFalse(linalg.is_proper_lorentz(np.diag([1.0, 1.0, 1.0, -1.0])))
        self.assertFalse(linalg.is_proper_lorentz(np.diag([-1.0, -1.0, 1.0, 1.0])))
        self.assertFalse(linalg.is_proper_lorentz(np.eye(3)))

    def test_sl2c_lift(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            l = linalg.random_lorentz(rng)
            self.assertTrue(linalg.is_proper_lorentz(l))
            a = linalg.lorentz_to_sl2c(l)
            self.assertAlmostEqual(abs(np.linalg.det(a)), 1.0, places=10)
            for nu in range(4):
                expected = sum(l[mu, nu] * PAULIS[mu] for mu in range(4))
                self.assertMatrixAlmostEqual(a @ PAULIS[nu] @ a.conj().T, expected, atol=1e-10)

    def test_minkowski_complete(self):
        boost = linalg.lorentz_boost(0.4, (0.0, 1.0, 1.0))
        basis = np.column_stack(linalg.minkowski_complete([boost[:, 0], boost[:, 1]]))
        self.assertEqual(basis.shape, (4, 4))
        self.assertMatrixAlmostEqual(basis.T @ ETA @ basis, ETA, atol=1e-12)
