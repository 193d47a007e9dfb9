import numpy as np
from hypothesis import assume, given, settings, strategies as st

from . import corr2
from .corr2 import (
    BadSpectrum, DiagonalCorrelation, NotCorrelationOnly, classify_corr, correlation_state, decompose_corr,
    diagonalize_t, pt_pairing_check, spectra_from_t, t_from_spectrum,
)
from .decomposition import ENTANGLED, SEPARABLE, NotCertifiedSeparable
from .density import InvalidState, partial_transpose, random_correlation_only, random_correlation_scaled
from .hs import hs2_decompose
from .linalg import hermitian_eigenvalues
from .test_base import BaseTestCase
from .test_fixtures import bell_phi_plus, bounded_arrays, hs_state, product_state, seeds, werner


# diagonal correlations inside the positivity tetrahedron
t_triples = bounded_arrays(3).filter(lambda t: spectra_from_t(*t).lam_rho.min() >= 0)


class SpectraTest(BaseTestCase):
    @settings(max_examples=500, deadline=None)
    @given(t_triples)
    def test_closed_form_matches_eigensolver(self, t):
        spectra = spectra_from_t(*t)
        m = correlation_state(*t)
        self.assertMatrixAlmostEqual(np.sort(spectra.lam_rho), hermitian_eigenvalues(m))
        self.assertMatrixAlmostEqual(np.sort(spectra.lam_pt), hermitian_eigenvalues(partial_transpose(m, 1)))

    @settings(max_examples=500, deadline=None)
    @given(t_triples)
    def test_pt_pairing(self, t):
        self.assertLess(pt_pairing_check(spectra_from_t(*t)), 1e-13)

    @settings(max_examples=200, deadline=None)
    @given(bounded_arrays(3), st.integers(0, 2))
    def test_one_sign_flip_swaps_spectra(self, t, axis):
        flipped = t.copy()
        flipped[axis] *= -1
        before, after = spectra_from_t(*t), spectra_from_t(*flipped)
        self.assertMatrixAlmostEqual(np.sort(after.lam_rho), np.sort(before.lam_pt), atol=1e-15)
        self.assertMatrixAlmostEqual(np.sort(after.lam_pt), np.sort(before.lam_rho), atol=1e-15)
        self.assertMatrixAlmostEqual(
            hermitian_eigenvalues(correlation_state(*flipped)),
            hermitian_eigenvalues(partial_transpose(correlation_state(*t), 1)),
        )

    @settings(max_examples=200, deadline=None)
    @given(t_triples, st.integers(0, 2))
    def test_two_sign_flips_keep_spectra(self, t, kept):
        flipped = -t
        flipped[kept] *= -1
        before, after = spectra_from_t(*t), spectra_from_t(*flipped)
        self.assertMatrixAlmostEqual(np.sort(after.lam_rho), np.sort(before.lam_rho), atol=1e-15)
        self.assertMatrixAlmostEqual(np.sort(after.lam_pt), np.sort(before.lam_pt), atol=1e-15)
        self.assertEqual(classify_corr(*flipped).verdict, classify_corr(*t).verdict)

    def test_bell_spectrum(self):
        spectra = spectra_from_t(1, -1, 1)
        self.assertMatrixAlmostEqual(spectra.lam_rho, [0.0, 0.0, 1.0, 0.0])
        self.assertAlmostEqual(spectra.lam_pt.min(), -0.5)


class InverseSpectrumTest(BaseTestCase):
    def test_bell(self):
        lam = spectra_from_t(1, -1, 1).lam_rho
        self.assertEqual(t_from_spectrum(lam), (1.0, -1.0, 1.0))
        self.assertEqual(t_from_spectrum(lam, relabel=True), (-1.0, 1.0, 1.0))

    @settings(max_examples=200, deadline=None)
    @given(t_triples)
    def test_round_trip(self, t):
        self.assertMatrixAlmostEqual(t_from_spectrum(spectra_from_t(*t).lam_rho), t)

    def test_relabel_is_same_state_up_to_local_unitary(self):
        t = (0.2, -0.1, 0.3)
        flipped = t_from_spectrum(spectra_from_t(*t).lam_rho, relabel=True)
        self.assertMatrixAlmostEqual(flipped, (-0.2, 0.1, 0.3))
        self.assertMatrixAlmostEqual(np.sort(spectra_from_t(*flipped).lam_rho), np.sort(spectra_from_t(*t).lam_rho))

    def test_bad_sum(self):
        with self.assertRaises(BadSpectrum):
            t_from_spectrum([0.5, 0.5, 0.5, 0.0])


class DiagonalizeTest(BaseTestCase):
    def test_rotations_recover_t(self):
        rho = random_correlation_only(2, 0.5, 17)
        hs = hs2_decompose(rho)
        d = diagonalize_t(hs)
        self.assertMatrixAlmostEqual(d.o_a @ np.diag(d.t) @ d.o_b.T, hs.t)
        self.assertGreaterEqual(d.t1, d.t2)
        self.assertGreaterEqual(d.t2, abs(d.t3) - 1e-15)

    def test_not_correlation_only(self):
        with self.assertRaises(NotCorrelationOnly):
            diagonalize_t(hs2_decompose(product_state((0.5, 0, 0), (0, 0, 0))))


class ClassifyTest(BaseTestCase):
    def test_criteria_agree(self):
        counts = {SEPARABLE: 0, ENTANGLED: 0}
        for index in range(10000):
            d = diagonalize_t(hs2_decompose(random_correlation_only(2, 0.5, [5, index])))
            result = classify_corr(d.t1, d.t2, d.t3)
            self.assertEqual(len(set(c.outcome for c in result.criteria)), 1)
            counts[result.verdict] += 1
        self.assertGreater(counts[SEPARABLE], 0)
        self.assertGreater(counts[ENTANGLED], 0)

    def test_criteria_share_the_boundary(self):
        # sum|t| - 1 = 2e-10 is inside every tolerance; 8e-10 is outside all three
        inside = (1 + 2e-10) / 3
        result = classify_corr(inside, inside, -inside)
        self.assertVerdict(result, SEPARABLE)
        self.assertEqual(set(c.outcome for c in result.criteria), {SEPARABLE})
        outside = (1 + 8e-10) / 3
        result = classify_corr(outside, outside, -outside)
        self.assertVerdict(result, ENTANGLED)
        self.assertEqual(set(c.outcome for c in result.criteria), {ENTANGLED})

    def test_werner_threshold(self):
        below = 1.0 / 3 - 1e-9
        above = 1.0 / 3 + 1e-9
        self.assertVerdict(classify_corr(-below, -below, -below), SEPARABLE)
        result = classify_corr(-above, -above, -above)
        self.assertVerdict(result, ENTANGLED)
        ph = [c for c in result.criteria if c.name == 'ph_min_eigenvalue'][0]
        self.assertAlmostEqual(ph.value, (1 - 3 * above) / 4, places=15)
        self.assertLess(ph.value, 0)

    def test_bell(self):
        self.assertVerdict(classify_corr(1, -1, 1), ENTANGLED)

    def test_maximally_mixed(self):
        self.assertVerdict(classify_corr(0, 0, 0), SEPARABLE)

    def test_outside_positivity(self):
        with self.assertRaises(InvalidState):
            classify_corr(1, 1, 1)


class DecomposeTest(BaseTestCase):
    def certificate_for(self, rho):
        return decompose_corr(diagonalize_t(hs2_decompose(rho)))

    def test_werner_boundary_six_terms(self):
        rho = werner(1.0 / 3)
        certificate = self.certificate_for(rho)
        self.assertEqual(len(certificate), 6)
        self.assertCertificateVerifies(certificate, rho)

    def test_werner_seven_terms(self):
        for p in (0.2, 1.0 / 3 - 1e-9):
            rho = werner(p)
            certificate = self.certificate_for(rho)
            self.assertEqual(len(certificate), 7)
            self.assertCertificateVerifies(certificate, rho)

    def test_factors_are_pure(self):
        certificate = self.certificate_for(werner(0.2))
        for term in certificate.terms[:6]:
            for factor in term.factors:
                self.assertAlmostEqual(float(np.real(np.trace(factor @ factor))), 1.0)

    def test_rotated_frame(self):
        t = np.array([[0.1, 0.2, 0.0], [0.0, -0.1, 0.1], [0.05, 0.0, 0.2]])
        rho = hs_state(t=t)
        certificate = self.certificate_for(rho)
        self.assertIsNotNone(certificate.frame_note)
        self.assertCertificateVerifies(certificate, rho)

    @settings(max_examples=300, deadline=None)
    @given(seeds, st.floats(0.05, 1.0))
    def test_random_certified_states(self, seed, fraction):
        rho = random_correlation_scaled(2, fraction, seed)
        d = diagonalize_t(hs2_decompose(rho))
        assume(classify_corr(d.t1, d.t2, d.t3).verdict == SEPARABLE)
        certificate = decompose_corr(d)
        report = self.assertCertificateVerifies(certificate, rho)
        self.assertLessEqual(report.weight_sum_error, 1e-12)
        purified = certificate.purified()
        self.assertCertificateVerifies(purified, rho)
        for term in purified.terms:
            for factor in term.factors:
                self.assertAlmostEqual(float(np.real(np.trace(factor @ factor))), 1.0, places=12)

    def test_entangled_rejected(self):
        with self.assertRaises(NotCertifiedSeparable):
            decompose_corr(DiagonalCorrelation(1, 1, -1))

    def test_bell_not_decomposed(self):
        with self.assertRaises(NotCertifiedSeparable):
            self.certificate_for(bell_phi_plus())

    def test_separability_form_is_frame_dependent(self):
        t = np.array([[0.3, 0.3], [0.3, -0.3]])
        full = np.zeros((3, 3))
        full[:2, :2] = t
        self.assertAlmostEqual(corr2.separability_form2(full), 1.2)
        d = diagonalize_t(hs2_decompose(hs_state(t=full)))
        self.assertAlmostEqual(float(np.sum(np.abs(d.t))), 2 * 0.3 * np.sqrt(2))
