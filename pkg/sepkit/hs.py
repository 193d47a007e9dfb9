"""
Hilbert-Schmidt (Pauli basis) coefficients of two- and three-qubit states.

Basis order is |0>, |1> per qubit with the first qubit most significant, so
two-qubit states are written in |00>, |01>, |10>, |11>.
"""
import itertools

import numpy as np

from .density import as_matrix
from .linalg import PAULIS, kron_all


# PAULI_2[a, b] = sigma_a (x) sigma_b, PAULI_3[a, b, c] likewise
PAULI_2 = np.array([[kron_all(pa, pb) for pb in PAULIS] for pa in PAULIS])
PAULI_3 = np.array([[[kron_all(pa, pb, pc) for pc in PAULIS] for pb in PAULIS] for pa in PAULIS])


class HS2(object):
    """
    The 15 real parameters of a two-qubit state:
    4 rho = I + r.sigma (x) I + I (x) s.sigma + sum t_mn sigma_m (x) sigma_n.
    """
    def __init__(self, r=None, s=None, t=None):
        self.r = np.zeros(3) if r is None else np.array(r, dtype=float)
        self.s = np.zeros(3) if s is None else np.array(s, dtype=float)
        self.t = np.zeros((3, 3)) if t is None else np.array(t, dtype=float)

    def is_correlation_only(self, tol=1e-10):
        return np.linalg.norm(self.r) <= tol and np.linalg.norm(self.s) <= tol

    def __repr__(self):
        return 'HS2(r={0}, s={1}, t={2})'.format(self.r.tolist(), self.s.tolist(), self.t.tolist())


class RMatrix(object):
    """
    4 rho = sum R[alpha, beta] sigma_alpha (x) sigma_beta, alpha, beta = 0..3.
    """
    def __init__(self, values):
        self.values = np.array(values, dtype=float)

    @property
    def r(self):
        return self.values[1:, 0]

    @property
    def s(self):
        return self.values[0, 1:]

    @property
    def t(self):
        return self.values[1:, 1:]

    @classmethod
    def from_hs2(cls, hs):
        values = np.zeros((4, 4))
        values[0, 0]    = 1.0
        values[1:, 0]   = hs.r
        values[0, 1:]   = hs.s
        values[1:, 1:]  = hs.t
        return cls(values)

    def to_hs2(self):
        scale = self.values[0, 0]
        return HS2(r=self.r / scale, s=self.s / scale, t=self.t / scale)


def pauli_coefficients(rho):
    """
    All tr(rho sigma_a (x) sigma_b [(x) sigma_c]) for a 2- or 3-qubit matrix.
    """
    m = as_matrix(rho)
    basis = PAULI_2 if m.shape[0] == 4 else PAULI_3
    # tr(P rho) = sum_ij P_ij rho_ji
    return np.real(np.einsum('...ij,ji->...', basis, m))


def hs2_decompose(rho):
    c = pauli_coefficients(rho)
    return HS2(r=c[1:, 0], s=c[0, 1:], t=c[1:, 1:])


def hs2_reconstruct(hs):
    return np.einsum('ab,abij->ij', RMatrix.from_hs2(hs).values, PAULI_2) / 4


def r_matrix(rho):
    return RMatrix(pauli_coefficients(rho))


def r_matrix_reconstruct(r):
    values = r.values if isinstance(r, RMatrix) else np.asarray(r, dtype=float)
    return np.einsum('ab,abij->ij', values, PAULI_2) / 4


def _lower_order_labels():
    for label in itertools.product(range(4), repeat=3):
        if label != (0, 0, 0) and 0 in label:
            yield label

LOWER_ORDER_LABELS = tuple(_lower_order_labels())


def g_extract(rho):
    """
    G[a, b, c] = tr(rho sigma_a (x) sigma_b (x) sigma_c) for a, b, c = 1..3, and
    the Frobenius norm of every other non-identity coefficient.

    A zero residual means rho is a pure three-qubit correlation state.
    """
    c = pauli_coefficients(rho)
    residual = np.sqrt(sum(c[label] ** 2 for label in LOWER_ORDER_LABELS))
    return c[1:, 1:, 1:].copy(), float(residual)


def g_reconstruct(g):
    g = np.asarray(g, dtype=float)
    return (PAULI_3[0, 0, 0] + np.einsum('abc,abcij->ij', g, PAULI_3[1:, 1:, 1:])) / 8
