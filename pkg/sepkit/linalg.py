"""
Small dense linear algebra for qubit states: Pauli matrices, Kronecker
products, Hermitian spectra, 3x3 SVD with proper rotations, SO(3) and
Minkowski-metric helpers.
"""
from functools import reduce

import numpy as np
import scipy.linalg
from scipy.spatial.transform import Rotation


HERMITIAN_TOL   = 1e-10
ROTATION_TOL    = 1e-12
LORENTZ_TOL     = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# sigma_0 .. sigma_3
PAULIS = (I2, SX, SY, SZ)

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


class NotHermitian(ValueError):
    def __init__(self, violation):
        super(NotHermitian, self).__init__('Matrix is not Hermitian (max |m - m^H| = {0:.3e})'.format(violation))
        self.violation = violation


def kron(a, b):
    """
    Kronecker product of two matrices; dimensions multiply.
    """
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(*factors):
    return reduce(np.kron, factors)


def hermitian_violation(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eigenvalues(m, tol=HERMITIAN_TOL):
    """
    Ascending real eigenvalues of a Hermitian matrix.

    Raises NotHermitian when the matrix is not square or departs from its
    conjugate transpose by more than `tol`.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(float('inf'))
    violation = hermitian_violation(m)
    if violation > tol:
        raise NotHermitian(violation)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def is_rotation(o, tol=ROTATION_TOL):
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        return False
    return (np.max(np.abs(o.T @ o - np.eye(3))) <= tol
            and abs(np.linalg.det(o) - 1.0) <= tol)


def svd3(t):
    """
    Singular value decomposition of a real 3x3 matrix with proper rotations.

    Returns (u, d, v) with u.T @ t @ v == diag(d), det u = det v = +1,
    |d1| >= |d2| >= |d3|, d1, d2 >= 0 and sign(d3) == sign(det t).
    """
    t = np.asarray(t, dtype=float)
    if not np.any(t):
        return np.eye(3), np.zeros(3), np.eye(3)

    u, d, vt = np.linalg.svd(t)
    v = vt.T.copy()
    u = u.copy()

    # Joint column negations leave u diag(d) v^T unchanged; pick the sign
    # that makes each column of u point along its dominant axis.
    for i in range(3):
        if u[np.argmax(np.abs(u[:, i])), i] < 0:
            u[:, i] *= -1
            v[:, i] *= -1

    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
        d[2] *= -1
    if np.linalg.det(v) < 0:
        v[:, 2] *= -1
        d[2] *= -1
    return u, d, v


def so3_from_angles(alpha, beta, gamma):
    """
    ZYZ Euler rotation Rz(alpha) Ry(beta) Rz(gamma). Array arguments give a
    stack of rotations with shape angles.shape + (3, 3).
    """
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    return np.stack([
        np.stack([ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb], axis=-1),
        np.stack([sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb], axis=-1),
        np.stack([-sb * cg, sb * sg, cb], axis=-1),
    ], axis=-2)


def angles_from_so3(o):
    """
    Inverse of so3_from_angles (alpha, beta, gamma).
    """
    return Rotation.from_matrix(np.asarray(o, dtype=float)).as_euler('ZYZ')


def random_rotation(rng):
    return Rotation.random(None, rng).as_matrix()


def rotation_to_unitary(o):
    """
    SU(2) lift U of a proper rotation, with U sigma_j U^H = sum_i o[i, j] sigma_i.

    Either element of the double cover is valid; this one comes from the
    unit quaternion scipy reports.
    """
    x, y, z, w = Rotation.from_matrix(np.asarray(o, dtype=float)).as_quat()
    return w * I2 - 1j * (x * SX + y * SY + z * SZ)


def is_proper_lorentz(l, tol=LORENTZ_TOL):
    l = np.asarray(l, dtype=float)
    if l.shape != (4, 4):
        return False
    return (np.max(np.abs(l @ ETA @ l.T - ETA)) <= tol
            and abs(np.linalg.det(l) - 1.0) <= tol
            and l[0, 0] >= 1.0 - tol)


def lorentz_boost(rapidity, axis):
    """
    Pure boost with the given rapidity along a (not necessarily unit) axis.
    """
    axis = np.asarray(axis, dtype=float)
    n = axis / np.linalg.norm(axis)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    boost = np.eye(4)
    boost[0, 0] = ch
    boost[0, 1:] = sh * n
    boost[1:, 0] = sh * n
    boost[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return boost


def lorentz_rotation(o):
    l = np.eye(4)
    l[1:, 1:] = o
    return l


def random_lorentz(rng, max_rapidity=1.0):
    """
    Random proper orthochronous Lorentz matrix: rotation, boost, rotation.
    """
    axis = rng.standard_normal(3)
    boost = lorentz_boost(rng.uniform(0.0, max_rapidity), axis)
    return lorentz_rotation(random_rotation(rng)) @ boost @ lorentz_rotation(random_rotation(rng))


def lorentz_to_sl2c(l):
    """
    Lift a proper orthochronous Lorentz matrix to A in SL(2, C) so that
    A sigma_nu A^H = sum_mu l[mu, nu] sigma_mu.

    The polar decomposition l = rotation . boost is lifted factor by factor.
    """
    l = np.asarray(l, dtype=float)
    rot, boost = scipy.linalg.polar(l, side='right')
    velocity = boost[1:, 0]
    sh = np.linalg.norm(velocity)
    if sh == 0.0:
        lifted_boost = I2
    else:
        n = velocity / sh
        chi = np.arcsinh(sh)
        lifted_boost = np.cosh(chi / 2) * I2 + np.sinh(chi / 2) * (n[0] * SX + n[1] * SY + n[2] * SZ)
    return rotation_to_unitary(rot[1:, 1:]) @ lifted_boost


def minkowski_complete(columns, dim=4):
    """
    Extend a list of eta-orthonormal vectors (first one timelike) to an
    eta-orthonormal basis by Gram-Schmidt over the standard basis.
    """
    basis = [np.asarray(c, dtype=float) for c in columns]
    for candidate in np.eye(dim)[1:]:
        if len(basis) == dim:
            break
        v = candidate.copy()
        for b in basis:
            v = v - (b @ ETA @ v) / (b @ ETA @ b) * b
        norm = v @ ETA @ v
        if norm < -1e-12:
            basis.append(v / np.sqrt(-norm))
    return basis
