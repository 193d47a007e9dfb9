"""
Three-qubit correlation states 8 rho = I + sum G_abc sigma_a (x) sigma_b (x) sigma_c.

sum |G_abc| <= 1 is sufficient for separability and yields an explicit
ensemble; the form depends on the local frames, so it is minimized over
SO(3) x SO(3) x SO(3). A negative partial transpose on any single-qubit cut
certifies entanglement; between the two lies an undecided region.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np
import scipy.optimize

from . import linalg
from .decomposition import (
    Criterion, InconsistentCriteria, NotCertifiedSeparable, SeparableDecomposition, Term,
    ENTANGLED, INDETERMINATE, SEPARABLE, normalized,
)
from .density import PSD_TOL, InvalidState, bloch_state, ph_all_cuts
from .hs import g_reconstruct


SEPARABILITY_TOL    = 1e-10
ZERO_WEIGHT         = 1e-14
RESTART_CHUNK       = 4
SIMPLEX_STEP        = 0.4

# sign patterns on (sigma_a, sigma_b, sign(G) sigma_c); each product is +1
SIGN_PATTERNS = ((1, -1, -1), (1, 1, 1), (-1, -1, 1), (-1, 1, -1))

logger = logging.getLogger('sepkit.corr3')


class RotationTriple(object):
    def __init__(self, o_a=None, o_b=None, o_c=None):
        self.o_a = np.eye(3) if o_a is None else np.asarray(o_a, dtype=float)
        self.o_b = np.eye(3) if o_b is None else np.asarray(o_b, dtype=float)
        self.o_c = np.eye(3) if o_c is None else np.asarray(o_c, dtype=float)

    @property
    def rotations(self):
        return (self.o_a, self.o_b, self.o_c)

    def compose(self, other):
        """
        Rotating by self and then by other equals rotating by self.compose(other).
        """
        return RotationTriple(*(mine @ theirs for mine, theirs in zip(self.rotations, other.rotations)))

    def is_identity(self, tol=1e-12):
        return all(np.max(np.abs(o - np.eye(3))) <= tol for o in self.rotations)

    def euler_angles(self):
        """
        Nine ZYZ Euler angles, three per qubit.
        """
        return [float(angle) for o in self.rotations for angle in linalg.angles_from_so3(o)]

    @classmethod
    def from_angles(cls, angles):
        return cls(*(linalg.so3_from_angles(*angles[3 * i:3 * i + 3]) for i in range(3)))


class MinimizeConfig(object):
    """
    Settings for the separability-form minimizer.

    `target` stops between restart chunks once the best value is at or
    below it; None runs every restart.
    """
    def __init__(self, restarts=32, max_iters=2000, tol=1e-8, seed=0, target=None):
        if restarts < 1:
            raise ValueError('restarts must be positive')
        if tol <= 0:
            raise ValueError('tol must be positive')
        self.restarts   = restarts
        self.max_iters  = max_iters
        self.tol        = tol
        self.seed       = seed
        self.target     = target


class ThreeQubitVerdict(object):
    def __init__(self, verdict, criteria, pt_reports, form_before, form_after, rotations, rotated_g):
        self.verdict        = verdict
        self.criteria       = criteria
        self.pt_reports     = pt_reports
        self.form_before    = form_before
        self.form_after     = form_after
        self.rotations      = rotations
        self.rotated_g      = rotated_g


def sep_form(g):
    return float(np.sum(np.abs(g)))


def rotate_g(g, q):
    """
    G'_ijk = sum_abc (o_a)_ai (o_b)_bj (o_c)_ck G_abc: the coefficients of the
    same state in the rotated local frames.
    """
    return np.einsum('abc,ai,bj,ck->ijk', np.asarray(g, dtype=float), q.o_a, q.o_b, q.o_c)


def _matricize(g, mode):
    return np.reshape(np.moveaxis(g, mode, 0), (g.shape[mode], -1))


def hosvd_rotations(g):
    """
    Per-mode left singular vectors of the unfoldings, made proper; rotating
    by them gives the HOSVD core tensor.
    """
    rotations = []
    for mode in range(3):
        u = np.linalg.svd(_matricize(g, mode))[0]
        if np.linalg.det(u) < 0:
            u[:, 2] *= -1
        rotations.append(u)
    return RotationTriple(*rotations)


def _restart_base(g, cfg, index):
    if index == 0:
        return hosvd_rotations(g)
    if index == 1:
        return RotationTriple()
    rng = np.random.default_rng([cfg.seed, index])
    return RotationTriple(*(linalg.random_rotation(rng) for _ in range(3)))


def _rotated_form(angles, g):
    """
    sum |G'| after rotating g by the ZYZ angles, three per qubit.
    """
    o = linalg.so3_from_angles(*np.reshape(angles, (3, 3)).T)
    return float(np.sum(np.abs(np.einsum('abc,ai,bj,ck->ijk', g, o[0], o[1], o[2]))))


def _run_restart(g, cfg, index, floor=0.0):
    base = _restart_base(g, cfg, index)
    start = rotate_g(g, base)
    if sep_form(start) <= floor:
        logger.debug('restart {0}: start frame already at the lower bound'.format(index))
        return sep_form(start), index, base, start

    x0 = np.zeros(9)
    simplex = np.vstack([x0, x0 + SIMPLEX_STEP * np.eye(9)])
    result = scipy.optimize.minimize(
        _rotated_form, x0, args=(start,), method='Nelder-Mead',
        options={'maxiter': cfg.max_iters, 'xatol': cfg.tol, 'fatol': cfg.tol, 'initial_simplex': simplex},
    )
    triple = base.compose(RotationTriple.from_angles(result.x))
    rotated = rotate_g(g, triple)
    value = sep_form(rotated)
    logger.debug('restart {0}: separability form {1:.12g} after {2} evaluations'.format(index, value, result.nfev))
    return value, index, triple, rotated


def _chunks(restarts):
    """
    Restart 0 alone, then fixed chunks of RESTART_CHUNK.
    """
    yield range(0, min(1, restarts))
    for start in range(1, restarts, RESTART_CHUNK):
        yield range(start, min(start + RESTART_CHUNK, restarts))


def minimize_sep_form(g, cfg=None, threads=1):
    """
    Minimize sum |G'_abc| over local rotations.

    Restarts: 0 starts from the HOSVD frames, 1 from the identity, the rest
    from rotations seeded by (cfg.seed, index). Restart 0 runs alone and the
    rest in fixed chunks, spread over `threads` worker processes; the best
    (value, index) wins, so the result does not depend on `threads`. Stops
    early once the Frobenius norm (a lower bound) or cfg.target is reached.
    Returns (RotationTriple, rotated G, value).
    """
    cfg = cfg or MinimizeConfig()
    g = np.asarray(g, dtype=float)
    initial = sep_form(g)
    floor = float(np.linalg.norm(g)) * (1 + 1e-12) + 1e-15

    best = None
    executor = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for indices in _chunks(cfg.restarts):
            if executor is not None and len(indices) > 1:
                results = list(executor.map(_run_restart, repeat(g), repeat(cfg), indices, repeat(floor)))
            else:
                results = [_run_restart(g, cfg, index, floor) for index in indices]
            for result in results:
                if best is None or result[:2] < best[:2]:
                    best = result
            if best[0] <= floor:
                break
            if cfg.target is not None and best[0] <= cfg.target:
                break
    finally:
        if executor is not None:
            executor.shutdown()

    value, _, triple, rotated = best
    if value > initial:
        return RotationTriple(), g.copy(), initial
    return triple, rotated, value


def classify3(g, cfg=None, threads=1, cuts=None):
    """
    Separable when the (minimized) separability form is at most 1, Entangled
    when a single-qubit partial transpose has a negative eigenvalue,
    Indeterminate otherwise.
    """
    g = np.asarray(g, dtype=float)
    m = g_reconstruct(g)
    smallest = linalg.hermitian_eigenvalues(m)[0]
    if smallest < -PSD_TOL:
        raise InvalidState('G does not describe a positive state (eigenvalue {0:.3e})'.format(smallest), float(smallest))

    pt_reports = ph_all_cuts(m, cuts)
    pt_min = min(report.min_eigenvalue for report in pt_reports)
    before = sep_form(g)
    after, rotations, rotated = before, RotationTriple(), g

    if pt_min < -PSD_TOL:
        if before <= 1 + SEPARABILITY_TOL:
            raise InconsistentCriteria('sum |G| = {0!r} <= 1 but a partial transpose has eigenvalue {1!r}'.format(before, pt_min))
        verdict = ENTANGLED
    elif before <= 1 + SEPARABILITY_TOL:
        verdict = SEPARABLE
    else:
        cfg = cfg or MinimizeConfig()
        cfg = MinimizeConfig(cfg.restarts, cfg.max_iters, cfg.tol, cfg.seed, target=1.0)
        rotations, rotated, after = minimize_sep_form(g, cfg, threads)
        verdict = SEPARABLE if after <= 1 + SEPARABILITY_TOL else INDETERMINATE

    criteria = [
        Criterion('ph_min_eigenvalue', pt_min, -PSD_TOL, ENTANGLED if pt_min < -PSD_TOL else INDETERMINATE),
        Criterion('sep_form_before', before, 1 + SEPARABILITY_TOL, SEPARABLE if before <= 1 + SEPARABILITY_TOL else INDETERMINATE),
        Criterion('sep_form_after', after, 1 + SEPARABILITY_TOL, SEPARABLE if after <= 1 + SEPARABILITY_TOL else INDETERMINATE),
    ]
    return ThreeQubitVerdict(verdict, criteria, pt_reports, before, after, rotations, rotated)


def decompose3(g, rotations=None):
    """
    Explicit ensemble when sum |G_abc| <= 1, in the frames given by
    `rotations` if any: four pure product terms of weight |G_abc|/4 per
    nonzero entry and the remainder on I/2 (x) I/2 (x) I/2.
    """
    rotations = rotations or RotationTriple()
    frame_g = rotate_g(g, rotations)
    total = sep_form(frame_g)
    if total > 1 + SEPARABILITY_TOL:
        raise NotCertifiedSeparable('sum |G_abc| = {0!r} exceeds 1'.format(total))

    terms = []
    for (a, b, c), value in np.ndenumerate(frame_g):
        if abs(value) <= ZERO_WEIGHT:
            continue
        axes = (rotations.o_a[:, a], rotations.o_b[:, b], np.sign(value) * rotations.o_c[:, c])
        for pattern in SIGN_PATTERNS:
            terms.append(Term(abs(value) / 4, [bloch_state(sign * axis) for sign, axis in zip(pattern, axes)]))
    remainder = 1.0 - total
    if remainder > ZERO_WEIGHT:
        terms.append(Term(remainder, [bloch_state((0, 0, 0))] * 3))

    frame_note, frame = None, None
    if not rotations.is_identity():
        frame_note = 'built in the frames that minimize sum |G_abc| and rotated back to the input frame'
        frame = {'o_a': rotations.o_a, 'o_b': rotations.o_b, 'o_c': rotations.o_c}
    return SeparableDecomposition(3, normalized(terms), frame_note, frame)
