"""
Sampling study over random states: per-sample criteria values and verdicts,
written as CSV with a trailing aggregate line.
"""
import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np

from .analysis import analyze
from .corr3 import MinimizeConfig
from .decomposition import ENTANGLED, INDETERMINATE, SEPARABLE
from .density import random_correlation_only, random_correlation_scaled, random_mixed, random_separable


KINDS = ('mixed', 'separable', 'corr2', 'corr3')

COLUMNS = (
    'index', 'kind', 'qubits', 'ph_min', 'sep_form', 'sep_form_min', 'lambda_max',
    'verdict_ph', 'verdict_form', 'verdict', 'certificate_terms',
)
TIMING_COLUMN = 'seconds'

SEPARABLE_TERMS = 4
CORR2_SCALE = 0.5
# per-sample minimizer budget; a study trades optimizer depth for sample count
STUDY_CONFIG = MinimizeConfig(restarts=4, max_iters=600, tol=1e-6)

logger = logging.getLogger('sepkit.ensemble')


class UnknownKind(ValueError): pass


def sample_state(kind, index, seed, n_qubits=2):
    """
    The `index`-th state of a study; depends only on (kind, index, seed, n_qubits).
    """
    sample_seed = [seed, index]
    if kind == 'mixed':
        return random_mixed(n_qubits, 2 ** n_qubits, sample_seed)
    if kind == 'separable':
        return random_separable(n_qubits, SEPARABLE_TERMS, sample_seed)[0]
    if kind == 'corr2':
        return random_correlation_only(2, CORR2_SCALE, sample_seed)
    if kind == 'corr3':
        # fraction of the positivity limit, uniform in (0, 1]
        fraction = 1.0 - float(np.random.default_rng([seed, index, 1]).uniform())
        return random_correlation_scaled(3, fraction, sample_seed)
    raise UnknownKind('Unknown ensemble kind {0!r}; expected one of {1}'.format(kind, ', '.join(KINDS)))


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def study_row(kind, index, seed, n_qubits=2, config=None):
    started = time.perf_counter()
    rho = sample_state(kind, index, seed, n_qubits)
    analysis = analyze(rho, config=config)
    summary = analysis.summary
    row = {
        'index':                index,
        'kind':                 kind,
        'qubits':               rho.n_qubits,
        'ph_min':               summary.get('ph_min'),
        'sep_form':             summary.get('sep_form'),
        'sep_form_min':         summary.get('sep_form_min'),
        'lambda_max':           summary.get('lambda_max'),
        'verdict_ph':           summary.get('verdict_ph'),
        'verdict_form':         summary.get('verdict_form'),
        'verdict':              analysis.verdict,
        'certificate_terms':    len(analysis.certificate) if analysis.certificate is not None else 0,
    }
    row[TIMING_COLUMN] = time.perf_counter() - started
    return row


class Study(object):
    """
    Run `count` samples of one kind. With threads > 1 the samples are spread
    over that many worker processes; rows come back in index order either way.
    """
    def __init__(self, kind, count, seed=0, n_qubits=2, config=None, threads=1, timings=False):
        if kind not in KINDS:
            raise UnknownKind('Unknown ensemble kind {0!r}; expected one of {1}'.format(kind, ', '.join(KINDS)))
        if count < 0:
            raise ValueError('count must not be negative')
        if kind == 'corr2':
            n_qubits = 2
        elif kind == 'corr3':
            n_qubits = 3
        self.kind       = kind
        self.count      = count
        self.seed       = seed
        self.n_qubits   = n_qubits
        self.config     = config or STUDY_CONFIG
        self.threads    = threads
        self.timings    = timings

    def rows(self):
        indices = range(self.count)
        arguments = (repeat(self.kind), indices, repeat(self.seed), repeat(self.n_qubits), repeat(self.config))
        if self.threads > 1 and self.count > 1:
            chunksize = max(1, self.count // (4 * self.threads))
            with ProcessPoolExecutor(max_workers=self.threads) as executor:
                return list(executor.map(study_row, *arguments, chunksize=chunksize))
        return list(map(study_row, *arguments))

    @property
    def columns(self):
        return COLUMNS + ((TIMING_COLUMN,) if self.timings else ())

    def write(self, stream, rows=None):
        rows = self.rows() if rows is None else rows
        writer = csv.DictWriter(stream, fieldnames=self.columns, extrasaction='ignore', lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(value) for key, value in row.items()})
        stream.write(aggregate_line(rows) + '\n')
        logger.debug('wrote {0} {1} rows'.format(len(rows), self.kind))
        return rows


def aggregate(rows):
    """
    Fractions of each verdict and the number of rows where the separability
    form and the partial-transpose test disagree (both decided, different).
    """
    count = len(rows)
    result = {'count': count}
    for verdict in (SEPARABLE, ENTANGLED, INDETERMINATE):
        hits = sum(1 for row in rows if row['verdict'] == verdict)
        result[verdict.lower()] = hits / count if count else 0.0
    decided = (SEPARABLE, ENTANGLED)
    result['ph_form_disagreements'] = sum(
        1 for row in rows
        if row['verdict_ph'] in decided and row['verdict_form'] in decided and row['verdict_ph'] != row['verdict_form']
    )
    result['ph_nonnegative'] = sum(1 for row in rows if row['ph_min'] is not None and row['verdict_ph'] != ENTANGLED) / count if count else 0.0
    return result


def aggregate_line(rows):
    summary = aggregate(rows)
    return '# ' + ' '.join('{0}={1}'.format(key, _cell(summary[key])) for key in (
        'count', 'separable', 'entangled', 'indeterminate', 'ph_nonnegative', 'ph_form_disagreements',
    ))
