############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import os
import logging
import traceback
from concurrent.futures import ProcessPoolExecutor
from enum import Enum

import simplejson as json

from src.claims import COMMANDS, RunConfig, run
from src.common import DEFAULT_BOUNDS, ConfigError, compositions, proper_plural_form
from src.stats import VerdictStats, write_summary
from src.symgrp import classification_predicts_gelfand
from src.verification_report import ARTIFACT_VERSION, plain

logger = logging.getLogger('RepCheck')


class RowStatus(Enum):
    met = "met"
    unmet = "unmet"
    error = "error"


def _row(command, expect='pass', **params):
    return {'command': command, 'params': params, 'expect': expect}


def default_manifest():
    """The full acceptance matrix: every claim with the verdict it is expected to reach."""
    rows = []
    blocks = {2: [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 2)], 3: [(1, 1), (2, 1), (1, 2)]}
    for q, pairs in blocks.items():
        for n, k in pairs:
            rows.append(_row('jacquet', q=q, n=n, k=k))
            rows.append(_row('gelfand', q=q, n=n, k=k))
        for n in sorted(set(n for n, k in pairs if k == 1)):
            rows.append(_row('thmgl', q=q, n=n))
    rows.append(_row('jacquet', 'fail', q=2, composition=[1, 1, 1]))
    rows.append(_row('gelfand', 'fail', q=2, composition=[1, 1, 1]))

    for q, largest in ((2, 4), (3, 3)):
        for N in range(2, largest + 1):
            rows.append(_row('geometry', q=q, n=N))
        for N in range(1, largest + 1):
            rows.append(_row('deligne', q=q, n=N))
    for N in range(1, 5):
        rows.append(_row('nuimage', q=2, n=N))

    for q in (2, 3, 5):
        for k in (1, 2):
            rows.append(_row('keylemma', q=q, k=k))
    rows.append(_row('keylemma', 'fail', q=2, k=3, composition=[1, 1, 1]))
    for q in (2, 3):
        for k in (1, 2):
            rows.append(_row('dualkey', q=q, k=k))

    for n in range(1, 9):
        for composition in compositions(n):
            expect = 'pass' if classification_predicts_gelfand(composition) else 'fail'
            rows.append(_row('symgroup', expect, composition=list(composition)))
            rows.append(_row('hecke', expect, composition=list(composition)))

    rows.append(_row('chartab', q=2, n=2, composition=[1, 1]))
    rows.append(_row('chartab', q=2, n=3, composition=[2, 1]))
    rows.append(_row('chartab', q=2, n=4, composition=[2, 2]))
    rows.append(_row('chartab', q=3, n=2, composition=[1, 1]))
    rows.append(_row('chartab', q=3, n=3, composition=[2, 1]))
    return rows


def load_manifest(path):
    with open(path, 'r') as f_in:
        rows = json.load(f_in)
    if not isinstance(rows, list):
        raise ConfigError("Manifest %s must hold a list of rows" % path)
    for index, row in enumerate(rows):
        if not isinstance(row, dict) or row.get('command') not in COMMANDS:
            raise ConfigError("Manifest row %d has no valid command" % index)
        if row.get('expect', 'pass') not in ('pass', 'fail'):
            raise ConfigError("Manifest row %d expects %s, use pass or fail" % (index, row.get('expect')))
    return rows


def run_row(row, bounds=DEFAULT_BOUNDS, cache_dir=None, use_cache=True):
    """Outcome of one manifest row; exceptions become an error status."""
    expected = row.get('expect', 'pass')
    outcome = {'claim': row['command'], 'params': plain(row.get('params', {})), 'expected': expected}
    try:
        config = RunConfig.from_params(row['command'], row.get('params', {}), bounds=bounds,
                                       cache_dir=cache_dir, use_cache=use_cache)
        report = run(config)
    except Exception as err:
        logger.error("Row %s %s failed: %s" % (row['command'], str(row.get('params', {})), str(err)))
        logger.debug(traceback.format_exc())
        outcome.update({'status': RowStatus.error.value, 'error': "%s: %s" % (type(err).__name__, str(err))})
        return outcome
    outcome.update({'claim': report.claim,
                    'verdict': report.verdict.value,
                    'status': (RowStatus.met if report.verdict.value == expected else RowStatus.unmet).value,
                    'max_multiplicity': report.max_multiplicity,
                    'report': report.payload(),
                    'wall_time': report.wall_time})
    if outcome['status'] == RowStatus.unmet.value:
        logger.warning("Row %s %s: expected %s, got %s" %
                       (row['command'], str(row.get('params', {})), expected, report.verdict.value))
    return outcome


def run_all(manifest, jobs=1, bounds=DEFAULT_BOUNDS, cache_dir=None, use_cache=True):
    logger.info("Running %s with %s" % (proper_plural_form("manifest row", len(manifest)),
                                        proper_plural_form("job", jobs)))
    if jobs > 1 and len(manifest) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_row, row, bounds, cache_dir, use_cache) for row in manifest]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [run_row(row, bounds, cache_dir, use_cache) for row in manifest]

    stats = VerdictStats()
    for outcome in outcomes:
        stats.add(outcome)
    stats.print_report("Manifest outcome:")
    passed = stats.all_met
    return {'version': ARTIFACT_VERSION, 'passed': passed, 'rows': outcomes}


def write_aggregate(aggregate, out):
    out_dir = os.path.dirname(os.path.abspath(out))
    os.makedirs(out_dir, exist_ok=True)
    with open(out, 'w') as f_out:
        json.dump(aggregate, f_out, sort_keys=True, indent=2)
    write_summary(aggregate['rows'], out_dir)
    logger.info("Aggregate report written to %s" % out)
