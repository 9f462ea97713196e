############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import os
import logging
from collections import Counter, defaultdict

import pandas as pd

from src.common import proper_plural_form


logger = logging.getLogger('RepCheck')

SUMMARY_COLUMNS = ['row', 'claim', 'params', 'expected', 'verdict', 'status', 'max_multiplicity', 'error']


class VerdictStats:
    """Tallies of manifest outcomes: row status, verdicts per claim and the rows that missed."""
    def __init__(self):
        self.status_counts = Counter()
        self.claim_verdicts = defaultdict(Counter)
        self.missed = []
        self.wall_time = 0.0

    def add(self, outcome):
        status = outcome['status']
        self.status_counts[status] += 1
        claim = outcome.get('claim')
        self.claim_verdicts[claim][outcome.get('verdict') or status] += 1
        self.wall_time += outcome.get('wall_time') or 0.0
        if status != 'met':
            self.missed.append("%s %s: %s" % (claim, outcome.get('params', {}),
                                              outcome.get('error') or outcome.get('verdict')))

    @property
    def total(self):
        return sum(self.status_counts.values())

    @property
    def all_met(self):
        return self.status_counts['met'] == self.total

    def count(self, status):
        return self.status_counts.get(status, 0)

    def claim_table(self):
        records = [{'claim': claim, 'pass': verdicts.get('pass', 0), 'fail': verdicts.get('fail', 0),
                    'error': verdicts.get('error', 0)}
                   for claim, verdicts in sorted(self.claim_verdicts.items())]
        return pd.DataFrame.from_records(records, columns=['claim', 'pass', 'fail', 'error'])

    def print_report(self, header_string=""):
        if header_string:
            logger.info(header_string)
        logger.info("%s met, %d unmet, %d with errors, %.1f seconds" %
                    (proper_plural_form("row", self.count('met')), self.count('unmet'), self.count('error'),
                     self.wall_time))
        for line in self.claim_table().to_string(index=False).split('\n'):
            logger.info("  " + line)
        for line in self.missed:
            logger.warning("Missed: " + line)


def summary_table(rows):
    """One line per manifest row; params are flattened to key=value strings."""
    records = []
    for index, row in enumerate(rows):
        params = row.get('params', {})
        records.append({'row': index,
                        'claim': row.get('claim'),
                        'params': ";".join("%s=%s" % (k, params[k]) for k in sorted(params)),
                        'expected': row.get('expected'),
                        'verdict': row.get('verdict'),
                        'status': row.get('status'),
                        'max_multiplicity': row.get('max_multiplicity'),
                        'error': row.get('error')})
    return pd.DataFrame.from_records(records, columns=SUMMARY_COLUMNS)


def write_summary(rows, output_dir):
    df = summary_table(rows)
    path = os.path.join(output_dir, 'summary.tsv')
    df.to_csv(path, sep='\t', index=False)
    logger.info("Summary of %s written to %s" % (proper_plural_form("row", len(df)), path))
    return path
