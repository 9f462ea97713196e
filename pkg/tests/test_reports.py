import os

import numpy as np
import pytest
import simplejson as json

from src.common import RepCheckError
from src.stats import SUMMARY_COLUMNS, VerdictStats, summary_table, write_summary
from src.verification_report import (
    ARTIFACT_VERSION,
    Verdict,
    VerificationReport,
    plain,
    sidecar_path,
)


def failed_report():
    return VerificationReport("theorem-A", {'q': 2, 'composition': (1, 1, 1)}, Verdict.failed, 7, np.int64(2),
                              {'pi': np.int64(3), 'rho': 0, 'multiplicity': 2, 'matrix': np.array([[1], [2]])})


class TestPlain:
    def test_numpy_values(self):
        converted = plain({'a': np.int64(3), 'b': np.array([[1, 2]]), 'c': (np.bool_(True),), 1: Verdict.passed})
        assert {'a': 3, 'b': [[1, 2]], 'c': [True], '1': "pass"} == converted
        assert int == type(converted['a'])


class TestVerificationReport:
    def test_failed_needs_counterexample(self):
        with pytest.raises(RepCheckError, match="no counterexample"):
            VerificationReport("theorem-A", {'q': 2}, Verdict.failed)

    def test_payload(self):
        payload = failed_report().payload()
        assert "fail" == payload['verdict']
        assert ARTIFACT_VERSION == payload['version']
        assert [1, 1, 1] == payload['params']['composition']
        assert [[1], [2]] == payload['counterexample']['matrix']
        assert 'details' not in payload

    def test_canonical_is_deterministic(self):
        first = failed_report()
        second = failed_report()
        second.wall_time = 12.5
        second.cache_hits = 4
        assert first.canonical() == second.canonical()
        assert first.digest() == second.digest()

    def test_digest_tracks_content(self):
        passed = VerificationReport("gelfand-pair", {'q': 2}, Verdict.passed)
        other = VerificationReport("gelfand-pair", {'q': 3}, Verdict.passed)
        assert passed.digest() != other.digest()
        assert 64 == len(passed.digest())

    def test_write(self, tmp_path):
        report = failed_report()
        report.wall_time = 0.5
        report.cache_misses = 2
        out = str(tmp_path / "nested" / "report.json")
        report.write(out)
        with open(out) as f_in:
            assert report.canonical() + '\n' == f_in.read()
        with open(sidecar_path(out)) as f_in:
            sidecar = json.load(f_in)
        assert {'digest': report.digest(), 'wall_time': 0.5, 'cache_hits': 0, 'cache_misses': 2} == sidecar

    def test_from_payload(self):
        report = failed_report()
        restored = VerificationReport.from_payload(json.loads(report.canonical()))
        assert report.digest() == restored.digest()
        assert not restored.passed


class TestStats:
    outcomes = [{'claim': "theorem-A", 'params': {'q': 2}, 'verdict': "pass", 'status': "met", 'wall_time': 0.5},
                {'claim': "theorem-A", 'params': {'q': 3}, 'verdict': "fail", 'status': "met", 'wall_time': 1.0},
                {'claim': "gelfand-pair", 'params': {'q': 2}, 'verdict': "pass", 'status': "unmet"},
                {'claim': "deligne", 'params': {'q': 2}, 'status': "error", 'error': "ConfigError: boom"}]

    def test_counts(self):
        stats = VerdictStats()
        for outcome in self.outcomes:
            stats.add(outcome)
        assert 4 == stats.total
        assert 2 == stats.count('met')
        assert 1 == stats.count('error')
        assert not stats.all_met
        assert 1.5 == stats.wall_time
        assert 2 == len(stats.missed)
        assert "ConfigError: boom" in stats.missed[1]
        stats.print_report("header")

    def test_claim_table(self):
        stats = VerdictStats()
        for outcome in self.outcomes:
            stats.add(outcome)
        table = stats.claim_table().set_index('claim')
        assert ['deligne', 'gelfand-pair', 'theorem-A'] == list(table.index)
        assert (1, 1, 0) == tuple(table.loc['theorem-A'])
        assert (0, 0, 1) == tuple(table.loc['deligne'])

    def test_empty_is_met(self):
        stats = VerdictStats()
        assert stats.all_met
        assert 0 == stats.count('met')

    def test_summary_table(self):
        rows = [{'claim': "theorem-A", 'params': {'q': 2, 'k': 1, 'n': 1}, 'expected': "pass", 'verdict': "pass",
                 'status': "met", 'max_multiplicity': 1},
                {'claim': "gelfand", 'params': {}, 'expected': "pass", 'status': "error", 'error': "boom"}]
        df = summary_table(rows)
        assert SUMMARY_COLUMNS == list(df.columns)
        assert "k=1;n=1;q=2" == df['params'][0]
        assert "boom" == df['error'][1]

    def test_write_summary(self, tmp_path):
        path = write_summary([{'claim': "x", 'params': {'q': 2}, 'status': "met"}], str(tmp_path))
        assert os.path.exists(path)
        with open(path) as f_in:
            header = f_in.readline().strip().split('\t')
        assert SUMMARY_COLUMNS == header
