############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import os
import hashlib
import logging
from enum import Enum

import numpy as np
import simplejson as json

from src.common import RepCheckError

logger = logging.getLogger('RepCheck')

ARTIFACT_VERSION = "1.0.0"


class Verdict(Enum):
    passed = "pass"
    failed = "fail"


def plain(obj):
    """Recursively turn numpy scalars, arrays and tuples into JSON-ready python values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, Enum):
        return obj.value
    return obj


def sidecar_path(out):
    return out + '.sidecar.json'


class VerificationReport:
    def __init__(self, claim, params, verdict, prime=None, max_multiplicity=None, counterexample=None, details=None):
        self.claim = claim
        self.params = plain(params)
        self.verdict = verdict
        self.prime = prime
        self.max_multiplicity = max_multiplicity
        self.counterexample = plain(counterexample) if counterexample is not None else None
        self.details = plain(details) if details else None
        # run-dependent values, kept out of the canonical payload
        self.wall_time = None
        self.cache_hits = 0
        self.cache_misses = 0
        if verdict == Verdict.failed and self.counterexample is None:
            raise RepCheckError("Failed verdict for %s carries no counterexample" % claim)

    @property
    def passed(self):
        return self.verdict == Verdict.passed

    def payload(self):
        result = {'claim': self.claim,
                  'params': self.params,
                  'verdict': self.verdict.value,
                  'prime': self.prime,
                  'version': ARTIFACT_VERSION}
        if self.max_multiplicity is not None:
            result['max_multiplicity'] = int(self.max_multiplicity)
        if self.counterexample is not None:
            result['counterexample'] = self.counterexample
        if self.details is not None:
            result['details'] = self.details
        return result

    def canonical(self):
        return json.dumps(self.payload(), sort_keys=True, indent=2)

    def digest(self):
        return hashlib.sha256(self.canonical().encode('utf-8')).hexdigest()

    def sidecar(self):
        return {'digest': self.digest(),
                'wall_time': self.wall_time,
                'cache_hits': self.cache_hits,
                'cache_misses': self.cache_misses}

    def write(self, out):
        out_dir = os.path.dirname(os.path.abspath(out))
        os.makedirs(out_dir, exist_ok=True)
        with open(out, 'w') as f_out:
            f_out.write(self.canonical())
            f_out.write('\n')
        with open(sidecar_path(out), 'w') as f_out:
            json.dump(self.sidecar(), f_out, sort_keys=True, indent=2)
        logger.info("Report written to %s" % out)

    @classmethod
    def from_payload(cls, payload):
        return cls(payload['claim'], payload['params'], Verdict(payload['verdict']), payload.get('prime'),
                   payload.get('max_multiplicity'), payload.get('counterexample'), payload.get('details'))
