############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import os
import hashlib
import logging
import tempfile

import simplejson as json

from src.chartab import ModularCharTable, dixon_table
from src.groups import ConjClassTable, conjugacy_classes

logger = logging.getLogger('RepCheck')

CACHE_FORMAT_VERSION = 1


def default_cache_dir():
    if os.environ.get('REPCHECK_CACHE'):
        return os.environ['REPCHECK_CACHE']
    return os.path.join(os.path.expanduser('~'), '.config', 'RepCheck', 'cache')


def cache_path(cache_dir, key):
    return os.path.join(cache_dir, hashlib.sha256(key.encode('utf-8')).hexdigest() + '.json')


def _discard(path, reason):
    logger.warning("Discarding cache entry %s: %s" % (path, reason))
    try:
        os.remove(path)
    except OSError:
        pass


def cache_get(cache_dir, key):
    path = cache_path(cache_dir, key)
    if not os.path.exists(path):
        return None
    try:
        with open(path, 'r') as f_in:
            record = json.load(f_in)
    except (OSError, ValueError) as err:
        _discard(path, str(err) or "unreadable")
        return None
    if not isinstance(record, dict) or record.get('version') != CACHE_FORMAT_VERSION or 'payload' not in record:
        _discard(path, "stale format")
        return None
    if record.get('key') != key:
        return None
    logger.debug('Cache hit for {}'.format(key))
    return record['payload']


def cache_put(cache_dir, key, payload):
    os.makedirs(cache_dir, exist_ok=True)
    record = {'version': CACHE_FORMAT_VERSION, 'key': key, 'payload': payload}
    fd, tmp_path = tempfile.mkstemp(dir=cache_dir, suffix='.tmp')
    try:
        with os.fdopen(fd, 'w') as f_out:
            json.dump(record, f_out)
        os.replace(tmp_path, cache_path(cache_dir, key))
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.debug('Cached {}'.format(key))


class TransientStorage:
    """Computes class and character tables without keeping them between runs."""

    def __init__(self):
        self.hits = 0
        self.misses = 0

    def class_table(self, group):
        self.misses += 1
        return conjugacy_classes(group)

    def char_table(self, classes, prime):
        self.misses += 1
        return dixon_table(classes, prime)


class TableStorage(TransientStorage):
    def __init__(self, cache_dir=None):
        TransientStorage.__init__(self)
        self.cache_dir = cache_dir or default_cache_dir()

    def _load(self, key, restore):
        payload = cache_get(self.cache_dir, key)
        if payload is None:
            return None
        try:
            result = restore(payload)
        except (ValueError, KeyError, TypeError, IndexError) as err:
            _discard(cache_path(self.cache_dir, key), "cannot restore (%s)" % str(err))
            return None
        self.hits += 1
        return result

    def class_table(self, group):
        key = "classes:" + group.spec.key()
        classes = self._load(key, lambda data: ConjClassTable.from_dict(group, data))
        if classes is None:
            classes = TransientStorage.class_table(self, group)
            cache_put(self.cache_dir, key, classes.to_dict())
        return classes

    def char_table(self, classes, prime):
        key = "characters:%s:p=%d" % (classes.group.spec.key(), prime)
        table = self._load(key, lambda data: ModularCharTable.from_dict(classes, data))
        if table is None:
            table = TransientStorage.char_table(self, classes, prime)
            cache_put(self.cache_dir, key, table.to_dict())
        return table
