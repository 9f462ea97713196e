import os

import numpy as np
import pytest
import simplejson as json

from src.chartab import choose_prime
from src.groups import GroupSpec, enumerate_group, exponent
from src.table_storage import (
    CACHE_FORMAT_VERSION,
    TableStorage,
    TransientStorage,
    cache_get,
    cache_path,
    cache_put,
    default_cache_dir,
)


@pytest.fixture(scope="module")
def gl22():
    return enumerate_group(GroupSpec.general_linear(2, 2))


class TestCacheFiles:
    def test_miss(self, tmp_path):
        assert cache_get(str(tmp_path), "classes:GL(2,2)") is None

    def test_put_get(self, tmp_path):
        cache_put(str(tmp_path), "key", {'values': [1, 2, 3]})
        assert {'values': [1, 2, 3]} == cache_get(str(tmp_path), "key")
        assert [] == [f for f in os.listdir(str(tmp_path)) if f.endswith('.tmp')]

    def test_content_addressed(self, tmp_path):
        assert cache_path(str(tmp_path), "a") != cache_path(str(tmp_path), "b")
        assert cache_path(str(tmp_path), "a") == cache_path(str(tmp_path), "a")

    def test_truncated_file_discarded(self, tmp_path):
        cache_put(str(tmp_path), "key", {'values': list(range(100))})
        path = cache_path(str(tmp_path), "key")
        with open(path) as f_in:
            content = f_in.read()
        with open(path, 'w') as f_out:
            f_out.write(content[:len(content) // 2])
        assert cache_get(str(tmp_path), "key") is None
        assert not os.path.exists(path)

    def test_stale_version_discarded(self, tmp_path):
        path = cache_path(str(tmp_path), "key")
        with open(path, 'w') as f_out:
            json.dump({'version': CACHE_FORMAT_VERSION + 1, 'key': "key", 'payload': {}}, f_out)
        assert cache_get(str(tmp_path), "key") is None
        assert not os.path.exists(path)

    def test_env_override(self, monkeypatch, tmp_path):
        monkeypatch.setenv('REPCHECK_CACHE', str(tmp_path))
        assert str(tmp_path) == default_cache_dir()
        monkeypatch.delenv('REPCHECK_CACHE')
        assert default_cache_dir().endswith(os.path.join('.config', 'RepCheck', 'cache'))


class TestTableStorage:
    def test_miss_then_hit(self, tmp_path, gl22):
        first = TableStorage(str(tmp_path))
        classes = first.class_table(gl22)
        prime, _ = choose_prime(exponent(classes), classes.order)
        table = first.char_table(classes, prime)
        assert (0, 2) == (first.hits, first.misses)

        second = TableStorage(str(tmp_path))
        restored_classes = second.class_table(gl22)
        restored = second.char_table(restored_classes, prime)
        assert (2, 0) == (second.hits, second.misses)
        assert np.array_equal(classes.element_classes, restored_classes.element_classes)
        assert np.array_equal(table.values, restored.values)

    def test_prime_is_part_of_key(self, tmp_path, gl22):
        storage = TableStorage(str(tmp_path))
        classes = storage.class_table(gl22)
        p, _ = choose_prime(exponent(classes), classes.order)
        q, _ = choose_prime(exponent(classes), classes.order, after=p)
        storage.char_table(classes, p)
        storage.char_table(classes, q)
        assert 3 == storage.misses
        assert 3 == len(os.listdir(str(tmp_path)))

    def test_corrupt_entry_recomputed(self, tmp_path, gl22):
        TableStorage(str(tmp_path)).class_table(gl22)
        path = cache_path(str(tmp_path), "classes:" + gl22.spec.key())
        with open(path, 'w') as f_out:
            json.dump({'version': CACHE_FORMAT_VERSION, 'key': "classes:" + gl22.spec.key(),
                       'payload': {'spec': "GL(2,2)", 'keys': [], 'element_classes': [0] * 5}}, f_out)
        storage = TableStorage(str(tmp_path))
        classes = storage.class_table(gl22)
        assert 3 == len(classes)
        assert 1 == storage.misses

    def test_transient(self, gl22):
        storage = TransientStorage()
        storage.class_table(gl22)
        storage.class_table(gl22)
        assert (0, 2) == (storage.hits, storage.misses)
