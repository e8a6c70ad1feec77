import random

import pytest

from copq.bucket_heap import BucketHeap, bucket_capacity, signal_capacity
from copq.emcore import MB

from oracles import MinMapPQ


def make(cache=1 * MB):
    return BucketHeap(cache_bytes=cache)


class TestUpdateSemantics:
    def test_decrease_applies(self):
        h = make()
        h.update(9, 5)
        h.update(9, 3)
        assert h.delete_min() == (9, 3)
        assert h.find_min() is None

    def test_increase_ignored(self):
        h = make()
        h.update(9, 3)
        h.update(9, 5)
        assert h.delete_min() == (9, 3)
        assert h.find_min() is None

    def test_delete_then_empty(self):
        h = make()
        h.update(4, 4)
        h.delete(4)
        assert h.find_min() is None
        with pytest.raises(IndexError):
            h.delete_min()

    def test_delete_absent_then_insert(self):
        h = make()
        h.delete(7)
        h.update(7, 2)
        assert h.delete_min() == (7, 2)

    def test_equal_keys_tie_by_id(self):
        h = make()
        h.update(2, 1)
        h.update(1, 1)
        assert h.delete_min() == (1, 1)
        assert h.delete_min() == (2, 1)

    def test_reinsert_after_delete_min(self):
        h = make()
        h.update(5, 10)
        assert h.delete_min() == (5, 10)
        h.update(5, 20)
        assert h.delete_min() == (5, 20)

    def test_key_validation(self):
        h = make()
        with pytest.raises(ValueError):
            h.update(1, (1 << 64) - 1)  # reserved for delete signals
        with pytest.raises(ValueError):
            h.update(-1, 0)


class TestCascade:
    def test_forced_cascade_creates_level_two(self):
        h = make()
        for i in range(signal_capacity(1) + 1):  # one past S_1 capacity
            h.update(i, 1000 + i)
        assert len(h._levels) >= 1
        # push enough distinct ids through to overflow bucket 1 into level 2
        for i in range(100, 100 + bucket_capacity(1) + signal_capacity(1) + 1):
            h.update(i, 2000 + i)
        assert len(h._levels) >= 2
        assert any(lv.bcount or lv.scount for lv in h._levels[1:])
        h.check_invariants()

    def test_conservation_across_flushes(self):
        h = make()
        want = {}
        rng = random.Random(5)
        for i in range(500):
            k = rng.getrandbits(20)
            h.update(i, k)
            want[i] = min(want.get(i, k), k)
        assert h._live_map() == want
        h.check_invariants()

    def test_level_geometry(self):
        # capacities grow by a factor of 4 per level
        for i in range(1, 12):
            assert bucket_capacity(i + 1) == 4 * bucket_capacity(i)
            assert signal_capacity(i + 1) == 4 * signal_capacity(i)
            assert signal_capacity(i) < bucket_capacity(i)

    def test_level_count_bound_for_2_22_elements(self):
        # level L+1 only materialises when bucket L overflows, so N live
        # elements never need more levels than the first whose bucket holds N
        levels = 1
        while bucket_capacity(levels) < (1 << 22):
            levels += 1
        assert levels + 1 <= 22

    def test_level_count_logarithmic(self):
        h = make(cache=8 * MB)
        n = 1 << 16
        for i in range(n):
            h.update(i, i * 2654435761 % (1 << 30))
        # ceil(log4) levels plus slack
        assert len(h._levels) <= 16
        h.check_invariants()


class TestOracle:
    @pytest.mark.parametrize("seed", range(5))
    def test_trace_matches_min_map(self, seed):
        h, oracle = make(), MinMapPQ()
        rng = random.Random(seed)
        for step in range(20_000):
            r = rng.random()
            if r < 0.55:
                i, k = rng.randrange(4000), rng.getrandbits(24)
                h.update(i, k)
                oracle.update(i, k)
            elif r < 0.7:
                i = rng.randrange(4000)
                h.delete(i)
                oracle.delete(i)
            else:
                want = oracle.find_min()
                if want is None:
                    assert h.find_min() is None
                else:
                    assert h.delete_min() == oracle.delete_min()
        while len(oracle):
            assert h.delete_min() == oracle.delete_min()
        assert h.find_min() is None

    def test_same_id_hammering(self):
        # a tiny id space keeps every level fighting over the same ids, so
        # chase-deletes constantly race their stale copies
        h, live = make(), {}
        rng = random.Random(1)
        for step in range(30_000):
            r = rng.random()
            i = rng.randrange(12)
            if r < 0.5:
                k = rng.getrandbits(18)
                h.update(i, k)
                if i not in live or k < live[i]:
                    live[i] = k
            elif r < 0.7:
                h.delete(i)
                live.pop(i, None)
            elif live:
                want = min((k, j) for j, k in live.items())
                assert h.delete_min() == (want[1], want[0]), step
                del live[want[1]]
        assert h._live_map() == live

    def test_invariants_under_trace(self):
        h, oracle = make(), MinMapPQ()
        rng = random.Random(42)
        for step in range(3000):
            r = rng.random()
            if r < 0.6:
                i, k = rng.randrange(300), rng.getrandbits(16)
                h.update(i, k)
                oracle.update(i, k)
            elif r < 0.75:
                i = rng.randrange(300)
                h.delete(i)
                oracle.delete(i)
            elif len(oracle):
                assert h.delete_min() == oracle.delete_min()
            if step % 101 == 0:
                h.check_invariants()
                assert h._live_map() == oracle.live
