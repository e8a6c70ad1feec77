import random

import pytest

from copq.funnel_heap import FunnelHeap, _link_params
from copq.emcore import MB

from oracles import MultisetPQ


def make(cache=1 * MB):
    return FunnelHeap(cache_bytes=cache)


class TestBasics:
    def test_insert_then_delete_min(self):
        h = make()
        h.insert(1, 1)
        assert h.delete_min() == (1, 1)
        assert len(h) == 0
        with pytest.raises(IndexError):
            h.delete_min()

    def test_sorted_output(self):
        h = make()
        for i, k in enumerate([3, 1, 2]):
            h.insert(i, k)
        assert [h.delete_min()[1] for _ in range(3)] == [1, 2, 3]

    def test_tie_by_id(self):
        h = make()
        h.insert(2, 7)
        h.insert(1, 7)
        assert h.delete_min() == (1, 7)
        assert h.delete_min() == (2, 7)

    def test_duplicate_ids_are_multiset(self):
        h = make()
        h.insert(5, 10)
        h.insert(5, 10)
        h.insert(5, 3)
        assert h.delete_min() == (5, 3)
        assert h.delete_min() == (5, 10)
        assert h.delete_min() == (5, 10)


class TestSweep:
    def test_first_overflow_builds_link_one_with_eight_records(self):
        h = make()
        for i in range(9):  # capacity of the insertion buffer is 8
            h.insert(i, 100 - i)
        assert len(h._links) == 1
        link = h._links[0]
        assert link.c == 1
        assert link.leaves[0].count == 8
        run = link.leaves[0].peek_all(h.vector)
        assert run == sorted(run)
        assert h._I.count == 1  # the insert that triggered the sweep
        h.check_invariants()

    def test_sweep_preserves_multiset(self):
        h = make()
        rng = random.Random(2)
        inserted = []
        for i in range(200):
            k = rng.getrandbits(16)
            h.insert(i, k)
            inserted.append((k, i))
        assert h._live_items() == sorted(inserted)

    def test_link_growth_is_geometric(self):
        prev_total = 0
        for num in range(1, 7):
            s, k, acap, bcap, intsz, leafcap = _link_params(num)
            link_total = acap + bcap + intsz + k * leafcap
            assert link_total > prev_total, f"link {num} not bigger than all shallower"
            prev_total += link_total

    def test_link_count_bound_for_2_22_inserts(self):
        # a new link L+1 is only built once every leaf of links 1..L has been
        # used, which takes at least 8 * prod(k_j) inserts; show 2^22 inserts
        # cannot build more than log2(2^22) links
        inserts_needed = 8
        links = 0
        while inserts_needed <= (1 << 22):
            links += 1
            inserts_needed *= _link_params(links)[1]
        assert links + 1 <= 22

    def test_link_count_logarithmic(self):
        h = make(cache=4 * MB)
        n = 1 << 15
        for i in range(n):
            h.insert(i, (i * 2654435761) & 0xFFFFF)
        # far fewer links than log2(n); 15 is a generous ceiling
        assert len(h._links) <= 15
        h.check_invariants()


class TestOracle:
    def test_bulk_sort_2_16(self):
        # 2^16 random inserts then 2^16 pops must reproduce the sorted input
        h, rng = make(cache=4 * MB), random.Random(3)
        n = 1 << 16
        keys = [rng.getrandbits(30) for _ in range(n)]
        for i, k in enumerate(keys):
            h.insert(i, k)
        got = [h.delete_min() for _ in range(n)]
        assert got == [(i, k) for (k, i) in sorted((k, i) for i, k in enumerate(keys))]

    @pytest.mark.parametrize("seed", range(5))
    def test_mixed_trace_matches_multiset(self, seed):
        h, oracle = make(), MultisetPQ()
        rng = random.Random(seed)
        ident = 0
        for _ in range(20_000):
            if not len(oracle) or rng.random() < 0.55:
                k = rng.getrandbits(24)
                h.insert(ident, k)
                oracle.insert(ident, k)
                ident += 1
            else:
                assert h.delete_min() == oracle.delete_min()
        while len(oracle):
            assert h.delete_min() == oracle.delete_min()

    def test_monotone_output_between_inserts(self):
        h = make()
        rng = random.Random(9)
        for i in range(5000):
            h.insert(i, rng.getrandbits(20))
        last = -1
        for _ in range(2500):
            _, k = h.delete_min()
            assert k >= last
            last = k

    def test_invariants_hold_during_trace(self):
        h = make()
        rng = random.Random(13)
        oracle = MultisetPQ()
        ident = 0
        for step in range(4000):
            if not len(oracle) or rng.random() < 0.6:
                k = rng.getrandbits(16)
                h.insert(ident, k)
                oracle.insert(ident, k)
                ident += 1
            else:
                assert h.delete_min() == oracle.delete_min()
            if step % 97 == 0:
                h.check_invariants()

    def test_burst_cycles_reuse_links(self):
        # grow deep, drain to empty, regrow: leaf counters reset and links
        # must come back clean each cycle
        h, oracle = make(), MultisetPQ()
        rng = random.Random(0)
        ident = 0
        for cycle in range(6):
            for _ in range(rng.randrange(200, 3000)):
                k = rng.getrandbits(20)
                h.insert(ident, k)
                oracle.insert(ident, k)
                ident += 1
            drain = len(oracle) if cycle % 2 else len(oracle) // 2
            for _ in range(drain):
                assert h.delete_min() == oracle.delete_min()
            h.check_invariants()
