"""Graph generation and I/O: G(n,p) random graphs, DIMACS .gr files, and a
CSR adjacency stored in a BlockVector.

Random generation uses SplitMix64, a named portable 64-bit generator, so a
(spec, seed) pair regenerates the identical graph on any platform. G(n,p)
sampling skips geometrically between kept pairs, giving O(n + E) expected
work instead of enumerating all n(n-1)/2 pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .emcore import BlockVector, EmConfig, DEFAULT_BLOCK_BYTES, DEFAULT_CACHE_BYTES

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit stream: z = golden-gamma counter, xor-shift mixed."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform in [0, 1), 53-bit resolution."""
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform in [lo, hi] (modulo reduction; bias negligible for small ranges)."""
        return lo + self.next() % (hi - lo + 1)


@dataclass
class Graph:
    """Compact adjacency: offsets[v]..offsets[v+1] indexes the (target, weight)
    arc arrays. An undirected edge appears as two arcs."""

    offsets: list[int]
    targets: list[int]
    weights: list[int]

    @property
    def vertex_count(self) -> int:
        return len(self.offsets) - 1

    @property
    def arc_count(self) -> int:
        return len(self.targets)

    def neighbors(self, v: int):
        for a in range(self.offsets[v], self.offsets[v + 1]):
            yield self.targets[a], self.weights[a]

    def is_symmetric(self) -> bool:
        """True when every arc (u,v,w) has a matching reverse arc (v,u,w)."""
        counts: dict[tuple[int, int, int], int] = {}
        for u in range(self.vertex_count):
            for v, w in self.neighbors(u):
                counts[(u, v, w)] = counts.get((u, v, w), 0) + 1
        for (u, v, w), c in counts.items():
            if counts.get((v, u, w), 0) != c:
                return False
        return True

    @classmethod
    def from_arcs(cls, n: int, arcs: list[tuple[int, int, int]]) -> "Graph":
        """Build CSR from (source, target, weight) triples, preserving the
        per-vertex arrival order of arcs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v, w in arcs:
            adj[u].append((v, w))
        offsets = [0]
        targets: list[int] = []
        weights: list[int] = []
        for u in range(n):
            for v, w in adj[u]:
                targets.append(v)
                weights.append(w)
            offsets.append(len(targets))
        return cls(offsets, targets, weights)


@dataclass
class GnpSpec:
    """Erdos-Renyi G(n,p) parameters. p defaults to 16/(n-1), the density that
    gives an expected eight undirected edges per vertex."""

    n: int
    p: float | None = None
    weight_max: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.p is None:
            # default density; a complete graph once n is too small for it
            self.p = min(1.0, 16.0 / (self.n - 1)) if self.n > 1 else 0.0
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {self.p}")
        if self.weight_max < 1:
            raise ValueError("weight_max must be positive")


def gen_gnp(spec: GnpSpec) -> Graph:
    """Sample an undirected G(n,p) with uniform integer weights in [1, weight_max].

    Each unordered pair {u,v} is kept independently with probability p; a
    kept edge gets one weight and two arcs. Deterministic per seed.
    """
    rng = SplitMix64(spec.seed)
    n, p = spec.n, spec.p
    arcs: list[tuple[int, int, int]] = []
    if p >= 1.0:
        for u in range(n):
            for v in range(u + 1, n):
                w = rng.randint(1, spec.weight_max)
                arcs.append((u, v, w))
                arcs.append((v, u, w))
        return Graph.from_arcs(n, arcs)
    if p > 0.0:
        log1mp = math.log1p(-p)
        for u in range(n):
            v = u
            while True:
                u01 = 1.0 - rng.random()  # (0, 1]
                v += 1 + int(math.log(u01) / log1mp)
                if v >= n:
                    break
                w = rng.randint(1, spec.weight_max)
                arcs.append((u, v, w))
                arcs.append((v, u, w))
    return Graph.from_arcs(n, arcs)


class DimacsError(ValueError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_dimacs(source) -> Graph:
    """Parse DIMACS shortest-path .gr text into a Graph.

    Accepts a string or any iterable of lines. Vertex ids are 1-based in the
    format and 0-based in the result. Every malformed line raises a
    DimacsError carrying its line number.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source
    n = m = None
    arcs: list[tuple[int, int, int]] = []
    line_no = 0
    for raw in lines:
        line_no += 1
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise DimacsError("duplicate problem line", line_no)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "sp":
                raise DimacsError(f"malformed problem line {line!r}", line_no)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer counts in problem line {line!r}", line_no) from None
            if n < 0 or m < 0:
                raise DimacsError("negative counts in problem line", line_no)
        elif line.startswith("a"):
            if n is None:
                raise DimacsError("arc line before problem line", line_no)
            parts = line.split()
            if len(parts) != 4:
                raise DimacsError(f"malformed arc line {line!r}", line_no)
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer field in arc line {line!r}", line_no) from None
            if not 1 <= u <= n:
                raise DimacsError(f"source id {u} out of range [1,{n}]", line_no)
            if not 1 <= v <= n:
                raise DimacsError(f"target id {v} out of range [1,{n}]", line_no)
            if w <= 0:
                raise DimacsError(f"non-positive weight {w}", line_no)
            arcs.append((u - 1, v - 1, w))
        else:
            raise DimacsError(f"unrecognized line {line!r}", line_no)
    if n is None:
        raise DimacsError("missing problem line", line_no)
    if len(arcs) != m:
        raise DimacsError(f"problem line promised {m} arcs, found {len(arcs)}", line_no)
    return Graph.from_arcs(n, arcs)


def write_dimacs(g: Graph) -> str:
    """Inverse of parse_dimacs up to comments: problem line plus one arc line
    per stored arc, 1-based."""
    out = [f"p sp {g.vertex_count} {g.arc_count}"]
    for u in range(g.vertex_count):
        for a in range(g.offsets[u], g.offsets[u + 1]):
            out.append(f"a {u + 1} {g.targets[a] + 1} {g.weights[a]}")
    return "\n".join(out) + "\n"


class ExternalGraph:
    """CSR adjacency serialized into one BlockVector with its own cache.

    Records 0..V hold the offsets (one per record); records V+1.. hold the
    arcs as (target, weight) pairs. A vertex's neighborhood scan touches only
    its contiguous arc range.
    """

    def __init__(self, g: Graph, config: EmConfig):
        if config.record_bytes != 16:
            raise ValueError("ExternalGraph needs 16-byte records")
        self.vector = BlockVector(config)
        self.vertex_count = g.vertex_count
        self.arc_count = g.arc_count
        self.source = g
        n = g.vertex_count
        self.vector.extend(n + 1 + g.arc_count)
        for i, off in enumerate(g.offsets):
            self.vector.set2(i, off, 0)
        base = n + 1
        for a in range(g.arc_count):
            self.vector.set2(base + a, g.targets[a], g.weights[a])

    def arc_range(self, v: int) -> tuple[int, int]:
        lo, _ = self.vector.get2(v)
        hi, _ = self.vector.get2(v + 1)
        return lo, hi

    def arc(self, a: int) -> tuple[int, int]:
        return self.vector.get2(self.vertex_count + 1 + a)

    def neighbors(self, v: int):
        lo, hi = self.arc_range(v)
        base = self.vertex_count + 1
        for a in range(lo, hi):
            yield self.vector.get2(base + a)

    def source_of_arc(self, a: int) -> int:
        """Vertex whose arc list contains arc index a (binary search on offsets)."""
        lo, hi = 0, self.vertex_count - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            off, _ = self.vector.get2(mid)
            if off <= a:
                lo = mid
            else:
                hi = mid - 1
        return lo


def load_csr(g: Graph, config: EmConfig | None = None) -> ExternalGraph:
    """Serialize a Graph into a BlockVector-backed adjacency (16 MB cache default)."""
    if config is None:
        config = EmConfig(DEFAULT_CACHE_BYTES, DEFAULT_BLOCK_BYTES, 16)
    return ExternalGraph(g, config)
