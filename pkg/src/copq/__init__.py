"""Cache-oblivious priority queues over a counted block-transfer simulator.

Three priority queues (binary, funnel, bucket), three Dijkstra variants
built on them, graph generation and DIMACS I/O, and a benchmark harness
that reports exact simulated block transfers instead of wall-clock I/O wait.
"""

from .emcore import BlockVector, EmConfig, IoStats, MB
from .binary_heap import BinaryHeap
from .funnel_heap import FunnelHeap
from .bucket_heap import BucketHeap
from .graphs import Graph, GnpSpec, gen_gnp, parse_dimacs, write_dimacs, load_csr, ExternalGraph
from .sssp import DistanceResult, sssp_reference, sssp_binary, sssp_funnel, sssp_bucket

__all__ = [
    "BlockVector",
    "EmConfig",
    "IoStats",
    "MB",
    "BinaryHeap",
    "FunnelHeap",
    "BucketHeap",
    "Graph",
    "GnpSpec",
    "gen_gnp",
    "parse_dimacs",
    "write_dimacs",
    "load_csr",
    "ExternalGraph",
    "DistanceResult",
    "sssp_reference",
    "sssp_binary",
    "sssp_funnel",
    "sssp_bucket",
]
