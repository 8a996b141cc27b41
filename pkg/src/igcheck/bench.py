"""Timing harness for the scaling checks.

Evaluates one property over seeded random graphs of increasing size and
reports min-of-N wall times as CSV.  With several backends the same
graphs are timed once per backend, which is how the compiled and pure
table kernels are compared.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass

from .backends import get_backend
from .evaluator import Evaluator
from .properties import weakly_acyclic
from .randgraphs import bench_graph

DEFAULT_SIZES = (16, 64, 256, 1024)


@dataclass(frozen=True, slots=True)
class BenchRow:
    nodes: int
    edges: int
    seconds: float
    lfp_stages: int
    backend: str


def run_bench(sizes=DEFAULT_SIZES, seed=0, formula=None, backends=None,
              repeats=3):
    """Time one formula across graph sizes; returns a list of BenchRow."""
    if formula is None:
        formula = weakly_acyclic()
    rows = []
    for size in sizes:
        g = bench_graph(size, seed)
        for name in (backends or (None,)):
            backend = get_backend(g.node_count, name)
            best = None
            stages = 0
            for _ in range(max(1, repeats)):
                ev = Evaluator(g, backend=backend)
                t0 = time.perf_counter()
                v = ev.query(formula)
                dt = time.perf_counter() - t0
                if best is None or dt < best:
                    best = dt
                stages = max([stages] + v.stats.lfp_stages)
            rows.append(BenchRow(g.node_count, len(g.edges), best, stages,
                                 backend.name))
    return rows


def rows_to_csv(rows, with_backend=False):
    out = io.StringIO()
    head = "nodes,edges,seconds,lfp_stages"
    if with_backend:
        head += ",backend"
    out.write(head + "\n")
    for r in rows:
        line = f"{r.nodes},{r.edges},{r.seconds:.6f},{r.lfp_stages}"
        if with_backend:
            line += f",{r.backend}"
        out.write(line + "\n")
    return out.getvalue()
