"""Query benchmarks over a loaded reference/target pair.

Each operation is timed per query with ``perf_counter_ns``; rows report
the mean and 95th percentile in microseconds and the size of the component
the operation reads, in bits per character.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._io import to_bytes
from .bundle import ReferenceSet, TargetSet
from .synth import rng_for

OPERATIONS = ("lf", "psi", "lcp-random", "lcp-seq", "nsv", "psv", "rmq", "locate",
              "traverse", "maxsub-fwd", "maxsub-bwd")
CSV_COLUMNS = ("operation", "queries", "mean_us", "p95_us", "size_bpc")


@dataclass
class BenchRow:
    operation: str
    queries: int
    mean_us: float
    p95_us: float
    size_bpc: float

    def csv(self) -> str:
        return f"{self.operation},{self.queries},{self.mean_us:.3f},{self.p95_us:.3f},{self.size_bpc:.4f}"


def rmq_ranges(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(sp, ep) pairs with length 16^k drawn with probability 0.5^k, k >= 1, clipped to n."""
    k = rng.geometric(0.5, count)
    length = np.minimum(16.0 ** np.minimum(k, 16), n).astype(np.int64)
    sp = (rng.random(count) * (n - length + 1)).astype(np.int64) + 1
    return np.stack([sp, sp + length - 1], axis=1)


def _timed(fn, args) -> np.ndarray:
    out = np.empty(len(args), dtype=np.float64)
    clock = time.perf_counter_ns
    if args:
        fn(*args[0])  # warm-up: first calls pay for lazy caches and jit dispatch
    for k, a in enumerate(args):
        t0 = clock()
        fn(*a)
        out[k] = clock() - t0
    return out / 1000.0


def _row(op, times, bpc, per=1) -> BenchRow:
    t = np.asarray(times, dtype=np.float64) / per
    return BenchRow(op, int(t.size * per), float(t.mean()) if t.size else 0.0,
                    float(np.percentile(t, 95)) if t.size else 0.0, bpc)


def run_bench(ref: ReferenceSet, tgt: TargetSet, ops=OPERATIONS, queries: int = 1000,
              seed: int = 0, query_len: int = 100) -> list[BenchRow]:
    rng = rng_for(seed)
    rfm, rlcp = tgt.rfm, tgt.rlcp
    n = rfm.n
    bpc_rfm = 8 * len(to_bytes(rfm)) / n
    bpc_rlcp = 8 * len(to_bytes(rlcp)) / n
    bpc_total = bpc_rfm + bpc_rlcp
    tree = tgt.tree()
    pos = [(int(x),) for x in rng.integers(1, n + 1, queries)]
    rows = []
    for op in ops:
        if op == "lf":
            rows.append(_row(op, _timed(rfm.lf, pos), bpc_rfm))
        elif op == "psi":
            rows.append(_row(op, _timed(tree._psi, pos), bpc_rfm))
        elif op == "lcp-random":
            rows.append(_row(op, _timed(rlcp.access, pos), bpc_rlcp))
        elif op == "lcp-seq":
            block = 1024
            starts = [(int(s), int(min(n, s + block - 1))) for s in rng.integers(1, n + 1, max(1, queries // 10))]
            times = _timed(rlcp.access_seq, starts)
            lens = np.array([b - a + 1 for a, b in starts], dtype=np.float64)
            rows.append(BenchRow(op, int(lens.sum()), float(times.sum() / lens.sum()),
                                 float(np.percentile(times / lens, 95)), bpc_rlcp))
        elif op == "nsv":
            rows.append(_row(op, _timed(rlcp.nsv, pos), bpc_rlcp))
        elif op == "psv":
            rows.append(_row(op, _timed(rlcp.psv, pos), bpc_rlcp))
        elif op == "rmq":
            rng_ = [(int(a), int(b)) for a, b in rmq_ranges(n, queries, rng)]
            rows.append(_row(op, _timed(rlcp.rmq, rng_), bpc_rlcp))
        elif op == "locate":
            rows.append(_row(op, _timed(rfm.locate_one, pos), bpc_rfm))
        elif op == "traverse":
            it = tree.preorder()
            times = []
            clock = time.perf_counter_ns
            for _ in range(queries):
                t0 = clock()
                if next(it, None) is None:
                    break
                times.append((clock() - t0) / 1000.0)
            rows.append(_row(op, times, bpc_total))
        elif op in ("maxsub-fwd", "maxsub-bwd"):
            fn = tree.maximal_substrings_forward if op == "maxsub-fwd" else tree.maximal_substrings_backward
            ref_text = ref.fm
            m = max(1, queries // query_len)
            qs = []
            for s in rng.integers(1, max(2, ref_text.n - query_len), m):
                e = min(ref_text.n - 1, int(s) + query_len - 1)
                qs.append((ref_text.extract(int(s), e),))
            rows.append(_row(op, _timed(fn, qs), bpc_total, per=1))
        else:
            raise ValueError(f"unknown benchmark operation {op!r}")
    return rows
