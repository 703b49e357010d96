"""Spot-check a built reference/target pair against freshly built plain arrays.

The oracle side rebuilds SA, ISA, LCP and BWT of the target from its text
with the uncompressed constructions and compares sampled queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bundle import ReferenceSet, TargetSet
from .synth import MutationModel, mutate, random_dna, rng_for
from .textindex import SuffixStructures, as_text, lf_array


@dataclass
class Report:
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, what: str, got, want) -> None:
        self.checks += 1
        if got != want:
            self.failures.append(f"{what}: got {got!r}, expected {want!r}")


def verify_pair(ref: ReferenceSet, tgt: TargetSet, target_text=None, samples: int = 500,
                seed: int = 0, report: Report | None = None) -> Report:
    rep = report or Report()
    rfm, rlcp = tgt.rfm, tgt.rlcp
    n = rfm.n
    t = as_text(target_text) if target_text is not None else rfm.extract(1, n)
    rep.expect("target length", int(t.size), n)
    sx = SuffixStructures.build(t)
    lf = lf_array(sx.bwt) + 1
    psi = np.empty(n, dtype=np.int64)
    psi[lf - 1] = np.arange(1, n + 1)
    lcp = np.asarray(sx.lcp)
    rng = rng_for(seed)
    for i in rng.integers(1, n + 1, samples).tolist():
        rep.expect(f"access({i})", rfm.access(i), int(sx.bwt[i - 1]))
        rep.expect(f"lf({i})", rfm.lf(i), int(lf[i - 1]))
        rep.expect(f"psi({i})", tgt.tree()._psi(i), int(psi[i - 1]))
        rep.expect(f"lcp({i})", rlcp.access(i), int(lcp[i - 1]))
        if rfm.full:
            rep.expect(f"locate({i})", rfm.locate_one(i), int(sx.sa[i - 1]))
            rep.expect(f"isa({i})", rfm.isa(i), int(sx.isa[i - 1]))
            j = min(n, i + 15)
            rep.expect(f"extract({i},{j})", rfm.extract(i, j).tolist(), t[i - 1 : j].tolist())
        v = lcp[i - 1]
        after = np.flatnonzero(lcp[i:] < v)
        rep.expect(f"nsv({i})", rlcp.nsv(i)[0], i + 1 + int(after[0]) if after.size else n + 1)
        before = np.flatnonzero(lcp[: i - 1] < v)
        rep.expect(f"psv({i})", rlcp.psv(i)[0], int(before[-1]) + 1 if before.size else 0)
    for _ in range(samples):
        a, b = sorted(rng.integers(1, n + 1, 2).tolist())
        seg = lcp[a - 1 : b]
        k = int(np.argmin(seg))
        rep.expect(f"rmq({a},{b})", rlcp.rmq(a, b), (a + k, int(seg[k])))
    for _ in range(min(samples, 100)):
        s = int(rng.integers(1, n))
        ln = int(rng.integers(1, 9))
        p = t[s - 1 : min(n - 1, s - 1 + ln)]
        if p.size == 0:
            continue
        keys = _prefix_keys(t, sx.sa, p)
        lo = np.searchsorted(keys, 0, side="left")
        hi = np.searchsorted(keys, 0, side="right")
        rep.expect(f"find({p.tolist()})", rfm.find(p), (int(lo) + 1, int(hi)))
    return rep


def _prefix_keys(t, sa, p) -> np.ndarray:
    """-1/0/+1 comparison of each suffix (in SA order) against pattern p."""
    n, m = t.size, p.size
    idx = (sa - 1)[:, None] + np.arange(m)[None, :]
    win = np.where(idx < n, t[np.minimum(idx, n - 1)], -1)
    diff = win - p[None, :]
    first = np.argmax(diff != 0, axis=1)
    d = diff[np.arange(sa.size), first]
    return np.sign(d)


def verify_random(pairs: int, length: int, seed: int = 0, samples: int = 200) -> Report:
    """Build and check random reference/target pairs over ACGTN."""
    rep = Report()
    rng = rng_for(seed)
    rates = [1e-4, 1e-3, 1e-2, 1e-1]
    for k in range(pairs):
        r = random_dna(int(rng.integers(2, length + 1)), int(rng.integers(1 << 62)), b"ACGTN")
        alphabet = bytes(sorted(set(r)))
        s, _ = mutate(r, MutationModel(rates[k % len(rates)], seed=int(rng.integers(1 << 62))), alphabet)
        if not s:
            s = r[:1]
        ref = ReferenceSet.build(r)
        tgt = TargetSet.build(ref, s, ref_text=as_text(r))
        verify_pair(ref, tgt, as_text(s), samples, int(rng.integers(1 << 62)), rep)
    return rep
