"""Suffix array, LCP array, BWT and a sampled FM-index (the non-relative baseline).

Texts are integer arrays whose last symbol is the unique endmarker 0.
Positions and ranks are 1-based throughout the public API; an empty
suffix-array range is any ``(sp, ep)`` with ``sp > ep``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._io import FormatError, Reader, Writer
from .succinct import BitVector, IntVector, SLArray, WaveletTree

EMPTY = (1, 0)


def as_text(data) -> np.ndarray:
    """Validate (or build) an endmarker-terminated text.

    ``str``/``bytes`` input gets the endmarker appended; arrays must already
    end with it.
    """
    if isinstance(data, str):
        data = data.encode("ascii")
    if isinstance(data, (bytes, bytearray)):
        t = np.frombuffer(bytes(data), dtype=np.uint8).astype(np.int64)
        t = np.append(t, 0)
    else:
        t = np.asarray(data, dtype=np.int64)
    if t.size == 0 or t[-1] != 0:
        raise ValueError("text must end with the endmarker 0")
    if np.count_nonzero(t == 0) != 1:
        raise ValueError("endmarker 0 must occur exactly once, at the end")
    if t.min() < 0:
        raise ValueError("text symbols must be non-negative")
    return t


def pattern(p) -> np.ndarray:
    if isinstance(p, str):
        p = p.encode("ascii")
    if isinstance(p, (bytes, bytearray)):
        return np.frombuffer(bytes(p), dtype=np.uint8).astype(np.int64)
    return np.asarray(p, dtype=np.int64)


def suffix_array(t: np.ndarray) -> np.ndarray:
    """1-based suffix array by prefix doubling (O(n log^2 n), vectorized)."""
    t = np.asarray(t)
    n = t.size
    _, rank = np.unique(t, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        second = np.zeros(n, dtype=np.int64)
        second[: n - k] = rank[k:] + 1 if k < n else 0
        order = np.lexsort((second, rank))
        r_o, s_o = rank[order], second[order]
        new = np.empty(n, dtype=np.int64)
        new[order] = np.concatenate(([0], np.cumsum((r_o[1:] != r_o[:-1]) | (s_o[1:] != s_o[:-1]))))
        rank = new
        if rank.max() == n - 1 or k >= n:
            return order.astype(np.int64) + 1
        k *= 2


def lcp_array(t: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """1-based LCP values as a 0-based numpy array (entry 0 is LCP[1] = 0)."""
    return K.kasai(np.asarray(t, dtype=np.int64), np.asarray(sa, dtype=np.int64) - 1)


def bwt_from_sa(t: np.ndarray, sa: np.ndarray) -> np.ndarray:
    return np.asarray(t)[np.asarray(sa) - 2]  # index -1 wraps to T[n]


def inverse(perm: np.ndarray) -> np.ndarray:
    """Inverse of a 1-based permutation."""
    out = np.empty_like(perm)
    out[perm - 1] = np.arange(1, perm.size + 1, dtype=perm.dtype)
    return out


@dataclass
class SuffixStructures:
    sa: np.ndarray
    isa: np.ndarray
    lcp: np.ndarray
    bwt: np.ndarray

    @classmethod
    def build(cls, text) -> "SuffixStructures":
        t = as_text(text)
        sa = suffix_array(t)
        return cls(sa=sa, isa=inverse(sa), lcp=lcp_array(t, sa), bwt=bwt_from_sa(t, sa))

    def lcp_slarray(self) -> SLArray:
        return SLArray(self.lcp)


def lf_array(bwt: np.ndarray) -> np.ndarray:
    """Vectorized LF mapping as a 0-based array (LF[i] is the rank of the preceding suffix)."""
    order = np.argsort(bwt, kind="stable")
    lf = np.empty(bwt.size, dtype=np.int64)
    lf[order] = np.arange(bwt.size, dtype=np.int64)
    return lf


def sa_from_bwt(bwt: np.ndarray) -> np.ndarray:
    """Recover the 1-based suffix array from a BWT by one backward walk."""
    n = bwt.size
    lf = lf_array(np.asarray(bwt, dtype=np.int64))
    ranks = K.walk_backward(lf, 0, n)  # ranks of suffixes n, n-1, ..., 1
    sa = np.empty(n, dtype=np.int64)
    sa[ranks] = np.arange(n, 0, -1, dtype=np.int64)
    return sa


@dataclass
class FMConfig:
    sa_rate: int = 17
    isa_rate: int = 64
    sampling: str = "suffix"  # or "text"

    def __post_init__(self) -> None:
        if self.sa_rate < 1 or self.isa_rate < 1:
            raise ValueError("sample intervals must be positive")
        if self.sampling not in ("suffix", "text"):
            raise ValueError(f"unknown sampling mode {self.sampling!r}")


class FMIndex:
    """Succinct suffix array: Huffman-shaped wavelet tree over the BWT plus SA/ISA samples."""

    TAG = b"F"

    def __init__(self, n, wt, config, sa_samples, isa_samples, marks=None) -> None:
        self.n = int(n)
        self.wt = wt
        self.config = config
        self.sa_samples = sa_samples
        self.isa_samples = isa_samples
        self.marks = marks
        self._sa = sa_samples._vals
        self._isa = isa_samples._vals
        self._d = config.sa_rate
        self._di = config.isa_rate
        self.symbols = list(wt.symbols)
        self.C: dict[int, int] = {}
        acc = 0
        for s in self.symbols:
            self.C[s] = acc
            acc += wt.counts[s]
        self._cstarts = [self.C[s] for s in self.symbols]

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, text, config: FMConfig | None = None, sa: np.ndarray | None = None) -> "FMIndex":
        config = config or FMConfig()
        t = as_text(text)
        n = t.size
        if sa is None:
            sa = suffix_array(t)
        bwt = bwt_from_sa(t, sa)
        wt = WaveletTree(bwt)
        d = config.sa_rate
        marks = None
        if config.sampling == "suffix":
            sa_samples = IntVector(sa[d - 1 :: d])
        else:
            chosen = (sa - 1) % d == 0
            marks = BitVector(chosen)
            sa_samples = IntVector(sa[chosen])
        isa = inverse(sa)
        pos = np.arange(config.isa_rate, n + 1, config.isa_rate)
        if pos.size == 0 or pos[-1] != n:
            pos = np.append(pos, n)
        isa_samples = IntVector(isa[pos - 1])
        return cls(n, wt, config, sa_samples, isa_samples, marks)

    # -- core mappings --------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def bwt(self) -> np.ndarray:
        return self.wt.to_array()

    def rank(self, c: int, i: int) -> int:
        return self.wt.rank(c, i)

    def lf(self, i: int) -> int:
        c, r = self.wt.inverse_select(i)
        return self.C[c] + r

    def psi(self, i: int) -> int:
        if i < 1 or i > self.n:
            raise IndexError(f"rank {i} outside [1, {self.n}]")
        k = bisect_right(self._cstarts, i - 1) - 1
        c = self.symbols[k]
        return self.wt.select(c, i - self._cstarts[k])

    def first_symbol(self, i: int) -> int:
        """F[i]: first symbol of the i-th suffix."""
        return self.symbols[bisect_right(self._cstarts, i - 1) - 1]

    def backward_step(self, sp: int, ep: int, c: int) -> tuple[int, int]:
        if sp > ep:
            return EMPTY
        base = self.C.get(c)
        if base is None:
            return EMPTY
        return base + self.wt.rank(c, sp - 1) + 1, base + self.wt.rank(c, ep)

    def find(self, p) -> tuple[int, int]:
        sp, ep = 1, self.n
        for c in reversed(pattern(p).tolist()):
            sp, ep = self.backward_step(sp, ep, c)
            if sp > ep:
                return EMPTY
        return sp, ep

    # -- samples --------------------------------------------------------

    def _sample(self, i: int) -> int | None:
        if self.marks is None:
            return self._sa[i // self._d - 1] if i % self._d == 0 else None
        if self.marks.access(i):
            return self._sa[self.marks.rank1(i) - 1]
        return None

    def locate_one(self, i: int) -> int:
        k = 0
        while True:
            v = self._sample(i)
            if v is not None:
                return v + k
            c, r = self.wt.inverse_select(i)
            if c == 0:
                return 1 + k
            i = self.C[c] + r
            k += 1

    def locate(self, sp: int, ep: int) -> list[int]:
        return [self.locate_one(i) for i in range(sp, ep + 1)]

    def _isa_anchor(self, j: int) -> tuple[int, int]:
        """(p, ISA[p]) for the nearest sampled text position p >= j."""
        m = -(-j // self._di)
        if m * self._di >= self.n:
            return self.n, self._isa[-1]
        return m * self._di, self._isa[m - 1]

    def isa(self, j: int) -> int:
        if j < 1 or j > self.n:
            raise IndexError(f"text position {j} outside [1, {self.n}]")
        p, r = self._isa_anchor(j)
        for _ in range(p - j):
            r = self.lf(r)
        return r

    def extract(self, i: int, j: int) -> np.ndarray:
        """T[i..j] (inclusive)."""
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"bad extract range [{i}, {j}] for n={self.n}")
        out = []
        if j == self.n:
            out.append(0)
            j -= 1
            r = 1  # ISA[n]: the endmarker suffix is the smallest
        else:
            r = self.isa(j + 1)
        for _ in range(j - i + 1):
            c, rr = self.wt.inverse_select(r)
            out.append(c)
            r = self.C[c] + rr
        return np.asarray(out[::-1], dtype=np.int64)

    def text(self) -> np.ndarray:
        """Whole text, decoded with a vectorized LF walk."""
        bwt = self.bwt()
        lf = lf_array(bwt)
        ranks = K.walk_backward(lf, 0, self.n)  # suffix n, n-1, ...
        out = np.empty(self.n, dtype=np.int64)
        out[-1] = 0
        out[:-1] = bwt[ranks[:-1]][::-1]
        return out

    # -- serialization --------------------------------------------------

    def _write(self, w: Writer) -> None:
        w.u64(self.n)
        w.u64(self.config.sa_rate)
        w.u64(self.config.isa_rate)
        w.u64(0 if self.config.sampling == "suffix" else 1)
        w.struct(self.wt)
        w.struct(self.sa_samples)
        w.struct(self.isa_samples)
        if self.marks is not None:
            w.struct(self.marks)

    @classmethod
    def _read(cls, r: Reader) -> "FMIndex":
        n = r.u64()
        cfg = FMConfig(r.u64(), r.u64(), "suffix" if r.u64() == 0 else "text")
        wt = r.struct(WaveletTree)
        sa_s = r.struct(IntVector)
        isa_s = r.struct(IntVector)
        marks = r.struct(BitVector) if cfg.sampling == "text" else None
        if wt.n != n:
            raise FormatError("FM-index length does not match its BWT")
        return cls(n, wt, cfg, sa_s, isa_s, marks)
