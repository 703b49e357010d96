"""Relative FM-index: the target BWT simulated through the reference BWT.

The target's BWT is described by a common subsequence with the reference's
BWT (``align_bwt``) and by wavelet trees over the two complements.  The
full variant additionally marks the same subsequence in the original texts
(``align_text``) so that locate and ISA queries can be delegated to the
reference index, which requires the subsequence to be bwt-invariant.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._io import FormatError, Reader, Writer
from .succinct import (
    IntVector,
    NoSuchOccurrence,
    WaveletTree,
    concat_ranges,
    make_bitvector,
    read_bitvector,
)
from .textindex import EMPTY, FMIndex, SuffixStructures, as_text, pattern, sa_from_bwt


# --------------------------------------------------------------------------
# alignments


class AlignPair:
    """Two lcs-bitvectors with equal popcounts marking a common subsequence."""

    TAG = b"a"

    def __init__(self, bx, by) -> None:
        if bx.ones != by.ones:
            raise ValueError("lcs-bitvectors must have equal popcounts")
        self.x = bx
        self.y = by

    @classmethod
    def from_bits(cls, bits_x, bits_y) -> "AlignPair":
        return cls(make_bitvector(bits_x), make_bitvector(bits_y))

    def __len__(self) -> int:
        return self.x.ones

    def _write(self, w: Writer) -> None:
        w.struct(self.x)
        w.struct(self.y)

    @classmethod
    def _read(cls, r: Reader) -> "AlignPair":
        bx = read_bitvector(r)
        by = read_bitvector(r)
        if bx.ones != by.ones:
            raise FormatError("alignment popcounts differ")
        return cls(bx, by)


def _context_blocks(text, sa, lo, hi, depth):
    """Split ranks [lo, hi) (0-based) by the symbol at offset ``depth`` of each suffix."""
    pos = sa[lo:hi] - 1 + depth
    sym = np.where(pos < text.size, text[np.minimum(pos, text.size - 1)], -1)
    cut = np.flatnonzero(sym[1:] != sym[:-1]) + 1
    starts = np.concatenate(([0], cut))
    ends = np.concatenate((cut, [hi - lo]))
    return {int(sym[s]): (lo + int(s), lo + int(e)) for s, e in zip(starts, ends)}


@dataclass
class LCSConfig:
    context: int = 2
    dmax: int = 256
    max_depth: int = 12


def approx_lcs(bwt_r, bwt_s, cfg: LCSConfig | None = None) -> AlignPair:
    """Approximate LCS of two BWTs by partitioning on lexicographic context.

    Blocks sharing the same length-``context`` prefix (or any block of at
    most ``dmax`` symbols) are aligned with an exact O(ND) diff; blocks whose edit distance exceeds ``dmax`` are split
    further by one more context symbol, and blocks still too divergent at
    ``max_depth`` fall back to a greedy match.  The endmarker never matches.
    """
    cfg = cfg or LCSConfig()
    bwt_r = np.asarray(bwt_r, dtype=np.int64)
    bwt_s = np.asarray(bwt_s, dtype=np.int64)
    bits_r = np.zeros(bwt_r.size, dtype=bool)
    bits_s = np.zeros(bwt_s.size, dtype=bool)
    sa_r, sa_s = sa_from_bwt(bwt_r), sa_from_bwt(bwt_s)
    t_r = _text_from(bwt_r, sa_r)
    t_s = _text_from(bwt_s, sa_s)
    a_all = bwt_r.copy()
    b_all = np.where(bwt_s == 0, -1, bwt_s)  # endmarkers never align

    stack = [((0, bwt_r.size), (0, bwt_s.size), 0)]
    while stack:
        (lo_r, hi_r), (lo_s, hi_s), depth = stack.pop()
        if lo_r >= hi_r or lo_s >= hi_s:
            continue
        a = a_all[lo_r:hi_r]
        b = b_all[lo_s:hi_s]
        if depth >= cfg.context or max(a.size, b.size) <= cfg.dmax:
            ok, ia, ib = K.myers_lcs(a, b, cfg.dmax)
            if ok:
                bits_r[lo_r + ia] = True
                bits_s[lo_s + ib] = True
                continue
            if depth >= cfg.max_depth:
                ia, ib = K.greedy_common(a, b)
                bits_r[lo_r + ia] = True
                bits_s[lo_s + ib] = True
                continue
        br = _context_blocks(t_r, sa_r, lo_r, hi_r, depth)
        bs = _context_blocks(t_s, sa_s, lo_s, hi_s, depth)
        for key in sorted(set(br) & set(bs), reverse=True):
            stack.append((br[key], bs[key], depth + 1))
    return AlignPair.from_bits(bits_r, bits_s)


def _text_from(bwt, sa):
    t = np.empty(bwt.size, dtype=np.int64)
    t[(sa - 2) % bwt.size] = bwt  # BWT[i] = T[SA[i] - 1], wrapping at SA[i] = 1
    return t


# --------------------------------------------------------------------------
# bwt-invariant subsequence


def merging_counts(t_r, bwt_r, t_s) -> np.ndarray:
    """For every suffix of S (0-based start), how many suffixes of R sort before it.

    R's endmarker sorts before S's endmarker.
    """
    alphabet = np.unique(np.concatenate((bwt_r, t_s)))
    rr = np.searchsorted(alphabet, bwt_r).astype(np.int32)
    ss = np.searchsorted(alphabet, t_s).astype(np.int64)
    sigma = alphabet.size
    step = 64
    occ = K.occ_checkpoints(rr, sigma, step)
    counts = np.bincount(rr, minlength=sigma)
    cnt = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
    return K.merge_counts(rr, occ, step, cnt, ss)


def build_merging_bitvector(t_r, bwt_r, t_s, isa_s) -> np.ndarray:
    """B_{R,S} as a boolean array: True where the mutual suffix array points into S."""
    cnt = merging_counts(t_r, bwt_r, t_s)
    bits = np.zeros(t_r.size + t_s.size, dtype=bool)
    bits[isa_s - 1 + cnt] = True
    return bits


@dataclass
class MatchArrays:
    """Run-length encoded left/right match arrays over reference text positions.

    ``left[t]`` (``right[t]``) is the target position ``u`` paired with
    reference position ``t`` (1-based, 0 = none); runs increase by one per step.
    """

    n: int
    left_runs: np.ndarray  # (start t, start value, length)
    right_runs: np.ndarray

    @staticmethod
    def _encode(arr: np.ndarray) -> np.ndarray:
        t = np.flatnonzero(arr) + 1
        if t.size == 0:
            return np.zeros((0, 3), dtype=np.int64)
        v = arr[t - 1]
        brk = np.ones(t.size, dtype=bool)
        brk[1:] = (np.diff(t) != 1) | (np.diff(v) != 1)
        starts = np.flatnonzero(brk)
        lens = np.diff(np.append(starts, t.size))
        return np.stack([t[starts], v[starts], lens], axis=1)

    @staticmethod
    def _decode(runs: np.ndarray, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.int64)
        if len(runs):
            t0, v0, ln = runs[:, 0] - 1, runs[:, 1], runs[:, 2]
            pos = concat_ranges(t0, t0 + ln)
            out[pos] = pos + np.repeat(v0 - t0, ln)
        return out

    @classmethod
    def from_arrays(cls, left, right) -> "MatchArrays":
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        return cls(left.size, cls._encode(left), cls._encode(right))

    @property
    def left(self) -> np.ndarray:
        return self._decode(self.left_runs, self.n)

    @property
    def right(self) -> np.ndarray:
        return self._decode(self.right_runs, self.n)

    def runs(self) -> int:
        return len(self.left_runs) + len(self.right_runs)


def build_match_arrays(b_rs, t_r, t_s, sa_r, isa_r, sa_s) -> MatchArrays:
    """Pair reference position t with target position u when suffixes R[t+1..] and
    S[u+1..] are adjacent in the mutual suffix array and R[t] = S[u]."""
    b_rs = np.asarray(b_rs, dtype=bool)
    n_r = t_r.size
    zeros = np.flatnonzero(~b_rs)  # 0-based mutual positions of R suffixes, by R rank
    s_rank = np.cumsum(b_rs)  # s_rank[p] = number of S suffixes in [0, p]
    left = np.zeros(n_r, dtype=np.int64)
    right = np.zeros(n_r, dtype=np.int64)
    t = np.arange(1, n_r)  # pairs need a following suffix R[t+1..]
    p = zeros[isa_r[t] - 1]  # mutual position of R[t+1..]
    for side, out in ((-1, left), (1, right)):
        q = p + side
        ok = (q >= 0) & (q < b_rs.size)
        qc = np.clip(q, 0, b_rs.size - 1)
        ok &= b_rs[qc]
        u1 = np.where(ok, sa_s[np.maximum(s_rank[qc] - 1, 0)], 0)  # S suffix start u+1
        ok &= u1 > 1
        u = u1 - 1
        ok &= t_s[np.maximum(u - 1, 0)] == t_r[t - 1]
        out[t[ok] - 1] = u[ok]
    return MatchArrays.from_arrays(left, right)


def lis_select(m: MatchArrays) -> tuple[np.ndarray, np.ndarray]:
    """(B_R as bool array, X) from the longest increasing left/right selection."""
    chosen = K.lis_two_choice(m.left, m.right)
    bits = chosen > 0
    return bits, chosen[bits]


def text_align_to_bwt_align(bits_r, x, isa_r, isa_s, n_s) -> AlignPair:
    """Map a text alignment (positions t in R, X in S) to BWT positions ISA[t+1]."""
    t = np.flatnonzero(bits_r) + 1
    br = np.zeros(isa_r.size, dtype=bool)
    bs = np.zeros(n_s, dtype=bool)
    br[isa_r[t] - 1] = True  # isa_r[t] is ISA_R[t+1] (0-based array)
    bs[isa_s[np.asarray(x, dtype=np.int64)] - 1] = True
    return AlignPair.from_bits(br, bs)


# --------------------------------------------------------------------------
# relative FM-index


@dataclass
class RFMConfig:
    full: bool = True
    sa_rate: int = 257
    isa_rate: int = 512
    lcs: LCSConfig | None = None


class RelativeFM:
    """FM-index of a target text represented relative to a reference FMIndex."""

    TAG = b"R"

    def __init__(self, ref: FMIndex, n, symbols, counts, clcs_r, clcs_s, align_bwt,
                 align_text=None, sa_rate=0, isa_rate=0, sa_marks=None, sa_samples=None,
                 isa_samples=None) -> None:
        self.ref = ref
        self.n = int(n)
        self.symbols = [int(s) for s in symbols]
        self.counts = [int(c) for c in counts]
        self.clcs_r = clcs_r
        self.clcs_s = clcs_s
        self.align_bwt = align_bwt
        self.align_text = align_text
        self.sa_rate = int(sa_rate)
        self.isa_rate = int(isa_rate)
        self.sa_marks = sa_marks
        self.sa_samples = sa_samples
        self.isa_samples = isa_samples
        self.C: dict[int, int] = {}
        acc = 0
        for s, c in zip(self.symbols, self.counts):
            self.C[s] = acc
            acc += c
        self._cstarts = [self.C[s] for s in self.symbols]
        self._br = align_bwt.x
        self._bs = align_bwt.y
        self.lcs_len = align_bwt.x.ones

    @property
    def full(self) -> bool:
        return self.align_text is not None

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, ref: FMIndex, ref_text, target_text, cfg: RFMConfig | None = None,
              ref_sx: SuffixStructures | None = None, tgt_sx: SuffixStructures | None = None) -> "RelativeFM":
        cfg = cfg or RFMConfig()
        t_r = as_text(ref_text)
        t_s = as_text(target_text)
        sx_r = ref_sx or SuffixStructures.build(t_r)
        sx_s = tgt_sx or SuffixStructures.build(t_s)
        if cfg.full:
            b_rs = build_merging_bitvector(t_r, sx_r.bwt, t_s, sx_s.isa)
            m = build_match_arrays(b_rs, t_r, t_s, sx_r.sa, sx_r.isa, sx_s.sa)
            bits_r, x = lis_select(m)
            align_bwt = text_align_to_bwt_align(bits_r, x, sx_r.isa, sx_s.isa, t_s.size)
            bits_s = np.zeros(t_s.size, dtype=bool)
            bits_s[x - 1] = True
            align_text = AlignPair.from_bits(bits_r, bits_s)
        else:
            align_bwt = approx_lcs(sx_r.bwt, sx_s.bwt, cfg.lcs)
            align_text = None
        return cls._assemble(ref, sx_r, sx_s, align_bwt, align_text, cfg)

    @classmethod
    def _assemble(cls, ref, sx_r, sx_s, align_bwt, align_text, cfg) -> "RelativeFM":
        br = align_bwt.x.bits()
        bs = align_bwt.y.bits()
        clcs_r = WaveletTree(sx_r.bwt[~br])
        clcs_s = WaveletTree(sx_s.bwt[~bs])
        symbols, counts = np.unique(sx_s.bwt, return_counts=True)
        kw = {}
        if align_text is not None:
            n = sx_s.sa.size
            text_bits = align_text.y.bits()
            # backward distance from each suffix start p to the nearest lcs text position p-1-k
            gap = _lcs_gap(text_bits)
            d = cfg.sa_rate
            ranks = np.arange(1, n + 1)
            chosen = (ranks % d == 0) & (gap[sx_s.sa - 1] >= d)
            marks = make_bitvector(chosen)
            di = cfg.isa_rate
            cand = np.arange(di, n + 1, di)
            cs = np.concatenate(([0], np.cumsum(text_bits)))
            free = cs[cand] - cs[cand - di] == 0
            isa_marks = np.zeros(n, dtype=bool)
            isa_marks[cand[free] - 1] = True
            kw = dict(
                sa_rate=d, isa_rate=di, sa_marks=marks, sa_samples=IntVector(sx_s.sa[chosen]),
                isa_samples=(make_bitvector(isa_marks), IntVector(sx_s.isa[cand[free] - 1])),
            )
        return cls(ref, sx_s.sa.size, symbols, counts, clcs_r, clcs_s, align_bwt, align_text, **kw)

    # -- rank / access --------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def rank(self, c: int, i: int) -> int:
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        if c not in self.C:
            return 0
        k = self._bs.rank1(i)
        j = self._br.select1(k) if k else 0
        return self.ref.wt.rank(c, j) - self.clcs_r.rank(c, j - k) + self.clcs_s.rank(c, i - k)

    def _inverse_select(self, i: int) -> tuple[int, int, bool]:
        """(BWT_S[i], rank of that symbol up to i, whether i is an lcs-position)."""
        k = self._bs.rank1(i)
        if k and self._bs.access(i):
            j = self._br.select1(k)
            c, r = self.ref.wt.inverse_select(j)
            return c, r - self.clcs_r.rank(c, j - k) + self.clcs_s.rank(c, i - k), True
        c, r = self.clcs_s.inverse_select(i - k)
        j = self._br.select1(k) if k else 0
        return c, self.ref.wt.rank(c, j) - self.clcs_r.rank(c, j - k) + r, False

    def access(self, i: int) -> int:
        return self._inverse_select(i)[0]

    def lf(self, i: int) -> int:
        c, r, _ = self._inverse_select(i)
        return self.C[c] + r

    def first_symbol(self, i: int) -> int:
        return self.symbols[bisect_right(self._cstarts, i - 1) - 1]

    # -- select ---------------------------------------------------------

    def select(self, c: int, i: int, rs: "RSelect | None" = None) -> int:
        occ = self.counts[self.symbols.index(c)] if c in self.C else 0
        if i < 1 or i > occ:
            raise NoSuchOccurrence(f"no occurrence {i} of symbol {c}")
        if rs is not None:
            return rs.select(self, c, i)
        lo, hi = 1, self.n
        while lo < hi:
            mid = (lo + hi) // 2
            if self.rank(c, mid) >= i:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def psi(self, i: int, rs: "RSelect | None" = None) -> int:
        if i < 1 or i > self.n:
            raise IndexError(f"rank {i} outside [1, {self.n}]")
        c = self.first_symbol(i)
        return self.select(c, i - self.C[c], rs)

    # -- search ---------------------------------------------------------

    def backward_step(self, sp: int, ep: int, c: int) -> tuple[int, int]:
        if sp > ep or c not in self.C:
            return EMPTY
        base = self.C[c]
        return base + self.rank(c, sp - 1) + 1, base + self.rank(c, ep)

    def find(self, p) -> tuple[int, int]:
        sp, ep = 1, self.n
        for c in reversed(pattern(p).tolist()):
            sp, ep = self.backward_step(sp, ep, c)
            if sp > ep:
                return EMPTY
        return sp, ep

    # -- locate / extract (full variant) ---------------------------------

    def _require_full(self) -> None:
        if not self.full:
            raise RuntimeError("locate/extract need the full relative FM-index")

    def locate_one(self, i: int) -> int:
        self._require_full()
        k = 0
        marks = self.sa_marks
        while True:
            if marks.access(i):
                return self.sa_samples[marks.rank1(i) - 1] + k
            c, r, lcs = self._inverse_select(i)
            if lcs:
                kk = self._bs.rank1(i)
                t = self.ref.locate_one(self._br.select1(kk)) - 1
                u = self.align_text.y.select1(self.align_text.x.rank1(t))
                return u + 1 + k
            if c == 0:
                return 1 + k
            i = self.C[c] + r
            k += 1

    def locate(self, sp: int, ep: int) -> list[int]:
        return [self.locate_one(i) for i in range(sp, ep + 1)]

    def isa(self, i: int) -> int:
        """ISA_S[i] via the next text lcs-position or an ISA sample, whichever is closer."""
        self._require_full()
        if i < 1 or i > self.n:
            raise IndexError(f"text position {i} outside [1, {self.n}]")
        bs_text = self.align_text.y
        r = bs_text.rank1(i - 1)
        q = bs_text.select1(r + 1) if r < bs_text.ones else self.n + 1
        marks, vals = self.isa_samples
        m = marks.rank1(i - 1)
        p = marks.select1(m + 1) if m < marks.ones else self.n + 1
        if q + 1 <= p and q <= self.n:
            t = self.align_text.x.select1(r + 1)
            j = self.ref.isa(t + 1)
            cur = self._bs.select1(self._br.rank1(j))  # ISA_S[q+1]
            steps = q + 1 - i
        elif p <= self.n:
            cur = vals[m]
            steps = p - i
        else:
            cur, steps = 1, self.n - i  # ISA_S[n] = 1
        for _ in range(steps):
            cur = self.lf(cur)
        return cur

    def extract(self, i: int, j: int) -> np.ndarray:
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"bad extract range [{i}, {j}] for n={self.n}")
        out = []
        if j == self.n:
            out.append(0)
            j -= 1
            r = 1
        else:
            r = self.isa(j + 1)
        for _ in range(j - i + 1):
            c, rr, _ = self._inverse_select(r)
            out.append(c)
            r = self.C[c] + rr
        return np.asarray(out[::-1], dtype=np.int64)

    # -- serialization --------------------------------------------------

    def _write(self, w: Writer) -> None:
        w.u64(self.n)
        w.words(np.asarray(self.symbols, dtype=np.int64).view(np.uint64))
        w.words(np.asarray(self.counts, dtype=np.uint64))
        w.struct(self.clcs_r)
        w.struct(self.clcs_s)
        w.struct(self.align_bwt)
        w.u64(int(self.full))
        if self.full:
            w.struct(self.align_text)
            w.u64(self.sa_rate)
            w.u64(self.isa_rate)
            w.struct(self.sa_marks)
            w.struct(self.sa_samples)
            w.struct(self.isa_samples[0])
            w.struct(self.isa_samples[1])

    @classmethod
    def _read(cls, r: Reader, ref: FMIndex | None = None) -> "RelativeFM":
        n = r.u64()
        symbols = r.words().view(np.int64).tolist()
        counts = r.words().astype(np.int64).tolist()
        clcs_r = r.struct(WaveletTree)
        clcs_s = r.struct(WaveletTree)
        align_bwt = r.struct(AlignPair)
        kw = {}
        if r.u64():
            kw["align_text"] = r.struct(AlignPair)
            kw["sa_rate"] = r.u64()
            kw["isa_rate"] = r.u64()
            kw["sa_marks"] = read_bitvector(r)
            kw["sa_samples"] = r.struct(IntVector)
            kw["isa_samples"] = (read_bitvector(r), r.struct(IntVector))
        if sum(counts) != n or align_bwt.y.n != n:
            raise FormatError("relative FM-index lengths disagree")
        return cls(ref, n, symbols, counts, clcs_r, clcs_s, align_bwt, **kw)

    def attach(self, ref: FMIndex) -> "RelativeFM":
        if self.align_bwt.x.n != ref.n:
            raise FormatError("reference index length does not match the alignment")
        self.ref = ref
        return self


def _lcs_gap(text_bits: np.ndarray) -> np.ndarray:
    """gap[p-1] = smallest k >= 0 with text_bits[p-1-k-1] set (an lcs at p-k-1), else p-1."""
    n = text_bits.size
    idx = np.where(text_bits, np.arange(1, n + 1), 0)  # 1-based lcs positions
    last = np.maximum.accumulate(idx)  # last lcs position <= q
    p = np.arange(1, n + 1)
    prev = np.concatenate(([0], last[:-1]))  # last lcs position <= p-1
    return np.where(prev > 0, p - 1 - prev, p - 1)


# --------------------------------------------------------------------------
# relative select


class RSelect:
    """Alignment of the first columns: B_F[i] = B_BWT[psi(i)], plus per-symbol lcs counts."""

    TAG = b"S"

    def __init__(self, bf_r, bf_s, symbols, c_lcs) -> None:
        self.bf_r = bf_r
        self.bf_s = bf_s
        self.c_lcs = dict(zip((int(s) for s in symbols), (int(c) for c in c_lcs)))

    @classmethod
    def build(cls, rfm: RelativeFM, bwt_r, bwt_s) -> "RSelect":
        br = rfm.align_bwt.x.bits()
        bs = rfm.align_bwt.y.bits()
        psi_r = np.argsort(bwt_r, kind="stable")  # 0-based psi
        psi_s = np.argsort(bwt_s, kind="stable")
        lcs_syms = np.asarray(bwt_r)[br]
        symbols = np.union1d(np.unique(bwt_r), np.unique(bwt_s))
        counts = np.array([np.count_nonzero(lcs_syms < s) for s in symbols], dtype=np.int64)
        return cls(make_bitvector(br[psi_r]), make_bitvector(bs[psi_s]), symbols, counts)

    def select(self, rfm: RelativeFM, c: int, i: int) -> int:
        base = self.c_lcs.get(c, 0)
        pos_f = rfm.C[c] + i
        r = self.bf_s.rank1(pos_f) - base
        if self.bf_s.access(pos_f):
            ref = rfm.ref
            p = self.bf_r.select1(base + r)
            j = ref.wt.select(c, p - ref.C[c])
            return rfm._bs.select1(rfm._br.rank1(j))
        q = rfm.clcs_s.select(c, i - r)
        return rfm._bs.select0(q)

    def _write(self, w: Writer) -> None:
        w.struct(self.bf_r)
        w.struct(self.bf_s)
        keys = sorted(self.c_lcs)
        w.words(np.asarray(keys, dtype=np.int64).view(np.uint64))
        w.words(np.asarray([self.c_lcs[k] for k in keys], dtype=np.uint64))

    @classmethod
    def _read(cls, r: Reader) -> "RSelect":
        bf_r = read_bitvector(r)
        bf_s = read_bitvector(r)
        keys = r.words().view(np.int64)
        vals = r.words().astype(np.int64)
        return cls(bf_r, bf_s, keys, vals)
