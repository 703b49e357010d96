"""Relative LCP array with a 64-ary minima tree.

The target's differential LCP array is RLZ-parsed against the reference's.
Copy positions are rebuilt from the reference LCP array and one absolute
sample, the literal that closes the previous phrase::

    LCP_S[j] = LCP_S[s_i - 1] + LCP_R[r_i + (j - s_i)] - LCP_R[r_i - 1]

where ``s_i``/``r_i`` are the target/reference start of phrase ``i`` and
``LCP_S[0] = LCP_R[0] = 0``.  Literals are stored as absolute values.
"""

from __future__ import annotations

import numpy as np

from ._io import FormatError, Reader, Writer
from .rlz import RLZConfig, RLZMatcher, RLZParse
from .succinct import SLArray, concat_ranges

BRANCH = 64


def dlcp(lcp) -> np.ndarray:
    lcp = np.asarray(lcp, dtype=np.int64)
    return np.diff(lcp, prepend=0)


class MinimaTree:
    """Levelwise 64-ary tree of phrase minima stored as one slarray plus level offsets."""

    TAG = b"m"

    def __init__(self, m_lcp: SLArray, m_l: list[int]) -> None:
        self.m_lcp = m_lcp
        self.m_l = list(m_l)  # 1-based offsets of each level, plus one past the end
        flat = m_lcp.to_numpy().tolist()
        self.levels = [flat[a - 1 : b - 1] for a, b in zip(self.m_l, self.m_l[1:])]

    @classmethod
    def build(cls, leaves) -> "MinimaTree":
        level = np.asarray(leaves, dtype=np.int64)
        parts = [level]
        while level.size > 1:
            starts = np.arange(0, level.size, BRANCH)
            level = np.minimum.reduceat(level, starts)
            parts.append(level)
        offsets = np.cumsum([1] + [p.size for p in parts]).tolist()
        return cls(SLArray(np.concatenate(parts)), offsets)

    def parent(self, i: int, level: int) -> int:
        """Parent of node i (1-based index into M_LCP) at 1-based level."""
        return self.m_l[level] + (i - self.m_l[level - 1]) // BRANCH

    # leaves are 0-based phrase indices below

    def range_min(self, a: int, b: int) -> tuple[int, int]:
        """(value, leaf) of the leftmost minimum over leaves a..b."""
        v, level, node = self._range_min(0, a, b)
        return v, self._descend(level, node, v, le=True)

    def _range_min(self, level, a, b):
        lv = self.levels[level]
        if b - a < 2 * BRANCH or level + 1 == len(self.levels):
            seg = lv[a : b + 1]
            v = min(seg)
            return v, level, a + seg.index(v)
        a2 = -(-a // BRANCH)
        b2 = (b + 1) // BRANCH - 1
        best = None
        if a < a2 * BRANCH:
            seg = lv[a : a2 * BRANCH]
            v = min(seg)
            best = (v, level, a + seg.index(v))
        mid = self._range_min(level + 1, a2, b2)
        if best is None or mid[0] < best[0]:
            best = mid
        if (b2 + 1) * BRANCH <= b:
            lo = (b2 + 1) * BRANCH
            seg = lv[lo : b + 1]
            v = min(seg)
            if v < best[0]:
                best = (v, level, lo + seg.index(v))
        return best

    def _descend(self, level, node, bound, le):
        """Leftmost leaf under (level, node) whose value is < bound (or <= when le)."""
        while level > 0:
            level -= 1
            lv = self.levels[level]
            lo = node * BRANCH
            for k in range(lo, min(lo + BRANCH, len(lv))):
                if lv[k] < bound or (le and lv[k] == bound):
                    node = k
                    break
        return node

    def _descend_right(self, level, node, bound, le):
        while level > 0:
            level -= 1
            lv = self.levels[level]
            lo = node * BRANCH
            for k in range(min(lo + BRANCH, len(lv)) - 1, lo - 1, -1):
                if lv[k] < bound or (le and lv[k] == bound):
                    node = k
                    break
        return node

    def next_leaf(self, k: int, bound: int, le: bool) -> int | None:
        """Smallest leaf k' > k with value < bound (<= when le)."""
        level, node = 0, k
        while level < len(self.levels):
            lv = self.levels[level]
            end = min((node // BRANCH + 1) * BRANCH, len(lv))
            for q in range(node + 1, end):
                if lv[q] < bound or (le and lv[q] == bound):
                    return self._descend(level, q, bound, le)
            level += 1
            node //= BRANCH
        return None

    def prev_leaf(self, k: int, bound: int, le: bool) -> int | None:
        """Largest leaf k' < k with value < bound (<= when le)."""
        level, node = 0, k
        while level < len(self.levels):
            lv = self.levels[level]
            begin = (node // BRANCH) * BRANCH
            for q in range(node - 1, begin - 1, -1):
                if lv[q] < bound or (le and lv[q] == bound):
                    return self._descend_right(level, q, bound, le)
            level += 1
            node //= BRANCH
        return None

    def _write(self, w: Writer) -> None:
        w.struct(self.m_lcp)
        w.words(np.asarray(self.m_l, dtype=np.uint64))

    @classmethod
    def _read(cls, r: Reader) -> "MinimaTree":
        m = r.struct(SLArray)
        m_l = r.words().astype(np.int64).tolist()
        if not m_l or m_l[-1] - 1 != len(m):
            raise FormatError("minima tree level offsets do not match its values")
        return cls(m, m_l)


class RLCPArray:
    """LCP array of a target stored relative to the reference LCP array (1-based)."""

    TAG = b"L"

    def __init__(self, lcp_r: SLArray | None, parse: RLZParse, w_c: SLArray, tree: MinimaTree) -> None:
        self.lcp_r = lcp_r
        self.parse = parse
        self.w_c = w_c
        self.tree = tree
        self.n = parse.n
        self.z = parse.z
        self._setup()

    def _setup(self) -> None:
        p = self.parse
        self._start = p._start  # 1-based starts plus n+1
        self._len = p._len
        self._lsum = p._lsum
        self._src = [w + s for w, s in zip(p._wr, p._start)]  # r_i (1-based)
        self._leaf = self.tree.levels[0]
        wc = self.w_c.to_numpy()
        last = np.asarray(self._lsum[1:-1], dtype=np.int64) - 1  # last literal of phrases 1..z-1
        self._abs_prev = [0] + wc[last].tolist()

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, lcp_r, lcp_s, matcher: RLZMatcher | None = None, cfg: RLZConfig | None = None) -> "RLCPArray":
        cfg = cfg or RLZConfig(max_len=1024)
        lcp_r_np = lcp_r.to_numpy() if isinstance(lcp_r, SLArray) else np.asarray(lcp_r, dtype=np.int64)
        lcp_r_sl = lcp_r if isinstance(lcp_r, SLArray) else SLArray(lcp_r_np)
        lcp_s = np.asarray(lcp_s, dtype=np.int64)
        if matcher is None:
            matcher = RLZMatcher(dlcp(lcp_r_np))
        parse = RLZParse.build(matcher, dlcp(lcp_s), cfg, store_literals=False)
        st = np.asarray(parse._start[:-1], dtype=np.int64)
        ln = np.asarray(parse._len, dtype=np.int64)
        ends = np.asarray(parse._start[1:], dtype=np.int64)
        lit_pos = concat_ranges(st - 1 + ln, ends - 1)
        w_c = SLArray(lcp_s[lit_pos])
        tree = MinimaTree.build(np.minimum.reduceat(lcp_s, st - 1))
        return cls(lcp_r_sl, parse, w_c, tree)

    # -- access ---------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def phrase_of(self, j: int) -> int:
        return self.parse.starts.rank1(j)

    def access(self, j: int) -> int:
        return self.access_phrase(j)[0]

    __getitem__ = access

    def access_phrase(self, j: int) -> tuple[int, int]:
        """(LCP_S[j], phrase id)."""
        if j < 1 or j > self.n:
            raise IndexError(f"position {j} outside [1, {self.n}]")
        i = self.parse.starts.rank1(j)
        off = j - self._start[i - 1]
        ln = self._len[i - 1]
        if off < ln:
            r = self._src[i - 1]
            prev = self.lcp_r.get(r - 1) if r > 1 else 0
            return self._abs_prev[i - 1] + self.lcp_r.get(r + off) - prev, i
        return self.w_c.get(self._lsum[i - 1] + off - ln + 1), i

    def phrase_values(self, i: int) -> np.ndarray:
        """All LCP values of phrase i."""
        s, nxt = self._start[i - 1], self._start[i]
        ln = self._len[i - 1]
        out = np.empty(nxt - s, dtype=np.int64)
        if ln:
            r = self._src[i - 1]
            prev = self.lcp_r.get(r - 1) if r > 1 else 0
            out[:ln] = self.lcp_r.get_range(r, r + ln - 1) + (self._abs_prev[i - 1] - prev)
        if nxt - s > ln:
            a = self._lsum[i - 1] + 1
            out[ln:] = self.w_c.get_range(a, a + (nxt - s - ln) - 1)
        return out

    def access_seq(self, a: int, b: int) -> np.ndarray:
        """LCP_S[a..b] decoded phrase by phrase."""
        if a > b:
            return np.zeros(0, dtype=np.int64)
        if a < 1 or b > self.n:
            raise IndexError(f"range [{a}, {b}] outside [1, {self.n}]")
        l, r = self.phrase_of(a), self.phrase_of(b)
        vals = np.concatenate([self.phrase_values(i) for i in range(l, r + 1)])
        off = a - self._start[l - 1]
        return vals[off : off + b - a + 1]

    def to_numpy(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        st = np.asarray(self._start[:-1], dtype=np.int64)
        ln = np.asarray(self._len, dtype=np.int64)
        src = np.asarray(self._src, dtype=np.int64)
        lr = self.lcp_r.to_numpy()
        lr0 = np.concatenate(([0], lr))  # lr0[k] = LCP_R[k]
        src = np.where(ln > 0, src, 1)  # zero-length phrases have no meaningful source
        base = np.asarray(self._abs_prev, dtype=np.int64) - lr0[src - 1]
        pos = concat_ranges(st - 1, st - 1 + ln)
        rel = pos - np.repeat(st - 1, ln)
        out[pos] = np.repeat(base, ln) + lr0[np.repeat(src, ln) + rel]
        lit = concat_ranges(st - 1 + ln, np.asarray(self._start[1:]) - 1)
        out[lit] = self.w_c.to_numpy()
        return out

    # -- rmq / nsv / psv --------------------------------------------------

    def rmq(self, sp: int, ep: int) -> tuple[int, int]:
        """(leftmost position of the minimum of LCP[sp..ep], the minimum)."""
        if not 1 <= sp <= ep <= self.n:
            raise IndexError(f"bad rmq range [{sp}, {ep}] for n={self.n}")
        l, r = self.phrase_of(sp), self.phrase_of(ep)
        lp = l if self._start[l - 1] == sp else l + 1
        rp = r if self._start[r] - 1 == ep else r - 1
        if lp > rp:
            vals = self.access_seq(sp, ep)
            k = int(np.argmin(vals))
            return sp + k, int(vals[k])
        j, leaf = self.tree.range_min(lp - 1, rp - 1)
        k = leaf + 1
        vals = self.phrase_values(k)
        i = self._start[k - 1] + int(np.flatnonzero(vals == j)[0])
        if l < lp and self._leaf[l - 1] <= j:
            vals = self.phrase_values(l)[sp - self._start[l - 1] :]
            q = int(np.argmin(vals))
            if vals[q] <= j:
                i, j = sp + q, int(vals[q])
        if r > rp and self._leaf[r - 1] < j:
            vals = self.phrase_values(r)[: ep - self._start[r - 1] + 1]
            q = int(np.argmin(vals))
            if vals[q] < j:
                i, j = self._start[r - 1] + q, int(vals[q])
        return i, j

    def _next(self, i: int, le: bool) -> tuple[int, int]:
        v, k = self.access_phrase(i)
        vals = self.phrase_values(k)
        off = i - self._start[k - 1]
        rest = vals[off + 1 :]
        hit = np.flatnonzero(rest <= v if le else rest < v)
        if hit.size:
            return i + 1 + int(hit[0]), int(rest[hit[0]])
        k2 = self.tree.next_leaf(k - 1, v, le)
        if k2 is None:
            return self.n + 1, 0
        vals = self.phrase_values(k2 + 1)
        q = int(np.flatnonzero(vals <= v if le else vals < v)[0])
        return self._start[k2] + q, int(vals[q])

    def _prev(self, i: int, le: bool) -> tuple[int, int]:
        v, k = self.access_phrase(i)
        vals = self.phrase_values(k)
        off = i - self._start[k - 1]
        head = vals[:off]
        hit = np.flatnonzero(head <= v if le else head < v)
        if hit.size:
            return self._start[k - 1] + int(hit[-1]), int(head[hit[-1]])
        k2 = self.tree.prev_leaf(k - 1, v, le)
        if k2 is None:
            return 0, 0
        vals = self.phrase_values(k2 + 1)
        q = int(np.flatnonzero(vals <= v if le else vals < v)[-1])
        return self._start[k2] + q, int(vals[q])

    def nsv(self, i: int) -> tuple[int, int]:
        return self._next(i, False)

    def nsev(self, i: int) -> tuple[int, int]:
        return self._next(i, True)

    def psv(self, i: int) -> tuple[int, int]:
        return self._prev(i, False)

    def psev(self, i: int) -> tuple[int, int]:
        return self._prev(i, True)

    # -- serialization --------------------------------------------------

    def _write(self, w: Writer) -> None:
        w.struct(self.parse)
        w.struct(self.w_c)
        w.struct(self.tree)

    @classmethod
    def _read(cls, r: Reader) -> "RLCPArray":
        parse = r.struct(RLZParse)
        w_c = r.struct(SLArray)
        tree = r.struct(MinimaTree)
        if len(tree.levels[0]) != parse.z:
            raise FormatError("minima tree leaf count does not match the phrase count")
        return cls(None, parse, w_c, tree)

    def attach(self, lcp_r: SLArray) -> "RLCPArray":
        self.lcp_r = lcp_r
        return self
