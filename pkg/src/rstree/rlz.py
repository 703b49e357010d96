"""Relative Lempel-Ziv parsing over integer token alphabets.

A target ``S`` is cut into phrases; phrase ``i`` copies ``len_i`` tokens
from the reference starting at ``src_i`` and then stores one or more
literal tokens.  The last phrase may end with an implicit terminator
instead (zero stored literals) when its copy runs to the end of ``S``.

Offsets are stored relative to the phrase start (``W_r[i] = src_i -
start_i``), either explicitly or as a 16-bit difference to the most recent
explicit offset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._io import FormatError, Reader, Writer
from .succinct import IntVector, SparseBitVector, concat_ranges, make_bitvector, read_bitvector
from .textindex import FMConfig, FMIndex, sa_from_bwt

DIFF_LIMIT = 1 << 15


class TokenMap:
    """Dense ids 1..sigma for the distinct values of a reference sequence.

    Values absent from the reference encode to ``sigma + 1``, which never
    matches anything.
    """

    TAG = b"t"

    def __init__(self, values) -> None:
        self.values = np.unique(np.asarray(values, dtype=np.int64))
        self.sigma = int(self.values.size)

    def encode(self, seq) -> np.ndarray:
        seq = np.asarray(seq, dtype=np.int64)
        idx = np.searchsorted(self.values, seq)
        idx_c = np.minimum(idx, max(self.sigma - 1, 0))
        hit = (idx < self.sigma) & (self.values[idx_c] == seq) if self.sigma else np.zeros(seq.size, bool)
        return np.where(hit, idx + 1, self.sigma + 1).astype(np.int64)

    def decode(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 1 or ids.max() > self.sigma):
            raise ValueError("id outside the reference alphabet")
        return self.values[ids - 1]

    def _write(self, w: Writer) -> None:
        w.words(self.values.view(np.uint64))

    @classmethod
    def _read(cls, r: Reader) -> "TokenMap":
        return cls(r.words().view(np.int64))


class RLZMatcher:
    """Greedy matcher backed by the FM-index of the reversed (tokenized) reference."""

    def __init__(self, reference, tokens: TokenMap | None = None, rev_index: FMIndex | None = None) -> None:
        reference = np.asarray(reference, dtype=np.int64)
        self.tokens = tokens or TokenMap(reference)
        self.ref_ids = self.tokens.encode(reference)
        self.m = int(reference.size)
        if rev_index is None:
            rev_index = self.build_rev_index(reference, self.tokens)
        elif rev_index.n != self.m + 1:
            raise ValueError("reversed-reference index does not match the reference length")
        self.rev_index = rev_index
        bwt = rev_index.bwt()
        sa = sa_from_bwt(bwt) - 1
        sigma = self.tokens.sigma
        self._step = 64 if sigma <= 256 else 512
        self._bwt = bwt.astype(np.int32)
        self._occ = K.occ_checkpoints(self._bwt, sigma + 2, self._step)
        counts = np.bincount(bwt, minlength=sigma + 2)
        self._cnt = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
        self._st = K.sparse_table_max(sa.astype(np.int32))

    @staticmethod
    def build_rev_index(reference, tokens: TokenMap) -> FMIndex:
        ids = tokens.encode(reference)
        return FMIndex.build(np.append(ids[::-1], 0), FMConfig())

    def parse_arrays(self, target_ids, cfg: "RLZConfig"):
        return K.rlz_parse(
            np.asarray(target_ids, dtype=np.int64), self.ref_ids, self._bwt, self._occ, self._step,
            self._cnt, self.tokens.sigma, self._st, cfg.max_len, cfg.lookahead, cfg.radius,
            cfg.min_len, DIFF_LIMIT,
        )


@dataclass
class RLZConfig:
    max_len: int = 1024
    lookahead: int = 32
    radius: int = 16
    min_len: int = 4

    def __post_init__(self) -> None:
        if self.max_len < 2:
            raise ValueError("max_len must be at least 2")


class RLZParse:
    """Compressed RLZ phrase list with O(log z) random access."""

    TAG = b"z"

    def __init__(self, n, max_len, selector, explicit, diffs, starts, litsum, literals) -> None:
        self.n = int(n)
        self.max_len = int(max_len)
        self.selector = selector  # 1 = differential offset
        self.explicit = explicit
        self.diffs = diffs
        self.starts = starts  # W_l: phrase starts in S
        self.litsum = litsum  # one at L[i] + i for i = 1..z+1
        self.literals = literals
        self.z = starts.ones
        self._cache()

    def _cache(self) -> None:
        z = self.z
        sel = self.selector.bits().astype(bool) if z else np.zeros(0, bool)
        exp = self.explicit.to_numpy()
        dif = self.diffs.to_numpy()
        base = exp[np.cumsum(~sel) - 1] if z else np.zeros(0, np.int64)
        w = base.copy()
        if sel.any():
            w[sel] = base[sel] + dif[np.cumsum(sel)[sel] - 1]
        self._wr = w.tolist()
        st = self.starts.ones_positions() if z else np.zeros(0, np.int64)
        self._start = st.tolist() + [self.n + 1]
        ls = self.litsum.ones_positions() - np.arange(1, z + 2)
        self._lsum = ls.tolist()
        nl = np.diff(ls)
        self._len = (np.diff(np.append(st, self.n + 1)) - nl).tolist()
        self._wr_np, self._start_np, self._lsum_np = w, st, ls
        self._starts_pos = st.tolist()

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, matcher: RLZMatcher, target, cfg: RLZConfig | None = None, store_literals: bool = True) -> "RLZParse":
        cfg = cfg or RLZConfig()
        target = np.asarray(target, dtype=np.int64)
        if target.size == 0:
            raise ValueError("cannot parse an empty target")
        ids = matcher.tokens.encode(target)
        starts, srcs, lens, nlits = matcher.parse_arrays(ids, cfg)
        return cls.from_phrases(target, starts, srcs, lens, nlits, cfg.max_len, store_literals)

    @classmethod
    def from_phrases(cls, target, starts, srcs, lens, nlits, max_len, store_literals=True) -> "RLZParse":
        """Encode 0-based phrase arrays (start, src or -1, copy length, literal count)."""
        n = int(np.asarray(target).size)
        z = starts.size
        rel = np.where(lens > 0, srcs - starts, 0)
        copy = lens > 0
        sel = np.zeros(z, dtype=bool)
        exp_vals = []
        diff_vals = []
        last = None
        for i in range(z):
            if not copy[i]:
                if last is None:
                    exp_vals.append(0)
                    last = 0
                else:
                    sel[i] = True
                    diff_vals.append(0)
                continue
            v = int(rel[i])
            if last is not None and abs(v - last) < DIFF_LIMIT:
                sel[i] = True
                diff_vals.append(v - last)
            else:
                exp_vals.append(v)
                last = v
        start_bits = np.zeros(n, dtype=bool)
        start_bits[starts] = True
        lsum = np.concatenate(([0], np.cumsum(nlits)))
        litsum = SparseBitVector(lsum + np.arange(1, z + 2), int(lsum[-1]) + z + 1)
        # literal positions: the last nlits[i] tokens of each phrase
        ends = np.append(starts[1:], n)
        lit_pos = concat_ranges(ends - nlits, ends)
        lits = np.asarray(target, dtype=np.int64)[lit_pos] if store_literals else np.zeros(0, np.int64)
        return cls(
            n, max_len, make_bitvector(sel), IntVector(exp_vals, signed=True),
            IntVector(diff_vals, width=16, signed=True), SparseBitVector.from_bits(start_bits, 1),
            litsum, IntVector(lits, signed=True),
        )

    # -- queries --------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def phrase_of(self, j: int) -> int:
        return self.starts.rank1(j)

    def phrase_start(self, i: int) -> int:
        return self._start[i - 1]

    def copy_len(self, i: int) -> int:
        return self._len[i - 1]

    def literal_count(self, i: int) -> int:
        return self._lsum[i] - self._lsum[i - 1]

    def offset(self, i: int) -> int:
        """Relative offset W_r[i] (meaningless for literal-only phrases)."""
        return self._wr[i - 1]

    def literal(self, k: int) -> int:
        """k-th stored literal (0-based)."""
        return self.literals[k]

    def literal_index(self, i: int, j: int) -> int | None:
        """Index into the literal array for position j of phrase i, or None for a copy position."""
        off = j - self._start[i - 1]
        ln = self._len[i - 1]
        if off < ln:
            return None
        return self._lsum[i - 1] + off - ln

    def access(self, reference, j: int) -> int:
        if j < 1 or j > self.n:
            raise IndexError(f"position {j} outside [1, {self.n}]")
        i = self.starts.rank1(j)
        k = self.literal_index(i, j)
        if k is None:
            return int(reference[self._wr[i - 1] + j - 1])
        return self.literals[k]

    def phrase_bounds(self, i: int) -> tuple[int, int, int]:
        """(start, copy length, literal count) of phrase i."""
        return self._start[i - 1], self._len[i - 1], self._lsum[i] - self._lsum[i - 1]

    def decompress_phrase(self, reference, i: int) -> np.ndarray:
        start, ln, nl = self.phrase_bounds(i)
        out = np.empty(ln + nl, dtype=np.int64)
        src = self._wr[i - 1] + start - 1
        out[:ln] = np.asarray(reference[src : src + ln])
        base = self._lsum[i - 1]
        out[ln:] = self.literals._np[base : base + nl]
        return out

    def decompress(self, reference) -> np.ndarray:
        reference = np.asarray(reference, dtype=np.int64)
        out = np.empty(self.n, dtype=np.int64)
        st = self._start_np
        ln = np.asarray(self._len, dtype=np.int64)
        copy_pos = concat_ranges(st - 1, st - 1 + ln)
        src_pos = copy_pos + np.repeat(self._wr_np, ln)
        out[copy_pos] = reference[src_pos]
        nl = np.diff(self._lsum_np)
        lit_pos = concat_ranges(st - 1 + ln, st - 1 + ln + nl)
        out[lit_pos] = self.literals._np
        return out

    def phrases(self) -> list[tuple[int, int, int]]:
        """(src or 0, copy length, literal count) per phrase, 1-based sources."""
        out = []
        for i in range(1, self.z + 1):
            s, ln, nl = self.phrase_bounds(i)
            out.append((self._wr[i - 1] + s if ln else 0, ln, nl))
        return out

    # -- serialization --------------------------------------------------

    def _write(self, w: Writer) -> None:
        w.u64(self.n)
        w.u64(self.max_len)
        w.struct(self.selector)
        w.struct(self.explicit)
        w.struct(self.diffs)
        w.struct(self.starts)
        w.struct(self.litsum)
        w.struct(self.literals)

    @classmethod
    def _read(cls, r: Reader) -> "RLZParse":
        n = r.u64()
        max_len = r.u64()
        sel = read_bitvector(r)
        exp = r.struct(IntVector)
        dif = r.struct(IntVector)
        starts = r.struct(SparseBitVector)
        litsum = r.struct(SparseBitVector)
        lits = r.struct(IntVector)
        if starts.n != n or sel.n != starts.ones or litsum.ones != starts.ones + 1:
            raise FormatError("RLZ parse components disagree on phrase count")
        return cls(n, max_len, sel, exp, dif, starts, litsum, lits)


def rlz_parse(reference, target, cfg: RLZConfig | None = None) -> RLZParse:
    """Parse ``target`` against ``reference`` (both raw integer sequences)."""
    return RLZParse.build(RLZMatcher(reference), target, cfg)
