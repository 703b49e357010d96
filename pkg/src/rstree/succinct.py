"""Bitvectors, packed integer arrays, the byte-escaped slarray and wavelet trees.

All query positions are 1-based: ``rank(i)`` counts over ``[1, i]`` and
``select(j)`` returns the position of the ``j``-th occurrence.  Scalar
queries run on Python ints (word lists) because numpy scalar indexing is
slower than list indexing for one-at-a-time access; bulk construction and
decoding are vectorized.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right

import numpy as np

from ._io import FormatError, Reader, Writer


class NoSuchOccurrence(LookupError):
    """select() was asked for an occurrence that does not exist."""


# --------------------------------------------------------------------------
# bit packing helpers


def pack_bool(bits: np.ndarray) -> np.ndarray:
    """Pack a boolean array into little-endian uint64 words (bit i of word w = entry 64w+i)."""
    bits = np.asarray(bits, dtype=bool)
    nwords = (bits.size + 63) // 64
    buf = np.zeros(nwords * 64, dtype=bool)
    buf[: bits.size] = bits
    return np.packbits(buf, bitorder="little").view("<u8").astype(np.uint64)


def unpack_bool(words: np.ndarray, n: int) -> np.ndarray:
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def pack_ints(values: np.ndarray, width: int) -> np.ndarray:
    """Pack non-negative integers into ``width``-bit fields (0 <= width <= 64)."""
    values = np.asarray(values, dtype=np.uint64)
    n = values.size
    if width == 0 or n == 0:
        return np.zeros(0, dtype=np.uint64)
    words = np.zeros((n * width + 63) // 64 + 1, dtype=np.uint64)
    if width < 64:
        values = values & np.uint64((1 << width) - 1)
    pos = np.arange(n, dtype=np.int64) * width
    w = pos >> 6
    off = (pos & 63).astype(np.uint64)
    np.bitwise_or.at(words, w, values << off)
    spill = (pos & 63) + width > 64
    if spill.any():
        np.bitwise_or.at(words, w[spill] + 1, values[spill] >> (np.uint64(64) - off[spill]))
    return words[: (n * width + 63) // 64]


def unpack_ints(words: np.ndarray, width: int, n: int) -> np.ndarray:
    if width == 0 or n == 0:
        return np.zeros(n, dtype=np.uint64)
    words = np.concatenate([np.asarray(words, dtype=np.uint64), np.zeros(1, dtype=np.uint64)])
    pos = np.arange(n, dtype=np.int64) * width
    w = pos >> 6
    off = (pos & 63).astype(np.uint64)
    out = words[w] >> off
    spill = (pos & 63) + width > 64
    if spill.any():
        out[spill] |= words[w[spill] + 1] << (np.uint64(64) - off[spill])
    if width < 64:
        out &= np.uint64((1 << width) - 1)
    return out


def concat_ranges(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Concatenation of arange(lo[k], hi[k]) for all k (vectorized)."""
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    lens = hi - lo
    keep = lens > 0
    lo, lens = lo[keep], lens[keep]
    total = int(lens.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    ends = np.cumsum(lens)
    out = np.ones(total, dtype=np.int64)
    out[0] = lo[0]
    out[ends[:-1]] = lo[1:] - (lo[:-1] + lens[:-1] - 1)
    return np.cumsum(out)


def _select_in_word(x: int, r: int) -> int:
    """0-based position of the r-th (1-based) set bit of x."""
    pos = 0
    while True:
        c = (x & 0xFF).bit_count()
        if c >= r:
            break
        r -= c
        x >>= 8
        pos += 8
    while True:
        if x & 1:
            r -= 1
            if r == 0:
                return pos
        x >>= 1
        pos += 1


# --------------------------------------------------------------------------
# plain bitvector


class BitVector:
    """Uncompressed bitvector with a per-word rank directory.

    The serialized form keeps one cumulative counter per 512-bit block; the
    finer per-word directory is rebuilt on load.
    """

    TAG = b"b"
    BLOCK_WORDS = 8

    def __init__(self, bits) -> None:
        bits = np.asarray(bits, dtype=bool)
        self._setup(bits.size, pack_bool(bits))

    @classmethod
    def from_words(cls, n: int, words: np.ndarray) -> "BitVector":
        obj = cls.__new__(cls)
        obj._setup(n, np.asarray(words, dtype=np.uint64))
        return obj

    def _setup(self, n: int, words: np.ndarray) -> None:
        self.n = int(n)
        self._words = words
        cum = np.zeros(words.size + 1, dtype=np.int64)
        np.cumsum(np.bitwise_count(words), out=cum[1:])
        self.ones = int(cum[-1])
        self._w = words.tolist() + [0]
        self._cum = cum.tolist()
        self._cum0 = (np.arange(words.size + 1, dtype=np.int64) * 64 - cum).tolist()

    def __len__(self) -> int:
        return self.n

    def access(self, i: int) -> int:
        i -= 1
        return (self._w[i >> 6] >> (i & 63)) & 1

    def rank1(self, i: int) -> int:
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        w = i >> 6
        return self._cum[w] + (self._w[w] & ((1 << (i & 63)) - 1)).bit_count()

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, i: int, v: int) -> int:
        return self.rank1(i) if v else self.rank0(i)

    def select1(self, j: int) -> int:
        if j < 1 or j > self.ones:
            raise NoSuchOccurrence(f"no 1-bit of rank {j}")
        w = bisect_left(self._cum, j) - 1
        return 64 * w + _select_in_word(self._w[w], j - self._cum[w]) + 1

    def select0(self, j: int) -> int:
        if j < 1 or j > self.n - self.ones:
            raise NoSuchOccurrence(f"no 0-bit of rank {j}")
        w = bisect_left(self._cum0, j) - 1
        return 64 * w + _select_in_word(~self._w[w] & 0xFFFFFFFFFFFFFFFF, j - self._cum0[w]) + 1

    def select(self, j: int, v: int) -> int:
        return self.select1(j) if v else self.select0(j)

    def bits(self) -> np.ndarray:
        return unpack_bool(self._words, self.n)

    def ones_positions(self) -> np.ndarray:
        """1-based positions of the set bits."""
        return np.flatnonzero(self.bits()) + 1

    def _write(self, w: Writer) -> None:
        w.u64(self.n)
        w.words(self._words)
        w.words(np.asarray(self._cum[:: self.BLOCK_WORDS], dtype=np.uint64))

    @classmethod
    def _read(cls, r: Reader) -> "BitVector":
        n = r.u64()
        words = r.words()
        blocks = r.words()
        if words.size != (n + 63) // 64:
            raise FormatError("bitvector word count does not match its length")
        obj = cls.from_words(n, words)
        if not np.array_equal(blocks, np.asarray(obj._cum[:: cls.BLOCK_WORDS], dtype=np.uint64)):
            raise FormatError("bitvector rank directory is inconsistent")
        return obj


# --------------------------------------------------------------------------
# Elias-Fano sparse bitvector


class SparseBitVector:
    """Elias-Fano coded bitvector that stores the positions of its minority bit.

    ``stored_bit`` is the bit value whose positions are kept (1 by default).
    Storing the 0-positions instead gives the same compression for vectors
    that are almost all ones, such as alignment bitvectors.
    """

    TAG = b"s"

    def __init__(self, positions, n: int, stored_bit: int = 1) -> None:
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size and (pos[0] < 1 or pos[-1] > n or np.any(np.diff(pos) <= 0)):
            raise ValueError("positions must be strictly increasing within [1, n]")
        self.n = int(n)
        self.stored_bit = int(stored_bit)
        self._pos_np = pos
        self._pos = pos.tolist()
        # zeros-between counts for selecting the non-stored bit
        self._gaps = (pos - 1 - np.arange(pos.size, dtype=np.int64)).tolist()
        stored = pos.size
        self.ones = stored if self.stored_bit == 1 else self.n - stored

    @classmethod
    def from_bits(cls, bits, stored_bit: int | None = None) -> "SparseBitVector":
        bits = np.asarray(bits, dtype=bool)
        if stored_bit is None:
            stored_bit = 1 if 2 * int(bits.sum()) <= bits.size else 0
        target = bits if stored_bit == 1 else ~bits
        return cls(np.flatnonzero(target) + 1, bits.size, stored_bit)

    def __len__(self) -> int:
        return self.n

    def _rank_stored(self, i: int) -> int:
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        return bisect_right(self._pos, i)

    def rank1(self, i: int) -> int:
        r = self._rank_stored(i)
        return r if self.stored_bit else i - r

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, i: int, v: int) -> int:
        return self.rank1(i) if v else self.rank0(i)

    def access(self, i: int) -> int:
        k = bisect_left(self._pos, i)
        hit = k < len(self._pos) and self._pos[k] == i
        return int(hit) if self.stored_bit else int(not hit)

    def _select_stored(self, j: int) -> int:
        if j < 1 or j > len(self._pos):
            raise NoSuchOccurrence(f"no occurrence of rank {j}")
        return self._pos[j - 1]

    def _select_other(self, j: int) -> int:
        if j < 1 or j > self.n - len(self._pos):
            raise NoSuchOccurrence(f"no occurrence of rank {j}")
        return j + bisect_left(self._gaps, j)

    def select1(self, j: int) -> int:
        return self._select_stored(j) if self.stored_bit else self._select_other(j)

    def select0(self, j: int) -> int:
        return self._select_other(j) if self.stored_bit else self._select_stored(j)

    def select(self, j: int, v: int) -> int:
        return self.select1(j) if v else self.select0(j)

    def bits(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self._pos_np - 1] = True
        return out if self.stored_bit else ~out

    def ones_positions(self) -> np.ndarray:
        if self.stored_bit:
            return self._pos_np.copy()
        return np.flatnonzero(self.bits()) + 1

    def _write(self, w: Writer) -> None:
        z = self._pos_np.size
        w.u64(self.n)
        w.u64(self.stored_bit)
        w.u64(z)
        if z == 0:
            return
        low = max(0, (self.n // z).bit_length() - 1)
        x = (self._pos_np - 1).astype(np.uint64)
        w.u64(low)
        w.words(pack_ints(x & np.uint64((1 << low) - 1), low))
        high = (x >> np.uint64(low)).astype(np.int64) + np.arange(z, dtype=np.int64)
        upper = np.zeros(int(high[-1]) + 1, dtype=bool)
        upper[high] = True
        w.u64(upper.size)
        w.words(pack_bool(upper))

    @classmethod
    def _read(cls, r: Reader) -> "SparseBitVector":
        n = r.u64()
        stored_bit = r.u64()
        z = r.u64()
        if z == 0:
            return cls(np.zeros(0, dtype=np.int64), n, stored_bit)
        low = r.u64()
        lows = unpack_ints(r.words(), low, z)
        ulen = r.u64()
        upper = unpack_bool(r.words(), ulen)
        idx = np.flatnonzero(upper)
        if idx.size != z:
            raise FormatError("Elias-Fano upper bits do not match the element count")
        high = (idx - np.arange(z)).astype(np.uint64)
        pos = ((high << np.uint64(low)) | lows).astype(np.int64) + 1
        return cls(pos, n, stored_bit)


def make_bitvector(bits, kind: str = "auto"):
    """Build a plain or sparse bitvector behind the common rank/select interface.

    ``auto`` picks the Elias-Fano form when the minority bit is rarer than
    one in sixteen positions.
    """
    bits = np.asarray(bits, dtype=bool)
    if kind == "plain":
        return BitVector(bits)
    if kind == "sparse":
        return SparseBitVector.from_bits(bits)
    if kind != "auto":
        raise ValueError(f"unknown bitvector kind {kind!r}")
    ones = int(bits.sum())
    minority = min(ones, bits.size - ones)
    if 16 * minority < bits.size:
        return SparseBitVector.from_bits(bits)
    return BitVector(bits)


def write_bitvector(w: Writer, bv) -> None:
    w.struct(bv)


def read_bitvector(r: Reader):
    tag = bytes(r._mv[r.pos : r.pos + 1])
    if tag == BitVector.TAG:
        return r.struct(BitVector)
    if tag == SparseBitVector.TAG:
        return r.struct(SparseBitVector)
    raise FormatError(f"expected a bitvector, found tag {tag!r}")


# --------------------------------------------------------------------------
# fixed-width integer vector


def _zigzag(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    return ((v << 1) ^ (v >> 63)).astype(np.uint64)


def _unzigzag(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.uint64)
    return ((u >> np.uint64(1)).astype(np.int64)) ^ (-(u & np.uint64(1)).astype(np.int64))


class IntVector:
    """Bit-packed array of integers at the smallest sufficient width (0-based indexing)."""

    TAG = b"i"

    def __init__(self, values, width: int | None = None, signed: bool = False) -> None:
        vals = np.asarray(values, dtype=np.int64)
        self.signed = bool(signed)
        if not signed and vals.size and vals.min() < 0:
            raise ValueError("negative value in an unsigned IntVector")
        coded = _zigzag(vals) if signed else vals.astype(np.uint64)
        need = int(coded.max()).bit_length() if coded.size else 0
        if width is None:
            width = need
        elif width < need:
            raise ValueError(f"width {width} too small for values needing {need} bits")
        self.width = int(width)
        self._np = vals
        self._vals = vals.tolist()

    def __len__(self) -> int:
        return len(self._vals)

    def __getitem__(self, i: int) -> int:
        return self._vals[i]

    def to_numpy(self) -> np.ndarray:
        return self._np.copy()

    def _write(self, w: Writer) -> None:
        coded = _zigzag(self._np) if self.signed else self._np.astype(np.uint64)
        w.u64(len(self._vals))
        w.u64(self.width)
        w.u64(int(self.signed))
        w.words(pack_ints(coded, self.width))

    @classmethod
    def _read(cls, r: Reader) -> "IntVector":
        n = r.u64()
        width = r.u64()
        signed = bool(r.u64())
        coded = unpack_ints(r.words(), width, n)
        vals = _unzigzag(coded) if signed else coded.astype(np.int64)
        return cls(vals, width=width, signed=signed)


# --------------------------------------------------------------------------
# slarray


class SLArray:
    """Byte array with escape value 255 and a side table of large values.

    Entry i (1-based) is ``bytes[i]`` when below 255; otherwise it is the
    ``rank_255(i)``-th value of the large layer.  Escape ranks are sampled
    every 256 entries.
    """

    TAG = b"l"
    ESC = 255
    BLOCK = 256

    def __init__(self, values) -> None:
        vals = np.asarray(values, dtype=np.int64)
        if vals.size and vals.min() < 0:
            raise ValueError("SLArray stores non-negative integers only")
        small = np.minimum(vals, self.ESC).astype(np.uint8)
        large = vals[vals >= self.ESC].astype(np.uint64)
        self._setup(small, large)

    def _setup(self, small: np.ndarray, large: np.ndarray) -> None:
        self.n = int(small.size)
        self._small = small
        self._bytes = small.tobytes()
        self._large_np = large.astype(np.int64)
        self._large = self._large_np.tolist()
        esc = (small == self.ESC).astype(np.int64)
        blocks = np.add.reduceat(esc, np.arange(0, max(self.n, 1), self.BLOCK)) if self.n else np.zeros(0, np.int64)
        self._dir_np = np.concatenate([[0], np.cumsum(blocks)]).astype(np.int64)
        self._dir = self._dir_np.tolist()

    def __len__(self) -> int:
        return self.n

    def _esc_rank(self, i0: int) -> int:
        """Number of escapes among 0-based entries [0, i0)."""
        blk = i0 >> 8
        return self._dir[blk] + self._bytes.count(self.ESC, blk << 8, i0)

    def get(self, i: int) -> int:
        if i < 1 or i > self.n:
            raise IndexError(f"slarray index {i} outside [1, {self.n}]")
        v = self._bytes[i - 1]
        if v != self.ESC:
            return v
        return self._large[self._esc_rank(i - 1)]

    __getitem__ = get

    def get_range(self, a: int, b: int) -> np.ndarray:
        """Entries a..b inclusive (1-based) as an int64 array."""
        if a > b:
            return np.zeros(0, dtype=np.int64)
        if a < 1 or b > self.n:
            raise IndexError(f"slarray range [{a}, {b}] outside [1, {self.n}]")
        out = self._small[a - 1 : b].astype(np.int64)
        esc = out == self.ESC
        if esc.any():
            first = self._esc_rank(a - 1)
            out[esc] = self._large_np[first : first + int(esc.sum())]
        return out

    def to_numpy(self) -> np.ndarray:
        return self.get_range(1, self.n) if self.n else np.zeros(0, dtype=np.int64)

    def _write(self, w: Writer) -> None:
        w.u64(self.n)
        w.raw(self._bytes)
        w.words(self._large_np.astype(np.uint64))
        w.words(self._dir_np.astype(np.uint64))

    @classmethod
    def _read(cls, r: Reader) -> "SLArray":
        n = r.u64()
        small = np.frombuffer(r.raw(), dtype=np.uint8).copy()
        large = r.words()
        directory = r.words()
        if small.size != n:
            raise FormatError("slarray byte layer has the wrong length")
        if int((small == cls.ESC).sum()) != large.size:
            raise FormatError("slarray escape count does not match the large layer")
        obj = cls.__new__(cls)
        obj._setup(small, large)
        if not np.array_equal(obj._dir_np.astype(np.uint64), directory):
            raise FormatError("slarray rank directory is inconsistent")
        return obj


# --------------------------------------------------------------------------
# Huffman-shaped wavelet tree


def _huffman_children(freqs: list[int]) -> list[tuple[int, int]]:
    """Children of the internal nodes of a Huffman tree, root first (preorder).

    Leaves are encoded as ``-(symbol_index + 1)``, internal nodes as their
    preorder index.  Ties break on the smallest symbol index in the subtree.
    """
    heap = [(f, k, -(k + 1)) for k, f in enumerate(freqs)]
    heapq.heapify(heap)
    built: dict[int, tuple[int, int]] = {}
    next_id = 0
    while len(heap) > 1:
        fa, ka, a = heapq.heappop(heap)
        fb, kb, b = heapq.heappop(heap)
        built[next_id] = (a, b)
        heapq.heappush(heap, (fa + fb, min(ka, kb), next_id))
        next_id += 1
    if not built:
        return []
    order: list[int] = []
    stack = [heap[0][2]]
    while stack:
        node = stack.pop()
        order.append(node)
        left, right = built[node]
        for child in (right, left):
            if child >= 0:
                stack.append(child)
    remap = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        left, right = built[old]
        out.append((remap[left] if left >= 0 else left, remap[right] if right >= 0 else right))
    return out


class WaveletTree:
    """Huffman-shaped wavelet tree over an integer alphabet (1-based positions)."""

    TAG = b"w"

    def __init__(self, seq) -> None:
        seq = np.asarray(seq, dtype=np.int64)
        symbols, ids, counts = np.unique(seq, return_inverse=True, return_counts=True)
        children = _huffman_children(counts.tolist())
        bvs: list = [None] * len(children)
        if children:
            self._build(0, ids.astype(np.int64), children, bvs)
        self._setup(seq.size, symbols.tolist(), counts.tolist(), children, bvs)

    @staticmethod
    def _leaves(node: int, children) -> list[int]:
        if node < 0:
            return [-node - 1]
        left, right = children[node]
        return WaveletTree._leaves(left, children) + WaveletTree._leaves(right, children)

    def _build(self, node: int, ids: np.ndarray, children, bvs) -> None:
        left, right = children[node]
        right_syms = self._leaves(right, children)
        is_right = np.zeros(max(right_syms + self._leaves(left, children)) + 1, dtype=bool)
        is_right[right_syms] = True
        bits = is_right[ids]
        bvs[node] = BitVector(bits)
        if left >= 0:
            self._build(left, ids[~bits], children, bvs)
        if right >= 0:
            self._build(right, ids[bits], children, bvs)

    def _setup(self, n, symbols, counts, children, bvs) -> None:
        self.n = int(n)
        self.symbols = [int(s) for s in symbols]
        self.counts = {s: int(c) for s, c in zip(self.symbols, counts)}
        self._children = children
        self._bvs = bvs
        self._path: dict[int, tuple] = {}
        if not children:
            for s in self.symbols:
                self._path[s] = ()
            return

        def walk(node, trail):
            if node < 0:
                self._path[self.symbols[-node - 1]] = tuple(trail)
                return
            left, right = children[node]
            walk(left, trail + [(bvs[node], 0)])
            walk(right, trail + [(bvs[node], 1)])

        walk(0, [])
        # flattened child table: (bitvector, left child, right child)
        self._nodes = [(bvs[k], children[k][0], children[k][1]) for k in range(len(children))]

    def __len__(self) -> int:
        return self.n

    def count(self, c: int) -> int:
        return self.counts.get(c, 0)

    def access(self, i: int) -> int:
        if i < 1 or i > self.n:
            raise IndexError(f"position {i} outside [1, {self.n}]")
        if not self._children:
            return self.symbols[0]
        node = 0
        while True:
            bv, left, right = self._nodes[node]
            j = i - 1
            bit = (bv._w[j >> 6] >> (j & 63)) & 1
            r = bv.rank1(i)
            if bit:
                i, node = r, right
            else:
                i, node = i - r, left
            if node < 0:
                return self.symbols[-node - 1]

    def inverse_select(self, i: int) -> tuple[int, int]:
        """(symbol at i, rank of that symbol up to i)."""
        if i < 1 or i > self.n:
            raise IndexError(f"position {i} outside [1, {self.n}]")
        if not self._children:
            return self.symbols[0], i
        node = 0
        while True:
            bv, left, right = self._nodes[node]
            j = i - 1
            bit = (bv._w[j >> 6] >> (j & 63)) & 1
            r = bv.rank1(i)
            if bit:
                i, node = r, right
            else:
                i, node = i - r, left
            if node < 0:
                return self.symbols[-node - 1], i

    def rank(self, c: int, i: int) -> int:
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        path = self._path.get(c)
        if path is None:
            return 0
        for bv, bit in path:
            if i == 0:
                return 0
            r = bv.rank1(i)
            i = r if bit else i - r
        return i

    def select(self, c: int, j: int) -> int:
        path = self._path.get(c)
        if path is None or j < 1 or j > self.counts[c]:
            raise NoSuchOccurrence(f"no occurrence {j} of symbol {c}")
        for bv, bit in reversed(path):
            j = bv.select1(j) if bit else bv.select0(j)
        return j

    def to_array(self) -> np.ndarray:
        """Decode the whole sequence (vectorized)."""
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        if not self._children:
            return np.full(self.n, self.symbols[0], dtype=np.int64)
        syms = np.asarray(self.symbols, dtype=np.int64)

        def decode(node, length):
            if node < 0:
                return np.full(length, syms[-node - 1], dtype=np.int64)
            bv, left, right = self._nodes[node]
            bits = bv.bits()
            out = np.empty(length, dtype=np.int64)
            out[~bits] = decode(left, length - bv.ones)
            out[bits] = decode(right, bv.ones)
            return out

        return decode(0, self.n)

    def _write(self, w: Writer) -> None:
        w.u64(self.n)
        w.words(np.asarray(self.symbols, dtype=np.int64).view(np.uint64))
        w.words(np.asarray([self.counts[s] for s in self.symbols], dtype=np.uint64))
        flat = np.asarray([c for pair in self._children for c in pair], dtype=np.int64)
        w.words(flat.view(np.uint64))
        for bv in self._bvs:
            w.struct(bv)

    @classmethod
    def _read(cls, r: Reader) -> "WaveletTree":
        n = r.u64()
        symbols = r.words().view(np.int64).tolist()
        counts = r.words().astype(np.int64).tolist()
        flat = r.words().view(np.int64).tolist()
        children = [(flat[k], flat[k + 1]) for k in range(0, len(flat), 2)]
        bvs = [r.struct(BitVector) for _ in children]
        if sum(counts) != n:
            raise FormatError("wavelet tree symbol counts do not sum to its length")
        obj = cls.__new__(cls)
        obj._setup(n, symbols, counts, children, bvs)
        return obj
