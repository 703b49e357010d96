import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rstree import naive
from rstree._io import FormatError, from_bytes, to_bytes
from rstree.succinct import (BitVector, IntVector, NoSuchOccurrence, SLArray, SparseBitVector,
                             WaveletTree, make_bitvector, pack_ints, unpack_ints)

bit_lists = st.lists(st.integers(0, 1), min_size=0, max_size=1500)


def test_bitvector_example():
    bv = BitVector([1, 0, 1, 1, 0])
    assert bv.rank1(3) == 2
    assert bv.rank1(0) == 0
    assert bv.rank0(5) == 2
    assert bv.select1(2) == 3
    assert bv.select0(1) == 2


@pytest.mark.parametrize("cls", [BitVector, SparseBitVector.from_bits])
def test_select_past_end_raises(cls):
    bv = cls(np.array([1, 0, 1, 1, 0], dtype=bool))
    with pytest.raises(NoSuchOccurrence):
        bv.select1(4)
    with pytest.raises(NoSuchOccurrence):
        bv.select0(3)


@given(bit_lists)
def test_bitvectors_match_scan(bits):
    arr = np.array(bits, dtype=bool)
    for bv in (BitVector(arr), SparseBitVector.from_bits(arr, 1), SparseBitVector.from_bits(arr, 0),
               make_bitvector(arr)):
        assert len(bv) == len(bits)
        assert bv.bits().tolist() == [bool(b) for b in bits]
        for i in range(0, len(bits) + 1, max(1, len(bits) // 40)):
            assert bv.rank1(i) == naive.rank(bits, 1, i)
            assert bv.rank0(i) == naive.rank(bits, 0, i)
        for j in range(1, sum(bits) + 1, max(1, sum(bits) // 20)):
            assert bv.select1(j) == naive.select(bits, 1, j)
        zeros = len(bits) - sum(bits)
        for j in range(1, zeros + 1, max(1, zeros // 20)):
            assert bv.select0(j) == naive.select(bits, 0, j)


@given(bit_lists)
def test_bitvector_roundtrip(bits):
    arr = np.array(bits, dtype=bool)
    for bv in (BitVector(arr), SparseBitVector.from_bits(arr)):
        data = to_bytes(bv)
        again = from_bytes(type(bv), data)
        assert to_bytes(again) == data
        assert again.bits().tolist() == bv.bits().tolist()


def test_slarray_examples():
    assert SLArray([0, 300, 7]).get(2) == 300
    assert SLArray([254, 255, 256]).get(2) == 255


@given(st.lists(st.integers(0, 1 << 40), max_size=800))
def test_slarray_matches_list(vals):
    a = SLArray(np.array(vals, dtype=np.int64))
    assert [a.get(i) for i in range(1, len(vals) + 1)] == vals
    assert a.to_numpy().tolist() == vals
    if vals:
        assert a.get_range(1, len(vals)).tolist() == vals
    assert from_bytes(SLArray, to_bytes(a)).to_numpy().tolist() == vals


@given(st.lists(st.integers(-(1 << 40), 1 << 40), max_size=300), st.booleans())
def test_intvector_signed_roundtrip(vals, _):
    v = IntVector(np.array(vals, dtype=np.int64), signed=True)
    assert [v[i] for i in range(len(vals))] == vals
    assert from_bytes(IntVector, to_bytes(v)).to_numpy().tolist() == vals


@given(st.integers(1, 63), st.lists(st.integers(0, (1 << 63) - 1), max_size=200))
def test_pack_ints_roundtrip(width, vals):
    vals = [v & ((1 << width) - 1) for v in vals]
    arr = np.array(vals, dtype=np.uint64)
    assert unpack_ints(pack_ints(arr, width), width, len(vals)).tolist() == vals


def test_wavelet_tree_example():
    seq = [ord(c) if c != "$" else 0 for c in "ACTGA$TT"]
    wt = WaveletTree(np.array(seq))
    assert wt.rank(ord("T"), 8) == 3
    assert wt.access(6) == 0
    assert wt.select(ord("A"), 2) == 5
    assert wt.rank(ord("Z"), 8) == 0
    with pytest.raises(NoSuchOccurrence):
        wt.select(ord("C"), 2)


@given(st.lists(st.sampled_from([0, 65, 67, 71, 84, 78, 300]), min_size=1, max_size=600))
def test_wavelet_tree_matches_scan(seq):
    wt = WaveletTree(np.array(seq))
    assert wt.to_array().tolist() == seq
    step = max(1, len(seq) // 30)
    for i in range(1, len(seq) + 1, step):
        assert wt.access(i) == seq[i - 1]
        c, r = wt.inverse_select(i)
        assert (c, r) == (seq[i - 1], naive.rank(seq, seq[i - 1], i))
    for c in set(seq):
        for i in range(0, len(seq) + 1, step):
            assert wt.rank(c, i) == naive.rank(seq, c, i)
        for j in range(1, seq.count(c) + 1, max(1, seq.count(c) // 10)):
            assert wt.select(c, j) == naive.select(seq, c, j)
    data = to_bytes(wt)
    assert to_bytes(from_bytes(WaveletTree, data)) == data


def test_bad_tag_rejected():
    with pytest.raises(FormatError):
        from_bytes(SLArray, to_bytes(BitVector([1, 0])))
