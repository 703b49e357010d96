import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rstree import naive
from rstree._io import from_bytes, to_bytes
from rstree._kernels import lis_two_choice
from rstree.rfm import (LCSConfig, MatchArrays, RelativeFM, RFMConfig, RSelect, approx_lcs,
                        build_match_arrays, build_merging_bitvector, lis_select)
from rstree.synth import MutationModel, mutate
from rstree.textindex import EMPTY, FMIndex, SuffixStructures, as_text

EX2 = ("GATTACA", "GATTAGA")


def build(r, s, full=True, **kw):
    tr, ts = as_text(r), as_text(s)
    sx_r, sx_s = SuffixStructures.build(tr), SuffixStructures.build(ts)
    ref = FMIndex.build(tr, sa=sx_r.sa)
    rfm = RelativeFM.build(ref, tr, ts, RFMConfig(full=full, **kw), ref_sx=sx_r, tgt_sx=sx_s)
    return rfm, sx_r, sx_s


def test_lis_example():
    x = lis_two_choice(np.array([3, 1, 2]), np.array([0, 4, 5]))
    assert x.tolist() == [3, 4, 5]


def test_ex2_match_arrays_and_lcs():
    r, s = as_text(EX2[0]), as_text(EX2[1])
    sx_r, sx_s = SuffixStructures.build(r), SuffixStructures.build(s)
    b = build_merging_bitvector(r, sx_r.bwt, s, sx_s.isa)
    assert b.astype(int).tolist() == naive.merging_bits(r, s)
    m = build_match_arrays(b, r, s, sx_r.sa, sx_r.isa, sx_s.sa)
    left, right = naive.match_arrays(r, s)
    assert m.left.tolist() == left and m.right.tolist() == right
    _, x = lis_select(m)
    assert len(x) == naive.lis_two_choice_length(left, right) == 6


def test_ex2_approx_lcs_bounds():
    r, s = as_text(EX2[0]), as_text(EX2[1])
    br = np.array(naive.bwt(r, naive.suffix_array(r)))
    bs = np.array(naive.bwt(s, naive.suffix_array(s)))
    exact = naive.lcs_length(br, bs)
    assert exact == 7
    got = len(approx_lcs(br, bs))
    assert 0.7 * exact <= got <= exact


def test_ex2_queries():
    rfm, _, sx_s = build(*EX2)
    assert rfm.lcs_len == 6
    assert rfm.find("TAG") == (7, 7)
    assert rfm.find("CA") == EMPTY
    assert [rfm.locate_one(i) for i in range(1, 9)] == sx_s.sa.tolist()
    assert bytes(rfm.extract(1, 7).tolist()) == b"GATTAGA"


def test_basic_variant_refuses_locate():
    rfm, _, _ = build(*EX2, full=False)
    with pytest.raises(Exception):
        rfm.locate_one(1)


pairs = st.tuples(
    st.text(alphabet="ACGT", min_size=1, max_size=250),
    st.sampled_from([0.0, 0.01, 0.05, 0.2, 1.0]),
    st.integers(0, 1 << 30),
)


def _target(r, p, seed):
    s, _ = mutate(r.encode(), MutationModel(p, seed=seed), bytes(sorted(set(r.encode()))))
    return s or r[:1].encode()


@given(pairs, st.booleans())
def test_relative_fm_matches_oracles(pair, full):
    r, p, seed = pair
    s = _target(r, p, seed)
    rfm, sx_r, sx_s = build(r, s, full=full, sa_rate=5, isa_rate=7)
    t = as_text(s)
    n = len(t)
    sa = naive.suffix_array(t)
    isa = naive.inverse_sa(sa)
    bwt = naive.bwt(t, sa)
    rs = RSelect.build(rfm, sx_r.bwt, sx_s.bwt)
    for i in range(1, n + 1):
        assert rfm.access(i) == bwt[i - 1]
        assert rfm.lf(i) == isa[(sa[i - 1] - 2) % n]
        assert rfm.psi(i) == isa[sa[i - 1] % n]
        assert rfm.psi(i, rs) == rfm.psi(i)
        if full:
            assert rfm.locate_one(i) == sa[i - 1]
            assert rfm.isa(i) == isa[i - 1]
    for c in set(bwt):
        for i in range(0, n + 1, max(1, n // 8)):
            assert rfm.rank(c, i) == naive.rank(bwt, c, i)
        for j in range(1, bwt.count(c) + 1):
            assert rfm.select(c, j) == naive.select(bwt, c, j) == rfm.select(c, j, rs)
    if full:
        assert rfm.extract(1, n).tolist() == t.tolist()
    for k in range(0, n - 1, max(1, n // 6)):
        pat = t[k : min(n - 1, k + 5)]
        assert rfm.find(pat) == naive.find(t, sa, pat)
    data = to_bytes(rfm)
    again = from_bytes(RelativeFM, data).attach(rfm.ref)
    assert to_bytes(again) == data
    assert to_bytes(from_bytes(RSelect, to_bytes(rs))) == to_bytes(rs)


@given(pairs)
def test_full_alignment_is_bwt_invariant(pair):
    r, p, seed = pair
    s = _target(r, p, seed)
    rfm, sx_r, sx_s = build(r, s)
    bx = rfm.align_bwt.x.bits()
    by = rfm.align_bwt.y.bits()
    br, bs = sx_r.bwt, sx_s.bwt
    assert br[bx].tolist() == bs[by].tolist()  # a common subsequence
    assert naive.is_bwt_invariant(bx, by, sx_r.sa, sx_s.sa)
    left, right = naive.match_arrays(as_text(r), as_text(s))
    assert rfm.lcs_len == naive.lis_two_choice_length(left, right)


@given(pairs)
def test_approx_lcs_is_common_subsequence(pair):
    r, p, seed = pair
    s = _target(r, p, seed)
    br = SuffixStructures.build(as_text(r)).bwt
    bs = SuffixStructures.build(as_text(s)).bwt
    a = approx_lcs(br, bs, LCSConfig(context=2, dmax=8, max_depth=3))
    bx, by = a.x.bits(), a.y.bits()
    assert br[bx].tolist() == bs[by].tolist()
    assert 0 not in bs[by].tolist()
    assert len(a) <= naive.lcs_length(br, bs)


def test_match_arrays_roundtrip():
    left = np.array([0, 0, 3, 4, 5, 0, 9, 9])
    right = np.array([1, 2, 0, 0, 6, 7, 8, 0])
    m = MatchArrays.from_arrays(left, right)
    assert m.left.tolist() == left.tolist() and m.right.tolist() == right.tolist()
