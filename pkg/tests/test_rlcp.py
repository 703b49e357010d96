import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from rstree import naive
from rstree._io import from_bytes, to_bytes
from rstree.bench import rmq_ranges
from rstree.rlcp import MinimaTree, RLCPArray, dlcp
from rstree.succinct import SLArray
from rstree.synth import MutationModel, mutate, rng_for
from rstree.textindex import as_text


def lcp_of(s):
    t = as_text(s)
    return np.array(naive.lcp_array(t, naive.suffix_array(t)), dtype=np.int64)


def scan_next(a, i, le):
    for k in range(i, a.size):
        if a[k] < a[i - 1] or (le and a[k] == a[i - 1]):
            return k + 1, int(a[k])
    return a.size + 1, 0


def scan_prev(a, i, le):
    for k in range(i - 2, -1, -1):
        if a[k] < a[i - 1] or (le and a[k] == a[i - 1]):
            return k + 1, int(a[k])
    return 0, 0


def scan_rmq(a, sp, ep):
    k = int(np.argmin(a[sp - 1 : ep]))
    return sp + k, int(a[sp - 1 + k])


def test_dlcp():
    assert dlcp([0, 0, 1, 3, 0]).tolist() == [0, 0, 1, 2, -3]


def test_ex1_as_target():
    r = lcp_of("GATTACA")
    rl = RLCPArray.build(r, r)
    assert rl.to_numpy().tolist() == [0, 0, 1, 1, 0, 0, 0, 1]
    assert rl.rmq(3, 8) == (5, 0)
    assert rl.nsv(3) == (5, 0)
    assert rl.psv(3) == (2, 0)
    assert rl.nsev(3) == (4, 1)
    assert rl.psev(4) == (3, 1)
    assert rl.nsv(8) == (9, 0)
    assert rl.psv(1) == (0, 0)


def test_minima_tree_levels():
    leaves = np.arange(5000)[::-1] % 97
    t = MinimaTree.build(leaves)
    assert len(t.levels) >= 3
    assert t.range_min(10, 4000)[0] == int(leaves[10:4001].min())


def _pair(r, p, seed):
    s, _ = mutate(r.encode(), MutationModel(p, seed=seed), bytes(sorted(set(r.encode()))))
    return lcp_of(r), lcp_of(s or r[:1].encode())


pairs = st.tuples(
    st.text(alphabet="ACGT", min_size=1, max_size=400),
    st.sampled_from([0.0, 0.001, 0.02, 0.1, 1.0]),
    st.integers(0, 1 << 30),
    st.sampled_from([4, 16, 1024]),
)


@given(pairs)
def test_rlcp_matches_linear_scan(args):
    r, p, seed, max_len = args
    from rstree.rlz import RLZConfig

    lr, ls = _pair(r, p, seed)
    rl = RLCPArray.build(lr, ls, cfg=RLZConfig(max_len=max_len))
    n = ls.size
    assert rl.to_numpy().tolist() == ls.tolist()
    for i in range(1, n + 1):
        assert rl[i] == ls[i - 1]
        assert rl.nsv(i) == scan_next(ls, i, False)
        assert rl.nsev(i) == scan_next(ls, i, True)
        assert rl.psv(i) == scan_prev(ls, i, False)
        assert rl.psev(i) == scan_prev(ls, i, True)
    rng = rng_for(seed)
    for sp, ep in rmq_ranges(n, 50, rng).tolist():
        assert rl.rmq(sp, ep) == scan_rmq(ls, sp, ep)
    a, b = sorted(rng.integers(1, n + 1, 2).tolist())
    assert rl.access_seq(a, b).tolist() == ls[a - 1 : b].tolist()
    data = to_bytes(rl)
    back = from_bytes(RLCPArray, data).attach(SLArray(lr))
    assert to_bytes(back) == data
    assert back.to_numpy().tolist() == ls.tolist()
