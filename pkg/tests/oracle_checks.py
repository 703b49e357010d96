"""Shared exhaustive checks against the naive structures."""

import numpy as np

from rstree import naive
from rstree.rfm import RelativeFM, RFMConfig
from rstree.rlcp import RLCPArray
from rstree.rst import NoParent, RelativeSuffixTree, STNode
from rstree.textindex import FMIndex, SuffixStructures, as_text


def make_tree(r, s, **cfg):
    tr, ts = as_text(r), as_text(s)
    sx_r, sx_s = SuffixStructures.build(tr), SuffixStructures.build(ts)
    ref = FMIndex.build(tr, sa=sx_r.sa)
    rfm = RelativeFM.build(ref, tr, ts, RFMConfig(**cfg), ref_sx=sx_r, tgt_sx=sx_s)
    lcp = RLCPArray.build(sx_r.lcp, sx_s.lcp)
    return RelativeSuffixTree(rfm, lcp), ts


def _pair(nd):
    return (nd.sp, nd.ep)


def check_tree(tree, text, rng, queries=5):
    """Every navigation operation on every node against the explicit tree."""
    nt = naive.SuffixTree(text)
    nodes = nt.preorder()
    assert list(tree.preorder()) == nodes
    key = {_pair(nd): k for k, nd in enumerate(nt.nodes)}
    for sp, ep in nodes:
        k = key[(sp, ep)]
        nd = nt.nodes[k]
        v = STNode(sp, ep)
        assert tree.is_leaf(v) == (not nd.children)
        assert tree.count(v) == ep - sp + 1
        assert tree.sdepth(v) == nd.sdepth
        if nd.parent >= 0:
            assert tree.parent(v) == _pair(nt.nodes[nd.parent])
            sib = nt.nodes[nd.parent].children
            j = sib.index(k)
            assert tree.nsibling(v) == (_pair(nt.nodes[sib[j + 1]]) if j + 1 < len(sib) else None)
        else:
            assert tree.is_root(v)
            assert tree.nsibling(v) is None
            try:
                tree.parent(v)
                raise AssertionError("root has no parent")
            except NoParent:
                pass
        if nd.children:
            assert tree.fchild(v) == _pair(nt.nodes[nd.children[0]])
            assert list(tree.children(v)) == [_pair(nt.nodes[c]) for c in nd.children]
            for c in nd.children:
                assert tree.child(v, nt.nodes[c].label[nd.sdepth]) == _pair(nt.nodes[c])
            assert tree.child(v, 1) is None  # symbol 1 never occurs
        sl = nt.slink(k)
        assert tree.slink(v) == _pair(nt.nodes[sl])
        for kk in range(4):
            q = k
            for _ in range(kk):
                q = nt.slink(q)
            assert tree.slink_k(v, kk) == _pair(nt.nodes[q])
        for i in range(1, min(nd.sdepth, 5) + 1):
            assert tree.letter(v, i) == nd.label[i - 1]
        anc = nt.ancestors(k)
        assert tree.tdepth(v) == len(anc) - 1
        for d in sorted({0, len(anc) - 1, len(anc) // 2}):
            assert tree.laq_t(v, d) == _pair(nt.nodes[anc[len(anc) - 1 - d]])
        for d in range(0, nd.sdepth + 1, max(1, nd.sdepth // 3)):
            deepest = [a for a in anc if nt.nodes[a].sdepth >= d][-1]
            assert tree.laq_s(v, d) == _pair(nt.nodes[deepest])
        if sp == ep:
            assert tree.locate_leaf(v) == nt.sa[sp - 1]
    for _ in range(100):
        a, b = rng.integers(0, len(nt.nodes), 2).tolist()
        w = tree.lca(_pair(nt.nodes[a]), _pair(nt.nodes[b]))
        assert w == _pair(nt.nodes[nt.lca(a, b)])
        assert tree.ancestor(w, _pair(nt.nodes[a]))
    alphabet = np.frombuffer(b"ACGTN", np.uint8)
    for _ in range(queries):
        q = rng.choice(alphabet, int(rng.integers(0, 60)))
        if rng.random() < 0.5 and text.size > 2:  # mostly-present query
            s = int(rng.integers(0, text.size - 1))
            q = np.concatenate([text[s : s + 40][text[s : s + 40] != 0], q[:10]])
        check_matching(tree, text, nt, q)


def check_matching(tree, text, nt, q):
    fwd = tree.matching_statistics_forward(q)
    bwd = tree.matching_statistics_backward(q)
    assert fwd == bwd
    assert [x[0] for x in fwd] == naive.matching_statistics(text, list(q))
    for i, (ln, v) in enumerate(fwd):
        assert v == (naive.find(text, nt.sa, q[i : i + ln]) if ln else tree.root())
    assert tree.maximal_substrings_forward(q) == tree.maximal_substrings_backward(q)
