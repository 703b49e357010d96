"""Brute-force oracles: sorting suffixes, scanning sequences, explicit tries.

These are deliberately simple and share no code with the succinct
structures; tests and the ``verify`` command compare the two.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np


def suffix_array(t) -> list[int]:
    t = [int(x) for x in t]
    return [i + 1 for i in sorted(range(len(t)), key=lambda i: t[i:])]


def inverse_sa(sa) -> list[int]:
    isa = [0] * len(sa)
    for r, p in enumerate(sa, 1):
        isa[p - 1] = r
    return isa


def lcp_array(t, sa) -> list[int]:
    t = [int(x) for x in t]
    out = [0]
    for a, b in zip(sa, sa[1:]):
        x, y = t[a - 1 :], t[b - 1 :]
        h = 0
        while h < min(len(x), len(y)) and x[h] == y[h]:
            h += 1
        out.append(h)
    return out


def bwt(t, sa) -> list[int]:
    return [int(t[p - 2]) for p in sa]  # p = 1 wraps to the last symbol


def rank(seq, c, i) -> int:
    return sum(1 for x in list(seq)[:i] if x == c)


def select(seq, c, j) -> int:
    seen = 0
    for k, x in enumerate(seq, 1):
        if x == c:
            seen += 1
            if seen == j:
                return k
    raise LookupError(f"no occurrence {j} of {c}")


def find(t, sa, p) -> tuple[int, int]:
    """Suffix-array range of pattern p by binary search over explicit suffixes."""
    t = [int(x) for x in t]
    p = [int(x) for x in p]
    prefixes = [t[s - 1 : s - 1 + len(p)] for s in sa]
    lo = bisect_left(prefixes, p)
    hi = bisect_right(prefixes, p)
    return (lo + 1, hi) if lo < hi else (1, 0)


def mutual_order(r, s) -> list[tuple[int, int]]:
    """Mutual suffix array of R and S as (side, start) pairs, side 0 = R.

    Endmarkers compare as R's $ < S's $ < every other symbol.
    """
    def enc(t, side):
        return [1 + 2 * int(x) if x else side for x in t]

    er, es = enc(r, 0), enc(s, 1)
    items = [(er[i:], 0, i + 1) for i in range(len(er))] + [(es[i:], 1, i + 1) for i in range(len(es))]
    items.sort()
    return [(side, pos) for _, side, pos in items]


def merging_bits(r, s) -> list[int]:
    return [side for side, _ in mutual_order(r, s)]


def match_arrays(r, s) -> tuple[list[int], list[int]]:
    """left/right pairing oracle computed directly from the mutual suffix array."""
    order = mutual_order(r, s)
    where = {(side, pos): k for k, (side, pos) in enumerate(order)}
    left = [0] * len(r)
    right = [0] * len(r)
    for t in range(1, len(r)):
        k = where[(0, t + 1)]
        for out, q in ((left, k - 1), (right, k + 1)):
            if 0 <= q < len(order) and order[q][0] == 1:
                u = order[q][1] - 1
                if u >= 1 and s[u - 1] == r[t - 1]:
                    out[t - 1] = u
    return left, right


def lcs_length(a, b) -> int:
    a = list(a)
    b = np.asarray(list(b))
    prev = np.zeros(len(b) + 1, dtype=np.int64)
    for x in a:
        cur = np.zeros_like(prev)
        eq = b == x
        diag = prev[:-1] + 1
        for j in range(1, len(b) + 1):
            cur[j] = diag[j - 1] if eq[j - 1] else max(prev[j], cur[j - 1])
        prev = cur
    return int(prev[-1])


def lis_two_choice_length(left, right) -> int:
    """Exhaustive DP: longest strictly increasing pick of one of left[t]/right[t] per t."""
    best: dict[int, int] = {}  # last value -> longest length
    for a, b in zip(left, right):
        updates = {}
        for v in {a, b} - {0}:
            ln = 1 + max((l for last, l in best.items() if last < v), default=0)
            updates[v] = max(updates.get(v, 0), ln)
        for v, ln in updates.items():
            best[v] = max(best.get(v, 0), ln)
    return max(best.values(), default=0)


def is_bwt_invariant(bits_r, bits_s, sa_r, sa_s) -> bool:
    """Definition check over all pairs of lcs-positions (quadratic)."""
    ir = np.flatnonzero(np.asarray(bits_r))
    js = np.flatnonzero(np.asarray(bits_s))
    if ir.size != js.size:
        return False
    a = np.asarray(sa_r)[ir]
    b = np.asarray(sa_s)[js]
    return bool(np.array_equal(a[:, None] < a[None, :], b[:, None] < b[None, :]))


def matching_statistics(t, q) -> list[int]:
    """ms[i] = length of the longest prefix of q[i:] occurring in t (endmarker excluded)."""
    tb = bytes(int(x) for x in t) if max(t) < 256 else None
    out = []
    for i in range(len(q)):
        ln = 0
        while i + ln < len(q):
            pat = q[i : i + ln + 1]
            if tb is not None and max(pat) < 256 and min(pat) > 0:
                hit = bytes(int(x) for x in pat) in tb
            else:
                hit = False
            if not hit:
                break
            ln += 1
        out.append(ln)
    return out


# --------------------------------------------------------------------------
# explicit suffix tree


@dataclass
class Node:
    sp: int
    ep: int
    sdepth: int
    label: tuple
    parent: int = -1
    children: list[int] = field(default_factory=list)
    tdepth: int = 0


class SuffixTree:
    """Compact suffix tree built from an uncompacted trie of all suffixes."""

    def __init__(self, t) -> None:
        self.t = [int(x) for x in t]
        n = len(self.t)
        self.n = n
        self.sa = suffix_array(self.t)
        rank_of = {p: r for r, p in enumerate(self.sa, 1)}
        trie: dict = {}
        for p in range(1, n + 1):
            node = trie
            for c in self.t[p - 1 :]:
                node = node.setdefault(c, {})
            node[None] = rank_of[p]
        self.nodes: list[Node] = []
        self.index: dict[tuple[int, int], int] = {}
        self.by_label: dict[tuple, int] = {}
        self._compact(trie, (), -1, 0)

    def _leaves(self, trie) -> list[int]:
        out = []
        stack = [trie]
        while stack:
            node = stack.pop()
            for k, v in node.items():
                if k is None:
                    out.append(v)
                else:
                    stack.append(v)
        return out

    def _compact(self, trie, label, parent, tdepth) -> None:
        # iterative to avoid deep recursion on long unary paths
        stack = [(trie, label, parent, tdepth)]
        while stack:
            node, lab, par, td = stack.pop()
            while par >= 0 and None not in node and len(node) == 1:
                (c, nxt), = node.items()
                lab = lab + (c,)
                node = nxt
            leaves = self._leaves(node)
            idx = len(self.nodes)
            self.nodes.append(Node(min(leaves), max(leaves), len(lab), lab, par, [], td))
            self.index[(min(leaves), max(leaves))] = idx
            self.by_label[lab] = idx
            if par >= 0:
                self.nodes[par].children.append(idx)
            kids = sorted(k for k in node if k is not None)
            for c in reversed(kids):
                stack.append((node[c], lab + (c,), idx, td + 1))
        for nd in self.nodes:
            nd.children.sort(key=lambda k: self.nodes[k].sp)

    # navigation helpers used by tests
    def node(self, sp, ep) -> Node:
        return self.nodes[self.index[(sp, ep)]]

    def preorder(self) -> list[tuple[int, int]]:
        out = []
        stack = [0]
        while stack:
            k = stack.pop()
            out.append((self.nodes[k].sp, self.nodes[k].ep))
            stack.extend(reversed(self.nodes[k].children))
        return out

    def ancestors(self, k) -> list[int]:
        out = [k]
        while self.nodes[out[-1]].parent >= 0:
            out.append(self.nodes[out[-1]].parent)
        return out

    def lca(self, a, b) -> int:
        anc = set(self.ancestors(a))
        for k in self.ancestors(b):
            if k in anc:
                return k
        return 0

    def slink(self, k) -> int:
        lab = self.nodes[k].label
        return self.by_label[lab[1:]] if lab else 0
