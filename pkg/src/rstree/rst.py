"""Suffix-tree operations over an FM-index and an LCP array.

Nodes are lcp-intervals ``[sp, ep]`` of the suffix array (1-based, inclusive)
and navigation is done with rmq/psv/nsv/nsev on the LCP array.  The index
may be a plain ``FMIndex`` or a full ``RelativeFM``; the LCP array anything
exposing ``access``/``rmq``/``nsv``/``psv``/``nsev`` (``RLCPArray`` here).

LCP[1] is 0 in storage; positions 1 and n+1 act as minus infinity where a
boundary comparison needs it.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple


class STNode(NamedTuple):
    sp: int
    ep: int


class NoParent(LookupError):
    pass


class RelativeSuffixTree:
    def __init__(self, index, lcp, rselect=None) -> None:
        if len(lcp) != index.n:
            raise ValueError("index and LCP array lengths differ")
        self.index = index
        self.lcp = lcp
        self.n = index.n
        if rselect is not None:
            self._psi = lambda i: index.psi(i, rselect)
        else:
            self._psi = index.psi
        self._jump = getattr(index, "full", True)

    # -- basics -----------------------------------------------------------

    def _L(self, i: int) -> int:
        """LCP with -1 at the virtual boundaries 1 and n+1."""
        if i <= 1 or i > self.n:
            return -1
        return self.lcp.access(i)

    def _enclose(self, k: int) -> STNode:
        """The lcp-interval whose value is LCP[k] and which contains k."""
        lo = self.lcp.psv(k)[0]
        hi = self.lcp.nsv(k)[0]
        return STNode(max(lo, 1), hi - 1)

    def root(self) -> STNode:
        return STNode(1, self.n)

    def is_root(self, v) -> bool:
        return v[0] == 1 and v[1] == self.n

    def is_leaf(self, v) -> bool:
        return v[0] == v[1]

    def ancestor(self, v, w) -> bool:
        return v[0] <= w[0] and w[1] <= v[1]

    def count(self, v) -> int:
        return v[1] - v[0] + 1

    def locate_leaf(self, v) -> int:
        if not self.is_leaf(v):
            raise ValueError(f"{tuple(v)} is not a leaf")
        return self.index.locate_one(v[0])

    def sdepth(self, v) -> int:
        sp, ep = v
        if sp == ep:
            return self.n - self.index.locate_one(sp) + 1
        return self.lcp.rmq(sp + 1, ep)[1]

    # -- navigation -------------------------------------------------------

    def parent(self, v) -> STNode:
        sp, ep = v
        if sp == 1 and ep == self.n:
            raise NoParent("the root has no parent")
        k = sp if self._L(sp) >= self._L(ep + 1) else ep + 1
        if k == 1:
            return self.root()
        return self._enclose(k)

    def fchild(self, v) -> STNode:
        sp, ep = v
        if sp == ep:
            raise ValueError("a leaf has no children")
        return STNode(sp, self.lcp.rmq(sp + 1, ep)[0] - 1)

    def nsibling(self, v) -> STNode | None:
        sp, ep = v
        if ep >= self.n or self._L(ep + 1) < self._L(sp):
            return None
        return STNode(ep + 1, self.lcp.nsev(ep + 1)[0] - 1)

    def children(self, v) -> Iterator[STNode]:
        if v[0] == v[1]:
            return
        w = self.fchild(v)
        while w is not None:
            yield w
            if w[1] >= v[1]:
                return
            w = STNode(w[1] + 1, self.lcp.nsev(w[1] + 1)[0] - 1)

    def lca(self, v, w) -> STNode:
        if self.ancestor(v, w):
            return STNode(*v)
        if self.ancestor(w, v):
            return STNode(*w)
        sp, ep = min(v[0], w[0]), max(v[1], w[1])
        return self._enclose(self.lcp.rmq(sp + 1, ep)[0])

    def slink(self, v) -> STNode:
        sp, ep = v
        if sp == 1 and ep == self.n:
            return self.root()
        if sp == ep:
            if self.index.locate_one(sp) == self.n:
                return self.root()
            return STNode(self._psi(sp), self._psi(sp))
        x, y = self._psi(sp), self._psi(ep)
        return self._enclose(self.lcp.rmq(x + 1, y)[0])

    def slink_k(self, v, k: int) -> STNode:
        if k < 0:
            raise ValueError("k must be non-negative")
        if k == 0:
            return STNode(*v)
        sp, ep = v
        if self.sdepth(v) - k <= 0:
            return self.root()
        x = self.index.isa(self.index.locate_one(sp) + k)
        if sp == ep:
            return STNode(x, x)
        y = self.index.isa(self.index.locate_one(ep) + k)
        return self._enclose(self.lcp.rmq(x + 1, y)[0])

    def _shift(self, i: int, k: int) -> int:
        """psi^k(i); long shifts go through locate and isa when available."""
        if k > 8 and self._jump:
            return self.index.isa(self.index.locate_one(i) + k)
        for _ in range(k):
            i = self._psi(i)
        return i

    def letter(self, v, i: int) -> int:
        if i < 1:
            raise ValueError("letter positions start at 1")
        return self.index.first_symbol(self._shift(v[0], i - 1))

    def _child(self, v, c: int, d: int):
        """(child of v by symbol c, psi^d of its first position), with d = sdepth(v)."""
        first = self.index.first_symbol
        for w in self.children(v):
            j = self._shift(w[0], d)
            if first(j) == c:
                return w, j
        return None

    def child(self, v, c: int) -> STNode | None:
        if v[0] == v[1]:
            return None
        hit = self._child(v, c, self.sdepth(v))
        return hit[0] if hit else None

    def tdepth(self, v) -> int:
        d = 0
        while not self.is_root(v):
            v = self.parent(v)
            d += 1
        return d

    def laq_s(self, v, d: int) -> STNode | None:
        """Highest ancestor of v (v included) with string depth at least d."""
        if self.sdepth(v) < d:
            return None
        while not self.is_root(v):
            p = self.parent(v)
            if self.sdepth(p) < d:
                break
            v = p
        return STNode(*v)

    def laq_t(self, v, d: int) -> STNode | None:
        """Ancestor of v (v included) at tree depth d."""
        path = [STNode(*v)]
        while not self.is_root(path[-1]):
            path.append(self.parent(path[-1]))
        if d < 0 or d >= len(path):
            return None
        return path[len(path) - 1 - d]

    # -- traversal --------------------------------------------------------

    def preorder(self) -> Iterator[STNode]:
        """Every node once, in preorder; parents are kept on a stack."""
        v = self.root()
        stack: list[STNode] = []
        while True:
            yield v
            if v[0] != v[1]:
                stack.append(v)
                v = self.fchild(v)
                continue
            while stack:
                p = stack[-1]
                if v[1] < p[1]:
                    v = STNode(v[1] + 1, self.lcp.nsev(v[1] + 1)[0] - 1)
                    break
                v = stack.pop()
            else:
                return

    # -- maximal substrings -------------------------------------------------

    def _advance(self, j: int, k: int, sp: int, total: int) -> int:
        """psi^k(j) where j = psi^(total-k)(sp); long runs restart from sp."""
        if k > 8 and self._jump:
            return self._shift(sp, total)
        for _ in range(k):
            j = self._psi(j)
        return j

    def matching_statistics_forward(self, q) -> list[tuple[int, STNode]]:
        """(length, SA range) of the longest prefix of q[i:] in the text, per i.

        Suffix links plus skip/count rescanning.  ``u`` is the deepest node
        on the match path with depth ``ud <= l``.  While the match ends inside the edge to ``w``, ``jw = psi^l(w.sp)``
        holds the next edge symbol.
        """
        q = [int(x) for x in q]
        m = len(q)
        first = self.index.first_symbol
        u, ud, l = self.root(), 0, 0
        w = None
        out: list[tuple[int, STNode]] = []
        for i in range(m):
            while i + l < m:
                if w is None:
                    if u[0] == u[1]:
                        break
                    hit = self._child(u, q[i + l], ud)
                    if hit is None:
                        break
                    w, jw = hit
                    wd = self.sdepth(w)
                elif first(jw) != q[i + l]:
                    break
                l += 1
                jw = self._psi(jw)
                if l == wd:
                    u, ud, w = w, wd, None
            out.append((l, u if w is None else w))
            if l == 0:
                continue
            if ud > 0:
                u = self.slink(u)
                ud -= 1
            l -= 1
            w = None
            while ud < l:
                cw, jc = self._child(u, q[i + 1 + ud], ud)
                cd = self.sdepth(cw)
                if cd > l:
                    w, wd, jw = cw, cd, self._advance(jc, l - ud, cw[0], l)
                    break
                u, ud = cw, cd
        return out

    def matching_statistics_backward(self, q) -> list[tuple[int, STNode]]:
        """Same output as the forward variant, computed right to left with LF and parent."""
        q = [int(x) for x in q]
        m = len(q)
        out: list[tuple[int, STNode]] = [None] * m  # type: ignore[list-item]
        v = self.root()
        l = 0
        for i in range(m - 1, -1, -1):
            c = q[i]
            while True:
                sp, ep = self.index.backward_step(v[0], v[1], c)
                if sp <= ep:
                    v, l = STNode(sp, ep), l + 1
                    break
                if l == 0:
                    v = self.root()
                    break
                v = self.parent(v)
                l = self.sdepth(v)
            out[i] = (l, v if l else self.root())
        return out

    @staticmethod
    def _maximal(ms) -> list[tuple[tuple[int, int], STNode, int]]:
        out = []
        prev_end = 0
        for i, (l, v) in enumerate(ms):
            end = i + l
            if l > 0 and end > prev_end:
                out.append(((i + 1, end), STNode(*v), l))
                prev_end = end
        return out

    def maximal_substrings_forward(self, q):
        """Maximal substrings of q occurring in the text: ((start, end) in q, SA range, length)."""
        return self._maximal(self.matching_statistics_forward(q))

    def maximal_substrings_backward(self, q):
        return self._maximal(self.matching_statistics_backward(q))
