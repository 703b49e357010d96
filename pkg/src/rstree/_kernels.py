"""Numba kernels for the construction-time loops that do not vectorize.

Everything here works on 0-based numpy arrays; the public modules convert
to the 1-based conventions of the query APIs.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def kasai(t, sa):
    """LCP array (0-based, lcp[0] = 0) from text and 0-based suffix array."""
    n = t.shape[0]
    rank = np.empty(n, np.int64)
    for i in range(n):
        rank[sa[i]] = i
    lcp = np.zeros(n, np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and t[i + h] == t[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@njit(cache=True)
def walk_backward(lf, start, n):
    """Ranks visited by iterating ``lf`` n times from ``start``; out[k] = lf^k(start)."""
    out = np.empty(n, np.int64)
    r = start
    for k in range(n):
        out[k] = r
        r = lf[r]
    return out


@njit(cache=True)
def occ_checkpoints(seq, sigma, step):
    """occ[b, c] = occurrences of c in seq[0 : b*step]."""
    n = seq.shape[0]
    nb = n // step + 1
    occ = np.zeros((nb + 1, sigma), np.int32)
    cur = np.zeros(sigma, np.int32)
    for i in range(n):
        if i % step == 0:
            occ[i // step] = cur
        cur[seq[i]] += 1
    if n % step == 0:
        occ[n // step] = cur
    return occ


@njit(cache=True)
def occ_rank(seq, occ, step, c, i):
    """Occurrences of c in seq[0:i]."""
    b = i // step
    r = occ[b, c]
    for k in range(b * step, i):
        if seq[k] == c:
            r += 1
    return r


@njit(cache=True)
def merge_counts(bwt_r, occ_r, step, cnt_r, s):
    """For each suffix of s (0-based start), the number of suffixes of r that
    sort before it in the mutual order where r's endmarker precedes s's.

    ``cnt_r[c]`` is the number of symbols of r smaller than c.  Returns an
    array out[k] for k = 0..len(s)-1.
    """
    m = s.shape[0]
    out = np.empty(m, np.int64)
    # suffix s[m-1] = $ : r's $ sorts before, so exactly one r-suffix precedes
    pos = 1
    out[m - 1] = pos
    for k in range(m - 2, -1, -1):
        c = s[k]
        pos = cnt_r[c] + occ_rank(bwt_r, occ_r, step, c, pos)
        out[k] = pos
    return out


# --------------------------------------------------------------------------
# RLZ parsing


@njit(cache=True)
def sparse_table_max(a):
    n = a.shape[0]
    levels = 1
    while (1 << levels) <= n:
        levels += 1
    st = np.empty((levels, n), np.int32)
    for i in range(n):
        st[0, i] = a[i]
    for k in range(1, levels):
        h = 1 << (k - 1)
        for i in range(n - (1 << k) + 1):
            x = st[k - 1, i]
            y = st[k - 1, i + h]
            st[k, i] = x if x > y else y
    return st


@njit(cache=True)
def range_max(st, lo, hi):
    """max of the underlying array over [lo, hi] inclusive."""
    span = hi - lo + 1
    k = 0
    while (2 << k) <= span:
        k += 1
    x = st[k, lo]
    y = st[k, hi - (1 << k) + 1]
    return x if x > y else y


@njit(cache=True)
def rlz_parse(s, r, bwt_rev, occ, step, cnt, sigma, st, max_len, lookahead, radius, min_len, limit):
    """Greedy RLZ parse of token array s against r (ids 1..sigma; others never match).

    bwt_rev/occ/cnt describe the FM-index of reverse(r)+[0]; st is a range-max
    table over its 0-based suffix array.  Returns per-phrase arrays
    (start, src, copy_len, literal_count), all 0-based; src is -1 for
    literal-only phrases.  The last phrase has 0 literals when its copy runs
    to the end of s.
    """
    n = s.shape[0]
    m = r.shape[0]
    starts = np.empty(n + 1, np.int64)
    srcs = np.empty(n + 1, np.int64)
    lens = np.empty(n + 1, np.int64)
    nlits = np.empty(n + 1, np.int64)
    z = 0
    pos = 0
    last_rel = 0
    last_exp = 0
    has_exp = False
    while pos < n:
        cap = min(max_len, n - pos)
        sp = 0
        ep = m + 1
        length = 0
        while length < cap:
            c = s[pos + length]
            if c < 1 or c > sigma:
                break
            nsp = cnt[c] + occ_rank(bwt_rev, occ, step, c, sp)
            nep = cnt[c] + occ_rank(bwt_rev, occ, step, c, ep)
            if nsp >= nep:
                break
            sp = nsp
            ep = nep
            length += 1
        src = -1
        if length > 0:
            q = range_max(st, sp, ep - 1)
            src = m - q - length
        best_d = 0
        if z > 0 and lookahead > 0 and has_exp:
            storable = length == 0 or abs((src - pos) - last_exp) < limit
            if not storable:
                best_reach = pos + length
                dmax = min(lookahead, n - pos)
                for d in range(dmax):
                    p = pos + d
                    cap2 = min(max_len, n - p)
                    for rel in range(last_rel - radius, last_rel + radius + 1):
                        if abs(rel - last_exp) >= limit:
                            continue
                        if p + rel < 0 or p + rel >= m:
                            continue
                        l = 0
                        while l < cap2 and p + rel + l < m and s[p + l] == r[p + rel + l]:
                            l += 1
                        if l < min_len:
                            continue
                        reach = p + l
                        if reach > best_reach or (d == 0 and reach == best_reach):
                            best_reach = reach
                            best_d = d
                            length = l
                            src = p + rel
                if best_d > 0:
                    nlits[z - 1] += best_d
                    pos += best_d
        starts[z] = pos
        srcs[z] = src
        lens[z] = length
        if length > 0:
            rel = src - pos
            if not has_exp or abs(rel - last_exp) >= limit:
                last_exp = rel
                has_exp = True
            last_rel = rel
        elif not has_exp:
            has_exp = True
            last_exp = 0
        if pos + length >= n:
            nlits[z] = 0
            z += 1
            break
        nlits[z] = 1
        z += 1
        pos += length + 1
    return starts[:z], srcs[:z], lens[:z], nlits[:z]


# --------------------------------------------------------------------------
# relative FM-index construction


@njit(cache=True)
def lis_two_choice(left, right):
    """Longest strictly increasing selection with at most one of left[t]/right[t]
    per position t (0 = no candidate).  Returns the chosen value per t (0 = unused).

    Reconstruction walks backwards and prefers the left candidate, then the
    smaller value.
    """
    n = left.shape[0]
    tails = np.empty(2 * n + 1, np.int64)
    size = 0
    lenl = np.zeros(n, np.int64)
    lenr = np.zeros(n, np.int64)
    for t in range(n):
        a = left[t]
        b = right[t]
        # larger candidate first so both cannot extend each other
        for step in range(2):
            if step == 0:
                v = a if a > b else b
                is_left = a > b
            else:
                v = b if a > b else a
                is_left = not (a > b)
                if a == b:
                    continue
            if v <= 0:
                continue
            lo = 0
            hi = size
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] < v:
                    lo = mid + 1
                else:
                    hi = mid
            tails[lo] = v
            if lo == size:
                size += 1
            if is_left or a == b:
                lenl[t] = lo + 1
                if a == b:
                    lenr[t] = lo + 1
            else:
                lenr[t] = lo + 1
    chosen = np.zeros(n, np.int64)
    need = size
    bound = np.int64(1) << 62
    for t in range(n - 1, -1, -1):
        if need == 0:
            break
        a = left[t]
        b = right[t]
        pick = 0
        if a > 0 and lenl[t] == need and a < bound:
            pick = a
        if b > 0 and lenr[t] == need and b < bound:
            if pick == 0:
                pick = b
        if pick > 0:
            chosen[t] = pick
            bound = pick
            need -= 1
    return chosen


@njit(cache=True)
def myers_lcs(a, b, dmax):
    """Exact LCS alignment by Myers' O(ND) diff when the edit distance is <= dmax.

    Returns (ok, ia, ib) with matched 0-based index pairs in increasing order.
    """
    n = a.shape[0]
    m = b.shape[0]
    off = dmax + 1
    width = 2 * dmax + 3
    trace = np.empty((dmax + 1, width), np.int32)
    v = np.zeros(width, np.int32)
    final = -1
    for d in range(dmax + 1):
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v[k - 1 + off] < v[k + 1 + off]):
                x = v[k + 1 + off]
            else:
                x = v[k - 1 + off] + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k + off] = x
            if x >= n and y >= m:
                final = d
                break
        trace[d] = v
        if final >= 0:
            break
    if final < 0:
        return False, np.zeros(0, np.int64), np.zeros(0, np.int64)
    ia = np.empty(min(n, m), np.int64)
    ib = np.empty(min(n, m), np.int64)
    cnt = 0
    x = n
    y = m
    for d in range(final, 0, -1):
        pv = trace[d - 1]
        k = x - y
        if k == -d or (k != d and pv[k - 1 + off] < pv[k + 1 + off]):
            pk = k + 1
        else:
            pk = k - 1
        px = pv[pk + off]
        py = px - pk
        while x > px and y > py:
            x -= 1
            y -= 1
            ia[cnt] = x
            ib[cnt] = y
            cnt += 1
        x = px
        y = py
    while x > 0 and y > 0:
        x -= 1
        y -= 1
        ia[cnt] = x
        ib[cnt] = y
        cnt += 1
    return True, ia[:cnt][::-1].copy(), ib[:cnt][::-1].copy()


@njit(cache=True)
def greedy_common(a, b):
    """Cheap common subsequence: two pointers advancing in proportion to the lengths."""
    n = a.shape[0]
    m = b.shape[0]
    ia = np.empty(min(n, m), np.int64)
    ib = np.empty(min(n, m), np.int64)
    cnt = 0
    i = 0
    j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            ia[cnt] = i
            ib[cnt] = j
            cnt += 1
            i += 1
            j += 1
        elif i * m <= j * n:
            i += 1
        else:
            j += 1
    return ia[:cnt], ib[:cnt]
