"""Plain in-memory backend: byte strings plus a suffix-array LCE index.

All registered strings (and their reverses, which serve the suffix-side
queries) are laid out in one integer corpus with unique separator values.
The longest-common-extension structure -- suffix array, lcp array, and a
blocked range-minimum table -- is built lazily on the first lcp query;
pure scanning workloads (exact matching, character access) never pay for
it.
"""

from __future__ import annotations

import numpy as np

from .pillar import ArithmeticProgression, ContractError, EMPTY_PROGRESSION, Fragment, \
    _progression_from_sorted


def _suffix_array(arr: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling with numpy lexsort; O(n log^2 n)."""
    n = len(arr)
    order = np.argsort(arr, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    sorted_vals = arr[order]
    groups = np.concatenate(([0], np.cumsum(sorted_vals[1:] != sorted_vals[:-1])))
    rank[order] = groups
    k = 1
    while rank[order[-1]] != n - 1:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1 = rank[order]
        r2 = second[order]
        changed = np.concatenate(([False], (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])))
        new_rank = np.cumsum(changed)
        rank = np.empty(n, dtype=np.int64)
        rank[order] = new_rank
        k *= 2
    return order


def _lcp_array(text: list[int], sa: np.ndarray, rank: np.ndarray) -> np.ndarray:
    """Kasai's algorithm; lcp[i] = lcp(suffix sa[i-1], suffix sa[i])."""
    n = len(text)
    lcp = np.zeros(n, dtype=np.int32)
    sa_list = sa.tolist()
    rank_list = rank.tolist()
    h = 0
    for i in range(n):
        r = rank_list[i]
        if r > 0:
            j = sa_list[r - 1]
            while i + h < n and j + h < n and text[i + h] == text[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp


class _BlockRmq:
    """Range-minimum over an int array: sparse table on block minima."""

    BLOCK = 32

    def __init__(self, arr: np.ndarray):
        self.arr = arr
        nb = (len(arr) + self.BLOCK - 1) // self.BLOCK
        pad = nb * self.BLOCK - len(arr)
        blocks = np.concatenate((arr, np.full(pad, np.iinfo(arr.dtype).max, arr.dtype)))
        mins = blocks.reshape(nb, self.BLOCK).min(axis=1)
        table = [mins]
        span = 1
        while span * 2 <= nb:
            prev = table[-1]
            table.append(np.minimum(prev[: len(prev) - span], prev[span:]))
            span *= 2
        self.table = table

    def query(self, l: int, r: int) -> int:
        """Minimum of arr[l:r); r > l required."""
        bl, br = l // self.BLOCK, (r - 1) // self.BLOCK
        if bl == br:
            return int(self.arr[l:r].min())
        best = min(int(self.arr[l: (bl + 1) * self.BLOCK].min()),
                   int(self.arr[br * self.BLOCK: r].min()))
        if bl + 1 <= br - 1:
            span = br - bl - 1
            lev = span.bit_length() - 1
            t = self.table[lev]
            best = min(best, int(t[bl + 1]), int(t[br - (1 << lev)]))
        return best


class StandardBackend:
    """In-memory strings with O(1)-style lcp/lcp_r after lazy index build."""

    def __init__(self, strings: list[bytes]):
        if sum(len(s) for s in strings) < 1:
            raise ContractError("backend needs at least one nonempty string")
        self._strings: list[bytes] = []
        self._offsets: list[int] = []
        self._rev_of: list[int] = []
        pieces: list[np.ndarray] = []
        pos = 0
        sep = -1
        for s in strings:
            for data in (bytes(s), bytes(s)[::-1]):
                self._strings.append(data)
                self._offsets.append(pos)
                arr = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
                pieces.append(arr)
                pieces.append(np.array([sep], dtype=np.int64))
                pos += len(data) + 1
                sep -= 1
        for i in range(0, len(self._strings), 2):
            self._rev_of.extend((i + 1, i))
        self._corpus = np.concatenate(pieces)
        self._corpus_list: list[int] | None = None
        self._rank: np.ndarray | None = None
        self._rmq: _BlockRmq | None = None

    # -- handle plumbing ----------------------------------------------------

    def handle(self, index: int) -> Fragment:
        """Whole-string handle for the index-th registered string."""
        return Fragment(2 * index, 0, len(self._strings[2 * index]))

    def owners(self) -> int:
        return len(self._strings) // 2

    def reversed_fragment(self, f: Fragment) -> Fragment:
        n = len(self._strings[f.owner])
        return Fragment(self._rev_of[f.owner], n - f.end, n - f.start)

    def bytes_of(self, f: Fragment) -> bytes:
        return self._strings[f.owner][f.start:f.end]

    # -- primitive operations ----------------------------------------------

    def access(self, f: Fragment, i: int) -> int:
        return self._strings[f.owner][f.start + i]

    def _abs(self, f: Fragment) -> int:
        return self._offsets[f.owner] + f.start

    def _ensure_index(self) -> None:
        if self._rank is not None:
            return
        sa = _suffix_array(self._corpus)
        rank = np.empty(len(sa), dtype=np.int64)
        rank[sa] = np.arange(len(sa))
        self._corpus_list = self._corpus.tolist()
        lcp = _lcp_array(self._corpus_list, sa, rank)
        # publish the guard attribute last so concurrent readers never see a
        # half-built index
        self._rmq = _BlockRmq(lcp)
        self._rank = rank

    def lcp(self, a: Fragment, b: Fragment) -> int:
        la, lb = len(a), len(b)
        if la == 0 or lb == 0:
            return 0
        pa, pb = self._abs(a), self._abs(b)
        if pa == pb:
            return min(la, lb)
        sa_, sb_ = self._strings[a.owner], self._strings[b.owner]
        if sa_[a.start] != sb_[b.start]:
            return 0
        self._ensure_index()
        ra, rb = int(self._rank[pa]), int(self._rank[pb])
        if ra > rb:
            ra, rb = rb, ra
        return min(self._rmq.query(ra + 1, rb + 1), la, lb)

    def lcp_r(self, a: Fragment, b: Fragment) -> int:
        return self.lcp(self.reversed_fragment(a), self.reversed_fragment(b))

    def scan_exact(self, p: Fragment, t: Fragment) -> list[int]:
        """All exact occurrences of p in t by a C-level substring scan."""
        pat = self.bytes_of(p)
        txt = self.bytes_of(t)
        out = []
        pos = txt.find(pat)
        while pos != -1:
            out.append(pos)
            pos = txt.find(pat, pos + 1)
        return out

    def ipm(self, p: Fragment, t: Fragment) -> ArithmeticProgression:
        if len(p) < 1:
            raise ContractError("ipm pattern must be nonempty")
        if len(t) > 2 * len(p):
            raise ContractError("ipm window longer than twice the pattern")
        hits = self.scan_exact(p, t)
        if not hits:
            return EMPTY_PROGRESSION
        return _progression_from_sorted(hits)
