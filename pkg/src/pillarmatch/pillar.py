"""Core string-interface primitives and the backend-independent toolbox.

Every backend (plain in-memory, grammar-compressed) exposes the same small
set of operations on fragment handles: extract, lcp, lcp_r, ipm, access,
length.  Everything else in this package -- periodicity checks, rotation
tests, infinite-power lcp queries, exact matching, mismatch/edit
generators -- is written against that interface and therefore runs
unchanged over any backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


class ContractError(ValueError):
    """A caller violated an operation's precondition."""


@dataclass(frozen=True)
class Fragment:
    """Handle to owner[start:end); never holds the characters themselves."""

    owner: int
    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start

    @property
    def empty(self) -> bool:
        return self.end <= self.start


def extract(s: Fragment, l: int, r: int) -> Fragment:
    """Sub-fragment s[l:r) as a new handle; O(1), no copying."""
    if not (0 <= l <= r <= len(s)):
        raise ContractError(f"extract range [{l},{r}) outside fragment of length {len(s)}")
    return Fragment(s.owner, s.start + l, s.start + r)


@dataclass(frozen=True)
class ArithmeticProgression:
    """The set {first + j*diff : 0 <= j < count}; count 0 is the empty set."""

    first: int
    diff: int
    count: int

    def __post_init__(self) -> None:
        if self.diff < 1 or self.count < 0:
            raise ValueError(f"bad progression ({self.first},{self.diff},{self.count})")

    @property
    def last(self) -> int:
        return self.first + (self.count - 1) * self.diff

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.first, self.first + self.count * self.diff, self.diff))

    def __len__(self) -> int:
        return self.count

    def __contains__(self, x: int) -> bool:
        return self.count > 0 and self.first <= x <= self.last and (x - self.first) % self.diff == 0


EMPTY_PROGRESSION = ArithmeticProgression(0, 1, 0)


class OccurrenceSet:
    """Canonical set of positions stored as disjoint arithmetic progressions.

    Canonical form: progressions sorted by first element, pairwise disjoint,
    enumeration strictly increasing, and re-encoded greedily so that no two
    adjacent progressions with the same difference touch.  Built by
    materializing and deduplicating positions, which is exact and cheap at
    the output sizes this package produces.
    """

    __slots__ = ("progressions",)

    def __init__(self, progressions: list[ArithmeticProgression]):
        self.progressions = progressions

    @classmethod
    def empty(cls) -> "OccurrenceSet":
        return cls([])

    @classmethod
    def from_positions(cls, positions: Iterable[int]) -> "OccurrenceSet":
        arr = np.unique(np.fromiter(positions, dtype=np.int64))
        return cls._encode(arr)

    @classmethod
    def from_progressions(cls, progs: Iterable[ArithmeticProgression]) -> "OccurrenceSet":
        chunks = [np.arange(p.first, p.first + p.count * p.diff, p.diff, dtype=np.int64)
                  for p in progs if p.count > 0]
        if not chunks:
            return cls.empty()
        return cls._encode(np.unique(np.concatenate(chunks)))

    @classmethod
    def _encode(cls, arr: np.ndarray) -> "OccurrenceSet":
        # Greedy left-to-right run encoding: take the longest constant-gap
        # run starting at the cursor; runs of fewer than two elements become
        # count-1 progressions with diff 1.
        n = len(arr)
        if n == 0:
            return cls.empty()
        if n == 1:
            return cls([ArithmeticProgression(int(arr[0]), 1, 1)])
        gaps = np.diff(arr)
        # boundaries[i] is True where gaps[i] != gaps[i-1]
        cut = np.flatnonzero(gaps[1:] != gaps[:-1]) + 1
        run_starts = np.concatenate(([0], cut))            # index into gaps
        run_ends = np.concatenate((cut, [len(gaps)]))      # exclusive
        progs: list[ArithmeticProgression] = []
        idx = 0
        for rs, re in zip(run_starts.tolist(), run_ends.tolist()):
            if idx > rs:
                rs = idx
                if rs >= re:
                    continue
            d = int(gaps[rs])
            count = re - rs + 1
            progs.append(ArithmeticProgression(int(arr[rs]), d, count))
            idx = re + 1
        if idx == n - 1:
            progs.append(ArithmeticProgression(int(arr[-1]), 1, 1))
        return cls(progs)

    def positions(self) -> list[int]:
        out: list[int] = []
        for p in self.progressions:
            out.extend(p)
        return out

    def positions_array(self) -> np.ndarray:
        if not self.progressions:
            return np.empty(0, dtype=np.int64)
        return np.concatenate([
            np.arange(p.first, p.first + p.count * p.diff, p.diff, dtype=np.int64)
            for p in self.progressions])

    def union(self, other: "OccurrenceSet") -> "OccurrenceSet":
        return OccurrenceSet.from_progressions(self.progressions + other.progressions)

    def __len__(self) -> int:
        return sum(p.count for p in self.progressions)

    def __iter__(self) -> Iterator[int]:
        for p in self.progressions:
            yield from p

    def __contains__(self, x: int) -> bool:
        return any(x in p for p in self.progressions)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, OccurrenceSet):
            return self.positions() == other.positions()
        if isinstance(other, (set, frozenset, list, tuple)):
            return set(self.positions()) == set(other)
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"({p.first},{p.diff},{p.count})" for p in self.progressions)
        return f"OccurrenceSet[{inner}]"


# ---------------------------------------------------------------------------
# Toolbox operations built on the primitive interface.
# ---------------------------------------------------------------------------

def equal(backend, s: Fragment, t: Fragment) -> bool:
    """True iff the two fragments spell the same string."""
    return len(s) == len(t) and backend.lcp(s, t) == len(s)


def lcp_infinite(backend, s: Fragment, q: Fragment) -> int:
    """Length of the longest common prefix of s and the infinite power q^inf.

    Two lcp probes suffice: one against q itself, and, if all of q matched,
    one of s against s shifted by |q| (self-overlap carries the periodic
    extension).
    """
    nq = len(q)
    if len(s) == 0:
        return 0
    a = backend.lcp(s, q)
    if a < nq or a == len(s):
        return a
    return nq + backend.lcp(extract(s, nq, len(s)), s)


def lcp_r_infinite(backend, s: Fragment, q: Fragment) -> int:
    """Longest common suffix of s and a left-infinite power ...qqq."""
    nq = len(q)
    if len(s) == 0:
        return 0
    a = backend.lcp_r(s, q)
    if a < nq or a == len(s):
        return a
    return nq + backend.lcp_r(extract(s, 0, len(s) - nq), s)


def lcp_power(backend, s: Fragment, q: Fragment, l: int, r: int) -> int:
    """lcp(s, q^inf[l:r)): one in-q probe, then the periodic extension, capped."""
    if len(q) == 0:
        raise ContractError("lcp_power needs a nonempty period string")
    cap = min(r - l, len(s))
    if cap <= 0:
        return 0
    nq = len(q)
    off = l % nq
    a = backend.lcp(s, extract(q, off, nq))
    if a < nq - off:
        return min(a, cap)
    rest = lcp_infinite(backend, extract(s, a, len(s)), q)
    return min(a + rest, cap)


def lcp_r_power(backend, s: Fragment, q: Fragment, l: int, r: int) -> int:
    """Longest common suffix of s and q^inf[l:r): the mirror of lcp_power."""
    if len(q) == 0:
        raise ContractError("lcp_r_power needs a nonempty period string")
    cap = min(r - l, len(s))
    if cap <= 0:
        return 0
    nq = len(q)
    off = r % nq
    a = backend.lcp_r(s, extract(q, 0, off)) if off else 0
    if a < off:
        return min(a, cap)
    rest = lcp_r_infinite(backend, extract(s, 0, len(s) - off), q)
    return min(off + rest, cap)


def ipm(backend, p: Fragment, t: Fragment) -> ArithmeticProgression:
    """Exact occurrences of p in t for |t| <= 2|p|, as one progression."""
    if len(p) < 1:
        raise ContractError("ipm pattern must be nonempty")
    if len(t) > 2 * len(p):
        raise ContractError("ipm window longer than twice the pattern")
    return backend.ipm(p, t)


def period(backend, s: Fragment) -> int | None:
    """Smallest period of s if it is at most |s|/2, else None.

    Realized as the smallest exact self-overlap: the first occurrence of
    s[0:ceil(n/2)) inside s[1:), verified to extend over the whole string.
    """
    n = len(s)
    if n < 1:
        raise ContractError("period of an empty fragment")
    if n == 1:
        return None
    half = (n + 1) // 2
    occ = backend.ipm(extract(s, 0, half), extract(s, 1, n))
    for hit in occ:
        p = hit + 1
        if p > n // 2:
            break
        if backend.lcp(extract(s, 0, n - p), extract(s, p, n)) == n - p:
            return p
    return None


def rotations(backend, s: Fragment, t: Fragment) -> ArithmeticProgression:
    """All j in [0,|s|) with t equal to s rotated right by j positions."""
    n = len(s)
    if n != len(t):
        raise ContractError("rotations arguments must have equal length")
    if n == 0:
        return EMPTY_PROGRESSION
    ss = backend.bytes_of(s) * 2
    tt = backend.bytes_of(t)
    js = [0] if ss[:n] == tt else []
    pos = ss.find(tt, 1)
    while 0 < pos < n:
        js.append(n - pos)
        pos = ss.find(tt, pos + 1)
    js.sort()
    return _progression_from_sorted(js)


def _progression_from_sorted(hits: list[int]) -> ArithmeticProgression:
    if not hits:
        return EMPTY_PROGRESSION
    if len(hits) == 1:
        return ArithmeticProgression(hits[0], 1, 1)
    d = hits[1] - hits[0]
    for a, b in zip(hits, hits[1:]):
        if b - a != d:
            raise AssertionError("exact occurrences did not form a progression")
    return ArithmeticProgression(hits[0], d, len(hits))


def exact_matches(backend, p: Fragment, t: Fragment) -> OccurrenceSet:
    """All exact occurrences of p in t (any lengths), canonical set."""
    if len(p) < 1:
        raise ContractError("exact_matches pattern must be nonempty")
    n, m = len(t), len(p)
    if n < m:
        return OccurrenceSet.empty()
    scan = getattr(backend, "scan_exact", None)
    if scan is not None:
        return OccurrenceSet.from_positions(scan(p, t))
    # Generic route: overlapping ipm windows t[i*m : min(n, (i+2)m-1)).
    hits: set[int] = set()
    for i in range(n // m):
        lo = i * m
        hi = min(n, (i + 2) * m - 1)
        if hi - lo < m:
            continue
        for h in backend.ipm(p, extract(t, lo, hi)):
            hits.add(lo + h)
    return OccurrenceSet.from_positions(hits)


def access(backend, s: Fragment, i: int) -> int:
    """Byte value s[i]."""
    if not 0 <= i < len(s):
        raise ContractError(f"access index {i} outside fragment of length {len(s)}")
    return backend.access(s, i)


def length(s: Fragment) -> int:
    return len(s)
