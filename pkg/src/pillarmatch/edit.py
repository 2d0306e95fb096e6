"""Pattern matching with up to k edits (insertions, deletions, substitutions).

The backbone is a resumable diagonal-band alignment generator: its c-th
step reports the longest prefix of a string reachable from a power of a
short period with at most c edits, one lcp probe per diagonal transition.
On top of it sit witness finding (where in q^inf a string aligns), locked
fragments (short pieces that pin down every error of a near-periodic
string), a synchronized periodic matcher, and block/region marking drivers
mirroring the mismatch side.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .hamming import ApproxPeriod, Breaks, MARK_DIV, PatternAnalysis, RepetitiveRegions
from .pillar import (ArithmeticProgression, ContractError, Fragment, OccurrenceSet,
                     exact_matches, extract, lcp_power, period)

_NEG = -(1 << 60)


@dataclass(frozen=True)
class MatchEntry:
    """An occurrence start and the cheapest alignment cost at that start."""
    position: int
    cost: int


class EditGenerator:
    """Resumable banded alignment of s against q^inf[offset:].

    The c-th call to next() (counting from zero) returns a pair
    (s_prefix_length, q_prefix_length): the longest prefix of s at edit
    distance at most c from some prefix of q^inf[offset:], and that
    witness prefix's length.  Once all of s is covered the output freezes.
    alignment() replays the edit transcript of the latest result.
    """

    def __init__(self, backend, s: Fragment, q: Fragment, offset: int = 0):
        if len(q) < 1:
            raise ContractError("edit generator needs a nonempty period")
        self.backend = backend
        self.s = s
        self.q = q
        self.offset = offset
        self.calls = -1
        self.frontier: dict[int, int] = {}
        self.trace: dict[tuple[int, int], tuple[int, int, tuple[int | None, int | None]]] = {}
        self.end = False
        self._frozen: tuple[int, int] | None = None
        self._best_diag = 0

    def _slide(self, r: int, diag: int) -> int:
        ns = len(self.s)
        if r >= ns:
            return ns
        rest = extract(self.s, r, ns)
        return r + lcp_power(self.backend, rest, self.q,
                             self.offset + r + diag, self.offset + ns + diag + len(self.s))

    def next(self) -> tuple[int, int]:
        if self.end:
            return self._frozen
        ns = len(self.s)
        self.calls += 1
        c = self.calls
        if c == 0:
            r = self._slide(0, 0)
            self.frontier = {0: r}
            self._best_diag = 0
            if r >= ns:
                self.end = True
                self._frozen = (r, r)
            return (r, r)
        prev = self.frontier
        cur: dict[int, int] = {}
        best_r, best_i = _NEG, 0
        for i in range(-c, c + 1):
            r0, src, edit = _NEG, 0, None
            base = prev.get(i, _NEG)
            if base != _NEG and base + 1 > r0:
                r0, src, edit = base + 1, i, (base, base + i)
            base = prev.get(i - 1, _NEG)
            if base != _NEG and base > r0:
                r0, src, edit = base, i - 1, (None, base + i - 1)
            base = prev.get(i + 1, _NEG)
            if base != _NEG and base + 1 > r0:
                r0, src, edit = base + 1, i + 1, (base, None)
            if r0 == _NEG or r0 + i < 0:
                continue
            r0 = min(r0, ns)
            r = self._slide(r0, i)
            cur[i] = r
            self.trace[(c, i)] = (c - 1, src, edit)
            if r > best_r:
                best_r, best_i = r, i
        self.frontier = cur
        self._best_diag = best_i
        result = (best_r, best_r + best_i)
        if best_r >= ns:
            self.end = True
            self._frozen = result
        return result

    def alignment(self) -> list[tuple[int | None, int | None]]:
        """Edit transcript of the latest next() result, in replay order.

        Entries are (s_position, q_position) for a substitution,
        (s_position, None) for a character of s with no partner, and
        (None, q_position) for a character of q^inf with no partner;
        q positions are relative to the generator's offset.
        """
        if self.calls < 0:
            raise ContractError("alignment requested before the first next()")
        out: list[tuple[int | None, int | None]] = []
        c, i = self.calls, self._best_diag
        while c > 0:
            pc, pi, edit = self.trace[(c, i)]
            out.append(edit)
            c, i = pc, pi
        out.reverse()
        return out


class EditGeneratorR:
    """Mirror of EditGenerator for suffixes of s against suffixes of powers
    of q; end_offset fixes the q^inf position (mod |q|) where the matched
    power ends."""

    def __init__(self, backend, s: Fragment, q: Fragment, end_offset: int = 0):
        rs = backend.reversed_fragment(s)
        rq = backend.reversed_fragment(q)
        self._fwd = EditGenerator(backend, rs, rq, (-end_offset) % len(q))

    def next(self) -> tuple[int, int]:
        return self._fwd.next()


# -- bounded alignment cost probes ------------------------------------------

def _lcp_bytes(a: bytes, b: bytes, i: int, j: int, cap: int) -> int:
    """Longest common prefix of a[i:] and b[j:], at most cap; slice compares."""
    if cap <= 0 or a[i] != b[j]:
        return 0
    lo, step = 1, 1
    while lo + step <= cap and a[i + lo:i + lo + step] == b[j + lo:j + lo + step]:
        lo += step
        step *= 2
    hi = min(cap, lo + step)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[i + lo:i + mid] == b[j + lo:j + mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _min_cost_window(pb: bytes, tb: bytes, wlo: int, whi: int, k: int) -> int | None:
    """min over r of delta_E(pb, tb[wlo:wlo+r)) with r <= whi-wlo, if <= k."""
    m = len(pb)
    nw = whi - wlo
    if nw < m - k:
        return None

    def jump(r: int, diag: int) -> int:
        cap = min(m - r, nw - (r + diag))
        return r + _lcp_bytes(pb, tb, r, wlo + r + diag, cap)

    frontier = {0: jump(0, 0)}
    if frontier[0] >= m:
        return 0
    for c in range(1, k + 1):
        cur: dict[int, int] = {}
        for i in range(-c, c + 1):
            r0 = _NEG
            base = frontier.get(i, _NEG)
            if base != _NEG and base < m and base + i < nw:
                r0 = base + 1
            base = frontier.get(i - 1, _NEG)
            if base != _NEG and base + i - 1 < nw and base > r0:
                r0 = base
            base = frontier.get(i + 1, _NEG)
            if base != _NEG and base < m and base + 1 > r0:
                r0 = base + 1
            if r0 == _NEG or r0 + i < 0 or r0 + i > nw:
                continue
            r = jump(r0, i)
            cur[i] = r
            if r >= m:
                return c
        if not cur:
            return None
        frontier = cur
    return None


def _min_cost_power(backend, p: Fragment, q: Fragment, start: int, k: int) -> int | None:
    """min over y of delta_E(p, q^inf[start:y)) if at most k, else None."""
    m = len(p)

    def slide(r: int, diag: int) -> int:
        if r >= m:
            return r
        return r + lcp_power(backend, extract(p, r, m), q,
                             start + r + diag, start + 2 * m + abs(diag) + k + 1)

    frontier = {0: slide(0, 0)}
    if frontier[0] >= m:
        return 0
    for c in range(1, k + 1):
        cur: dict[int, int] = {}
        for i in range(-c, c + 1):
            r0 = _NEG
            base = frontier.get(i, _NEG)
            if base != _NEG:
                r0 = max(r0, base + 1)
            base = frontier.get(i - 1, _NEG)
            if base != _NEG and start + base + i - 1 >= 0:
                r0 = max(r0, base)
            base = frontier.get(i + 1, _NEG)
            if base != _NEG:
                r0 = max(r0, base + 1)
            if r0 == _NEG or start + r0 + i < 0:
                continue
            r = slide(min(r0, m), i)
            cur[i] = r
            if r >= m:
                return c
        frontier = cur
    return None


def verify_ed(backend, p: Fragment, t: Fragment, k: int,
              interval: tuple[int, int]) -> list[MatchEntry]:
    """Occurrence starts within the closed interval, with their best costs.

    Runs one independent banded alignment per candidate start; a start
    qualifies when some prefix of t[pos:] is within k edits of p.  The two
    fragments are materialized once and probed with byte-level lcp jumps.
    """
    m, n = len(p), len(t)
    lo, hi = max(0, interval[0]), min(interval[1], n)
    if hi < lo:
        return []
    pb = backend.bytes_of(p)
    tb = backend.bytes_of(t)
    out: list[MatchEntry] = []
    for pos in range(lo, hi + 1):
        cost = _min_cost_window(pb, tb, pos, min(n, pos + m + k), k)
        if cost is not None:
            out.append(MatchEntry(pos, cost))
    return out


# -- pattern analysis ---------------------------------------------------------

def analyze_ed(backend, p: Fragment, k: int) -> PatternAnalysis:
    """Structural decomposition of p for the edit metric.

    Same sweep as the mismatch analysis, but regions grow error by error
    through the alignment generator, and the backward pass rescans the
    whole pattern against the rotation where the forward alignment ended.
    """
    m = len(p)
    if not 1 <= k <= m:
        raise ContractError("analysis needs 1 <= k <= m")
    if 8 * k > m:
        raise ContractError("analysis needs k <= m/8")
    block = m // (8 * k)
    breaks: list[tuple[int, int]] = []
    regions: list[tuple[int, int, int, int]] = []
    region_total = 0
    j = 0
    while True:
        jp = j + block
        per = period(backend, extract(p, j, jp))
        if per is None or per * 128 * k > m:
            breaks.append((j, block))
            if len(breaks) == 2 * k:
                return Breaks(tuple(breaks))
            j = jp
            continue
        q = per
        qfrag = extract(p, j, j + q)
        gen = EditGenerator(backend, extract(p, j, m), qfrag, 0)
        delta = 0
        qend = 0
        while delta * m < 8 * k * (jp - j) and jp <= m:
            pi, qend = gen.next()
            jp = j + pi + 1
            delta += 1
        if jp <= m:
            regions.append((j, jp - j, j, q))
            region_total += jp - j
            if region_total * 8 >= 3 * m:
                return RepetitiveRegions(tuple(regions))
            j = jp
            continue
        rgen = EditGeneratorR(backend, p, qfrag, qend % q)
        jpp = m
        delta = 0
        while (jpp >= j or delta * m < 8 * k * (m - jpp)) and jpp >= 0:
            pi, _ = rgen.next()
            jpp = m - pi - 1
            delta += 1
        if jpp >= 0:
            return RepetitiveRegions(((jpp, m - jpp, j, q),))
        return ApproxPeriod(j, q)


# -- witnesses and locked fragments -------------------------------------------

def find_a_witness(backend, k: int, q: Fragment, s: Fragment
                   ) -> tuple[int, int, int] | None:
    """A window q^inf[x:y) with delta_E(s, that window) minimal and <= k.

    Returns (x, y, cost) with x normalized into [0, 2|q|), or None when s
    is more than k edits from every substring of q^inf.  Candidate
    rotations come from a voting pass over the first 2k+1 period-length
    blocks of s; short periods (or short s) fall back to trying every
    rotation.
    """
    from .pillar import rotations as _rotations

    nq, ns = len(q), len(s)
    if nq <= 3 * k + 1 or ns < (2 * k + 1) * nq:
        lo, hi = 0, nq - 1
    else:
        votes: list[int] = []
        for i in range(2 * k + 1):
            block = extract(s, i * nq, (i + 1) * nq)
            rot = _rotations(backend, block, q)
            votes.extend(rot)
        votes.sort()
        if len(votes) < k + 1:
            return None
        ext = votes + [v + nq for v in votes]
        arcs: list[tuple[int, int]] = []
        for idx in range(len(votes)):
            if ext[idx + k] - ext[idx] <= k:
                arcs.append((ext[idx + k] - k, ext[idx] + k))
        if not arcs:
            return None
        span = _cover_arc(arcs, nq)
        if span is None:
            lo, hi = 0, nq - 1
        else:
            lo, hi = span
    best: tuple[int, int] | None = None
    for x in range(lo, hi + 1):
        cost = _min_cost_power(backend, s, q, x, k)
        if cost is not None and (best is None or cost < best[1]):
            best = (x, cost)
    if best is None:
        return None
    x, cost = best
    gen = EditGenerator(backend, s, q, x % nq)
    lam = qlam = 0
    for _ in range(cost + 1):
        lam, qlam = gen.next()
    if lam != ns:
        raise AssertionError("witness end search failed to cover the string")
    return (x, x + qlam, cost)


def _cover_arc(arcs: list[tuple[int, int]], nq: int) -> tuple[int, int] | None:
    """Shortest interval (mod nq) covering all arcs, or None if that is all of Z_nq."""
    marks = sorted({(a % nq, (b - a)) for a, b in arcs})
    merged: list[tuple[int, int]] = []
    for start, width in marks:
        merged.append((start, start + width))
    merged.sort()
    # Merge on the circle by doubling.
    doubled = merged + [(a + nq, b + nq) for a, b in merged]
    fused: list[tuple[int, int]] = []
    for a, b in doubled:
        if fused and a <= fused[-1][1] + 1:
            fused[-1] = (fused[-1][0], max(fused[-1][1], b))
        else:
            fused.append((a, b))
    # Find the largest gap between consecutive fused arcs within one period.
    best_gap, best_after = -1, None
    for (a1, b1), (a2, b2) in zip(fused, fused[1:]):
        if a1 >= nq:
            break
        gap = a2 - b1 - 1
        if gap > best_gap:
            best_gap, best_after = gap, (b1, a2)
    if best_after is None or best_gap < 0:
        return None
    start = best_after[1] % nq
    width = nq - 1 - best_gap
    return (start, start + width)


@dataclass(frozen=True)
class LockedFragments:
    """Disjoint fragments (offset, length) of s covering all edit errors
    against powers of q; first is a prefix, last a suffix."""
    items: tuple[tuple[int, int], ...]
    costs: tuple[int, ...] | None = None


def locked(backend, s: Fragment, q: Fragment, d: int, k: int,
           with_costs: bool = False) -> LockedFragments:
    """Compute locked fragments of s with respect to q.

    The optimal alignment from a witness is cut at period boundaries into
    single-period pieces carrying their error counts, then pieces merge:
    adjacent interesting pieces coalesce, and any piece with leftover
    budget swallows a clean period-copy on each side until its budget is
    spent.  The prefix piece starts with budget k+1.
    """
    ns, nq = len(s), len(q)
    w = find_a_witness(backend, d, q, s)
    if w is None:
        raise ContractError("locked() requires the string to be within d edits of a q-power")
    x, _, _ = w
    x %= nq
    gen = EditGenerator(backend, s, q, x)
    pi, qlam = gen.next()
    while pi < ns:
        pi, qlam = gen.next()
    events = gen.alignment() + [(pi, qlam)]

    l_q = x
    r_q = nq * ((x + nq - 1) // nq)
    l_s = 0
    r_s = r_q - l_q
    budget = k + 1
    queue: deque[tuple[int, int, int]] = deque()
    for idx, (sp, qp) in enumerate(events):
        sentinel = idx == len(events) - 1
        if sp is None:
            sp = qp + x + r_s - r_q - 1
        if qp is None:
            qp = sp - x + r_q - r_s - 1
        if x + qp >= r_q:
            lo, hi = min(l_s, ns), min(max(l_s, r_s), ns)
            queue.append((lo, hi, budget))
            new_lq = nq * ((x + qp) // nq)
            l_s = r_s + (new_lq - r_q)
            l_q = new_lq
            r_q = l_q + nq
            budget = 0
        r_s = r_q - x + sp - qp
        if not sentinel:
            budget += 1
    queue.append((min(l_s, ns), ns, budget))

    stack: list[tuple[int, int]] = []
    while queue:
        l, r, budget = queue.popleft()
        while True:
            if stack and stack[-1][1] == l:
                l = stack.pop()[0]
            elif queue and queue[0][0] == r:
                l2, r2, b2 = queue.popleft()
                r = r2
                budget += b2
            elif budget > 0:
                l = max(0, l - nq)
                r = min(ns, r + nq)
                budget -= 1
            else:
                stack.append((l, r))
                break
    items = tuple((l, r - l) for l, r in stack)
    costs = None
    if with_costs:
        vals = []
        for off, ln in items:
            if ln == 0:
                vals.append(0)
                continue
            piece = find_a_witness(backend, d, q, extract(s, off, off + ln))
            vals.append(piece[2] if piece is not None else d + 1)
        costs = tuple(vals)
    return LockedFragments(items, costs)


# -- periodic machinery --------------------------------------------------------

def find_relevant_fragment_ed(backend, p: Fragment, t: Fragment, k: int, d: int,
                              q: Fragment) -> tuple[Fragment | None, tuple[int, int] | None]:
    """Fragment of t holding every k-edit occurrence of p, plus a residue range.

    The returned interval I (closed, in fragment-local coordinates) covers
    occurrence start positions modulo |q|.  Returns (None, None) when the
    text's middle window is not close to any rotation of q.
    """
    m, n, nq = len(p), len(t), len(q)
    if 2 * n >= 3 * m + 2 * k:
        raise ContractError("relevant-fragment scan needs n < 3m/2 + k")
    if n < m - k:
        return (None, None)
    w = find_a_witness(backend, d, q, p)
    if w is None:
        raise ContractError("pattern is not within d edits of a q-power")
    x = w[0]
    mid_lo, mid_hi = max(0, n - m + k), min(n, m - k)
    if mid_lo > mid_hi:
        raise ContractError("text too long relative to the pattern for this scan")
    w2 = find_a_witness(backend, (3 * d) // 2, q, extract(t, mid_lo, mid_hi))
    if w2 is None:
        return (None, None)
    x2, y2, _ = w2
    budget = (3 * d) // 2
    gen = EditGenerator(backend, extract(t, mid_lo, n), q, x2 % nq)
    lam = 0
    for _ in range(budget + 1):
        lam, _ = gen.next()
    r = mid_lo + lam
    rgen = EditGeneratorR(backend, extract(t, 0, mid_hi), q, y2 % nq)
    lam2 = 0
    for _ in range(budget + 1):
        lam2, _ = rgen.next()
    left = mid_hi - lam2
    center = mid_lo - left + x - x2
    return (extract(t, left, r), (center - 3 * d, center + 3 * d))


def _arc_runs(a: int, b: int, ilo: int, ihi: int, nq: int):
    """Maximal subranges of [a,b] whose positions are ≡ [ilo..ihi] (mod nq)."""
    if b < a:
        return
    width = ihi - ilo
    if width >= nq - 1:
        yield (a, b)
        return
    start = a + ((ilo - a) % nq) - nq
    s = start
    while s <= b:
        lo = max(a, s)
        hi = min(b, s + width)
        if lo <= hi:
            yield (lo, hi)
        s += nq


def synched_matches(backend, p: Fragment, t: Fragment, interval: tuple[int, int] | None,
                    k: int, d: int, dp: int, q: Fragment) -> OccurrenceSet:
    """k-edit occurrences of p in t whose starts are ≡ interval (mod |q|).

    Positions near locked fragments of either string (or near the text's
    tail) are verified directly; each remaining stretch is resolved by
    verifying one period-length window and replicating the answer along
    the period grid.
    """
    m, n, nq = len(p), len(t), len(q)
    if interval is None:
        return OccurrenceSet.empty()
    max_start = n - m + k
    if max_start < 0:
        return OccurrenceSet.empty()
    ilo, ihi = interval
    if ihi - ilo + 1 > nq:
        ilo, ihi = 0, nq - 1
    lp = locked(backend, p, q, d, k).items
    lt = locked(backend, t, q, dp, 0).items
    spans: list[tuple[int, int]] = [(n - m - k, n - m + k)]
    for poff, pln in lp:
        pl, pr = poff, poff + pln
        for toff, tln in lt:
            tl, tr = toff, toff + tln
            a, b = tl - pr - k + 1, tr - pl + k - 1
            if a <= b:
                spans.append((a, b))
    clipped = []
    for a, b in spans:
        a, b = max(a, 0), min(b, max_start)
        if a <= b:
            clipped.append((a, b))
    clipped.sort()
    marked: list[tuple[int, int]] = []
    for a, b in clipped:
        if marked and a <= marked[-1][1] + 1:
            marked[-1] = (marked[-1][0], max(marked[-1][1], b))
        else:
            marked.append((a, b))
    positions: list[int] = []
    for a, b in marked:
        for lo, hi in _arc_runs(a, b, ilo, ihi, nq):
            positions.extend(e.position for e in verify_ed(backend, p, t, k, (lo, hi)))
    # Unmarked stretches: one period window decides the whole stretch.
    cursor = 0
    gaps: list[tuple[int, int]] = []
    for a, b in marked:
        if cursor <= a - 1:
            gaps.append((cursor, a - 1))
        cursor = b + 1
    if cursor <= max_start:
        gaps.append((cursor, max_start))
    for a, b in gaps:
        probe_hi = min(b, a + nq - 1)
        for lo, hi in _arc_runs(a, probe_hi, ilo, ihi, nq):
            for entry in verify_ed(backend, p, t, k, (lo, hi)):
                positions.extend(range(entry.position, b + 1, nq))
    return OccurrenceSet.from_positions(positions)


def _clip_progressions(occ: OccurrenceSet, shift: int, lo: int, hi: int | None
                       ) -> list[ArithmeticProgression]:
    out = []
    for prog in occ.progressions:
        first = prog.first + shift
        last = first + (prog.count - 1) * prog.diff
        a = max(first, lo)
        b = last if hi is None else min(last, hi - 1)
        if a > b:
            continue
        steps_in = -(-(a - first) // prog.diff)
        a = first + steps_in * prog.diff
        if a > b:
            continue
        count = (b - a) // prog.diff + 1
        out.append(ArithmeticProgression(a, prog.diff, count))
    return out


def periodic_matches_ed(backend, p: Fragment, t: Fragment, k: int, d: int,
                        q: Fragment) -> OccurrenceSet:
    """All k-edit occurrences when p is within d edits of a power of q."""
    m, n, nq = len(p), len(t), len(q)
    if d < max(1, 2 * k):
        raise ContractError("periodic matching needs d >= 2k, d >= 1")
    if 8 * d * nq > m:
        raise ContractError("periodic matching needs |q| <= m/(8d)")
    if n < m - k:
        return OccurrenceSet.empty()
    progs: list[ArithmeticProgression] = []
    blocks = max(1, (2 * n) // m)
    for i in range(blocks):
        lo = (i * m) // 2
        hi = min(n, ((i + 3) * m) // 2 + k - 1)
        if hi - lo < m - k:
            continue
        frag, interval = find_relevant_fragment_ed(backend, p, extract(t, lo, hi), k, d, q)
        if frag is None or len(frag) == 0:
            continue
        occ = synched_matches(backend, p, frag, interval, k, d, 3 * d, q)
        base = frag.start - t.start
        if i < blocks - 1:
            progs.extend(_clip_progressions(occ, base, lo, ((i + 1) * m) // 2))
        else:
            progs.extend(_clip_progressions(occ, base, lo, None))
    return OccurrenceSet.from_progressions(progs)


# -- marking drivers ------------------------------------------------------------

def break_matches_ed(backend, p: Fragment, t: Fragment, analysis: Breaks, k: int) -> OccurrenceSet:
    """Block-marking driver for patterns with 2k aperiodic breaks."""
    m, n = len(p), len(t)
    max_start = n - m + k
    if max_start < 0:
        return OccurrenceSet.empty()
    marks: Counter[int] = Counter()
    top_block = max_start // k
    for off, ln in analysis.items:
        b = extract(p, off, off + ln)
        for tau in exact_matches(backend, b, t):
            for shift in (-k, 0, k, 2 * k):
                blk = (tau - off + shift) // k
                if 0 <= blk <= top_block:
                    marks[blk] += 1
    positions = []
    for blk, c in sorted(marks.items()):
        if c < k:
            continue
        lo, hi = blk * k, min((blk + 1) * k - 1, max_start)
        positions.extend(e.position for e in verify_ed(backend, p, t, k, (lo, hi)))
    return OccurrenceSet.from_positions(positions)


def repetitive_matches_ed(backend, p: Fragment, t: Fragment,
                          analysis: RepetitiveRegions, k: int) -> OccurrenceSet:
    """Weighted block-marking driver over repetitive regions."""
    m, n = len(p), len(t)
    max_start = n - m + k
    if max_start < 0:
        return OccurrenceSet.empty()
    m_r = sum(ln for _, ln, _, _ in analysis.items)
    weights: Counter[int] = Counter()
    top_block = max_start // k
    for off, ln, qoff, qln in analysis.items:
        k_i = (MARK_DIV * k * ln) // m
        d_i = -(-8 * k * ln // m)
        sub = periodic_matches_ed(backend, extract(p, off, off + ln), t, k_i, d_i,
                                  extract(p, qoff, qoff + qln))
        blocks_hit = set()
        for tau in sub.positions():
            for shift in (-k, 0, k, 2 * k):
                blk = (tau - off + shift) // k
                if 0 <= blk <= top_block:
                    blocks_hit.add(blk)
        for blk in blocks_hit:
            weights[blk] += ln
    positions = []
    for blk, wgt in sorted(weights.items()):
        if MARK_DIV * wgt < MARK_DIV * m_r - m:
            continue
        lo, hi = blk * k, min((blk + 1) * k - 1, max_start)
        positions.extend(e.position for e in verify_ed(backend, p, t, k, (lo, hi)))
    return OccurrenceSet.from_positions(positions)


# -- top level -------------------------------------------------------------------

def _dense_edit_scan(backend, p: Fragment, t: Fragment, k: int) -> OccurrenceSet:
    # Large-k route: reversed semi-global alignment, free start on the text
    # side; row-wise vectorized over text positions.
    pb = np.frombuffer(backend.bytes_of(p), dtype=np.uint8)[::-1]
    tb = np.frombuffer(backend.bytes_of(t), dtype=np.uint8)[::-1]
    m, n = len(pb), len(tb)
    row = np.zeros(n + 1, dtype=np.int32)
    steps = np.arange(n + 1, dtype=np.int32)
    for i in range(1, m + 1):
        nxt = np.empty(n + 1, dtype=np.int32)
        nxt[0] = i
        sub = row[:-1] + (tb != pb[i - 1])
        dele = row[1:] + 1
        tmp = np.minimum(sub, dele)
        nxt[1:] = tmp
        # horizontal insertions: prefix-min along increasing cost slope
        shifted = np.minimum.accumulate(nxt - steps)
        np.minimum(nxt, shifted + steps, out=nxt)
        row = nxt
    ends = np.flatnonzero(row <= k)
    return OccurrenceSet.from_positions((n - ends).tolist())


def edit_occurrences(backend, p: Fragment, t: Fragment, k: int,
                     analysis: PatternAnalysis | None = None) -> OccurrenceSet:
    """All positions i (0..n) where some t[i:j) is within k edits of p."""
    m, n = len(p), len(t)
    if m < 1:
        raise ContractError("pattern must be nonempty")
    if not 0 <= k <= m:
        raise ContractError("threshold must satisfy 0 <= k <= m")
    if n < m - k:
        return OccurrenceSet.empty()
    if k == 0:
        return exact_matches(backend, p, t)
    if 8 * k > m:
        return _dense_edit_scan(backend, p, t, k)
    if analysis is None:
        analysis = analyze_ed(backend, p, k)
    if isinstance(analysis, ApproxPeriod):
        return periodic_matches_ed(backend, p, t, k, 8 * k,
                                   extract(p, analysis.q_offset,
                                           analysis.q_offset + analysis.q_length))
    progs: list[ArithmeticProgression] = []
    blocks = max(1, (2 * n) // m)
    for i in range(blocks):
        lo = (i * m) // 2
        hi = min(n, ((i + 3) * m) // 2 - 1 + k)
        if hi - lo < m - k:
            continue
        block = extract(t, lo, hi)
        if isinstance(analysis, Breaks):
            occ = break_matches_ed(backend, p, block, analysis, k)
        else:
            occ = repetitive_matches_ed(backend, p, block, analysis, k)
        if i < blocks - 1:
            progs.extend(_clip_progressions(occ, lo, lo, ((i + 1) * m) // 2))
        else:
            progs.extend(_clip_progressions(occ, lo, lo, None))
    return OccurrenceSet.from_progressions(progs)
