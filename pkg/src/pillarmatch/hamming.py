"""Pattern matching with up to k mismatches.

The pipeline: analyze the pattern once (breaks / repetitive regions /
approximate period), split the text into overlapping blocks of length
< 3m/2, and solve each block with the driver matching the pattern's
structure.  Occurrence sets come back as arithmetic progressions with the
approximate period's length as the difference whenever the pattern is
nearly periodic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .pillar import (ArithmeticProgression, ContractError, Fragment, OccurrenceSet,
                     equal, exact_matches, extract, lcp_power, period, rotations)

# Constants wired to the inequalities the drivers rely on:
#  - break length m//(8k), break period threshold m/(128k)
#  - repetitive regions stop at total length >= (3/8)m
#  - region sub-budget k_i = floor(4k|R|/m); 8k|R|/m >= 1 gives d_i >= 2k_i,
#    and the mark threshold m_R - m/4 stays >= m/8 > 0.
BREAK_DIV = 8
PERIOD_DIV = 128
REGION_NUM, REGION_DEN = 3, 8
MARK_DIV = 4


class MismatchGenerator:
    """Yields Mis(s, q^inf[offset:]) positions in increasing order.

    next() returns the next mismatch position in s, or None once exhausted;
    further calls keep returning None.
    """

    def __init__(self, backend, s: Fragment, q: Fragment, offset: int = 0):
        self.backend = backend
        self.s = s
        self.q = q
        self.offset = offset
        self.i = 0
        self.exhausted = False

    def next(self) -> int | None:
        if self.exhausted or self.i >= len(self.s):
            self.exhausted = True
            return None
        rest = extract(self.s, self.i, len(self.s))
        pi = lcp_power(self.backend, rest, self.q,
                       self.offset + self.i, self.offset + len(self.s))
        pos = self.i + pi
        if pos >= len(self.s):
            self.exhausted = True
            return None
        self.i = pos + 1
        return pos

    def __iter__(self):
        while (pos := self.next()) is not None:
            yield pos


class MismatchGeneratorR:
    """Mismatches of s against q^inf aligned to end at s's right edge.

    Positions come back in s's forward coordinates, in decreasing order.
    end_offset rotates the alignment: position |s| of s corresponds to
    q^inf position end_offset (mod |q|).
    """

    def __init__(self, backend, s: Fragment, q: Fragment, end_offset: int = 0):
        rs = backend.reversed_fragment(s)
        rq = backend.reversed_fragment(q)
        self._n = len(s)
        self._fwd = MismatchGenerator(backend, rs, rq, (-end_offset) % len(q))

    def next(self) -> int | None:
        pos = self._fwd.next()
        if pos is None:
            return None
        return self._n - 1 - pos

    def __iter__(self):
        while (pos := self.next()) is not None:
            yield pos


def mism_generator(backend, s: Fragment, q: Fragment, rotation: int = 0) -> MismatchGenerator:
    """Generator over Mis(s, rot^rotation(q)*)."""
    if len(q) < 1:
        raise ContractError("mismatch generator needs a nonempty period")
    return MismatchGenerator(backend, s, q, (-rotation) % len(q))


def mismatches(backend, s: Fragment, q: Fragment, rotation: int = 0) -> list[int]:
    """All of Mis(s, rot^rotation(q)*), materialized."""
    return list(mism_generator(backend, s, q, rotation))


def verify_hd(backend, s: Fragment, t: Fragment, k: int) -> bool:
    """Hamming distance of equal-length fragments at most k? Stops early."""
    if len(s) != len(t):
        raise ContractError("verify_hd needs equal lengths")
    n = len(s)
    i = 0
    budget = k
    while True:
        i += backend.lcp(extract(s, i, n), extract(t, i, n))
        if i >= n:
            return True
        if budget == 0:
            return False
        budget -= 1
        i += 1


# -- pattern analysis --------------------------------------------------------

@dataclass(frozen=True)
class Breaks:
    """2k disjoint aperiodic anchors; items are (offset, length) pairs."""
    items: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class RepetitiveRegions:
    """Disjoint near-periodic stretches; items are
    (offset, length, period_offset, period_length)."""
    items: tuple[tuple[int, int, int, int], ...]


@dataclass(frozen=True)
class ApproxPeriod:
    """The whole pattern is close to a power of p[q_offset:q_offset+q_length)."""
    q_offset: int
    q_length: int


PatternAnalysis = Breaks | RepetitiveRegions | ApproxPeriod


def analyze_hd(backend, p: Fragment, k: int) -> PatternAnalysis:
    """Left-to-right structural decomposition of the pattern.

    Fragments of length m//(8k) become breaks when their period exceeds
    m/(128k); otherwise they grow rightward (mismatch by mismatch against
    the fragment's own period) into repetitive regions whose mismatch count
    exactly meets the density ceiling.  Running off the pattern's end turns
    into a backward extension and either one long suffix region or an
    approximate period for the whole pattern.
    """
    m = len(p)
    if not 1 <= k <= m:
        raise ContractError("analysis needs 1 <= k <= m")
    if 8 * k > m:
        raise ContractError("analysis needs k <= m/8")
    block = m // (BREAK_DIV * k)
    breaks: list[tuple[int, int]] = []
    regions: list[tuple[int, int, int, int]] = []
    region_total = 0
    j = 0
    while True:
        jp = j + block
        per = period(backend, extract(p, j, jp))
        if per is None or per * PERIOD_DIV * k > m:
            breaks.append((j, block))
            if len(breaks) == 2 * k:
                return Breaks(tuple(breaks))
            j = jp
            continue
        q = per
        qfrag = extract(p, j, j + q)
        gen = MismatchGenerator(backend, extract(p, j, m), qfrag, 0)
        delta = 0
        while delta * m < 8 * k * (jp - j):
            pi = gen.next()
            if pi is None:
                break
            jp = j + pi + 1
            delta += 1
        if delta * m >= 8 * k * (jp - j):
            regions.append((j, jp - j, j, q))
            region_total += jp - j
            if region_total * REGION_DEN >= REGION_NUM * m:
                return RepetitiveRegions(tuple(regions))
            j = jp
            continue
        # Reached the end of p; extend leftward from j with the same alignment.
        jpp = j
        rgen = MismatchGeneratorR(backend, extract(p, 0, j), qfrag, 0)
        while delta * m < 8 * k * (m - jpp):
            pi = rgen.next()
            if pi is None:
                jpp = 0
                break
            jpp = pi
            delta += 1
        if delta * m >= 8 * k * (m - jpp):
            # Suffix region anchored at jpp: rotate q to start there.
            qa = j + ((jpp - j) % q)
            return RepetitiveRegions(((jpp, m - jpp, qa, q),))
        qa = j + ((-j) % q)
        return ApproxPeriod(qa, q)


def find_rotation(backend, k: int, q: Fragment, s: Fragment) -> int | None:
    """The unique j with delta_H(s, rot^j(q)*) <= k, or None.

    Boyer-Moore majority over the first 2k+1 length-|q| blocks of s, then a
    global mismatch count and a rotation lookup.
    """
    nq = len(q)
    if len(s) < (2 * k + 1) * nq:
        raise ContractError("find_rotation needs |s| >= (2k+1)|q|")
    blocks = [extract(s, i * nq, (i + 1) * nq) for i in range(2 * k + 1)]
    cand = None
    votes = 0
    for b in blocks:
        if votes == 0:
            cand, votes = b, 1
        elif equal(backend, cand, b):
            votes += 1
        else:
            votes -= 1
    support = sum(1 for b in blocks if equal(backend, cand, b))
    if 2 * support <= len(blocks):
        return None
    gen = MismatchGenerator(backend, s, cand, 0)
    seen = 0
    while seen <= k:
        if gen.next() is None:
            break
        seen += 1
    if seen > k:
        return None
    rots = rotations(backend, q, cand)
    if rots.count == 0:
        return None
    return rots.first


def find_relevant_fragment_hd(backend, p: Fragment, t: Fragment, d: int, q: Fragment) -> Fragment:
    """Fragment of t containing every near-occurrence of p, grid-aligned.

    Starting from the middle window t[n-m:m), locks the rotation of q that
    any occurrence must follow, then extends right and left until the
    mismatch budget 3d/2 is exceeded on each side.  Returns an empty
    fragment when no rotation fits.
    """
    m, n = len(p), len(t)
    nq = len(q)
    if 2 * n > 3 * m:
        raise ContractError("relevant-fragment scan needs n <= 3m/2")
    if n < m:
        return extract(t, 0, 0)
    budget = (3 * d) // 2
    j = find_rotation(backend, budget, q, extract(t, n - m, m))
    if j is None:
        return extract(t, 0, 0)
    anchor = n - m + j
    r = anchor
    delta = 0
    gen = MismatchGenerator(backend, extract(t, anchor, n), q, 0)
    while True:
        if delta > budget:
            break
        pi = gen.next()
        if pi is None:
            r = n
            break
        r = anchor + pi
        delta += 1
    base = anchor % nq
    left = anchor
    delta = 0
    rgen = MismatchGeneratorR(backend, extract(t, base, anchor), q, 0)
    while True:
        if delta > budget:
            break
        pi = rgen.next()
        if pi is None:
            left = base
            break
        left = base + nq * ((pi + nq) // nq)  # first grid point past the mismatch
        delta += 1
    return extract(t, left, r)


def distances_rle(backend, p: Fragment, t: Fragment, q: Fragment) -> list[tuple[int, int]]:
    """Run-length encoded h_j = delta_H(t[j|q| : j|q|+m), p), j = 0..(n-m)/|q|.

    One weighted-event sweep: each text mismatch opens/closes a sliding
    window event, and each (text, pattern) mismatch pair cancels marks where
    the two mismatches coincide.
    """
    m, n, nq = len(p), len(t), len(q)
    if n < m:
        return []
    mis_p = mismatches(backend, p, q)
    mis_t = mismatches(backend, t, q)
    events: list[tuple[int, int]] = []
    pchak = [backend.access(p, pi) for pi in mis_p]
    for tau in mis_t:
        events.append((tau - m, 1))
        events.append((tau, -1))
        tch = backend.access(t, tau)
        for pi, pch in zip(mis_p, pchak):
            a = 0 if pch == tch else 1
            events.append((tau - pi - 1, a - 2))
            events.append((tau - pi, 2 - a))
    events.sort()
    h = len(mis_p)
    idx = 0
    while idx < len(events) and events[idx][0] < 0:
        h += events[idx][1]
        idx += 1
    runs: list[tuple[int, int]] = []

    def emit(value: int, count: int) -> None:
        if count <= 0:
            return
        if runs and runs[-1][0] == value:
            runs[-1] = (value, runs[-1][1] + count)
        else:
            runs.append((value, count))

    cursor = 0
    limit = n - m
    while idx < len(events) and events[idx][0] < limit:
        pos, w = events[idx]
        emit(h, (pos + nq) // nq - (cursor + nq - 1) // nq)
        cursor = pos + 1
        h += w
        idx += 1
    emit(h, (limit + nq) // nq - (cursor + nq - 1) // nq)
    return runs


def periodic_matches_hd(backend, p: Fragment, t: Fragment, k: int, d: int, q: Fragment) -> OccurrenceSet:
    """All k-mismatch occurrences when p is within d mismatches of a power of q."""
    m, n, nq = len(p), len(t), len(q)
    if d < max(1, 2 * k):
        raise ContractError("periodic matching needs d >= 2k, d >= 1")
    if 8 * d * nq > m:
        raise ContractError("periodic matching needs |q| <= m/(8d)")
    if n < m:
        return OccurrenceSet.empty()
    progs: list[ArithmeticProgression] = []
    blocks = max(1, (2 * n) // m)
    for i in range(blocks):
        lo = (i * m) // 2
        hi = min(n, ((i + 3) * m) // 2 - 1)
        if hi - lo < m:
            continue
        frag = find_relevant_fragment_hd(backend, p, extract(t, lo, hi), d, q)
        if len(frag) < m:
            continue
        base = frag.start - t.start
        jq = 0
        for value, count in distances_rle(backend, p, frag, q):
            if value <= k:
                progs.append(ArithmeticProgression(base + jq * nq, nq, count))
            jq += count
    return OccurrenceSet.from_progressions(progs)


def break_matches_hd(backend, p: Fragment, t: Fragment, analysis: Breaks, k: int) -> OccurrenceSet:
    """Marking driver for patterns with 2k aperiodic breaks."""
    m, n = len(p), len(t)
    if n < m:
        return OccurrenceSet.empty()
    marks: Counter[int] = Counter()
    for off, ln in analysis.items:
        b = extract(p, off, off + ln)
        for tau in exact_matches(backend, b, t):
            pos = tau - off
            if 0 <= pos <= n - m:
                marks[pos] += 1
    out = [pos for pos, c in sorted(marks.items())
           if c >= k and verify_hd(backend, p, extract(t, pos, pos + m), k)]
    return OccurrenceSet.from_positions(out)


def repetitive_matches_hd(backend, p: Fragment, t: Fragment,
                          analysis: RepetitiveRegions, k: int) -> OccurrenceSet:
    """Weighted-marking driver for patterns covered by repetitive regions."""
    m, n = len(p), len(t)
    if n < m:
        return OccurrenceSet.empty()
    m_r = sum(ln for _, ln, _, _ in analysis.items)
    weights: Counter[int] = Counter()
    for off, ln, qoff, qln in analysis.items:
        k_i = (MARK_DIV * k * ln) // m
        d_i = -(-8 * k * ln // m)
        sub = periodic_matches_hd(backend, extract(p, off, off + ln), t, k_i, d_i,
                                  extract(p, qoff, qoff + qln))
        for tau in sub.positions():
            pos = tau - off
            if 0 <= pos <= n - m:
                weights[pos] += ln
    out = [pos for pos, w in sorted(weights.items())
           if MARK_DIV * w >= MARK_DIV * m_r - m
           and verify_hd(backend, p, extract(t, pos, pos + m), k)]
    return OccurrenceSet.from_positions(out)


def _dense_mismatch_scan(backend, p: Fragment, t: Fragment, k: int) -> OccurrenceSet:
    # Large-k route (k > m/8): accumulate mismatch counts per pattern column.
    pb = np.frombuffer(backend.bytes_of(p), dtype=np.uint8)
    tb = np.frombuffer(backend.bytes_of(t), dtype=np.uint8)
    m, n = len(pb), len(tb)
    width = n - m + 1
    counts = np.zeros(width, dtype=np.int32)
    for r in range(m):
        counts += tb[r:r + width] != pb[r]
    return OccurrenceSet.from_positions(np.flatnonzero(counts <= k))


def mismatch_occurrences(backend, p: Fragment, t: Fragment, k: int,
                         analysis: PatternAnalysis | None = None) -> OccurrenceSet:
    """All positions i with delta_H(p, t[i:i+m)) <= k, exactly."""
    m, n = len(p), len(t)
    if m < 1:
        raise ContractError("pattern must be nonempty")
    if not 0 <= k <= m:
        raise ContractError("threshold must satisfy 0 <= k <= m")
    if n < m:
        return OccurrenceSet.empty()
    if k == 0:
        return exact_matches(backend, p, t)
    if 8 * k > m:
        return _dense_mismatch_scan(backend, p, t, k)
    if analysis is None:
        analysis = analyze_hd(backend, p, k)
    progs: list[ArithmeticProgression] = []
    blocks = max(1, (2 * n) // m)
    for i in range(blocks):
        lo = (i * m) // 2
        hi = min(n, ((i + 3) * m) // 2 - 1)
        if hi - lo < m:
            continue
        block = extract(t, lo, hi)
        if isinstance(analysis, Breaks):
            occ = break_matches_hd(backend, p, block, analysis, k)
        elif isinstance(analysis, RepetitiveRegions):
            occ = repetitive_matches_hd(backend, p, block, analysis, k)
        else:
            occ = periodic_matches_hd(backend, p, block, k, 8 * k,
                                      extract(p, analysis.q_offset,
                                              analysis.q_offset + analysis.q_length))
        for prog in occ.progressions:
            progs.append(ArithmeticProgression(prog.first + lo, prog.diff, prog.count))
    return OccurrenceSet.from_progressions(progs)
