"""Fully-compressed matching: count and report approximate occurrences of an
SLP-generated pattern inside an SLP-generated text without decompressing the
text.

Every binary rule A -> BC is examined once through a short window around
the B/C boundary; occurrences first witnessed inside that window (and not
already witnessed inside B alone) are charged to A.  A dynamic program over
the rule DAG then turns per-symbol crossing counts into the total, and a
count-pruned parse-tree walk reports positions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .edit import edit_occurrences
from .hamming import mismatch_occurrences
from .pillar import ContractError, OccurrenceSet, extract
from .slp import Slp
from .standard import StandardBackend

HAMMING = "hamming"
EDIT = "edit"


class PatternBundle:
    """Decompressed pattern plus cached structural analyses."""

    def __init__(self, g_p: Slp):
        self.grammar = g_p
        self.data = g_p.extract(0, g_p.length)
        self._analyses: dict[tuple[str, int], object] = {}

    def analysis(self, metric: str, k: int):
        key = (metric, k)
        if key not in self._analyses:
            if k == 0 or 8 * k > len(self.data):
                self._analyses[key] = None
            else:
                from .edit import analyze_ed
                from .hamming import analyze_hd
                backend = StandardBackend([self.data])
                fn = analyze_hd if metric == HAMMING else analyze_ed
                self._analyses[key] = fn(backend, backend.handle(0), k)
        return self._analyses[key]


def build_pattern_once(g_p: Slp) -> PatternBundle:
    if g_p.length < 1:
        raise ContractError("pattern grammar generates the empty string")
    return PatternBundle(g_p)


def _matcher(metric: str):
    if metric == HAMMING:
        return mismatch_occurrences
    if metric == EDIT:
        return edit_occurrences
    raise ContractError(f"unknown metric {metric!r}")


def _terminal_count(byte: int, pattern: bytes, k: int, metric: str) -> int:
    m = len(pattern)
    if metric == HAMMING:
        return 1 if m == 1 and (k >= 1 or pattern[0] == byte) else 0
    slack = 1 if byte in pattern else 0
    return 1 if m - slack <= k else 0


def _crossing_positions(g_t: Slp, sym: int, bundle: PatternBundle, k: int,
                        metric: str) -> list[int]:
    """Occurrence starts charged to rule sym (A -> BC), local to gen(A)."""
    t = g_t.t
    left, right = t.left[sym], t.right[sym]
    m = len(bundle.data)
    pad = k if metric == EDIT else 0
    beta = t.length[left]
    bl = min(beta, m - 1 + pad)
    cl = min(t.length[right], m - 1 + pad)
    if bl == 0:
        return []
    window = g_t.extract(beta - bl, beta + cl, root=sym)
    backend = StandardBackend([bundle.data, window])
    p = backend.handle(0)
    w = backend.handle(1)
    match = _matcher(metric)
    analysis = bundle.analysis(metric, k)
    occ = match(backend, p, w, k, analysis) if analysis is not None else match(backend, p, w, k)
    starts = [pos for pos in occ.positions() if pos < bl]
    if metric == EDIT and starts:
        inside = match(backend, p, extract(w, 0, bl), k, analysis) \
            if analysis is not None else match(backend, p, extract(w, 0, bl), k)
        drop = {pos for pos in inside.positions() if pos < bl}
        starts = [pos for pos in starts if pos not in drop]
    base = beta - bl
    return [base + pos for pos in starts]


def _per_symbol(g_t: Slp, bundle: PatternBundle, k: int, metric: str,
                jobs: int = 1) -> tuple[dict[int, int], dict[int, list[int]]]:
    t = g_t.t
    n_sym = g_t.n_symbols
    binary = [a for a in range(n_sym) if t.left[a] >= 0]
    crossing: dict[int, list[int]] = {}
    bundle.analysis(metric, k)  # warm the cache before any worker threads start
    if jobs > 1 and len(binary) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for sym, res in zip(binary, pool.map(
                    lambda a: _crossing_positions(g_t, a, bundle, k, metric), binary)):
                crossing[sym] = res
    else:
        for sym in binary:
            crossing[sym] = _crossing_positions(g_t, sym, bundle, k, metric)
    counts: dict[int, int] = {}
    order = Slp._toposort(t.left, t.right)
    for sym in order:
        if t.left[sym] < 0:
            counts[sym] = _terminal_count(t.byte[sym], bundle.data, k, metric)
        else:
            counts[sym] = counts[t.left[sym]] + counts[t.right[sym]] + len(crossing[sym])
    return counts, crossing


def count_occurrences_compressed(g_t: Slp, g_p: Slp, k: int, metric: str,
                                 jobs: int = 1) -> int:
    """|Occ_k| of gen(g_p) in gen(g_t) for the chosen metric."""
    bundle = build_pattern_once(g_p)
    if not 0 <= k <= len(bundle.data):
        raise ContractError("threshold must satisfy 0 <= k <= |pattern|")
    counts, _ = _per_symbol(g_t, bundle, k, metric, jobs)
    total = counts[g_t.start]
    if metric == EDIT and len(bundle.data) <= k:
        total += 1  # the empty suffix at position |text|
    return total


def report_occurrences_compressed(g_t: Slp, g_p: Slp, k: int, metric: str,
                                  jobs: int = 1) -> OccurrenceSet:
    """Absolute occurrence positions in gen(g_t), skipping barren subtrees."""
    bundle = build_pattern_once(g_p)
    if not 0 <= k <= len(bundle.data):
        raise ContractError("threshold must satisfy 0 <= k <= |pattern|")
    counts, crossing = _per_symbol(g_t, bundle, k, metric, jobs)
    t = g_t.t
    positions: list[int] = []
    stack = [(g_t.start, 0)]
    while stack:
        sym, off = stack.pop()
        if counts[sym] == 0:
            continue
        if t.left[sym] < 0:
            positions.append(off)
            continue
        for pos in crossing[sym]:
            positions.append(off + pos)
        l = t.left[sym]
        stack.append((t.right[sym], off + t.length[l]))
        stack.append((l, off))
    if metric == EDIT and len(bundle.data) <= k:
        positions.append(g_t.length)
    return OccurrenceSet.from_positions(positions)
