"""Brute-force reference implementations, straight from the definitions.

These share no code with the main algorithms; every value is produced by
direct counting or a dynamic program over the full search space.  Tests
treat them as ground truth.
"""

from __future__ import annotations

import numpy as np


def brute_hd_occurrences(pattern: bytes, text: bytes, k: int) -> set[int]:
    """{ i : Hamming distance of pattern and text[i:i+m) is <= k }."""
    m, n = len(pattern), len(text)
    if m == 0 or n < m:
        return set()
    p = np.frombuffer(pattern, dtype=np.uint8)
    t = np.frombuffer(text, dtype=np.uint8)
    windows = np.lib.stride_tricks.sliding_window_view(t, m)
    dist = (windows != p).sum(axis=1)
    return set(np.flatnonzero(dist <= k).tolist())


def brute_ed_occurrences(pattern: bytes, text: bytes, k: int) -> set[int]:
    """{ i : some text[i:j) is within k edits of pattern }.

    Per-start banded dynamic program with 2k+1 diagonals, all starts
    advanced in lockstep.  Start position n (empty suffix) qualifies when
    m <= k.
    """
    m, n = len(pattern), len(text)
    if m == 0:
        return set(range(n + 1))
    p = np.frombuffer(pattern, dtype=np.uint8).astype(np.int16)
    t = np.frombuffer(text, dtype=np.uint8).astype(np.int16)
    width = 2 * k + 1
    big = np.int32(1 << 20)
    # band[s, o] = edit cost of pattern[0:i) vs text[s : s+i+o-k); the text is
    # padded with a never-matching sentinel, which cannot beat any real path
    # (consuming a sentinel costs 1, no less than stopping early).
    band = np.full((n + 1, width), big, dtype=np.int32)
    offs = np.arange(width, dtype=np.int32) - k
    band[:, k:] = offs[k:]
    tpad = np.full(n + m + 2 * k + 2, -1, dtype=np.int16)
    tpad[k + 1:k + 1 + n] = t
    # windows[s, o] aligned so that row i reads tpad at s + (i + o - k - 1) + k+1
    windows = np.lib.stride_tricks.sliding_window_view(tpad, width)
    for i in range(1, m + 1):
        prev = band
        band = np.empty((n + 1, width), dtype=np.int32)
        tchar = windows[i:i + n + 1]
        band[:, :] = prev + (tchar != p[i - 1])       # substitution
        band[:, :-1] = np.minimum(band[:, :-1], prev[:, 1:] + 1)  # pattern-char deletion
        lowest = i + offs[0]
        if lowest < 0:
            band[:, k - i] = i  # all-deletions corner enters the band
        for o in range(1, width):                      # text-char insertion chain
            np.minimum(band[:, o], band[:, o - 1] + 1, out=band[:, o])
    hits = (band <= k).any(axis=1)
    return set(np.flatnonzero(hits).tolist())


def edit_distance(a: bytes, b: bytes) -> int:
    """Plain quadratic edit distance."""
    la, lb = len(a), len(b)
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        ai = a[i - 1]
        for j in range(1, lb + 1):
            cur[j] = min(prev[j - 1] + (ai != b[j - 1]), prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[lb]


def brute_edl(s: bytes, q: bytes) -> int:
    """Minimum edit distance of s to any substring of q^inf.

    Tries every phase of q as the window start; a window of length
    2|s| + |q| always contains an optimal witness, since longer windows
    only force extra deletions.
    """
    if len(q) < 1:
        raise ValueError("period string must be nonempty")
    ns, nq = len(s), len(q)
    window = 2 * ns + nq
    reps = -(-(window + nq) // nq) + 1
    qq = q * reps
    best = ns  # empty-window witness: delete everything
    sarr = np.frombuffer(s, dtype=np.uint8).astype(np.int16)
    for phase in range(nq):
        w = np.frombuffer(qq[phase:phase + window], dtype=np.uint8).astype(np.int16)
        nw = len(w)
        row = np.arange(nw + 1, dtype=np.int32)  # delete-window-prefix costs? no:
        # row[j] = delta_E(s[0:0), w[0:j)) = j
        for i in range(1, ns + 1):
            nxt = np.empty(nw + 1, dtype=np.int32)
            nxt[0] = i
            diag = row[:-1] + (w != sarr[i - 1])
            up = row[1:] + 1
            tmp = np.minimum(diag, up)
            nxt[1:] = tmp
            steps = np.arange(nw + 1, dtype=np.int32)
            acc = np.minimum.accumulate(nxt - steps)
            np.minimum(nxt, acc + steps, out=nxt)
            row = nxt
        best = min(best, int(row.min()))
    return best
