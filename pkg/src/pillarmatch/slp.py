"""Straight-line programs: parsing, random access, extraction, and
fingerprint-based longest-common-extension queries.

A grammar is a list of symbols, each either a single byte or a pair of
earlier/later symbols, in Chomsky normal form after loading.  Expansion
lengths, parse-tree depths, and rolling fingerprints of every symbol are
precomputed bottom-up; a prefix fingerprint of the generated string is then
one root-to-position descent, and lcp queries between arbitrary fragments
(even of different grammars) are answered by doubling + binary search over
fingerprint comparisons, with the final boundary character checked by
direct access.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .pillar import ArithmeticProgression, ContractError, EMPTY_PROGRESSION, Fragment, \
    _progression_from_sorted

MAX_LEN = (1 << 63) - 1
_FIELD = (1 << 61) - 1
_DEFAULT_SEED = 0x5EED_C0DE


class SlpFormatError(ValueError):
    """Malformed grammar file; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class _SymbolError(ContractError):
    """Grammar validation failure attributable to one symbol."""

    def __init__(self, message: str, symbol: int):
        super().__init__(message)
        self.symbol = symbol


class _FingerprintParams:
    def __init__(self, seed: int):
        rng = random.Random(seed)
        self.seed = seed
        self.bases = (rng.randrange(256, _FIELD - 1), rng.randrange(256, _FIELD - 1))


_params: _FingerprintParams | None = None


def fingerprint_params() -> _FingerprintParams:
    global _params
    if _params is None:
        env = os.environ.get("PM_SEED")
        _params = _FingerprintParams(int(env) if env else _DEFAULT_SEED)
    return _params


def set_fingerprint_seed(seed: int) -> None:
    """Fix the fingerprint bases; affects grammars built afterwards."""
    global _params
    _params = _FingerprintParams(seed)


@dataclass
class _SymbolTables:
    # per symbol, index 0-based; terminals have left == -1 and byte >= 0
    left: list[int]
    right: list[int]
    byte: list[int]
    length: list[int]
    depth: list[int]
    fp: list[tuple[int, int]]
    pw: list[tuple[int, int]]


class Slp:
    """A straight-line program plus cached per-symbol tables."""

    def __init__(self, left: list[int], right: list[int], byte: list[int], start: int,
                 params: _FingerprintParams | None = None):
        self.params = params or fingerprint_params()
        self.start = start
        order = self._toposort(left, right)
        tables = self._build_tables(left, right, byte, order, self.params)
        self.t = tables
        self.n_symbols = len(left)
        self.length = tables.length[start]
        self.depth = tables.depth[start]
        self._rev: Slp | None = None

    # -- construction --------------------------------------------------------

    @staticmethod
    def _toposort(left: list[int], right: list[int]) -> list[int]:
        n = len(left)
        indeg = [0] * n
        for a in range(n):
            if left[a] >= 0:
                indeg[left[a]] += 1
                indeg[right[a]] += 1
        # Kahn over reversed edges: process a symbol once all its users are done.
        ready = [a for a in range(n) if indeg[a] == 0]
        seen = 0
        order_rev: list[int] = []
        indeg2 = indeg[:]
        stack = ready[:]
        while stack:
            a = stack.pop()
            order_rev.append(a)
            seen += 1
            if left[a] >= 0:
                for c in (left[a], right[a]):
                    indeg2[c] -= 1
                    if indeg2[c] == 0:
                        stack.append(c)
        if seen != n:
            culprit = next(a for a in range(n) if indeg2[a] > 0)
            raise _SymbolError("grammar contains a cycle", culprit)
        order_rev.reverse()
        return order_rev  # children before parents

    @staticmethod
    def _build_tables(left, right, byte, order, params) -> _SymbolTables:
        n = len(left)
        length = [0] * n
        depth = [0] * n
        fp = [(0, 0)] * n
        pw = [(0, 0)] * n
        b1, b2 = params.bases
        for a in order:
            if left[a] < 0:
                length[a] = 1
                depth[a] = 1
                fp[a] = (byte[a] % _FIELD, byte[a] % _FIELD)
                pw[a] = (b1, b2)
            else:
                l, r = left[a], right[a]
                length[a] = length[l] + length[r]
                if length[a] > MAX_LEN:
                    raise _SymbolError("expansion length overflows 63 bits", a)
                depth[a] = 1 + max(depth[l], depth[r])
                f1 = (fp[l][0] * pw[r][0] + fp[r][0]) % _FIELD
                f2 = (fp[l][1] * pw[r][1] + fp[r][1]) % _FIELD
                fp[a] = (f1, f2)
                pw[a] = (pw[l][0] * pw[r][0] % _FIELD, pw[l][1] * pw[r][1] % _FIELD)
        return _SymbolTables(left, right, byte, length, depth, fp, pw)

    # -- queries --------------------------------------------------------------

    def reversed(self) -> "Slp":
        if self._rev is None:
            t = self.t
            rev = Slp.__new__(Slp)
            rev.params = self.params
            rev.start = self.start
            rev.n_symbols = self.n_symbols
            rev.length = self.length
            rev.depth = self.depth
            rev._rev = self
            order = self._toposort(t.right, t.left)  # same DAG, children swapped
            rev.t = self._build_tables(t.right, t.left, t.byte, order, self.params)
            self._rev = rev
        return self._rev

    def access(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise ContractError(f"access index {i} outside string of length {self.length}")
        t = self.t
        a = self.start
        while t.left[a] >= 0:
            l = t.left[a]
            if i < t.length[l]:
                a = l
            else:
                i -= t.length[l]
                a = t.right[a]
        return t.byte[a]

    def extract(self, l: int, r: int, root: int | None = None) -> bytes:
        """Materialize gen(root)[l:r) by one pruned in-order walk."""
        t = self.t
        root = self.start if root is None else root
        total = t.length[root]
        if not 0 <= l <= r <= total:
            raise ContractError(f"extract range [{l},{r}) outside string of length {total}")
        out = bytearray()
        stack = [(root, 0)]
        while stack:
            a, off = stack.pop()
            alen = t.length[a]
            if off >= r or off + alen <= l:
                continue
            if t.left[a] < 0:
                out.append(t.byte[a])
                continue
            lsym = t.left[a]
            stack.append((t.right[a], off + t.length[lsym]))
            stack.append((lsym, off))
        return bytes(out)

    def prefix_fingerprint(self, x: int) -> tuple[int, int]:
        """Fingerprint of gen(G)[0:x), one descent combining left siblings."""
        t = self.t
        b1, b2 = self.params.bases
        h1 = h2 = 0
        a = self.start
        while x > 0 and t.left[a] >= 0:
            l = t.left[a]
            if x >= t.length[l]:
                h1 = (h1 * t.pw[l][0] + t.fp[l][0]) % _FIELD
                h2 = (h2 * t.pw[l][1] + t.fp[l][1]) % _FIELD
                x -= t.length[l]
                a = t.right[a]
            else:
                a = l
        if x > 0:  # terminal, x == 1
            h1 = (h1 * b1 + t.byte[a]) % _FIELD
            h2 = (h2 * b2 + t.byte[a]) % _FIELD
        return h1, h2

    def substring_fingerprint(self, i: int, ln: int) -> tuple[int, int]:
        lo = self.prefix_fingerprint(i)
        hi = self.prefix_fingerprint(i + ln)
        b1, b2 = self.params.bases
        s1 = (hi[0] - lo[0] * pow(b1, ln, _FIELD)) % _FIELD
        s2 = (hi[1] - lo[1] * pow(b2, ln, _FIELD)) % _FIELD
        return s1, s2


def slp_lcp(g: Slp, i: int, j: int, cap: int | None = None) -> int:
    """lcp of the suffixes gen(g)[i:] and gen(g)[j:], optionally capped."""
    return _lcp_between(g, i, g, j, cap)


def _lcp_between(ga: Slp, ia: int, gb: Slp, ib: int, cap: int | None = None) -> int:
    limit = min(ga.length - ia, gb.length - ib)
    if cap is not None:
        limit = min(limit, cap)
    if limit <= 0:
        return 0
    if ga is gb and ia == ib:
        return limit
    if ga.access(ia) != gb.access(ib):
        return 0
    base_a = ga.prefix_fingerprint(ia)
    base_b = gb.prefix_fingerprint(ib)
    b1, b2 = ga.params.bases

    def eq(ln: int) -> bool:
        pw1, pw2 = pow(b1, ln, _FIELD), pow(b2, ln, _FIELD)
        ha = ga.prefix_fingerprint(ia + ln)
        hb = gb.prefix_fingerprint(ib + ln)
        return ((ha[0] - base_a[0] * pw1) % _FIELD == (hb[0] - base_b[0] * pw1) % _FIELD
                and (ha[1] - base_a[1] * pw2) % _FIELD == (hb[1] - base_b[1] * pw2) % _FIELD)

    lo, step = 1, 1
    while lo + step <= limit and eq(lo + step):
        lo += step
        step *= 2
    hi = min(limit, lo + step)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if eq(mid):
            lo = mid
        else:
            hi = mid - 1
    if lo < limit and ga.access(ia + lo) == gb.access(ib + lo):
        raise RuntimeError("fingerprint collision detected; rebuild with another seed")
    return lo


def slp_access(g: Slp, i: int) -> int:
    return g.access(i)


def slp_extract(g: Slp, l: int, r: int) -> bytes:
    return g.extract(l, r)


def slp_concat(a: Slp, b: Slp) -> Slp:
    """Grammar of size |a|+|b|+1 generating gen(a)·gen(b)."""
    if a.length + b.length > MAX_LEN:
        raise ContractError("concatenated length overflows 63 bits")
    na = a.n_symbols
    left = list(a.t.left)
    right = list(a.t.right)
    byte = list(a.t.byte)
    for sym in range(b.n_symbols):
        if b.t.left[sym] < 0:
            left.append(-1)
            right.append(-1)
        else:
            left.append(b.t.left[sym] + na)
            right.append(b.t.right[sym] + na)
        byte.append(b.t.byte[sym])
    left.append(a.start)
    right.append(b.start + na)
    byte.append(-1)
    return Slp(left, right, byte, len(left) - 1, a.params)


def left_comb_slp(data: bytes, params: _FingerprintParams | None = None) -> Slp:
    """Trivial O(|data|)-symbol grammar for plain text (testing helper)."""
    if len(data) == 0:
        raise ContractError("cannot build a grammar for the empty string")
    uniq = sorted(set(data))
    sym_of = {c: i for i, c in enumerate(uniq)}
    left = [-1] * len(uniq)
    right = [-1] * len(uniq)
    byte = list(uniq)
    prev = sym_of[data[0]]
    for c in data[1:]:
        left.append(prev)
        right.append(sym_of[c])
        byte.append(-1)
        prev = len(left) - 1
    return Slp(left, right, byte, prev, params)


# ---------------------------------------------------------------------------
# Text format:  "SLP v1 <symbol_count> <start_id>" header, then one rule per
# line, either  <id> = '<byte>'  (escapes \' \\ \n)  or  <id> = <l> <r>.
# ---------------------------------------------------------------------------

def parse_slp(data: bytes) -> Slp:
    lines = data.split(b"\n")
    if not lines or not lines[0].startswith(b"SLP v1 "):
        raise SlpFormatError("missing 'SLP v1' header", 1)
    head = lines[0].split()
    if len(head) != 4:
        raise SlpFormatError("header must be 'SLP v1 <symbol_count> <start_id>'", 1)
    try:
        count, start_id = int(head[2]), int(head[3])
    except ValueError:
        raise SlpFormatError("non-numeric header fields", 1) from None
    if count < 1 or not 1 <= start_id <= count:
        raise SlpFormatError("start id outside symbol range", 1)

    left = [0] * count
    right = [0] * count
    byte = [-2] * count  # -2 marks undefined
    line_of = [0] * count
    ref_line = [0] * count
    lineno = 1
    for raw in lines[1:]:
        lineno += 1
        if not raw.strip():
            continue
        try:
            ident, rest = raw.split(b"=", 1)
        except ValueError:
            raise SlpFormatError("rule must contain '='", lineno) from None
        try:
            sym = int(ident)
        except ValueError:
            raise SlpFormatError("rule id is not a number", lineno) from None
        if not 1 <= sym <= count:
            raise SlpFormatError(f"id {sym} outside [1,{count}]", lineno)
        if byte[sym - 1] != -2:
            raise SlpFormatError(f"id {sym} defined twice", lineno)
        line_of[sym - 1] = lineno
        rest = rest.strip()
        if rest.startswith(b"'"):
            val = _parse_byte_literal(rest, lineno)
            left[sym - 1] = -1
            right[sym - 1] = -1
            byte[sym - 1] = val
        else:
            parts = rest.split()
            if len(parts) != 2:
                raise SlpFormatError("pair rule needs exactly two ids", lineno)
            try:
                l, r = int(parts[0]), int(parts[1])
            except ValueError:
                raise SlpFormatError("pair rule ids are not numbers", lineno) from None
            for ref in (l, r):
                if not 1 <= ref <= count:
                    raise SlpFormatError(f"reference {ref} outside [1,{count}]", lineno)
                if not ref_line[ref - 1]:
                    ref_line[ref - 1] = lineno
            left[sym - 1] = l - 1
            right[sym - 1] = r - 1
            byte[sym - 1] = -1
    for sym in range(count):
        if byte[sym] == -2:
            raise SlpFormatError(f"id {sym + 1} never defined",
                                 ref_line[sym] or line_of[sym] or 1)
    try:
        return Slp(left, right, byte, start_id - 1)
    except _SymbolError as exc:
        raise SlpFormatError(str(exc), line_of[exc.symbol]) from None


def _parse_byte_literal(rest: bytes, lineno: int) -> int:
    if len(rest) < 2 or not rest.endswith(b"'"):
        raise SlpFormatError("unterminated byte literal", lineno)
    body = rest[1:-1]
    if body == b"\\'":
        return 0x27
    if body == b"\\\\":
        return 0x5C
    if body == b"\\n":
        return 0x0A
    if len(body) != 1:
        raise SlpFormatError("byte literal must hold exactly one byte", lineno)
    return body[0]


def format_slp(g: Slp) -> bytes:
    """Serialize back to the text format (inverse of parse_slp)."""
    out = [b"SLP v1 %d %d" % (g.n_symbols, g.start + 1)]
    for sym in range(g.n_symbols):
        if g.t.left[sym] < 0:
            b = g.t.byte[sym]
            if b == 0x27:
                lit = b"\\'"
            elif b == 0x5C:
                lit = b"\\\\"
            elif b == 0x0A:
                lit = b"\\n"
            else:
                lit = bytes([b])
            out.append(b"%d = '%s'" % (sym + 1, lit))
        else:
            out.append(b"%d = %d %d" % (sym + 1, g.t.left[sym] + 1, g.t.right[sym] + 1))
    return b"\n".join(out) + b"\n"


class SlpBackend:
    """Fragment interface over the strings generated by one or more SLPs."""

    def __init__(self, slps: list[Slp]):
        self._slps: list[Slp] = []
        for g in slps:
            if g.params is not slps[0].params:
                raise ContractError("all grammars in a backend must share fingerprint bases")
            self._slps.append(g)
            self._slps.append(g.reversed())

    def handle(self, index: int) -> Fragment:
        return Fragment(2 * index, 0, self._slps[2 * index].length)

    def _slp(self, f: Fragment) -> Slp:
        return self._slps[f.owner]

    def reversed_fragment(self, f: Fragment) -> Fragment:
        n = self._slps[f.owner].length
        return Fragment(f.owner ^ 1, n - f.end, n - f.start)

    def bytes_of(self, f: Fragment) -> bytes:
        return self._slp(f).extract(f.start, f.end)

    def access(self, f: Fragment, i: int) -> int:
        return self._slp(f).access(f.start + i)

    def lcp(self, a: Fragment, b: Fragment) -> int:
        return _lcp_between(self._slp(a), a.start, self._slp(b), b.start,
                            min(len(a), len(b)))

    def lcp_r(self, a: Fragment, b: Fragment) -> int:
        return self.lcp(self.reversed_fragment(a), self.reversed_fragment(b))

    def ipm(self, p: Fragment, t: Fragment) -> ArithmeticProgression:
        if len(p) < 1:
            raise ContractError("ipm pattern must be nonempty")
        if len(t) > 2 * len(p):
            raise ContractError("ipm window longer than twice the pattern")
        pat = self.bytes_of(p)
        txt = self.bytes_of(t)
        hits = []
        pos = txt.find(pat)
        while pos != -1:
            hits.append(pos)
            pos = txt.find(pat, pos + 1)
        if not hits:
            return EMPTY_PROGRESSION
        return _progression_from_sorted(hits)
