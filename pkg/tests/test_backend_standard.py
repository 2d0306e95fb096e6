import random

import pytest

from pillarmatch import ContractError, extract
from pillarmatch.standard import StandardBackend


def naive_lcp(a: bytes, b: bytes) -> int:
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    return i


def test_build_lcp_example():
    b = StandardBackend([b"abcabc"])
    h = b.handle(0)
    assert b.lcp(extract(h, 0, 6), extract(h, 3, 6)) == 3


def test_lcp_r_example():
    b = StandardBackend([b"banana"])
    h = b.handle(0)
    # longest common suffix of "bana" and "na"
    assert b.lcp_r(extract(h, 0, 4), extract(h, 4, 6)) == 2


def test_cross_string_equal():
    b = StandardBackend([b"ab", b"ab"])
    assert b.lcp(b.handle(0), b.handle(1)) == 2


def test_rejects_empty_collection():
    with pytest.raises(ContractError):
        StandardBackend([b""])


def test_separators_never_match():
    # identical bytes across strings but different strings: lcp must stop at ends
    b = StandardBackend([b"aaa", b"aaaa"])
    assert b.lcp(b.handle(0), b.handle(1)) == 3


def test_full_byte_alphabet():
    data = bytes(range(256)) * 2
    b = StandardBackend([data, data[1:]])
    assert b.lcp(b.handle(0), b.handle(1)) == 0
    assert b.lcp(extract(b.handle(0), 1, 512), b.handle(1)) == 511


def test_random_fragment_pairs_match_naive():
    rng = random.Random(21)
    for round_ in range(6):
        strings = [bytes(rng.randrange(rng.choice([2, 4, 256])) for _ in range(rng.randrange(1, 400)))
                   for _ in range(rng.randrange(1, 5))]
        b = StandardBackend(strings)
        for _ in range(400):
            i = rng.randrange(len(strings))
            j = rng.randrange(len(strings))
            si, sj = strings[i], strings[j]
            a1 = rng.randrange(0, len(si) + 1)
            a2 = rng.randrange(a1, len(si) + 1)
            b1 = rng.randrange(0, len(sj) + 1)
            b2 = rng.randrange(b1, len(sj) + 1)
            fa = extract(b.handle(i), a1, a2)
            fb = extract(b.handle(j), b1, b2)
            assert b.lcp(fa, fb) == naive_lcp(si[a1:a2], sj[b1:b2])
            ra, rb = si[a1:a2][::-1], sj[b1:b2][::-1]
            assert b.lcp_r(fa, fb) == naive_lcp(ra, rb)


def test_ipm_windows_match_naive():
    rng = random.Random(22)
    for _ in range(500):
        lp = rng.randrange(1, 12)
        lt = rng.randrange(1, 2 * lp + 1)
        p = bytes(rng.randrange(2) + 97 for _ in range(lp))
        t = bytes(rng.randrange(2) + 97 for _ in range(lt))
        b = StandardBackend([p, t])
        got = list(b.ipm(b.handle(0), b.handle(1)))
        want = [i for i in range(lt - lp + 1) if t[i:i + lp] == p]
        assert got == want


def test_index_is_lazy():
    b = StandardBackend([b"abcabc"])
    assert b._rank is None
    b.scan_exact(b.handle(0), b.handle(0))
    assert b._rank is None  # scanning never builds the index
    b.lcp(extract(b.handle(0), 0, 3), extract(b.handle(0), 3, 6))
    assert b._rank is not None
