"""Lyndon words, standard factorization and the Witt dimension formula."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Union

Word = tuple[int, ...]
Bracketing = Union[int, tuple["Bracketing", "Bracketing"]]


def is_lyndon(w: Word) -> bool:
    """Strictly smaller than every proper rotation."""
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


def _duval(d: int, n: int) -> Iterator[Word]:
    """All Lyndon words of length <= n over ``0..d-1`` in lexicographic order."""
    if d <= 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == d - 1:
            w.pop()


@lru_cache(maxsize=None)
def lyndon_words(d: int, n: int) -> tuple[Word, ...]:
    """Lyndon words of length exactly ``n`` over ``d`` letters, sorted."""
    if n < 1 or d < 0:
        raise ValueError("need d >= 0 and n >= 1")
    return tuple(w for w in _duval(d, n) if len(w) == n)


def mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def witt_dimension(d: int, n: int) -> int:
    """Rank of the degree-``n`` part of the free Lie algebra on ``d`` generators."""
    if n < 1:
        raise ValueError("n >= 1")
    total = sum(mobius(e) * d ** (n // e) for e in range(1, n + 1) if n % e == 0)
    assert total % n == 0
    return total // n


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """``w = uv`` with ``v`` the longest proper suffix that is Lyndon."""
    if len(w) < 2:
        raise ValueError("letters have no standard factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError("unreachable: the last letter is always Lyndon")


@lru_cache(maxsize=None)
def standard_bracketing(w: Word) -> Bracketing:
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (standard_bracketing(u), standard_bracketing(v))


def letter_name(i: int, d: int | None = None) -> str:
    if d is not None and d <= 26:
        return "abcdefghijklmnopqrstuvwxyz"[i]
    return f"e{i + 1}"


def format_bracketing(b: Bracketing, d: int | None = None) -> str:
    if isinstance(b, int):
        return letter_name(b, d)
    return f"[{format_bracketing(b[0], d)},{format_bracketing(b[1], d)}]"


def format_word(w: Word, d: int | None = None) -> str:
    sep = "" if d is not None and d <= 26 else "."
    return sep.join(letter_name(i, d) for i in w)
