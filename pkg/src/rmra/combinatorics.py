"""Exact subset counting, lexicographic streaming and rank/unrank.

The search sweeps spaces of up to ~10^9 candidate placements, far past
what can be materialized, so subsets are streamed one at a time in
lexicographic order with O(k) state.  Rank/unrank through the
combinatorial number system turns any rank interval into an independent
sub-stream, which is what makes work partitioning and checkpoint/resume
deterministic.
"""

from __future__ import annotations

import math

from .errors import DomainError, RankError

__all__ = ["binomial", "CombinationCursor", "rank", "unrank"]

_MAX_N = 10_000


def binomial(n: int, k: int) -> int:
    """Exact C(n, k) for 0 <= k <= n <= 10^4.

    Arbitrary-precision arithmetic, so the result is always exact;
    arguments outside the domain raise DomainError.
    """
    if not isinstance(n, int) or not isinstance(k, int):
        raise DomainError("binomial arguments must be integers")
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"binomial domain requires 0 <= k <= n, got ({n}, {k})")
    if n > _MAX_N:
        raise DomainError(f"binomial domain capped at n <= {_MAX_N}")
    return math.comb(n, k)


def _check_universe(lo: int, hi: int, k: int) -> int:
    """Validate a [lo, hi] universe and subset size; return its size."""
    m = hi - lo + 1
    if m < 0:
        raise DomainError(f"empty universe [{lo}, {hi}]")
    if k < 0 or k > m:
        raise DomainError(f"cannot choose {k} elements from {m}")
    return m


class CombinationCursor:
    """Streams the k-subsets of the integer interval [lo, hi].

    Subsets come out in strict lexicographic order, each exactly once,
    with only the current subset held in memory.  The cursor is a plain
    iterator: ``next(cursor, None)`` returns the next subset or None
    once the stream is exhausted.  Cursors are single-owner; to consume
    a stream in parallel, give each worker its own cursor built with
    :meth:`from_rank` over disjoint rank intervals.
    """

    __slots__ = ("lo", "hi", "k", "_state", "_exhausted")

    def __init__(self, lo: int, hi: int, k: int):
        _check_universe(lo, hi, k)
        self.lo = lo
        self.hi = hi
        self.k = k
        self._state = list(range(lo, lo + k))
        self._exhausted = False

    @classmethod
    def from_rank(cls, lo: int, hi: int, k: int, r: int) -> "CombinationCursor":
        """Cursor positioned at the subset of lexicographic rank ``r``."""
        cursor = cls(lo, hi, k)
        cursor._state = list(unrank(lo, hi, k, r))
        return cursor

    @property
    def current(self) -> tuple[int, ...] | None:
        """Subset the next call will return, or None when exhausted."""
        return None if self._exhausted else tuple(self._state)

    @property
    def exhausted(self) -> bool:
        return self._exhausted

    def __iter__(self) -> "CombinationCursor":
        return self

    def __next__(self) -> tuple[int, ...]:
        if self._exhausted:
            raise StopIteration
        out = tuple(self._state)
        state, k, hi = self._state, self.k, self.hi
        j = k - 1
        while j >= 0 and state[j] == hi - (k - 1 - j):
            j -= 1
        if j < 0:
            self._exhausted = True
        else:
            state[j] += 1
            for i in range(j + 1, k):
                state[i] = state[i - 1] + 1
        return out


def unrank(lo: int, hi: int, k: int, r: int) -> tuple[int, ...]:
    """The k-subset of [lo, hi] at lexicographic rank ``r``.

    Combinatorial number system: the first element is pushed right as
    long as the block of subsets it heads fits below ``r``.
    """
    m = _check_universe(lo, hi, k)
    if r < 0 or r >= math.comb(m, k):
        raise RankError(f"rank {r} outside [0, C({m}, {k}))")
    out = []
    x = 0
    for slots in range(k, 0, -1):
        block = math.comb(m - x - 1, slots - 1)
        while r >= block:
            r -= block
            x += 1
            block = math.comb(m - x - 1, slots - 1)
        out.append(lo + x)
        x += 1
    return tuple(out)


def rank(lo: int, hi: int, k: int, subset) -> int:
    """Lexicographic rank of ``subset`` within the k-subsets of [lo, hi].

    Inverse of :func:`unrank`; malformed subsets raise DomainError.
    """
    m = _check_universe(lo, hi, k)
    sub = tuple(subset)
    if len(sub) != k:
        raise DomainError(f"subset has {len(sub)} elements, expected {k}")
    if any(b <= a for a, b in zip(sub, sub[1:])):
        raise DomainError("subset must be strictly increasing")
    if k > 0 and (sub[0] < lo or sub[-1] > hi):
        raise DomainError(f"subset not contained in [{lo}, {hi}]")
    r = 0
    prev = -1
    for i, v in enumerate(sub):
        x = v - lo
        for u in range(prev + 1, x):
            r += math.comb(m - u - 1, k - i - 1)
        prev = x
    return r
