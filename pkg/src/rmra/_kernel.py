"""JIT-compiled inner loop of the staged search.

Candidate arrays are the k-subsets of the free interior slots, visited
in lexicographic order as a depth-first walk that shares work across
common prefixes: placing one sensor updates the pair-count table
incrementally, and a running deficit counter (how many lags in
[1, L-1] still lack two-fold coverage) makes the healthy condition an
O(1) test per leaf.

Whole subtrees are skipped when the deficit provably exceeds the number
of sensor pairs the unplaced sensors could still contribute; skipped
leaves are counted exactly, so candidate accounting stays identical to
a full enumeration.  The walk can start at any lexicographic rank and
stop after any number of leaves, which is what the rank-interval
partitioning and checkpointing build on.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["stage_kernel", "make_choose_table"]

_CAP = 2**62


def make_choose_table(m_max: int, k_max: int) -> np.ndarray:
    """Binomial lookup C(m, r) for m <= m_max, r <= k_max, capped at 2^62.

    Capped entries only occur far past any runnable stage size; they are
    compared against leaf budgets that are orders of magnitude smaller,
    so the cap never changes a decision.
    """
    table = np.zeros((m_max + 1, k_max + 1), dtype=np.int64)
    for m in range(m_max + 1):
        for r in range(min(m, k_max) + 1):
            table[m, r] = min(math.comb(m, r), _CAP)
    return table


@njit(cache=True, nogil=True)
def stage_kernel(lo, hi, k, L, n, p, pos, w, deficit, start, budget, cap, out, choose):
    """Walk candidate leaves in lex order from ``start``; validate each.

    pos     full position buffer (n,), prefix [0, p) and suffix
            [p+k, n) pre-filled; interior slots are [p, p+k).
    w       weight table (L+1,) pre-filled with the fixed-fixed pairs.
    deficit sum over lags 1..L-1 of max(0, 2 - w[lag]) for that table.
    start   first interior combination to visit (k,).
    budget  number of leaves to process; a subtree skip may overshoot,
            the caller clamps accounting to the requested interval.
    cap     stop once this many valid arrays are recorded.
    out     (cap, n) buffer receiving valid full arrays.

    Returns (leaves_processed, n_valid, exhausted).
    """
    cnt = np.zeros(L + 1, dtype=np.int64)
    leaves = 0
    nval = 0

    # descend to the start leaf; no pruning here because a rank interval
    # may begin inside a subtree that a full walk would have skipped
    for j in range(k):
        v = start[j]
        pos[p + j] = v
        for t in range(p + j):
            d = v - pos[t]
            w[d] += 1
            if d < L and w[d] <= 2:
                deficit -= 1
        for t in range(p + k, n):
            d = pos[t] - v
            w[d] += 1
            if d < L and w[d] <= 2:
                deficit -= 1

    while True:
        # evaluate the current leaf
        leaves += 1
        if deficit == 0:
            robust = True
            for si in range(1, n - 1):
                s = pos[si]
                for ti in range(n):
                    if ti != si:
                        d = pos[ti] - s
                        if d < 0:
                            d = -d
                        cnt[d] += 1
                hole = False
                for ti in range(n):
                    if ti != si:
                        d = pos[ti] - s
                        if d < 0:
                            d = -d
                        if cnt[d] == w[d]:
                            hole = True
                for ti in range(n):
                    if ti != si:
                        d = pos[ti] - s
                        if d < 0:
                            d = -d
                        cnt[d] = 0
                if hole:
                    robust = False
                    break
            if robust:
                for t in range(n):
                    out[nval, t] = pos[t]
                nval += 1
        if leaves >= budget or nval >= cap:
            return leaves, nval, False

        # advance to the next leaf: pop the deepest slot, seek the next
        # viable value, backtracking and skipping dead subtrees
        j = k - 1
        v = pos[p + j]
        for t in range(p + j):
            d = v - pos[t]
            if d < L and w[d] <= 2:
                deficit += 1
            w[d] -= 1
        for t in range(p + k, n):
            d = pos[t] - v
            if d < L and w[d] <= 2:
                deficit += 1
            w[d] -= 1
        v += 1

        while True:
            if v > hi - (k - 1 - j):
                # slot j exhausted, backtrack
                j -= 1
                if j < 0:
                    return leaves, nval, True
                v = pos[p + j]
                for t in range(p + j):
                    d = v - pos[t]
                    if d < L and w[d] <= 2:
                        deficit += 1
                    w[d] -= 1
                for t in range(p + k, n):
                    d = pos[t] - v
                    if d < L and w[d] <= 2:
                        deficit += 1
                    w[d] -= 1
                v += 1
                continue

            # place v at slot j
            pos[p + j] = v
            for t in range(p + j):
                d = v - pos[t]
                w[d] += 1
                if d < L and w[d] <= 2:
                    deficit -= 1
            for t in range(p + k, n):
                d = pos[t] - v
                w[d] += 1
                if d < L and w[d] <= 2:
                    deficit -= 1

            if j == k - 1:
                break  # reached a new leaf

            r = k - 1 - j  # sensors still to place under this node
            if deficit > r * (r - 1) // 2 + r * (n - r):
                # no placement of the remaining sensors can repair the
                # coverage deficit: skip the whole subtree
                skipped = choose[hi - v, r]
                for t in range(p + j):
                    d = v - pos[t]
                    if d < L and w[d] <= 2:
                        deficit += 1
                    w[d] -= 1
                for t in range(p + k, n):
                    d = pos[t] - v
                    if d < L and w[d] <= 2:
                        deficit += 1
                    w[d] -= 1
                leaves += skipped
                if leaves >= budget:
                    return leaves, nval, False
                v += 1
                continue

            j += 1
            v = pos[p + j - 1] + 1
