"""Maximization of the stratum dimension d(a, r) over feasible rank vectors.

The maximizers are exactly the rank vectors a random complex attains with
positive probability, so everything downstream (closed-form checks, the
conjecture scan, bias detection in the sampler) reduces to computing them.

The objective splits over consecutive ranks,

    d(a, r) = sum_i w_i(r_{i-1}, r_i),   w_i(p, q) = q (a_{i-1} + a_i - p - q),

and the feasible region is the chain of constraints r_{i-1} + r_i <= a_{i-1}
with r_i <= min(a_{i-1}, a_i).  That makes an exact dynamic program over
states r_i in [0, min(a_{i-1}, a_i)] possible: O(n A^2) time and O(n A)
space for A = max a_i.  All tied optimal transitions are kept, so a second
pass counts the maximizers exactly (Python integers, no overflow) and a
backtracking pass lists them in ascending lexicographic order up to a cap.

brute_force_maximize enumerates the whole feasible region instead and is
kept deliberately naive: it is the independent oracle the dynamic program
is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (
    BettiVector,
    ComplexShape,
    RankVector,
    WorkCapExceeded,
    _betti,
    _dimension,
    _feasible,
)

DEFAULT_ENUMERATION_CAP = 10_000
DEFAULT_WORK_CAP = 100_000_000


@dataclass(frozen=True)
class MaximizerReport:
    """Maximizers of d(a, r) with their common dimension and Betti spectrum.

    maximizer_count is always exact; the listing (and the aligned
    betti_spectrum) is truncated at enumeration_cap, flagged by truncated.
    """

    max_dimension: int
    maximizer_count: int
    maximizers: tuple[RankVector, ...]
    betti_spectrum: tuple[BettiVector, ...]
    truncated: bool
    enumeration_cap: int


def _state_caps(dims):
    """Largest admissible value of each r_i: min(a_{i-1}, a_i); caps[0] = 0."""
    return [0] + [min(dims[i - 1], dims[i]) for i in range(1, len(dims))]


def _suffix_best(dims):
    """suffix[i][p] = best d contribution of maps i+1..n given r_i = p.

    The p = 0 entry of suffix[0] is the maximum of d over the whole
    feasible region.  Every state is reachable and every state admits
    q = 0, so no entry is ever -inf.
    """
    n = len(dims) - 1
    caps = _state_caps(dims)
    suffix = [None] * (n + 1)
    suffix[n] = [0] * (caps[n] + 1)
    for i in range(n - 1, -1, -1):
        a, b = dims[i], dims[i + 1]
        nxt = suffix[i + 1]
        cur = [0] * (caps[i] + 1)
        for p in range(caps[i] + 1):
            best = 0
            for q in range(min(caps[i + 1], a - p) + 1):
                v = q * (a + b - p - q) + nxt[q]
                if v > best:
                    best = v
            cur[p] = best
        suffix[i] = cur
    return caps, suffix


def _optimal_moves(dims, caps, suffix, i, p):
    """Ascending list of q values continuing optimally from state (i, p)."""
    a, b = dims[i], dims[i + 1]
    target = suffix[i][p]
    nxt = suffix[i + 1]
    return [
        q
        for q in range(min(caps[i + 1], a - p) + 1)
        if q * (a + b - p - q) + nxt[q] == target
    ]


def _count_maximizers(dims, caps, suffix):
    n = len(dims) - 1
    counts = [1] * (caps[n] + 1)
    for i in range(n - 1, -1, -1):
        cur = [0] * (caps[i] + 1)
        for p in range(caps[i] + 1):
            cur[p] = sum(counts[q] for q in _optimal_moves(dims, caps, suffix, i, p))
        counts = cur
    return counts[0]


def _list_maximizers(dims, caps, suffix, limit):
    n = len(dims) - 1
    out = []
    prefix = []

    def descend(i, p):
        if len(out) >= limit:
            return
        if i == n:
            out.append(tuple(prefix))
            return
        for q in _optimal_moves(dims, caps, suffix, i, p):
            prefix.append(q)
            descend(i + 1, q)
            prefix.pop()
            if len(out) >= limit:
                return

    descend(0, 0)
    return out


def maximize_dp(shape: ComplexShape) -> tuple[int, RankVector]:
    """Maximum of d(a, r) and its lexicographically smallest maximizer."""
    dims = shape.dims
    caps, suffix = _suffix_best(dims)
    witness = []
    p = 0
    for i in range(len(dims) - 1):
        q = _optimal_moves(dims, caps, suffix, i, p)[0]
        witness.append(q)
        p = q
    return suffix[0][0], RankVector(tuple(witness))


def enumerate_maximizers(
    shape: ComplexShape, cap: int = DEFAULT_ENUMERATION_CAP
) -> MaximizerReport:
    """All maximizers of d(a, r), listed lexicographically up to cap.

    The count is exact regardless of truncation.
    """
    if cap < 1:
        raise ValueError("enumeration cap must be positive")
    dims = shape.dims
    caps, suffix = _suffix_best(dims)
    count = _count_maximizers(dims, caps, suffix)
    listed = _list_maximizers(dims, caps, suffix, min(cap, count))
    maximizers = tuple(RankVector(r) for r in listed)
    spectrum = tuple(BettiVector(_betti(dims, r)) for r in listed)
    return MaximizerReport(
        max_dimension=suffix[0][0],
        maximizer_count=count,
        maximizers=maximizers,
        betti_spectrum=spectrum,
        truncated=count > cap,
        enumeration_cap=cap,
    )


def betti_spectrum(
    shape: ComplexShape, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[BettiVector, ...]:
    """Betti vectors of the maximizers (positive-probability homology)."""
    return enumerate_maximizers(shape, cap).betti_spectrum


def maximizer_rank_sum_range(shape: ComplexShape) -> tuple[int, int, int]:
    """(max d, min sum r_i, max sum r_i) with the extrema over all maximizers.

    Since sum beta_i = sum a_i - 2 sum r_i, the range certifies whether
    every maximizer attains the same total homology without listing the
    maximizers, which may be exponentially many.
    """
    dims = shape.dims
    n = len(dims) - 1
    caps, suffix = _suffix_best(dims)
    lo = [0] * (caps[n] + 1)
    hi = [0] * (caps[n] + 1)
    for i in range(n - 1, -1, -1):
        new_lo = [0] * (caps[i] + 1)
        new_hi = [0] * (caps[i] + 1)
        for p in range(caps[i] + 1):
            moves = _optimal_moves(dims, caps, suffix, i, p)
            new_lo[p] = min(q + lo[q] for q in moves)
            new_hi[p] = max(q + hi[q] for q in moves)
        lo, hi = new_lo, new_hi
    return suffix[0][0], lo[0], hi[0]


def brute_force_maximize(
    shape: ComplexShape, work_cap: int = DEFAULT_WORK_CAP
) -> MaximizerReport:
    """Independent oracle: exhaust the feasible region, never truncate.

    Refuses shapes whose candidate grid prod(min(a_{i-1}, a_i) + 1)
    exceeds work_cap.
    """
    dims = shape.dims
    caps = _state_caps(dims)[1:]
    grid = 1
    for c in caps:
        grid *= c + 1
        if grid > work_cap:
            raise WorkCapExceeded(
                f"brute force over {dims} needs {grid}+ candidates, "
                f"exceeding the work cap of {work_cap}"
            )
    best = 0
    argmax = []
    for r in product(*(range(c + 1) for c in caps)):
        if not _feasible(dims, r):
            continue
        d = _dimension(dims, r)
        if d > best:
            best = d
            argmax = [r]
        elif d == best:
            argmax.append(r)
    maximizers = tuple(RankVector(r) for r in argmax)
    spectrum = tuple(BettiVector(_betti(dims, r)) for r in argmax)
    return MaximizerReport(
        max_dimension=best,
        maximizer_count=len(argmax),
        maximizers=maximizers,
        betti_spectrum=spectrum,
        truncated=False,
        enumeration_cap=len(argmax),
    )
