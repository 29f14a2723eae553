"""Exact integer arithmetic for chain-complex shapes, ranks and Betti numbers.

A shape (a_0, ..., a_n) lists the dimensions of the vector spaces in a
bounded complex  0 <- A_0 <- A_1 <- ... <- A_n <- 0  with n boundary
maps.  A rank vector (r_1, ..., r_n) records the ranks of those maps,
with the implicit sentinels r_0 = r_{n+1} = 0.  Everything in this
module is pure integer arithmetic over those tuples:

    chi     = sum_i (-1)^i a_i                      (Euler characteristic)
    beta_i  = a_i - r_i - r_{i+1}                   (Betti numbers)
    d(a, r) = sum_{i=1..n} r_i (a_i + a_{i-1} - r_{i-1} - r_i)

d(a, r) is the dimension of the set of complexes realizing (a, r) inside
the ambient matrix space of dimension N = sum_i a_{i-1} a_i.  A rank
vector is realizable by an actual complex iff r_i + r_{i+1} <= a_i for
every i = 0..n (sentinels included), and in that case all beta_i >= 0
and the alternating sum of the beta_i equals chi.

Entries are capped at 2^20 and lengths at 2^10 so that every derived
quantity fits comfortably in 64-bit signed integers when callers move
the numbers into fixed-width storage.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass

MAX_ENTRY = 1 << 20
MAX_LENGTH = 1 << 10


class InfeasibleRanksError(ValueError):
    """Rank vector violates r_i + r_{i+1} <= a_i; no such complex exists."""


class UnrealizableBettiError(ValueError):
    """No feasible rank vector realizes the requested Betti numbers."""


class WorkCapExceeded(RuntimeError):
    """A documented resource cap would be exceeded; the call is refused."""


def _int_tuple(values, what):
    try:
        return tuple(operator.index(v) for v in values)
    except TypeError:
        raise ValueError(f"{what} entries must be integers") from None


@dataclass(frozen=True)
class ComplexShape:
    """Dimension vector (a_0, ..., a_n) of the spaces; n = len(dims) - 1 maps."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = _int_tuple(self.dims, "shape")
        object.__setattr__(self, "dims", dims)
        if len(dims) < 1:
            raise ValueError("shape needs at least one space")
        if len(dims) > MAX_LENGTH:
            raise ValueError(f"shape length {len(dims)} exceeds cap {MAX_LENGTH}")
        for a in dims:
            if a < 0:
                raise ValueError(f"shape entries must be non-negative, got {a}")
            if a > MAX_ENTRY:
                raise ValueError(f"shape entry {a} exceeds cap {MAX_ENTRY}")

    @property
    def n_maps(self) -> int:
        return len(self.dims) - 1

    def reversed(self) -> "ComplexShape":
        return ComplexShape(self.dims[::-1])

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)


@dataclass(frozen=True, order=True)
class RankVector:
    """Ranks (r_1, ..., r_n) of the boundary maps; sentinels never stored.

    Ordering is lexicographic on the entries.
    """

    ranks: tuple[int, ...]

    def __post_init__(self):
        ranks = _int_tuple(self.ranks, "rank")
        object.__setattr__(self, "ranks", ranks)
        for r in ranks:
            if r < 0:
                raise ValueError(f"ranks must be non-negative, got {r}")

    def __len__(self):
        return len(self.ranks)

    def __iter__(self):
        return iter(self.ranks)


@dataclass(frozen=True, order=True)
class BettiVector:
    """Homology dimensions (beta_0, ..., beta_n); ordered lexicographically."""

    bettis: tuple[int, ...]

    def __post_init__(self):
        bettis = _int_tuple(self.bettis, "Betti")
        object.__setattr__(self, "bettis", bettis)
        for b in bettis:
            if b < 0:
                raise ValueError(f"Betti numbers must be non-negative, got {b}")

    def __len__(self):
        return len(self.bettis)

    def __iter__(self):
        return iter(self.bettis)


def _check_lengths(shape: ComplexShape, ranks: RankVector) -> None:
    if len(ranks.ranks) != shape.n_maps:
        raise ValueError(
            f"rank vector of length {len(ranks.ranks)} does not fit shape "
            f"with {shape.n_maps} maps"
        )


# Tuple-level kernels, shared with the optimizer's hot loops.

def _feasible(dims, ranks) -> bool:
    n = len(dims) - 1
    prev = 0
    for i in range(n):
        if prev + ranks[i] > dims[i]:
            return False
        prev = ranks[i]
    return prev <= dims[n]


def _dimension(dims, ranks) -> int:
    total = 0
    prev = 0
    for i, r in enumerate(ranks):
        total += r * (dims[i + 1] + dims[i] - prev - r)
        prev = r
    return total


def _betti(dims, ranks):
    n = len(dims) - 1
    padded = (0,) + tuple(ranks) + (0,)
    return tuple(dims[i] - padded[i] - padded[i + 1] for i in range(n + 1))


def euler_characteristic(shape: ComplexShape) -> int:
    """Alternating sum of the space dimensions."""
    return sum(a if i % 2 == 0 else -a for i, a in enumerate(shape.dims))


def ambient_dimension(shape: ComplexShape) -> int:
    """Total matrix-entry count N = sum a_{i-1} a_i of the boundary maps."""
    dims = shape.dims
    return sum(dims[i - 1] * dims[i] for i in range(1, len(dims)))


def betti_lower_bound(shape: ComplexShape) -> int:
    """|chi|: the smallest total homology any complex on this shape can have."""
    return abs(euler_characteristic(shape))


def is_feasible(shape: ComplexShape, ranks: RankVector) -> bool:
    """True iff r_i + r_{i+1} <= a_i for all i = 0..n with zero sentinels."""
    _check_lengths(shape, ranks)
    return _feasible(shape.dims, ranks.ranks)


def stratum_dimension(shape: ComplexShape, ranks: RankVector) -> int:
    """Dimension d(a, r) of the set of complexes with these dims and ranks."""
    _check_lengths(shape, ranks)
    if not _feasible(shape.dims, ranks.ranks):
        raise InfeasibleRanksError(
            f"ranks {ranks.ranks} are infeasible for dims {shape.dims}"
        )
    return _dimension(shape.dims, ranks.ranks)


def betti_from_ranks(shape: ComplexShape, ranks: RankVector) -> BettiVector:
    """Betti numbers beta_i = a_i - r_i - r_{i+1} of a complex with these ranks."""
    _check_lengths(shape, ranks)
    if not _feasible(shape.dims, ranks.ranks):
        raise InfeasibleRanksError(
            f"ranks {ranks.ranks} are infeasible for dims {shape.dims}"
        )
    return BettiVector(_betti(shape.dims, ranks.ranks))


def ranks_from_betti(shape: ComplexShape, bettis: BettiVector) -> RankVector:
    """Invert betti_from_ranks via r_{i+1} = a_i - beta_i - r_i.

    Raises UnrealizableBettiError when the recursion leaves the feasible
    region or the final sentinel r_{n+1} = 0 cannot be met.
    """
    dims = shape.dims
    b = bettis.bettis
    if len(b) != len(dims):
        raise ValueError(
            f"Betti vector of length {len(b)} does not fit shape of length {len(dims)}"
        )
    n = len(dims) - 1
    ranks = []
    r = 0
    for i in range(n):
        r = dims[i] - b[i] - r
        if r < 0:
            raise UnrealizableBettiError(
                f"Betti numbers {b} force a negative rank at map {i + 1}"
            )
        ranks.append(r)
    if b[n] != dims[n] - (ranks[-1] if n else 0):
        raise UnrealizableBettiError(
            f"Betti numbers {b} are inconsistent with the final space of {dims}"
        )
    if not _feasible(dims, ranks):
        raise UnrealizableBettiError(
            f"Betti numbers {b} lead to infeasible ranks {tuple(ranks)} on {dims}"
        )
    return RankVector(tuple(ranks))
