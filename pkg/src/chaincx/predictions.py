"""Closed-form predictions of almost-sure Betti numbers, and their checks.

For several families of shapes the positive-probability Betti vectors
have closed forms: complexes with one or two maps, three maps under a
no-forced-homology hypothesis on the dimensions, and arbitrary length
with all dimensions equal.  This module implements those closed forms,
compares them against the optimizer's observed maximizer spectrum, and
scans shape space for counterexamples to the general conjecture that
total homology is almost surely |chi| whenever no Betti number is
forced positive by the dimensions alone.

The no-forced-homology hypothesis reads a_i + a_{i+2} >= a_{i+1} over a
window of indices with out-of-range dimensions treated as zero.  Two
window conventions are implemented:

* SENTINEL (default): i = -1 .. n-1.  The end conditions a_0 <= a_1 and
  a_n <= a_{n-1} are included, so no beta_i can be forced positive.
* INTERIOR: i = 0 .. n-2 only.  The end conditions are dropped; shapes
  like (2, 1, 1, 2), where beta_0 and beta_n are forced positive, then
  satisfy the hypothesis while violating the predicted total homology.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product

from .core import (
    BettiVector,
    ComplexShape,
    RankVector,
    WorkCapExceeded,
    _feasible,
    betti_lower_bound,
)
from .optimizer import (
    MaximizerReport,
    enumerate_maximizers,
    maximizer_rank_sum_range,
)

DEFAULT_SCAN_CAP = 2_000_000
CHECK_ENUMERATION_GUARD = 100_000


class SourceTheorem(Enum):
    LENGTH1 = "Length1"
    LENGTH2 = "Length2"
    LENGTH3_SUM = "Length3Sum"
    EQUAL_ODD = "EqualOdd"
    EQUAL_EVEN_SUM = "EqualEvenSum"
    EQUAL_EVEN_SPREAD = "EqualEvenSpread"
    CONJECTURE = "Conjecture"


class HypothesisReading(Enum):
    """Index-window convention for the no-forced-homology hypothesis."""

    SENTINEL = "sentinel"
    INTERIOR = "interior"


class Verdict(Enum):
    MATCH = "Match"
    MISMATCH = "Mismatch"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class Prediction:
    """A closed form's claim about the almost-sure Betti data of a shape.

    Either a full set of Betti vectors (predicted_betti_set) or only the
    total sum beta_i (predicted_sum) is claimed, never both.
    """

    applicable: bool
    predicted_betti_set: tuple[BettiVector, ...]
    predicted_sum: int | None
    source_theorem: SourceTheorem


@dataclass(frozen=True)
class ComparisonResult:
    shape: ComplexShape
    prediction: Prediction
    observed: MaximizerReport
    verdict: Verdict


@dataclass(frozen=True)
class ScanReport:
    """Outcome of a conjecture scan: the counterexamples found (expected
    none), how many hypothesis-satisfying shapes were checked, and whether
    the scan stopped early at the work cap."""

    counterexamples: tuple[ComparisonResult, ...]
    shapes_scanned: int
    truncated: bool


@dataclass(frozen=True)
class SweepSummary:
    """Verdict tally of check_shape over a rectangle of shapes."""

    shapes_checked: int
    matches: int
    mismatches: int
    not_applicable: int
    mismatch_details: tuple[ComparisonResult, ...]


def _not_applicable(source: SourceTheorem) -> Prediction:
    return Prediction(False, (), None, source)


def hypothesis_holds(
    shape: ComplexShape, reading: HypothesisReading = HypothesisReading.SENTINEL
) -> bool:
    """Whether a_i + a_{i+2} >= a_{i+1} over the reading's index window."""
    dims = shape.dims
    n = len(dims) - 1

    def a(i):
        return dims[i] if 0 <= i <= n else 0

    if reading is HypothesisReading.SENTINEL:
        window = range(-1, n)
    else:
        window = range(0, n - 1)
    return all(a(i) + a(i + 2) >= a(i + 1) for i in window)


def predict_length1(shape: ComplexShape) -> Prediction:
    """Single map: full rank a.s., so (beta_0, beta_1) = (a_0 - a_1, 0) or (0, a_1 - a_0)."""
    if shape.n_maps != 1:
        return _not_applicable(SourceTheorem.LENGTH1)
    a0, a1 = shape.dims
    betti = (0, a1 - a0) if a0 <= a1 else (a0 - a1, 0)
    return Prediction(True, (BettiVector(betti),), None, SourceTheorem.LENGTH1)


def _length2_cases(a0, a1, a2):
    """All satisfied cases of the two-map closed form, tagged by name.

    Overlapping guards agree on the boundary, which the property tests
    verify; predict_length2 simply takes the first satisfied case.
    The one-sided dominant cases put the whole surplus in a single Betti
    number; otherwise the surplus chi >= 0 is split evenly across
    beta_0 and beta_2, in two ways when chi is odd.
    """
    chi = a0 - a1 + a2
    cases = []
    if a0 >= a1 + a2:
        cases.append(("a0_dominant", ((a0 - a1, 0, a2),)))
    if a2 >= a0 + a1:
        cases.append(("a2_dominant", ((a0, 0, a2 - a1),)))
    if a1 >= a0 + a2:
        cases.append(("a1_dominant", ((0, a1 - a0 - a2, 0),)))
    if a2 - a1 <= a0 <= a1 + a2 and a1 <= a0 + a2:
        if chi % 2 == 0:
            cases.append(("balanced_even", ((chi // 2, 0, chi // 2),)))
        else:
            lo, hi = (chi - 1) // 2, (chi + 1) // 2
            cases.append(("balanced_odd", ((lo, 0, hi), (hi, 0, lo))))
    return cases


def predict_length2(shape: ComplexShape) -> Prediction:
    """Two maps: the five-case closed form, total over non-negative triples."""
    if shape.n_maps != 2:
        return _not_applicable(SourceTheorem.LENGTH2)
    cases = _length2_cases(*shape.dims)
    assert cases, "the five cases cover all triples"
    betti_set = tuple(sorted(BettiVector(b) for b in cases[0][1]))
    return Prediction(True, betti_set, None, SourceTheorem.LENGTH2)


def predict_length3_sum(
    shape: ComplexShape, reading: HypothesisReading = HypothesisReading.SENTINEL
) -> Prediction:
    """Three maps under the no-forced-homology hypothesis: sum beta_i = |chi|."""
    if shape.n_maps != 3 or not hypothesis_holds(shape, reading):
        return _not_applicable(SourceTheorem.LENGTH3_SUM)
    return Prediction(True, (), betti_lower_bound(shape), SourceTheorem.LENGTH3_SUM)


def _spread_set(n, m):
    """Betti vectors with zero odd entries and even entries floor/ceil of
    m / (n/2 + 1), summing to m; sorted lexicographically."""
    slots = n // 2 + 1
    base, extra = divmod(m, slots)
    vectors = []
    for raised in combinations(range(slots), extra):
        betti = [0] * (n + 1)
        for k in range(slots):
            betti[2 * k] = base + (1 if k in raised else 0)
        vectors.append(BettiVector(tuple(betti)))
    return tuple(sorted(vectors))


def predict_equal_dim(shape: ComplexShape) -> Prediction:
    """All dimensions equal m >= 1: exact for odd n, evenly spread |chi| = m
    across the even Betti numbers for even n."""
    dims = shape.dims
    n = shape.n_maps
    m = dims[0]
    source = SourceTheorem.EQUAL_ODD if n % 2 else SourceTheorem.EQUAL_EVEN_SPREAD
    if m < 1 or any(a != m for a in dims):
        return _not_applicable(source)
    if n % 2:
        betti_set = (BettiVector((0,) * (n + 1)),)
    else:
        betti_set = _spread_set(n, m)
    return Prediction(True, betti_set, None, source)


def predict_conjecture(
    shape: ComplexShape, reading: HypothesisReading = HypothesisReading.SENTINEL
) -> Prediction:
    """Any length under the no-forced-homology hypothesis: sum beta_i = |chi|."""
    if not hypothesis_holds(shape, reading):
        return _not_applicable(SourceTheorem.CONJECTURE)
    return Prediction(True, (), betti_lower_bound(shape), SourceTheorem.CONJECTURE)


def all_predictions(
    shape: ComplexShape, reading: HypothesisReading = HypothesisReading.SENTINEL
) -> tuple[Prediction, ...]:
    """Every implemented prediction for the shape, applicable or not."""
    equal = predict_equal_dim(shape)
    if equal.applicable and shape.n_maps % 2 == 0:
        equal_even_sum = Prediction(
            True, (), betti_lower_bound(shape), SourceTheorem.EQUAL_EVEN_SUM
        )
    else:
        equal_even_sum = _not_applicable(SourceTheorem.EQUAL_EVEN_SUM)
    return (
        predict_length1(shape),
        predict_length2(shape),
        predict_length3_sum(shape, reading),
        equal,
        equal_even_sum,
        predict_conjecture(shape, reading),
    )


def prediction_matches(prediction: Prediction, observed: MaximizerReport) -> bool:
    """Whether the observed maximizer spectrum fulfils the prediction."""
    if not prediction.applicable:
        return True
    if prediction.predicted_betti_set:
        return sorted(observed.betti_spectrum) == sorted(prediction.predicted_betti_set)
    if prediction.predicted_sum is not None:
        return all(
            sum(b.bettis) == prediction.predicted_sum for b in observed.betti_spectrum
        )
    return True


def _full_report(shape: ComplexShape) -> MaximizerReport:
    report = enumerate_maximizers(shape, CHECK_ENUMERATION_GUARD)
    if report.truncated:
        raise WorkCapExceeded(
            f"shape {shape.dims} has {report.maximizer_count} maximizers, "
            f"more than the comparison guard of {CHECK_ENUMERATION_GUARD}"
        )
    return report


def check_shape(
    shape: ComplexShape, reading: HypothesisReading = HypothesisReading.SENTINEL
) -> ComparisonResult:
    """Compare every applicable prediction with the observed spectrum.

    Any mismatch dominates the verdict; with no applicable prediction the
    verdict is NOT_APPLICABLE.  The returned prediction is the deciding
    one (first mismatch, else first applicable match).
    """
    observed = _full_report(shape)
    applicable = [p for p in all_predictions(shape, reading) if p.applicable]
    if not applicable:
        return ComparisonResult(
            shape,
            _not_applicable(SourceTheorem.CONJECTURE),
            observed,
            Verdict.NOT_APPLICABLE,
        )
    for pred in applicable:
        if not prediction_matches(pred, observed):
            return ComparisonResult(shape, pred, observed, Verdict.MISMATCH)
    return ComparisonResult(shape, applicable[0], observed, Verdict.MATCH)


def _iter_shapes(max_length, max_entry):
    for n in range(max_length + 1):
        for dims in product(range(max_entry + 1), repeat=n + 1):
            yield dims


def conjecture_scan(
    max_length: int,
    max_entry: int,
    reading: HypothesisReading = HypothesisReading.SENTINEL,
    work_cap: int = DEFAULT_SCAN_CAP,
) -> ScanReport:
    """Hunt for hypothesis-satisfying shapes whose maximizers violate
    sum beta_i = |chi|.

    max_length bounds the number of boundary maps; entries run 0..max_entry.
    Shapes are scanned up to reversal (d is symmetric under it); when a
    counterexample is found both representatives are reported.  Hitting
    work_cap stops the scan with partial results and truncated = True.
    """
    if max_length < 0 or max_entry < 0:
        raise ValueError("scan bounds must be non-negative")
    counterexamples = []
    scanned = 0
    truncated = False
    for dims in _iter_shapes(max_length, max_entry):
        if dims[::-1] < dims:
            continue
        shape = ComplexShape(dims)
        if not hypothesis_holds(shape, reading):
            continue
        if scanned >= work_cap:
            truncated = True
            break
        scanned += 1
        total = sum(dims)
        _, lo, hi = maximizer_rank_sum_range(shape)
        target = betti_lower_bound(shape)
        if total - 2 * hi == target and total - 2 * lo == target:
            continue
        representatives = [dims] if dims == dims[::-1] else [dims, dims[::-1]]
        for rep in representatives:
            rep_shape = ComplexShape(rep)
            counterexamples.append(
                ComparisonResult(
                    rep_shape,
                    predict_conjecture(rep_shape, reading),
                    _full_report(rep_shape),
                    Verdict.MISMATCH,
                )
            )
    counterexamples.sort(key=lambda c: (len(c.shape.dims), c.shape.dims))
    return ScanReport(tuple(counterexamples), scanned, truncated)


def sweep_theorems(
    max_length: int,
    max_entry: int,
    reading: HypothesisReading = HypothesisReading.SENTINEL,
    work_cap: int = DEFAULT_SCAN_CAP,
) -> SweepSummary:
    """Run check_shape over every shape in the rectangle and tally verdicts."""
    if max_length < 0 or max_entry < 0:
        raise ValueError("sweep bounds must be non-negative")
    total = sum((max_entry + 1) ** (n + 1) for n in range(max_length + 1))
    if total > work_cap:
        raise WorkCapExceeded(
            f"sweep over {total} shapes exceeds the work cap of {work_cap}"
        )
    checked = matches = mismatches = not_applicable = 0
    details = []
    for dims in _iter_shapes(max_length, max_entry):
        result = check_shape(ComplexShape(dims), reading)
        checked += 1
        if result.verdict is Verdict.MATCH:
            matches += 1
        elif result.verdict is Verdict.MISMATCH:
            mismatches += 1
            details.append(result)
        else:
            not_applicable += 1
    return SweepSummary(checked, matches, mismatches, not_applicable, tuple(details))


def equal_dim_quadratic_form(n: int) -> list[list[int]]:
    """Hessian of d(a, r) for equal dimensions: tridiagonal, -2 on the
    diagonal and -1 off it.  Its k-th leading principal minor is
    (-1)^k (k+1), so the form is negative definite for every n >= 1."""
    if n < 1:
        raise ValueError("the quadratic form needs at least one rank variable")
    hessian = [[0] * n for _ in range(n)]
    for i in range(n):
        hessian[i][i] = -2
        if i + 1 < n:
            hessian[i][i + 1] = hessian[i + 1][i] = -1
    return hessian


def spread_identity_check(n: int, m: int, ranks: RankVector) -> bool | None:
    """Verify sum beta_i^2 == 2 f(r) - n m^2 + m^2 with f(r) = sum r_i (r_{i-1} + r_i).

    Holds for equal dimensions m, n even, whenever r_i + r_{i+1} = m for
    every odd i; returns None when those hypotheses fail.  The identity is
    what makes maximizing d equivalent to spreading the Betti numbers as
    evenly as possible.
    """
    if n < 2 or n % 2 or m < 1 or len(ranks.ranks) != n:
        return None
    r = ranks.ranks
    dims = (m,) * (n + 1)
    if not _feasible(dims, r):
        return None
    if any(r[i - 1] + r[i] != m for i in range(1, n, 2)):
        return None
    padded = (0,) + r + (0,)
    betti = [dims[i] - padded[i] - padded[i + 1] for i in range(n + 1)]
    g = sum(b * b for b in betti)
    f = sum(padded[i] * (padded[i - 1] + padded[i]) for i in range(1, n + 1))
    return g == 2 * f - n * m * m + m * m
