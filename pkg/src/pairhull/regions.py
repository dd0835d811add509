"""Partition of the search space into the eight cells R1..R8.

Each cell is an inequality system over (x, X, z); the cells are pairwise
disjoint and jointly cover the separable relaxation, so every relevant
point classifies to exactly one tag.  Points on a shared boundary are
resolved to the lowest-index cell by the tolerance band.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .core import DEFAULT_TOL, HullPoint, Tolerances, ge, gt, in_separable_relaxation, validate_point


class Region(Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    R7 = "R7"
    R8 = "R8"
    NOT_COVERED = "NotCovered"


def on_indicator_edge(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when either indicator sits at zero (within the band)."""
    e = tol.eq_tol
    return p.z1 <= e or p.z2 <= e


def _in_r1(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    if p.X12 <= e:
        return True
    # Zero indicators fall to R1: the remaining cells all need z1, z2 > 0,
    # and the face systems of R1 decide membership there.
    if on_indicator_edge(p, tol):
        return True
    xx = p.x1 * p.x2
    return (
        ge(p.X12 * p.z1 * p.z2, xx * (p.z1 + p.z2 - 1.0), e)
        and ge(xx, p.X12 * max(p.z1, p.z2), e)
        and gt(p.X12, 0.0, e)
        and gt(p.z1, 0.0, e)
        and gt(p.z2, 0.0, e)
    )


def _in_r2(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    xx = p.x1 * p.x2
    return (
        ge(p.z2, p.z1, e)
        and gt(p.X12 * p.z2, xx, e)
        and ge(xx, p.X12 * p.z1, e)
        and gt(p.X12, 0.0, e)
        and gt(p.z1, 0.0, e)
        and ge(
            p.x1 * p.x1 * (p.z2 - p.z1) * (p.X22 * p.z2 - p.x2 * p.x2),
            p.z1 * (p.X12 * p.z2 - xx) ** 2,
            e,
        )
    )


def _in_r3(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    xx = p.x1 * p.x2
    return (
        gt(p.z2, p.z1, e)
        and gt(p.X12 * p.x2, p.X22 * p.x1, e)
        and gt(
            p.z1 * (p.X12 * p.z2 - xx) ** 2,
            p.x1 * p.x1 * (p.z2 - p.z1) * (p.X22 * p.z2 - p.x2 * p.x2),
            e,
        )
        and ge(p.x1, 0.0, e)
        and gt(p.X12, 0.0, e)
        and gt(p.z1, 0.0, e)
    )


def _in_r4(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    return (
        ge(p.z1, p.z2, e)
        and gt(p.X12 * p.x2, p.X22 * p.x1, e)
        and ge(p.x1, 0.0, e)
        and gt(p.X12, 0.0, e)
        and gt(p.z2, 0.0, e)
    )


def _in_r5(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    return (
        gt(p.X12 * p.z1, p.x1 * p.x2, e)
        and ge(p.X22 * p.x1, p.X12 * p.x2, e)
        and ge(p.x2, 0.0, e)
        and gt(p.X12, 0.0, e)
        and gt(p.z1, 0.0, e)
        and gt(p.z2, 0.0, e)
    )


def _in_u2(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    return (
        gt(p.x1 * p.x2 * (p.z1 + p.z2 - 1.0), p.X12 * p.z1 * p.z2, e)
        and gt(p.X12, 0.0, e)
        and gt(p.z1, 0.0, e)
        and gt(p.z2, 0.0, e)
    )


def _r6_extra(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    s = p.z1 + p.z2 - 1.0
    lhs = (1.0 - p.z1) * s * p.x1 * p.x1 * (p.X22 * p.z2 - p.x2 * p.x2)
    rhs = (p.X12 * p.z1 * p.z2 - p.x1 * p.x2 * s) ** 2
    return ge(lhs, rhs, e)


def _r7_extra(p: HullPoint, tol: Tolerances) -> bool:
    e = tol.eq_tol
    d = p.X22 * p.z2 - p.x2 * p.x2
    x2sq = p.x2 * p.x2
    lhs = p.x1 * p.x1 * (x2sq - p.X22 * (1.0 - p.z1)) * d
    rhs = 2.0 * p.x1 * p.x2 * p.X12 * p.z1 * d - p.X12 * p.X12 * (
        p.X22 * (p.z1 + p.z2 - 1.0)
        + x2sq * (1.0 - 2.0 * p.z1 - p.z2 * (1.0 - p.z1))
    )
    return gt(lhs, rhs, e)


def _in_r6(p: HullPoint, tol: Tolerances) -> bool:
    return _in_u2(p, tol) and _r6_extra(p, tol)


def _in_r7(p: HullPoint, tol: Tolerances) -> bool:
    return _in_u2(p, tol) and _r7_extra(p, tol)


def _in_r8(p: HullPoint, tol: Tolerances) -> bool:
    return _in_u2(p, tol) and not _r6_extra(p, tol) and not _r7_extra(p, tol)


_PREDICATES = (
    (Region.R1, _in_r1),
    (Region.R2, _in_r2),
    (Region.R3, _in_r3),
    (Region.R4, _in_r4),
    (Region.R5, _in_r5),
    (Region.R6, _in_r6),
    (Region.R7, _in_r7),
    (Region.R8, _in_r8),
)


def _le(a: float, b: float, e: float) -> bool:
    return a <= b + e


def region_closure_contains(p: HullPoint, region: Region, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Membership in the closure of a cell (strict inequalities relaxed).

    Cells R6..R8 use the closure of the common strict system plus the
    relaxed extra inequality; the subtracted cells of R8 are excluded
    through their open versions only.
    """
    e = tol.eq_tol
    xx = p.x1 * p.x2
    s = p.z1 + p.z2 - 1.0
    if region is Region.R1:
        if p.X12 <= e:
            return True
        return ge(p.X12 * p.z1 * p.z2, xx * s, e) and ge(
            xx, p.X12 * max(p.z1, p.z2), e
        )
    if region is Region.R2:
        return (
            _le(p.z1, p.z2, e)
            and ge(p.X12 * p.z2, xx, e)
            and _le(p.X12 * p.z1, xx, e)
            and ge(
                p.x1 * p.x1 * (p.z2 - p.z1) * (p.X22 * p.z2 - p.x2 * p.x2),
                p.z1 * (p.X12 * p.z2 - xx) ** 2,
                e,
            )
        )
    if region is Region.R3:
        return (
            _le(p.z1, p.z2, e)
            and ge(p.X12 * p.x2, p.X22 * p.x1, e)
            and ge(
                p.z1 * (p.X12 * p.z2 - xx) ** 2,
                p.x1 * p.x1 * (p.z2 - p.z1) * (p.X22 * p.z2 - p.x2 * p.x2),
                e,
            )
        )
    if region is Region.R4:
        return _le(p.z2, p.z1, e) and ge(p.X12 * p.x2, p.X22 * p.x1, e)
    if region is Region.R5:
        return ge(p.X12 * p.z1, xx, e) and ge(p.X22 * p.x1, p.X12 * p.x2, e)
    if region is Region.R6:
        return _le(p.X12 * p.z1 * p.z2, xx * s, e) and _r6_extra(p, tol)
    if region is Region.R7:
        d = p.X22 * p.z2 - p.x2 * p.x2
        x2sq = p.x2 * p.x2
        lhs = p.x1 * p.x1 * (x2sq - p.X22 * (1.0 - p.z1)) * d
        rhs = 2.0 * p.x1 * p.x2 * p.X12 * p.z1 * d - p.X12 * p.X12 * (
            p.X22 * s + x2sq * (1.0 - 2.0 * p.z1 - p.z2 * (1.0 - p.z1))
        )
        return _le(p.X12 * p.z1 * p.z2, xx * s, e) and ge(lhs, rhs, e)
    if region is Region.R8:
        return (
            _le(p.X12 * p.z1 * p.z2, xx * s, e)
            and not _r6_extra(p, tol)
            and not _r7_extra(p, tol)
        )
    return False


def classify(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> Region:
    """Return the unique cell containing p, lowest index first on boundaries."""
    validate_point(p, tol)
    for tag, pred in _PREDICATES:
        if pred(p, tol):
            return tag
    return Region.NOT_COVERED


def region_matches(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> list[Region]:
    """Evaluate all eight cell systems independently (no short-circuit)."""
    return [tag for tag, pred in _PREDICATES if pred(p, tol)]


@dataclass
class PartitionAuditReport:
    """Outcome of a disjointness/coverage audit over a sample batch."""

    total: int = 0
    audited: int = 0  # samples inside the separable relaxation
    n_multi: int = 0
    n_none: int = 0
    counts: dict[str, int] = field(default_factory=dict)
    multi_matches: list[tuple[int, list[str]]] = field(default_factory=list)
    non_matches: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.n_multi == 0 and self.n_none == 0


def region_partition_audit(
    samples: list[HullPoint],
    tol: Tolerances = DEFAULT_TOL,
    max_recorded: int = 20,
) -> PartitionAuditReport:
    """Count cell matches per sample and flag partition violations.

    Only samples inside the separable relaxation are audited for coverage
    and disjointness; every sample contributes to the per-cell counts.
    """
    report = PartitionAuditReport(total=len(samples))
    for i, p in enumerate(samples):
        validate_point(p, tol)
        tag = classify(p, tol)
        report.counts[tag.value] = report.counts.get(tag.value, 0) + 1
        if not in_separable_relaxation(p, tol):
            continue
        report.audited += 1
        matches = region_matches(p, tol)
        if len(matches) == 0:
            report.n_none += 1
            if len(report.non_matches) < max_recorded:
                report.non_matches.append(i)
        elif len(matches) > 1:
            report.n_multi += 1
            if len(report.multi_matches) < max_recorded:
                report.multi_matches.append((i, [m.value for m in matches]))
    return report
