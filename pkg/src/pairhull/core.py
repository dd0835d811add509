"""Domain types, closed perspective fractions, and the shared tolerance policy.

All predicates use a deterministic tolerance band: a strict inequality
``a > b`` is evaluated as ``a > b + eq_tol`` and a non-strict one as
``a >= b - eq_tol``, so floating-point boundary points land on a fixed side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NegativeDenominator, NegativeNumerator, NotInAmbientBox

#: Canonical coordinate order used by arrays, cut coefficients and JSON records.
COORD_NAMES = ("x1", "x2", "X11", "X12", "X22", "z1", "z2")


@dataclass(frozen=True)
class Tolerances:
    """Slack bands shared by every predicate in the package.

    ``eq_tol`` bounds equality/strictness bands in region tests, ``mem_tol``
    bounds membership slacks, ``oracle_tol`` bounds the numeric oracle's
    objective gap.  They must be positive and nested.
    """

    eq_tol: float = 1e-9
    mem_tol: float = 1e-8
    oracle_tol: float = 1e-6

    def __post_init__(self) -> None:
        if not (0.0 < self.eq_tol <= self.mem_tol <= self.oracle_tol):
            raise ValueError(
                "tolerances must satisfy 0 < eq_tol <= mem_tol <= oracle_tol"
            )


DEFAULT_TOL = Tolerances()


def gt(a: float, b: float, eq_tol: float) -> bool:
    """Banded strict comparison: true iff a exceeds b beyond the band."""
    return a > b + eq_tol


def ge(a: float, b: float, eq_tol: float) -> bool:
    """Banded non-strict comparison: true iff a is not below b beyond the band."""
    return a >= b - eq_tol


@dataclass(frozen=True)
class ExtReal:
    """A real number extended with an explicit +infinity tag.

    The tag never leaks as an IEEE infinity into arithmetic: adding or
    subtracting an infinite value raises, only comparisons are allowed.
    """

    value: float = 0.0
    infinite: bool = False

    @staticmethod
    def finite(v: float) -> "ExtReal":
        return ExtReal(float(v), False)

    @staticmethod
    def inf() -> "ExtReal":
        return ExtReal(math.inf, True)

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def _as_pair(self, other: "ExtReal | float") -> tuple[bool, float]:
        if isinstance(other, ExtReal):
            return other.infinite, other.value
        return False, float(other)

    def __le__(self, other: "ExtReal | float") -> bool:
        oinf, oval = self._as_pair(other)
        if self.infinite:
            return oinf
        return oinf or self.value <= oval

    def __lt__(self, other: "ExtReal | float") -> bool:
        oinf, oval = self._as_pair(other)
        if self.infinite:
            return False
        return oinf or self.value < oval

    def __ge__(self, other: "ExtReal | float") -> bool:
        return not self.__lt__(other)

    def __gt__(self, other: "ExtReal | float") -> bool:
        return not self.__le__(other)

    def __add__(self, other: "ExtReal | float"):
        oinf, oval = self._as_pair(other)
        if self.infinite or oinf:
            raise ArithmeticError("arithmetic on the +inf tag is not defined")
        return ExtReal.finite(self.value + oval)

    def __sub__(self, other: "ExtReal | float"):
        oinf, oval = self._as_pair(other)
        if self.infinite or oinf:
            raise ArithmeticError("arithmetic on the +inf tag is not defined")
        return ExtReal.finite(self.value - oval)

    def __float__(self) -> float:
        if self.infinite:
            raise ArithmeticError("the +inf tag cannot be converted to float")
        return self.value


def slack_minus(a: float, e: ExtReal) -> float:
    """Slack ``a - e`` as a plain float, with -inf as the violated sentinel."""
    if e.infinite:
        return -math.inf
    return a - e.value


@dataclass(frozen=True)
class HullPoint:
    """A point (x1, x2, X11, X12, X22, z1, z2) of the lifted indicator space.

    ``x`` are the decision values, ``X`` the lifted products and ``z`` the
    relaxed indicators.  The ambient domain is x >= 0, X11, X22, X12 >= 0 and
    z in [0, 1]^2; checked by :func:`validate_point`.
    """

    x1: float
    x2: float
    X11: float
    X12: float
    X22: float
    z1: float
    z2: float

    def coords(self) -> tuple[float, ...]:
        """Coordinates in the canonical :data:`COORD_NAMES` order."""
        return (self.x1, self.x2, self.X11, self.X12, self.X22, self.z1, self.z2)

    @staticmethod
    def from_coords(c) -> "HullPoint":
        x1, x2, X11, X12, X22, z1, z2 = map(float, c)
        return HullPoint(x1, x2, X11, X12, X22, z1, z2)


def validate_point(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> None:
    """Raise :class:`NotInAmbientBox` unless p lies in the ambient domain."""
    e = tol.eq_tol
    bad = []
    for name, v in zip(COORD_NAMES, p.coords()):
        if not math.isfinite(v):
            bad.append(f"{name}={v!r} not finite")
    if not bad:
        if p.x1 < -e:
            bad.append(f"x1={p.x1} < 0")
        if p.x2 < -e:
            bad.append(f"x2={p.x2} < 0")
        if p.X11 < -e:
            bad.append(f"X11={p.X11} < 0")
        if p.X22 < -e:
            bad.append(f"X22={p.X22} < 0")
        if p.X12 < -e:
            bad.append(f"X12={p.X12} < 0")
        for name, v in (("z1", p.z1), ("z2", p.z2)):
            if v < -e or v > 1.0 + e:
                bad.append(f"{name}={v} outside [0, 1]")
    if bad:
        raise NotInAmbientBox("; ".join(bad))


def persp_sq(u: float, v: float, tol: Tolerances = DEFAULT_TOL) -> ExtReal:
    """Closure of u^2/v on v >= 0.

    Returns u^2/v for v > 0, zero at u = v = 0 and the +inf tag when v = 0
    with u nonzero.  Negative v beyond the band is a caller error.
    """
    e = tol.eq_tol
    if v < -e:
        raise NegativeDenominator(f"persp_sq denominator {v} < 0")
    if v > e:
        return ExtReal.finite(u * u / v)
    if abs(u) <= e:
        return ExtReal.finite(0.0)
    return ExtReal.inf()


def persp_prod(u: float, v: float, w: float, tol: Tolerances = DEFAULT_TOL) -> ExtReal:
    """Closure of u*v/w for u, v >= 0 and w >= 0 (same convention as persp_sq)."""
    e = tol.eq_tol
    if u < -e or v < -e:
        raise NegativeNumerator(f"persp_prod numerator factors ({u}, {v}) < 0")
    if w < -e:
        raise NegativeDenominator(f"persp_prod denominator {w} < 0")
    if w > e:
        return ExtReal.finite(u * v / w)
    if u <= e or v <= e:
        return ExtReal.finite(0.0)
    return ExtReal.inf()


def ctilde_slacks(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> dict[str, float]:
    """Slacks of the strengthened relaxation used as the separation input set.

    Inequalities: X11 >= x1^2/z1, X22 >= x2^2/z2 (closed fractions), the
    2x2 Schur product (X11-x1^2)(X22-x2^2) >= (X12-x1*x2)^2, and X12 >= 0.
    Box bounds are assumed validated separately.
    """
    s = {
        "persp1": slack_minus(p.X11, persp_sq(p.x1, p.z1, tol)),
        "persp2": slack_minus(p.X22, persp_sq(p.x2, p.z2, tol)),
        "shor": (p.X11 - p.x1 * p.x1) * (p.X22 - p.x2 * p.x2)
        - (p.X12 - p.x1 * p.x2) ** 2,
        "x12": p.X12,
    }
    return s


def in_relaxation_ctilde(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Membership in the strengthened relaxation (within mem_tol)."""
    validate_point(p, tol)
    return all(v >= -tol.mem_tol for v in ctilde_slacks(p, tol).values())


def in_separable_relaxation(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Membership in the separable perspective relaxation X11 z1 >= x1^2,
    X22 z2 >= x2^2, X12 >= 0 over the ambient box (within mem_tol)."""
    validate_point(p, tol)
    m = tol.mem_tol
    return (
        p.X11 * p.z1 - p.x1 * p.x1 >= -m
        and p.X22 * p.z2 - p.x2 * p.x2 >= -m
        and p.X12 >= -m
    )
