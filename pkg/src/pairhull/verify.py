"""Randomized verification campaigns shared by the CLI and the test suite.

Each campaign is deterministic given its seed: sampling uses PCG64 streams
and every check reports the worst slack it observed together with the
first offending point, so failures reproduce exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    COORD_NAMES,
    DEFAULT_TOL,
    HullPoint,
    Tolerances,
    in_relaxation_ctilde,
)
from .errors import PairhullError
from .hull import member_hull
from .oracle import (
    _sample_hull_array,
    _sample_s2_array,
    _sample_separable_array,
    oracle_member,
)
from .regions import Region, classify, region_partition_audit
from .separation import q_value, separate

_FAMILY_REGIONS = {"II": (Region.R3, Region.R4), "III": (Region.R5,), "V": (Region.R8,)}


@dataclass
class SuiteReport:
    """Outcome of one campaign: zero failures means the property held."""

    name: str
    trials: int
    failures: int
    worst_slack: float
    elapsed: float
    detail: str = ""
    offender: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        state = "pass" if self.ok else "FAIL"
        line = (
            f"suite={self.name} trials={self.trials} failures={self.failures} "
            f"worst_slack={self.worst_slack:.3e} elapsed={self.elapsed:.2f}s [{state}]"
        )
        if self.detail:
            line += f" {self.detail}"
        return line


def _point_dict(p: HullPoint) -> dict:
    return dict(zip(COORD_NAMES, p.coords()))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def sample_ctilde_points(
    rng: np.random.Generator, n: int, xmax: float = 2.0, z_floor: float = 0.02
) -> list[HullPoint]:
    """Constructive samples of the separation input set: perspective bounds
    hold by construction, X12 is placed inside the Schur cap."""
    out: list[HullPoint] = []
    while len(out) < n:
        m = max(2 * (n - len(out)), 64)
        x = rng.uniform(0.0, xmax, (m, 2))
        z = rng.uniform(z_floor, 1.0, (m, 2))
        a = rng.uniform(0.0, 3.0, m)
        b = rng.uniform(0.0, 3.0, m)
        X11 = x[:, 0] ** 2 / z[:, 0] + a
        X22 = x[:, 1] ** 2 / z[:, 1] + b
        cap = np.sqrt(np.maximum((X11 - x[:, 0] ** 2) * (X22 - x[:, 1] ** 2), 0.0))
        t = rng.uniform(-0.999, 0.999, m)
        X12 = np.maximum(x[:, 0] * x[:, 1] + t * cap, 0.0)
        for i in range(m):
            p = HullPoint(x[i, 0], x[i, 1], X11[i], X12[i], X22[i], z[i, 0], z[i, 1])
            if in_relaxation_ctilde(p):
                out.append(p)
                if len(out) == n:
                    break
    return out


def ctilde_margin_points(
    rng: np.random.Generator,
    n: int,
    margin: float = 1e-4,
    tol: Tolerances = DEFAULT_TOL,
) -> list[HullPoint]:
    """Relaxation points whose membership decision has slack >= margin on
    every inequality of the deciding piece (robust for oracle comparison)."""
    out: list[HullPoint] = []
    while len(out) < n:
        for p in sample_ctilde_points(rng, 4 * (n - len(out))):
            if min(p.z1, p.z2) < 0.05 or p.X12 < 0.05:
                continue
            rep = member_hull(p, tol)
            if rep.degenerate or rep.region is Region.NOT_COVERED:
                continue
            finite = [s for s in rep.slacks.values() if math.isfinite(s)]
            if not finite or min(abs(s) for s in finite) < margin:
                continue
            out.append(p)
            if len(out) == n:
                break
    return out


def _hull_x11_bound(p: HullPoint, region: Region) -> float:
    """Smallest X11 putting p inside the hull piece of its cell (the other
    six coordinates held fixed)."""
    if region in (Region.R3, Region.R4):
        z = p.z2
    elif region is Region.R5:
        z = p.z1
    elif region is Region.R8:
        s = p.z1 + p.z2 - 1.0
        d = p.X22 * p.z2 - p.x2 * p.x2
        w = s - math.sqrt(max(d * (1.0 - p.z1) * s, 0.0)) / p.x2
        g = p.X12 * p.z1 * p.z2 / w - p.x1 * p.x2
        return p.x1 * p.x1 / p.z1 + s * g * g / (p.z1 * (1.0 - p.z2) * p.x2 * p.x2)
    else:
        raise ValueError(f"cell {region.value} has no finite X11 bound beyond C")
    b = p.X22 - p.x2 * p.x2 / z
    c = p.X12 - p.x1 * p.x2 / z
    return p.x1 * p.x1 / z + c * c / b


def _ctilde_x11_bound(p: HullPoint) -> float:
    """Smallest X11 keeping p inside the separation input set."""
    lo = p.x1 * p.x1 / p.z1
    gap2 = p.X22 - p.x2 * p.x2
    if gap2 > 1e-12:
        lo = max(lo, p.x1 * p.x1 + (p.X12 - p.x1 * p.x2) ** 2 / gap2)
    return lo


def _candidate_region_point(rng: np.random.Generator, region: Region) -> HullPoint:
    """One random candidate in the target cell (X11 set later)."""
    if region is Region.R8:
        z1 = rng.uniform(0.55, 0.97)
        z2 = rng.uniform(max(1.08 - z1, 0.35), 0.96)
        x1 = rng.uniform(0.4, 1.8)
        x2 = rng.uniform(0.4, 1.8)
        s = z1 + z2 - 1.0
        X12 = rng.uniform(0.05, 0.85) * x1 * x2 * s / (z1 * z2)
        X22 = (x2 * x2 + rng.uniform(0.02, 0.5)) / z2
        return HullPoint(x1, x2, 1.0, X12, X22, z1, z2)
    if region is Region.R5:
        x1 = rng.uniform(0.4, 2.0)
        x2 = rng.uniform(0.02, 0.9)
        z1 = rng.uniform(0.15, 1.0)
        z2 = rng.uniform(0.05, 1.0)
        X12 = (x1 * x2 / z1 + 0.01) * rng.uniform(1.05, 2.5)
        X22 = max(X12 * x2 / x1 * rng.uniform(1.05, 2.0), x2 * x2 / z2 + 0.05)
        X22 = max(X22, x2 * x2 + 0.05)
        return HullPoint(x1, x2, 1.0, X12, X22, z1, z2)
    # R3 / R4: X12 x2 > X22 x1 with the matching indicator order
    if region is Region.R3:
        z1 = rng.uniform(0.05, 0.7)
        z2 = rng.uniform(min(z1 + 0.05, 0.99), 1.0)
    else:
        z2 = rng.uniform(0.05, 0.95)
        z1 = rng.uniform(z2, 1.0)
    x1 = rng.uniform(0.02, 0.8)
    x2 = rng.uniform(0.4, 2.0)
    X22 = x2 * x2 / z2 + rng.uniform(0.05, 1.5)
    X22 = max(X22, x2 * x2 + 0.05)
    X12 = X22 * x1 / x2 * rng.uniform(1.05, 3.0) + rng.uniform(0.01, 0.2)
    return HullPoint(x1, x2, 1.0, X12, X22, z1, z2)


def shrunken_nonmembers(
    rng: np.random.Generator,
    n: int,
    regions: tuple[Region, ...] = (Region.R3, Region.R4, Region.R5, Region.R8),
    gap_floor: float = 1e-3,
    tol: Tolerances = DEFAULT_TOL,
    max_draws: int = 2_000_000,
) -> list[HullPoint]:
    """Relaxation points strictly below their cell's hull bound on X11.

    Built by placing X11 between the relaxation bound and the hull bound,
    which leaves the cell unchanged (no cell involves X11).
    """
    out: list[HullPoint] = []
    draws = 0
    while len(out) < n and draws < max_draws:
        draws += 1
        region = regions[int(rng.integers(len(regions)))]
        cand = _candidate_region_point(rng, region)
        lo = _ctilde_x11_bound(cand)
        try:
            hi = _hull_x11_bound(cand, region)
        except (ValueError, ZeroDivisionError):
            continue
        if not (hi - lo > gap_floor):
            continue
        x11 = lo + rng.uniform(0.1, 0.9) * (hi - lo)
        p = HullPoint(cand.x1, cand.x2, x11, cand.X12, cand.X22, cand.z1, cand.z2)
        if classify(p, tol) is not region:
            continue
        if not in_relaxation_ctilde(p, tol):
            continue
        out.append(p)
    if len(out) < n:
        raise RuntimeError(f"only built {len(out)}/{n} shrunken non-members")
    return out


def family_touch_points(
    rng: np.random.Generator,
    n: int,
    family: str,
    tol: Tolerances = DEFAULT_TOL,
    max_draws: int = 2_000_000,
) -> list[HullPoint]:
    """Boundary points of one separating family (q = 0 with margins), used
    for gradient checks."""
    regions = _FAMILY_REGIONS[family]
    out: list[HullPoint] = []
    draws = 0
    while len(out) < n and draws < max_draws:
        draws += 1
        region = regions[int(rng.integers(len(regions)))]
        cand = _candidate_region_point(rng, region)
        try:
            hi = _hull_x11_bound(cand, region)
        except (ValueError, ZeroDivisionError):
            continue
        p = HullPoint(cand.x1, cand.x2, hi, cand.X12, cand.X22, cand.z1, cand.z2)
        if classify(p, tol) is not region:
            continue
        if abs(q_value(family, p)) > tol.mem_tol * (1.0 + hi * hi):
            continue
        out.append(p)
    if len(out) < n:
        raise RuntimeError(f"only built {len(out)}/{n} touch points for {family}")
    return out


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------


def run_partition_suite(
    trials: int, seed: int, tol: Tolerances = DEFAULT_TOL
) -> SuiteReport:
    """Disjointness and coverage of the cells on relaxation samples."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    pts = [
        HullPoint.from_coords(r)
        for r in _sample_separable_array(rng, trials, 2.0, 4.0)
    ]
    audit = region_partition_audit(pts, tol)
    failures = audit.n_multi + audit.n_none
    offender = None
    if audit.multi_matches:
        offender = {
            "point": _point_dict(pts[audit.multi_matches[0][0]]),
            "matches": audit.multi_matches[0][1],
        }
    elif audit.non_matches:
        offender = {"point": _point_dict(pts[audit.non_matches[0]]), "matches": []}
    return SuiteReport(
        "partition",
        trials,
        failures,
        0.0,
        time.perf_counter() - t0,
        detail=f"counts={audit.counts}",
        offender=offender,
    )


def run_hull_suite(trials: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> SuiteReport:
    """Every convex combination of vertex samples must be a member."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    ks = rng.integers(1, 9, size=trials)
    failures = 0
    worst = math.inf
    offender = None
    for k in range(1, 9):
        count = int(np.sum(ks == k))
        if count == 0:
            continue
        arr = _sample_hull_array(rng, count, k, 2.0)
        for row in arr:
            p = HullPoint.from_coords(row)
            rep = member_hull(p, tol)
            finite = [s for s in rep.slacks.values() if math.isfinite(s)]
            if finite:
                worst = min(worst, min(finite))
            if not rep.member:
                failures += 1
                if offender is None:
                    offender = {"point": _point_dict(p), "violated": list(rep.violated)}
    return SuiteReport(
        "hull", trials, failures, worst, time.perf_counter() - t0, offender=offender
    )


def run_cuts_suite(
    trials: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    s2_batch: int = 10_000,
    violation_floor: float = 1e-9,
    soundness_floor: float = -1e-8,
) -> SuiteReport:
    """Soundness and violation of cuts on constructed non-members."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    queries = shrunken_nonmembers(rng, trials, tol=tol)
    batch = _sample_s2_array(rng, s2_batch, 2.0)
    failures = 0
    offender = None
    worst = math.inf
    cuts = []
    for p in queries:
        try:
            res = separate(p, tol)
        except PairhullError as exc:
            failures += 1
            if offender is None:
                offender = {"point": _point_dict(p), "error": str(exc)}
            continue
        bad = (
            res.inside
            or res.cut is None
            or res.cut.evaluate(p) >= -violation_floor
            or abs(res.cut.evaluate(res.cut.touch)) > violation_floor
            or not member_hull(res.cut.touch, tol).member
        )
        if bad:
            failures += 1
            if offender is None:
                offender = {"point": _point_dict(p), "inside": res.inside}
            continue
        cuts.append(res.cut)
    if cuts:
        coeffs = np.array([c.coeffs for c in cuts])
        consts = np.array([c.constant for c in cuts])
        vals = batch @ coeffs.T + consts
        per_cut_min = vals.min(axis=0)
        worst = float(per_cut_min.min())
        for i in np.nonzero(per_cut_min < soundness_floor)[0]:
            failures += 1
            if offender is None:
                offender = {
                    "point": _point_dict(queries[i]),
                    "cut_min_on_samples": float(per_cut_min[i]),
                }
    return SuiteReport(
        "cuts",
        trials,
        failures,
        worst,
        time.perf_counter() - t0,
        detail=f"cuts={len(cuts)} batch={s2_batch}",
        offender=offender,
    )


def run_oracle_suite(
    trials: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    margin: float = 1e-4,
) -> SuiteReport:
    """Agreement of the closed-form decision with the numeric oracle."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    pts = ctilde_margin_points(rng, trials, margin, tol)
    failures = 0
    offender = None
    n_member = 0
    for p in pts:
        rep = member_hull(p, tol)
        dec, wit = oracle_member(p, tol)
        n_member += int(rep.member)
        if dec != rep.member:
            failures += 1
            if offender is None:
                offender = {
                    "point": _point_dict(p),
                    "closed_form": rep.member,
                    "oracle": dec,
                    "objective": None if wit.objective.infinite else wit.objective.value,
                    "slacks": rep.slacks,
                }
    return SuiteReport(
        "oracle",
        trials,
        failures,
        0.0,
        time.perf_counter() - t0,
        detail=f"members={n_member} nonmembers={trials - n_member}",
        offender=offender,
    )


SUITES = {
    "partition": run_partition_suite,
    "hull": run_hull_suite,
    "cuts": run_cuts_suite,
    "oracle": run_oracle_suite,
}
