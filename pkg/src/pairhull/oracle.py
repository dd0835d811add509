"""Independent membership ground truth via the disjunctive witness problem.

A point is in the hull iff the three-variable convex program over the
disjunction witness (xt41, xt42, lambda4) attains an objective no larger
than X11.  The minimizer is located by a coarse grid followed by a
shrinking-grid refinement, entirely independent of the closed-form piece
descriptions.  The module also hosts the exact samplers for the vertex set
and its convex combinations, and the closed-form optimizers per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    ExtReal,
    HullPoint,
    Tolerances,
    validate_point,
)
from .errors import EmptyFeasibleSet, InfeasibleWitness, RegionHasNoClosedWitness
from .regions import Region, classify, on_indicator_edge


@dataclass(frozen=True)
class SampleSeed:
    """Reproducible sampling request: PCG64 stream `seed`, `count` draws."""

    seed: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be a positive integer")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class OracleWitness:
    """Feasible witness triple with its objective value."""

    xt41: float
    xt42: float
    lambda4: float
    objective: ExtReal


# ---------------------------------------------------------------------------
# closed-fraction evaluation on arrays
# ---------------------------------------------------------------------------


def _cl_sq_over(u, den, e: float):
    """Closure of u^2/den elementwise: den > 0 divides (however steep), the
    0/0 corner gives 0 within the numerator band, anything else is +inf."""
    u = np.asarray(u, dtype=float)
    den = np.asarray(den, dtype=float)
    num = u * u
    pos = den > 0.0
    out = np.where(
        pos,
        num / np.where(pos, den, 1.0),
        np.where(np.abs(u) <= e, 0.0, np.inf),
    )
    return out


def _cl_prod_over(u, v, den, e: float):
    """Closure of u*v/den for u, v >= 0 elementwise."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    den = np.asarray(den, dtype=float)
    pos = den > 0.0
    zero_num = (u <= e) | (v <= e)
    out = np.where(
        pos,
        u * v / np.where(pos, den, 1.0),
        np.where(zero_num, 0.0, np.inf),
    )
    return out


def _objective_arrays(p: HullPoint, lam, a1, a2, e: float):
    """Objective of the witness problem on broadcastable arrays.

    Infeasible cells (negative slack in the quadratic constraint beyond the
    band, or an infinite closed fraction with nonzero numerator) score +inf.
    """
    t1 = _cl_sq_over(a1, lam, e)
    t2 = _cl_sq_over(p.x1 - a1, p.z1 - lam, e)
    g2 = p.X22 - _cl_sq_over(a2, lam, e) - _cl_sq_over(p.x2 - a2, p.z2 - lam, e)
    h = p.X12 - _cl_prod_over(a1, a2, lam, e)
    gpos = g2 > 0.0
    with np.errstate(invalid="ignore"):
        t3 = np.where(
            gpos,
            (h * h) / np.where(gpos, g2, 1.0),
            np.where((np.abs(h) <= e) & (g2 >= -e), 0.0, np.inf),
        )
    return t1 + t2 + t3


def witness_slacks(
    p: HullPoint, triple: tuple[float, float, float], tol: Tolerances = DEFAULT_TOL
) -> dict[str, float]:
    """Constraint slacks of a witness triple (negative means violated)."""
    a1, a2, lam = float(triple[0]), float(triple[1]), float(triple[2])
    e = tol.eq_tol
    g2 = float(
        p.X22
        - _cl_sq_over(a2, lam, e)
        - _cl_sq_over(p.x2 - a2, p.z2 - lam, e)
    )
    return {
        "lambda.lo": lam - (p.z1 + p.z2 - 1.0),
        "lambda.hi": min(p.z1, p.z2) - lam,
        "lambda.pos": lam,
        "xt41.lo": a1,
        "xt41.hi": p.x1 - a1,
        "xt42.lo": a2,
        "xt42.hi": p.x2 - a2,
        "g2": g2,
    }


def oracle_objective(
    p: HullPoint, w: tuple[float, float, float], tol: Tolerances = DEFAULT_TOL
) -> ExtReal:
    """Objective of the witness problem at triple w = (xt41, xt42, lambda4).

    Raises :class:`InfeasibleWitness` when a box or weight-interval or
    quadratic constraint is violated beyond eq_tol.  A feasible witness on
    the g2 = 0, h != 0 ray evaluates to the +inf tag.
    """
    validate_point(p, tol)
    slacks = witness_slacks(p, w, tol)
    bad = {k: v for k, v in slacks.items() if v < -tol.eq_tol}
    if bad:
        raise InfeasibleWitness(f"witness constraint(s) violated: {bad}")
    val = float(
        _objective_arrays(p, np.float64(w[2]), np.float64(w[0]), np.float64(w[1]), tol.eq_tol)
    )
    if math.isinf(val):
        return ExtReal.inf()
    return ExtReal.finite(val)


# ---------------------------------------------------------------------------
# numeric minimization: coarse grid + shrinking-grid refinement
# ---------------------------------------------------------------------------


def _grid_eval(p: HullPoint, lam_ax, a1_ax, a2_ax, e: float):
    """Evaluate the objective on the product grid with per-lambda ridge
    columns a_i = lam * x_i / z_i appended (the constraint-wise best split)."""
    lam_ax = np.asarray(lam_ax, dtype=float)
    L = lam_ax.size
    cols1 = np.broadcast_to(np.asarray(a1_ax, dtype=float), (L, np.size(a1_ax))).copy()
    cols2 = np.broadcast_to(np.asarray(a2_ax, dtype=float), (L, np.size(a2_ax))).copy()
    if p.z1 > e and p.x1 > 0.0:
        ridge1 = np.clip(lam_ax * p.x1 / p.z1, 0.0, p.x1)
        cols1 = np.concatenate([cols1, ridge1[:, None]], axis=1)
    if p.z2 > e and p.x2 > 0.0:
        ridge2 = np.clip(lam_ax * p.x2 / p.z2, 0.0, p.x2)
        cols2 = np.concatenate([cols2, ridge2[:, None]], axis=1)
    lam = lam_ax[:, None, None]
    a1 = cols1[:, :, None]
    a2 = cols2[:, None, :]
    f = _objective_arrays(p, lam, a1, a2, e)
    k = int(np.argmin(f))
    i, j, l = np.unravel_index(k, f.shape)
    return float(f[i, j, l]), float(lam_ax[i]), float(cols1[i, j]), float(cols2[i, l])


def _best_split1(p: HullPoint, lam: np.ndarray, a2: np.ndarray, e: float):
    """Exact minimization over the first split value at fixed (lam, a2).

    For positive denominators the objective is a convex quadratic in the
    first split, so the clipped stationary point is the box minimizer; the
    closure cases are covered by the box ends and the h = 0 root.

    Returns (f, a1) arrays of the same shape as lam/a2.
    """
    lam = np.asarray(lam, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    g2 = p.X22 - _cl_sq_over(a2, lam, e) - _cl_sq_over(p.x2 - a2, p.z2 - lam, e)
    gpos = g2 > 0.0
    g2_s = np.where(gpos, g2, 1.0)

    with np.errstate(divide="ignore", invalid="ignore"):
        hroot = np.where(a2 > e, lam * p.X12 / np.where(a2 > e, a2, 1.0), 0.0)
        ok = (lam > 0.0) & (p.z1 - lam > 0.0) & gpos
        lam_s = np.where(lam > 0.0, lam, 1.0)
        rest = np.where(p.z1 - lam > 0.0, p.z1 - lam, 1.0)
        quad_a = 1.0 / lam_s + 1.0 / rest + (a2 / lam_s) ** 2 / g2_s
        quad_b = p.x1 / rest + a2 * p.X12 / (lam_s * g2_s)
        quad = np.where(ok, quad_b / quad_a, 0.0)
    a1 = np.stack(
        [
            np.zeros(lam.shape),
            np.full(lam.shape, p.x1),
            np.clip(hroot, 0.0, p.x1),
            np.clip(quad, 0.0, p.x1),
        ]
    )

    lam_b = lam[None]
    t1 = _cl_sq_over(a1, lam_b, e)
    t2 = _cl_sq_over(p.x1 - a1, p.z1 - lam_b, e)
    h = p.X12 - _cl_prod_over(a1, a2[None], lam_b, e)
    with np.errstate(invalid="ignore"):
        t3 = np.where(
            gpos[None],
            (h * h) / g2_s[None],
            np.where((np.abs(h) <= e) & (g2 >= -e)[None], 0.0, np.inf),
        )
    f = t1 + t2 + t3
    k = np.argmin(f, axis=0)
    gather = np.ogrid[tuple(slice(0, s) for s in lam.shape)]
    return f[(k, *gather)], a1[(k, *gather)]


def _zoom_a2(p: HullPoint, lam: np.ndarray, e: float, rounds: int, width: int):
    """Per-lambda bracket zoom over the second split (convex slice)."""
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    lin = np.linspace(0.0, 1.0, width)
    lo = np.zeros(n)
    hi = np.full(n, p.x2)
    idx = np.arange(n)
    f_best = np.full(n, np.inf)
    a1_best = np.zeros(n)
    a2_best = np.zeros(n)
    lam_mat = np.broadcast_to(lam[:, None], (n, width))
    for _ in range(rounds):
        ts = lo[:, None] + (hi - lo)[:, None] * lin[None, :]
        f, a1 = _best_split1(p, lam_mat, ts, e)
        k = np.argmin(f, axis=1)
        improved = f[idx, k] < f_best
        f_best = np.where(improved, f[idx, k], f_best)
        a1_best = np.where(improved, a1[idx, k], a1_best)
        a2_best = np.where(improved, ts[idx, k], a2_best)
        lo = ts[idx, np.maximum(k - 1, 0)]
        hi = ts[idx, np.minimum(k + 1, width - 1)]
        if p.x2 <= e:
            break
    return f_best, a1_best, a2_best


def oracle_member(
    p: HullPoint,
    tol: Tolerances = DEFAULT_TOL,
    grid: int = 64,
    zoom_rounds: int = 10,
    zoom_width: int = 17,
) -> tuple[bool, OracleWitness]:
    """Numeric membership: minimize the witness objective, compare to X11.

    A coarse grid scans the whole box, then a nested bracket zoom exploits
    joint convexity: the value after minimizing out the splits is convex in
    the disjunction weight, so shrinking a sampled bracket around the
    argmin converges to the global optimum.  A final high-resolution zoom
    at the located weight polishes the witness.  Intended for points with
    X12 and both indicators above eq_tol; the X12 = 0 face and the z = 0
    edges are decided by the closed-form module.
    """
    validate_point(p, tol)
    e = tol.eq_tol
    lam_hi = min(p.z1, p.z2)
    if lam_hi <= e:
        raise EmptyFeasibleSet(
            f"weight interval (0, {lam_hi}] is empty beyond tolerance"
        )
    lam_lo = min(max(p.z1 + p.z2 - 1.0, 0.0), lam_hi)

    n_lam = grid if lam_hi - lam_lo > e else 1
    n_a1 = grid if p.x1 > e else 1
    n_a2 = grid if p.x2 > e else 1
    f_b, lam_b, a1_b, a2_b = _grid_eval(
        p,
        np.linspace(lam_lo, lam_hi, n_lam),
        np.linspace(0.0, p.x1, n_a1),
        np.linspace(0.0, p.x2, n_a2),
        e,
    )

    lin = np.linspace(0.0, 1.0, zoom_width)
    llo, lhi = lam_lo, lam_hi
    for r in range(zoom_rounds):
        last = r == zoom_rounds - 1 or lam_hi - lam_lo <= e
        lam_ax = llo + (lhi - llo) * lin
        phi, a1s, a2s = _zoom_a2(p, lam_ax, e, 14 if last else 6, zoom_width)
        k = int(np.argmin(phi))
        if phi[k] < f_b:
            f_b, lam_b, a1_b, a2_b = float(phi[k]), float(lam_ax[k]), float(a1s[k]), float(a2s[k])
        llo = lam_ax[max(k - 1, 0)]
        lhi = lam_ax[min(k + 1, zoom_width - 1)]
        if last:
            break

    objective = ExtReal.inf() if math.isinf(f_b) else ExtReal.finite(f_b)
    witness = OracleWitness(a1_b, a2_b, lam_b, objective)
    member = (not math.isinf(f_b)) and f_b <= p.X11 + tol.oracle_tol
    return member, witness


# ---------------------------------------------------------------------------
# closed-form optimizers per cell
# ---------------------------------------------------------------------------


def aux_weight_maximizer(p: HullPoint, tol: Tolerances = DEFAULT_TOL) -> float:
    """Unconstrained maximizer of the concave one-variable slack profile
    obtained after fixing the witness splits to their ridge values."""
    e = tol.eq_tol
    xx = p.x1 * p.x2
    lhs = p.X12 * p.z1
    if abs(lhs - xx) <= e:
        return min(p.z1, p.z2)
    if lhs < xx:
        return p.X12 * p.z1 * p.z2 / xx
    return p.X12 * p.z1 * p.z2 / (2.0 * lhs - xx)


def analytic_witness(
    p: HullPoint, region: Region, tol: Tolerances = DEFAULT_TOL
) -> OracleWitness:
    """Closed-form optimizer of the witness problem for the given cell.

    Available for R1, R2, R3, R6, R7, R8 and the z2 < z1 part of R5; the
    remaining cases only admit epsilon-interior optimizers and raise
    :class:`RegionHasNoClosedWitness`.  The returned triple is validated
    and scored by :func:`oracle_objective`.
    """
    validate_point(p, tol)
    actual = classify(p, tol)
    if actual is not region:
        raise ValueError(f"point classifies to {actual.value}, not {region.value}")
    e = tol.eq_tol
    x1, x2, X12, X22, z1, z2 = p.x1, p.x2, p.X12, p.X22, p.z1, p.z2
    s = z1 + z2 - 1.0

    if region is Region.R1:
        if X12 <= e or x1 <= e or x2 <= e or on_indicator_edge(p, tol):
            raise RegionHasNoClosedWitness(
                "R1 face/edge points have no interior closed-form witness"
            )
        lam = X12 * z1 * z2 / (x1 * x2)
        triple = (lam * x1 / z1, lam * x2 / z2, lam)
    elif region is Region.R2:
        triple = (x1, X12 * z1 / x1, z1)
    elif region is Region.R3:
        den = X12 * z2 - x1 * x2
        triple = (x1, (X12 * x2 * z1 + x1 * (X22 * (z2 - z1) - x2 * x2)) / den, z1)
    elif region is Region.R4:
        raise RegionHasNoClosedWitness("R4 optimizers are epsilon-interior only")
    elif region is Region.R5:
        if not z2 < z1 - e:
            raise RegionHasNoClosedWitness(
                "the z1 <= z2 part of R5 has epsilon-interior optimizers only"
            )
        den = X22 * z1 - x2 * x2
        triple = ((x1 * (X22 * z2 - x2 * x2) + X12 * x2 * (z1 - z2)) / den, x2, z2)
    elif region is Region.R6:
        triple = (s * x1 / z1, X12 * z1 / x1, s)
    elif region is Region.R7:
        a1 = (X12 * x2 * (1.0 - z2) + x1 * (X22 * z2 - x2 * x2)) / (X22 - x2 * x2)
        a2 = (x1 * (x2 * x2 - X22 * (1.0 - z1)) - X12 * x2 * z1) / (x1 * x2 - X12)
        triple = (a1, a2, s)
    elif region is Region.R8:
        d = X22 * z2 - x2 * x2
        root = math.sqrt(max(d * (1.0 - z1), 0.0))
        a1 = X12 * z2 / (x2 - root / math.sqrt(s))
        a2 = s * x2 / z2 - math.sqrt(max(d * (1.0 - z1) * s, 0.0)) / z2
        triple = (a1, a2, s)
    else:
        raise RegionHasNoClosedWitness(f"no closed-form witness for {region.value}")

    objective = oracle_objective(p, triple, tol)
    return OracleWitness(triple[0], triple[1], triple[2], objective)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def _sample_s2_array(rng: np.random.Generator, n: int, xmax: float) -> np.ndarray:
    """Vertex-set samples as rows (x1, x2, X11, X12, X22, z1, z2)."""
    piece = rng.integers(1, 5, size=n)
    u1 = rng.uniform(0.0, xmax, size=n)
    u2 = rng.uniform(0.0, xmax, size=n)
    out = np.zeros((n, 7))
    m2 = piece == 2
    out[m2, 0] = u1[m2]
    out[m2, 2] = u1[m2] ** 2
    out[m2, 5] = 1.0
    m3 = piece == 3
    out[m3, 1] = u2[m3]
    out[m3, 4] = u2[m3] ** 2
    out[m3, 6] = 1.0
    m4 = piece == 4
    out[m4, 0] = u1[m4]
    out[m4, 1] = u2[m4]
    out[m4, 2] = u1[m4] ** 2
    out[m4, 3] = u1[m4] * u2[m4]
    out[m4, 4] = u2[m4] ** 2
    out[m4, 5] = 1.0
    out[m4, 6] = 1.0
    return out


def sample_S2(seed: SampleSeed, xmax: float = 2.0) -> list[HullPoint]:
    """Exact vertex-set samples: a uniform piece index, then uniform decision
    values in [0, xmax] with the piece's zero pattern and binary indicators."""
    arr = _sample_s2_array(seed.rng(), seed.count, xmax)
    return [HullPoint.from_coords(row) for row in arr]


def _sample_hull_array(
    rng: np.random.Generator, n: int, k: int, xmax: float
) -> np.ndarray:
    pts = _sample_s2_array(rng, n * k, xmax).reshape(n, k, 7)
    w = rng.dirichlet(np.ones(k), size=n)
    return np.einsum("nk,nkc->nc", w, pts)


def sample_hull(seed: SampleSeed, k: int, xmax: float = 2.0) -> list[HullPoint]:
    """Random convex combinations of k vertex samples, Dirichlet(1) weights."""
    if not 1 <= k <= 8:
        raise ValueError("k must be between 1 and 8")
    arr = _sample_hull_array(seed.rng(), seed.count, k, xmax)
    return [HullPoint.from_coords(row) for row in arr]


def _sample_separable_array(
    rng: np.random.Generator, n: int, xmax: float, lift_max: float
) -> np.ndarray:
    """Uniform samples of the separable relaxation intersected with the
    sampling box, by rejection from the ambient box."""
    rows = []
    have = 0
    while have < n:
        m = max(2 * (n - have), 256)
        cand = np.column_stack(
            [
                rng.uniform(0.0, xmax, m),
                rng.uniform(0.0, xmax, m),
                rng.uniform(0.0, lift_max, m),
                rng.uniform(0.0, lift_max, m),
                rng.uniform(0.0, lift_max, m),
                rng.uniform(0.0, 1.0, m),
                rng.uniform(0.0, 1.0, m),
            ]
        )
        keep = (cand[:, 2] * cand[:, 5] >= cand[:, 0] ** 2) & (
            cand[:, 4] * cand[:, 6] >= cand[:, 1] ** 2
        )
        rows.append(cand[keep])
        have += int(keep.sum())
    return np.concatenate(rows, axis=0)[:n]


def sample_separable_relaxation(
    seed: SampleSeed, xmax: float = 2.0, lift_max: float = 4.0
) -> list[HullPoint]:
    """Uniform samples of the separable relaxation within the sampling box."""
    arr = _sample_separable_array(seed.rng(), seed.count, xmax, lift_max)
    return [HullPoint.from_coords(row) for row in arr]
