import numpy as np
import pytest

from pairhull import (
    HullPoint,
    Region,
    classify,
    in_relaxation_ctilde,
    member_hull,
    psd_support_cut,
    q_gradient,
    q_value,
    separate,
    taylor_cut,
)
from pairhull.errors import (
    InputOutsideCtilde,
    NotOnBoundary,
    StrictDomainViolated,
)
from pairhull.verify import family_touch_points, shrunken_nonmembers

WORKED = HullPoint(0.1, 1.0, 1.0, 1.2, 2.5, 0.5, 0.5)


def fd_gradient(family: str, p: HullPoint, h: float = 1e-6) -> np.ndarray:
    c = np.array(p.coords())
    g = np.zeros(7)
    for i in range(7):
        step = h * (1.0 + abs(c[i]))
        up, dn = c.copy(), c.copy()
        up[i] += step
        dn[i] -= step
        g[i] = (
            q_value(family, HullPoint.from_coords(up))
            - q_value(family, HullPoint.from_coords(dn))
        ) / (2.0 * step)
    return g


class TestWorkedExample:
    def test_separation_outcome(self):
        res = separate(WORKED)
        assert not res.inside
        assert res.region is Region.R4
        assert res.cut is not None

    def test_touch_point(self):
        res = separate(WORKED)
        touch = res.cut.touch
        assert touch.X11 == pytest.approx(2.02, abs=1e-12)
        assert abs(res.cut.evaluate(touch)) <= 1e-12
        assert member_hull(touch).member

    def test_cut_violated_by_query(self):
        res = separate(WORKED)
        assert res.cut.evaluate(WORKED) < -1e-9

    def test_raw_gradient_coefficient_on_x11(self):
        touch = separate(WORKED).cut.touch
        raw = taylor_cut(Region.R4, touch)
        # slope in X11 equals X22 - x2^2/z2 at the touch
        assert raw.coeffs[2] == pytest.approx(0.5, abs=1e-12)

    def test_member_query_returns_inside(self):
        res = separate(HullPoint(0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5))
        assert res.inside and res.cut is None

    def test_outside_relaxation_rejected(self):
        with pytest.raises(InputOutsideCtilde):
            separate(HullPoint(1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5))


class TestDeterminism:
    def test_identical_inputs_identical_cuts(self):
        a = separate(WORKED).cut
        b = separate(WORKED).cut
        assert a.coeffs.tobytes() == b.coeffs.tobytes()
        assert a.constant == b.constant
        assert a.touch == b.touch


class TestGradients:
    @pytest.mark.parametrize("family", ["II", "III", "V"])
    def test_analytic_matches_finite_differences(self, family):
        rng = np.random.default_rng(61)
        for p in family_touch_points(rng, 60, family):
            ga = q_gradient(family, p)
            gf = fd_gradient(family, p)
            scale = max(float(np.max(np.abs(ga))), 1e-8)
            assert float(np.max(np.abs(ga - gf))) / scale <= 1e-5

    def test_taylor_cut_zero_at_base(self):
        rng = np.random.default_rng(62)
        for p in family_touch_points(rng, 20, "II"):
            region = classify(p)
            cut = taylor_cut(region, p)
            assert abs(cut.evaluate(p)) <= 1e-9

    def test_taylor_cut_rejects_off_boundary_base(self):
        with pytest.raises(ValueError):
            taylor_cut(Region.R4, WORKED)  # q(WORKED) != 0


class TestCutSoundness:
    def test_cuts_valid_on_vertex_samples(self, s2_batch):
        rng = np.random.default_rng(63)
        queries = shrunken_nonmembers(rng, 200)
        for p in queries:
            res = separate(p)
            assert not res.inside
            cut = res.cut
            assert cut.evaluate(p) < -1e-9
            assert abs(cut.evaluate(cut.touch)) <= 1e-9
            assert member_hull(cut.touch).member
            assert float(cut.evaluate_rows(s2_batch).min()) >= -1e-8

    def test_cut_normalization(self):
        cut = separate(WORKED).cut
        assert float(np.max(np.abs(cut.coeffs))) == pytest.approx(1.0)


class TestIndicatorEdgeSeparation:
    def test_edge_member_is_inside(self):
        res = separate(HullPoint(0.0, 1.0, 4.0, 0.5, 1.5, 0.0, 1.0))
        assert res.inside

    def test_edge_nonmember_gets_sound_cut(self, s2_batch):
        p = HullPoint(0.0, 1.0, 1.0, 1.2, 2.5, 0.0, 0.5)
        res = separate(p)
        assert not res.inside
        assert res.cut.evaluate(p) < -1e-9
        assert float(res.cut.evaluate_rows(s2_batch).min()) >= -1e-8
        assert res.cut.touch.X11 == pytest.approx(1.44 / 0.5, abs=1e-12)

    def test_second_edge_nonmember_gets_sound_cut(self, s2_batch):
        p = HullPoint(1.0, 0.0, 3.0, 1.2, 1.0, 0.5, 0.0)
        assert in_relaxation_ctilde(p)
        res = separate(p)
        assert not res.inside
        # bound: x1^2/z1 + X12^2 / X22 = 2 + 1.44
        assert res.cut.touch.X11 == pytest.approx(2.0 + 1.44, abs=1e-12)
        assert float(res.cut.evaluate_rows(s2_batch).min()) >= -1e-8


class TestPsdSupportCut:
    @staticmethod
    def _boundary_instance(rng):
        while True:
            g = rng.normal(size=(2, 3))
            m = g.T @ g
            zi, xi, xj = m[0, 0], m[0, 1], m[0, 2]
            Xii, Xij, Xjj = m[1, 1], m[1, 2], m[2, 2]
            if not 0.02 < zi < 0.98:
                continue
            if xi <= 0.02 or xj <= 0.02:
                continue
            if Xij * zi <= xi * xj + 1e-6 or Xjj * xi <= Xij * xj + 1e-6:
                continue
            return (xi, xj, Xii, Xij, Xjj, zi), m, g

    def test_gram_instance_yields_tight_valid_cut(self, s2_batch):
        rng = np.random.default_rng(64)
        for _ in range(30):
            p6, m, g = self._boundary_instance(rng)
            cut = psd_support_cut(p6)
            assert abs(cut.evaluate(cut.touch)) <= 1e-9
            assert float(cut.evaluate_rows(s2_batch).min()) >= -1e-8
            # null vector cross-check: the cut coefficients reproduce
            # v^T M v with v the cross product of the two Gram rows
            v = np.cross(g[0], g[1])
            v /= np.linalg.norm(v)
            quad = float(v @ m @ v)
            assert abs(quad) <= 1e-9

    def test_interior_point_rejected(self):
        m = np.eye(3)
        m[0, 0] = 0.5
        m[0, 1] = m[1, 0] = 0.2
        with pytest.raises((NotOnBoundary, StrictDomainViolated)):
            psd_support_cut((0.2, 0.1, 1.0, 0.9, 1.0, 0.5))

    def test_strict_domain_violation_rejected(self):
        rng = np.random.default_rng(65)
        g = rng.normal(size=(2, 3))
        m = g.T @ g
        # force the first strict condition to fail by swapping coordinates
        with pytest.raises(StrictDomainViolated):
            psd_support_cut((m[0, 1], m[0, 2], m[1, 1], 0.0, m[2, 2], m[0, 0] % 0.9 + 0.05))

    def test_touch_completion_is_member(self):
        rng = np.random.default_rng(66)
        p6, _, _ = self._boundary_instance(rng)
        cut = psd_support_cut(p6)
        assert member_hull(cut.touch).member
