"""Min-max separation probe: witnesses, maximum principle, hull contrast."""

import numpy as np
import pytest

from crhull import (
    BiPoly,
    DiskGrid,
    Domain,
    ManifoldSpec,
    hull_scan,
    sample_manifold,
    separate,
)
from crhull.hull import SampleCloud, evaluate_witness

UNIT_CIRCLE = SampleCloud(points=np.exp(2j * np.pi * np.arange(64) / 64)[:, None])


def elliptic_spec(R=0.5):
    return ManifoldSpec(n=2, gamma=0.0, F=BiPoly.zero(0), domain=Domain(T=1.0, R=R))


def hyperbolic_spec(R=0.5):
    return ManifoldSpec(n=2, gamma=1.0, F=BiPoly.zero(0), domain=Domain(T=1.0, R=R))


def probe_grid():
    """8 rings x 16 angles, with rings on the analytic-disc boundaries probed below."""
    radii = (0.1, np.sqrt(0.05), np.sqrt(0.1), 0.2, 0.35, 0.42, 0.46, 0.5)
    return DiskGrid(radius=0.5, radial_count=8, angular_count=16, radii=radii)


class TestSampleManifold:
    def test_cloud_count(self):
        cloud = sample_manifold(hyperbolic_spec(), (), probe_grid())
        assert len(cloud) == 129  # 8 rings x 16 angles + center

    def test_flat_product_count(self):
        spec = ManifoldSpec(
            n=3,
            gamma=1.0,
            F=BiPoly.zero(1),
            f=(BiPoly({((2,), 0, 0): 1.0}, 1),),
            domain=Domain(T=0.5, R=0.5),
            flat=True,
        )
        cloud = sample_manifold(spec, (5,), probe_grid())
        assert len(cloud) == 5 * 129

    def test_points_satisfy_defining_equation(self):
        spec = hyperbolic_spec()
        cloud = sample_manifold(spec, (), probe_grid())
        w = cloud.points[:, 0]
        phi = w * np.conj(w) + spec.gamma * (w**2 + np.conj(w) ** 2)
        assert np.max(np.abs(cloud.points[:, 1] - phi)) <= 1e-14


class TestSeparate:
    def test_circle_linear_chebyshev_optimum(self):
        # minimize |a| + |b| subject to a + 2b = 1 -> P(z) = z/2, value 1/2
        res = separate(UNIT_CIRCLE, [2.0], 1)
        assert res.ratio == pytest.approx(0.5, abs=1e-6)

    def test_center_cannot_be_separated(self):
        # maximum principle: |P(0)| <= max_{|z|=1} |P|
        for deg in (1, 4, 8):
            res = separate(UNIT_CIRCLE, [0.0], deg)
            assert res.ratio >= 1 - 1e-6

    def test_witness_self_certifies(self):
        res = separate(UNIT_CIRCLE, [2.0], 1)
        cloud_vals = evaluate_witness(res, UNIT_CIRCLE.points)
        query_val = evaluate_witness(res, np.array([[2.0 + 0j]]))[0]
        assert abs(query_val - 1.0) <= 1e-10
        assert float(np.max(cloud_vals)) == pytest.approx(res.ratio, abs=1e-10)

    def test_invariants_of_result(self):
        cloud = sample_manifold(hyperbolic_spec(), (), probe_grid())
        res = separate(cloud, [0.0, 0.1j], 4)
        A_at_q = evaluate_witness(res, np.array([[0.0, 0.1j]]))[0]
        assert abs(A_at_q - 1.0) <= 1e-10
        assert float(np.max(evaluate_witness(res, cloud.points))) == pytest.approx(
            res.ratio, abs=1e-10
        )

    def test_degree_monotonicity(self):
        cloud = sample_manifold(hyperbolic_spec(), (), probe_grid())
        prev = None
        for d in range(1, 9):
            ratio = separate(cloud, [0.0, 0.1j], d).ratio
            if prev is not None:
                assert ratio <= prev + 1e-6
            prev = ratio

    def test_translation_rotation_stability(self):
        # per-cloud basis rescaling keeps the probe stable under rigid motions
        cloud = sample_manifold(hyperbolic_spec(), (), probe_grid())
        q = np.array([0.0, 0.1j])
        shift = np.array([0.3 - 0.2j, 0.1 + 0.4j])
        phase = np.exp(0.7j)
        moved = SampleCloud(points=(cloud.points + shift) * phase)
        for degree in (1, 2, 3, 4):
            base = separate(cloud, q, degree).ratio
            res = separate(moved, (q + shift) * phase, degree)
            assert res.ratio == pytest.approx(base, abs=1e-8)

    def test_degenerate_cloud_flagged(self):
        cloud = SampleCloud(points=np.zeros((5, 2), dtype=complex))
        results = hull_scan(cloud, [[1.0, 1.0]], 2)
        # a rank-deficient basis either separates exactly or reports None;
        # with an all-zero cloud the monomial z1 is a perfect witness
        assert results[0] is None or results[0].ratio <= 1e-8

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            separate(UNIT_CIRCLE, [2.0], 0)
        with pytest.raises(ValueError):
            separate(UNIT_CIRCLE, [2.0], 11)
        with pytest.raises(ValueError):
            separate(UNIT_CIRCLE, [np.nan], 2)


class TestHullContrast:
    """Elliptic points sit in the hull (Bishop discs); hyperbolic ones separate."""

    def test_elliptic_disk_points_not_separated(self):
        # the cloud carries the disc boundaries {|w|^2 = s}, so the discrete
        # mean over each 16-point ring pins the ratio at 1
        cloud = sample_manifold(elliptic_spec(), (), probe_grid())
        for s in (0.01, 0.05, 0.1):
            res = separate(cloud, [0.0, s], 8)
            assert res.ratio >= 0.99, s

    def test_hyperbolic_point_separates(self):
        cloud = sample_manifold(hyperbolic_spec(), (), probe_grid())
        res = separate(cloud, [0.0, 0.1j], 8)
        assert res.ratio <= 0.9
        # frozen regression
        assert res.ratio == pytest.approx(0.09614, abs=2e-3)

    def test_far_query_linear(self):
        # discrete Chebyshev optimum on z2 in [-1/4, 3/4] normalized at 5 is 2/19
        cloud = sample_manifold(hyperbolic_spec(), (), probe_grid())
        res = separate(cloud, [0.0, 5.0], 1)
        assert res.ratio == pytest.approx(2.0 / 19.0, abs=1e-6)

    def test_queries_on_cloud(self):
        cloud = sample_manifold(elliptic_spec(), (), probe_grid())
        results = hull_scan(cloud, [cloud.points[17], cloud.points[64]], 3)
        for res in results:
            assert res is not None and res.ratio >= 1 - 1e-6
