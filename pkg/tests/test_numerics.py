"""Kernels: square-root deviation, finite-difference jets, C^2 bounds."""

import numpy as np
import pytest

from crhull import (
    BiPoly,
    DiskGrid,
    DomainError,
    c2_norm_upper,
    jet_at,
    ManifoldSpec,
    sqrt1p_deviation,
    wirtinger_jet,
)

SQRT_BOUND = 10.0 / 11.0


class TestSqrt1pDeviation:
    def test_zero_is_fixed_point(self):
        assert sqrt1p_deviation(0.0) == 0.0

    def test_quarter_real(self):
        # direct evaluation of the principal square root at z = 0.25
        q = sqrt1p_deviation(0.25)
        assert q == pytest.approx(1.0 - np.sqrt(1.25), abs=1e-15)
        assert abs(q) <= SQRT_BOUND * 0.25

    def test_imaginary_input(self):
        q = sqrt1p_deviation(0.2j)
        assert abs(q) <= SQRT_BOUND * 0.2
        # same point by direct evaluation
        assert q == pytest.approx(1.0 - np.sqrt(1.0 + 0.2j), abs=1e-15)

    def test_outside_domain_raises(self):
        with pytest.raises(DomainError):
            sqrt1p_deviation(0.26)
        with pytest.raises(DomainError):
            sqrt1p_deviation(np.array([0.1, 0.3j * 1.1]))

    def test_bound_and_inverse_property(self):
        # 1e5 random draws: |q| <= (10/11)|z| and (1-q)^2 == 1+z.
        rng = np.random.default_rng(0)
        z = (0.25 * np.sqrt(rng.random(100_000))) * np.exp(
            2j * np.pi * rng.random(100_000)
        )
        q = sqrt1p_deviation(z)
        assert np.all(np.abs(q) <= SQRT_BOUND * np.abs(z))
        assert np.all(np.abs(q) < 0.9)
        recon = (1.0 - q) ** 2
        assert np.max(np.abs(recon - (1.0 + z)) / np.abs(1.0 + z)) < 1e-12


class TestWirtingerJet:
    def test_bilinear_exact(self):
        jet = wirtinger_jet(lambda w: w * np.conj(w), 0.0, h=1e-4)
        assert jet.b(1, 1) == pytest.approx(1.0, abs=1e-8)
        for key in [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2)]:
            assert abs(jet.b(*key)) < 1e-8

    def test_pure_quadratics_match_exact_jet(self):
        # FD jet agrees with the exact recentered expansion of the same slice.
        spec = ManifoldSpec(n=2, gamma=1.0, F=BiPoly.zero(0))
        phi = spec.phi_slice(())  # w wbar + w^2 + wbar^2
        fd = wirtinger_jet(lambda w: phi.eval((), w), 0.0, h=1e-4)
        exact = jet_at(spec, (), 0.0)
        for key in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
            assert fd.b(*key) == pytest.approx(exact.b(*key), abs=1e-6)
        # Taylor convention: the wbar^2 coefficient equals gamma itself,
        # i.e. half the raw second wbar-derivative.
        assert fd.b(0, 2) == pytest.approx(1.0, abs=1e-6)
        raw_second = 2.0 * fd.b(0, 2)
        assert raw_second == pytest.approx(
            complex(phi.wirtinger("wbar").wirtinger("wbar").eval((), 0.0)), abs=1e-6
        )

    def test_cubic_off_center(self):
        # exact differentiation oracle: d(w^3)/dw at 0.1 equals 0.03
        jet = wirtinger_jet(lambda w: w**3, 0.1, h=1e-4)
        assert jet.b(1, 0) == pytest.approx(3 * 0.1**2, abs=1e-8)
        assert jet.b(0, 1) == pytest.approx(0.0, abs=1e-8)

    def test_polynomials_match_exact_jets(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            terms = {}
            for _ in range(6):
                b, c = int(rng.integers(0, 4)), int(rng.integers(0, 4))
                terms[((), b, c)] = complex(*(rng.uniform(-10, 10, 2)))
            P = BiPoly(terms, 0)
            p = complex(*(rng.uniform(-0.3, 0.3, 2)))
            fd = wirtinger_jet(lambda w: P.eval((), w), p, h=1e-4)
            shifted = P.shift_w(p)
            for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
                assert fd.b(i, j) == pytest.approx(
                    shifted.coefficient((), i, j), abs=1e-6
                ), (i, j, P)


class TestC2NormUpper:
    def test_zero(self):
        b = c2_norm_upper(BiPoly.zero(0), 1.0)
        assert b.upper == 0.0 and b.grid_max == 0.0

    def test_cubic_closed_form(self):
        # partials of w^3 in real coordinates give max(r^3, 3r^2, 6r) = 6r
        b = c2_norm_upper(BiPoly({((), 3, 0): 1.0}, 0), 0.01)
        assert b.upper == pytest.approx(0.06, rel=1e-14)

    def test_mixed_cubic_grid_vs_upper(self):
        F = BiPoly({((), 2, 1): 1.0}, 0)  # w^2 wbar
        grid = DiskGrid(radius=0.1, radial_count=32, angular_count=64)
        b = c2_norm_upper(F, 0.1, grid=grid)
        # derivative oracle: F_xx etc. of w^2 wbar have coefficient sum 6 at degree 1,
        # so upper = 6 * 0.1 at small radii.
        assert b.upper == pytest.approx(0.6, rel=1e-12)
        assert b.grid_max <= b.upper * (1 + 1e-12)

    def test_grid_never_exceeds_upper(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            terms = {}
            for _ in range(5):
                b_, c_ = int(rng.integers(0, 5)), int(rng.integers(0, 5))
                terms[((), b_, c_)] = complex(*(rng.uniform(-3, 3, 2)))
            P = BiPoly(terms, 0)
            r = float(rng.uniform(0.05, 2.0))
            bound = c2_norm_upper(P, r)
            assert bound.grid_max <= bound.upper * (1 + 1e-12)

    def test_requires_parameter_free(self):
        with pytest.raises(ValueError):
            c2_norm_upper(BiPoly({((1,), 2, 1): 1.0}, 1), 0.5)


class TestDiskGrid:
    def test_contains_center_and_boundary(self):
        g = DiskGrid(radius=0.5, radial_count=8, angular_count=16)
        assert len(g) == 129
        assert np.any(g.points == 0)
        boundary = np.isclose(np.abs(g.points), 0.5, rtol=1e-12)
        assert boundary.sum() >= 16
        assert np.all(np.abs(g.points) <= 0.5 * (1 + 1e-12))

    def test_custom_radii_must_reach_boundary(self):
        with pytest.raises(ValueError):
            DiskGrid(radius=1.0, radial_count=2, angular_count=4, radii=(0.3, 0.6))

    def test_custom_radii(self):
        g = DiskGrid(radius=1.0, radial_count=3, angular_count=4, radii=(0.25, 0.5, 1.0))
        assert set(np.round(np.unique(np.abs(g.points)), 12)) == {0.0, 0.25, 0.5, 1.0}
