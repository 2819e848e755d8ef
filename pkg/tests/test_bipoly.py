"""Exact polynomial arithmetic in (t, w, wbar)."""

import numpy as np
import pytest

from crhull import BiPoly, poly_eval, poly_rotate, poly_wirtinger


def rand_poly(rng, t_arity=0, n_terms=6, max_deg=4):
    terms = {}
    for _ in range(n_terms):
        a = tuple(int(rng.integers(0, 3)) for _ in range(t_arity))
        b, c = int(rng.integers(0, max_deg)), int(rng.integers(0, max_deg))
        terms[(a, b, c)] = complex(*(rng.uniform(-2, 2, 2)))
    return BiPoly(terms, t_arity)


class TestEval:
    def test_modulus_squared(self):
        P = BiPoly({((), 1, 1): 1.0}, 0)
        assert poly_eval(P, (), 3 + 4j) == pytest.approx(25.0)

    def test_conjugate_symmetry_cancels(self):
        P = BiPoly({((), 2, 0): 1.0, ((), 0, 2): 1.0}, 0)
        assert poly_eval(P, (), 1 + 1j) == pytest.approx(0.0)

    def test_t_dependence(self):
        P = BiPoly({((2,), 1, 0): 1.0, ((2,), 0, 1): 1.0}, 1)
        assert poly_eval(P, (0.5,), 1 + 2j) == pytest.approx(0.5)

    def test_array_broadcast(self):
        rng = np.random.default_rng(0)
        P = rand_poly(rng)
        w = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        vec = P.eval((), w)
        for i in range(50):
            assert vec[i] == pytest.approx(P.eval((), complex(w[i])), rel=1e-13)


class TestWirtinger:
    def test_wbar_of_bilinear(self):
        P = BiPoly({((), 1, 1): 1.0}, 0)
        assert poly_wirtinger(P, "wbar") == BiPoly({((), 1, 0): 1.0}, 0)

    def test_w_of_quadratic(self):
        P = BiPoly({((), 2, 0): 1.0, ((), 0, 2): 1.0}, 0)
        assert poly_wirtinger(P, "w") == BiPoly({((), 1, 0): 2.0}, 0)

    def test_term_rule_with_parameters(self):
        P = BiPoly({((2,), 3, 1): 1.0}, 1)
        assert poly_wirtinger(P, "w") == BiPoly({((2,), 2, 1): 3.0}, 1)

    def test_product_rule(self):
        rng = np.random.default_rng(1)
        P, Q = rand_poly(rng), rand_poly(rng)
        lhs = poly_wirtinger(P * Q, "w")
        rhs = poly_wirtinger(P, "w") * Q + P * poly_wirtinger(Q, "w")
        diff = lhs - rhs
        assert all(abs(v) < 1e-12 for v in diff.terms.values())


class TestRotate:
    def test_modulus_invariant(self):
        P = BiPoly({((), 1, 1): 1.0}, 0)
        assert poly_rotate(P, 0.7) == P

    def test_wbar_squared_half_turn(self):
        P = BiPoly({((), 0, 2): 1.0}, 0)
        R = poly_rotate(P, np.pi / 2)
        assert R.coefficient((), 0, 2) == pytest.approx(-1.0, abs=1e-15)

    def test_w_pi(self):
        P = BiPoly({((), 1, 0): 1.0}, 0)
        assert poly_rotate(P, np.pi).coefficient((), 1, 0) == pytest.approx(-1.0, abs=1e-15)

    def test_rotation_evaluation_identity(self):
        # rotated(P)(t, z) == P(t, e^{i theta} z) over random draws
        rng = np.random.default_rng(2)
        for _ in range(1000):
            P = rand_poly(rng, t_arity=1, n_terms=4)
            theta = float(rng.uniform(-np.pi, np.pi))
            t = (float(rng.uniform(-1, 1)),)
            z = complex(*(rng.uniform(-1, 1, 2)))
            lhs = poly_rotate(P, theta).eval(t, z)
            rhs = P.eval(t, np.exp(1j * theta) * z)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestShiftAndStructure:
    def test_shift_matches_evaluation(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            P = rand_poly(rng)
            eta = complex(*(rng.uniform(-1, 1, 2)))
            z = complex(*(rng.uniform(-1, 1, 2)))
            assert P.shift_w(eta).eval((), z) == pytest.approx(
                P.eval((), z + eta), rel=1e-12, abs=1e-12
            )

    def test_real_valued_polynomials_evaluate_real(self):
        # conjugation-symmetric coefficients produce real values
        P = BiPoly({((), 2, 0): -0.25j, ((), 0, 2): 0.25j}, 0)  # u*v
        assert P.is_conjugation_symmetric()
        rng = np.random.default_rng(4)
        w = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        vals = P.eval((), w)
        assert np.max(np.abs(vals.imag)) < 1e-14
        assert np.allclose(vals.real, w.real * w.imag)

    def test_subs_t(self):
        P = BiPoly({((2,), 1, 0): 3.0, ((0,), 0, 2): 1.0}, 1)
        Q = P.subs_t((0.5,))
        assert Q.t_arity == 0
        assert Q.coefficient((), 1, 0) == pytest.approx(0.75)
        assert Q.coefficient((), 0, 2) == pytest.approx(1.0)

    def test_split_by_w_order(self):
        P = BiPoly({((), 1, 1): 1.0, ((), 3, 0): 2.0, ((), 0, 0): 5.0}, 0)
        low, high = P.split_by_w_order(3)
        assert low == BiPoly({((), 1, 1): 1.0, ((), 0, 0): 5.0}, 0)
        assert high == BiPoly({((), 3, 0): 2.0}, 0)

    def test_zero_coefficients_dropped(self):
        P = BiPoly({((), 1, 0): 1.0}, 0) - BiPoly({((), 1, 0): 1.0}, 0)
        assert P.is_zero()
        assert P.terms == {}

    def test_arity_mismatch_raises(self):
        with pytest.raises(ValueError):
            BiPoly({((), 1, 0): 1.0}, 0).eval((0.3,), 0.0)
        with pytest.raises(ValueError):
            BiPoly({((1,), 0, 0): 1.0}, 1) * BiPoly({((), 1, 0): 1.0}, 0)

    def test_power(self):
        P = BiPoly({((), 1, 0): 1.0, ((), 0, 0): 1.0}, 0)  # 1 + w
        cube = P**3
        assert cube.coefficient((), 2, 0) == pytest.approx(3.0)
        assert (P**0) == BiPoly.constant(1.0, 0)

    def test_conjugate_evaluates_to_conjugate(self):
        rng = np.random.default_rng(5)
        P = rand_poly(rng)
        for _ in range(20):
            z = complex(*(rng.uniform(-1, 1, 2)))
            assert P.conjugate().eval((), z) == pytest.approx(
                np.conj(P.eval((), z)), rel=1e-12, abs=1e-12
            )

    def test_t_partial(self):
        P = BiPoly({((2, 1), 1, 0): 4.0}, 2)
        assert P.t_partial(0) == BiPoly({((1, 1), 1, 0): 8.0}, 2)
        assert P.t_partial(1) == BiPoly({((2, 0), 1, 0): 4.0}, 2)
        assert P.t_partial(1).t_partial(1).is_zero()
