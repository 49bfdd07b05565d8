import math

import numpy as np
import pytest

from psdfact.quartic import (
    QuarticCoeffs,
    cardano_minimize,
    minimize_quartic_safe,
    quartic_value,
)


def grid_min(coeffs, lo=-10.0, hi=10.0, step=1e-3):
    xs = np.arange(lo, hi + step, step)
    c3, c2, c1, c0 = coeffs
    vals = xs * (c0 + xs * (c1 / 2.0 + xs * (c2 / 3.0 + xs * c3 / 4.0)))
    return float(vals.min())


class TestCardano:
    def test_pure_quartic(self):
        assert cardano_minimize(QuarticCoeffs(1, 0, 0, 0)) == pytest.approx(0.0, abs=1e-15)

    def test_double_well_tie_takes_second_root(self):
        # f' = 4x^3 - 4x: minima at +-1 with equal value; the comparison is a
        # strict less-than, so the tie resolves to the second candidate, -1.
        x = cardano_minimize(QuarticCoeffs(4, 0, -4, 0))
        assert x == pytest.approx(-1.0, abs=1e-12)
        f = lambda t: quartic_value((4, 0, -4, 0), t)
        assert f(1.0) == pytest.approx(f(-1.0))
        assert f(x) <= min(f(0.5), f(0.0), f(2.0))

    def test_single_real_root(self):
        # f' = x^3 - 1, discriminant positive
        assert cardano_minimize(QuarticCoeffs(1, 0, 0, -1)) == pytest.approx(1.0, rel=1e-12)

    def test_rejects_nonpositive_leading(self):
        with pytest.raises(ValueError):
            cardano_minimize(QuarticCoeffs(0.0, 0, 1, 1))

    def test_stationarity(self):
        rng = np.random.default_rng(0)
        for _ in range(400):
            c = QuarticCoeffs(rng.uniform(0.1, 10), *rng.uniform(-5, 5, size=3))
            x = cardano_minimize(c)
            grad = c.c0 + x * (c.c1 + x * (c.c2 + x * c.c3))
            assert abs(grad) <= 1e-8 * (1 + abs(c.c3) + abs(c.c2) + abs(c.c1) + abs(c.c0))

    def test_sampled_global_minimality(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            c = QuarticCoeffs(rng.uniform(0.1, 10), *rng.uniform(-5, 5, size=3))
            x = cardano_minimize(c)
            fx = quartic_value(c, x)
            for h in (1e-3, 1e-2, 0.1, 1.0):
                assert fx <= quartic_value(c, x + h) + 1e-12 * (1 + abs(fx))
                assert fx <= quartic_value(c, x - h) + 1e-12 * (1 + abs(fx))

    def test_scale_equivariance(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            c = (rng.uniform(0.1, 10), *rng.uniform(-5, 5, size=3))
            x = cardano_minimize(c)
            for lam in (1e-3, 7.0, 1e3):
                xs = cardano_minimize(tuple(lam * v for v in c))
                assert xs == pytest.approx(x, abs=1e-8 * (1 + abs(x)))


class TestSafeWrapper:
    def test_quadratic_case(self):
        assert minimize_quartic_safe(QuarticCoeffs(0, 0, 2, -2)) == pytest.approx(1.0)

    def test_flat_case(self):
        assert minimize_quartic_safe(QuarticCoeffs(0, 0, 0, 0)) == 0.0

    def test_concave_quadratic_falls_back_to_zero(self):
        assert minimize_quartic_safe(QuarticCoeffs(0, 0, -3, 0)) == 0.0

    def test_delegates_to_cardano(self):
        assert minimize_quartic_safe(QuarticCoeffs(1, 0, 0, -1)) == pytest.approx(1.0, rel=1e-12)

    def test_grid_oracle(self):
        # 1000 random quartics against a brute-force grid search
        rng = np.random.default_rng(3)
        for _ in range(1000):
            c = QuarticCoeffs(rng.uniform(0.1, 10), *rng.uniform(-5, 5, size=3))
            x = minimize_quartic_safe(c)
            assert quartic_value(c, x) <= grid_min(c) + 1e-6
