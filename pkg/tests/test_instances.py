import math

import numpy as np
import pytest

from psdfact.instances import (
    PHI,
    FamilySpec,
    default_k,
    fixture_decagon,
    fixture_octagon,
    fixture_octagon_sqrt,
    fixture_p4_symmetric,
    fixture_pentagon,
    fixture_square,
    fixtures,
    gen_cor,
    gen_ngon,
    gen_pn,
    generate,
)
from psdfact.matops import sym_eig
from psdfact.model import verify_factorization


def circulant(first_row):
    c = np.asarray(first_row, dtype=float)
    n = len(c)
    return c[(np.arange(n)[None, :] - np.arange(n)[:, None]) % n]


SQRT2 = math.sqrt(2.0)

S4_PRINTED = circulant([0.0, 1.0, 1.0, 0.0])
S5_PRINTED = circulant([0.0, 1.0, PHI, 1.0, 0.0])
S8_PRINTED = circulant([0.0, 1.0, 1 + SQRT2, 2 + SQRT2, 2 + SQRT2, 1 + SQRT2, 1.0, 0.0])
S10_PRINTED = circulant([0.0, 0.0, PHI ** -2, 1.0, PHI, 2.0, 2.0, PHI, 1.0, PHI ** -2])

P4_PRINTED = np.array([
    [2, 1, 1, 1, 1, 0],
    [1, 2, 1, 1, 0, 1],
    [1, 1, 2, 0, 1, 1],
    [1, 1, 0, 2, 1, 1],
    [1, 0, 1, 1, 2, 1],
    [0, 1, 1, 1, 1, 2],
], dtype=float)


class TestNgon:
    @pytest.mark.parametrize("n,expected", [
        (4, S4_PRINTED), (5, S5_PRINTED), (8, S8_PRINTED), (10, S10_PRINTED),
    ])
    def test_reproduces_known_matrices(self, n, expected):
        assert np.abs(gen_ngon(n).X - expected).max() <= 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 9, 10, 12, 17, 32])
    def test_circulant_with_two_exact_zeros(self, n):
        X = gen_ngon(n).X
        first = X[0]
        for i in range(n):
            assert np.array_equal(X[i], np.roll(first, i))
        assert (X >= 0).all()
        assert int(np.sum(first == 0.0)) == 2

    @pytest.mark.parametrize("n", [3, 5, 8, 12, 24])
    def test_adjacent_slack_normalization(self, n):
        vals = gen_ngon(n).X[0]
        assert vals[vals > 0].min() == pytest.approx(1.0, abs=1e-15)

    def test_value_sets(self):
        assert np.allclose(sorted(set(np.round(gen_ngon(8).X[0], 12))),
                           sorted({0.0, 1.0, 1 + SQRT2, 2 + SQRT2}))
        assert np.allclose(sorted(set(np.round(gen_ngon(10).X[0], 12))),
                           sorted({0.0, PHI ** -2, 1.0, PHI, 2.0}))

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            gen_ngon(2)


class TestPn:
    def test_p4_matches_printed_matrix(self):
        assert np.array_equal(gen_pn(4).X, P4_PRINTED)

    def test_p5_dims(self):
        inst = gen_pn(5)
        assert inst.X.shape == (10, 10)

    def test_matches_bruteforce_subset_intersections(self):
        import itertools
        n = 5
        X = gen_pn(n).X
        lo = list(itertools.combinations(range(n), n // 2))
        hi = list(itertools.combinations(range(n), (n + 1) // 2))
        for i, s in enumerate(lo):
            for j, t in enumerate(hi):
                assert X[i, j] == len(set(s) & set(t))

    def test_entry_bounds(self):
        for n in (4, 5, 6):
            X = gen_pn(n).X
            assert X.min() >= max(0, n // 2 + (n + 1) // 2 - n) - 1e-12
            assert X.max() <= n // 2

    def test_row_guard(self):
        with pytest.raises(ValueError):
            gen_pn(16)
        with pytest.raises(ValueError):
            gen_pn(2)


class TestCor:
    def test_dims_and_symmetry(self):
        X = gen_cor(3).X
        assert X.shape == (8, 8)
        assert np.array_equal(X, X.T)

    def test_entry_examples(self):
        X = gen_cor(3).X
        # index 0 is the zero vector: (1 - 0)^2 = 1 against everything
        assert np.array_equal(X[0], np.ones(8))
        # u = (1,1,0) is index 3 with least-significant-bit-first counting
        assert X[3, 3] == (1 - 2) ** 2 == 1

    def test_value_set(self):
        n = 4
        X = gen_cor(n).X
        allowed = {(1 - s) ** 2 for s in range(n + 1)}
        assert set(np.unique(X)).issubset(allowed)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            gen_cor(0)
        with pytest.raises(ValueError):
            gen_cor(13)


class TestBenchmarkTable:
    def test_dimensions(self):
        expected = {
            ("ngon", 12): (12, 12), ("ngon", 16): (16, 16), ("ngon", 20): (20, 20),
            ("ngon", 24): (24, 24), ("ngon", 28): (28, 28), ("ngon", 32): (32, 32),
            ("pn", 5): (10, 10), ("pn", 6): (20, 20), ("pn", 7): (35, 35),
            ("cor", 3): (8, 8), ("cor", 4): (16, 16), ("cor", 5): (32, 32),
        }
        for (family, n), dims in expected.items():
            assert generate(family, n).X.shape == dims

    def test_default_k(self):
        assert default_k("ngon", 12) == 5
        assert default_k("ngon", 16) == 5
        assert default_k("ngon", 20) == 6
        assert default_k("ngon", 32) == 6
        assert default_k("pn", 5) == 4
        assert default_k("pn", 6) == 6
        assert default_k("pn", 7) == 6
        assert default_k("cor", 3) == 4
        assert default_k("cor", 5) == 6

    def test_family_spec(self):
        spec = FamilySpec("cor", 3)
        assert spec.instance().X.shape == (8, 8)
        assert spec.k() == 4
        with pytest.raises(ValueError):
            FamilySpec("nope", 3)


class TestFixtures:
    def test_all_fixtures_verify(self):
        for fx in fixtures():
            rep = verify_factorization(fx.instance, fx.factors, 1e-9)
            assert rep.passed, f"{fx.name}: {rep.summary()}"

    def test_fixture_shapes(self):
        assert fixture_square().factors.k == 3
        assert fixture_pentagon().factors.k == 4
        assert fixture_octagon().factors.profile().r_b == (2,) * 8
        assert fixture_decagon().factors.profile().r_a == (3,) * 10
        p4 = fixture_p4_symmetric()
        assert p4.symmetric
        for ai, bi in zip(p4.factors.a, p4.factors.b):
            assert np.array_equal(ai, bi)

    def test_sqrt_fixture_identity(self):
        fx = fixture_octagon_sqrt()
        WH = fx.left @ fx.right
        target = fx.signs * np.sqrt(fx.instance.X)
        assert np.linalg.norm(WH - target) / np.linalg.norm(WH) < 1e-9
        assert np.abs(WH ** 2 - fx.instance.X).max() < 1e-9

    def test_sqrt_fixture_rank_at_most_six(self):
        fx = fixture_octagon_sqrt()
        WH = fx.left @ fx.right
        vals = sym_eig(WH @ WH.T).eigenvalues
        svals = np.sqrt(np.maximum(vals, 0.0))
        assert int(np.sum(svals > 1e-8 * svals[0])) <= 6

    def test_sqrt_fixture_gram_view_is_rank_one(self):
        fx = fixture_octagon_sqrt()
        fs = fx.gram_factors()
        assert fs.k == 6
        assert fs.profile().r_a == (1,) * 8
        assert fs.profile().r_b == (1,) * 8
