"""Complex chart, determinant twin pair, and the det = 0 locus."""

import numpy as np
import pytest

from detmin.dual import gradient_of, hessian_of
from detmin.errors import InvalidChartPoint, SingularGram
from detmin.kahler import (ComplexChartPoint, TwinHarmonicPair,
                           complex_chart_embedding, complex_chart_geometry,
                           complex_chart_jacobian,
                           complex_chart_second_derivatives, flatten,
                           rho_value, sample_complex_chart_point,
                           sample_zeta_point, twin_harmonic_suite, unflatten,
                           zeta_minimality)
from detmin.linalg import make_rng, max_abs


def _embed_generic(flat):
    x, y = flat[:3], flat[3:6]
    lam, mu = flat[6], flat[7]
    re2 = [lam * x[i] - mu * y[i] for i in range(3)]
    im2 = [lam * y[i] + mu * x[i] for i in range(3)]
    return np.array(list(x) + list(y) + re2 + im2, dtype=object)


def _flat(cp):
    return np.concatenate([cp.x, cp.y, [cp.lam, cp.mu]])


class TestComplexChart:

    def test_point_validation(self):
        with pytest.raises(InvalidChartPoint):
            ComplexChartPoint(np.zeros(3), np.zeros(3), 1.0, 0.0)
        with pytest.raises(InvalidChartPoint):
            ComplexChartPoint(np.zeros(2), np.zeros(3), 1.0, 0.0)

    def test_jacobian_matches_dual_numbers(self):
        rng = make_rng(1)
        for _ in range(5):
            cp = sample_complex_chart_point(rng)
            jac_ad = gradient_of(_embed_generic, _flat(cp))
            assert np.allclose(complex_chart_jacobian(cp), jac_ad, atol=1e-13)

    def test_second_derivatives_match_dual_numbers(self):
        rng = make_rng(2)
        cp = sample_complex_chart_point(rng)
        d2 = complex_chart_second_derivatives(cp)
        flat = _flat(cp)
        for f in range(12):
            h_ad = hessian_of(lambda v: _embed_generic(v)[f], flat)
            assert np.allclose(d2[f], h_ad, atol=1e-13), f

    def test_identity_point_metric(self):
        # x = e1, y = 0, lam = mu = 0: metric is the identity and the
        # normals live purely in the second-column slots
        cp = ComplexChartPoint(np.array([1.0, 0, 0]), np.zeros(3), 0.0, 0.0)
        geo = complex_chart_geometry(cp)
        assert np.allclose(geo.metric, np.eye(8))
        assert max_abs(geo.normals[:, :6]) == 0.0
        assert max_abs(geo.mean_curvature) < 1e-15

    def test_geometry_residuals(self):
        rng = make_rng(3)
        for _ in range(10):
            geo = complex_chart_geometry(sample_complex_chart_point(rng))
            assert geo.block_residual < 1e-13
            assert geo.schur_residual < 1e-12
            assert geo.offdiag_residual < 1e-12
            assert geo.normal_residual < 1e-12
            assert geo.normals.shape == (4, 12)
            assert max_abs(geo.mean_curvature) < 1e-12

    def test_embedding_matches_complex_product(self):
        rng = make_rng(4)
        cp = sample_complex_chart_point(rng)
        z1 = cp.x + 1j * cp.y
        z2 = (cp.lam + 1j * cp.mu) * z1
        emb = complex_chart_embedding(cp)
        assert np.allclose(emb, np.concatenate([z1.real, z1.imag,
                                                z2.real, z2.imag]))


def _generic_point(n, rng, floor=0.3):
    pair = TwinHarmonicPair(n)
    while True:
        point = rng.normal(size=2 * n * n)
        u, v = pair.values(point)
        if min(abs(u), abs(v)) > floor:
            return point


class TestTwinPair:

    def test_flatten_round_trip(self):
        rng = make_rng(10)
        z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.allclose(unflatten(3, flatten(z)), z)

    def test_values_match_determinant(self):
        rng = make_rng(11)
        for n in (2, 3, 4):
            z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            u, v = TwinHarmonicPair(n).values(flatten(z))
            det = complex(np.linalg.det(z))
            assert u == pytest.approx(det.real, rel=1e-12)
            assert v == pytest.approx(det.imag, rel=1e-12)

    def test_identity_matrix_gradients(self):
        gu, gv = TwinHarmonicPair(2).gradients(flatten(np.eye(2)))
        assert np.array_equal(gu, [1, 0, 0, 1, 0, 0, 0, 0])
        assert np.array_equal(gv, [0, 0, 0, 0, 1, 0, 0, 1])

    @pytest.mark.parametrize("n", [2, 3])
    def test_gradients_match_dual_numbers(self, n):
        rng = make_rng(12 + n)
        pair = TwinHarmonicPair(n)
        point = rng.normal(size=2 * n * n)
        grads_ad = gradient_of(pair.values_generic, point)
        gu, gv = pair.gradients(point)
        assert np.allclose(np.stack([gu, gv]), grads_ad, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3])
    def test_hessians_match_dual_numbers(self, n):
        rng = make_rng(14 + n)
        pair = TwinHarmonicPair(n)
        point = rng.normal(size=2 * n * n)
        hu, hv = pair.hessians(point)
        hu_ad = hessian_of(lambda v: pair.values_generic(v)[0], point)
        hv_ad = hessian_of(lambda v: pair.values_generic(v)[1], point)
        assert np.allclose(hu, hu_ad, atol=1e-12)
        assert np.allclose(hv, hv_ad, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_hessians_traceless_exactly(self, n):
        rng = make_rng(16 + n)
        pair = TwinHarmonicPair(n)
        hu, hv = pair.hessians(rng.normal(size=2 * n * n))
        assert np.trace(hu) == 0.0
        assert np.trace(hv) == 0.0

    def test_same_row_second_derivatives_vanish(self):
        n = 3
        rng = make_rng(19)
        pair = TwinHarmonicPair(n)
        hu, hv = pair.hessians(rng.normal(size=2 * n * n))
        for h in (hu, hv):
            for i in range(n):
                for j in range(n):
                    for l in range(n):
                        # both real blocks pair the same complex row here
                        assert h[j * n + i, l * n + i] == 0.0
                        assert h[j * n + i, n * n + l * n + i] == 0.0

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_ambient_identities(self, n):
        rng = make_rng(20 + n)
        for _ in range(5):
            rep = twin_harmonic_suite(n, _generic_point(n, rng))
            assert rep.grad_norm_gap < 1e-12
            assert rep.grad_orthogonality < 1e-12
            assert max_abs(rep.harmonic) == 0.0
            assert rep.pair_vector < 1e-12
            assert rep.pair_cross < 1e-12
            assert rep.contraction_table.max() < 1e-12

    def test_rho_is_two_for_n2(self):
        rng = make_rng(24)
        for _ in range(20):
            point = _generic_point(2, rng, floor=0.5)
            assert abs(rho_value(2, point) - 2.0) < 1e-12
            rep = twin_harmonic_suite(2, point)
            assert abs(rep.rho - rep.rho_alt) < 1e-10

    @pytest.mark.parametrize("n,degree", [(2, 0), (3, 2)])
    def test_rho_homogeneity(self, n, degree):
        rng = make_rng(26 + n)
        point = _generic_point(n, rng, floor=0.5)
        base = rho_value(n, point)
        for t in (2.0, 3.0):
            scaled = rho_value(n, t * point)
            assert scaled == pytest.approx(t ** degree * base, rel=1e-12)

    def test_suite_refuses_vanishing_twin(self):
        # real entries force v = 0 identically
        with pytest.raises(SingularGram):
            twin_harmonic_suite(2, flatten(np.eye(2)))


class TestZetaLocus:

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_sample_contract(self, n):
        rng = make_rng(30 + n)
        point = sample_zeta_point(n, rng)
        u, v = TwinHarmonicPair(n).values(point)
        assert abs(u) < 1e-12 and abs(v) < 1e-12
        assert np.linalg.norm(point) == pytest.approx(1.0)
        assert np.linalg.matrix_rank(unflatten(n, point)) == n - 1

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_minimality_and_conformality(self, n):
        rng = make_rng(34 + n)
        for _ in range(5):
            zm = zeta_minimality(n, sample_zeta_point(n, rng))
            assert zm.max_residual < 1e-10
            assert zm.gram_conformality < 1e-12

    def test_deeper_stratum_collapses_gradients(self):
        # rank n - 2 kills every complex cofactor
        z = np.zeros((3, 3), dtype=complex)
        z[0, 0] = 1.0 + 0.5j
        with pytest.raises(SingularGram):
            zeta_minimality(3, flatten(z))
