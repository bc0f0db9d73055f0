"""Spectral field core: transforms, calculus, Leray projection, norms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallmhd import oracles
from hallmhd.fields import (
    DimensionError,
    Grid,
    SpectralField,
    curl,
    divergence,
    divergence_error,
    from_physical,
    gradient,
    hermitian_error,
    inner_product,
    l2_norm_spectral,
    leray_project,
    lp_norm,
    random_field,
    to_physical,
    vector_potential,
    zero_field,
)

VOLUME = (2 * np.pi) ** 3


def abc_field(grid, amplitude=1.0):
    """u = (sin z + cos y, sin x + cos z, sin y + cos x): curl u = u."""
    x, y, z = grid.mesh()
    u = amplitude * np.stack(
        [np.sin(z) + np.cos(y), np.sin(x) + np.cos(z), np.sin(y) + np.cos(x)]
    )
    return from_physical(u, grid)


class TestGrid:
    def test_defaults(self):
        g = Grid(16)
        assert g.dealias_cut == 5
        assert g.k_max == pytest.approx(np.sqrt(3) * 8)

    def test_wavenumber_layout(self):
        g = Grid(8)
        assert list(g.k1) == [0, 1, 2, 3, -4, -3, -2, -1]
        assert g.d1[4] == 0.0  # oddball zeroed for derivatives

    def test_validation(self):
        with pytest.raises(DimensionError):
            Grid(7)
        with pytest.raises(DimensionError):
            Grid(4)
        with pytest.raises(DimensionError):
            Grid(16, dealias_cut=9)


class TestTransforms:
    def test_zero_round_trip(self):
        g = Grid(8)
        f = zero_field(g)
        assert np.all(to_physical(f) == 0.0)
        back = from_physical(to_physical(f), g)
        assert np.all(back.coeffs == 0.0)

    def test_single_mode_is_cosine(self):
        # coeff(k=(1,0,0)) = 1/2 on x-component plus Hermitian partner
        g = Grid(16)
        c = np.zeros((3, 16, 16, 16), dtype=np.complex128)
        c[0, 1, 0, 0] = 0.5
        c[0, -1, 0, 0] = 0.5
        f = SpectralField(g, c)
        x, _, _ = g.mesh()
        assert np.abs(to_physical(f)[0] - np.cos(x)).max() < 1e-13

    def test_round_trip_matches_direct_dft(self):
        g = Grid(8)
        rng = np.random.default_rng(11)
        f = random_field(g, rng)
        phys = to_physical(f)
        direct = oracles.dft_direct(phys)
        fast = from_physical(phys, g).coeffs
        scale = np.abs(direct).max()
        assert np.abs(fast - direct).max() / scale < 1e-12
        # inverse path against direct summation
        phys_direct = oracles.idft_direct(f.coeffs)
        assert np.abs(phys - phys_direct).max() / np.abs(phys).max() < 1e-12

    def test_round_trip_identity(self):
        g = Grid(16)
        rng = np.random.default_rng(3)
        f = random_field(g, rng)
        back = from_physical(to_physical(f), g)
        rel = np.abs(back.coeffs - f.coeffs).max() / np.abs(f.coeffs).max()
        assert rel < 1e-12

    def test_size_mismatch(self):
        g = Grid(8)
        with pytest.raises(DimensionError):
            from_physical(np.zeros((3, 16, 16, 16)), g)

    def test_oversampled_physical_matches_fine_evaluation(self):
        g = Grid(8)
        c = np.zeros((1, 8, 8, 8), dtype=np.complex128)
        c[0, 2, 0, 0] = 0.5
        c[0, -2, 0, 0] = 0.5
        f = SpectralField(g, c)
        fine = to_physical(f, oversample=2)
        x = np.arange(16) * (2 * np.pi / 16)
        assert np.abs(fine[0] - np.cos(2 * x)[:, None, None]).max() < 1e-13


class TestCalculus:
    def test_curl_of_beltrami_is_identity(self):
        g = Grid(16)
        u = abc_field(g)
        err = np.abs(curl(u).coeffs - u.coeffs).max()
        assert err < 1e-12

    def test_divergence_of_curl_vanishes(self):
        g = Grid(16)
        rng = np.random.default_rng(5)
        f = random_field(g, rng)
        dcurl = divergence(curl(f))
        assert np.abs(to_physical(dcurl)).max() < 1e-12 * np.abs(to_physical(f)).max()

    def test_gradient_matches_direct_oracle(self):
        g = Grid(8)  # oracle cost guard
        x, y, _ = g.mesh()
        f = from_physical(np.cos(x + 2 * y), g)
        fast = gradient(f).coeffs
        direct = oracles.gradient_direct(f.coeffs)
        assert np.abs(fast - direct).max() < 1e-12

    def test_gradient_cos_analytic(self):
        g = Grid(16)
        x, y, _ = g.mesh()
        f = from_physical(np.cos(x + 2 * y), g)
        got = to_physical(gradient(f))
        assert np.abs(got[0] + np.sin(x + 2 * y)).max() < 1e-12
        assert np.abs(got[1] + 2 * np.sin(x + 2 * y)).max() < 1e-12
        assert np.abs(got[2]).max() < 1e-13

    def test_curl_of_gradient_vanishes(self):
        g = Grid(16)
        rng = np.random.default_rng(6)
        f = random_field(g, rng, ncomp=1)
        cg = curl(gradient(f))
        assert np.abs(cg.coeffs).max() < 1e-12 * np.abs(f.coeffs).max()


class TestLeray:
    def test_kills_gradients(self):
        g = Grid(16)
        rng = np.random.default_rng(7)
        grad = gradient(random_field(g, rng, ncomp=1))
        proj = leray_project(grad)
        assert np.abs(proj.coeffs).max() < 1e-12 * np.abs(grad.coeffs).max()

    def test_fixes_solenoidal_fields(self):
        g = Grid(16)
        rng = np.random.default_rng(8)
        f = leray_project(random_field(g, rng))
        again = leray_project(f)
        assert np.abs(again.coeffs - f.coeffs).max() < 1e-14 * np.abs(f.coeffs).max()

    def test_matches_dense_oracle(self):
        g = Grid(8)
        rng = np.random.default_rng(9)
        f = random_field(g, rng)
        fast = leray_project(f).coeffs
        direct = oracles.leray_direct(f.coeffs)
        assert np.abs(fast - direct).max() / np.abs(direct).max() < 1e-12

    def test_output_is_solenoidal(self):
        g = Grid(16)
        rng = np.random.default_rng(10)
        f = leray_project(random_field(g, rng))
        assert f.is_solenoidal
        assert divergence_error(f) <= 1e-12

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_self_adjoint(self, seed):
        g = Grid(8)
        rng = np.random.default_rng(seed)
        f = random_field(g, rng)
        h = random_field(g, rng)
        lhs = inner_product(leray_project(f), h)
        rhs = inner_product(f, leray_project(h))
        scale = max(abs(lhs), abs(rhs), 1e-30)
        assert abs(lhs - rhs) / scale < 1e-12


class TestNorms:
    def test_zero_field(self):
        g = Grid(8)
        for p in (1.0, 2.0, 4.0, np.inf):
            assert lp_norm(zero_field(g), p) == 0.0

    def test_cosine_l2_is_parseval_exact(self):
        g = Grid(16)
        x, _, _ = g.mesh()
        u = np.zeros((3, 16, 16, 16))
        u[0] = np.cos(x)
        f = from_physical(u, g)
        assert lp_norm(f, 2) == pytest.approx(np.sqrt(VOLUME / 2), rel=1e-13)

    def test_cosine_linf_hits_max(self):
        g = Grid(16)
        x, _, _ = g.mesh()
        f = from_physical(np.cos(x), g)
        assert lp_norm(f, np.inf) == pytest.approx(1.0, rel=1e-13)

    def test_linf_oversampling_agrees_within_2pct(self):
        # resolved field (>= 8 points per wavelength); the grid sup is a
        # lower bound on the true sup and close to it
        g = Grid(32)
        rng = np.random.default_rng(3)
        f = random_field(g, rng, k_hi=4.0, ncomp=1)
        coarse = lp_norm(f, np.inf)
        fine = lp_norm(f, np.inf, oversample=8)
        assert coarse <= fine * (1 + 1e-12)
        assert (fine - coarse) / fine < 0.02

    def test_p_below_one_rejected(self):
        g = Grid(8)
        with pytest.raises(ValueError):
            lp_norm(zero_field(g), 0.5)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_parseval(self, seed):
        g = Grid(8)
        rng = np.random.default_rng(seed)
        f = random_field(g, rng)
        collocation = lp_norm(f, 2)
        spectral = l2_norm_spectral(f)
        assert collocation == pytest.approx(spectral, rel=1e-12)


class TestHermitianAndPotential:
    def test_random_fields_are_hermitian(self):
        g = Grid(16)
        f = random_field(g, np.random.default_rng(13))
        assert hermitian_error(f) < 1e-13

    def test_vector_potential_inverts_curl(self):
        g = Grid(16)
        b = leray_project(random_field(g, np.random.default_rng(14)))
        a = vector_potential(b)
        err = np.abs(curl(a).coeffs - b.coeffs).max() / np.abs(b.coeffs).max()
        assert err < 1e-12
        assert divergence_error(a) < 1e-12


class TestConvolutionOracleSelfConsistency:
    def test_two_summation_orders_agree(self):
        g = Grid(8)
        rng = np.random.default_rng(15)
        f = random_field(g, rng, ncomp=1).coeffs[0]
        h = random_field(g, rng, ncomp=1).coeffs[0]
        c1 = oracles.convolve_direct(f, h, order="p")
        c2 = oracles.convolve_direct(f, h, order="q")
        assert np.abs(c1 - c2).max() <= 1e-12 * max(np.abs(c1).max(), 1e-300)

    def test_single_mode_product(self):
        # cos(x) * cos(x) = 1/2 + cos(2x)/2
        g = Grid(8)
        c = np.zeros((8, 8, 8), dtype=np.complex128)
        c[1, 0, 0] = 0.5
        c[-1, 0, 0] = 0.5
        prod = oracles.convolve_direct(c, c)
        assert prod[0, 0, 0] == pytest.approx(0.5)
        assert prod[2, 0, 0] == pytest.approx(0.25)
        assert prod[-2, 0, 0] == pytest.approx(0.25)

    def test_oracle_refuses_large_grids(self):
        with pytest.raises(ValueError):
            oracles.dft_direct(np.zeros((16, 16, 16)))
