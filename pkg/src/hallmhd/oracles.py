"""Brute-force reference implementations used as ground truth in tests.

Everything here is deliberately independent of the FFT code paths in
fields.py: transforms are direct O(n^6) summations, convolutions are explicit
integer-triad sums with no aliasing, and the Leray projection is a dense
k-loop.  Guarded to n <= 8.
"""

from __future__ import annotations

import numpy as np

from .fields import Grid, SpectralField, TWO_PI

MAX_N = 8


def _guard(n: int):
    if n > MAX_N:
        raise ValueError(f"oracle refused: n={n} exceeds cost guard {MAX_N}")


def dft_direct(samples: np.ndarray) -> np.ndarray:
    """coeff(k) = (1/n^3) sum_x f(x) exp(-i k.x), one explicit sum per k."""
    s = np.asarray(samples, dtype=np.float64)
    if s.ndim == 3:
        s = s[None]
    n = s.shape[-1]
    _guard(n)
    ks = np.fft.fftfreq(n, d=1.0 / n)
    x = np.arange(n) * (TWO_PI / n)
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    out = np.zeros(s.shape, dtype=np.complex128)
    for a, kx in enumerate(ks):
        for b, ky in enumerate(ks):
            for c, kz in enumerate(ks):
                phase = np.exp(-1j * (kx * X + ky * Y + kz * Z))
                for comp in range(s.shape[0]):
                    out[comp, a, b, c] = np.sum(s[comp] * phase) / n**3
    return out


def idft_direct(coeffs: np.ndarray) -> np.ndarray:
    """f(x) = sum_k coeff(k) exp(+i k.x), one explicit sum per grid point."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim == 3:
        c = c[None]
    n = c.shape[-1]
    _guard(n)
    ks = np.fft.fftfreq(n, d=1.0 / n)
    KX, KY, KZ = np.meshgrid(ks, ks, ks, indexing="ij")
    x = np.arange(n) * (TWO_PI / n)
    out = np.zeros(c.shape, dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            for d in range(n):
                phase = np.exp(1j * (KX * x[a] + KY * x[b] + KZ * x[d]))
                for comp in range(c.shape[0]):
                    out[comp, a, b, d] = np.sum(c[comp] * phase)
    return out.real


def convolve_direct(f: np.ndarray, g: np.ndarray, order: str = "p") -> np.ndarray:
    """Exact convolution (fg)^(k) = sum_{p+q=k} f(p) g(q) with integer triads.

    No modular wraparound: products falling outside [-n/2, n/2)^3 are dropped,
    which is exactly the unaliased truncated product.  `order` selects which
    factor the outer summation loops over ("p" or "q"), giving two independent
    summation orders for self-consistency checks.
    """
    n = f.shape[-1]
    _guard(n)
    if order == "q":
        return convolve_direct(g, f, order="p")
    # centered layout: index i holds wavenumber i - n/2
    fc = np.fft.fftshift(f, axes=(-3, -2, -1))
    gc = np.fft.fftshift(g, axes=(-3, -2, -1))
    out = np.zeros_like(fc)
    lo = -(n // 2)
    for ia in range(n):
        pa = ia + lo
        for ib in range(n):
            pb = ib + lo
            for ic in range(n):
                pc = ic + lo
                w = fc[..., ia, ib, ic]
                if not np.any(w):
                    continue
                # k = p + q  =>  q index block shifted by p
                asrc = slice(max(0, -pa), min(n, n - pa))
                bsrc = slice(max(0, -pb), min(n, n - pb))
                csrc = slice(max(0, -pc), min(n, n - pc))
                adst = slice(asrc.start + pa, asrc.stop + pa)
                bdst = slice(bsrc.start + pb, bsrc.stop + pb)
                cdst = slice(csrc.start + pc, csrc.stop + pc)
                out[..., adst, bdst, cdst] += (
                    w[..., None, None, None] * gc[..., asrc, bsrc, csrc]
                )
    return np.fft.ifftshift(out, axes=(-3, -2, -1))


def leray_direct(coeffs: np.ndarray) -> np.ndarray:
    """Dense per-k projection coeff - k (k.coeff)/|k|^2."""
    n = coeffs.shape[-1]
    _guard(n)
    ks = np.fft.fftfreq(n, d=1.0 / n)
    out = coeffs.copy()
    for a, kx in enumerate(ks):
        for b, ky in enumerate(ks):
            for c, kz in enumerate(ks):
                ksq = kx**2 + ky**2 + kz**2
                if ksq == 0.0:
                    continue
                k = np.array([kx, ky, kz])
                v = coeffs[:, a, b, c]
                out[:, a, b, c] = v - k * (k @ v) / ksq
    return out


def _deriv_ks(n: int) -> np.ndarray:
    d = np.fft.fftfreq(n, d=1.0 / n)
    d[n // 2] = 0.0
    return d


def gradient_direct(coeffs: np.ndarray) -> np.ndarray:
    """ik multiplication with the oddball rule, via explicit loops."""
    n = coeffs.shape[-1]
    _guard(n)
    if coeffs.ndim == 3:
        coeffs = coeffs[None]
    d = _deriv_ks(n)
    ncomp = coeffs.shape[0]
    out = np.zeros((3 * ncomp, n, n, n), dtype=np.complex128)
    for i in range(ncomp):
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    v = coeffs[i, a, b, c]
                    out[3 * i + 0, a, b, c] = 1j * d[a] * v
                    out[3 * i + 1, a, b, c] = 1j * d[b] * v
                    out[3 * i + 2, a, b, c] = 1j * d[c] * v
    return out


def _dealias_mask(n: int, cut: int) -> np.ndarray:
    ks = np.fft.fftfreq(n, d=1.0 / n)
    KX, KY, KZ = np.meshgrid(ks, ks, ks, indexing="ij")
    return np.sqrt(KX**2 + KY**2 + KZ**2) <= cut


def rhs_direct(u: SpectralField, b: SpectralField, hall_on: bool) -> tuple:
    """Nonlinear Hall-MHD right side via exact triad convolutions.

    du = -P[ d_j (u_j u_i - b_j b_i) ],  db = -P[ d_j (u_j b_i - b_j u_i) ]
         - curl((curl b) x b)  (hall_on), all products dealiased to the grid
    cut.  Returns coefficient arrays (du, db).
    """
    grid = u.grid
    n = grid.n
    _guard(n)
    cut = grid.dealias_cut
    mask = _dealias_mask(n, cut)
    d = _deriv_ks(n)
    uh, bh = u.coeffs, b.coeffs

    def div_of_tensor(t):  # t[i][j] spectral products
        out = np.zeros((3, n, n, n), dtype=np.complex128)
        for i in range(3):
            for j, dj in enumerate(
                (d.reshape(n, 1, 1), d.reshape(1, n, 1), d.reshape(1, 1, n))
            ):
                out[i] += 1j * dj * t[i][j]
        return out

    t_u = [[convolve_direct(uh[j], uh[i]) - convolve_direct(bh[j], bh[i]) for j in range(3)] for i in range(3)]
    t_b = [[convolve_direct(uh[j], bh[i]) - convolve_direct(bh[j], uh[i]) for j in range(3)] for i in range(3)]
    for i in range(3):
        for j in range(3):
            t_u[i][j] *= mask
            t_b[i][j] *= mask
    du = leray_direct(-div_of_tensor(t_u))
    db = leray_direct(-div_of_tensor(t_b))

    if hall_on:
        dx, dy, dz = d.reshape(n, 1, 1), d.reshape(1, n, 1), d.reshape(1, 1, n)
        cb = np.stack(
            [
                1j * (dy * bh[2] - dz * bh[1]),
                1j * (dz * bh[0] - dx * bh[2]),
                1j * (dx * bh[1] - dy * bh[0]),
            ]
        )
        h = np.stack(
            [
                convolve_direct(cb[1], bh[2]) - convolve_direct(cb[2], bh[1]),
                convolve_direct(cb[2], bh[0]) - convolve_direct(cb[0], bh[2]),
                convolve_direct(cb[0], bh[1]) - convolve_direct(cb[1], bh[0]),
            ]
        )
        h *= mask
        db -= np.stack(
            [
                1j * (dy * h[2] - dz * h[1]),
                1j * (dz * h[0] - dx * h[2]),
                1j * (dx * h[1] - dy * h[0]),
            ]
        )
    return du, db


def whistler_matrix(k: int, b0: float, nu: float, mu: float) -> dict:
    """Linearized 2-mode systems about b = b0 z_hat for wavevector k z_hat.

    In the circular basis e_pm = (x_hat -/+ i y_hat)/sqrt(2) the transverse
    perturbations (u_pm, b_pm) obey d/dt [u, b] = M_pm [u, b] with

        M_pm = [[-nu k^2,  i k b0           ],
                [ i k b0,  +/- i k^2 b0 - mu k^2]].

    Returns {"+": M_plus, "-": M_minus} for numerical diagonalization.
    """
    out = {}
    for sgn, key in ((+1.0, "+"), (-1.0, "-")):
        out[key] = np.array(
            [
                [-nu * k**2, 1j * k * b0],
                [1j * k * b0, sgn * 1j * k**2 * b0 - mu * k**2],
            ],
            dtype=np.complex128,
        )
    return out
