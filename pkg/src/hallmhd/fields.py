"""Periodic 3D fields stored as Fourier coefficients, with exact spectral calculus.

Convention: for samples f(x) on the n^3 collocation grid of the 2*pi torus,

    coeff(k) = (1/n^3) * sum_x f(x) exp(-i k.x),     k in [-n/2, n/2)^3,

so f(x) = sum_k coeff(k) exp(i k.x).  Wavevectors are integers; the n/2
("oddball") mode present for even n is zeroed whenever a derivative is taken.
Coefficients are kept full-cube complex128 (no real-transform compression).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi
VOLUME = TWO_PI**3

HERMITIAN_TOL = 1e-12
SOLENOIDAL_TOL = 1e-12


class DimensionError(ValueError):
    """Shape or grid mismatch between fields."""


@dataclass(frozen=True)
class Grid:
    """Collocation grid: n modes per axis on the fixed 2*pi torus.

    dealias_cut defaults to floor(n/3) (2/3 rule on the radial wavenumber):
    quadratic products of fields supported in |k| <= dealias_cut are exact on
    the retained modes, and collocation quadrature of triple products is exact
    whenever 3*dealias_cut < n.
    """

    n: int
    dealias_cut: int | None = None

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise DimensionError(f"grid size must be even and >= 8, got n={self.n}")
        if self.dealias_cut is None:
            object.__setattr__(self, "dealias_cut", self.n // 3)
        if not 1 <= self.dealias_cut <= self.n // 2:
            raise DimensionError(f"dealias_cut={self.dealias_cut} outside [1, n/2]")

    @property
    def k_max(self) -> float:
        """Largest resolved wavenumber magnitude, sqrt(3)*n/2."""
        return np.sqrt(3.0) * self.n / 2.0

    @cached_property
    def k1(self) -> np.ndarray:
        """Integer wavenumbers per axis in FFT order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def d1(self) -> np.ndarray:
        """Differentiation wavenumbers: k1 with the oddball n/2 mode zeroed."""
        d = self.k1.copy()
        d[self.n // 2] = 0.0
        return d

    @cached_property
    def kvec(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable (kx, ky, kz) with shapes (n,1,1), (1,n,1), (1,1,n)."""
        n = self.n
        return (
            self.k1.reshape(n, 1, 1),
            self.k1.reshape(1, n, 1),
            self.k1.reshape(1, 1, n),
        )

    @cached_property
    def dvec(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = self.n
        return (
            self.d1.reshape(n, 1, 1),
            self.d1.reshape(1, n, 1),
            self.d1.reshape(1, 1, n),
        )

    @cached_property
    def k_sq(self) -> np.ndarray:
        kx, ky, kz = self.kvec
        return kx**2 + ky**2 + kz**2

    @cached_property
    def k_mag(self) -> np.ndarray:
        return np.sqrt(self.k_sq)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        return self.k_mag <= self.dealias_cut

    @cached_property
    def x1(self) -> np.ndarray:
        return np.arange(self.n) * (TWO_PI / self.n)

    def mesh(self):
        """Physical coordinate arrays (x, y, z), each shape (n, n, n)."""
        return np.meshgrid(self.x1, self.x1, self.x1, indexing="ij")

    def integrate(self, pointwise: np.ndarray) -> float:
        """Collocation quadrature of a pointwise scalar sample array."""
        m = pointwise.shape[-1]
        return float(pointwise.sum(dtype=np.float64) * (VOLUME / m**3))


@dataclass
class SpectralField:
    """A field (scalar, vector, or tensor) as Fourier coefficients.

    coeffs has shape (ncomp, n, n, n); ncomp is 1 for scalars, 3 for vectors,
    9 for gradient tensors (component order d_j f_i at index 3*i + j).
    """

    grid: Grid
    coeffs: np.ndarray
    is_solenoidal: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim == 3:
            c = c[None]
        if c.ndim != 4 or c.shape[1:] != (self.grid.n,) * 3:
            raise DimensionError(
                f"coeffs shape {c.shape} incompatible with n={self.grid.n}"
            )
        self.coeffs = np.ascontiguousarray(c, dtype=np.complex128)

    @property
    def ncomp(self) -> int:
        return self.coeffs.shape[0]

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy(), self.is_solenoidal)

    def __add__(self, other):
        _check_same(self, other)
        return SpectralField(
            self.grid,
            self.coeffs + other.coeffs,
            self.is_solenoidal and other.is_solenoidal,
        )

    def __sub__(self, other):
        _check_same(self, other)
        return SpectralField(
            self.grid,
            self.coeffs - other.coeffs,
            self.is_solenoidal and other.is_solenoidal,
        )

    def __mul__(self, scalar):
        return SpectralField(self.grid, self.coeffs * scalar, self.is_solenoidal)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)


def _check_same(f: SpectralField, g: SpectralField):
    if f.grid.n != g.grid.n or f.ncomp != g.ncomp:
        raise DimensionError(
            f"field mismatch: ({f.grid.n},{f.ncomp}) vs ({g.grid.n},{g.ncomp})"
        )


def zero_field(grid: Grid, ncomp: int = 3) -> SpectralField:
    return SpectralField(
        grid, np.zeros((ncomp, grid.n, grid.n, grid.n), dtype=np.complex128), True
    )


# -- transforms ---------------------------------------------------------------


def _embed(coeffs: np.ndarray, n: int, m: int) -> np.ndarray:
    """Zero-pad n-grid coefficients into the m-grid FFT layout (m >= n)."""
    out = np.zeros(coeffs.shape[:-3] + (m, m, m), dtype=np.complex128)
    pos = (np.fft.fftfreq(n, d=1.0 / n).astype(int)) % m
    out[..., pos[:, None, None], pos[None, :, None], pos[None, None, :]] = coeffs
    return out


def _extract(coeffs_fine: np.ndarray, m: int, n: int) -> np.ndarray:
    """Truncate m-grid coefficients to the n grid, zeroing the coarse Nyquist
    planes (the +n/2 content of the fine grid has no coarse-grid home)."""
    pos = (np.fft.fftfreq(n, d=1.0 / n).astype(int)) % m
    out = coeffs_fine[..., pos[:, None, None], pos[None, :, None], pos[None, None, :]]
    out = np.ascontiguousarray(out)
    half = n // 2
    out[..., half, :, :] = 0.0
    out[..., :, half, :] = 0.0
    out[..., :, :, half] = 0.0
    return out


def to_physical(f: SpectralField, oversample: int = 1) -> np.ndarray:
    """Collocation samples, shape (ncomp, m, m, m) with m = oversample * n."""
    if oversample < 1:
        raise DimensionError("oversample must be >= 1")
    c = f.coeffs
    m = f.grid.n * oversample
    if oversample > 1:
        c = _embed(c, f.grid.n, m)
    return np.fft.ifftn(c, axes=(-3, -2, -1)).real * float(m**3)


def from_physical(samples: np.ndarray, grid: Grid) -> SpectralField:
    """Inverse of to_physical (oversample=1); accepts (n,n,n) or (c,n,n,n)."""
    s = np.asarray(samples, dtype=np.float64)
    if s.ndim == 3:
        s = s[None]
    if s.shape[1:] != (grid.n,) * 3:
        raise DimensionError(f"sample shape {s.shape} incompatible with n={grid.n}")
    coeffs = np.fft.fftn(s, axes=(-3, -2, -1)) / float(grid.n**3)
    return SpectralField(grid, coeffs)


# -- calculus -----------------------------------------------------------------


def curl(f: SpectralField) -> SpectralField:
    if f.ncomp != 3:
        raise DimensionError("curl needs a 3-component field")
    dx, dy, dz = f.grid.dvec
    cx, cy, cz = f.coeffs
    out = np.stack(
        [
            1j * (dy * cz - dz * cy),
            1j * (dz * cx - dx * cz),
            1j * (dx * cy - dy * cx),
        ]
    )
    return SpectralField(f.grid, out, is_solenoidal=True)


def divergence(f: SpectralField) -> SpectralField:
    if f.ncomp != 3:
        raise DimensionError("divergence needs a 3-component field")
    dx, dy, dz = f.grid.dvec
    out = 1j * (dx * f.coeffs[0] + dy * f.coeffs[1] + dz * f.coeffs[2])
    return SpectralField(f.grid, out[None])


def gradient(f: SpectralField) -> SpectralField:
    """Full gradient: ncomp -> 3*ncomp, component order d_j f_i at 3*i + j."""
    dx, dy, dz = f.grid.dvec
    parts = []
    for i in range(f.ncomp):
        c = f.coeffs[i]
        parts += [1j * dx * c, 1j * dy * c, 1j * dz * c]
    return SpectralField(f.grid, np.stack(parts))


def laplacian(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, -f.grid.k_sq * f.coeffs, f.is_solenoidal)


def leray_project(f: SpectralField) -> SpectralField:
    """Remove the gradient part: coeff -= k (k.coeff)/|k|^2, k=0 untouched."""
    if f.ncomp != 3:
        raise DimensionError("leray_project needs a 3-component field")
    g = f.grid
    kx, ky, kz = g.kvec
    ksq = g.k_sq.copy()
    ksq[0, 0, 0] = 1.0  # k=0 row divides by 1 and subtracts 0
    kdot = (kx * f.coeffs[0] + ky * f.coeffs[1] + kz * f.coeffs[2]) / ksq
    kdot[0, 0, 0] = 0.0
    out = np.stack(
        [f.coeffs[0] - kx * kdot, f.coeffs[1] - ky * kdot, f.coeffs[2] - kz * kdot]
    )
    return SpectralField(g, out, is_solenoidal=True)


def dealias(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, f.coeffs * f.grid.dealias_mask, f.is_solenoidal)


def vector_potential(b: SpectralField) -> SpectralField:
    """Solenoidal A with curl A = b (b solenoidal, zero mean): A = i k x b / |k|^2."""
    g = b.grid
    kx, ky, kz = g.kvec
    ksq = g.k_sq.copy()
    ksq[0, 0, 0] = 1.0
    bx, by, bz = b.coeffs
    out = np.stack(
        [
            1j * (ky * bz - kz * by) / ksq,
            1j * (kz * bx - kx * bz) / ksq,
            1j * (kx * by - ky * bx) / ksq,
        ]
    )
    out[:, 0, 0, 0] = 0.0
    return SpectralField(g, out, is_solenoidal=True)


# -- norms and inner products --------------------------------------------------


def pointwise_magnitude(samples: np.ndarray) -> np.ndarray:
    """Euclidean magnitude over the component axis (Frobenius for tensors)."""
    return np.sqrt(np.sum(samples * samples, axis=0))


def lp_norm(f: SpectralField, p: float, oversample: int = 1) -> float:
    """Collocation L^p norm of |f(x)| on the (oversampled) physical grid.

    A grid approximation of the true torus norm; exact for p=2 on band-limited
    fields (Parseval), and a lower bound for p=inf.
    """
    if p < 1:
        raise ValueError(f"lp_norm requires p >= 1, got {p}")
    mag = pointwise_magnitude(to_physical(f, oversample))
    if np.isinf(p):
        return float(mag.max(initial=0.0))
    m = mag.shape[-1]
    return float((np.sum(mag**p, dtype=np.float64) * (VOLUME / m**3)) ** (1.0 / p))


def l2_norm_spectral(f: SpectralField) -> float:
    """Parseval form: sqrt((2*pi)^3 * sum_k |coeff|^2)."""
    return float(np.sqrt(VOLUME * np.sum(np.abs(f.coeffs) ** 2, dtype=np.float64)))


def inner_product(f: SpectralField, g: SpectralField) -> float:
    """L^2 inner product of real fields via the spectral sum."""
    _check_same(f, g)
    return float(
        VOLUME * np.real(np.sum(np.conj(f.coeffs) * g.coeffs, dtype=np.complex128))
    )


def grad_norm_sq(f: SpectralField) -> float:
    """(2*pi)^3 * sum_k |k|^2 |coeff|^2  =  || grad f ||_2^2."""
    return float(
        VOLUME * np.sum(f.grid.k_sq * np.abs(f.coeffs) ** 2, dtype=np.float64)
    )


def sobolev_direct(f: SpectralField, s: float) -> float:
    """Homogeneous H^s norm from the plain spectral sum (k = 0 dropped)."""
    ksq = f.grid.k_sq.copy()
    ksq[0, 0, 0] = 1.0
    w = ksq**s
    w[0, 0, 0] = 1.0 if s == 0 else 0.0
    return float(np.sqrt(VOLUME * np.sum(w * np.abs(f.coeffs) ** 2, dtype=np.float64)))


# -- consistency checks ---------------------------------------------------------


def hermitian_error(f: SpectralField) -> float:
    """max |coeff(-k) - conj(coeff(k))| relative to max |coeff|."""
    c = f.coeffs
    flipped = np.roll(c[:, ::-1, ::-1, ::-1], 1, axis=(1, 2, 3))
    scale = np.abs(c).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(flipped - np.conj(c)).max() / scale)


def divergence_error(f: SpectralField) -> float:
    """max_k |k . coeff(k)| relative to max |coeff| (plain k, not oddball-zeroed)."""
    g = f.grid
    kx, ky, kz = g.kvec
    kdot = kx * f.coeffs[0] + ky * f.coeffs[1] + kz * f.coeffs[2]
    scale = np.abs(f.coeffs).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(kdot).max() / scale)


def require_solenoidal(f: SpectralField, tol: float = 1e-8, what: str = "field"):
    err = divergence_error(f)
    if err > tol:
        raise ValueError(f"{what} is not solenoidal (divergence error {err:.3e})")


# -- random fields --------------------------------------------------------------


def random_field(
    grid: Grid,
    rng: np.random.Generator,
    ncomp: int = 3,
    k_lo: float = 0.0,
    k_hi: float | None = None,
    solenoidal: bool = False,
    zero_mean: bool = True,
) -> SpectralField:
    """Gaussian Hermitian field, band-limited to k_lo <= |k| <= k_hi.

    Built by transforming white physical noise, so Hermitian symmetry is exact.
    Nyquist planes are always removed.
    """
    f = from_physical(rng.standard_normal((ncomp, grid.n, grid.n, grid.n)), grid)
    mask = np.ones((grid.n,) * 3, dtype=bool)
    if k_lo > 0.0:
        mask &= grid.k_mag >= k_lo
    if k_hi is not None:
        mask &= grid.k_mag <= k_hi
    half = grid.n // 2
    mask[half, :, :] = False
    mask[:, half, :] = False
    mask[:, :, half] = False
    coeffs = f.coeffs * mask
    if zero_mean:
        coeffs[:, 0, 0, 0] = 0.0
    out = SpectralField(grid, coeffs)
    if solenoidal:
        out = leray_project(out)
    return out
