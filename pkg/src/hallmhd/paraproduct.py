"""Bony paraproduct decomposition of advective terms and the two commutators
used to expose cancellations in the dyadic flux estimates.

Quadratic products are evaluated pointwise in physical space.  Two exactness
strategies are available: `pad=True` evaluates on a 2x zero-padded grid so the
product is exact on every retained (non-Nyquist) mode regardless of the input
bandwidth; `pad=False` truncates the result with the grid's 2/3-rule mask,
which is exact when the inputs are already dealiased.  The solver uses the
truncation path; the lemma-verification suites, whose sample fields occupy
high shells, use padding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    Grid,
    SpectralField,
    _embed,
    _extract,
    curl,
    gradient,
    inner_product,
    lp_norm,
    require_solenoidal,
    to_physical,
)
from .littlewood_paley import LPPartition


# -- product machinery ---------------------------------------------------------


def _phys(f: SpectralField, pad: bool) -> np.ndarray:
    return to_physical(f, oversample=2 if pad else 1)


def _back(samples: np.ndarray, grid: Grid, pad: bool) -> SpectralField:
    """Physical samples (possibly on the 2x grid) back to n-grid coefficients."""
    if samples.ndim == 3:
        samples = samples[None]
    m = samples.shape[-1]
    coeffs = np.fft.fftn(samples, axes=(-3, -2, -1)) / float(m**3)
    if pad:
        coeffs = _extract(coeffs, m, grid.n)
        return SpectralField(grid, coeffs)
    return SpectralField(grid, coeffs * grid.dealias_mask)


def advect(u: SpectralField, v: SpectralField, pad: bool = True) -> SpectralField:
    """u . grad v, evaluated pointwise with the selected exactness strategy."""
    grid = u.grid
    up = _phys(u, pad)
    gv = _phys(gradient(v), pad)  # component order d_j v_i at 3*i + j
    ncomp_v = v.ncomp
    m = up.shape[-1]
    out = np.empty((ncomp_v, m, m, m))
    for i in range(ncomp_v):
        acc = up[0] * gv[3 * i + 0]
        acc += up[1] * gv[3 * i + 1]
        acc += up[2] * gv[3 * i + 2]
        out[i] = acc
    return _back(out, grid, pad)


def cross_with_curl(F: SpectralField, G: SpectralField, pad: bool = True) -> SpectralField:
    """F x (curl G), evaluated pointwise."""
    fp = _phys(F, pad)
    cg = _phys(curl(G), pad)
    return _back(np.cross(fp, cg, axisa=0, axisb=0, axisc=0), F.grid, pad)


# -- Bony decomposition ----------------------------------------------------------


@dataclass
class BonyTriple:
    """The three interaction classes of Delta_q(u . grad v) for fixed q."""

    low_high: SpectralField
    high_low: SpectralField
    high_high: SpectralField
    q: int

    def total(self) -> SpectralField:
        return self.low_high + self.high_low + self.high_high


def bony_decompose(
    part: LPPartition, u: SpectralField, v: SpectralField, q: int, pad: bool = True
) -> BonyTriple:
    """Split Delta_q(u . grad v) into low-high, high-low and high-high sums:

        sum_{|q-p|<=2} Delta_q(u_{<=p-2} . grad v_p)
      + sum_{|q-p|<=2} Delta_q(u_p . grad v_{<=p-2})
      + sum_{p>=q-2}   Delta_q(u~_p . grad v_p).
    """
    require_solenoidal(u, what="advecting field u")
    grid = u.grid
    zero = np.zeros_like(u.coeffs[:1] if v.ncomp == 1 else u.coeffs)

    def zsum():
        return SpectralField(grid, zero.copy())

    low_high = zsum()
    high_low = zsum()
    window = range(max(-1, q - 2), min(part.q_max, q + 2) + 1)
    for p in window:
        u_low = part.lowpass(u, p - 2)
        v_p = part.project(v, p)
        low_high = low_high + advect(u_low, v_p, pad)
        u_p = part.project(u, p)
        v_low = part.lowpass(v, p - 2)
        high_low = high_low + advect(u_p, v_low, pad)
    high_high = zsum()
    for p in range(max(-1, q - 2), part.q_max + 1):
        u_t = part.tilde(u, p)
        v_p = part.project(v, p)
        high_high = high_high + advect(u_t, v_p, pad)
    return BonyTriple(
        part.project(low_high, q),
        part.project(high_low, q),
        part.project(high_high, q),
        q,
    )


# -- commutators ------------------------------------------------------------------


def advective_commutator(
    part: LPPartition,
    u_low: SpectralField,
    v_shell: SpectralField,
    q: int,
    pad: bool = True,
) -> SpectralField:
    """[Delta_q, u_low . grad] v  =  Delta_q(u_low . grad v) - u_low . grad Delta_q v."""
    require_solenoidal(u_low, what="transport field u_low")
    first = part.project(advect(u_low, v_shell, pad), q)
    second = advect(u_low, part.project(v_shell, q), pad)
    return first - second


def hall_commutator(
    part: LPPartition,
    F: SpectralField,
    G: SpectralField,
    q: int,
    pad: bool = True,
    require_divergence_free: bool = True,
) -> SpectralField:
    """[Delta_q, F x curl] G  =  Delta_q(F x (curl G)) - F x (curl Delta_q G)."""
    if require_divergence_free:
        require_solenoidal(F, what="commutator prefactor F")
    first = part.project(cross_with_curl(F, G, pad), q)
    second = cross_with_curl(F, part.project(G, q), pad)
    return first - second


def hall_commutator_pairing(
    part: LPPartition,
    F: SpectralField,
    G: SpectralField,
    H: SpectralField,
    q: int,
    r1: float = 2.0,
    r2: float = 2.0,
    pad: bool = True,
) -> tuple[float, float]:
    """Pairing integral of [Delta_q, F x curl] G against curl H, plus the ratio
    against the bound ||grad^2 F||_inf ||G||_{r1} ||H||_{r2} (Hoelder-dual r's)."""
    if not np.isclose(1.0 / r1 + 1.0 / r2, 1.0):
        raise ValueError(f"exponents must satisfy 1/r1 + 1/r2 = 1, got ({r1}, {r2})")
    comm = hall_commutator(part, F, G, q, pad, require_divergence_free=False)
    value = inner_product(comm, curl(H))
    hessian_sup = lp_norm(gradient(gradient(F)), np.inf)
    bound = hessian_sup * lp_norm(G, r1) * lp_norm(H, r2)
    ratio = abs(value) / bound if bound > 0 else 0.0
    return value, ratio
