"""Complex polynomial roots and determinants of complex matrix polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInput, NoConvergence, SingularNumeric, SizeMismatch
from .tropical_core import INF, TropPoly, trop_roots

TRIM_TOL = 1e-10
MAX_SWEEPS = 200
CLUSTER_REL = 1e-6
_EPS = np.finfo(float).eps


def as_complex(x) -> complex:
    """Accept complex, real, or a ``[re, im]`` pair."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex numbers are written [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


class CPoly:
    """Complex polynomial with coefficients stored low to high."""

    def __init__(self, coeffs):
        c = np.asarray([as_complex(x) for x in coeffs] if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex)
        if c.ndim != 1:
            raise SizeMismatch("polynomial coefficients must be one-dimensional")
        self.coeffs = c

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    @property
    def valuation(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[0]) if nz.size else -1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def trimmed(self, trim_tol: float = TRIM_TOL) -> "CPoly":
        c = self.coeffs.copy()
        if c.size:
            c[np.abs(c) <= trim_tol * np.abs(c).max()] = 0
        return CPoly(c)

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)

    def __repr__(self) -> str:
        return f"CPoly({self.coeffs.tolist()})"


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def clusters(self, rel: float = CLUSTER_REL) -> list[tuple[complex, int]]:
        """Group nearby roots; returns (mean, count) per cluster."""
        remaining = list(self.roots)
        out = []
        while remaining:
            z = remaining.pop(0)
            group = [z]
            rest = []
            for w in remaining:
                if abs(w - z) <= rel * max(abs(w), abs(z), 1e-300):
                    group.append(w)
                else:
                    rest.append(w)
            remaining = rest
            out.append((complex(np.mean(group)), len(group)))
        return out


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    """Points on circles whose radii come from the tropical roots of ``-log|c|``."""
    mags = np.abs(c)
    expo = [(-math.log(m) if m > 0 else INF) for m in mags]
    radii = [math.exp(-r) for r in trop_roots(TropPoly(expo)).roots]
    n = len(radii)
    z = np.empty(n, dtype=complex)
    start = 0
    group = 0
    while start < n:
        stop = start
        while stop < n and radii[stop] == radii[start]:
            stop += 1
        m = stop - start
        phase = 0.4 + 1.3 * group
        z[start:stop] = radii[start] * np.exp(1j * (2 * np.pi * np.arange(m) / m + phase))
        start = stop
        group += 1
    return z


def _newton_ratio(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``p(z)/p'(z)`` and a flag for backward-stable convergence at each point.

    Points outside the unit disk are handled through the reversed polynomial
    so Horner's scheme never overflows.
    """
    n = len(c) - 1
    ratio = np.empty_like(z)
    small = np.empty(z.shape, dtype=bool)
    inside = np.abs(z) <= 1
    for mask, coeffs, pts, rev in ((inside, c, z[inside], False), (~inside, c[::-1], 1 / z[~inside], True)):
        if not pts.size:
            continue
        p = np.zeros_like(pts)
        dp = np.zeros_like(pts)
        bound = np.zeros(pts.shape)
        apts = np.abs(pts)
        for a in coeffs[::-1]:
            dp = dp * pts + p
            p = p * pts + a
            bound = bound * apts + abs(a)
        small[mask] = np.abs(p) <= 8 * _EPS * bound
        with np.errstate(divide="ignore", invalid="ignore"):
            if rev:
                w = pts
                ratio[mask] = (1 / w) / (n - w * dp / p)
            else:
                ratio[mask] = p / dp
    ratio[~np.isfinite(ratio)] = 0
    return ratio, small


def poly_roots(p, tol: float = 1e-12, trim_tol: float = 0.0) -> RootSet:
    """All complex roots by Aberth-Ehrlich simultaneous iteration.

    Exact zero low-order coefficients give exact zero roots.  ``trim_tol``
    zeroes coefficients that are tiny relative to the largest before solving.
    """
    poly = p if isinstance(p, CPoly) else CPoly(p)
    if trim_tol > 0:
        poly = poly.trimmed(trim_tol)
    deg = poly.degree
    if deg < 1:
        raise DegenerateInput("polynomial has degree < 1")
    c = poly.coeffs[: deg + 1]
    val = poly.valuation
    core = c[val:] / c[-1]
    n = len(core) - 1
    roots = np.zeros(0, dtype=complex)
    if n == 1:
        roots = np.array([-core[0]])
    elif n > 1:
        z = _initial_guesses(core)
        active = np.ones(n, dtype=bool)
        for _ in range(MAX_SWEEPS):
            idx = np.flatnonzero(active)
            if not idx.size:
                break
            N, small = _newton_ratio(core, z[idx])
            diff = z[idx][:, None] - z[None, :]
            diff[np.arange(idx.size), idx] = 1
            S = (1 / diff).sum(axis=1) - 1
            with np.errstate(divide="ignore", invalid="ignore"):
                step = N / (1 - N * S)
            step[~np.isfinite(step)] = 0
            z[idx] -= step
            done = small | (np.abs(step) <= tol * np.abs(z[idx]))
            active[idx[done]] = False
        else:
            if active.any():
                raise NoConvergence(f"Aberth iteration did not converge in {MAX_SWEEPS} sweeps")
        roots = z
    roots = np.concatenate([np.zeros(val, dtype=complex), roots])
    residuals = np.abs(poly(roots))
    return RootSet(tuple(complex(r) for r in roots), tuple(float(r) for r in residuals))


class CMatrixPoly:
    """Complex matrix polynomial ``a_0 + Y a_1 + ... + Y^d a_d``."""

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise SizeMismatch(f"expected a stack of square matrices, got shape {c.shape}")
        self.coeffs = c

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def d(self) -> int:
        return self.coeffs.shape[0] - 1

    def evaluate(self, z: complex) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for a in self.coeffs[::-1]:
            out = out * z + a
        return out

    def __repr__(self) -> str:
        return f"CMatrixPoly(n={self.n}, d={self.d})"


def _geometric_mean_abs(M: np.ndarray) -> float | None:
    a = np.abs(M[M != 0])
    return float(np.exp(np.log(a).mean())) if a.size else None


def default_radius(M: CMatrixPoly) -> float:
    if M.d == 0:
        return 1.0
    g0 = _geometric_mean_abs(M.coeffs[0])
    gd = _geometric_mean_abs(M.coeffs[-1])
    if g0 is None or gd is None:
        return 1.0
    return (g0 / gd) ** (1.0 / M.d)


def det_poly(M, radius: float | None = None, trim_tol: float = TRIM_TOL) -> CPoly:
    """``det M(Y)`` by evaluation at scaled roots of unity and FFT interpolation.

    A coefficient is declared structurally zero when its scaled size is below
    ``trim_tol`` times the Hadamard bound of the sampled matrices, which is the
    natural size of rounding noise in the LU determinants.
    """
    if not isinstance(M, CMatrixPoly):
        M = CMatrixPoly(M)
    N = M.n * M.d + 1
    r = default_radius(M) if radius is None else float(radius)
    nodes = r * np.exp(2j * np.pi * np.arange(N) / N)
    mats = np.stack([M.evaluate(z) for z in nodes])
    vals = np.linalg.det(mats)
    hadamard = float(np.prod(np.linalg.norm(mats, axis=2), axis=1).max())
    scaled = np.fft.fft(vals) / N
    if trim_tol > 0:
        scaled[np.abs(scaled) <= trim_tol * hadamard] = 0
    coeffs = scaled / r ** np.arange(N)
    return CPoly(coeffs)


class MatrixEigs(NamedTuple):
    finite: RootSet
    m_zero: int
    m_inf: int


def matrix_poly_eigs(M, tol: float = 1e-12, trim_tol: float = TRIM_TOL) -> MatrixEigs:
    """Nonzero eigenvalues with the multiplicities of zero and infinity."""
    if not isinstance(M, CMatrixPoly):
        M = CMatrixPoly(M)
    det = det_poly(M, trim_tol=trim_tol)
    if det.is_zero():
        raise SingularNumeric("the determinant vanishes identically", witness="det")
    val, deg = det.valuation, det.degree
    if deg > val:
        finite = poly_roots(CPoly(det.coeffs[val : deg + 1]), tol=tol)
    else:
        finite = RootSet((), ())
    return MatrixEigs(finite, val, M.n * M.d - deg)
