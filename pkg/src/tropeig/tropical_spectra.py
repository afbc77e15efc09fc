"""Tropical eigenvalues of min-plus matrices and matrix polynomials.

A min-plus matrix polynomial ``A = A_0 ⊕ Y A_1 ⊕ ... ⊕ Y^d A_d`` is stored as
an array of shape ``(d + 1, n, n)``.  Its characteristic polynomial function
``y -> per Â(y)`` is concave and piecewise affine with integer slopes; it is
reconstructed from optimal assignments at finitely many points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assignment import (
    DiGraph,
    EQ_TOL,
    HungarianResult,
    max_assignment,
    max_matching_size,
    min_assignment,
    sat_graph,
    scc_arcs,
)
from .errors import Infeasible, NoCircuit, SingularTropical, SizeMismatch
from .tropical_core import INF, to_scalar


def _scalars(x):
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_scalars(y) for y in x]
    return to_scalar(x)


def _as_tensor(coeffs) -> np.ndarray:
    if isinstance(coeffs, np.ndarray) and coeffs.dtype.kind == "f":
        T = coeffs.astype(float, copy=True)
    else:
        T = np.array(_scalars(coeffs), dtype=float)
    if T.ndim == 2:
        T = T[None]
    if T.ndim != 3 or T.shape[1] != T.shape[2]:
        raise SizeMismatch(f"expected a stack of square matrices, got shape {T.shape}")
    if np.isnan(T).any() or (T == -INF).any():
        raise ValueError("min-plus entries must be finite reals or +inf")
    return T


class TropMatrixPoly:
    """Min-plus matrix polynomial with coefficient matrices ``A_0 .. A_d``."""

    def __init__(self, coeffs):
        self.coeffs = _as_tensor(coeffs)
        self.coeffs.setflags(write=False)

    @property
    def d(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def identity_pencil(cls, A0) -> "TropMatrixPoly":
        """``A0 ⊕ Y I`` with the min-plus identity as leading coefficient."""
        A0 = _as_tensor(A0)[0]
        eye = np.full_like(A0, INF)
        np.fill_diagonal(eye, 0.0)
        return cls(np.stack([A0, eye]))

    def _terms(self, y: float) -> np.ndarray:
        ks = np.arange(self.d + 1, dtype=float)[:, None, None]
        return self.coeffs + ks * y

    def evaluate(self, y: float) -> np.ndarray:
        """The min-plus matrix ``Â(y)``."""
        return self._terms(y).min(axis=0)

    def attaining_degrees(self, y: float, tol: float = EQ_TOL) -> tuple[np.ndarray, np.ndarray]:
        """Smallest and largest ``k`` with ``(A_k)_ij + k y = Â(y)_ij`` (-1 where +inf)."""
        T = self._terms(y)
        best = T.min(axis=0)
        scale = np.maximum(1.0, np.abs(np.where(np.isfinite(best), best, 0.0)))
        with np.errstate(invalid="ignore"):
            hit = np.isfinite(T) & (np.abs(T - best) <= tol * scale)
        ks = np.arange(self.d + 1)[:, None, None]
        kmin = np.where(hit, ks, self.d + 1).min(axis=0)
        kmax = np.where(hit, ks, -1).max(axis=0)
        kmin[kmin == self.d + 1] = -1
        return kmin, kmax

    def val_matrix(self) -> np.ndarray:
        finite = np.isfinite(self.coeffs)
        ks = np.arange(self.d + 1)[:, None, None]
        out = np.where(finite, ks, self.d + 1).min(axis=0).astype(float)
        out[~finite.any(axis=0)] = INF
        return out

    def deg_matrix(self) -> np.ndarray:
        finite = np.isfinite(self.coeffs)
        ks = np.arange(self.d + 1)[:, None, None]
        out = np.where(finite, ks, -1).max(axis=0).astype(float)
        out[~finite.any(axis=0)] = -INF
        return out

    def finite_spread(self) -> float:
        vals = self.coeffs[np.isfinite(self.coeffs)]
        return float(vals.max() - vals.min()) if vals.size else 0.0

    def __repr__(self) -> str:
        return f"TropMatrixPoly(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class CharPolyFunction:
    """The concave map ``y -> per Â(y)`` as affine pieces, left to right."""

    segments: tuple[tuple[int, float], ...]  # (slope, intercept), slopes strictly decreasing
    breakpoints: tuple[tuple[float, float], ...]  # (y, value)
    val: int
    deg: int

    def __call__(self, y: float) -> float:
        return min(s * y + b for s, b in self.segments)

    def multiplicities(self) -> list[tuple[float, int]]:
        return [(bp[0], s0 - s1) for bp, (s0, _), (s1, _) in zip(self.breakpoints, self.segments, self.segments[1:])]


@dataclass(frozen=True)
class TropEigList:
    finite: tuple[tuple[float, int], ...]  # (eigenvalue, multiplicity), increasing
    mult_plus_inf: int
    mult_minus_inf: int

    @property
    def total(self) -> int:
        return sum(m for _, m in self.finite) + self.mult_plus_inf + self.mult_minus_inf

    def sequence(self) -> list[float]:
        """All eigenvalues repeated by multiplicity in nondecreasing order."""
        seq = [-INF] * self.mult_minus_inf
        for g, m in self.finite:
            seq.extend([g] * m)
        seq.extend([INF] * self.mult_plus_inf)
        return seq


def val_permanent(A: TropMatrixPoly) -> int | None:
    """``val P_A`` as the min-plus permanent of the entrywise valuations; None if singular."""
    try:
        return int(round(min_assignment(A.val_matrix()).value))
    except Infeasible:
        return None


def deg_permanent(A: TropMatrixPoly) -> int | None:
    """``deg P_A`` as the max-plus permanent of the entrywise degrees; None if singular."""
    try:
        return int(round(max_assignment(A.deg_matrix())))
    except Infeasible:
        return None


def _evaluate(A: TropMatrixPoly, y: float) -> tuple[float, tuple[int, float], tuple[int, float], HungarianResult]:
    """Value of ``per Â(y)`` with its right and left tangent lines.

    Optimal permutations are exactly the permutations of the saturation graph,
    so the one-sided slopes are extremal assignments over saturated arcs of
    the attaining monomial degrees.
    """
    B = A.evaluate(y)
    res = min_assignment(B)
    sat = sat_graph(B, res.U, res.V).mask()
    kmin, kmax = A.attaining_degrees(y)
    r = min_assignment(np.where(sat, kmin, INF))
    l = min_assignment(np.where(sat, -kmax, INF))
    return res.value, _line(A, kmin, r.sigma), _line(A, kmax, l.sigma), res


def _line(A: TropMatrixPoly, ks: np.ndarray, sigma) -> tuple[int, float]:
    """Slope and intercept of the affine term selected by ``sigma`` and degrees ``ks``."""
    slope = 0
    intercept = 0.0
    for i, j in enumerate(sigma):
        k = int(ks[i, j])
        slope += k
        intercept += float(A.coeffs[k, i, j])
    return slope, intercept


def eval_char(A: TropMatrixPoly, y: float) -> tuple[float, int]:
    """``(per Â(y), right derivative at y)``; raises ``Infeasible`` if ``per Â(y) = +inf``."""
    value, (right, _), _, _ = _evaluate(A, float(y))
    return value, right


def _require_regular(A: TropMatrixPoly) -> tuple[int, int]:
    val = val_permanent(A)
    if val is None:
        raise SingularTropical("per A is identically +inf", witness="val")
    deg = deg_permanent(A)
    if deg is None:
        raise SingularTropical("per A is identically +inf", witness="deg")
    return val, deg


def char_function(A: TropMatrixPoly) -> CharPolyFunction:
    """Reconstruct ``y -> per Â(y)`` by intersecting tangent lines.

    Each evaluation yields the affine pieces to its left and right.  An
    interval whose bounding tangents share a slope is affine; otherwise the
    tangents' intersection is evaluated next.  Every affine piece is met this
    way, so the final envelope is exact up to rounding.
    """
    val, deg = _require_regular(A)
    R = A.n * A.finite_spread() + 1.0
    lines: dict[int, float] = {}

    def probe(y):
        f, (r, br), (l, bl), _ = _evaluate(A, y)
        lines.setdefault(r, br)
        lines.setdefault(l, bl)
        return f, r, l

    f_lo, r_lo, l_lo = probe(-R)
    f_hi, r_hi, l_hi = probe(R)
    stack = [(-R, r_lo, R, l_hi)]
    budget = 8 * (A.n * A.d + 2)
    while stack and budget > 0:
        a, sa, b, sb = stack.pop()
        if sa == sb:
            continue
        y = (lines[sb] - lines[sa]) / (sa - sb)
        if not a < y < b:
            continue
        budget -= 1
        f, r, l = probe(y)
        stack.append((a, sa, y, l))
        stack.append((y, r, b, sb))
    if l_lo != deg or r_hi != val:
        raise RuntimeError(f"slopes at the bracket ({l_lo}, {r_hi}) disagree with (deg, val) = ({deg}, {val})")

    slopes = sorted(lines, reverse=True)
    kept: list[tuple[int, float]] = []
    for s in slopes:
        b = lines[s]
        # drop pieces that are not on the lower envelope (rounding artefacts)
        while len(kept) >= 2:
            (s1, b1), (s2, b2) = kept[-2], kept[-1]
            if (b2 - b1) * (s2 - s) >= (b - b2) * (s1 - s2):
                kept.pop()
            else:
                break
        kept.append((s, b))
    breakpoints = []
    for (s1, b1), (s2, b2) in zip(kept, kept[1:]):
        y = (b2 - b1) / (s1 - s2)
        breakpoints.append((y, s1 * y + b1))
    return CharPolyFunction(tuple(kept), tuple(breakpoints), val, deg)


def trop_matrix_eigenvalues(A: TropMatrixPoly) -> TropEigList:
    cf = char_function(A)
    finite = tuple(cf.multiplicities())
    out = TropEigList(finite, cf.val, A.n * A.d - cf.deg)
    assert out.total == A.n * A.d
    return out


def _karp_table(A0: np.ndarray) -> np.ndarray:
    n = A0.shape[0]
    D = np.full((n + 1, n), INF)
    D[0] = 0.0
    for k in range(1, n + 1):
        D[k] = (D[k - 1][:, None] + A0).min(axis=0)
    return D


def min_circuit_mean(A0) -> float:
    """Minimal mean weight of a circuit of ``G(A0)`` (Karp's recursion)."""
    A0 = _as_tensor(A0)[0]
    n = A0.shape[0]
    D = _karp_table(A0)
    best = INF
    for v in range(n):
        if D[n, v] == INF:
            continue
        worst = -INF
        for k in range(n):
            if D[k, v] != INF:
                worst = max(worst, (D[n, v] - D[k, v]) / (n - k))
        best = min(best, worst)
    if best == INF:
        raise NoCircuit("the graph of the matrix has no circuit")
    return float(best)


def critical_graph(A0, tol: float = EQ_TOL) -> DiGraph:
    """Union of the circuits of minimal mean weight.

    The matrix is shifted so the minimal mean is zero, rescaled by shortest
    walk potentials so every arc weight is nonnegative, and the critical arcs
    are the zero arcs lying inside strongly connected components.
    """
    A0 = _as_tensor(A0)[0]
    n = A0.shape[0]
    rho = min_circuit_mean(A0)
    B = A0 - rho
    x = np.zeros(n)
    for _ in range(n):
        x = np.minimum(x, (x[:, None] + B).min(axis=0))
    R = B + x[:, None] - x[None, :]
    finite = np.isfinite(A0)
    scale = max(1.0, float(np.abs(A0[finite]).max()))
    zero = finite & (np.abs(R) <= tol * scale)
    tight = DiGraph(n, zip(*np.nonzero(zero)))
    return scc_arcs(tight)


def term_rank(G: DiGraph) -> int:
    return max_matching_size(G)
