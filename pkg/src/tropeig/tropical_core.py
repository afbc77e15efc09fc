"""Min-plus scalars and polynomials, Newton polygons and tropical roots.

Scalars live in R ∪ {+inf} with ``a ⊕ b = min(a, b)`` and ``a ⊗ b = a + b``.
The tropical zero is ``+inf`` and the tropical unit is ``0``.  IEEE ``inf`` is
used as the explicit infinity marker; every place where ``inf - inf`` or
``0 * inf`` could arise is handled by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import LengthMismatch, ZeroPolynomial

INF = math.inf
ZERO = INF  # tropical zero
ONE = 0.0  # tropical unit

SATURATED = "saturated"


def is_zero(x: float) -> bool:
    return x == INF


def tadd(*xs: float) -> float:
    """Tropical sum (min); the empty sum is +inf."""
    return min(xs, default=INF)


def tmul(*xs: float) -> float:
    """Tropical product (ordinary sum) with +inf absorbing."""
    total = 0.0
    for x in xs:
        if x == INF:
            return INF
        total += x
    return total


def tpow(x: float, k: int) -> float:
    if k == 0:
        return ONE
    if x == INF:
        return INF
    return k * x


def to_scalar(x) -> float:
    """Coerce a JSON-ish value (number, ``"inf"``, ``None``) to an extended real."""
    if x is None:
        return INF
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return float(s)
    v = float(x)
    if math.isnan(v):
        raise ValueError("NaN is not an extended real")
    return v


@dataclass(frozen=True)
class TropPoly:
    """Formal min-plus polynomial; ``coeffs[k]`` is the coefficient of Y^k."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(to_scalar(c) for c in coeffs))

    @property
    def degree(self) -> float:
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k] != INF:
                return k
        return -INF

    @property
    def valuation(self) -> float:
        for k, c in enumerate(self.coeffs):
            if c != INF:
                return k
        return INF

    def is_zero(self) -> bool:
        return all(c == INF for c in self.coeffs)

    def __call__(self, y: float) -> float:
        return eval_poly(self, y)

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> list:
        return [("inf" if c == INF else c) for c in self.coeffs]


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points ``(k, P_k)``.

    ``hull_coeffs[k]`` is the hull value at the integer abscissa ``k`` for
    ``k`` in ``[valuation, degree]`` and ``+inf`` below the valuation.
    ``breakpoints`` are the hull vertices, both endpoints included, sorted by
    index; consecutive vertices bound segments of strictly increasing slope.
    """

    hull_coeffs: tuple[float, ...]
    breakpoints: tuple[tuple[int, float], ...]
    valuation: int
    degree: int

    def as_poly(self) -> TropPoly:
        return TropPoly(self.hull_coeffs)


@dataclass(frozen=True)
class RootList:
    """Tropical roots ``c_1 <= ... <= c_n`` repeated by multiplicity."""

    roots: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def multiplicities(self) -> list[tuple[float, int]]:
        out: list[tuple[float, int]] = []
        for c in self.roots:
            if out and out[-1][0] == c:
                out[-1] = (c, out[-1][1] + 1)
            else:
                out.append((c, 1))
        return out

    @property
    def finite(self) -> tuple[float, ...]:
        return tuple(c for c in self.roots if c != INF)


def eval_poly(P: TropPoly, y: float) -> float:
    """Evaluate ``min_k (P_k + k*y)``."""
    y = to_scalar(y)
    best = INF
    for k, c in enumerate(P.coeffs):
        if c == INF:
            continue
        if k == 0:
            term = c
        elif y == INF:
            continue
        else:
            term = c + k * y
        if term < best:
            best = term
    return best


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(P: TropPoly) -> NewtonPolygon:
    if P.is_zero():
        raise ZeroPolynomial("the zero polynomial has no Newton polygon")
    pts = [(k, c) for k, c in enumerate(P.coeffs) if c != INF]
    scale = max(1.0, max(abs(c) for _, c in pts))
    tol = 1e-12 * scale * max(1, len(P.coeffs))
    hull: list[tuple[int, float]] = []
    for p in pts:
        # pop non-strict turns so collinear points are not vertices
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= tol:
            hull.pop()
        hull.append(p)
    val, deg = hull[0][0], hull[-1][0]
    values = [INF] * (deg + 1)
    for (k0, v0), (k1, v1) in zip(hull, hull[1:]):
        slope = (v1 - v0) / (k1 - k0)
        for k in range(k0, k1):
            values[k] = v0 if k == k0 else v0 + slope * (k - k0)
    values[deg] = hull[-1][1]
    return NewtonPolygon(tuple(values), tuple(hull), val, deg)


def trop_roots(P: TropPoly) -> RootList:
    """Roots of ``P`` in nondecreasing order, +inf repeated ``val P`` times.

    A hull segment from index ``k0`` to ``k1`` contributes the root
    ``(v0 - v1) / (k1 - k0)`` with multiplicity ``k1 - k0``; the segment
    closest to the degree carries the smallest root.
    """
    poly = newton_polygon(P)
    roots: list[float] = []
    verts = poly.breakpoints
    for (k0, v0), (k1, v1) in reversed(list(zip(verts, verts[1:]))):
        c = (v0 - v1) / (k1 - k0)
        roots.extend([c] * (k1 - k0))
    roots.extend([INF] * poly.valuation)
    return RootList(tuple(roots))


def poly_from_roots(lead: float, roots: Sequence[float]) -> TropPoly:
    """Expand ``lead ⊗ (Y ⊕ c_1) ⊗ ... ⊗ (Y ⊕ c_n)`` into coefficients."""
    coeffs = [lead]
    for c in roots:
        nxt = [INF] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            nxt[k + 1] = min(nxt[k + 1], a)
            nxt[k] = min(nxt[k], tmul(a, c))
        coeffs = nxt
    return TropPoly(coeffs)


def eval_factored(lead: float, roots: Sequence[float], y: float) -> float:
    return tmul(lead, *(min(y, c) for c in roots))


@dataclass(frozen=True)
class MajorizationReport:
    holds: bool
    margins: tuple  # float, or SATURATED when both partial sums share an infinite value


def _prefix_sums(xs: Sequence[float]) -> list[float]:
    out = []
    total = 0.0
    has_neg = has_pos = False
    for x in xs:
        if x == -INF:
            has_neg = True
        elif x == INF:
            has_pos = True
        else:
            total += x
        out.append(-INF if has_neg else (INF if has_pos else total))
    return out


def weak_majorization(u: Sequence[float], v: Sequence[float], tol: float = 0.0) -> MajorizationReport:
    """Check ``u ≺^w v``: every sum of the k smallest ``u`` dominates that of ``v``.

    Inputs are sorted before comparison.  ``tol`` is the allowed negative
    slack on each partial-sum inequality.
    """
    if len(u) != len(v):
        raise LengthMismatch(f"cannot compare sequences of length {len(u)} and {len(v)}")
    su = _prefix_sums(sorted(to_scalar(x) for x in u))
    sv = _prefix_sums(sorted(to_scalar(x) for x in v))
    holds = True
    margins = []
    for a, b in zip(su, sv):
        if math.isinf(a) and a == b:
            margins.append(SATURATED)
            continue
        margin = a - b
        margins.append(margin)
        if margin < -tol:
            holds = False
    return MajorizationReport(holds, tuple(margins))
