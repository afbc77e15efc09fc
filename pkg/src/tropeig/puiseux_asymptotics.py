"""First-order asymptotics of roots and eigenvalues from partial valuation data.

A scalar entry ``f(eps) ≃ a eps^A`` is recorded as the pair ``(a, A)``.  When
``a = 0`` with ``A`` finite only a lower bound on the valuation is known; when
``A = +inf`` the entry is identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import DiGraph, EQ_TOL, min_assignment, opt_graph, sat_graph
from .complex_numerics import CMatrixPoly, CPoly, MatrixEigs, as_complex, matrix_poly_eigs, poly_roots
from .errors import Infeasible, NotMonicLike, SingularNumeric, SizeMismatch
from .tropical_core import INF, TropPoly, eval_poly, to_scalar, trop_roots
from .tropical_spectra import TropMatrixPoly, _scalars, trop_matrix_eigenvalues

GRAPH_CHOICES = ("sat", "opt")


def _close(x: float, y: float, tol: float = EQ_TOL) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(y))


def _branch_key(b: tuple[complex, float]):
    lam, expo = b
    return (expo, lam.real, lam.imag)


@dataclass(frozen=True)
class AsymptoticPoly:
    """Coefficient data ``(p_j, P_j)`` for ``j = 0..n``."""

    p: tuple[complex, ...]
    P: tuple[float, ...]

    @classmethod
    def from_pairs(cls, pairs) -> "AsymptoticPoly":
        p, P = [], []
        for a, e in pairs:
            e = to_scalar(e)
            p.append(0j if e == INF else as_complex(a))
            P.append(e)
        if len(p) < 2:
            raise SizeMismatch("an asymptotic polynomial needs degree at least 1")
        return cls(tuple(p), tuple(P))

    @property
    def n(self) -> int:
        return len(self.p) - 1

    def tropical(self) -> TropPoly:
        return TropPoly(self.P)

    def sample(self, eps: float) -> np.ndarray:
        """Coefficients of the pure-monomial representative at ``eps``."""
        return np.array([a * eps**e if e != INF else 0j for a, e in zip(self.p, self.P)], dtype=complex)

    def as_matrix_poly(self) -> "AsymptoticMatrixPoly":
        """The same data as a 1x1 matrix polynomial of degree n."""
        a = np.array(self.p, dtype=complex).reshape(-1, 1, 1)
        A = np.array(self.P, dtype=float).reshape(-1, 1, 1)
        return AsymptoticMatrixPoly(a, A)


@dataclass(frozen=True)
class RootLevel:
    c: float
    m: int
    p_c: tuple[complex, ...]  # coefficients of p^(c), low to high
    branches: tuple[complex, ...]
    m_zero_coeff: int | None
    m_escape: int | None
    degenerate: bool


@dataclass(frozen=True)
class ScalarAsymptotics:
    branches: tuple[tuple[complex, float], ...]  # (y, c) sorted by (c, re, im)
    levels: tuple[RootLevel, ...]
    roots: tuple[float, ...]
    generic: bool

    def counts(self) -> dict[float, int]:
        out: dict[float, int] = {}
        for _, c in self.branches:
            out[c] = out.get(c, 0) + 1
        return out


def scalar_root_asymptotics(P: AsymptoticPoly) -> ScalarAsymptotics:
    """Branches ``y eps^c`` of the roots, one Newton polygon level at a time."""
    if not isinstance(P, AsymptoticPoly):
        P = AsymptoticPoly.from_pairs(P)
    n = P.n
    if P.p[n] == 0 or P.P[n] == INF:
        raise NotMonicLike("the leading coefficient must be nonzero with a finite exponent")
    trop = P.tropical()
    roots = trop_roots(trop)
    branches: list[tuple[complex, float]] = []
    levels = []
    for c, m in roots.multiplicities():
        if c == INF:
            branches.extend([(0j, INF)] * m)
            continue
        top = eval_poly(trop, c)
        pc = np.array(
            [a if (e != INF and _close(e + j * c, top)) else 0j for j, (a, e) in enumerate(zip(P.p, P.P))],
            dtype=complex,
        )
        cp = CPoly(pc)
        if cp.is_zero():
            levels.append(RootLevel(c, m, tuple(pc), (), None, None, True))
            continue
        v, deg = cp.valuation, cp.degree
        ys = poly_roots(CPoly(pc[v : deg + 1])).roots if deg > v else ()
        ys = tuple(sorted(ys, key=lambda z: (z.real, z.imag)))
        branches.extend((y, c) for y in ys)
        levels.append(RootLevel(c, m, tuple(pc), ys, v, n - v - len(ys), False))
    r = roots.roots
    generic = P.p[0] != 0 or P.P[0] == INF
    for i in range(1, n):
        if r[i - 1] < r[i] and P.p[n - i] == 0:
            generic = False
    branches.sort(key=_branch_key)
    return ScalarAsymptotics(tuple(branches), tuple(levels), r, generic)


class AsymptoticMatrixPoly:
    """Entrywise data ``(a_k)_ij eps^{(A_k)_ij}`` for ``k = 0..d``."""

    def __init__(self, a, A):
        A = np.array(_scalars(A) if not isinstance(A, np.ndarray) else A, dtype=float)
        a = np.array(a, dtype=complex)
        if A.ndim == 2:
            A, a = A[None], a[None]
        if a.shape != A.shape or A.ndim != 3 or A.shape[1] != A.shape[2]:
            raise SizeMismatch(f"coefficient shapes {a.shape} and exponent shapes {A.shape} disagree")
        a = np.where(A == INF, 0, a)
        self.a = a
        self.A = A
        self.a.setflags(write=False)
        self.A.setflags(write=False)

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def d(self) -> int:
        return self.A.shape[0] - 1

    def tropical(self) -> TropMatrixPoly:
        return TropMatrixPoly(self.A)

    def sample(self, eps: float) -> CMatrixPoly:
        """The pure-monomial representative at ``eps``."""
        with np.errstate(over="ignore", under="ignore"):
            scale = np.where(self.A == INF, 0.0, np.power(float(eps), np.where(self.A == INF, 0.0, self.A)))
        return CMatrixPoly(self.a * scale)

    def __repr__(self) -> str:
        return f"AsymptoticMatrixPoly(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class GammaRecord:
    gamma: float
    m_trop: int
    m_trop_zero: int  # total multiplicity of tropical eigenvalues above gamma
    m_trop_escape: int
    branches: tuple[complex, ...]
    m_zero_coeff: int | None
    m_escape: int | None
    degenerate: bool

    @property
    def m(self) -> int | None:
        return None if self.degenerate else len(self.branches)

    @property
    def generic(self) -> bool:
        return not self.degenerate and (self.m, self.m_zero_coeff, self.m_escape) == (
            self.m_trop,
            self.m_trop_zero,
            self.m_trop_escape,
        )


@dataclass(frozen=True)
class EigenAsymptotics:
    n: int
    d: int
    per_gamma: tuple[GammaRecord, ...]
    mult_plus_inf: int
    mult_minus_inf: int
    degenerate_gammas: tuple[float, ...] = field(default=())

    @property
    def generic(self) -> bool:
        return all(r.generic for r in self.per_gamma)

    def branches(self) -> list[tuple[complex, float]]:
        """Certain branches ``(lambda, exponent)``, including exact zeros at +inf."""
        out = [(lam, r.gamma) for r in self.per_gamma for lam in r.branches]
        out.extend([(0j, INF)] * self.mult_plus_inf)
        return sorted(out, key=_branch_key)

    def gammas(self) -> list[float]:
        """Tropical eigenvalues repeated by multiplicity, nondecreasing."""
        seq = [-INF] * self.mult_minus_inf
        for r in self.per_gamma:
            seq.extend([r.gamma] * r.m_trop)
        return seq + [INF] * self.mult_plus_inf


def build_Gk(A: TropMatrixPoly, gamma: float, k: int, tol: float = EQ_TOL) -> DiGraph:
    """Arcs where the degree-k monomial attains ``Â(gamma)_ij`` (finite)."""
    if not 0 <= k <= A.d:
        raise ValueError(f"k={k} outside 0..{A.d}")
    best = A.evaluate(gamma)
    term = A.coeffs[k] + k * gamma
    finite = np.isfinite(term)
    scale = np.maximum(1.0, np.abs(np.where(finite, best, 0.0)))
    with np.errstate(invalid="ignore"):
        diff = np.abs(np.where(finite, term - best, INF))
    return DiGraph(A.n, zip(*np.nonzero(finite & (diff <= tol * scale))))


def restrict_matrix(b, G: DiGraph) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    if b.shape != (G.n, G.n):
        raise SizeMismatch(f"matrix of shape {b.shape} does not match a graph on {G.n} nodes")
    return np.where(G.mask(), b, 0)


def auxiliary_pencil(inst: AsymptoticMatrixPoly, A: TropMatrixPoly | None, gamma: float, graph_choice: str = "sat") -> CMatrixPoly:
    """``a^(gamma) = sum_k Y^k a_k`` restricted to the arcs of ``G_k ∩ G``."""
    if graph_choice not in GRAPH_CHOICES:
        raise ValueError(f"graph_choice must be one of {GRAPH_CHOICES}")
    if A is None:
        A = inst.tropical()
    B = A.evaluate(gamma)
    res = min_assignment(B)
    G = sat_graph(B, res.U, res.V) if graph_choice == "sat" else opt_graph(B, res)
    coeffs = [restrict_matrix(inst.a[k], build_Gk(A, gamma, k) & G) for k in range(A.d + 1)]
    return CMatrixPoly(np.stack(coeffs))


def _pencil_eigs(inst, A, gamma, graph_choice) -> MatrixEigs | None:
    try:
        return matrix_poly_eigs(auxiliary_pencil(inst, A, gamma, graph_choice))
    except SingularNumeric:
        return None


def matrix_eigen_asymptotics(inst: AsymptoticMatrixPoly, graph_choice: str = "sat") -> EigenAsymptotics:
    """Predicted leading terms ``lambda eps^gamma`` of every eigenvalue branch."""
    A = inst.tropical()
    eig = trop_matrix_eigenvalues(A)
    nd = A.n * A.d
    records = []
    degenerate = []
    for idx, (gamma, m) in enumerate(eig.finite):
        above = sum(mm for _, mm in eig.finite[idx + 1 :]) + eig.mult_plus_inf
        res = _pencil_eigs(inst, A, gamma, graph_choice)
        if res is None:
            degenerate.append(gamma)
            records.append(GammaRecord(gamma, m, above, nd - m - above, (), None, None, True))
            continue
        lams = tuple(sorted(res.finite.roots, key=lambda z: (z.real, z.imag)))
        records.append(GammaRecord(gamma, m, above, nd - m - above, lams, res.m_zero, res.m_inf, False))
    return EigenAsymptotics(A.n, A.d, tuple(records), eig.mult_plus_inf, eig.mult_minus_inf, tuple(degenerate))


def _same_multiset(x, y, rel: float = 1e-7) -> bool:
    if len(x) != len(y):
        return False
    if not x:
        return True
    cost = np.array([[abs(a - b) / max(1.0, abs(a)) for b in y] for a in x])
    res = min_assignment(cost)
    return all(cost[i, j] <= rel for i, j in enumerate(res.sigma))


def sat_opt_equivalence(inst: AsymptoticMatrixPoly, A: TropMatrixPoly | None, gamma: float) -> bool:
    """Whether the Sat- and Opt-based auxiliary pencils have the same spectrum."""
    if A is None:
        A = inst.tropical()
    try:
        s = _pencil_eigs(inst, A, gamma, "sat")
        o = _pencil_eigs(inst, A, gamma, "opt")
    except Infeasible:
        raise
    if s is None or o is None:
        return s is None and o is None
    return (s.m_zero, s.m_inf) == (o.m_zero, o.m_inf) and _same_multiset(list(s.finite.roots), list(o.finite.roots))
