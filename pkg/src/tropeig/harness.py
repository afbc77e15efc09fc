"""Numerical verification of predicted eigenvalue asymptotics at small epsilon.

Spectra of the pure-monomial representative ``sum_k Y^k (a_k eps^{A_k})`` are
computed through a graded determinant: for each tropical eigenvalue ``gamma``
the variable is rescaled by ``eps^gamma`` and rows and columns by the Hungarian
pair of ``Â(gamma)``, so that the coefficients of the determinant that matter
at that scale are obtained with full relative accuracy.  Each coefficient is
then taken from the scale where its absolute error is smallest.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .assignment import min_assignment
from .complex_numerics import CPoly, poly_roots
from .errors import CountMismatch, SingularNumeric, SingularTropical
from .puiseux_asymptotics import AsymptoticMatrixPoly, AsymptoticPoly, EigenAsymptotics, matrix_eigen_asymptotics
from .tropical_core import INF, MajorizationReport, weak_majorization
from .tropical_spectra import trop_matrix_eigenvalues

DEFAULT_EPSILONS = (1e-3, 1e-4, 1e-5, 1e-6)
TOL_EXP = 0.05
TOL_COEFF = 0.05
MAJ_TOL = 1e-3
ROUND_TOL = 0.05
_EPS = np.finfo(float).eps
_NOISE_FACTOR = 1e3
_MISMATCH_COST = 1e6


@dataclass(frozen=True)
class SampledSpectrum:
    epsilon: float
    eigenvalues: tuple[complex, ...]  # finite eigenvalues, exact zeros included
    m_inf: int = 0


def _as_matrix_inst(inst) -> AsymptoticMatrixPoly:
    return inst.as_matrix_poly() if isinstance(inst, AsymptoticPoly) else inst


def _graded_det(inst: AsymptoticMatrixPoly, eps: float) -> np.ndarray:
    """Coefficients of ``det`` of the sampled matrix polynomial, low to high."""
    A = inst.tropical()
    n, d = A.n, A.d
    nd = n * d
    try:
        eig = trop_matrix_eigenvalues(A)
    except SingularTropical as exc:
        raise SingularNumeric("the sampled determinant vanishes identically", witness="det") from exc
    val = eig.mult_plus_inf
    deg = nd - eig.mult_minus_inf
    scales = [g for g, _ in eig.finite] or [0.0]
    N = nd + 1
    nodes = np.exp(2j * np.pi * np.arange(N) / N)
    ks = np.arange(d + 1, dtype=float)[:, None, None]
    log_eps = math.log(eps)
    best_coeff = np.zeros(N, dtype=complex)
    best_logerr = np.full(N, INF)
    finite = np.isfinite(inst.A)
    for g in scales:
        res = min_assignment(A.evaluate(g))
        U = np.asarray(res.U)
        V = np.asarray(res.V)
        expo = np.where(finite, inst.A + ks * g - U[None, :, None] - V[None, None, :], 0.0)
        with np.errstate(under="ignore"):
            mats = inst.a * np.where(finite, np.exp(np.maximum(expo, 0.0) * log_eps), 0.0)
        Ms = np.zeros((N, n, n), dtype=complex)
        for a in mats[::-1]:
            Ms = Ms * nodes[:, None, None] + a
        vals = np.linalg.det(Ms)
        hadamard = float(np.prod(np.linalg.norm(Ms, axis=2), axis=1).max())
        scaled = np.fft.fft(vals) / N
        logscale = (res.value - np.arange(N) * g) * log_eps
        logerr = math.log(max(hadamard, 1e-300) * _EPS) + logscale
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            coeff = np.where(scaled == 0, 0, scaled * np.exp(logscale))
        better = logerr < best_logerr
        best_coeff[better] = coeff[better]
        best_logerr[better] = logerr[better]
    keep = np.abs(best_coeff) > _NOISE_FACTOR * np.exp(best_logerr)
    keep[:val] = False
    keep[deg + 1 :] = False
    return np.where(keep, best_coeff, 0)


def sample_eigenvalues(inst, eps: float) -> SampledSpectrum:
    """Eigenvalues of ``sum_k Y^k a_k eps^{A_k}``; infinite ones are only counted."""
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    inst = _as_matrix_inst(inst)
    det = CPoly(_graded_det(inst, eps))
    if det.is_zero():
        raise SingularNumeric("the sampled determinant vanishes identically", witness="det")
    v, deg = det.valuation, det.degree
    roots = list(poly_roots(CPoly(det.coeffs[v : deg + 1])).roots) if deg > v else []
    eigs = tuple([0j] * v + sorted(roots, key=lambda z: (abs(z), z.real, z.imag)))
    return SampledSpectrum(float(eps), eigs, inst.n * inst.d - deg)


@dataclass(frozen=True)
class ExponentEstimate:
    exponent: float  # raw estimate; +inf for exact zeros, -inf for infinite eigenvalues
    coefficient: complex | None
    value: complex | None  # eigenvalue at the smaller epsilon


def _wrapped(x: float) -> float:
    return (x + math.pi) % (2 * math.pi) - math.pi


def estimate_exponents(s1: SampledSpectrum, s2: SampledSpectrum, predicted_exponents=None) -> list[ExponentEstimate]:
    """Exponents ``(log|L(e2)| - log|L(e1)|) / (log e2 - log e1)`` with coefficients.

    Eigenvalues of the two samples are paired by an optimal assignment on a
    log-polar distance.  A branch ``lambda eps^c`` keeps its argument and moves
    in modulus by ``c log(e2/e1)``; when candidate exponents are supplied the
    modulus change is compared to the nearest candidate.
    """
    if not s1.epsilon > s2.epsilon:
        raise ValueError("samples must be ordered by decreasing epsilon")
    z1, z2 = list(s1.eigenvalues), list(s2.eigenvalues)
    if len(z1) != len(z2) or s1.m_inf != s2.m_inf:
        raise CountMismatch(f"sample sizes differ: {len(z1)} vs {len(z2)}")
    cands = sorted({float(c) for c in (predicted_exponents or ()) if math.isfinite(c)})
    L = math.log(s2.epsilon / s1.epsilon)
    out: list[ExponentEstimate] = []
    if z1:
        cost = np.zeros((len(z1), len(z2)))
        for i, a in enumerate(z1):
            for j, b in enumerate(z2):
                if a == 0 or b == 0:
                    cost[i, j] = 0.0 if a == b else _MISMATCH_COST
                    continue
                slope = (math.log(abs(b)) - math.log(abs(a))) / L
                dmag = min((abs(slope - c) for c in cands), default=0.0)
                cost[i, j] = dmag**2 + _wrapped(np.angle(b) - np.angle(a)) ** 2
        res = min_assignment(cost)
        for i, j in enumerate(res.sigma):
            a, b = z1[i], z2[j]
            if b == 0:
                out.append(ExponentEstimate(INF, 0j, 0j))
                continue
            if a == 0:
                raise CountMismatch("an exact zero eigenvalue appeared at only one epsilon")
            slope = (math.log(abs(b)) - math.log(abs(a))) / L
            used = slope
            if cands:
                near = min(cands, key=lambda c: abs(c - slope))
                if abs(near - slope) <= ROUND_TOL:
                    used = near
            out.append(ExponentEstimate(slope, complex(b / s2.epsilon**used), complex(b)))
    out.extend(ExponentEstimate(-INF, None, None) for _ in range(s2.m_inf))
    out.sort(key=lambda e: (e.exponent, 0.0 if e.value is None else abs(e.value)))
    return out


@dataclass(frozen=True)
class BranchMatch:
    kind: str  # "certain" or "unresolved" (missing at a non-generic or degenerate level)
    predicted_coeff: complex | None
    predicted_exponent: float
    observed_exponent: float | None
    observed_coeff: complex | None
    exponent_err: float | None
    coeff_rel_err: float | None
    matched: bool


@dataclass(frozen=True)
class DirectionCheck:
    gamma: float
    expected_above: int
    observed_above: int
    expected_below: int
    observed_below: int

    @property
    def ok(self) -> bool:
        return (self.expected_above, self.expected_below) == (self.observed_above, self.observed_below)


@dataclass(frozen=True)
class MatchReport:
    epsilons: tuple[float, ...]
    branches: tuple[BranchMatch, ...]
    majorization: MajorizationReport
    unmatched_observed: tuple[ExponentEstimate, ...]
    observed: tuple[ExponentEstimate, ...]
    gammas: tuple[float, ...]
    direction_checks: tuple[DirectionCheck, ...]
    spectra: tuple[SampledSpectrum, ...] = field(repr=False, default=())

    @property
    def all_matched(self) -> bool:
        return all(b.matched for b in self.branches if b.kind == "certain")

    @property
    def ok(self) -> bool:
        return self.majorization.holds and self.all_matched

    def observed_exponents(self) -> list[float]:
        return sorted(e.exponent for e in self.observed)

    def to_json(self) -> dict:
        from .serialization import encode

        return encode(
            {
                "epsilons": list(self.epsilons),
                "ok": self.ok,
                "all_matched": self.all_matched,
                "branches": [b.__dict__ for b in self.branches],
                "majorization": {"holds": self.majorization.holds, "margins": list(self.majorization.margins)},
                "gammas": list(self.gammas),
                "observed": [e.__dict__ for e in self.observed],
                "unmatched_observed": [e.__dict__ for e in self.unmatched_observed],
                "direction_checks": [dict(c.__dict__, ok=c.ok) for c in self.direction_checks],
            }
        )

    def spectra_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "re", "im"])
        for s in self.spectra:
            for z in s.eigenvalues:
                w.writerow([repr(s.epsilon), repr(z.real), repr(z.imag)])
            for _ in range(s.m_inf):
                w.writerow([repr(s.epsilon), "inf", "nan"])
        return buf.getvalue()


def _match_cost(lam: complex, expo: float, obs: ExponentEstimate) -> tuple[float, float, float]:
    if expo == INF or obs.exponent == INF:
        if expo == obs.exponent:
            return 0.0, 0.0, 0.0
        return _MISMATCH_COST, INF, INF
    if obs.exponent == -INF:
        return _MISMATCH_COST, INF, INF
    eerr = abs(obs.exponent - expo)
    cerr = abs(obs.coefficient - lam) / abs(lam) if lam != 0 else INF
    return eerr + min(1.0, cerr), eerr, cerr


def verify(
    inst,
    predictions: EigenAsymptotics | None = None,
    epsilons=DEFAULT_EPSILONS,
    tol_exp: float = TOL_EXP,
    tol_coeff: float = TOL_COEFF,
    maj_tol: float = MAJ_TOL,
) -> MatchReport:
    """Sample the spectrum along ``epsilons`` and compare with the predictions."""
    inst = _as_matrix_inst(inst)
    if predictions is None:
        predictions = matrix_eigen_asymptotics(inst)
    eps = sorted({float(e) for e in epsilons}, reverse=True)
    if len(eps) < 2:
        raise ValueError("at least two distinct epsilons are needed")
    spectra = tuple(sample_eigenvalues(inst, e) for e in eps)
    levels = [r.gamma for r in predictions.per_gamma]
    observed = estimate_exponents(spectra[-2], spectra[-1], levels)

    certain = predictions.branches()
    P, O = len(certain), len(observed)
    size = max(P, O, 1)
    cost = np.full((size, size), 1e3)
    errs = {}
    for i, (lam, expo) in enumerate(certain):
        for j, obs in enumerate(observed):
            c, e, r = _match_cost(lam, expo, obs)
            cost[i, j] = c
            errs[i, j] = (e, r)
    res = min_assignment(cost)
    records = []
    used = set()
    for i, (lam, expo) in enumerate(certain):
        j = res.sigma[i]
        if j >= O or cost[i, j] >= _MISMATCH_COST:
            records.append(BranchMatch("certain", lam, expo, None, None, None, None, False))
            continue
        used.add(j)
        obs = observed[j]
        e, r = errs[i, j]
        ok = e <= tol_exp and (r <= tol_coeff or (lam == 0 and obs.coefficient == 0))
        records.append(BranchMatch("certain", lam, expo, obs.exponent, obs.coefficient, e, r, ok))
    for rec in predictions.per_gamma:
        missing = rec.m_trop - (rec.m or 0)
        records.extend(BranchMatch("unresolved", None, rec.gamma, None, None, None, None, False) for _ in range(missing))
    unmatched = tuple(obs for j, obs in enumerate(observed) if j not in used)

    exps = [o.exponent for o in observed]
    gammas = predictions.gammas()
    maj = weak_majorization(exps, gammas, tol=maj_tol)
    checks = []
    for rec in predictions.per_gamma:
        if rec.degenerate:
            continue
        above = sum(1 for x in exps if x > rec.gamma + tol_exp)
        below = sum(1 for x in exps if x < rec.gamma - tol_exp)
        checks.append(DirectionCheck(rec.gamma, rec.m_zero_coeff, above, rec.m_escape, below))
    return MatchReport(tuple(eps), tuple(records), maj, unmatched, tuple(observed), tuple(gammas), tuple(checks), spectra)


def random_instance(
    rng: np.random.Generator,
    n: int,
    d: int,
    p_inf: float = 0.3,
    exponents=(0, 1, 2, 3),
    monic: bool = True,
    ties: bool = False,
) -> AsymptoticMatrixPoly:
    """Random data with complex normal coefficients and integer exponents.

    With ``monic`` the leading coefficient is the identity on both sides.
    With ``ties`` the exponents are drawn from {0, 1} so that many optimal
    assignments coexist.
    """
    top = d if monic else d + 1
    pool = np.array((0, 1) if ties else exponents, dtype=float)
    A = rng.choice(pool, size=(d + 1, n, n))
    A[:top][rng.random((top, n, n)) < p_inf] = INF
    a = rng.normal(size=(d + 1, n, n)) + 1j * rng.normal(size=(d + 1, n, n))
    if monic:
        A[d] = INF
        np.fill_diagonal(A[d], 0.0)
        a[d] = np.eye(n)
    return AsymptoticMatrixPoly(a, A)
