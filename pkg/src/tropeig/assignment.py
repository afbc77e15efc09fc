"""Optimal assignment with dual certificates, saturation and optimal-arc graphs.

Costs are square arrays of extended reals where ``+inf`` marks a forbidden
arc.  Node indices are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CertificateError, Infeasible, NotHungarianPair, SizeMismatch
from .tropical_core import INF

EQ_TOL = 1e-9


def as_cost_matrix(B) -> np.ndarray:
    """Return ``B`` as a float array, accepting ``"inf"`` strings."""
    if isinstance(B, np.ndarray) and B.dtype.kind == "f":
        M = B
    else:
        M = np.array(
            [[INF if (isinstance(x, str) and x.strip().lower() in ("inf", "+inf")) else float(x) for x in row] for row in B],
            dtype=float,
        )
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SizeMismatch(f"cost matrix must be square, got shape {M.shape}")
    if np.isnan(M).any():
        raise ValueError("cost matrix contains NaN")
    return M


def tight(b: float, s: float, tol: float = EQ_TOL) -> bool:
    """Whether the dual constraint ``b >= s`` is saturated up to relative ``tol``."""
    return b != INF and abs(b - s) <= tol * max(1.0, abs(b))


@dataclass(frozen=True)
class HungarianResult:
    value: float
    sigma: tuple[int, ...]  # sigma[i] = column assigned to row i
    U: tuple[float, ...]
    V: tuple[float, ...]


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: frozenset

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "arcs", frozenset((int(i), int(j)) for i, j in arcs))

    def __contains__(self, arc) -> bool:
        return tuple(arc) in self.arcs

    def __and__(self, other: "DiGraph") -> "DiGraph":
        return DiGraph(self.n, self.arcs & other.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def successors(self) -> list[list[int]]:
        succ = [[] for _ in range(self.n)]
        for i, j in sorted(self.arcs):
            succ[i].append(j)
        return succ

    def mask(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.arcs:
            m[i, j] = True
        return m

    def permuted(self, sigma: Sequence[int], tau: Sequence[int]) -> "DiGraph":
        """The graph with an arc ``(i, j)`` iff ``(sigma[i], tau^{-1}[j])`` is an arc."""
        tau_inv = inverse(tau)
        return DiGraph(self.n, ((i, j) for i in range(self.n) for j in range(self.n) if (sigma[i], tau_inv[j]) in self.arcs))

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)


def inverse(sigma: Sequence[int]) -> list[int]:
    inv = [0] * len(sigma)
    for i, j in enumerate(sigma):
        inv[j] = i
    return inv


def permutation_weight(B: np.ndarray, sigma: Sequence[int]) -> float:
    total = 0.0
    for i, j in enumerate(sigma):
        b = B[i, j]
        if b == INF:
            return INF
        total += float(b)
    return total


def min_assignment(B) -> HungarianResult:
    """Shortest augmenting path Hungarian method; the potentials are the duals.

    Returns the optimal value, an optimal permutation and a Hungarian pair
    ``(U, V)``: ``B[i, j] >= U[i] + V[j]`` everywhere with equality on the
    permutation.  Raises ``Infeasible`` when every permutation uses a
    forbidden (+inf) entry.
    """
    M = as_cost_matrix(B)
    n = M.shape[0]
    if n == 0:
        raise SizeMismatch("empty cost matrix")
    cost = M.tolist()
    # 1-based workspace: column 0 is the virtual start of each augmenting path
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row matched to column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                c = row[j - 1]
                if c != INF:
                    cur = c - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if delta == INF:
                raise Infeasible("no permutation with finite weight")
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    sigma = [0] * n
    for j in range(1, n + 1):
        sigma[p[j] - 1] = j - 1
    res = HungarianResult(permutation_weight(M, sigma), tuple(sigma), tuple(u[1:]), tuple(v[1:]))
    certify(M, res)
    return res


def certificate_violation(B, res: HungarianResult) -> float:
    """Largest relative violation of feasibility, slackness or strong duality."""
    M = as_cost_matrix(B)
    n = M.shape[0]
    U = np.asarray(res.U)
    V = np.asarray(res.V)
    if not (np.isfinite(U).all() and np.isfinite(V).all()):
        return INF
    S = U[:, None] + V[None, :]
    finite = np.isfinite(M)
    scale = np.maximum(1.0, np.abs(np.where(finite, M, 0.0)))
    feas = np.where(finite, (S - M) / scale, -INF).max()
    slack = max(abs(M[i, res.sigma[i]] - S[i, res.sigma[i]]) / scale[i, res.sigma[i]] for i in range(n))
    total = abs(U.sum() + V.sum() - res.value) / max(1.0, abs(res.value))
    return float(max(feas, slack, total, 0.0))


def certify(B, res: HungarianResult, tol: float = EQ_TOL) -> None:
    viol = certificate_violation(B, res)
    if not viol <= tol:
        raise CertificateError(f"dual certificate violated by {viol:.3e}")


def max_assignment(B) -> float:
    """Max-plus permanent (``-inf`` forbidden) through negation."""
    M = as_cost_matrix(B)
    neg = np.where(M == -INF, INF, -M)
    return -min_assignment(neg).value


def sat_graph(B, U: Sequence[float], V: Sequence[float], tol: float = EQ_TOL) -> DiGraph:
    """Arcs where the dual constraint ``B[i, j] >= U[i] + V[j]`` is tight."""
    M = as_cost_matrix(B)
    n = M.shape[0]
    if len(U) != n or len(V) != n:
        raise SizeMismatch("dual vectors do not match the cost matrix")
    arcs = []
    for i in range(n):
        for j in range(n):
            b = M[i, j]
            if b == INF:
                continue
            s = U[i] + V[j]
            if b - s < -tol * max(1.0, abs(b)):
                raise NotHungarianPair(f"B[{i},{j}]={b} < U+V={s}")
            if tight(b, s, tol):
                arcs.append((i, j))
    return DiGraph(n, arcs)


def tarjan_scc(n: int, succ: Sequence[Sequence[int]]) -> list[int]:
    """Iterative Tarjan; returns the component label of every node."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def scc_arcs(G: DiGraph) -> DiGraph:
    """Arcs of ``G`` whose endpoints lie in the same strongly connected component."""
    comp = tarjan_scc(G.n, G.successors())
    return DiGraph(G.n, ((i, j) for i, j in G.arcs if comp[i] == comp[j]))


def opt_graph(B, res: HungarianResult | None = None) -> DiGraph:
    """Arcs ``(i, j)`` used by at least one optimal permutation.

    After permuting rows so that the identity is optimal, the optimal arcs are
    exactly the saturated arcs inside strongly connected components.
    """
    M = as_cost_matrix(B)
    if res is None:
        res = min_assignment(M)
    sat = sat_graph(M, res.U, res.V)
    sigma = list(res.sigma)
    normalized = sat.permuted(inverse(sigma), list(range(M.shape[0])))
    return scc_arcs(normalized).permuted(sigma, list(range(M.shape[0])))


def max_matching_size(G: DiGraph) -> int:
    """Maximum bipartite matching (tails vs heads) of the arcs of ``G``."""
    if G.n == 0:
        return 0
    cost = np.where(G.mask(), 0.0, 1.0)
    return G.n - int(round(min_assignment(cost).value))
