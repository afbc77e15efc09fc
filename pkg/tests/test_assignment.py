import itertools

import numpy as np
import pytest

from oracles import brute_max_matching, brute_min_assignment, optimal_arcs, optimal_permutations, random_cost
from tropeig.assignment import (
    DiGraph,
    HungarianResult,
    certificate_violation,
    certify,
    inverse,
    max_assignment,
    max_matching_size,
    min_assignment,
    opt_graph,
    permutation_weight,
    sat_graph,
    scc_arcs,
)
from tropeig.errors import CertificateError, Infeasible, NotHungarianPair, SizeMismatch
from tropeig.tropical_core import INF


def _feasible_costs(seed, count, sizes=(1, 2, 3, 4, 5), p_inf=0.3, high=6):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.choice(sizes))
        B = random_cost(rng, n, p_inf, 0, high)
        if brute_min_assignment(B) != INF:
            out.append(B)
    return out


def test_value_matches_brute_force():
    for B in _feasible_costs(1, 200):
        res = min_assignment(B)
        assert res.value == pytest.approx(brute_min_assignment(B), abs=1e-9)
        assert permutation_weight(B, res.sigma) == pytest.approx(res.value, abs=1e-9)


def test_real_valued_costs():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        B = rng.normal(size=(n, n)) * 10
        assert min_assignment(B).value == pytest.approx(brute_min_assignment(B), abs=1e-9)


def test_certificate_holds():
    for B in _feasible_costs(3, 200):
        res = min_assignment(B)
        U, V = np.array(res.U), np.array(res.V)
        fin = np.isfinite(B)
        assert np.all(B[fin] >= (U[:, None] + V[None, :])[fin] - 1e-9)
        for i, j in enumerate(res.sigma):
            assert B[i, j] == pytest.approx(U[i] + V[j], abs=1e-9)
        assert U.sum() + V.sum() == pytest.approx(res.value, abs=1e-9)
        assert certificate_violation(B, res) <= 1e-9


def test_certify_rejects_bad_pair():
    B = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(CertificateError):
        certify(B, HungarianResult(0.0, (0, 1), (0.5, 0.5), (0.0, 0.0)))


def test_infeasible():
    with pytest.raises(Infeasible):
        min_assignment([[INF, INF], [0, 0]])
    with pytest.raises(Infeasible):
        min_assignment([["inf", 0], ["inf", 0]])


def test_non_square():
    with pytest.raises(SizeMismatch):
        min_assignment(np.zeros((2, 3)))


def test_max_assignment():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        B = rng.integers(-5, 5, size=(n, n)).astype(float)
        B[rng.random((n, n)) < 0.2] = -INF
        brute = max((sum(B[i, s[i]] for i in range(n)) for s in itertools.permutations(range(n))), default=-INF)
        if brute == -INF:
            continue
        assert max_assignment(B) == pytest.approx(brute)


def test_sat_contains_every_optimal_arc():
    for B in _feasible_costs(5, 150):
        res = min_assignment(B)
        sat = sat_graph(B, res.U, res.V)
        assert optimal_arcs(B) <= set(sat.arcs)


def test_sat_is_exactly_the_tight_arcs():
    B = np.array([[0.0, 1.0, INF], [1.0, 0.0, 2.0], [INF, 3.0, 0.0]])
    sat = sat_graph(B, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    assert sat.sorted_arcs() == [(0, 0), (1, 1), (2, 2)]
    sat = sat_graph(B, (0.0, 1.0, 0.0), (0.0, -1.0, 0.0))
    assert sat.sorted_arcs() == [(0, 0), (1, 0), (1, 1), (2, 2)]


def test_sat_rejects_infeasible_duals():
    with pytest.raises(NotHungarianPair):
        sat_graph([[0.0]], (1.0,), (0.0,))


def test_opt_graph_matches_enumeration():
    for B in _feasible_costs(6, 200, sizes=(1, 2, 3, 4, 5), p_inf=0.3, high=3):
        assert set(opt_graph(B).arcs) == optimal_arcs(B)


def test_opt_graph_independent_of_hungarian_pair():
    """Any dual-optimal pair, not only the one from the solver, gives the same Opt."""
    for B in _feasible_costs(7, 100, high=3):
        res = min_assignment(B)
        shifted = HungarianResult(res.value, res.sigma, tuple(u + 2.5 for u in res.U), tuple(v - 2.5 for v in res.V))
        assert opt_graph(B, shifted) == opt_graph(B, res)
        # optimal arcs are tight for every Hungarian pair
        assert opt_graph(B).arcs <= sat_graph(B, shifted.U, shifted.V).arcs


def test_opt_is_scc_of_normalized_sat():
    """With rows permuted so the identity is optimal, Opt is the SCC-internal part of Sat."""
    for B in _feasible_costs(8, 100, high=3):
        res = min_assignment(B)
        n = B.shape[0]
        rows = list(res.sigma)
        C = B[:, rows]  # column j of C is column sigma[j] of B, so the identity is optimal
        resC = min_assignment(C)
        assert resC.value == pytest.approx(res.value)
        _, perms = optimal_permutations(C)
        assert tuple(range(n)) in perms
        satC = sat_graph(C, res.U, [res.V[j] for j in rows])
        assert set(scc_arcs(satC).arcs) == optimal_arcs(C)


def test_permutation_equivariance():
    rng = np.random.default_rng(9)
    for B in _feasible_costs(9, 100, high=3):
        n = B.shape[0]
        sigma = list(rng.permutation(n))
        tau = list(rng.permutation(n))
        tau_inv = inverse(tau)
        Bp = np.array([[B[sigma[i], tau_inv[j]] for j in range(n)] for i in range(n)])
        assert opt_graph(Bp) == opt_graph(B).permuted(sigma, tau)
        assert min_assignment(Bp).value == pytest.approx(min_assignment(B).value)


def test_digraph_basics():
    G = DiGraph(3, [(0, 1), (1, 0), (1, 2)])
    assert (0, 1) in G and (2, 1) not in G
    assert len(G & DiGraph(3, [(0, 1), (2, 2)])) == 1
    assert G.successors() == [[1], [0, 2], []]
    assert scc_arcs(G).sorted_arcs() == [(0, 1), (1, 0)]
    assert G.mask().sum() == 3


def test_max_matching_size():
    rng = np.random.default_rng(10)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        arcs = {(i, j) for i in range(n) for j in range(n) if rng.random() < 0.3}
        assert max_matching_size(DiGraph(n, arcs)) == brute_max_matching(arcs, n)
