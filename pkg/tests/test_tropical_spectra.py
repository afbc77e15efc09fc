import numpy as np
import pytest

from oracles import (
    brute_critical_arcs,
    brute_max_matching,
    brute_min_circuit_mean,
    formal_char_poly,
    grid_roots,
    perm_weight,
    trace_formula_rho,
)
from tropeig.errors import NoCircuit, SingularTropical
from tropeig.tropical_core import INF, TropPoly, trop_roots
from tropeig.tropical_spectra import (
    TropMatrixPoly,
    char_function,
    critical_graph,
    deg_permanent,
    eval_char,
    min_circuit_mean,
    term_rank,
    trop_matrix_eigenvalues,
    val_permanent,
)

LIDSKII_A0 = [[1, 0, 1], [1, 1, 0], [INF, 1, 1]]


def random_pencil(rng, n, d, p_inf=0.3, high=6, monic=False):
    T = rng.integers(0, high, size=(d + 1, n, n)).astype(float)
    T[rng.random(T.shape) < p_inf] = INF
    if monic:
        T[d] = INF
        np.fill_diagonal(T[d], 0.0)
    return TropMatrixPoly(T)


def regular_pencils(seed, count, max_n=3, max_d=2):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        A = random_pencil(rng, int(rng.integers(1, max_n + 1)), int(rng.integers(1, max_d + 1)))
        if val_permanent(A) is not None:
            out.append(A)
    return out


def test_lidskii_example():
    A = TropMatrixPoly.identity_pencil(LIDSKII_A0)
    cf = char_function(A)
    assert cf.segments == ((3, 0.0), (1, 1.0), (0, 2.0))
    assert cf.breakpoints == ((0.5, 1.5), (1.0, 2.0))
    eig = trop_matrix_eigenvalues(A)
    assert eig.finite == ((0.5, 2), (1.0, 1))
    assert (eig.mult_plus_inf, eig.mult_minus_inf) == (0, 0)
    assert eig.sequence() == [0.5, 0.5, 1.0]


def test_lidskii_critical_graph():
    assert min_circuit_mean(LIDSKII_A0) == 0.5
    G = critical_graph(LIDSKII_A0)
    assert G.sorted_arcs() == [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert term_rank(G) == 2


def test_char_function_matches_enumeration():
    for A in regular_pencils(21, 120):
        formal = formal_char_poly(A.coeffs)
        cf = char_function(A)
        for y in np.linspace(-15, 15, 31):
            assert cf(y) == pytest.approx(min(c + k * y for k, c in enumerate(formal)), abs=1e-9)
        expect = [(c, m) for c, m in trop_roots(TropPoly(formal)).multiplicities() if c != INF]
        assert len(cf.multiplicities()) == len(expect)
        for (g, m), (g2, m2) in zip(cf.multiplicities(), expect):
            assert g == pytest.approx(g2, abs=1e-9) and m == m2


def test_eigenvalues_against_grid_oracle():
    for A in regular_pencils(22, 40):
        formal = formal_char_poly(A.coeffs)
        finite = trop_matrix_eigenvalues(A).finite
        oracle = grid_roots(formal)
        assert [m for _, m in finite] == [m for _, m in oracle]
        assert np.allclose([g for g, _ in finite], [g for g, _ in oracle], atol=1e-9)


def test_eval_char_value_and_slope():
    rng = np.random.default_rng(23)
    for A in regular_pencils(23, 20):
        formal = formal_char_poly(A.coeffs)
        cf = char_function(A)
        for y in rng.uniform(-10, 10, size=100):
            value, slope = eval_char(A, y)
            terms = [c + k * y for k, c in enumerate(formal)]
            best = min(terms)
            assert value == pytest.approx(best, abs=1e-9)
            assert cf(y) == pytest.approx(value, abs=1e-9)
            # right derivative: smallest degree attaining the minimum
            assert slope == min(k for k, t in enumerate(terms) if abs(t - best) <= 1e-9)


def test_multiplicities_sum_to_nd():
    for A in regular_pencils(24, 60):
        assert trop_matrix_eigenvalues(A).total == A.n * A.d


def test_val_deg_permanents():
    for A in regular_pencils(25, 60):
        formal = formal_char_poly(A.coeffs)
        fin = [k for k, c in enumerate(formal) if c != INF]
        assert val_permanent(A) == fin[0]
        assert deg_permanent(A) == fin[-1]
        eig = trop_matrix_eigenvalues(A)
        assert eig.mult_plus_inf == fin[0]
        assert eig.mult_minus_inf == A.n * A.d - fin[-1]


def test_identity_pencil_all_infinite():
    A = TropMatrixPoly.identity_pencil(np.full((3, 3), INF))
    eig = trop_matrix_eigenvalues(A)
    assert eig.finite == () and eig.mult_plus_inf == 3


def test_diagonal_pencil():
    A = TropMatrixPoly.identity_pencil([[1, INF, INF], [INF, 2, INF], [INF, INF, 0.5]])
    assert trop_matrix_eigenvalues(A).finite == ((0.5, 1), (1.0, 1), (2.0, 1))


def test_leading_zero_gives_minus_infinity():
    # A_1 has a single finite entry, so per A(y) = min(0, y) and deg P_A = 1 < nd
    A = TropMatrixPoly([[[0, 0], [0, 0]], [[0, INF], [INF, INF]]])
    eig = trop_matrix_eigenvalues(A)
    assert eig.finite == ((0.0, 1),)
    assert eig.mult_minus_inf == 1 and eig.total == 2


def test_scaling_equivariance():
    """Adding c to every A_k and replacing A_k by A_k - k s shifts the spectrum by s."""
    for A in regular_pencils(26, 40):
        s = 0.75
        ks = np.arange(A.d + 1)[:, None, None]
        B = TropMatrixPoly(A.coeffs - ks * s + 2.0)
        ea, eb = trop_matrix_eigenvalues(A), trop_matrix_eigenvalues(B)
        assert [m for _, m in ea.finite] == [m for _, m in eb.finite]
        assert np.allclose([g + s for g, _ in ea.finite], [g for g, _ in eb.finite], atol=1e-9)


def test_singular_rejected():
    A = TropMatrixPoly([[[0, 0], [INF, INF]], [[0, 1], [INF, INF]]])
    with pytest.raises(SingularTropical) as info:
        char_function(A)
    assert info.value.witness == "val"


def test_string_entries():
    A = TropMatrixPoly([[["inf", 1], [1, "inf"]], [[0, "inf"], ["inf", 0]]])
    assert trop_matrix_eigenvalues(A).finite == ((1.0, 2),)


def test_karp_against_circuit_enumeration():
    rng = np.random.default_rng(27)
    done = 0
    while done < 100:
        n = int(rng.integers(1, 6))
        A0 = rng.integers(-4, 6, size=(n, n)).astype(float)
        A0[rng.random((n, n)) < 0.4] = INF
        brute = brute_min_circuit_mean(A0)
        if brute is None:
            with pytest.raises(NoCircuit):
                min_circuit_mean(A0)
            continue
        assert min_circuit_mean(A0) == pytest.approx(brute, abs=1e-9)
        assert trace_formula_rho(A0) == pytest.approx(brute, abs=1e-9)
        done += 1


def test_critical_graph_against_enumeration():
    rng = np.random.default_rng(28)
    done = 0
    while done < 100:
        n = int(rng.integers(1, 6))
        A0 = rng.integers(0, 3, size=(n, n)).astype(float)
        A0[rng.random((n, n)) < 0.3] = INF
        if brute_min_circuit_mean(A0) is None:
            continue
        assert set(critical_graph(A0).arcs) == brute_critical_arcs(A0)
        done += 1


def test_smallest_eigenvalue_is_min_circuit_mean():
    rng = np.random.default_rng(29)
    done = 0
    while done < 60:
        n = int(rng.integers(1, 5))
        A0 = rng.integers(0, 4, size=(n, n)).astype(float)
        A0[rng.random((n, n)) < 0.3] = INF
        if brute_min_circuit_mean(A0) is None:
            continue
        eig = trop_matrix_eigenvalues(TropMatrixPoly.identity_pencil(A0))
        rho = min_circuit_mean(A0)
        assert eig.finite[0][0] == pytest.approx(rho, abs=1e-9)
        G = critical_graph(A0)
        assert eig.finite[0][1] == term_rank(G) == brute_max_matching(set(G.arcs), n)
        done += 1


def test_enumeration_oracle_self_check():
    T = np.array([[[1.0, 0.0], [2.0, INF]], [[0.0, INF], [INF, 0.0]]])
    # per(A0 + Y I) = min(0 + 2, (1 ⊕ y) + (inf ⊕ y)) = min(2, 1 + y, 2y) by hand
    formal = formal_char_poly(T)
    assert formal == [2.0, 1.0, 0.0]
    assert perm_weight(T[0], (1, 0)) == 2.0
