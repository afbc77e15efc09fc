import numpy as np
import pytest

from oracles import cofactor_det
from tropeig.complex_numerics import (
    CMatrixPoly,
    CPoly,
    RootSet,
    as_complex,
    det_poly,
    matrix_poly_eigs,
    poly_roots,
)
from tropeig.errors import DegenerateInput, SingularNumeric


def _match(a, b):
    """Max distance under the best pairing of two small root lists."""
    a, b = list(a), list(b)
    assert len(a) == len(b)
    total = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        total = max(total, abs(z - b.pop(k)))
    return total


def test_as_complex():
    assert as_complex([1, -2]) == 1 - 2j
    assert as_complex(3) == 3
    with pytest.raises(ValueError):
        as_complex([1, 2, 3])


def test_cubic_with_zero_root():
    r = poly_roots([0, -1, 0, 1])
    assert _match(r.roots, [0, 1, -1]) < 1e-12
    assert 0j in r.roots


def test_linear_and_degenerate():
    assert poly_roots([2, -1]).roots == (2 + 0j,)
    with pytest.raises(DegenerateInput):
        poly_roots([3])
    with pytest.raises(DegenerateInput):
        poly_roots([0, 0])


def test_known_roots_high_degree():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = int(rng.integers(2, 10))
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        r = poly_roots(np.poly(z)[::-1])
        assert _match(r.roots, z) < 1e-8


def test_widely_scaled_roots():
    z = np.array([1e-6, 1e-3, 1.0, 1e3, 1e6])
    r = poly_roots(np.poly(z)[::-1])
    for w in z:
        assert min(abs(x - w) for x in r.roots) <= 1e-9 * w


def test_residual_bound():
    rng = np.random.default_rng(32)
    for _ in range(50):
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        r = poly_roots(c)
        for z, res in zip(r.roots, r.residuals):
            bound = np.polyval(np.abs(c)[::-1], abs(z))
            assert res <= 1e-12 * bound


def test_real_coefficients_conjugate_closed():
    rng = np.random.default_rng(33)
    for _ in range(30):
        c = rng.normal(size=7)
        roots = poly_roots(c).roots
        assert _match(roots, [z.conjugate() for z in roots]) < 1e-8


def test_clusters():
    rs = RootSet((1.0, 1.0 + 1e-9, 2.0), (0.0, 0.0, 0.0))
    assert [m for _, m in rs.clusters()] == [2, 1]


def test_cpoly_basics():
    p = CPoly([0, 0, 1, 2, 0])
    assert (p.valuation, p.degree) == (2, 3)
    assert p(2) == 4 + 16
    assert CPoly([1, 1e-12]).trimmed(1e-10).degree == 0
    assert CPoly([0, 0]).is_zero()


def test_det_poly_matches_cofactor_expansion():
    rng = np.random.default_rng(34)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 3))
        C = rng.normal(size=(d + 1, n, n)) + 1j * rng.normal(size=(d + 1, n, n))
        C[rng.random(C.shape) < 0.3] = 0
        exact = cofactor_det(C)
        got = det_poly(C, trim_tol=0).coeffs
        exact = np.concatenate([exact, np.zeros(len(got) - len(exact))])
        scale = max(1.0, np.abs(exact).max())
        assert np.abs(got - exact).max() <= 1e-9 * scale


def test_det_poly_trims_structural_zeros():
    # det [[Y, 1], [1, Y]] = Y^2 - 1 has no linear term
    M = np.array([[[0, 1], [1, 0]], [[1, 0], [0, 1]]], dtype=complex)
    c = det_poly(M).coeffs
    assert c[1] == 0
    assert np.allclose(c, [-1, 0, 1])


def test_lidskii_pencil():
    # auxiliary pencil of the Lidskii example at the double eigenvalue
    M = CMatrixPoly(np.stack([np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]), -np.eye(3)]))
    det = det_poly(M)
    assert np.allclose(det.coeffs, [0, 2, 0, -1])
    eigs = matrix_poly_eigs(M)
    assert eigs.m_zero == 1 and eigs.m_inf == 0
    assert _match(eigs.finite.roots, [np.sqrt(2), -np.sqrt(2)]) < 1e-12


def test_eigs_count_and_infinite():
    rng = np.random.default_rng(35)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        a1 = np.diag((rng.random(n) < 0.7).astype(float))
        a0 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        eigs = matrix_poly_eigs([a0, a1])
        rank = int(a1.trace().real)
        assert eigs.m_inf == n - rank
        assert len(eigs.finite) + eigs.m_zero + eigs.m_inf == n
        for z in eigs.finite.roots:
            sv = np.linalg.svd(a0 + z * a1, compute_uv=False)
            assert sv[-1] <= 1e-8 * (np.linalg.norm(a0, 2) + abs(z) * np.linalg.norm(a1, 2))


def test_generalized_eigenvalues_agree_with_numpy():
    rng = np.random.default_rng(36)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        A = rng.normal(size=(n, n))
        eigs = matrix_poly_eigs([-A, np.eye(n)])
        assert eigs.m_zero == 0 and eigs.m_inf == 0
        assert _match(eigs.finite.roots, np.linalg.eigvals(A)) < 1e-8


def test_singular_pencil():
    with pytest.raises(SingularNumeric) as info:
        matrix_poly_eigs([[[1, 1], [1, 1]], [[1, 1], [1, 1]]])
    assert info.value.witness == "det"
