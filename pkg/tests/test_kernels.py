import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.sparse as sp

from multivec import kernels
from multivec.lp.factor import SingularBasis, factorize

py = kernels.backend_module("python")
HAVE_CYTHON = "cython" in kernels.available_backends()
needs_cython = pytest.mark.skipif(not HAVE_CYTHON, reason="compiled kernels not built")
cy = kernels.backend_module("cython") if HAVE_CYTHON else None

BASIC, AT_LOWER, AT_UPPER, FREE, FIXED = 0, 1, 2, 3, 4


def random_basis(rng, m, density=0.05, logical_share=0.5):
    """Sparse nonsingular matrix shaped like a simplex basis: many singleton columns."""
    A = sp.random(m, m, density=density, random_state=rng, format="lil")
    for j in rng.choice(m, int(m * logical_share), replace=False):
        A[:, j] = 0
    A = A.tocsc() + sp.diags(rng.uniform(1, 3, m) * rng.choice([-1, 1], m))
    p, q = rng.permutation(m), rng.permutation(m)
    return A.tocsc()[p][:, q].tocsc()


def test_backend_choice_honours_the_environment():
    env = {**os.environ, "MULTIVEC_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", "from multivec import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.backend_module("fortran")


@needs_cython
def test_default_backend_is_compiled():
    if os.environ.get("MULTIVEC_PURE_PYTHON") != "1":
        assert kernels.BACKEND == "cython"


@needs_cython
@pytest.mark.parametrize("bland", [False, True])
def test_price(bland):
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(1, 60))
        d = rng.normal(size=n)
        w = rng.uniform(0.5, 4, n)
        st = rng.integers(0, 5, n).astype(np.int8)
        assert py.price(d, w, st, 0.1, bland) == cy.price(d, w, st, 0.1, bland)


@needs_cython
def test_devex_update():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(3, 40))
        st = rng.integers(0, 5, n).astype(np.int8)
        q, leaving = (int(v) for v in rng.choice(n, 2, replace=False))
        st[q] = AT_LOWER
        st[leaving] = BASIC
        d, w, alpha = rng.normal(size=n), rng.uniform(1, 3, n), rng.normal(size=n)
        alpha[q] = 0.7
        d1, w1, d2, w2 = d.copy(), w.copy(), d.copy(), w.copy()
        py.devex_update(d1, w1, alpha, st, q, leaving, 0.7)
        cy.devex_update(d2, w2, alpha, st, q, leaving, 0.7)
        np.testing.assert_allclose(d1, d2, rtol=1e-14, atol=1e-15)
        np.testing.assert_allclose(w1, w2, rtol=1e-14)


@needs_cython
@pytest.mark.parametrize("bland, harris", [(False, 1e-9), (True, 1e-9), (False, 0.0)])
def test_ratio_test(bland, harris):
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = int(rng.integers(1, 30))
        lb = np.where(rng.random(m) < 0.2, -np.inf, rng.normal(size=m))
        ub = np.where(rng.random(m) < 0.3, np.inf, lb + rng.uniform(0, 3, m))
        ub[~np.isfinite(ub)] = np.inf
        xb = np.where(np.isfinite(lb), lb, 0.0) + rng.uniform(0, 1, m)
        alpha = np.where(rng.random(m) < 0.3, 0.0, rng.normal(size=m))
        basis = rng.permutation(m * 2)[:m].astype(np.int64)
        direction = float(rng.choice([-1.0, 1.0]))
        a = py.ratio_test(xb, lb, ub, alpha, direction, 1e-9, harris, bland, basis)
        b = cy.ratio_test(xb, lb, ub, alpha, direction, 1e-9, harris, bland, basis)
        assert a[0] == b[0] and a[2] == b[2]
        assert a[1] == pytest.approx(b[1], rel=1e-14) or a[1] == b[1] == np.inf


@needs_cython
def test_eta_file():
    rng = np.random.default_rng(4)
    m, count = 25, 7
    pos = rng.choice(m, count).astype(np.int64)
    cols = rng.normal(size=(count + 2, m))
    cols[np.arange(count), pos] += 3.0
    w = rng.normal(size=m)
    f1 = py.ftran_etas(pos, cols, count, w.copy())
    f2 = cy.ftran_etas(pos, cols, count, w.copy())
    np.testing.assert_allclose(f1, np.asarray(f2), rtol=1e-12)
    b1 = py.btran_etas(pos, cols, count, w.copy())
    b2 = cy.btran_etas(pos, cols, count, w.copy())
    np.testing.assert_allclose(b1, np.asarray(b2), rtol=1e-12)


def _eta_matrix(pos, col):
    E = np.eye(len(col))
    E[:, pos] = col
    return E


@pytest.mark.parametrize("mod", ["python", "cython"])
def test_etas_are_inverse_products(mod):
    if mod == "cython" and not HAVE_CYTHON:
        pytest.skip("compiled kernels not built")
    k = kernels.backend_module(mod)
    rng = np.random.default_rng(5)
    m, count = 8, 4
    pos = rng.choice(m, count).astype(np.int64)
    cols = rng.normal(size=(count, m))
    cols[np.arange(count), pos] += 3.0
    prod = np.eye(m)
    for t in range(count):
        prod = prod @ _eta_matrix(pos[t], cols[t])
    w = rng.normal(size=m)
    np.testing.assert_allclose(np.asarray(k.ftran_etas(pos, cols, count, w.copy())), np.linalg.solve(prod, w),
                               rtol=1e-10)
    np.testing.assert_allclose(np.asarray(k.btran_etas(pos, cols, count, w.copy())),
                               np.linalg.solve(prod.T, w), rtol=1e-10)


@needs_cython
def test_singleton_pivots_agree():
    rng = np.random.default_rng(6)
    for _ in range(30):
        B = random_basis(rng, int(rng.integers(5, 80)))
        R = B.tocsr()
        args = (B.indptr.astype(np.int32), B.indices.astype(np.int32),
                R.indptr.astype(np.int32), R.indices.astype(np.int32))
        a, b = py.singleton_pivots(*args), cy.singleton_pivots(*args)
        np.testing.assert_array_equal(a[0], np.asarray(b[0]))
        np.testing.assert_array_equal(a[1], np.asarray(b[1]))
        assert a[2] == b[2]


@pytest.mark.parametrize("method", ["singleton", "superlu"])
def test_factor_solves_match_dense(method):
    rng = np.random.default_rng(7)
    for _ in range(60):
        m = int(rng.integers(1, 120))
        B = random_basis(rng, m, density=float(rng.uniform(0.01, 0.1)))
        lu = factorize(B, method)
        b = rng.normal(size=m)
        dense = B.toarray()
        np.testing.assert_allclose(lu.solve(b), np.linalg.solve(dense, b), rtol=1e-8, atol=1e-9)
        np.testing.assert_allclose(lu.solve_t(b), np.linalg.solve(dense.T, b), rtol=1e-8, atol=1e-9)


@needs_cython
def test_compiled_triangular_solves_match_scipy():
    rng = np.random.default_rng(8)
    from multivec.lp.factor import _TriangularLU

    for _ in range(20):
        m = int(rng.integers(2, 60))
        B = random_basis(rng, m, density=0.2, logical_share=0.0)
        tri = _TriangularLU(B)
        b = rng.normal(size=m)
        np.testing.assert_allclose(tri.solve(b), py.lu_ftran(*tri.args, b), rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(tri.solve_t(b), py.lu_btran(*tri.args, b), rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("method", ["singleton", "superlu"])
def test_singular_basis(method):
    B = sp.csc_matrix(np.array([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]]))
    with pytest.raises(SingularBasis):
        factorize(B, method)


def test_unknown_factorization():
    with pytest.raises(ValueError):
        factorize(sp.identity(2, format="csc"), "qr")
