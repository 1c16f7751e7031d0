"""Semi-infinite algebra against dense finite-section oracles."""

import numpy as np
import pytest

from qtmat import (
    Correction,
    CqtMatrix,
    LaurentSymbol,
    NonzeroWindingError,
    SingularSectionError,
    ZeroOnCircleError,
    cqt_add,
    cqt_inv,
    cqt_mul,
    cqt_norm,
    finite_section,
    qt_norm,
)
from qtmat.cqt import inverse_residual

from tests.support import (
    dense_cqt_oracle,
    random_cqt,
    random_invertible_symbol,
    random_correction,
)


def test_add_zero_identity():
    rng = np.random.default_rng(1)
    a = random_cqt(rng)
    assert cqt_add(a, CqtMatrix.zero()) is a
    assert cqt_add(CqtMatrix.zero(), a) is a


def test_add_toeplitz_parts():
    a = CqtMatrix(LaurentSymbol([1.0], 1))
    b = CqtMatrix(LaurentSymbol([1.0], -1))
    s = cqt_add(a, b)
    assert s.corr.is_zero
    assert s.symbol.coeff(1) == 1.0 and s.symbol.coeff(-1) == 1.0


def test_add_random_vs_dense():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = random_cqt(rng)
        b = random_cqt(rng)
        got = finite_section(cqt_add(a, b), 30)
        want = dense_cqt_oracle(a, 30) + dense_cqt_oracle(b, 30)
        assert np.abs(got - want).max() < 1e-12


def test_mul_minimal_identity_exact():
    # T(1/z) T(z) = I - e1 e1^T with no compression loss at all.
    a = CqtMatrix(LaurentSymbol([1.0], -1))
    b = CqtMatrix(LaurentSymbol([1.0], 1))
    p = cqt_mul(a, b)
    assert p.symbol.coeff(0) == 1.0 and p.symbol.support_len == 1
    section = finite_section(p, 5)
    want = np.eye(5, dtype=complex)
    want[0, 0] = 0.0
    assert np.array_equal(section, want)


def test_mul_rank_one_shift():
    # (I + e1 e1^T) T(z) = T(z) + e1 e2^T
    a = CqtMatrix(LaurentSymbol.one(), Correction.rank_one([1.0], [1.0]))
    b = CqtMatrix(LaurentSymbol([1.0], 1))
    p = cqt_mul(a, b)
    got = finite_section(p, 4)
    want = np.diag(np.ones(3, dtype=complex), 1)
    want[0, 1] += 1.0
    assert np.abs(got - want).max() < 1e-14


def test_mul_random_vs_dense_truncations():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = random_cqt(rng, max_len=8, corr_dim=10)
        b = random_cqt(rng, max_len=8, corr_dim=10)
        got = finite_section(cqt_mul(a, b), 60)
        want = (dense_cqt_oracle(a, 100) @ dense_cqt_oracle(b, 100))[:60, :60]
        assert np.abs(got - want).max() < 1e-12


def test_mul_submultiplicative_norm():
    rng = np.random.default_rng(4)
    for _ in range(30):
        a = random_cqt(rng)
        b = random_cqt(rng)
        lhs = cqt_norm(cqt_mul(a, b))
        rhs = cqt_norm(a) * cqt_norm(b)
        assert lhs <= rhs * (1 + 1e-10)


def test_mul_associative_on_sections():
    rng = np.random.default_rng(5)
    for _ in range(5):
        a, b, c = (random_cqt(rng, max_len=5, corr_dim=5) for _ in range(3))
        left = finite_section(cqt_mul(cqt_mul(a, b), c), 40)
        right = finite_section(cqt_mul(a, cqt_mul(b, c)), 40)
        scale = max(1.0, np.abs(left).max())
        assert np.abs(left - right).max() <= 1e-11 * scale


def test_norms_simple():
    ident = CqtMatrix.identity()
    assert cqt_norm(ident) == 1.0
    assert qt_norm(ident) == 1.0
    a = CqtMatrix(LaurentSymbol([1.0, 0.0, 1.0], -1))  # z + 1/z
    assert cqt_norm(a) == 4.0
    assert qt_norm(a) == 2.0


def test_norms_ordering_random():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = random_cqt(rng)
        assert qt_norm(a) <= cqt_norm(a) + 1e-15


def test_finite_section_simple():
    assert np.array_equal(finite_section(CqtMatrix.identity(), 3), np.eye(3))
    got = finite_section(CqtMatrix(LaurentSymbol([1.0], 1)), 2)
    assert np.array_equal(got, np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_finite_section_random_vs_entrywise():
    rng = np.random.default_rng(7)
    a = random_cqt(rng)
    n = 25
    got = finite_section(a, n)
    want = np.zeros((n, n), dtype=complex)
    dense_corr = np.asarray(a.corr.u) @ np.asarray(a.corr.v).T
    for i in range(n):
        for j in range(n):
            want[i, j] = a.symbol.coeff(j - i)
            if i < a.corr.p and j < a.corr.q:
                want[i, j] += dense_corr[i, j]
    assert np.abs(got - want).max() == 0.0


def test_inv_scalar():
    b = cqt_inv(CqtMatrix(LaurentSymbol.constant(2.0)))
    assert b.corr.is_zero
    assert b.symbol.coeff(0) == 0.5


def test_inv_triangular_geometric():
    a = CqtMatrix(LaurentSymbol([1.0, -0.5]))
    b = cqt_inv(a)
    assert b.corr.is_zero
    for k in range(10):
        assert b.symbol.coeff(k) == pytest.approx(0.5 ** k, abs=1e-12)
    assert inverse_residual(a, b) <= 1e-12


def test_inv_tridiagonal_vs_dense_section():
    a = CqtMatrix(LaurentSymbol([1.0, 4.0, 1.0], -1))
    b = cqt_inv(a)
    got = finite_section(b, 50)
    want = np.linalg.inv(dense_cqt_oracle(a, 400))[:50, :50]
    assert np.abs(got - want).max() < 1e-10


def test_inv_certificate_random():
    rng = np.random.default_rng(8)
    for _ in range(10):
        sym = random_invertible_symbol(rng)
        corr = random_correction(rng, 4, 4, 2, scale=0.1)
        a = CqtMatrix(sym, corr)
        b, info = cqt_inv(a, with_info=True)
        assert info["residual"] <= 1e-12
        n = info["certified_n"]
        resid = finite_section(cqt_mul(a, b), n) - np.eye(n)
        assert np.abs(resid).max() <= 1e-9


def test_inv_winding_error():
    with pytest.raises(NonzeroWindingError):
        cqt_inv(CqtMatrix(LaurentSymbol([1.0], 1)))


def test_inv_zero_on_circle_error():
    with pytest.raises(ZeroOnCircleError):
        cqt_inv(CqtMatrix(LaurentSymbol([1.0, -1.0])))


def test_inv_singular_operator_detected():
    # I - e1 e1^T has symbol 1 (winding 0) but is not invertible.
    a = CqtMatrix(LaurentSymbol.one(), Correction.rank_one([-1.0], [1.0]))
    with pytest.raises(SingularSectionError):
        cqt_inv(a)


def test_finite_section_consistency_ops():
    rng = np.random.default_rng(9)
    for _ in range(5):
        a = random_cqt(rng, max_len=6, corr_dim=6)
        b = random_cqt(rng, max_len=6, corr_dim=6)
        n = 40
        margin = 40
        big = n + margin
        add_got = finite_section(cqt_add(a, b), n)
        add_want = (dense_cqt_oracle(a, big) + dense_cqt_oracle(b, big))[:n, :n]
        assert np.abs(add_got - add_want).max() < 1e-12
        mul_got = finite_section(cqt_mul(a, b), n)
        mul_want = (dense_cqt_oracle(a, big) @ dense_cqt_oracle(b, big))[:n, :n]
        assert np.abs(mul_got - mul_want).max() < 1e-12


def test_scale_and_matmul_operators():
    rng = np.random.default_rng(10)
    a = random_cqt(rng)
    half = a.scale(0.5)
    assert np.abs(finite_section(half, 20)
                  - 0.5 * dense_cqt_oracle(a, 20)).max() < 1e-13
    b = random_cqt(rng)
    assert np.abs(finite_section(a @ b, 20)
                  - finite_section(cqt_mul(a, b), 20)).max() == 0.0


def test_tolerance_config_validation():
    from qtmat import ToleranceConfig
    with pytest.raises(ValueError):
        ToleranceConfig(tol_symbol=0.0)
    with pytest.raises(ValueError):
        ToleranceConfig(max_terms=0)
    cfg = ToleranceConfig().updated(tol_stop=1e-8)
    assert cfg.tol_stop == 1e-8
