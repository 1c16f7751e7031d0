"""Laurent symbol arithmetic against scalar-loop and convolution oracles."""

import numpy as np
import pytest

from qtmat import (
    LaurentSymbol,
    NonzeroWindingError,
    ZeroOnCircleError,
    sym_add,
    sym_mul,
    sym_reciprocal,
    sym_scale,
    sym_split,
    sym_truncate,
    wiener_norms,
    winding_number,
)
from qtmat.symbol import norm_w, sym_eval, sym_reverse, sym_sub

from tests.support import (
    convolve_oracle,
    dict_to_symbol,
    random_invertible_symbol,
    random_symbol,
    symbol_to_dict,
)


def test_canonical_trim():
    s = LaurentSymbol([0.0, 0.0, 1.0, 2.0, 0.0], -3)
    assert s.min_deg == -1
    assert s.coeffs.size == 2
    assert LaurentSymbol([0.0, 0.0]).is_zero
    assert LaurentSymbol.zero().min_deg == 0


def test_coeff_lookup():
    s = LaurentSymbol([3.0, 2.0, 1.0], -1)
    assert s.coeff(-1) == 3.0
    assert s.coeff(0) == 2.0
    assert s.coeff(1) == 1.0
    assert s.coeff(5) == 0.0
    assert s.n_minus == 1
    assert s.n_plus == 1


def test_wiener_norms_simple():
    a = LaurentSymbol([1.0, 2.0, 1.0], -1)  # 2 + z + z^{-1}
    assert wiener_norms(a) == (4.0, 2.0)


def test_wiener_norms_zero():
    assert wiener_norms(LaurentSymbol.zero()) == (0.0, 0.0)


def test_wiener_norms_random_vs_loop():
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    a = LaurentSymbol(coeffs, -10)
    nw = sum(abs(a.coeff(k)) for k in range(-10, 11))
    nw1 = sum(abs(k * a.coeff(k)) for k in range(-10, 11))
    got_w, got_w1 = wiener_norms(a)
    assert got_w == pytest.approx(nw, rel=1e-14)
    assert got_w1 == pytest.approx(nw1, rel=1e-14)


def test_sym_mul_simple():
    one_plus = LaurentSymbol([1.0, 1.0])
    one_minus = LaurentSymbol([1.0, -1.0])
    prod = sym_mul(one_plus, one_minus)
    assert symbol_to_dict(prod) == {0: 1.0 + 0j, 2: -1.0 + 0j}

    z = LaurentSymbol([1.0], 1)
    zinv = LaurentSymbol([1.0], -1)
    assert symbol_to_dict(sym_mul(z, zinv)) == {0: 1.0 + 0j}


def test_sym_mul_random_vs_convolution():
    rng = np.random.default_rng(11)
    for _ in range(25):
        a = random_symbol(rng)
        b = random_symbol(rng)
        want = convolve_oracle(a, b)
        got = symbol_to_dict(sym_mul(a, b))
        for k in set(want) | set(got):
            assert got.get(k, 0.0) == pytest.approx(want.get(k, 0.0),
                                                    abs=1e-12)


def test_sym_mul_commutative_associative():
    rng = np.random.default_rng(13)
    for _ in range(10):
        a, b, c = (random_symbol(rng) for _ in range(3))
        ab = sym_mul(a, b)
        ba = sym_mul(b, a)
        scale = max(1.0, norm_w(ab))
        assert norm_w(sym_sub(ab, ba)) <= 1e-12 * scale
        abc1 = sym_mul(sym_mul(a, b), c)
        abc2 = sym_mul(a, sym_mul(b, c))
        scale = max(1.0, norm_w(abc1))
        assert norm_w(sym_sub(abc1, abc2)) <= 1e-12 * scale


def test_sym_mul_wiener_submultiplicative():
    rng = np.random.default_rng(17)
    for _ in range(25):
        a = random_symbol(rng)
        b = random_symbol(rng)
        assert norm_w(sym_mul(a, b)) <= norm_w(a) * norm_w(b) * (1 + 1e-12)


def test_sym_reciprocal_constant():
    b = sym_reciprocal(LaurentSymbol.constant(2.0), 1e-12)
    assert symbol_to_dict(b) == {0: 0.5 + 0j}


def test_sym_reciprocal_geometric():
    a = LaurentSymbol([1.0, -0.5])  # 1 - 0.5 z
    tol = 1e-12
    b = sym_reciprocal(a, tol)
    for k in range(0, 20):
        assert b.coeff(k) == pytest.approx(0.5 ** k, abs=1e-10)
    assert norm_w(sym_sub(sym_mul(a, b), LaurentSymbol.one())) <= tol


def test_sym_reciprocal_winding_error():
    with pytest.raises(NonzeroWindingError):
        sym_reciprocal(LaurentSymbol([1.0], 1), 1e-10)


def test_sym_reciprocal_zero_on_circle():
    with pytest.raises(ZeroOnCircleError):
        sym_reciprocal(LaurentSymbol([1.0, -1.0]), 1e-10)  # 1 - z


def test_sym_reciprocal_random_property():
    rng = np.random.default_rng(19)
    for _ in range(15):
        a = random_invertible_symbol(rng)
        tol = 1e-11
        b = sym_reciprocal(a, tol)
        assert norm_w(sym_sub(sym_mul(a, b), LaurentSymbol.one())) <= tol


def test_winding_simple():
    assert winding_number(LaurentSymbol([1.0], 1)) == 1
    assert winding_number(LaurentSymbol([2.0, 1.0])) == 0
    assert winding_number(LaurentSymbol([1.0, 0.1], -2)) == -2


def test_winding_zero_symbol():
    with pytest.raises(ZeroOnCircleError):
        winding_number(LaurentSymbol.zero())


def test_winding_additive_on_products():
    rng = np.random.default_rng(23)
    for _ in range(10):
        shift_a = int(rng.integers(-3, 4))
        shift_b = int(rng.integers(-3, 4))
        a = sym_mul(random_invertible_symbol(rng),
                    LaurentSymbol([1.0], shift_a))
        b = sym_mul(random_invertible_symbol(rng),
                    LaurentSymbol([1.0], shift_b))
        assert winding_number(a) == shift_a
        assert winding_number(b) == shift_b
        assert winding_number(sym_mul(a, b)) == shift_a + shift_b


def test_sym_truncate_tiny_ends():
    a = LaurentSymbol([1e-20, 1.0, 1e-20], -1)
    t = sym_truncate(a, 1e-12)
    assert symbol_to_dict(t) == {0: 1.0 + 0j}


def test_sym_truncate_zero_tol_identity():
    a = LaurentSymbol([1e-20, 1.0, 1e-20], -1)
    t = sym_truncate(a, 0.0)
    assert t is a


def test_sym_truncate_mass_bound():
    rng = np.random.default_rng(29)
    coeffs = 0.5 ** np.arange(40)
    a = LaurentSymbol(coeffs)
    for tol in (1e-10, 1e-6, 1e-3):
        t = sym_truncate(a, tol)
        dropped = norm_w(sym_sub(a, t))
        assert dropped <= tol * max(1.0, norm_w(a))
    del rng


def test_sym_split_simple():
    a = dict_to_symbol({-1: 3.0, 0: 2.0, 1: 1.0})
    minus, a0, plus = sym_split(a)
    assert symbol_to_dict(minus) == {1: 3.0 + 0j}
    assert a0 == 2.0
    assert symbol_to_dict(plus) == {1: 1.0 + 0j}

    minus, a0, plus = sym_split(LaurentSymbol.constant(5.0))
    assert minus.is_zero and plus.is_zero
    assert a0 == 5.0


def test_sym_split_recombination_identity():
    rng = np.random.default_rng(31)
    for _ in range(20):
        a = random_symbol(rng)
        minus, a0, plus = sym_split(a)
        rebuilt = {k: v for k, v in symbol_to_dict(plus).items()}
        for k, v in symbol_to_dict(minus).items():
            rebuilt[-k] = rebuilt.get(-k, 0.0) + v
        if a0 != 0:
            rebuilt[0] = rebuilt.get(0, 0.0) + a0
        assert rebuilt == symbol_to_dict(a)


def test_sym_add_scale_eval():
    a = dict_to_symbol({-2: 1.0, 1: 2.0})
    b = dict_to_symbol({-2: -1.0, 0: 3.0})
    s = sym_add(a, b)
    assert symbol_to_dict(s) == {0: 3.0 + 0j, 1: 2.0 + 0j}
    assert sym_scale(a, 0).is_zero
    z = np.exp(1j * 0.7)
    want = 1.0 * z ** -2 + 2.0 * z
    assert sym_eval(a, z) == pytest.approx(want, rel=1e-13)


def test_sym_reverse():
    a = dict_to_symbol({-2: 1.0, 1: 5.0})
    r = sym_reverse(a)
    assert symbol_to_dict(r) == {2: 1.0 + 0j, -1: 5.0 + 0j}
