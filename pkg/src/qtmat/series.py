"""Matrix functions from truncated power and Laurent series.

The engines accumulate sum_i f_i A^i directly in the algebra, which keeps
the correction part in factored, compressed form at every step, and finally
refresh the Toeplitz part by evaluating the scalar function on the symbol at
unit roots and interpolating.  The same code drives semi-infinite and finite
matrices through the shared algebra methods (add, mul, inv, scale, norms).
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT_CONFIG
from .correction import (
    Correction,
    corr_add,
    corr_compress,
    corr_times_corr,
    corr_times_toeplitz,
    hankel_product,
    toeplitz_times_corr,
)
from .errors import NoConvergenceError, RadiusViolationError
from .symbol import (
    LaurentSymbol,
    eval_at_unit_roots,
    sym_mul,
    sym_split,
    sym_truncate,
    wiener_norms,
)

_MAX_REFRESH_GRID = 1 << 20

# Effective-radius multipliers tried when the disk of analyticity is
# unbounded; each yields a valid geometric majorant of the tail.
_RADIUS_FACTORS = (1.5, 2.0, math.e, 4.0, 8.0, 16.0, 64.0)


@dataclass(frozen=True)
class SeriesSpec:
    """Description of a scalar function given by its series coefficients.

    coeff       callback i -> f_i; one-sided series return 0 for i < 0
    radius      radius of the disk of analyticity (one-sided series)
    annulus     (r_f, R_f) annulus of analyticity for Laurent series
    scalar      optional closed-form scalar map used for the symbol part
    degree      exact top degree when the series is a polynomial
    neg_degree  exact bottom degree (positive number) for Laurent polynomials
    """

    coeff: Callable[[int], complex]
    radius: float = math.inf
    annulus: Optional[tuple] = None
    scalar: Optional[Callable] = None
    degree: Optional[int] = None
    neg_degree: Optional[int] = None
    name: str = "series"

    def __post_init__(self):
        if self.annulus is None:
            base = self.coeff
            object.__setattr__(
                self, "coeff", lambda i: base(i) if i >= 0 else 0.0)
        else:
            r, big = self.annulus
            if not 0 <= r < big:
                raise ValueError("annulus must satisfy 0 <= r_f < R_f")

    @classmethod
    def exp(cls):
        return cls(coeff=_exp_coeff, radius=math.inf, scalar=np.exp,
                   name="exp")

    @classmethod
    def log1p(cls):
        return cls(coeff=_log1p_coeff, radius=1.0, scalar=np.log1p,
                   name="log1p")

    @classmethod
    def sqrt1p(cls):
        return cls(coeff=_sqrt1p_coeff, radius=1.0,
                   scalar=lambda x: np.sqrt(1.0 + x), name="sqrt1p")

    @classmethod
    def polynomial(cls, coeffs):
        cs = [complex(c) for c in coeffs]
        deg = len(cs) - 1
        return cls(coeff=lambda i: cs[i] if 0 <= i <= deg else 0.0,
                   radius=math.inf, degree=deg,
                   scalar=lambda x: np.polyval(cs[::-1], x),
                   name="polynomial")

    @classmethod
    def laurent(cls, coeff, r_f, big_r, scalar=None, degree=None,
                neg_degree=None, name="laurent"):
        return cls(coeff=coeff, annulus=(float(r_f), float(big_r)),
                   scalar=scalar, degree=degree, neg_degree=neg_degree,
                   name=name)

    @classmethod
    def laurent_polynomial(cls, coeff_map):
        cmap = {int(k): complex(v) for k, v in coeff_map.items()}
        deg = max((k for k in cmap if k > 0), default=0)
        neg = max((-k for k in cmap if k < 0), default=0)

        def scalar(x):
            x = np.asarray(x, dtype=np.complex128)
            out = np.zeros_like(x)
            for k, c in cmap.items():
                out = out + c * x ** k
            return out

        return cls(coeff=lambda i: cmap.get(i, 0.0),
                   annulus=(0.0, math.inf), scalar=scalar, degree=deg,
                   neg_degree=neg, name="laurent-polynomial")


def _exp_coeff(i):
    if i < 0:
        return 0.0
    try:
        return 1.0 / math.factorial(i)
    except OverflowError:
        return 0.0


def _log1p_coeff(i):
    if i < 1:
        return 0.0
    return (-1.0) ** (i + 1) / i


def _sqrt1p_coeff(i):
    # Binomial series of (1 + x)^(1/2).
    if i < 0:
        return 0.0
    c = 1.0
    for j in range(1, i + 1):
        c *= (0.5 - (j - 1)) / j
    return c


def power_corrections(a, e, k, cfg=DEFAULT_CONFIG):
    """Corrections of the powers of T(a) + E.

    For a zero input correction returns [E_1, ..., E_k] where
    T(a)^i = T(a^i) + E_i, built from the recurrence
    E_i = T(a) E_{i-1} - H(a^-) H((a^{i-1})^+) with E_1 = 0.

    For a general correction E returns [D_0, ..., D_k] where
    (T(a) + E)^i = T(a^i) + D_i, so D_0 = 0 (the zeroth power is the
    identity) and the recurrence
    D_i = (T(a) + E) D_{i-1} - H(a^-) H((a^{i-1})^+) + E T(a^{i-1})
    reproduces D_1 = E exactly.

    Every step is compressed with the configured tolerance.
    """
    if k < 1:
        raise ValueError("power index must be at least 1")
    a_minus, _, _ = sym_split(a)
    general = e is not None and not e.is_zero
    out = []
    cur = Correction.zero()
    out.append(cur)
    if general:
        start = 1
        apow = LaurentSymbol.one()  # a^{i-1} at i = 1
    else:
        start = 2
        apow = a  # a^{i-1} at i = 2
    for i in range(start, k + 1):
        _, _, pow_plus = sym_split(apow)
        term = corr_add(toeplitz_times_corr(a, cur),
                        hankel_product(a_minus, pow_plus), -1.0)
        if general:
            term = corr_add(term, corr_times_corr(e, cur))
            term = corr_add(term, corr_times_toeplitz(e, apow))
        cur = corr_compress(term, cfg.tol_corr)
        out.append(cur)
        apow = sym_truncate(sym_mul(apow, a), cfg.tol_symbol)
    return out


def _tail_estimate(coeffs, k, nrm, radius):
    """Heuristic geometric majorant of sum_{i>k} |f_i| * nrm^i.

    Fits the tightest constant gamma with |f_i| <= gamma * rho_eff^{-i} over
    the computed coefficients for several candidate effective radii and
    returns the smallest resulting geometric tail.
    """
    mags = np.abs(np.asarray(coeffs))
    base = max(nrm, 1e-300)
    if math.isinf(radius):
        candidates = [base * f for f in _RADIUS_FACTORS]
    else:
        candidates = [base + (radius - base) * t for t in (0.25, 0.5, 0.75, 0.9)]
        candidates = [c for c in candidates if c > base]
    best = math.inf
    idx = np.arange(mags.size)
    for rho in candidates:
        with np.errstate(over="ignore"):
            gamma = float(np.max(mags * rho ** idx))
        if not math.isfinite(gamma):
            continue
        lam = nrm / rho
        if lam >= 1.0:
            continue
        best = min(best, gamma * lam ** (k + 1) / (1.0 - lam))
    return best


class _TermRule:
    """Stopping rule requiring three consecutive negligible terms.

    A term counts as negligible when |f_k| max(1, ||A||)^k drops below the
    stopping tolerance, or when the fitted geometric tail of the remaining
    series is already below it.
    """

    def __init__(self, nrm, radius, tol):
        self.nrm = nrm
        self.radius = radius
        self.tol = tol
        self.log_scale = math.log(max(1.0, nrm))
        self.consecutive = 0

    def done(self, coeffs, k):
        fk = abs(coeffs[k])
        small = fk == 0.0 or \
            math.log(fk) + k * self.log_scale < math.log(self.tol)
        if not small:
            small = _tail_estimate(coeffs, k, self.nrm, self.radius) < self.tol
        self.consecutive = self.consecutive + 1 if small else 0
        return self.consecutive >= 3


def funm_taylor(matrix, f, cfg=DEFAULT_CONFIG, with_info=False):
    """f(A) for a one-sided power series f.

    Requires the algebra norm of A to lie inside the disk of analyticity;
    for functions whose spectrum-based contour representation applies
    instead, use ``funm_contour``.

    Raises
    ------
    RadiusViolationError  norm hypothesis ||A|| < radius fails
    NoConvergenceError    term cap reached before the stopping rule fired
    """
    if f.annulus is not None:
        raise ValueError("Laurent series require funm_laurent")
    nrm = matrix.norm_cqt()
    if not nrm < f.radius:
        raise RadiusViolationError(
            f"series norm hypothesis violated: ||A|| = {nrm:.6g} is not "
            f"below the radius of analyticity {f.radius:.6g}")
    coeffs = [complex(f.coeff(0))]
    total = matrix.identity_like().scale(coeffs[0])
    power = matrix
    rule = _TermRule(nrm, f.radius, cfg.tol_stop)
    reached = None
    cap = f.degree if f.degree is not None else cfg.max_terms
    for k in range(1, cap + 1):
        if k > 1:
            power = power.mul(matrix, cfg)
        fk = complex(f.coeff(k))
        coeffs.append(fk)
        if fk != 0:
            total = total.add(power.scale(fk), cfg)
        if f.degree is None and rule.done(coeffs, k):
            reached = k
            break
    if f.degree is not None:
        reached = f.degree
    elif reached is None:
        raise NoConvergenceError(
            f"series did not converge within {cfg.max_terms} terms")
    scalar = f.scalar or _partial_sum_scalar(coeffs)
    total = _refresh_symbol(total, matrix.symbol, scalar, cfg)
    if with_info:
        info = {"terms": reached,
                "tail_estimate": _tail_estimate(coeffs, reached, nrm,
                                                f.radius)}
        return total, info
    return total


def funm_laurent(matrix, f, cfg=DEFAULT_CONFIG, with_info=False):
    """f(A) for a Laurent series f analytic on an annulus.

    Computes the inverse once and then sums
    f_0 I + sum_{i>=1} (f_i A^i + f_{-i} A^{-i}) with a symmetric stopping
    rule on both tails.  Preconditions: ||A|| below the outer radius,
    ||A^{-1}|| below the reciprocal of the inner radius, and the sampled
    symbol values inside the annulus.
    """
    if f.annulus is None:
        raise ValueError("power series require funm_taylor")
    r_f, big_r = f.annulus
    nrm = matrix.norm_cqt()
    # Laurent polynomials without negative powers need no inverse at all.
    need_inverse = r_f > 0 or f.neg_degree is None or f.neg_degree > 0
    if not nrm < big_r:
        raise RadiusViolationError(
            f"annulus norm hypothesis violated: ||A|| = {nrm:.6g} is not "
            f"below the outer radius {big_r:.6g}")
    inv = matrix.inv(cfg) if need_inverse else None
    inv_nrm = inv.norm_cqt() if need_inverse else 0.0
    if r_f > 0 and not inv_nrm < 1.0 / r_f:
        raise RadiusViolationError(
            f"annulus norm hypothesis violated: ||A^-1|| = {inv_nrm:.6g} "
            f"is not below 1/r_f = {1.0 / r_f:.6g}")
    vals = np.abs(eval_at_unit_roots(matrix.symbol,
                                     _sample_grid(matrix.symbol, cfg)))
    if np.any(vals >= big_r) or (need_inverse and np.any(vals <= r_f)):
        raise RadiusViolationError(
            "sampled symbol values leave the annulus of analyticity")
    pos = [complex(f.coeff(0))]
    neg = [0.0 + 0.0j]
    total = matrix.identity_like().scale(pos[0])
    ppow, mpow = matrix, inv
    rule_pos = _TermRule(nrm, big_r, cfg.tol_stop)
    rule_neg = _TermRule(inv_nrm, math.inf if r_f == 0 else 1.0 / r_f,
                         cfg.tol_stop)
    exact = f.degree is not None and f.neg_degree is not None
    cap = max(f.degree or 0, f.neg_degree or 0) if exact else cfg.max_terms
    reached = None
    for k in range(1, cap + 1):
        if k > 1:
            ppow = ppow.mul(matrix, cfg)
            if need_inverse:
                mpow = mpow.mul(inv, cfg)
        fk = complex(f.coeff(k))
        fmk = complex(f.coeff(-k)) if need_inverse else 0.0 + 0.0j
        pos.append(fk)
        neg.append(fmk)
        if fk != 0:
            total = total.add(ppow.scale(fk), cfg)
        if fmk != 0:
            total = total.add(mpow.scale(fmk), cfg)
        if not exact and rule_pos.done(pos, k) and rule_neg.done(neg, k):
            reached = k
            break
    if exact:
        reached = cap
    elif reached is None:
        raise NoConvergenceError(
            f"Laurent series did not converge within {cfg.max_terms} terms")
    scalar = f.scalar or _laurent_partial_scalar(pos, neg)
    total = _refresh_symbol(total, matrix.symbol, scalar, cfg)
    if with_info:
        return total, {"terms": reached}
    return total


def _partial_sum_scalar(coeffs):
    cs = np.asarray(coeffs, dtype=np.complex128)

    def scalar(x):
        return np.polyval(cs[::-1], x)

    return scalar


def _laurent_partial_scalar(pos, neg):
    ps = np.asarray(pos, dtype=np.complex128)
    ns = np.asarray(neg, dtype=np.complex128)

    def scalar(x):
        x = np.asarray(x, dtype=np.complex128)
        return np.polyval(ps[::-1], x) + np.polyval(ns[::-1], 1.0 / x) - ns[0]

    return scalar


def _sample_grid(symbol, cfg):
    n = max(cfg.annulus_samples, 4 * max(1, symbol.support_len))
    return 1 << (n - 1).bit_length()


def _refresh_symbol(total, arg_symbol, scalar, cfg):
    """Replace the symbol of the accumulated sum by interp(f(a(w))).

    Samples the argument symbol at unit roots, applies the scalar map and
    interpolates back on a grid that doubles until the coefficient mass near
    the wrap-around boundary is negligible.
    """
    span = max(8, total.symbol.support_len, arg_symbol.support_len)
    n = 1 << (4 * span - 1).bit_length()
    if total.symbol.is_zero:
        center = 0
    else:
        center = (total.symbol.min_deg + total.symbol.max_deg) // 2
    while n <= _MAX_REFRESH_GRID:
        va = eval_at_unit_roots(arg_symbol, n)
        vf = np.asarray(scalar(va), dtype=np.complex128)
        ch = np.fft.fft(vf) / n
        lo = center - n // 2
        arranged = ch[np.arange(lo, lo + n) % n]
        edge = n // 8
        total_mass = float(np.abs(arranged).sum())
        edge_mass = float(np.abs(arranged[:edge]).sum()
                          + np.abs(arranged[-edge:]).sum())
        if edge_mass <= cfg.tol_symbol * max(1.0, total_mass):
            sym = sym_truncate(LaurentSymbol(arranged, lo), cfg.tol_symbol)
            return total.with_symbol(sym)
        n *= 2
    raise NoConvergenceError("symbol interpolation grid exhausted")


def _abs_series_derivative(f, x, order, radius):
    """sum_{i>=order} |f_i| i(i-1)...(i-order+1) x^{i-order}.

    Terms are accumulated until they fall below 1e-16 of the partial sum.
    """
    if not x < radius:
        raise RadiusViolationError(
            f"bound evaluation point {x:.6g} is not inside the "
            f"radius of analyticity {radius:.6g}")
    total = 0.0
    i = order
    while True:
        fall = 1.0
        for j in range(order):
            fall *= (i - j)
        term = abs(f.coeff(i)) * fall * x ** (i - order)
        total += term
        i += 1
        if i > 4 and term < 1e-16 * max(total, 1e-300):
            break
        if i > 100000:
            raise NoConvergenceError("bound series did not settle")
    return total


def bound_correction_toeplitz(f, a):
    """A priori bound on the correction mass of f applied to T(a).

    Evaluates (1/2) ||a'||_W^2 g''(||a||_W) with g the series of absolute
    coefficients of f; requires ||a||_W inside the disk of analyticity.
    """
    nw, nw1 = wiener_norms(a)
    return 0.5 * nw1 ** 2 * _abs_series_derivative(f, nw, 2, f.radius)


def bound_correction_general(f, a, norm_e):
    """A priori bound on the correction mass of f applied to T(a) + E.

    Uses the finite-difference form
    (alpha (g(w + e) - g(w)) / e - beta g'(w)) / e with
    alpha = ||a'||^2 + e, beta = ||a'||^2, w = ||a||_W and e the correction
    mass.  Below e = 1e-10 the Toeplitz-only bound is returned, which the
    finite difference approaches in the limit.
    """
    if norm_e < 0:
        raise ValueError("correction mass must be nonnegative")
    if norm_e < 1e-10:
        return bound_correction_toeplitz(f, a)
    nw, nw1 = wiener_norms(a)
    if not nw + norm_e < f.radius:
        raise RadiusViolationError(
            f"bound evaluation point {nw + norm_e:.6g} is not inside the "
            f"radius of analyticity {f.radius:.6g}")
    alpha = nw1 ** 2 + norm_e
    beta = nw1 ** 2
    g_hi = _abs_series_derivative(f, nw + norm_e, 0, f.radius)
    g_lo = _abs_series_derivative(f, nw, 0, f.radius)
    g1 = _abs_series_derivative(f, nw, 1, f.radius)
    return (alpha * (g_hi - g_lo) / norm_e - beta * g1) / norm_e
