"""The bilateral theta function and its triple-product factorisation.

Theta*(q, x) = theta(q, x) + theta(q, 1/x) / x is always formed from two
certified partial-theta sums; the product

    prod_{m>=1} (1 - q^m)(1 + x q^m)(1 + q^{m-1} / x)

is truncated once the remaining factors are provably close to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .core_eval import (
    EXTENDED_DPS,
    CertifiedValue,
    DomainError,
    PrecisionMode,
    _check_real_q,
    _check_x,
    eval_theta,
)

MAX_FACTORS = 100_000


@dataclass(frozen=True)
class TripleProductResult:
    value: complex
    factors_used: int
    # bound on |partial / full - 1|
    tail_bound: float
    precision: PrecisionMode = PrecisionMode.STANDARD


def _nonzero_x(x) -> complex:
    x = _check_x(x)
    if x == 0:
        raise DomainError("x must be nonzero")
    return x


def eval_theta_star(q, x, prec: PrecisionMode | str = PrecisionMode.STANDARD) -> CertifiedValue:
    """theta(q, x) + theta(q, 1/x) / x with the combined error bound."""
    x = _nonzero_x(x)
    mode = PrecisionMode.coerce(prec)
    a = eval_theta(q, x, mode)
    if mode is PrecisionMode.EXTENDED:
        with mpmath.workdps(EXTENDED_DPS):
            xm = mpmath.mpc(x.real, x.imag)
            b = eval_theta(q, 1 / xm, mode)
            exact = a.exact + b.exact / xm
        value = complex(exact)
    else:
        b = eval_theta(q, 1 / x, mode)
        exact = None
        value = a.value + b.value / x
    inv = 1 / abs(x)
    return CertifiedValue(
        value=value,
        tail_bound=a.tail_bound + inv * b.tail_bound,
        terms_used=max(a.terms_used, b.terms_used),
        round_bound=a.round_bound + inv * b.round_bound + 2.0**-52 * abs(value),
        precision=mode,
        exact=exact,
    )


def product_tail(aq: float, ax: float, m: int) -> float:
    """Majorant of the relative error after keeping factors 1..m.

    Uses |log(1 + z)| <= 2|z| for |z| <= 1/2; returns inf when some omitted
    factor is not yet in that range.
    """
    if aq == 0:
        return 0.0
    if aq ** (m + 1) * max(1.0, ax) > 0.5 or aq**m / ax > 0.5:
        return math.inf
    s = aq ** (m + 1) * (1 + ax) / (1 - aq) + aq**m / (ax * (1 - aq))
    return math.expm1(2 * s)


def triple_product(q, x, tol: float = 1e-15,
                   prec: PrecisionMode | str = PrecisionMode.STANDARD) -> TripleProductResult:
    """Partial product over m = 1..M with the majorised relative tail <= tol."""
    q = _check_real_q(q)
    x = _nonzero_x(x)
    if not tol > 0:
        raise DomainError("tol must be positive")
    mode = PrecisionMode.coerce(prec)
    aq, ax = abs(q), abs(x)
    ext = mode is PrecisionMode.EXTENDED
    ctx = mpmath.workdps(EXTENDED_DPS) if ext else _NullCtx()
    with ctx:
        one = mpmath.mpf(1) if ext else 1.0
        qq = mpmath.mpf(q) if ext else q
        xx = mpmath.mpc(x.real, x.imag) if ext else x
        prod = one
        qm_prev = one  # q^{m-1}
        m = 0
        while True:
            m += 1
            qm = qm_prev * qq
            prod *= (1 - qm) * (1 + xx * qm) * (1 + qm_prev / xx)
            qm_prev = qm
            tail = product_tail(aq, ax, m)
            if tail <= tol or prod == 0:
                break
            if m >= MAX_FACTORS:
                raise ArithmeticError("product did not reach the requested tolerance")
        if prod == 0:
            tail = 0.0
    return TripleProductResult(complex(prod), m, float(tail), mode)


class _NullCtx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def identity_residual(q, x, prec: PrecisionMode | str | None = None) -> float:
    """|product - (theta(q, x) + theta(q, 1/x)/x)|.

    Standard precision is tried first; if the rounding allowance of either side
    is too coarse to resolve the identity, both sides are redone in extended
    precision.
    """
    x = _nonzero_x(x)
    if prec is None:
        star = eval_theta_star(q, x)
        prod = triple_product(q, x)
        scale = 1 + abs(star.value)
        if star.round_bound <= 1e-13 * scale:
            return abs(prod.value - star.value)
        prec = PrecisionMode.EXTENDED
    mode = PrecisionMode.coerce(prec)
    star = eval_theta_star(q, x, mode)
    prod = triple_product(q, x, 1e-30 if mode is PrecisionMode.EXTENDED else 1e-15, mode)
    return abs(prod.value - star.value)
