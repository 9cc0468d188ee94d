"""Certified evaluation of the partial theta function.

    theta(q, x) = sum_{j >= 0} q^{j(j+1)/2} x^j

Every evaluation returns the partial sum together with a rigorous bound on
the omitted tail.  Consecutive terms satisfy t_{j+1} = t_j * q^{j+1} * x, so
once |q|^{N+2} |x| <= r the tail after index N is dominated by a geometric
series with ratio r.  The derivative series (in x and in q) reuse the same
recurrence with polynomial weights, which only changes the majorant constant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
import numpy as np

EXTENDED_DPS = 40
DEFAULT_RATIO = 0.5
MAX_TERMS = 200_000

_U_STANDARD = 2.0**-53

# Auto-promotion thresholds.
_PROMOTE_ABS_Q = 0.95
_PROMOTE_TOL = 1e-16


class PrecisionMode(str, enum.Enum):
    STANDARD = "standard"
    EXTENDED = "extended"

    @classmethod
    def coerce(cls, value: "PrecisionMode | str | None") -> "PrecisionMode":
        if value is None:
            return cls.STANDARD
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown precision mode {value!r}") from None


class DomainError(ValueError):
    """Input outside the region where an operation is defined."""


class PoleError(DomainError):
    def __init__(self, pole: complex, message: str | None = None):
        self.pole = pole
        super().__init__(message or f"pole at x = {pole}")


@dataclass(frozen=True)
class CertifiedValue:
    """A series value with a bound on the omitted tail.

    ``tail_bound`` covers truncation only; ``round_bound`` is a generous
    allowance for floating-point rounding in the partial sum.  In extended
    mode ``exact`` keeps the working-precision value.
    """

    value: complex
    tail_bound: float
    terms_used: int
    round_bound: float = 0.0
    precision: PrecisionMode = PrecisionMode.STANDARD
    exact: mpmath.mpc | None = field(default=None, compare=False, repr=False)

    @property
    def error_bound(self) -> float:
        return self.tail_bound + self.round_bound

    @property
    def modulus_lower_bound(self) -> float:
        mod = float(abs(self.exact)) if self.exact is not None else abs(self.value)
        return max(0.0, mod - self.error_bound)

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag


@dataclass(frozen=True)
class MinusOneValue:
    """theta(q, -1) with an alternating-series bracket ``lower <= value <= upper``."""

    q: float
    value: float
    lower: float
    upper: float
    terms_used: int
    # for q < 0: brackets of the even-index and odd-index Leibniz series
    even_bracket: tuple[float, float] | None = None
    odd_bracket: tuple[float, float] | None = None


# --------------------------------------------------------------------------
# series kinds: (first index, weight(j), majorant(N, r))
#
# base_j for every kind obeys base_{j+1} = base_j * q^{j+1} * x;
# the summand is weight(j) * base_j.


def _maj_value(n: int, r: float) -> float:
    return 1.0 / (1.0 - r)


def _maj_dx(n: int, r: float) -> float:
    return (n + 2) / (1.0 - r) ** 2


def _maj_dxx(n: int, r: float) -> float:
    return (n + 2) ** 2 / (1.0 - r) ** 3


def _maj_dq(n: int, r: float) -> float:
    return (n + 3) ** 2 / (2.0 * (1.0 - r) ** 3)


_KINDS = {
    # kind: (start index, weight, majorant)
    "value": (0, lambda j: 1, _maj_value),
    "dx": (1, lambda j: j, _maj_dx),
    "dxx": (2, lambda j: j * (j - 1), _maj_dxx),
    "dq": (1, lambda j: j * (j + 1) // 2, _maj_dq),
}


def _base_start(kind: str, q, x):
    if kind == "value":
        return 1.0 + 0 * x
    if kind == "dx":
        return q + 0 * x
    if kind == "dxx":
        return q * q * q + 0 * x
    return x  # dq: q^{j(j+1)/2 - 1} x^j at j = 1


def resolve_precision(q, prec: PrecisionMode | str | None, tol: float | None = None) -> PrecisionMode:
    mode = PrecisionMode.coerce(prec)
    if abs(complex(q)) > _PROMOTE_ABS_Q or (tol is not None and tol < _PROMOTE_TOL):
        return PrecisionMode.EXTENDED
    return mode


def _check_real_q(q) -> float:
    try:
        qf = float(q)
    except (TypeError, ValueError):
        raise DomainError(f"q must be real, got {q!r}") from None
    if not math.isfinite(qf) or abs(qf) >= 1.0:
        raise DomainError(f"|q| must be < 1, got q = {q!r}")
    return qf


def _check_x(x) -> complex:
    try:
        xc = complex(x)
    except (TypeError, ValueError):
        raise DomainError(f"x must be a number, got {x!r}") from None
    if not (math.isfinite(xc.real) and math.isfinite(xc.imag)):
        raise DomainError(f"x must be finite, got {x!r}")
    return xc


def _check_ratio(r: float) -> float:
    if not 0.0 < r < 1.0:
        raise DomainError(f"ratio threshold must lie in (0, 1), got {r}")
    return float(r)


# --------------------------------------------------------------------------
# standard precision kernel (numpy, vectorised over x)


@dataclass
class SeriesArrays:
    values: np.ndarray
    tails: np.ndarray
    rounds: np.ndarray
    terms_used: int


def _series_np(
    q,
    xs: np.ndarray,
    kinds: Sequence[str],
    *,
    ratio: float = DEFAULT_RATIO,
    tol: float | None = None,
    n_fixed: int | None = None,
) -> dict[str, SeriesArrays]:
    xs = np.asarray(xs, dtype=np.complex128)
    absx = np.abs(xs)
    aq = abs(q)
    qc = complex(q) if isinstance(q, complex) else float(q)
    starts = {k: _KINDS[k][0] for k in kinds}
    need_n = max(starts.values()) - 1
    sums = {k: np.zeros_like(xs) for k in kinds}
    comp = {k: np.zeros_like(xs) for k in kinds}
    base: dict[str, np.ndarray | None] = {k: None for k in kinds}
    absacc = {k: np.zeros(xs.shape) for k in kinds}
    maxterm = {k: np.zeros(xs.shape) for k in kinds}

    def next_base(k: str, j: int) -> np.ndarray:
        # base at index j + 1, valid once j + 1 >= start
        if j >= starts[k]:
            return base[k]
        return np.asarray(_base_start(k, qc, xs), dtype=np.complex128)

    qp = qc  # q^{j+1}
    j = 0
    while True:
        for k in kinds:
            s = starts[k]
            if j == s:
                base[k] = np.asarray(_base_start(k, qc, xs), dtype=np.complex128)
            if j >= s:
                t = _KINDS[k][1](j) * base[k]
                y = t - comp[k]
                tt = sums[k] + y
                comp[k] = (tt - sums[k]) - y
                sums[k] = tt
                at = np.abs(t)
                absacc[k] += (5 * (j + 1) + 3) * at
                np.maximum(maxterm[k], at, out=maxterm[k])
                base[k] = base[k] * (qp * xs)
        qp = qp * qc
        if n_fixed is not None:
            if j >= n_fixed:
                break
        elif j >= need_n and np.all(aq ** (j + 2) * absx <= ratio):
            done = True
            for k in kinds:
                tail = np.abs(next_base(k, j)) * _KINDS[k][2](j, ratio)
                lim = tol if tol is not None else _U_STANDARD * 0.5 * np.maximum(1.0, maxterm[k])
                if np.any(tail > lim):
                    done = False
                    break
            if done:
                break
        if j > MAX_TERMS:
            raise DomainError("series did not reach its tail tolerance; |q| too close to 1")
        j += 1

    out = {}
    for k in kinds:
        if n_fixed is not None:
            tail = np.full(xs.shape, np.nan)
        else:
            tail = np.abs(next_base(k, j)) * _KINDS[k][2](j, ratio)
        rnd = _U_STANDARD * (absacc[k] + 2.0 * np.abs(sums[k]))
        out[k] = SeriesArrays(sums[k], tail, rnd, j + 1)
    return out


# --------------------------------------------------------------------------
# extended precision kernel (mpmath, scalar)


def _series_mp(
    q,
    x,
    kinds: Sequence[str],
    *,
    ratio: float = DEFAULT_RATIO,
    tol: float | None = None,
    n_fixed: int | None = None,
) -> dict[str, tuple]:
    with mpmath.workdps(EXTENDED_DPS):
        u = mpmath.mpf(2) ** -mpmath.mp.prec
        qm = mpmath.mpmathify(q)
        xm = mpmath.mpc(mpmath.mpmathify(x))
        aq = abs(qm)
        ax = abs(xm)
        starts = {k: _KINDS[k][0] for k in kinds}
        need_n = max(starts.values()) - 1
        sums = {k: mpmath.mpc(0) for k in kinds}
        base = {k: None for k in kinds}
        absacc = {k: mpmath.mpf(0) for k in kinds}
        maxterm = {k: mpmath.mpf(0) for k in kinds}
        qp = qm
        aqp = aq * aq
        j = 0
        while True:
            for k in kinds:
                s = starts[k]
                if j == s:
                    base[k] = mpmath.mpc(_base_start(k, qm, xm))
                if j >= s:
                    t = _KINDS[k][1](j) * base[k]
                    sums[k] += t
                    at = abs(t)
                    absacc[k] += (5 * (j + 1) + 3) * at
                    if at > maxterm[k]:
                        maxterm[k] = at
            for k in kinds:
                if j >= starts[k]:
                    base[k] = base[k] * qp * xm
            qp *= qm
            n = j
            if n_fixed is not None:
                if n >= n_fixed:
                    break
            elif n >= need_n and aqp * ax <= ratio:
                done = True
                for k in kinds:
                    nb = base[k] if n >= starts[k] else mpmath.mpc(_base_start(k, qm, xm))
                    tail = abs(nb) * _KINDS[k][2](n, ratio)
                    lim = tol if tol is not None else u * 16 * max(1, maxterm[k])
                    if tail > lim:
                        done = False
                        break
                if done:
                    break
            aqp *= aq
            if j > MAX_TERMS:
                raise DomainError("series did not reach its tail tolerance; |q| too close to 1")
            j += 1
        out = {}
        for k in kinds:
            nb = base[k] if n >= starts[k] else mpmath.mpc(_base_start(k, qm, xm))
            tail = float(abs(nb) * _KINDS[k][2](n, ratio)) if n_fixed is None else float("nan")
            rnd = float(u * (absacc[k] + 2 * abs(sums[k])))
            out[k] = (sums[k], tail, rnd, n + 1)
        return out


# --------------------------------------------------------------------------
# public API


def _certified(q, x, kind: str, prec, ratio: float, tol: float | None) -> CertifiedValue:
    qf = _check_real_q(q) if not isinstance(q, (mpmath.mpf,)) else q
    if isinstance(q, mpmath.mpf):
        _check_real_q(float(q))
    xc = _check_x(x)
    ratio = _check_ratio(ratio)
    mode = resolve_precision(qf, prec, tol)
    if mode is PrecisionMode.EXTENDED:
        xin = x if isinstance(x, (mpmath.mpc, mpmath.mpf)) else xc
        val, tail, rnd, n = _series_mp(qf, xin, (kind,), ratio=ratio, tol=tol)[kind]
        return CertifiedValue(complex(val), tail, n, rnd, mode, exact=val)
    res = _series_np(qf, np.array([xc]), (kind,), ratio=ratio, tol=tol)[kind]
    return CertifiedValue(
        complex(res.values[0]), float(res.tails[0]), res.terms_used, float(res.rounds[0]), mode
    )


def eval_theta(q, x, prec: PrecisionMode | str = PrecisionMode.STANDARD, *,
               ratio: float = DEFAULT_RATIO, tol: float | None = None) -> CertifiedValue:
    """Evaluate theta(q, x) with a certified tail bound.

    Extended precision is used automatically for |q| > 0.95 or when ``tol``
    is below 1e-16.
    """
    return _certified(q, x, "value", prec, ratio, tol)


def eval_theta_dx(q, x, prec: PrecisionMode | str = PrecisionMode.STANDARD, *,
                  ratio: float = DEFAULT_RATIO, tol: float | None = None) -> CertifiedValue:
    """d/dx theta(q, x); tail majorant |b_{N+1}| (N+2) / (1-r)^2."""
    return _certified(q, x, "dx", prec, ratio, tol)


def eval_theta_dxx(q, x, prec: PrecisionMode | str = PrecisionMode.STANDARD, *,
                   ratio: float = DEFAULT_RATIO, tol: float | None = None) -> CertifiedValue:
    return _certified(q, x, "dxx", prec, ratio, tol)


def eval_theta_dq(q, x, prec: PrecisionMode | str = PrecisionMode.STANDARD, *,
                  ratio: float = DEFAULT_RATIO, tol: float | None = None) -> CertifiedValue:
    """d/dq theta(q, x), used by the continuation predictor."""
    return _certified(q, x, "dq", prec, ratio, tol)


def evaluate_many(q, xs, kinds: Iterable[str] = ("value",),
                  prec: PrecisionMode | str = PrecisionMode.STANDARD, *,
                  ratio: float = DEFAULT_RATIO, tol: float | None = None) -> dict[str, SeriesArrays]:
    """Vectorised certified evaluation on an array of points.

    All points share one term count.  ``q`` may be complex (|q| < 1); the
    tail argument only uses |q|.
    """
    kinds = tuple(kinds)
    for k in kinds:
        if k not in _KINDS:
            raise DomainError(f"unknown series kind {k!r}")
    if abs(complex(q)) >= 1.0 or not np.isfinite(complex(q)):
        raise DomainError(f"|q| must be < 1, got {q!r}")
    xs = np.atleast_1d(np.asarray(xs, dtype=np.complex128))
    if not np.all(np.isfinite(xs)):
        raise DomainError("x must be finite")
    ratio = _check_ratio(ratio)
    mode = resolve_precision(q, prec, tol)
    if mode is PrecisionMode.STANDARD:
        return _series_np(q, xs, kinds, ratio=ratio, tol=tol)
    cols = {k: ([], [], []) for k in kinds}
    nmax = 0
    for x in xs:
        res = _series_mp(q, complex(x), kinds, ratio=ratio, tol=tol)
        for k in kinds:
            v, t, r, n = res[k]
            cols[k][0].append(complex(v))
            cols[k][1].append(t)
            cols[k][2].append(r)
            nmax = max(nmax, n)
    return {
        k: SeriesArrays(np.array(c[0], dtype=np.complex128), np.array(c[1]), np.array(c[2]), nmax)
        for k, c in cols.items()
    }


def eval_truncation(q, x, n: int, prec: PrecisionMode | str = PrecisionMode.STANDARD):
    """Partial sum theta_n(q, x) = sum_{j=0}^{n} q^{j(j+1)/2} x^j.

    ``q`` may be complex.  Returns a Python complex, or an ``mpmath.mpc`` in
    extended mode.
    """
    if n < 0:
        raise DomainError(f"truncation degree must be >= 0, got {n}")
    mode = PrecisionMode.coerce(prec)
    qc = complex(q)
    if not np.isfinite(qc):
        raise DomainError("q must be finite")
    if mode is PrecisionMode.EXTENDED:
        xin = x if isinstance(x, (mpmath.mpc, mpmath.mpf)) else _check_x(x)
        qin = q if isinstance(q, (mpmath.mpc, mpmath.mpf)) else (qc if qc.imag else qc.real)
        return _series_mp(qin, xin, ("value",), n_fixed=n)["value"][0]
    xc = _check_x(x)
    qin = qc if qc.imag else qc.real
    return complex(_series_np(qin, np.array([xc]), ("value",), n_fixed=n)["value"].values[0])


def functional_equation_residual(q, x, prec: PrecisionMode | str | None = None) -> float:
    """|theta(q,x) - 1 - q x theta(q, q x)|.

    With ``prec=None`` the check runs in standard precision and is repeated
    in extended precision when the standard rounding allowance would exceed
    1e-14 (1 + |x|).
    """
    qf = _check_real_q(q)
    xc = _check_x(x)
    if qf == 0.0:
        return 0.0
    mode = PrecisionMode.STANDARD if prec is None else PrecisionMode.coerce(prec)
    lhs = eval_theta(qf, xc, mode)
    rhs = eval_theta(qf, qf * xc, mode)
    if prec is None and lhs.precision is PrecisionMode.STANDARD:
        allowance = lhs.round_bound + abs(qf * xc) * rhs.round_bound
        if allowance > 1e-14 * (1.0 + abs(xc)):
            lhs = eval_theta(qf, xc, PrecisionMode.EXTENDED)
            rhs = eval_theta(qf, qf * xc, PrecisionMode.EXTENDED)
    if lhs.exact is not None and rhs.exact is not None:
        with mpmath.workdps(EXTENDED_DPS):
            qm = mpmath.mpf(qf)
            return float(abs(lhs.exact - 1 - qm * mpmath.mpc(xc) * rhs.exact))
    return abs(lhs.value - 1.0 - qf * xc * rhs.value)


def closed_form(q: int, x):
    """theta(1, x) = 1/(1-x) and theta(-1, x) = (1-x)/(1+x^2).

    Works on scalars and numpy arrays; raises :class:`PoleError` if any
    point is a pole.
    """
    if q not in (1, -1):
        raise DomainError(f"closed form exists only for q = +-1, got {q!r}")
    xa = np.asarray(x, dtype=np.complex128)
    if q == 1:
        den = 1.0 - xa
        num = np.ones_like(xa)
    else:
        den = 1.0 + xa * xa
        num = 1.0 - xa
    bad = den == 0
    if np.any(bad):
        pole = complex(np.atleast_1d(xa)[np.atleast_1d(bad)][0])
        raise PoleError(pole)
    out = num / den
    return complex(out) if out.ndim == 0 else out


def theta_at_minus_one(q, prec: PrecisionMode | str = PrecisionMode.STANDARD,
                       *, tol: float = 1e-18) -> MinusOneValue:
    """theta(q, -1) = sum (-1)^j q^{j(j+1)/2}, bracketed by Leibniz partial sums.

    For q in (0, 1) the series is a single alternating series.  For q < 0,
    with u = -q, the signs run + + - - + + ..., so the even-index terms
    (1 - u^3 + u^10 - ...) and the odd-index terms (u - u^6 + u^15 - ...)
    form two alternating series, each bracketing its own limit.
    """
    qf = _check_real_q(q)
    mode = resolve_precision(qf, prec)
    if qf == 0.0:
        return MinusOneValue(0.0, 1.0, 1.0, 1.0, 1)
    with mpmath.workdps(EXTENDED_DPS if mode is PrecisionMode.EXTENDED else 20):
        qm = mpmath.mpf(qf)
        um = abs(qm)
        tolm = mpmath.mpf(tol)

        def leibniz(first: int):
            # sum over j = first, first+2, ... of +-u^{j(j+1)/2}, sign alternating
            total = mpmath.mpf(0)
            sign = 1
            j = first
            count = 0
            while True:
                term = um ** (j * (j + 1) // 2)
                total += sign * term
                count += 1
                nxt = um ** ((j + 2) * (j + 3) // 2)
                if nxt < tolm:
                    # the limit lies between the current partial sum and the next one
                    other = total - sign * nxt
                    return total, min(total, other), max(total, other), count
                sign = -sign
                j += 2

        if qf > 0:
            # single alternating series with terms q^{j(j+1)/2}
            total = mpmath.mpf(0)
            j = 0
            while True:
                total += (-1) ** j * qm ** (j * (j + 1) // 2)
                nxt = qm ** ((j + 1) * (j + 2) // 2)
                if nxt < tolm:
                    other = total + (-1) ** (j + 1) * nxt
                    return MinusOneValue(qf, float(total), float(min(total, other)),
                                         float(max(total, other)), j + 1)
                j += 1
        even, elo, ehi, ne = leibniz(0)
        odd, olo, ohi, no = leibniz(1)
        value = even + odd
        return MinusOneValue(
            qf, float(value), float(elo + olo), float(ehi + ohi), ne + no,
            even_bracket=(float(elo), float(ehi)), odd_bracket=(float(olo), float(ohi)),
        )
