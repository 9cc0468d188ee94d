"""Zeros of theta(q, .): truncation roots, Newton refinement, continuation in q,
and zero-free disks certified by the argument principle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .core_eval import (
    EXTENDED_DPS,
    DomainError,
    PrecisionMode,
    _check_real_q,
    _series_mp,
    _series_np,
    evaluate_many,
    resolve_precision,
)
from .polyroots import RootSet, aberth

MAX_TRUNCATION_DEGREE = 512
NEWTON_CAP = 64
STEP_TOL = {PrecisionMode.STANDARD: 1e-13, PrecisionMode.EXTENDED: 1e-28}
INITIAL_ARCS = 256
MAX_VERTICES = 1 << 17
_U = 2.0**-53


class DegenerateError(ArithmeticError):
    """Derivative too small for a Newton step."""


class NoConvergenceError(ArithmeticError):
    pass


class ZeroSource(str, enum.Enum):
    TRUNCATION_ROOT = "truncation_root"
    CONTINUATION = "continuation"
    USER_SEED = "user_seed"


class CertificateStatus(str, enum.Enum):
    CERTIFIED = "certified"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ZeroRecord:
    q: float
    location: complex
    residual: float
    newton_steps: int
    source: ZeroSource
    derivative: complex = 0j
    # truncation degree the zero belongs to; None for theta itself
    degree: int | None = None
    step_history: tuple[float, ...] = ()
    precision: PrecisionMode = PrecisionMode.STANDARD
    location_exact: mpmath.mpc | None = field(default=None, compare=False, repr=False)

    @property
    def first_step(self) -> float:
        return self.step_history[0] if self.step_history else 0.0

    def residual_ok(self) -> bool:
        return self.residual <= 1e-12 * (1.0 + abs(self.derivative) * abs(self.location))


@dataclass(frozen=True)
class DiskCertificate:
    q: float
    radius: float
    winding: int
    min_modulus_lb: float
    samples: int
    status: CertificateStatus
    center: complex = 0j
    precision: PrecisionMode = PrecisionMode.STANDARD
    # smallest |theta| actually observed at a sample point
    min_modulus_sampled: float = math.inf
    max_arc_turn: float = 0.0
    diagnostic: str = ""

    @property
    def certified(self) -> bool:
        return self.status is CertificateStatus.CERTIFIED


@dataclass(frozen=True)
class TailBudget:
    t0_bound: float
    first_omitted: float
    ratio: float


@dataclass
class ZeroPath:
    records: list[ZeroRecord]
    completed: bool = True
    diagnostic: str = ""

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]


# --------------------------------------------------------------------------
# truncation roots


def truncation_log_coefficients(q, n: int) -> np.ndarray:
    """log of q^{j(j+1)/2}, j = 0..n, with exact phases for negative q."""
    j = np.arange(n + 1)
    tri = j * (j + 1) // 2
    phase = np.pi * (tri % 2) if q < 0 else np.zeros(n + 1)
    return tri * math.log(abs(q)) + 1j * phase


def truncation_roots(q, n: int) -> RootSet:
    """All n roots of theta_n(q, .) by Aberth-Ehrlich iteration."""
    qf = _check_real_q(q)
    if qf == 0.0:
        raise DomainError("theta_n(0, .) is constant; q must be nonzero")
    if not 1 <= n <= MAX_TRUNCATION_DEGREE:
        raise DomainError(f"degree must lie in 1..{MAX_TRUNCATION_DEGREE}, got {n}")
    # largest root modulus is about |q|^{-n}
    if -n * math.log(abs(qf)) > 690:
        raise DomainError("roots of this truncation exceed the double range; lower n or raise |q|")
    return aberth(truncation_log_coefficients(qf, n))


def enestrom_kakeya_bound(q, n: int) -> float:
    """min_j a_{j-1}/a_j for a_j = q^{j(j+1)/2}, j = 1..n; equals 1/q."""
    qf = float(q)
    if not 0.0 < qf < 1.0:
        raise DomainError("the Enestrom-Kakeya bound needs positive coefficients, q in (0, 1)")
    if n < 1:
        raise DomainError("n must be >= 1")
    best = math.inf
    inv = 1.0 / qf
    ratio = 1.0
    for _ in range(n):
        # a_{j-1}/a_j = q^{-j}
        ratio *= inv
        best = min(best, ratio)
    return best


def sqrt_disk_bound(q) -> float:
    """Lower bound 1 - sum_{j>=1} |q|^{j^2/2} for |theta| on |x| = |q|^{-1/2}."""
    a = abs(float(q))
    if not 0.0 < a <= 0.4:
        raise DomainError("the bound is only claimed for 0 < |q| <= 0.4")
    total = 0.0
    j = 1
    while True:
        term = a ** (j * j / 2.0)
        total += term
        # ratio of later terms is a^{(2j+1)/2} <= a^{3/2} < 1/2
        nxt = a ** ((j + 1) ** 2 / 2.0)
        if nxt / (1.0 - a ** ((2 * j + 3) / 2.0)) < 1e-18:
            break
        j += 1
    return 1.0 - total


def tail_budget(q, x_modulus: float, n: int) -> TailBudget:
    """Bound on |theta - theta_n| for |x| <= x_modulus via the first omitted term."""
    aq = abs(float(q))
    if not 0.0 < aq < 1.0 or x_modulus <= 0 or n < 0:
        raise DomainError("need 0 < |q| < 1, x_modulus > 0, n >= 0")
    with mpmath.workdps(30):
        lq = mpmath.log(mpmath.mpf(aq))
        lx = mpmath.log(mpmath.mpf(x_modulus))
        first = mpmath.exp((n + 1) * (n + 2) / 2 * lq + (n + 1) * lx)
        ratio = 1 / mpmath.exp((n + 2) * lq + lx)
        if ratio <= 1:
            raise DomainError("term ratio <= 1: the geometric tail bound does not apply")
        t0 = first / (1 - 1 / ratio)
    return TailBudget(float(t0), float(first), float(ratio))


# --------------------------------------------------------------------------
# Newton refinement


def _value_and_slope(q, x, mode: PrecisionMode, degree: int | None):
    """theta (or theta_degree) and its x-derivative at a single point."""
    if mode is PrecisionMode.EXTENDED:
        res = _series_mp(q, x, ("value", "dx"), n_fixed=degree)
        return res["value"][0], res["dx"][0]
    res = _series_np(q, np.array([complex(x)]), ("value", "dx"), n_fixed=degree)
    return complex(res["value"].values[0]), complex(res["dx"].values[0])


def _newton(q, seed, mode: PrecisionMode, degree: int | None, max_iter: int,
            stop_on_growth: int = 5):
    tol = STEP_TOL[mode]
    if mode is PrecisionMode.EXTENDED:
        ctx = mpmath.workdps(EXTENDED_DPS)
        ctx.__enter__()
        x = mpmath.mpc(seed)
        qv = mpmath.mpf(q) if not isinstance(q, complex) else mpmath.mpc(q)
    else:
        ctx = None
        x = complex(seed)
        qv = q
    try:
        steps: list[float] = []
        growth = 0
        for it in range(1, max_iter + 1):
            f, df = _value_and_slope(qv, x, mode, degree)
            if abs(complex(df)) < 1e-10 * max(1.0, abs(complex(f))):
                raise DegenerateError(f"derivative {complex(df)} too small at x = {complex(x)}")
            step = f / df
            x = x - step
            s = float(abs(step))
            if steps and s > steps[-1]:
                growth += 1
                if growth >= stop_on_growth:
                    raise NoConvergenceError(f"Newton steps grew {growth} times in a row near x = {complex(x)}")
            else:
                growth = 0
            steps.append(s)
            if s < tol * (1.0 + float(abs(x))):
                f, df = _value_and_slope(qv, x, mode, degree)
                return x, f, df, steps
        raise NoConvergenceError(f"no convergence in {max_iter} Newton steps from {complex(seed)}")
    finally:
        if ctx is not None:
            ctx.__exit__(None, None, None)


def refine_zero(q, seed, prec: PrecisionMode | str = PrecisionMode.STANDARD, *,
                degree: int | None = None, source: ZeroSource = ZeroSource.USER_SEED,
                max_iter: int = NEWTON_CAP) -> ZeroRecord:
    """Newton iteration x <- x - theta/theta_x from ``seed``.

    With ``degree`` set, the zero of the truncation theta_degree is refined
    instead of the zero of theta.
    """
    if isinstance(q, complex):
        if abs(q) >= 1:
            raise DomainError("|q| must be < 1")
        qv, qreal = q, float("nan")
        mode = PrecisionMode.coerce(prec)
    else:
        qreal = _check_real_q(q)
        qv = qreal
        mode = resolve_precision(qreal, prec)
    if degree is not None and degree < 1:
        raise DomainError("truncation degree must be >= 1")
    x, f, df, steps = _newton(qv, seed, mode, degree, max_iter)
    return ZeroRecord(
        q=qreal if not isinstance(q, complex) else q,
        location=complex(x),
        residual=float(abs(f)),
        newton_steps=len(steps),
        source=source,
        derivative=complex(df),
        degree=degree,
        step_history=tuple(steps),
        precision=mode,
        location_exact=x if mode is PrecisionMode.EXTENDED else None,
    )


def newton_step(q, x, prec: PrecisionMode | str = PrecisionMode.EXTENDED,
                degree: int | None = None) -> float:
    """Size of a single Newton correction |theta/theta_x| at x."""
    mode = PrecisionMode.coerce(prec)
    if mode is PrecisionMode.EXTENDED:
        with mpmath.workdps(EXTENDED_DPS):
            f, df = _value_and_slope(mpmath.mpf(q), mpmath.mpc(x), mode, degree)
            return float(abs(f / df))
    f, df = _value_and_slope(float(q), complex(x), mode, degree)
    return abs(f / df)


# --------------------------------------------------------------------------
# argument principle


def _derivative_bounds(q, center: complex, radius: float) -> tuple[float, float]:
    """Upper bounds for |theta_x| and |theta_xx| on the circle |x - center| = radius."""
    rho = abs(center) + radius
    res = _series_np(abs(q), np.array([rho + 0j]), ("dx", "dxx"))
    m1 = abs(res["dx"].values[0]) + res["dx"].tails[0] + res["dx"].rounds[0]
    m2 = abs(res["dxx"].values[0]) + res["dxx"].tails[0] + res["dxx"].rounds[0]
    return float(m1) * (1 + 1e-12), float(m2) * (1 + 1e-12)


def _segment_distance(p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
    d = p1 - p0
    dd = np.abs(d) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dd > 0, -(p0.real * d.real + p0.imag * d.imag) / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p0 + t * d)


def _half_arc(p0, slope, h, eps):
    """Certified data for one half arc: Taylor segment p0 + slope*t, t in [0, h],
    widened by eps.  Returns (distance lower bound, angular span)."""
    p1 = p0 + slope * h
    dist = _segment_distance(p0, p1) - eps
    with np.errstate(divide="ignore", invalid="ignore"):
        turn = np.abs(np.angle(p1 / p0))
        w0 = np.arcsin(np.clip(eps / np.abs(p0), 0, 1))
        w1 = np.arcsin(np.clip(eps / np.abs(p1), 0, 1))
    span = np.where(np.isfinite(turn), turn, np.pi) + w0 + w1
    return dist, span


class _CircleSampler:
    def __init__(self, q, center: complex, radius: float, mode: PrecisionMode):
        self.q = q
        self.center = center
        self.radius = radius
        self.mode = mode

    def __call__(self, phis: np.ndarray):
        e = np.exp(1j * phis)
        xs = self.center + self.radius * e
        res = evaluate_many(self.q, xs, ("value", "dx"), self.mode)
        g = res["value"].values
        dtheta = res["dx"].values
        gp = 1j * self.radius * e * dtheta
        err = res["value"].tails + res["value"].rounds + 2 * _U * (np.abs(g) + (abs(self.center) + self.radius) * np.abs(dtheta))
        errp = self.radius * (res["dx"].tails + res["dx"].rounds + 2 * _U * np.abs(dtheta))
        return g, gp, err, errp


def _argument_principle(q, center: complex, radius: float, mode: PrecisionMode,
                        *, gap_rel: float = 1e-3, max_vertices: int = MAX_VERTICES) -> DiskCertificate:
    m1, m2 = _derivative_bounds(q, center, radius)
    # |g''(phi)| for g(phi) = theta(center + R e^{i phi})
    kbound = radius * m1 + radius * radius * m2
    sampler = _CircleSampler(q, center, radius, mode)

    phis = np.linspace(0.0, 2 * np.pi, INITIAL_ARCS, endpoint=False)
    g, gp, err, errp = sampler(phis)
    diagnostic = ""
    while True:
        nxt = np.roll(np.arange(len(phis)), -1)
        h = np.diff(np.append(phis, 2 * np.pi))
        half = h / 2
        eps_a = kbound * half**2 / 2 + err + half * errp
        eps_b = kbound * half**2 / 2 + err[nxt] + half * errp[nxt]
        dist_a, span_a = _half_arc(g, gp, half, eps_a)
        dist_b, span_b = _half_arc(g[nxt], -gp[nxt], half, eps_b)
        lb = np.minimum(dist_a, dist_b)
        turn = np.abs(np.angle(g[nxt] / g))
        ok = (lb > 0) & (span_a < np.pi / 2) & (span_b < np.pi / 2) & (turn < np.pi / 3)
        sampled_min = float(np.min(np.abs(g) - err))
        # branch and bound on the minimum modulus
        loose = lb < sampled_min * (1 - gap_rel) - 1e-300
        split = ~ok | loose
        if not split.any():
            break
        if len(phis) + int(split.sum()) > max_vertices or np.min(h[split]) < 1e-14:
            if (~ok).any():
                diagnostic = "refinement limit reached with uncertified arcs"
                return DiskCertificate(
                    q=float(q), radius=radius, winding=0, min_modulus_lb=max(0.0, float(lb.min())),
                    samples=len(phis), status=CertificateStatus.INCONCLUSIVE, center=center,
                    precision=mode, min_modulus_sampled=float(np.min(np.abs(g))),
                    max_arc_turn=float(turn.max()), diagnostic=diagnostic)
            break
        mids = phis[split] + half[split]
        gm, gpm, errm, errpm = sampler(mids)
        order = np.argsort(np.concatenate([phis, mids]), kind="stable")
        phis = np.concatenate([phis, mids])[order]
        g = np.concatenate([g, gm])[order]
        gp = np.concatenate([gp, gpm])[order]
        err = np.concatenate([err, errm])[order]
        errp = np.concatenate([errp, errpm])[order]

    total = float(np.sum(np.angle(g[nxt] / g)))
    wind = total / (2 * np.pi)
    winding = int(round(wind))
    status = CertificateStatus.CERTIFIED
    if abs(wind - winding) > 1e-6:
        status = CertificateStatus.INCONCLUSIVE
        diagnostic = f"non-integer winding {wind}"
    return DiskCertificate(
        q=float(q), radius=radius, winding=winding, min_modulus_lb=max(0.0, float(lb.min())),
        samples=len(phis), status=status, center=center, precision=mode,
        min_modulus_sampled=float(np.min(np.abs(g))), max_arc_turn=float(turn.max()),
        diagnostic=diagnostic,
    )


def count_zeros_in_disk(q, radius: float, prec: PrecisionMode | str = PrecisionMode.STANDARD,
                        *, center: complex = 0j) -> DiskCertificate:
    """Number of zeros of theta(q, .) in |x - center| < radius by the argument principle.

    The winding of theta along the circle is accumulated over adaptively
    refined arcs.  An arc is accepted when a second-order Taylor enclosure of
    each half keeps theta inside a convex region avoiding 0 and subtending
    less than pi/2, so the argument increment is unambiguous.
    """
    qf = _check_real_q(q)
    if radius <= 0 or not math.isfinite(radius):
        raise DomainError("radius must be positive and finite")
    mode = resolve_precision(qf, prec)
    return _argument_principle(qf, complex(center), float(radius), mode)


def certify_unit_disk(q, prec: PrecisionMode | str | None = None) -> DiskCertificate:
    """Zero count and minimum modulus of theta(q, .) on the closed unit disk.

    Extended precision is the default for |q| >= 0.9, where the image of the
    unit circle comes close to the origin.
    """
    qf = _check_real_q(q)
    if qf == 0.0:
        raise DomainError("q = 0 is excluded (theta(0, .) = 1 has no zeros)")
    if prec is None:
        prec = PrecisionMode.EXTENDED if abs(qf) >= 0.9 else PrecisionMode.STANDARD
    return count_zeros_in_disk(qf, 1.0, prec)


def zero_multiplicity(record: ZeroRecord, radius: float = 1e-6) -> int:
    cert = count_zeros_in_disk(record.q, radius, record.precision, center=record.location)
    if not cert.certified:
        raise NoConvergenceError("could not certify the multiplicity circle")
    return cert.winding


# --------------------------------------------------------------------------
# continuation


def _dxdq(q: float, x: complex) -> complex:
    res = _series_np(q, np.array([x]), ("dx", "dq"))
    return -complex(res["dq"].values[0]) / complex(res["dx"].values[0])


def track_zero(q_start, q_end, seed, steps: int = 20,
               prec: PrecisionMode | str = PrecisionMode.STANDARD) -> ZeroPath:
    """Follow a zero of theta(q, .) as q moves from ``q_start`` to ``q_end``.

    Tangent predictor dx/dq = -theta_q / theta_x, Newton corrector.  A step
    is rejected (and halved) when the corrector fails or moves the point by
    more than half the predicted displacement.
    """
    qs, qe = _check_real_q(q_start), _check_real_q(q_end)
    if qs == 0 or qe == 0 or (qs > 0) != (qe > 0):
        raise DomainError("q_start and q_end must lie in the same component of (-1,0) u (0,1)")
    if steps < 1:
        raise DomainError("steps must be >= 1")
    first = refine_zero(qs, seed, prec)
    path = [first]
    if qs == qe:
        return ZeroPath(path)
    dq0 = (qe - qs) / steps
    h = dq0
    q, x = qs, first.location
    successes = 0
    while (qe - q) * dq0 > 1e-15:
        if abs(qe - q) < abs(h):
            h = qe - q
        q_new = q + h
        move = h * _dxdq(q, x)
        pred = x + move
        try:
            rec = refine_zero(q_new, pred, prec, source=ZeroSource.CONTINUATION, max_iter=12)
            accepted = abs(rec.location - pred) <= 0.5 * abs(move) + 1e-9 * (1 + abs(pred))
        except (NoConvergenceError, DegenerateError):
            accepted = False
        if not accepted:
            h /= 2
            successes = 0
            if abs(h) < abs(dq0) / 2**10:
                return ZeroPath(path, completed=False,
                                diagnostic=f"corrector failed at q = {q_new:.12g}; step below 2^-10 of initial")
            continue
        path.append(rec)
        q, x = q_new, rec.location
        successes += 1
        if successes >= 2 and abs(2 * h) <= abs(dq0) + 1e-300:
            h *= 2
            successes = 0
    return ZeroPath(path)
