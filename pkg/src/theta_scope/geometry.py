"""Images of circles under x -> theta(q, x): sampling and shape classification.

The curve is gamma(phi) = theta(q, R e^{i phi}).  Its velocity and
acceleration come from the analytic x-derivatives:

    gamma'  = i R e^{i phi} theta_x
    gamma'' = -R e^{i phi} theta_x - R^2 e^{2 i phi} theta_xx
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core_eval import DomainError, PrecisionMode, evaluate_many

POLE_CLIP = 1e-3
CHORD_FRACTION = 0.02
MAX_TURN = math.radians(10.0)
MAX_POINTS = 1 << 16
CUSP_RATIO = 1e-6
CURVATURE_NOISE = 1e-8


class InconclusiveError(ArithmeticError):
    pass


class BracketError(ValueError):
    """Indicator takes the same value at both ends of the search interval."""


@dataclass
class CurveSample:
    q: float
    radius: float
    phis: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    accelerations: np.ndarray
    curvatures: np.ndarray
    precision: PrecisionMode = PrecisionMode.STANDARD
    # (phi_lo, phi_hi) arcs removed around poles of the closed forms
    clipped: list[tuple[float, float]] = field(default_factory=list)
    max_tail: float = 0.0

    @property
    def closed(self) -> bool:
        return not self.clipped

    def __len__(self) -> int:
        return len(self.phis)

    def runs(self) -> list[np.ndarray]:
        """Index paths along the curve, split wherever an edge spans a clipped arc."""
        n = len(self.phis)
        idx = np.arange(n)
        if not self.clipped or n == 0:
            return [idx]
        nxt = np.roll(idx, -1)
        h = (self.phis[nxt] - self.phis) % (2 * np.pi)
        gaps = np.flatnonzero(_in_arcs((self.phis + h / 2) % (2 * np.pi), self.clipped))
        if not len(gaps):
            return [idx]
        order = np.roll(idx, -(int(gaps[0]) + 1))
        cuts = ((gaps[1:] - gaps[0]) % n)
        return [r for r in np.split(order, cuts) if len(r)]

    def evaluate(self, phis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _curve_eval(self.q, self.radius, np.asarray(phis, dtype=float), self.precision)[:3]


@dataclass(frozen=True)
class CurvatureProfile:
    curvatures: np.ndarray
    inflection_count: int
    inflection_angles: tuple[float, ...]
    cusp_angles: tuple[float, ...] = ()
    degenerate: bool = False
    diagnostics: tuple[str, ...] = ()


@dataclass(frozen=True)
class Crossing:
    phi1: float
    phi2: float
    point: complex


@dataclass(frozen=True)
class AxisCrossings:
    count: int
    angles: tuple[float, ...]
    tangency_suspected: bool = False


@dataclass(frozen=True)
class CurveClassification:
    q: float
    inflection_count: int
    has_cusp_near: float | None
    self_intersections: tuple[Crossing, ...]
    vertical_axis_crossings: int
    is_convex: bool
    surrounds_point_1_0: bool
    min_distance_to_origin: float
    min_re: float
    cusp_indicator: float
    samples: int
    diagnostics: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "inflection_count": self.inflection_count,
            "has_cusp_near": self.has_cusp_near,
            "self_intersections": [
                {"phi1": c.phi1, "phi2": c.phi2, "re": c.point.real, "im": c.point.imag}
                for c in self.self_intersections
            ],
            "vertical_axis_crossings": self.vertical_axis_crossings,
            "is_convex": self.is_convex,
            "surrounds_point_1_0": self.surrounds_point_1_0,
            "min_distance_to_origin": self.min_distance_to_origin,
            "min_re": self.min_re,
            "cusp_indicator": self.cusp_indicator,
            "samples": self.samples,
            "diagnostics": list(self.diagnostics),
        }


# --------------------------------------------------------------------------
# evaluation


def _closed_form_derivs(q: int, x: np.ndarray, phis: np.ndarray | None = None):
    """theta, theta_x, theta_xx at q = +-1.

    With ``phis`` given (points on the unit circle) 1 - x and 1 + x^2 are
    formed from sines and cosines, avoiding the cancellation near the poles.
    """
    if phis is not None:
        one_minus = 2.0 * np.sin(phis / 2) ** 2 - 1j * np.sin(phis)
        one_plus_sq = 2.0 * np.cos(phis) * x
    else:
        one_minus, one_plus_sq = 1.0 - x, 1.0 + x * x
    if q == 1:
        d = one_minus
        return 1.0 / d, 1.0 / d**2, 2.0 / d**3
    num, dnum = one_minus, -1.0
    den, dden, ddden = one_plus_sq, 2.0 * x, 2.0
    f = num / den
    f1 = (dnum * den - num * dden) / den**2
    f2 = (-num * ddden * den - 2.0 * dden * (dnum * den - num * dden)) / den**3
    return f, f1, f2


def _curve_eval(q, radius: float, phis: np.ndarray, prec: PrecisionMode):
    e = np.exp(1j * phis)
    x = radius * e
    if q in (1, -1) and not isinstance(q, bool):
        f, f1, f2 = _closed_form_derivs(int(q), x, phis if radius == 1.0 else None)
        tail = np.zeros(len(phis))
    else:
        res = evaluate_many(q, x, ("value", "dx", "dxx"), prec)
        f, f1, f2 = res["value"].values, res["dx"].values, res["dxx"].values
        tail = res["value"].tails + res["value"].rounds
    g1 = 1j * x * f1
    g2 = -x * f1 - x * x * f2
    return f, g1, g2, tail


def _curvature(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    speed = np.abs(g1)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.imag(np.conj(g1) * g2) / speed**3
    return np.where(speed > 0, k, np.nan)


def _pole_arcs(q) -> list[tuple[float, float]]:
    if q == 1:
        return [(2 * np.pi - POLE_CLIP, POLE_CLIP)]
    if q == -1:
        return [(np.pi / 2 - POLE_CLIP, np.pi / 2 + POLE_CLIP),
                (3 * np.pi / 2 - POLE_CLIP, 3 * np.pi / 2 + POLE_CLIP)]
    return []


def _in_arcs(phis: np.ndarray, arcs) -> np.ndarray:
    mask = np.zeros(len(phis), dtype=bool)
    for lo, hi in arcs:
        if lo > hi:
            mask |= (phis >= lo) | (phis <= hi)
        else:
            mask |= (phis >= lo) & (phis <= hi)
    return mask


def sample_circle_image(q, resolution: int = 512, prec: PrecisionMode | str = PrecisionMode.STANDARD,
                        *, radius: float = 1.0, chord_fraction: float = CHORD_FRACTION,
                        max_turn: float = MAX_TURN, max_points: int = MAX_POINTS) -> CurveSample:
    """Adaptively sampled image of |x| = radius under theta(q, .).

    Arcs are bisected while the chord exceeds ``chord_fraction`` of the
    curve's diameter or the tangent turns by more than ``max_turn``.  For
    q = +-1 the closed forms are used and arcs of width 2e-3 around the poles
    are removed (listed in ``clipped``).
    """
    if resolution < 64:
        raise DomainError("resolution must be >= 64")
    if q not in (1, -1):
        if not -1 < float(q) < 1:
            raise DomainError("q must lie in [-1, 1]")
        q = float(q)
    mode = PrecisionMode.coerce(prec)
    clipped = _pole_arcs(q)
    phis = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    for lo, hi in clipped:
        # add the arc endpoints so the clipped curve ends close to the poles
        phis = np.concatenate([phis, [lo % (2 * np.pi), hi % (2 * np.pi)]])
    phis = np.unique(phis)
    if clipped:
        # drop grid points strictly inside the pole arcs
        inner = [(lo + 1e-15, hi - 1e-15) for lo, hi in clipped]
        phis = phis[~_in_arcs(phis, inner)]
    f, g1, g2, tail = _curve_eval(q, radius, phis, mode)

    diam = float(np.ptp(f.real) + np.ptp(f.imag)) if len(f) else 0.0
    while len(phis) < max_points:
        nxt = np.roll(np.arange(len(phis)), -1)
        h = np.diff(np.append(phis, phis[0] + 2 * np.pi))
        chord = np.abs(f[nxt] - f)
        with np.errstate(divide="ignore", invalid="ignore"):
            turn = np.abs(np.angle(g1[nxt] / g1))
        turn = np.where(np.isfinite(turn), turn, 0.0)
        split = (chord > chord_fraction * diam) | (turn > max_turn)
        mids = phis + h / 2
        if clipped:
            # never bridge a clipped pole arc
            split &= ~_in_arcs(mids % (2 * np.pi), clipped)
            split &= h < np.pi
        split &= h > 1e-12
        if not split.any():
            break
        mids = mids[split] % (2 * np.pi)
        fm, g1m, g2m, tm = _curve_eval(q, radius, mids, mode)
        phis = np.concatenate([phis, mids])
        order = np.argsort(phis, kind="stable")
        phis = phis[order]
        f = np.concatenate([f, fm])[order]
        g1 = np.concatenate([g1, g1m])[order]
        g2 = np.concatenate([g2, g2m])[order]
        tail = np.concatenate([tail, tm])[order]
    return CurveSample(
        q=q, radius=radius, phis=phis, points=f, tangents=g1, accelerations=g2,
        curvatures=_curvature(g1, g2), precision=mode, clipped=clipped,
        max_tail=float(tail.max()) if len(tail) else 0.0,
    )


# --------------------------------------------------------------------------
# curvature and inflections


def curvature_profile(sample: CurveSample) -> CurvatureProfile:
    """Signed curvature and the number of sign changes (inflections).

    Values below 1e-8 max|kappa| are treated as noise and skipped when
    counting sign changes; the count wraps around for closed curves.
    """
    speed = np.abs(sample.tangents)
    if not np.any(speed > 0):
        return CurvatureProfile(np.full(len(sample), np.nan), 0, (), (), True,
                                ("degenerate curve: constant map",))
    diagnostics = []
    mean_speed = float(np.mean(speed))
    cusp_mask = speed < max(CUSP_RATIO * mean_speed, 1e-10)
    cusp_angles = tuple(float(p) for p in sample.phis[cusp_mask])
    if cusp_angles:
        diagnostics.append(f"cusp suspected near phi = {cusp_angles[0]:.12g}")
    k = sample.curvatures
    finite = np.isfinite(k) & ~cusp_mask
    floor = CURVATURE_NOISE * (np.max(np.abs(k[finite])) if finite.any() else 0.0)
    # a straight image has pure rounding noise for curvature; scale by its size
    diam = float(np.ptp(sample.points.real) + np.ptp(sample.points.imag))
    if diam > 0:
        floor = max(floor, 1e-10 / diam)
    significant = finite & (np.abs(k) > floor)
    angles = []
    for run in sample.runs():
        sig = run[significant[run]]
        signs = np.sign(k[sig])
        changes = np.flatnonzero(signs[1:] != signs[:-1])
        angles += [0.5 * (sample.phis[sig[i]] + sample.phis[sig[i + 1]]) for i in changes]
        if sample.closed and len(signs) > 1 and signs[-1] != signs[0]:
            angles.append(float(sample.phis[sig[-1]]))
    return CurvatureProfile(k, len(angles), tuple(float(a) for a in angles), cusp_angles, False,
                            tuple(diagnostics))


# --------------------------------------------------------------------------
# self-intersections


def _segments(sample: CurveSample):
    """Segment endpoints and the angle interval each one spans."""
    p, phis = sample.points, sample.phis
    starts, ends = [], []
    for run in sample.runs():
        starts.append(run[:-1])
        ends.append(run[1:])
        if sample.closed:
            starts.append(run[-1:])
            ends.append(run[:1])
    i0, i1 = np.concatenate(starts), np.concatenate(ends)
    lo = phis[i0]
    hi = np.where(phis[i1] < lo, phis[i1] + 2 * np.pi, phis[i1])
    return p[i0], p[i1], lo, hi


def _segment_hits(a: np.ndarray, b: np.ndarray, closed: bool, chunk: int = 512):
    n = len(a)
    d = b - a
    xmin, xmax = np.minimum(a.real, b.real), np.maximum(a.real, b.real)
    ymin, ymax = np.minimum(a.imag, b.imag), np.maximum(a.imag, b.imag)
    hits = []
    for s in range(0, n, chunk):
        i = np.arange(s, min(n, s + chunk))[:, None]
        j = np.arange(n)[None, :]
        cand = j > i + 1
        if closed:
            cand &= ~((i == 0) & (j == n - 1))
        cand &= (xmin[i] <= xmax[j]) & (xmin[j] <= xmax[i]) & (ymin[i] <= ymax[j]) & (ymin[j] <= ymax[i])
        ii, jj = np.nonzero(cand)
        if not len(ii):
            continue
        ii = ii + s
        r, sd = d[ii], d[jj]
        qp = a[jj] - a[ii]
        den = r.real * sd.imag - r.imag * sd.real
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (qp.real * sd.imag - qp.imag * sd.real) / den
            u = (qp.real * r.imag - qp.imag * r.real) / den
        ok = (den != 0) & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
        hits.extend(zip(ii[ok], jj[ok], t[ok], u[ok]))
    return hits


def _refine_crossing(sample: CurveSample, p1: float, p2: float, tol: float = 1e-10):
    for _ in range(40):
        f, g1, _ = sample.evaluate(np.array([p1, p2]))
        r = f[0] - f[1]
        if abs(r) < tol * 1e-2:
            break
        jac = np.array([[g1[0].real, -g1[1].real], [g1[0].imag, -g1[1].imag]])
        try:
            step = np.linalg.solve(jac, [-r.real, -r.imag])
        except np.linalg.LinAlgError:
            break
        p1 += step[0]
        p2 += step[1]
        if np.hypot(*step) < 1e-15:
            break
    f, _, _ = sample.evaluate(np.array([p1, p2]))
    return p1 % (2 * np.pi), p2 % (2 * np.pi), complex(0.5 * (f[0] + f[1])), abs(f[0] - f[1])


def detect_self_intersections(sample: CurveSample, tol: float = 1e-10) -> list[Crossing]:
    """Transversal self-crossings of the sampled curve, refined by Newton on the two arcs."""
    if len(sample) < 4 or not np.any(np.abs(sample.tangents) > 0):
        return []
    a, b, lo, hi = _segments(sample)
    out: list[Crossing] = []
    for i, j, t, u in _segment_hits(a, b, sample.closed):
        p1 = lo[i] + t * (hi[i] - lo[i])
        p2 = lo[j] + u * (hi[j] - lo[j])
        p1, p2, pt, res = _refine_crossing(sample, p1, p2, tol)
        if res > max(tol, 1e-8 * abs(pt)) * 10:
            continue
        if min(abs(p1 - p2), 2 * np.pi - abs(p1 - p2)) < 1e-9:
            continue
        lo, hi = sorted((p1, p2))
        if any(abs(c.phi1 - lo) < 1e-8 and abs(c.phi2 - hi) < 1e-8 for c in out):
            continue
        out.append(Crossing(float(lo), float(hi), pt))
    return out


# --------------------------------------------------------------------------
# vertical axis


def axis_crossings(sample: CurveSample) -> AxisCrossings:
    """Sign changes of Re(gamma) along the curve, each refined by bisection in phi."""
    re = sample.points.real
    scale = max(1.0, float(np.max(np.abs(sample.points)))) if len(re) else 1.0
    sign = np.where(np.abs(re) <= 1e-12 * scale, 0, np.sign(re))
    angles = []
    tangency = False
    for run in sample.runs():
        path = np.append(run, run[0]) if sample.closed else run
        pos = np.flatnonzero(sign[path] != 0)
        for a, b in zip(pos[:-1], pos[1:]):
            i, j = path[a], path[b]
            if sign[i] == sign[j]:
                # zeros of Re between equal signs: the curve touches the axis
                tangency |= bool(b > a + 1)
                continue
            lo, hi = sample.phis[i], sample.phis[j]
            if hi < lo:
                hi += 2 * np.pi
            flo = re[i]
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                fm = sample.evaluate(np.array([mid]))[0][0].real
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            angles.append(float((0.5 * (lo + hi)) % (2 * np.pi)))
    return AxisCrossings(len(angles), tuple(angles), tangency)


# --------------------------------------------------------------------------
# winding numbers and classification


def winding_numbers(polygon: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Winding number of the closed polygon around each point."""
    a = polygon
    b = np.roll(polygon, -1)
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    out = np.zeros(len(pts), dtype=int)
    chunk = max(1, 2_000_000 // max(1, len(a)))
    for s in range(0, len(pts), chunk):
        p = pts[s:s + chunk, None]
        left = (b.real - a.real) * (p.imag - a.imag) - (p.real - a.real) * (b.imag - a.imag)
        up = (a.imag <= p.imag) & (b.imag > p.imag) & (left > 0)
        down = (a.imag > p.imag) & (b.imag <= p.imag) & (left < 0)
        out[s:s + chunk] = up.sum(axis=1) - down.sum(axis=1)
    return out


def _theta_x_zero_count(q: float, n: int = 4096) -> tuple[int, float]:
    """Zeros of theta_x(q, .) inside the unit disk (sampled winding) and min |theta_x| on the circle."""
    phis = np.linspace(0, 2 * np.pi, n, endpoint=False)
    d = evaluate_many(q, np.exp(1j * phis), ("dx",))["dx"].values
    turns = np.angle(np.roll(d, -1) / d).sum() / (2 * np.pi)
    return int(round(turns)), float(np.min(np.abs(d)))


def classify_image(q, prec: PrecisionMode | str = PrecisionMode.STANDARD,
                   resolution: int = 1024) -> CurveClassification:
    qf = float(q)
    if not -1 < qf < 1:
        raise DomainError("|q| must be < 1")
    sample = sample_circle_image(qf, resolution, prec)
    prof = curvature_profile(sample)
    crossings = tuple(detect_self_intersections(sample))
    axis = axis_crossings(sample)
    wind = winding_numbers(sample.points, np.array([1.0 + 0j]))[0]
    min_dist = float(np.min(np.abs(sample.points))) - sample.max_tail
    diagnostics = list(prof.diagnostics)
    if axis.tangency_suspected:
        diagnostics.append("vertical-axis tangency suspected")
    if prof.degenerate:
        cusp_ind = 0.0
    else:
        cusp_ind = float(np.min(np.abs(sample.tangents)))
    return CurveClassification(
        q=qf,
        inflection_count=prof.inflection_count,
        has_cusp_near=prof.cusp_angles[0] if prof.cusp_angles else None,
        self_intersections=crossings,
        vertical_axis_crossings=axis.count,
        is_convex=(prof.inflection_count == 0 and not crossings and not prof.degenerate),
        surrounds_point_1_0=bool(wind != 0),
        min_distance_to_origin=min_dist,
        min_re=float(np.min(sample.points.real)),
        cusp_indicator=cusp_ind,
        samples=len(sample),
        diagnostics=tuple(diagnostics),
    )


def _outer_contour(sample: CurveSample) -> np.ndarray:
    """The curve with its self-intersection loop removed (shorter arc = loop)."""
    crossings = detect_self_intersections(sample)
    pts = sample.points
    if not crossings:
        return pts
    if len(crossings) > 1:
        raise InconclusiveError("loop excision handles a single self-intersection only")
    c = crossings[0]
    inside = (sample.phis > c.phi1) & (sample.phis < c.phi2)
    seg = np.abs(np.diff(np.append(pts, pts[0])))
    len_in = seg[inside].sum()
    len_out = seg[~inside].sum()
    keep = ~inside if len_in < len_out else inside
    contour = pts[keep]
    if keep is not inside:
        # rotate so the kept arc is contiguous
        start = int(np.searchsorted(sample.phis[keep], c.phi2))
        contour = np.roll(contour, -start)
    return np.concatenate([contour, [c.point]])


def nesting_check(q_inner, q_outer, resolution: int = 1024,
                  prec: PrecisionMode | str = PrecisionMode.STANDARD) -> bool:
    """True iff every sampled point of the inner image is enclosed by the outer one.

    A self-intersecting outer image is first reduced to its outer contour by
    cutting away the loop.
    """
    if float(q_inner) == float(q_outer):
        return True
    inner = sample_circle_image(q_inner, resolution, prec)
    outer = sample_circle_image(q_outer, resolution, prec)
    prof = curvature_profile(outer)
    if prof.cusp_angles:
        raise InconclusiveError("outer curve has an unresolved cusp")
    contour = _outer_contour(outer)
    return bool(np.all(winding_numbers(contour, inner.points) != 0))


# --------------------------------------------------------------------------
# thresholds between shape regimes


@dataclass(frozen=True)
class ThresholdResult:
    feature: str
    q: float
    q_lo: float
    q_hi: float
    indicator_lo: object
    indicator_hi: object
    evaluations: int
    cusp_indicator: float


def _right_inflections(q: float, resolution: int) -> bool:
    s = sample_circle_image(q, resolution)
    prof = curvature_profile(s)
    if not prof.inflection_angles:
        return False
    center = float(np.mean(s.points.real))
    re = s.evaluate(np.array(prof.inflection_angles))[0].real
    return int(np.sum(re > center)) >= 2


FEATURES: dict[str, Callable[[float, int], object]] = {
    "cusp": lambda q, res: _theta_x_zero_count(q)[0],
    "right_inflections": _right_inflections,
    "self_intersection": lambda q, res: bool(detect_self_intersections(sample_circle_image(q, res))),
    "axis_tangency": lambda q, res: axis_crossings(sample_circle_image(q, res)).count,
}


def threshold_search(feature: str, q_lo: float, q_hi: float, tol: float = 1e-6,
                     resolution: int = 512) -> ThresholdResult:
    """Bisection in q for the point where a shape indicator changes.

    ``cusp`` counts zeros of theta_x inside the unit disk: the count changes
    exactly when a zero of theta_x crosses the circle, i.e. when gamma' = 0.
    """
    if feature not in FEATURES:
        raise DomainError(f"unknown feature {feature!r}; choose from {sorted(FEATURES)}")
    ind = FEATURES[feature]
    lo, hi = float(q_lo), float(q_hi)
    f_lo, f_hi = ind(lo, resolution), ind(hi, resolution)
    if f_lo == f_hi:
        raise BracketError(f"{feature} indicator equals {f_lo!r} at both ends")
    evals = 2
    a, b = lo, hi
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        fm = ind(mid, resolution)
        evals += 1
        if fm == f_lo:
            a = mid
        else:
            b = mid
    qstar = 0.5 * (a + b)
    return ThresholdResult(feature, qstar, lo, hi, f_lo, f_hi, evals, _theta_x_zero_count(qstar)[1])


# --------------------------------------------------------------------------
# q = -1 hyperbola


def hyperbola_residual(resolution: int = 4096, clip: float = 0.05) -> float:
    """max |(X - 1/2)^2 - Y^2 - 1/4| over the image of the unit circle at q = -1.

    Points with |cos phi| < ``clip`` (near the poles x = +-i) are skipped.
    """
    from .core_eval import closed_form

    phis = 2 * np.pi * np.arange(resolution) / resolution
    phis = phis[np.abs(np.cos(phis)) >= clip]
    w = closed_form(-1, np.exp(1j * phis))
    X, Y = w.real, w.imag
    # X^2 - X - Y^2 factored for stability far from the centre
    return float(np.max(np.abs((X - Y) * (X + Y) - X)))


# --------------------------------------------------------------------------
# serialisation

CSV_COLUMNS = ("phi", "re", "im", "d_re", "d_im", "curvature")


def sample_to_csv(sample: CurveSample) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for phi, p, t, k in zip(sample.phis, sample.points, sample.tangents, sample.curvatures):
        w.writerow([repr(float(phi)), repr(float(p.real)), repr(float(p.imag)),
                    repr(float(t.real)), repr(float(t.imag)), repr(float(k))])
    return buf.getvalue()


def sample_to_svg(sample: CurveSample, size: int = 600) -> str:
    """A bare SVG document with the curve as one polyline."""
    pts = sample.points
    lo_x, hi_x = float(pts.real.min()), float(pts.real.max())
    lo_y, hi_y = float(pts.imag.min()), float(pts.imag.max())
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    sx = (pts.real - lo_x) / span * (size - 20) + 10
    sy = size - ((pts.imag - lo_y) / span * (size - 20) + 10)
    coords = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(sx, sy))
    tag = "polygon" if sample.closed else "polyline"
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">'
            f'<{tag} points="{coords}" fill="none" stroke="black" stroke-width="1"/></svg>\n')


def classification_to_json(c: CurveClassification) -> str:
    return json.dumps(c.to_dict(), sort_keys=False)
