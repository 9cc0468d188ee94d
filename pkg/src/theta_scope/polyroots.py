"""Aberth-Ehrlich simultaneous root finding for polynomials with wide coefficient range.

Coefficients are passed as complex logarithms so that truncations of theta,
whose coefficients q^{j(j+1)/2} underflow double precision long before the
degree gets interesting, can be handled without rescaling tricks.  Each
evaluation p(z) is computed as exp(M) * sum exp(L_j - M) with M the largest
real part of L_j = log c_j + j log z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    # |p(z)| / sum_j |c_j z^j|, a backward-error style residual
    residuals: np.ndarray
    converged: bool
    iterations: int

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)


def log_coefficients(coeffs) -> np.ndarray:
    """Complex logs of ascending coefficients; zero coefficients map to -inf."""
    c = np.asarray(coeffs, dtype=np.complex128)
    with np.errstate(divide="ignore"):
        out = np.log(np.abs(c)) + 1j * np.angle(c)
    out[c == 0] = -np.inf
    return out


def _upper_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    hull: list[int] = []
    for i in range(len(x)):
        if not np.isfinite(y[i]):
            continue
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def initial_guesses(logc: np.ndarray) -> np.ndarray:
    """Starting points on circles read off the Newton polygon of log|c_j|."""
    n = len(logc) - 1
    idx = np.arange(n + 1, dtype=float)
    hull = _upper_hull(idx, logc.real)
    z = np.empty(n, dtype=np.complex128)
    pos = 0
    for a, b in zip(hull[:-1], hull[1:]):
        m = b - a
        # m-th roots of -c_a / c_b, nudged off any symmetry axis
        lead = (logc[a] - logc[b] + 1j * np.pi) / m
        ang = lead.imag + 2 * np.pi * np.arange(m) / m + 0.25
        z[pos:pos + m] = np.exp(lead.real) * np.exp(1j * ang)
        pos += m
    return z


_U = 2.0**-53


def _newton_ratio(logc: np.ndarray, z: np.ndarray):
    """Return p(z)/p'(z), the relative residual and its rounding noise level."""
    j = np.arange(len(logc))
    lz = np.log(z)
    L = logc[None, :] + j[None, :] * lz[:, None]
    finite = np.isfinite(L.real)
    M = np.max(np.where(finite, L.real, -np.inf), axis=1)
    E = np.where(finite, np.exp(L - M[:, None]), 0)
    s0 = E.sum(axis=1)
    s1 = (j[None, :] * E).sum(axis=1)  # z p'(z), scaled
    scale = np.abs(E).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = z * s0 / s1
    # j * log z is the dominant error source for large degree
    noise = _U * (4 * len(logc) + 2 * len(logc) * np.abs(lz) + np.abs(logc[np.isfinite(logc.real)]).max())
    return ratio, np.abs(s0) / scale, noise


def aberth(logc, *, tol: float = 1e-14, max_iter: int = 400, z0=None) -> RootSet:
    """All roots of sum_j exp(logc[j]) z^j.

    Gauss-Seidel sweeps; a root is frozen once its correction drops below
    ``tol`` relative or its residual reaches the evaluation noise level.
    """
    logc = np.asarray(logc, dtype=np.complex128)
    n = len(logc) - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    if not (np.isfinite(logc[0].real) and np.isfinite(logc[-1].real)):
        raise ValueError("leading and constant coefficients must be nonzero")
    if n == 1:
        z = np.array([-np.exp(logc[0] - logc[1])])
        _, res, _ = _newton_ratio(logc, z)
        return RootSet(z, res, True, 0)

    z = initial_guesses(logc) if z0 is None else np.array(z0, dtype=np.complex128)
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        for i in np.flatnonzero(active):
            ratio, res, noise = _newton_ratio(logc, z[i:i + 1])
            ratio, res, noise = ratio[0], res[0], noise[0]
            if res <= 4 * noise:
                active[i] = False
                continue
            d = z[i] - z
            d[i] = np.inf
            # coincident iterates give a non-finite correction; fall back below
            with np.errstate(divide="ignore", invalid="ignore"):
                corr = (1.0 / d).sum()
                w = ratio / (1.0 - ratio * corr)
            if not np.isfinite(w):
                w = ratio if np.isfinite(ratio) else 0.0
            z[i] = z[i] - w
            if abs(w) <= tol * abs(z[i]) and res <= 1e-8:
                active[i] = False
        if not active.any():
            break
    _, res, noise = _newton_ratio(logc, z)
    converged = bool(np.all(res <= np.maximum(64 * noise, 1e-8)))
    return RootSet(z, res, converged, it)
