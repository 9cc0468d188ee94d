"""theta(omega, x) at a primitive root of unity omega.

The coefficients omega^{j(j+1)/2} are periodic in j, so theta(omega, .) is a
rational function N(x) / (1 - x^period).  For odd n the period is n; for even
n it is 2n, and the first n coefficients already form an antiperiodic block
(coefficient j + n equals minus coefficient j), giving theta = B(x)/(1 + x^n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_eval import DomainError, PrecisionMode, _series_np
from .polyroots import aberth, log_coefficients
from .zerofinder import NoConvergenceError, ZeroRecord, ZeroSource, refine_zero


class ContradictionError(ArithmeticError):
    """No root strictly inside the unit disk was found."""


@dataclass(frozen=True)
class PrimitiveRoot:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"order must be >= 3, got {self.n}")
        if math.gcd(self.k, self.n) != 1:
            raise DomainError(f"e^(2 pi i {self.k}/{self.n}) is not primitive")

    @property
    def value(self) -> complex:
        return np.exp(2j * np.pi * self.k / self.n)

    def power(self, m: int) -> complex:
        # reduce the exponent first so large j(j+1)/2 stay exact
        return complex(np.exp(2j * np.pi * ((self.k * m) % self.n) / self.n))


@dataclass(frozen=True)
class UnityNumerator:
    root: PrimitiveRoot
    period: int
    coeffs: np.ndarray
    # theta(omega, x) = N(x) / (1 - sign * x^period)
    sign: int = 1

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> complex:
        return np.polynomial.polynomial.polyval(x, self.coeffs)


def _coeffs(root: PrimitiveRoot, length: int) -> np.ndarray:
    return np.array([root.power(j * (j + 1) // 2) for j in range(length)], dtype=np.complex128)


def build_numerator(n: int, k: int) -> UnityNumerator:
    """Numerator P (n odd, period n) or Q (n even, period 2n) of theta(omega, .)."""
    root = PrimitiveRoot(n, k)
    period = n if n % 2 else 2 * n
    num = UnityNumerator(root, period, _coeffs(root, period))
    # periodicity of the exponent sequence, checked on a few periods
    ext = _coeffs(root, 4 * period)
    if np.max(np.abs(ext - np.tile(num.coeffs, 4))) > 1e-13:
        raise ArithmeticError("coefficient sequence is not periodic")  # pragma: no cover
    return num


def antiperiodic_block(n: int, k: int) -> UnityNumerator:
    """First n coefficients for even n; theta(omega, x) = B(x) / (1 + x^n)."""
    if n % 2:
        raise DomainError("the antiperiodic block exists only for even n")
    root = PrimitiveRoot(n, k)
    return UnityNumerator(root, n, _coeffs(root, n), sign=-1)


def check_self_reciprocal(num: UnityNumerator) -> float:
    """max_j |c_j - c_{L-1-j}| over the coefficient vector of length L."""
    c = num.coeffs
    return float(np.max(np.abs(c - c[::-1])))


def numerator_roots(num: UnityNumerator) -> np.ndarray:
    res = aberth(log_coefficients(num.coeffs))
    if not res.converged:
        raise NoConvergenceError("root solver did not converge on the numerator")
    return res.roots


def interior_root(num: UnityNumerator) -> complex:
    """Root of the numerator of smallest modulus; must lie inside the unit disk."""
    roots = numerator_roots(num)
    best = roots[np.argmin(np.abs(roots))]
    if abs(best) >= 1 - 1e-9:
        raise ContradictionError(
            f"no numerator root inside the unit disk for n={num.root.n}, k={num.root.k}"
        )
    return complex(best)


def rational_form_residual(num: UnityNumerator, x, terms: int | None = None) -> float:
    """|sum_j omega^{j(j+1)/2} x^j - N(x) / (1 - sign x^period)| for |x| <= 0.9."""
    x = complex(x)
    if abs(x) >= 1:
        raise DomainError("the direct sum only converges for |x| < 1")
    if abs(x) > 0.9:
        raise DomainError("|x| must be <= 0.9")
    if terms is None:
        # |x|^terms below 1e-18
        terms = 200 if x == 0 else max(200, int(math.ceil(-41.5 / math.log(max(abs(x), 1e-300)))) + 1)
        terms = min(terms, 2000)
    j = np.arange(terms)
    direct = np.sum(_coeffs(num.root, terms) * x**j)
    rational = num(x) / (1 - num.sign * x**num.period)
    return float(abs(direct - rational))


def rouche_neighborhood_zero(n: int, k: int, rho: float, *, use_block: bool | None = None) -> ZeroRecord:
    """Zero of theta(rho * omega, .) near the interior numerator root.

    theta is evaluated at the complex parameter rho * omega with the usual
    certified tail (only |q| enters the tail bound); Newton starts from the
    interior root of the numerator at rho = 1.
    """
    if not 0.9 <= rho < 1:
        raise DomainError("rho must lie in [0.9, 1)")
    if use_block is None:
        use_block = n % 2 == 0
    num = antiperiodic_block(n, k) if use_block else build_numerator(n, k)
    seed = interior_root(num)
    q = complex(rho * num.root.value)
    rec = refine_zero(q, seed, PrecisionMode.STANDARD)
    rec = ZeroRecord(
        q=q, location=rec.location, residual=rec.residual, newton_steps=rec.newton_steps,
        source=ZeroSource.USER_SEED, derivative=rec.derivative, step_history=rec.step_history,
    )
    return rec


def theta_at_complex_q(q: complex, x) -> tuple[complex, float]:
    """theta(q, x) for complex |q| < 1 with its tail bound."""
    if abs(q) >= 1:
        raise DomainError("|q| must be < 1")
    res = _series_np(complex(q), np.array([complex(x)]), ("value",))["value"]
    return complex(res.values[0]), float(res.tails[0])
