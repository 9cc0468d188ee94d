import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from theta_scope.core_eval import DomainError, PrecisionMode, eval_theta, eval_truncation
from theta_scope.zerofinder import (
    CertificateStatus,
    ZeroSource,
    certify_unit_disk,
    count_zeros_in_disk,
    enestrom_kakeya_bound,
    newton_step,
    refine_zero,
    sqrt_disk_bound,
    tail_budget,
    track_zero,
    truncation_roots,
    zero_multiplicity,
)

DEGREE_100_ROOT = 1.209 + 0.511j


def test_linear_truncation():
    rs = truncation_roots(0.5, 1)
    assert rs.roots[0] == pytest.approx(-2)


def test_degree_100_root_present():
    rs = truncation_roots(0.98, 100)
    r = rs.roots[np.argmin(np.abs(rs.roots - DEGREE_100_ROOT))]
    assert abs(r - DEGREE_100_ROOT) < 5e-3 and abs(abs(r) - 1.312) < 5e-3
    # refined against the degree-100 truncation itself
    rec = refine_zero(0.98, r, PrecisionMode.EXTENDED, degree=100)
    assert abs(complex(eval_truncation(0.98, rec.location, 100, PrecisionMode.EXTENDED))) < 1e-10


def test_derivative_at_conjugate_roots():
    """theta_x at the root and at its conjugate are conjugates (real coefficients)."""
    from theta_scope.core_eval import eval_theta_dx

    rs = truncation_roots(0.98, 100)
    up = rs.roots[np.argmin(np.abs(rs.roots - DEGREE_100_ROOT))]
    down = rs.roots[np.argmin(np.abs(rs.roots - DEGREE_100_ROOT.conjugate()))]
    a, b = eval_theta_dx(0.98, up).value, eval_theta_dx(0.98, down).value
    assert abs(a - b.conjugate()) < 1e-8
    assert abs(a.real - 27.180) < 5e-3 and abs(abs(a.imag) - 18.959) < 5e-3
    assert abs(a - oracles.theta_dx(0.98, complex(up), 3000)) < 1e-10


def test_newton_step_on_full_theta_is_tiny():
    rs = truncation_roots(0.98, 100)
    seed = rs.roots[np.argmin(np.abs(rs.roots - DEGREE_100_ROOT))]
    rec = refine_zero(0.98, seed, PrecisionMode.EXTENDED, degree=100)
    step = newton_step(0.98, rec.location_exact, PrecisionMode.EXTENDED)
    assert step < 1e-20


@pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
def test_enestrom_kakeya(q):
    assert abs(enestrom_kakeya_bound(q, 50) - 1 / q) < 1e-12
    assert truncation_roots(q, 50).moduli.min() >= 1 / q - 1e-8


def test_enestrom_kakeya_examples():
    assert enestrom_kakeya_bound(0.5, 10) == pytest.approx(2.0)
    assert enestrom_kakeya_bound(0.99, 3) == pytest.approx(1 / 0.99)
    with pytest.raises(DomainError):
        enestrom_kakeya_bound(-0.5, 10)


def test_truncation_roots_domain():
    with pytest.raises(DomainError):
        truncation_roots(0.0, 10)
    with pytest.raises(DomainError):
        truncation_roots(0.5, 0)


def test_refine_real_zero_near_196():
    rec = refine_zero(-0.4, 2.0)
    assert abs(rec.location - 1.9641527) < 1e-6
    assert rec.residual < 1e-12 and rec.residual_ok()
    assert rec.source is ZeroSource.USER_SEED
    assert zero_multiplicity(rec) == 1


def test_refine_laurent_window():
    rec = refine_zero(0.05, -21)
    assert abs(rec.location.real - (-1 / 0.05 - 1)) < 0.5


def test_residual_contract_in_higher_precision():
    rec = refine_zero(-0.4, 2.0)
    hi = abs(eval_theta(-0.4, rec.location, PrecisionMode.EXTENDED).exact)
    assert float(hi) <= 10 * max(rec.residual, 1e-17)


def test_disk_counts():
    assert count_zeros_in_disk(-0.4, 2.0).winding == 1
    assert count_zeros_in_disk(0.5, 1.9).winding == 0
    c = count_zeros_in_disk(0.98, 1.0, PrecisionMode.EXTENDED)
    assert c.winding == 0 and c.status is CertificateStatus.CERTIFIED


@pytest.mark.parametrize("q", [0.3, -0.3])
def test_unit_disk_small_q(q):
    c = certify_unit_disk(q)
    assert c.certified and c.winding == 0
    assert c.min_modulus_lb >= (1 - 2 * abs(q)) / (1 - abs(q))


def test_unit_disk_near_minus_one():
    c = certify_unit_disk(-0.95)
    assert c.certified and c.winding == 0 and c.min_modulus_lb > 0
    assert c.precision is PrecisionMode.EXTENDED


def test_q_zero_rejected():
    with pytest.raises(DomainError):
        certify_unit_disk(0.0)


def test_counting_consistency_with_truncation():
    q, R, n = -0.4, 3.0, 40
    tb = tail_budget(q, R, n)
    roots = truncation_roots(q, n).roots
    phis = np.linspace(0, 2 * np.pi, 2000, endpoint=False)
    on_circle = min(abs(eval_truncation(q, R * np.exp(1j * p), n)) for p in phis)
    assert tb.t0_bound < on_circle
    assert count_zeros_in_disk(q, R).winding == int(np.sum(np.abs(roots) < R))


def test_sqrt_disk():
    assert 0.185 <= sqrt_disk_bound(0.4) <= 0.20
    assert sqrt_disk_bound(0.1) == pytest.approx(0.67374, abs=1e-5)
    assert sqrt_disk_bound(1e-12) == pytest.approx(1, abs=1e-5)
    with pytest.raises(DomainError):
        sqrt_disk_bound(0.5)


def test_tail_budget():
    tb = tail_budget(0.5, 1, 3)
    assert tb.first_omitted == pytest.approx(0.5**10)
    assert tb.ratio == pytest.approx(32)
    tb = tail_budget(0.98, 1.32, 100)
    assert tb.ratio == pytest.approx(1 / (0.98**102 * 1.32))
    assert tb.t0_bound == pytest.approx(tb.first_omitted / (1 - 1 / tb.ratio))
    # log-domain oracle for the first omitted term, j = 101
    ref = math.exp(5151 * math.log(0.98) + 101 * math.log(1.32))
    assert tb.first_omitted == pytest.approx(ref, rel=1e-10)
    with pytest.raises(DomainError):
        tail_budget(0.5, 1e6, 3)


def test_track_to_real_zero_near_196():
    path = track_zero(-0.05, -0.4, 19.0)
    assert path.completed
    assert abs(path[0].location - 19) < 0.5
    assert abs(path[-1].location - 1.9641527) < 5e-3
    assert all(r.source is ZeroSource.CONTINUATION for r in path.records[1:])


def test_track_smallest_positive_zero_decreases():
    start = refine_zero(-0.5, 1.5).location
    path = track_zero(-0.5, -0.9, start, steps=20)
    locs = [r.location.real for r in path]
    assert path.completed and all(x > 1 for x in locs)
    assert locs[-1] < locs[0]


def test_track_degenerate_path():
    path = track_zero(0.1, 0.1, -11.0, steps=1)
    assert len(path) == 1
    assert path[0].location == refine_zero(0.1, -11.0).location


def test_track_rejects_mixed_signs():
    with pytest.raises(DomainError):
        track_zero(0.3, -0.3, 1.0)


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.2, -0.02))
def test_laurent_start_window(q):
    rec = refine_zero(q, -1 / q - 1)
    assert abs(rec.location - (-1 / q - 1)) < 0.5
