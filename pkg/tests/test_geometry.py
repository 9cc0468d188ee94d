import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from theta_scope.core_eval import DomainError, closed_form
from theta_scope.geometry import (
    CSV_COLUMNS,
    BracketError,
    axis_crossings,
    classify_image,
    curvature_profile,
    detect_self_intersections,
    hyperbola_residual,
    nesting_check,
    sample_circle_image,
    sample_to_csv,
    sample_to_svg,
    threshold_search,
    winding_numbers,
)


def test_constant_image():
    s = sample_circle_image(0.0, 64)
    assert np.all(s.points == 1)
    prof = curvature_profile(s)
    assert prof.degenerate and prof.diagnostics
    assert axis_crossings(s).count == 0
    assert detect_self_intersections(s) == []


def test_q_one_line():
    s = sample_circle_image(1, 256)
    assert np.max(np.abs(s.points.real - 0.5)) < 1e-12
    assert s.clipped and not s.closed
    assert curvature_profile(s).inflection_count == 0


def test_q_minus_one_branches():
    s = sample_circle_image(-1, 256)
    assert len(s.runs()) == 2
    assert detect_self_intersections(s) == []


@pytest.mark.parametrize("q", [0.2, 0.7])
def test_positive_q_ovals(q):
    s = sample_circle_image(q)
    assert np.all(s.points.real > 0.5)
    assert axis_crossings(s).count == 0


@pytest.mark.parametrize("q", [0.4, -0.6, -0.85, 1, -1])
def test_sample_contract(q):
    s = sample_circle_image(q, 128)
    n = len(s)
    assert len(s.points) == len(s.tangents) == len(s.curvatures) == n
    assert np.all(np.diff(s.phis) > 0) and s.phis[0] >= 0 and s.phis[-1] < 2 * np.pi
    if s.closed:
        diam = np.ptp(s.points.real) + np.ptp(s.points.imag)
        chords = np.abs(np.diff(np.append(s.points, s.points[0])))
        assert chords.max() <= 0.02 * diam


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.95, 0.95))
def test_conjugation_symmetry(q):
    s = sample_circle_image(q, 256)
    k = np.arange(1, 256)
    phis = 2 * np.pi * k / 256
    a = s.evaluate(phis)[0]
    b = s.evaluate(2 * np.pi - phis)[0]
    assert np.max(np.abs(a - b.conj())) < 1e-13 * max(1, np.max(np.abs(a)))


def test_curvature_of_circle_like_image():
    # for tiny q the image is close to the circle 1 + q x, curvature 1/|q|
    q = 1e-3
    s = sample_circle_image(q, 128)
    assert np.allclose(s.curvatures, 1 / q, rtol=1e-2)


@pytest.mark.parametrize("q,count", [(-0.2, 0), (-0.53, 2), (0.2, 0)])
def test_inflections(q, count):
    assert curvature_profile(sample_circle_image(q)).inflection_count == count


@pytest.mark.parametrize("q,count", [(-0.2, 0), (-0.7, 1), (-0.85, 1)])
def test_self_intersections(q, count):
    crossings = detect_self_intersections(sample_circle_image(q))
    assert len(crossings) == count
    for c in crossings:
        s = sample_circle_image(q, 64)
        f = s.evaluate(np.array([c.phi1, c.phi2]))[0]
        assert abs(f[0] - f[1]) < 1e-10
        # real coefficients: the double point sits on the real axis
        assert abs(c.point.imag) < 1e-10


def test_axis_crossings_at_minus_085():
    ac = axis_crossings(sample_circle_image(-0.85))
    assert ac.count in (0, 2, 4)


@pytest.mark.parametrize("q", [0.2, 0.7, -0.2, -0.53, -0.7, -0.85])
def test_classification_invariants(q):
    c = classify_image(q)
    assert c.is_convex == (c.inflection_count == 0 and not c.self_intersections)
    assert c.min_distance_to_origin > 0
    assert c.surrounds_point_1_0


def test_classification_examples():
    assert classify_image(-0.2).is_convex
    assert not classify_image(-0.7).is_convex
    assert classify_image(0.2).is_convex
    with pytest.raises(DomainError):
        classify_image(1.0)


def test_winding_numbers():
    square = np.array([0, 1, 1 + 1j, 1j])
    assert list(winding_numbers(square, [0.5 + 0.5j, 2, -1j])) == [1, 0, 0]


def test_nesting():
    assert nesting_check(0.2, 0.7)
    assert not nesting_check(0.7, 0.2)
    assert nesting_check(0.4, 0.4)
    assert nesting_check(-0.2, -0.53)


def test_thresholds():
    w = threshold_search("self_intersection", -0.53, -0.7)
    assert 0.53 < -w.q < 0.70
    v = threshold_search("right_inflections", -0.2, -0.53)
    assert 0.20 < -v.q < 0.53
    cusp = threshold_search("cusp", -0.53, -0.7)
    assert abs(cusp.q - w.q) < 1e-3
    assert cusp.cusp_indicator < 1e-3
    with pytest.raises(BracketError):
        threshold_search("self_intersection", -0.2, -0.3)
    with pytest.raises(DomainError):
        threshold_search("no_such_feature", -0.2, -0.3)


def test_hyperbola():
    assert hyperbola_residual(4096) < 1e-12
    for phi, point in [(0.0, 0.0), (np.pi, 1.0)]:
        w = closed_form(-1, np.exp(1j * phi))
        assert abs(w - point) < 1e-15
        assert abs((w.real - 0.5) ** 2 - w.imag**2 - 0.25) < 1e-15


def test_hyperbola_asymptotes():
    eps = np.linspace(1e-4, 4e-3, 50)
    for pole in (np.pi / 2, -np.pi / 2):
        for e in np.concatenate([eps, -eps]):
            w = closed_form(-1, np.exp(1j * (pole + e)))
            if abs(w.real) > 100:
                assert abs(abs(w.imag) / abs(w.real - 0.5) - 1) < 1e-3


def test_wrong_sign_hyperbola_fails():
    phis = np.linspace(0.1, 1.4, 20)
    w = closed_form(-1, np.exp(1j * phis))
    assert np.max(np.abs(w.imag**2 - w.real**2 - w.real)) > 0.1


def test_csv_and_svg():
    s = sample_circle_image(0.3, 64)
    rows = list(csv.reader(io.StringIO(sample_to_csv(s))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(s) + 1
    assert float(rows[1][1]) == s.points[0].real
    svg = sample_to_svg(s)
    assert svg.startswith("<svg") and "<polygon" in svg


def test_resolution_minimum():
    with pytest.raises(DomainError):
        sample_circle_image(0.3, 10)
