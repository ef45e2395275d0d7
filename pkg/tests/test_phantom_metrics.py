import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavitypat.grid import BoundarySeries, Grid
from cavitypat.metrics import ErrorReport, l2_norm, line_profile, rel_error, trapezoid_weights
from cavitypat.phantom import BallSpec, add_noise, ball_phantom, ball_value, default_balls, smoothstep, smoothstep_derivative


def test_ball_center_and_outside():
    g = Grid.from_T(2, 33, 1.0)
    spec = BallSpec((0.5, 0.5), 0.2, 1.7, smoothing=0.05)
    f = ball_phantom([spec], g)
    assert f[16, 16] == pytest.approx(1.7)
    assert f[0, 0] == 0.0
    assert ball_value(spec, np.array([[0.5, 0.76]]), 0.05)[0] == 0.0


def test_ball_volume_quadrature():
    g = Grid.from_T(2, 513, 1.0)
    spec = BallSpec((0.5, 0.5), 0.25, 2.0, smoothing=0.004)
    f = ball_phantom([spec], g)
    integral = np.sum(trapezoid_weights(513, 2) * f)
    assert integral == pytest.approx(2.0 * math.pi * 0.25**2, rel=0.02)
    g3 = Grid.from_T(3, 129, 1.0)
    spec3 = BallSpec((0.5, 0.5, 0.5), 0.3, 1.0, smoothing=0.001)
    integral3 = np.sum(trapezoid_weights(129, 3) * ball_phantom([spec3], g3))
    assert integral3 == pytest.approx(4 / 3 * math.pi * 0.3**3, rel=0.02)


def test_default_phantom_range_and_layout():
    for dim in (2, 3):
        g = Grid.from_T(dim, 33, 1.0)
        balls = default_balls(dim)
        f = ball_phantom(balls, g)
        assert f.min() >= 0.0 and f.max() <= sum(b.amplitude for b in balls)
        for b in balls:
            assert sum(abs(c - 0.25) < 1e-12 for c in b.center) >= dim - 1


def test_smoothstep_is_c1():
    u = np.array([-0.5, 0.0, 0.3, 0.5, 1.0, 1.5])
    np.testing.assert_allclose(smoothstep(u), [0, 0, 0.216, 0.5, 1, 1])
    # off-node sample points: central differences against the analytic derivative
    pts = np.linspace(-0.2, 1.2, 141) + 1e-3 / 7
    d = 1e-6
    fd = (smoothstep(pts + d) - smoothstep(pts - d)) / (2 * d)
    np.testing.assert_allclose(fd, smoothstep_derivative(pts), atol=1e-6)


def test_phantom_gradient_is_continuous_across_ramp():
    spec = BallSpec((0.5, 0.5), 0.2, 1.0, smoothing=0.05)
    r = np.linspace(0.12, 0.28, 321) + 1e-4 / 3
    pts = np.stack([0.5 + r, np.full_like(r, 0.5)], axis=-1)
    d = 1e-6
    fd = (ball_value(spec, pts + [d, 0], 0.05) - ball_value(spec, pts - [d, 0], 0.05)) / (2 * d)
    analytic = -smoothstep_derivative((0.2 - r) / 0.05) / 0.05
    np.testing.assert_allclose(fd, analytic, atol=1e-6 / 0.05)


def test_wall_warning_and_bad_specs():
    g = Grid.from_T(2, 17, 1.0)
    with pytest.warns(UserWarning, match="touches"):
        ball_phantom([BallSpec((0.1, 0.5), 0.2)], g)
    with pytest.raises(ValueError):
        BallSpec((0.5, 0.5), -1.0)
    with pytest.raises(ValueError):
        BallSpec((0.5, 0.5), 0.1, smoothing=0.0)
    with pytest.raises(ValueError):
        ball_phantom([], g)
    with pytest.raises(ValueError, match="2D"):
        ball_phantom([BallSpec((0.5, 0.5, 0.5), 0.1)], g)


def _series(rng):
    g = Grid.from_T(2, 9, 1.0)
    return BoundarySeries(g, {t: rng.standard_normal(g.face_shape()) for t in ("X1_0", "X2_0")})


def test_noise_levels(rng):
    g = _series(rng)
    same = add_noise(g, 0.0, seed=1)
    for tag in g.faces:
        np.testing.assert_array_equal(same[tag], g[tag])
    noisy = add_noise(g, 1.0, seed=1)
    assert (noisy - g).norm() / g.norm() == pytest.approx(1.0, abs=1e-12)
    half = add_noise(g, 0.5, seed=2)
    assert (half - g).norm() / g.norm() == pytest.approx(0.5, abs=1e-12)


def test_noise_is_deterministic(rng):
    g = _series(rng)
    a, b = add_noise(g, 1.0, seed=7), add_noise(g, 1.0, seed=7)
    c = add_noise(g, 1.0, seed=8)
    for tag in g.faces:
        np.testing.assert_array_equal(a[tag], b[tag])
    assert not np.array_equal(a["X1_0"], c["X1_0"])
    with pytest.raises(ValueError):
        add_noise(g, -0.1)


def test_rel_error_examples(rng):
    f = rng.uniform(0.5, 1.5, (9, 9))
    assert rel_error(f, f) == 0.0
    assert rel_error(2 * f, f, "l2") == pytest.approx(1.0)
    assert rel_error(2 * f, f, "linf") == pytest.approx(1.0)
    assert rel_error(f + 0.3, f, "linf") == pytest.approx(0.3 / np.max(np.abs(f)))
    with pytest.raises(ZeroDivisionError):
        rel_error(f, np.zeros_like(f))
    with pytest.raises(ValueError, match="norm"):
        rel_error(f, f, "l1")
    with pytest.raises(ValueError, match="shape"):
        rel_error(f, np.ones((5, 5)))


def test_trapezoid_l2_of_constant():
    assert l2_norm(np.full((17, 17, 17), 3.0)) == pytest.approx(3.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_rel_error_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = rng.standard_normal((3, 7, 7))
    ref = rng.standard_normal((7, 7)) + 2.0
    for norm in ("l2", "linf"):
        lhs = rel_error(a - c + ref, ref, norm)
        rhs = rel_error(a - b + ref, ref, norm) + rel_error(b - c + ref, ref, norm)
        assert lhs <= rhs + 1e-12


def test_norm_equivalence_bound(rng):
    # trapezoid weights sum to one, so the relative L2 error is at most (max|f| / |f|_2) times the L-inf one
    f = rng.uniform(0.5, 1.5, (17, 17))
    h = f + rng.standard_normal(f.shape) * 0.1
    assert rel_error(h, f, "l2") <= rel_error(h, f, "linf") * np.max(np.abs(f)) / l2_norm(f) + 1e-15


def test_line_profile_examples():
    n = 17
    x = np.linspace(0, 1, n)
    prof = line_profile(np.full((n, n), 2.0), axis=1)
    np.testing.assert_allclose(prof[:, 1], 2.0)
    phi = np.cos(2 * np.pi * x)[:, None, None] * np.ones((n, n, n))
    prof = line_profile(phi, axis=0, at=(0.25, 0.25))
    np.testing.assert_allclose(prof[:, 0], x)
    np.testing.assert_allclose(prof[:, 1], np.cos(2 * np.pi * x), atol=1e-15)
    with pytest.raises(ValueError, match="grid node"):
        line_profile(phi, 0, (0.3, 0.25))
    with pytest.raises(ValueError, match="axis"):
        line_profile(phi, 3)


def test_line_profile_matches_direct_phantom_evaluation():
    g = Grid.from_T(3, 33, 1.0)
    balls = default_balls(3)
    f = ball_phantom(balls, g)
    prof = line_profile(f, axis=0, at=(0.25, 0.25))
    pts = np.stack([g.x, np.full(33, 0.25), np.full(33, 0.25)], axis=-1)
    direct = sum(ball_value(b, pts, 2 * g.h) for b in balls)
    np.testing.assert_allclose(prof[:, 1], direct, atol=1e-15)


def test_error_report_csv(tmp_path, rng):
    f = rng.uniform(1, 2, (9, 9))
    report = ErrorReport.from_iterates([2 * f, 1.5 * f], f)
    assert report.rel_l2 == pytest.approx(0.5)
    path = tmp_path / "err.csv"
    report.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "iterate,rel_l2,rel_linf"
    assert len(lines) == 3 and lines[1].startswith("0,1")
