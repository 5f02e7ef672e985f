import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import ConfigurationError
from dunkl.asymptotics import (AsymptoticProbe, check_constants, check_half_plane, check_heat_ratio, check_ray,
                               constant_from_expansion, constant_from_normalization, half_plane_limit_probe,
                               heat_ratio, opposite_chamber_ratios, ray_limit_probe, short_time_heat_ratio)


@pytest.mark.parametrize("k", [0.25, 0.5, 1.0, 1.5])
def test_two_routes_to_the_constant(k):
    assert constant_from_normalization(k) == pytest.approx(constant_from_expansion(k), rel=1e-10)


def test_constant_frozen_value():
    # Gamma(2)/(2^{1/2} Gamma(3/2)) = sqrt(2/pi)
    assert constant_from_expansion(0.5) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)


def test_k_zero_is_exact():
    probe = AsymptoticProbe.build(0)
    for _, value, target, err in ray_limit_probe(probe, 0.7, 1.3, (50, 100)):
        assert err < 1e-12 and target == pytest.approx(1.0)
    for t in (1e-1, 1e-3):
        assert heat_ratio(probe, t, 1.0, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_ray_values_against_mpmath():
    probe = AsymptoticProbe.build("1/2")
    (t, value, _, _), = ray_limit_probe(probe, 1.0, 1.0, (50,))
    with mpmath.workdps(30):
        s = mpmath.mpf(50)
        want = complex(s ** 0.5 * mpmath.exp(-1j * s) * mpmath.exp(1j * s) * mpmath.hyp1f1(0.5, 2, -2j * s))
    assert abs(value - want) < 1e-12


def test_ray_modulus_target():
    probe = AsymptoticProbe.build("1/2")
    # |v_e| = c_k / c_0 = 2 / sqrt(pi), and sqrt(w(1) w(1)) = sqrt 2
    assert abs(probe.ray_target(1.0, 1.0)) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-12)


def test_ray_errors_shrink_for_larger_k():
    for k in ("1/4", "1", "3/2"):
        assert check_ray(AsymptoticProbe.build(k)).passed


def test_half_plane_and_heat_ratio():
    probe = AsymptoticProbe.build("1")
    assert check_half_plane(probe).passed
    assert check_heat_ratio(probe).passed
    rows = half_plane_limit_probe(probe, 1.0, 1.0, (100,), arc_points=5)
    # for k = 1 the error is 1/(2|z|) to leading order
    assert rows[0][0] == 100 and rows[0][3] == pytest.approx(1 / 200, rel=1e-3)


def test_heat_ratio_rows():
    probe = AsymptoticProbe.build("1/2")
    rows = short_time_heat_ratio(probe, 1.0, 1.0, (1e-1, 1e-2, 1e-3))
    errs = [r[3] for r in rows]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 5e-2


def test_opposite_chambers_do_not_converge():
    probe = AsymptoticProbe.build("1/2")
    ratios = opposite_chamber_ratios(probe)
    assert all(abs(r - 1) > 0.5 for r in ratios)


def test_constants_report():
    assert check_constants().passed


def test_chamber_precondition():
    probe = AsymptoticProbe.build("1/2")
    with pytest.raises(ConfigurationError):
        ray_limit_probe(probe, 1.0, -1.0, (50,))
    with pytest.raises(ConfigurationError):
        AsymptoticProbe.build("-1/2")


def test_heat_ratio_extreme_arguments_stay_finite():
    probe = AsymptoticProbe.build("3/2")
    v = heat_ratio(probe, 1e-4, 2.0, 2.0)
    assert math.isfinite(v) and abs(v - 1) < 1e-3


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["1/4", "1/2", "1", "3/2"]), st.floats(0.5, 2.0))
def test_heat_ratio_tends_to_one(k, x):
    probe = AsymptoticProbe.build(k)
    assert abs(heat_ratio(probe, 1e-3, x, x) - 1) < abs(heat_ratio(probe, 1e-1, x, x) - 1) + 1e-12
