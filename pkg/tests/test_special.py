import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl.special import (bessel_j_normalized, hyp1f1, hyp1f1_asymptotic, hyp1f1_series, j_imag_scaled,
                           j_real, rank_one_kernel, rank_one_kernel_1f1, rank_one_kernel_imag,
                           rank_one_kernel_scaled)

# e^{z} 1F1(k, 2k+1, -2z) at 30 digits (mpmath)
KERNEL_VALUES = [
    (0.5, -0.91, 0.7142379248394569529),
    (1.0, 2.25, 3.2901209532658473441),
    (1 / 3, 0.44, 1.3298804149861375049),
    (1.5, -1.08, 0.85584118411996213531),
    (0.0, 0.25, 1.2840254166877414841),
]


@pytest.mark.parametrize("k,z,want", KERNEL_VALUES)
def test_rank_one_kernel_frozen(k, z, want):
    assert rank_one_kernel(k, z) == pytest.approx(want, rel=1e-13)


def test_rank_one_kernel_imaginary_frozen():
    got = rank_one_kernel(0.5, 0.88j)
    assert abs(got - complex(0.81557109586804897381, 0.39876034304350149656)) < 1e-13


def test_k_zero_is_exponential():
    for z in (-2.0, 0.3, 4.0):
        assert rank_one_kernel(0, z) == pytest.approx(math.exp(z), rel=1e-13)
    s = np.linspace(-5, 5, 11)
    assert np.allclose(rank_one_kernel_imag(0, s), np.exp(1j * s), atol=1e-13)


@pytest.mark.parametrize("a,b,z", [(0.75, 2.5, -30.0), (0.5, 2.0, 12 + 3j), (1.25, 3.5, 0.1), (2.0, 5.0, -7.5j)])
def test_hyp1f1_against_mpmath(a, b, z):
    want = complex(mpmath.hyp1f1(a, b, z))
    assert abs(hyp1f1(a, b, z) - want) <= 1e-12 * max(1.0, abs(want))


def test_hyp1f1_large_argument():
    want = complex(mpmath.hyp1f1(0.75, 2.5, 30 + 10j))
    got = hyp1f1(0.75, 2.5, 45 + 10j)
    assert abs(got - complex(mpmath.hyp1f1(0.75, 2.5, 45 + 10j))) <= 1e-10 * abs(got)
    assert abs(hyp1f1(0.75, 2.5, 30 + 10j) - want) <= 1e-10 * abs(want)


@pytest.mark.parametrize("r", [25.0, 28.0, 31.0, 35.0])
@pytest.mark.parametrize("phase", [0.0, 0.6, 1.3])
def test_series_and_expansion_overlap(r, phase):
    z = r * complex(math.cos(phase), math.sin(phase))
    s = hyp1f1_series(0.75, 2.5, z)
    a = hyp1f1_asymptotic(0.75, 2.5, z)
    assert abs(s - a) <= 1e-8 * abs(s)


def test_normalized_bessel_special_cases():
    # j_{-1/2}(z) = cos z,  j_{1/2}(z) = sin z / z
    for z in (0.3, 2.0, 7.5):
        assert bessel_j_normalized(-0.5, z).real == pytest.approx(math.cos(z), abs=1e-14)
        assert bessel_j_normalized(0.5, z).real == pytest.approx(math.sin(z) / z, abs=1e-14)
    s = np.array([0.0, 1e-8, 0.4, 3.0])
    assert np.allclose(j_real(-0.5, s), np.cos(s), atol=1e-14)
    assert np.allclose(j_imag_scaled(-0.5, s), np.cosh(s) * np.exp(-s), atol=1e-14)


def test_scaled_kernel_avoids_overflow():
    v = rank_one_kernel_scaled(0.5, np.array([800.0, -800.0]))
    assert np.all(np.isfinite(v)) and v[0] > 0 and v[1] > 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.25, 0.5, 1.0, 1.5, 2.5]), st.floats(-6, 6))
def test_real_and_1f1_forms_agree(k, u):
    a = rank_one_kernel(k, u)
    b = rank_one_kernel_1f1(k, u)
    assert abs(a - b) <= 1e-11 * max(1.0, abs(b))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.25, 0.5, 1.0, 1.5]), st.floats(-20, 20))
def test_imaginary_axis_bounded_by_one(k, s):
    assert abs(complex(rank_one_kernel_imag(k, s))) <= 1 + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.25, 0.5, 1.0, 1.5]), st.floats(-5, 5))
def test_kernel_positive_on_reals(k, u):
    assert rank_one_kernel(k, u) > 0
