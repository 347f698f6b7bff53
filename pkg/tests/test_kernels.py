import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from hermite_ibc.errors import DomainError, ToleranceError
from hermite_ibc.hermite_core import gauss_hermite, hermite_eval, normal_cdf
from hermite_ibc.kernels import (
    KernelEvalOptions, antiderivative_op, kernel_anchored, kernel_anchored_product,
    kernel_anova_integral, kernel_mehler, kernel_series, theta,
)
from hermite_ibc.spectra import SpaceSpec
from hermite_ibc.weights import Constant, FourierWeightSpec, PolyDecay


def space(family, alpha, w, s=1, omega=None):
    return SpaceSpec(FourierWeightSpec(family, alpha, w, omega), s)


EXP = space("exponential", 1, Constant(1.0), omega=0.5)
coords = st.floats(-3, 3)


# ---------------------------------------------------------------------------
# series

def test_series_examples():
    k = kernel_series(space("anova", 1, Constant(1.0)), [0.0], [0.0])
    assert k.value == pytest.approx(1 + math.log(2), abs=1e-9) and k.tail_bound < 1e-9
    assert kernel_series(EXP, [0.0], [0.0]).value == pytest.approx(1 / math.sqrt(0.75), abs=1e-10)


@given(coords, coords)
@settings(max_examples=25)
def test_series_symmetric(x, y):
    sp = space("korobov", 2.0, Constant(0.7))
    a = kernel_series(sp, [x], [y]).value
    b = kernel_series(sp, [y], [x]).value
    assert a == pytest.approx(b, abs=1e-12)


PTS = np.array([[0.0, 0.0], [1.3, -0.4], [1.5, 1.5], [-1.5, 0.7]])


@pytest.mark.parametrize("family, alpha", [("anova", 4), ("korobov", 4.0), ("sobolev", 4), ("exponential", 1)])
def test_tail_certificate_is_sound(family, alpha):
    sp = space(family, alpha, Constant(0.8), omega=0.7 if family == "exponential" else None)
    coarse = kernel_series(sp, PTS[:, :1], PTS[:, 1:], KernelEvalOptions(1e-5, method="direct"))
    fine = kernel_series(sp, PTS[:, :1], PTS[:, 1:], KernelEvalOptions(1e-11, method="direct"))
    assert np.all(np.abs(coarse.value - fine.value) <= coarse.tail_bound + fine.tail_bound)


@pytest.mark.parametrize("family, alpha", [("anova", 3), ("anova", 4), ("korobov", 3.5),
                                           ("sobolev", 3), ("sobolev", 4)])
def test_transform_matches_direct(family, alpha):
    sp = space(family, alpha, Constant(0.9))
    d = kernel_series(sp, PTS[:, :1], PTS[:, 1:], KernelEvalOptions(1e-9, method="direct"))
    t = kernel_series(sp, PTS[:, :1], PTS[:, 1:], KernelEvalOptions(1e-12, method="transform"))
    np.testing.assert_allclose(t.value, d.value, rtol=0, atol=1e-11 + float(np.max(d.tail_bound)))


def test_slow_families_need_transform():
    sp = space("sobolev", 1, Constant(1.0))
    with pytest.raises(ToleranceError):
        kernel_series(sp, [0.5], [0.5], KernelEvalOptions(method="direct", max_degree=5000))
    assert kernel_series(sp, [0.5], [0.5]).method == "transform"


def test_series_product_over_dimensions():
    sp2 = space("anova", 2, PolyDecay(1.0), s=2)
    x, y = np.array([0.3, -1.2]), np.array([1.1, 0.4])
    k1 = kernel_series(SpaceSpec(FourierWeightSpec("anova", 2, Constant(1.0)), 1), x[:1], y[:1]).value
    k2 = kernel_series(SpaceSpec(FourierWeightSpec("anova", 2, Constant(0.5)), 1), x[1:], y[1:]).value
    assert kernel_series(sp2, x, y).value == pytest.approx(k1 * k2, rel=1e-13)
    with pytest.raises(DomainError):
        kernel_series(sp2, x[:1], y[:1])


# ---------------------------------------------------------------------------
# Mehler

def test_mehler_examples():
    assert kernel_mehler(0.5, Constant(1.0), 1, [0.0], [0.0]) == pytest.approx(1.1547005383792517, rel=1e-15)
    assert kernel_mehler(0.9, Constant(1e-12), 1, [2.0], [-1.0]) == pytest.approx(1.0, abs=1e-11)
    with pytest.raises(DomainError):
        kernel_mehler(1.0, Constant(1.0), 1, [0.0], [0.0])


@given(st.floats(0.05, 0.9), coords, coords)
@settings(max_examples=30)
def test_mehler_matches_series(omega, x, y):
    sp = space("exponential", 1, Constant(1.0), omega=omega)
    ser = kernel_series(sp, [x], [y], KernelEvalOptions(1e-12)).value
    assert kernel_mehler(omega, Constant(1.0), 1, [x], [y]) == pytest.approx(ser, abs=1e-10)


# ---------------------------------------------------------------------------
# theta, primitives and the integral form

def test_theta_examples():
    assert theta(1.0, 0.0) == 0.5
    assert theta(0.0, 1.0) == pytest.approx(-0.15865525393145707, rel=1e-14)
    assert theta(-1.0, -2.0) == pytest.approx(0.022750131948179207, rel=1e-14)


@pytest.mark.parametrize("x", [-2.0, -0.3, 0.0, 1.7])
def test_antiderivative_examples(x):
    assert antiderivative_op(lambda t: 1.0, x) == pytest.approx(x, abs=1e-10)
    assert antiderivative_op(lambda t: t, x) == pytest.approx((x * x - 1) / 2, abs=1e-10)
    d = 1e-4
    h = lambda t: math.sin(t)  # noqa: E731
    fd = (antiderivative_op(h, x + d) - antiderivative_op(h, x - d)) / (2 * d)
    assert fd == pytest.approx(math.sin(x), abs=1e-6)


@pytest.mark.parametrize("h", [lambda t: 1.0, lambda t: t, lambda t: hermite_eval(2, t)])
def test_antiderivative_has_zero_mean(h):
    rule = gauss_hermite(40)
    vals = np.array([antiderivative_op(h, float(x)) for x in rule.nodes])
    assert float(rule.weights @ vals) == pytest.approx(0.0, abs=1e-9)


def test_integral_form_alpha_one():
    assert kernel_anova_integral(1, 1.0, 0.0, 0.0) == pytest.approx(1 + math.log(2), abs=1e-6)
    with pytest.raises(DomainError):
        kernel_anova_integral(3, 1.0, 0.0, 0.0)


@pytest.mark.parametrize("x, y", [(0.0, 0.0), (0.7, -1.2), (1.5, 1.5)])
def test_integral_form_alpha_two(x, y):
    sp = space("anova", 2, Constant(0.6))
    ser = kernel_series(sp, [x], [y]).value
    assert kernel_anova_integral(2, 0.6, x, y) == pytest.approx(ser, abs=1e-6)
    assert kernel_anova_integral(2, 0.6, y, x) == pytest.approx(kernel_anova_integral(2, 0.6, x, y), abs=1e-9)


# ---------------------------------------------------------------------------
# anchored

def test_anchored_examples():
    # independent oracle: int_0^1 e^(s^2/2) ds = sqrt(pi/2) erfi(1/sqrt(2))
    ref = 1 + math.sqrt(2 * math.pi) * math.sqrt(math.pi / 2) * float(special.erfi(1 / math.sqrt(2)))
    val, dec = kernel_anchored(1, 1.0, 1.0, 2.0)
    assert val == pytest.approx(ref, abs=1e-12)
    assert val == pytest.approx(3.9953146623311, abs=1e-12)
    assert tuple(kernel_anchored(1, 1.0, 0.0, 0.0)) == (1.0, 0.0)


@given(st.integers(1, 4), st.floats(0.01, 4), st.floats(0.01, 4), st.floats(0.1, 1))
def test_anchored_decomposable_zero_across_origin(alpha, a, b, g):
    val, dec = kernel_anchored(alpha, g, a, -b)
    assert dec == 0.0
    poly = 1 + g * sum((-a * b) ** l / math.factorial(l) ** 2 for l in range(1, alpha))
    assert val == pytest.approx(poly, rel=1e-14)


@given(st.integers(1, 4), coords, coords)
@settings(max_examples=30)
def test_anchored_symmetric(alpha, x, y):
    assert kernel_anchored(alpha, 0.7, x, y).value == pytest.approx(kernel_anchored(alpha, 0.7, y, x).value,
                                                                    rel=1e-12)


def test_anchored_product():
    w = PolyDecay(1.0)
    x, y = [1.0, -0.5], [2.0, 0.3]
    ref = kernel_anchored(2, 1.0, 1.0, 2.0).value * kernel_anchored(2, 0.5, -0.5, 0.3).value
    assert kernel_anchored_product(2, w, x, y) == pytest.approx(ref, rel=1e-15)
