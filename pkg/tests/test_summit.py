"""Near-summit phase corrections, quadratic actions, and quantization."""
import math

import numpy as np
import pytest
import scipy.special as sp
from scipy.integrate import quad

from quantum_rod.errors import DomainError, InvalidParameterError, RegimeError
from quantum_rod.summit import (
    FIT_GAMMA,
    gamma_phase,
    log_gamma,
    phase_delta,
    quadratic_action,
    summit_action,
    summit_phase,
    summit_phase_difference,
    summit_quantize,
    summit_scale,
    wavepacket_phase,
    wavepacket_phase_derivative,
)

B = 1.0e4
QUARTER_PI = 0.25 * math.pi


def test_log_gamma_against_scipy():
    for z in (complex(0.5, 1.0), complex(0.3, 0.4), complex(2.0, -3.0),
              complex(4.2, 0.0), complex(0.5, -2.5)):
        assert abs(log_gamma(z) - sp.loggamma(z)) < 1e-12


def test_gamma_modulus_identity():
    # |Gamma(1/2 + i*eps)|^2 = pi / cosh(pi*eps).
    for eps in (0.0, 0.5, 1.5, 3.0):
        lhs = 2.0 * log_gamma(complex(0.5, eps)).real
        rhs = math.log(math.pi / math.cosh(math.pi * eps))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-14)


def test_gamma_phase_at_zero_and_antisymmetry():
    gp = gamma_phase(0.0)
    assert gp.exact == 0.0
    assert gp.fit == 0.0
    for eps in (0.7, 2.3):
        plus, minus = gamma_phase(eps), gamma_phase(-eps)
        assert plus.exact == pytest.approx(-minus.exact, rel=1e-12)
        assert plus.fit == pytest.approx(-minus.fit, rel=1e-12)


def test_gamma_phase_fit_quality():
    # The logarithmic fit misses by about 0.012 at worst on |eps| <= 5;
    # the band below pins both the quality and the honesty of the bound.
    errors = [abs(gamma_phase(e).fit_error) for e in np.linspace(-5.0, 5.0, 1001)]
    assert 0.010 < max(errors) < 0.013
    assert abs(gamma_phase(1.0).fit_error) == pytest.approx(
        0.011482013824962, abs=1e-9)


def test_phase_delta_at_zero():
    pc = phase_delta(0.0)
    assert pc.regime == "at-summit"
    assert pc.delta_plus == pytest.approx(math.pi / 8.0, abs=1e-15)
    assert pc.delta_minus == pytest.approx(-math.pi / 8.0, abs=1e-15)
    assert pc.delta_plus - pc.delta_minus == pytest.approx(QUARTER_PI, abs=1e-15)


def test_phase_delta_continuity():
    ref = phase_delta(0.0)
    for h in (1e-12, -1e-12):
        pc = phase_delta(h)
        assert abs(pc.delta_plus - ref.delta_plus) < 1e-9
        assert abs(pc.delta_minus - ref.delta_minus) < 1e-9


def test_phase_delta_asymptotics():
    # Deep below: the even/odd difference is the tunneling exponential.
    low = phase_delta(-3.0)
    assert low.regime == "below-summit"
    assert low.delta_plus - low.delta_minus == pytest.approx(
        math.exp(-3.0 * math.pi), rel=1e-3)
    # Far above: it saturates at pi/2 (a quarter wave per parity).
    high = phase_delta(3.0)
    assert high.regime == "above-summit"
    assert high.delta_plus - high.delta_minus == pytest.approx(
        0.5 * math.pi - math.exp(-3.0 * math.pi), abs=1e-12)
    # Overflow guard for very large arguments.
    assert math.isfinite(phase_delta(500.0).delta_plus)
    with pytest.raises(DomainError):
        phase_delta(math.inf)


def test_wavepacket_phase_slope():
    at_zero = wavepacket_phase_derivative(0.0)
    assert at_zero == pytest.approx(
        0.5 * math.log(4.0 * FIT_GAMMA) + QUARTER_PI, abs=1e-12)
    for eps in (0.0, 0.5, -1.2, 2.0):
        h = 1e-5
        fd = (wavepacket_phase(eps + h) - wavepacket_phase(eps - h)) / (2.0 * h)
        assert wavepacket_phase_derivative(eps) == pytest.approx(fd, rel=1e-8)


def test_quadratic_action_closed_form():
    assert quadratic_action(0.0, 3.0) == 4.5
    for eps, xi in ((1.5, 4.0), (-1.5, 4.0), (0.7, 2.5), (-0.7, 2.5)):
        m = 2.0 * abs(eps)
        if eps > 0.0:
            oracle, _ = quad(lambda t: math.sqrt(m + t * t), 0.0, xi, limit=200)
        else:
            oracle, _ = quad(lambda t: math.sqrt(max(t * t - m, 0.0)),
                             math.sqrt(m), xi, limit=200)
        assert quadratic_action(eps, xi) == pytest.approx(oracle, rel=1e-10)
    with pytest.raises(DomainError):
        quadratic_action(1.0, -0.5)
    with pytest.raises(DomainError):
        quadratic_action(-2.0, 1.0)   # inside the forbidden region


def test_summit_action_asymptotics():
    assert summit_action(0.0, 7.0).asymptotic == summit_action(0.0, 7.0).exact
    for eps in (-2.0, 2.0):
        near = summit_action(eps, 10.0)
        far = summit_action(eps, 100.0)
        assert abs(near.exact - near.asymptotic) < 0.02
        assert abs(far.exact - far.asymptotic) < 2e-4


def test_summit_scale():
    s = summit_scale(B)
    assert s**4 * B == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        summit_scale(0.0)


def test_summit_phase_parity_offset():
    # At E = B the even and odd phases differ by exactly arctan(1) = pi/4.
    diff = summit_phase(B, B, "even") - summit_phase(B, B, "odd")
    assert diff == pytest.approx(QUARTER_PI, abs=1e-12)


def test_summit_phase_warns_on_wide_matching():
    with pytest.warns(UserWarning):
        summit_phase(100.0, 100.0, "even")


def test_summit_quantize_against_spectrum(spectrum_b1e4):
    # The six levels closest to the barrier top at B = 1e4.
    for parity, n in (("odd", 24), ("even", 25), ("odd", 25),
                      ("even", 26), ("odd", 26), ("even", 27)):
        pred = summit_quantize(n, B, parity)
        ref = spectrum_b1e4.level(parity, n).energy
        assert pred == pytest.approx(ref, rel=1e-3)


def test_summit_quantize_rejects_deep_levels():
    with pytest.raises(RegimeError):
        summit_quantize(0, B, "even")


def test_summit_phase_difference_ode():
    # Independent wave-equation route to the pi/4 parity offset.
    assert summit_phase_difference() == pytest.approx(QUARTER_PI, abs=1e-3)
