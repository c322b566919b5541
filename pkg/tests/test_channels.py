"""Tests for the Kraus channel factories and CPTP validation."""

import math

import numpy as np
import pytest

from noisyvqc.channels import (
    CHANNEL_NAMES,
    KrausChannel,
    amplitude_damping,
    channel_from_name,
    phase_damping,
    phase_flip,
    validate_cptp,
)

FACTORIES = (amplitude_damping, phase_damping, phase_flip)


def test_amplitude_damping_operators():
    ch = amplitude_damping(0.36)
    k0, k1 = ch.operators
    s = math.sqrt(0.64)
    assert np.allclose(k0, [[1, 0], [0, s]], atol=1e-15)
    assert np.allclose(k1, [[0, 0.6], [0, 0]], atol=1e-15)


def test_phase_damping_operators():
    ch = phase_damping(0.36)
    k0, k1 = ch.operators
    assert np.allclose(k0, [[1, 0], [0, math.sqrt(0.64)]], atol=1e-15)
    assert np.allclose(k1, [[0, 0], [0, 0.6]], atol=1e-15)


def test_phase_flip_operators():
    ch = phase_flip(0.25)
    k0, k1 = ch.operators
    s = math.sqrt(0.75)
    assert np.allclose(k0, [[s, 0], [0, s]], atol=1e-15)
    assert np.allclose(k1, [[0.5, 0], [0, -0.5]], atol=1e-15)


@pytest.mark.parametrize("factory", FACTORIES)
def test_cptp_over_probability_grid(factory):
    for i in range(11):
        assert validate_cptp(factory(i / 10), tol=1e-12)


@pytest.mark.parametrize("factory", FACTORIES)
@pytest.mark.parametrize("bad", [-0.1, 1.1, 2.0])
def test_factory_rejects_out_of_range_probability(factory, bad):
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        factory(bad)


def test_channel_names_and_probability_are_stored():
    for factory, name in zip(FACTORIES, CHANNEL_NAMES):
        ch = factory(0.3)
        assert ch.name == name
        assert ch.probability == 0.3


def test_kraus_channel_rejects_bad_probability():
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        KrausChannel("x", 1.5, (np.eye(2),))


def test_kraus_channel_rejects_empty_operators():
    with pytest.raises(ValueError, match="at least one"):
        KrausChannel("x", 0.5, ())


def test_kraus_channel_rejects_wrong_shape():
    with pytest.raises(ValueError, match="2x2"):
        KrausChannel("x", 0.5, (np.eye(3),))


def test_kraus_channel_coerces_operator_dtype():
    ch = KrausChannel("x", 0.0, ([[1, 0], [0, 1]],))
    assert ch.operators[0].dtype == np.complex128


def test_validate_cptp_rejects_incomplete_set():
    # two identity operators sum to 2I, clearly not trace preserving
    bad = KrausChannel("x", 0.0, (np.eye(2), np.eye(2)))
    assert not validate_cptp(bad)


def test_validate_cptp_rejects_negative_tol():
    with pytest.raises(ValueError, match="nonnegative"):
        validate_cptp(phase_flip(0.1), tol=-1e-9)


def test_channel_from_name():
    ch = channel_from_name("amplitude_damping", 0.4)
    assert ch.name == "amplitude_damping"
    assert ch.probability == 0.4
    assert channel_from_name("none", 0.4) is None
    with pytest.raises(ValueError, match="unknown channel"):
        channel_from_name("depolarizing", 0.4)
