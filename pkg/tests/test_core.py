import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermomaj import (EnergySpectrum, PopulationError, PopulationVector, ThermalContext,
                       check_population, gibbs_state, partition_function, validate_population)
from thermomaj.errors import DomainError, UsageError


def direct_z(energies, beta):
    return math.fsum(math.exp(-beta * e) for e in energies)


def test_partition_function_single_level():
    sp = EnergySpectrum(("x",), [0.0])
    for beta in (0.1, 1.0, 40.0):
        assert partition_function(sp, ThermalContext(beta)) == 1.0


def test_partition_function_rhodopsin(single, pair, ctx):
    assert partition_function(single, ctx) == pytest.approx(1.3328185302238642, abs=1e-12)
    assert partition_function(single, ctx) == pytest.approx(1.3329, abs=1e-4)
    assert partition_function(pair, ctx) == pytest.approx(direct_z(pair.energies, 1.0), abs=1e-12)
    assert partition_function(pair, ctx) == pytest.approx(1.7764052345081016, abs=1e-12)


def test_gibbs_examples(single, ctx):
    assert gibbs_state(EnergySpectrum(("a",), [3.0]), ctx).probs.tolist() == [1.0]
    deg = gibbs_state(EnergySpectrum(("a", "b"), [0.0, 0.0]), ctx)
    assert deg.probs.tolist() == [0.5, 0.5]
    g = gibbs_state(single, ctx)
    np.testing.assert_allclose(g.probs, [0.7502896885985199, 0.0628316786518043,
                                         0.1868786327496758], atol=1e-12)
    np.testing.assert_allclose(g.probs, [0.7503, 0.0628, 0.1869], atol=1e-4)


def test_validate_population_examples(single):
    two = EnergySpectrum(("a", "b"), [0.0, 1.0])
    assert validate_population(PopulationVector([0.3, 0.7, 0.0]), single) is None
    assert "sum > 1" in validate_population(PopulationVector([0.5, 0.6]), two)
    assert "length mismatch" in validate_population(PopulationVector([0.5, 0.5, 0.0]), two)
    assert "outside" in validate_population([1.2, -0.2], two)
    with pytest.raises(PopulationError):
        check_population([0.5, 0.6], two)


def test_spectrum_invariants():
    with pytest.raises(UsageError):
        EnergySpectrum((), [])
    with pytest.raises(UsageError):
        EnergySpectrum(("a", "a"), [0.0, 1.0])
    with pytest.raises(DomainError):
        EnergySpectrum(("a",), [float("inf")])
    with pytest.raises(DomainError):
        ThermalContext(0.0)
    sp = EnergySpectrum(("a", "b"), [0.0, 1.0])
    with pytest.raises(ValueError):
        sp.energies[0] = 5.0


def test_spectrum_json_roundtrip(pair):
    text = pair.to_json()
    assert json.loads(text)["levels"][0] == {"label": "gg", "energy": 0.0}
    assert EnergySpectrum.from_json(text) == pair


energies = st.lists(st.floats(-5, 5), min_size=1, max_size=9)


@settings(max_examples=200, deadline=None)
@given(energies, st.floats(0.05, 10), st.floats(-3, 3))
def test_gibbs_properties(es, beta, shift):
    labels = tuple(f"l{k}" for k in range(len(es)))
    ctx = ThermalContext(beta)
    sp = EnergySpectrum(labels, es)
    g = gibbs_state(sp, ctx)
    assert validate_population(g, sp) is None
    # partition function equals the sum of the Gibbs numerators
    assert partition_function(sp, ctx) == pytest.approx(direct_z(es, beta), rel=1e-12)
    shifted = gibbs_state(EnergySpectrum(labels, [e + shift for e in es]), ctx)
    np.testing.assert_allclose(shifted.probs, g.probs, atol=1e-12)


@given(st.lists(st.floats(0.01, 5), min_size=1, max_size=9), st.floats(0.1, 5), st.floats(0.01, 2))
def test_partition_function_decreasing_in_beta(es, beta, dbeta):
    sp = EnergySpectrum(tuple(f"l{k}" for k in range(len(es))), es)
    assert partition_function(sp, ThermalContext(beta + dbeta)) < partition_function(
        sp, ThermalContext(beta))
