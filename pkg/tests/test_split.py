import numpy as np
import pytest
from hypothesis import given, strategies as st

from modnet.errors import NotPositiveError
from modnet.net import canonical_net
from modnet.split import (
    MassPoint,
    ModularSpectrum,
    classify_growth,
    compose_masses,
    continuum_surrogate,
    factor_check,
    geometric_generator,
    growth_table,
    trace_below_one,
)
from modnet.subspace import RealSubspace, make_standard

spectra = st.lists(st.floats(1e-3, 1e3, allow_nan=False), min_size=1, max_size=20)


def test_trace_examples():
    assert trace_below_one([0.5, 2.0, 0.5]) == 1.0
    assert trace_below_one([1.0, 4.0]) == 1.0
    assert trace_below_one(ModularSpectrum([0.25, 4.0])) == 0.25
    assert np.isclose(trace_below_one([3 - 2 * np.sqrt(2), 3 + 2 * np.sqrt(2)]), 3 - 2 * np.sqrt(2))


def test_non_positive_spectrum_rejected():
    with pytest.raises(NotPositiveError):
        ModularSpectrum([1.0, 0.0])
    with pytest.raises(NotPositiveError):
        geometric_generator(-2.0)


@given(spectra, spectra)
def test_trace_is_additive(a, b):
    sa, sb = ModularSpectrum(a), ModularSpectrum(b)
    assert trace_below_one(sa.union(sb)) == pytest.approx(trace_below_one(sa) + trace_below_one(sb), rel=1e-15)


@given(st.floats(1.01, 10.0), st.integers(1, 6), st.integers(1, 4))
def test_geometric_generator_is_paired(q, levels, mult):
    s = geometric_generator(q, levels, mult)
    assert s.paired()
    assert len(s.eigenvalues) == 2 * levels * mult
    assert trace_below_one(s) == pytest.approx(mult * sum(q ** -k for k in range(1, levels + 1)))


def test_integer_ratio_accepted():
    assert trace_below_one(geometric_generator(2, 2)) == 0.75


def test_model_spectrum_matches_trace():
    net = canonical_net()
    spec = ModularSpectrum.of(net.subspace("W3").delta)
    assert spec.provenance == "model-generated" and spec.paired(tol=1e-8)
    w = np.linalg.eigvalsh(net.subspace("W3").delta)
    assert trace_below_one(spec) == pytest.approx(w[w <= 1].sum())


def test_factor_check_examples():
    assert factor_check(make_standard([[1, 0], [1j, 1]]))       # Delta has no eigenvalue 1
    assert not factor_check(make_standard(np.eye(2)))             # R^2: H' = H
    assert factor_check(RealSubspace.zero(2))


def test_compose_masses_table_and_flags():
    pts = [MassPoint(1.0, 0.5, {"type": "geometric", "q": 2.0, "levels": 1}),
           MassPoint(2.0, 0.5, {"type": "geometric", "q": 4.0, "levels": 1}, multiplicity=9)]
    rep = compose_masses(pts)
    assert rep.table == [(1, 0.5), (2, 0.5 + 9 * 0.25)]
    assert rep.total == pytest.approx(2.75)
    assert rep.verdict == "atomic-like"
    assert rep.multiplicity_flags == [{"mass": 2.0, "multiplicity": 9, "bound": 8}]
    assert rep.to_dict()["paired"]


def test_compose_rejects_bad_points():
    p = MassPoint(1.0, 1.0, {"q": 2.0})
    with pytest.raises(ValueError):
        compose_masses([p, p])
    with pytest.raises(ValueError):
        compose_masses([MassPoint(1.0, 0.0, {"q": 2.0})])
    with pytest.raises(ValueError):
        compose_masses([MassPoint(1.0, 1.0, {"type": "flat"})])


def test_continuum_growth_is_linear():
    table = growth_table("continuum", range(1, 33))
    verdict, c = classify_growth(table)
    assert verdict == "continuum-like divergence" and c == pytest.approx(0.875)
    assert all(t >= n * c - 1e-12 for n, t in table)
    assert table[-1][1] == pytest.approx(28.0)


def test_atomic_growth_is_constant():
    table = growth_table("atomic", range(1, 33))
    assert classify_growth(table) == ("atomic-like", 0.0)
    assert {t for _, t in table} == {1.75}


def test_compose_verdict_counts_points():
    assert compose_masses(continuum_surrogate(5)).verdict == "continuum-like divergence"
    assert compose_masses(continuum_surrogate(2)).verdict == "atomic-like"


def test_classify_inconclusive():
    assert classify_growth([(1, 1.0), (2, 0.5)])[0] == "inconclusive"
