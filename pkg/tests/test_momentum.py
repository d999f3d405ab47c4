import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from modnet.errors import ClosureError, ExcludedOrbitError
from modnet.lorentz import METRIC
from modnet.momentum import (
    MassShellPoint,
    borchers_residuals,
    build_orbit_model,
    from_orbit_coordinates,
    model_from_spec,
    orbit_average,
    orbit_coordinates,
    reflect_decompose,
    reflect_residual,
    standard_model,
)

from oracles import R1_PI, boost_lorentz_explicit, mass_shell


def apply_oracle(p, t, theta):
    """``Lambda_3(t) R_3(theta) p`` with R_3 written out as a clockwise turn."""
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[1, 0, 0, 0], [0, c, s, 0], [0, -s, c, 0], [0, 0, 0, 1]])
    return boost_lorentz_explicit(3, t) @ R @ p


# -- coordinates -----------------------------------------------------------------

def test_orbit_coordinates_example():
    pt = MassShellPoint.from_spatial(1.0, [1.0, 1.0, 0.0])
    r, theta, t = orbit_coordinates(pt)
    assert np.isclose(r, 2.0) and np.isclose(theta, np.pi / 4) and np.isclose(t, 0.0)
    assert np.allclose(from_orbit_coordinates(1.0, r, theta, t), pt.p)


@given(st.sampled_from([0.5, 1.0, 2.0, 0.0]), st.integers(0, 2**32 - 1))
def test_orbit_coordinates_round_trip(m, seed):
    k = np.random.default_rng(seed).normal(scale=2.0, size=3)
    pt = MassShellPoint(m, mass_shell(m, k))
    r, theta, t = orbit_coordinates(pt)
    assert np.allclose(from_orbit_coordinates(m, r, theta, t), pt.p, atol=1e-9 * pt.p[0])


def test_off_shell_rejected():
    with pytest.raises(ValueError):
        MassShellPoint(1.0, [1.0, 1.0, 0.0, 0.0])


def test_excluded_null_orbit():
    for sign in (1.0, -1.0):
        with pytest.raises(ExcludedOrbitError):
            reflect_decompose(MassShellPoint(0.0, [2.0, 0.0, 0.0, sign * 2.0]))
    with pytest.raises(ExcludedOrbitError):
        build_orbit_model([0.0], orbits=[{"r": 0.0, "rapidity_N": 3}])


# -- reflection decomposition -------------------------------------------------

def test_reflect_decompose_example():
    pt = MassShellPoint(1.0, [np.sqrt(3), 1.0, 1.0, 0.0])
    t, theta = reflect_decompose(pt)
    assert np.isclose(theta, np.pi / 2) and np.isclose(t, 0.0)
    assert np.allclose(apply_oracle(pt.p, t, theta), R1_PI @ pt.p, atol=1e-12)


def test_reflect_decompose_on_axis():
    pt = MassShellPoint(1.0, mass_shell(1.0, [0.0, 0.0, 0.6]))
    t, theta = reflect_decompose(pt)
    assert theta == 0.0
    assert reflect_residual(pt, t, theta) <= 1e-12


@given(st.sampled_from([0.0, 0.5, 1.0, 2.0]), st.integers(0, 2**32 - 1))
def test_reflect_decompose_random(m, seed):
    k = np.random.default_rng(seed).normal(scale=3.0, size=3)
    pt = MassShellPoint(m, mass_shell(m, k))
    t, theta = reflect_decompose(pt)
    assert -np.pi < theta <= np.pi
    err = np.linalg.norm(apply_oracle(pt.p, t, theta) - R1_PI @ pt.p)
    assert err <= 1e-9 * max(1.0, pt.p[0])
    assert np.isclose(reflect_residual(pt, t, theta), err, atol=1e-9 * max(1.0, pt.p[0]))


# -- orbit models ----------------------------------------------------------------

def test_standard_model_closure_and_permutations():
    model = standard_model(rapidity_N=8, angle_N=8)
    assert model.dim == 64
    for name in model.element_names():
        U = model.unitary(name)
        assert np.allclose(U @ U.T, np.eye(64))
        assert model.permutation_residual(name) <= 1e-9
    assert np.allclose(model.unitary("center"), np.eye(64))
    # samples lie on the mass shell
    sq = np.einsum("ij,jk,ik->i", model.samples, METRIC, model.samples)
    assert np.allclose(sq, 1.0)


def test_two_masses_are_block_diagonal():
    model = standard_model(masses=(1.0, 2.0), rapidity_N=3, angle_N=4)
    mass_idx = model.labels[:, 0].astype(int)
    for name in model.element_names():
        perm = model.elements[name].perm
        assert np.all(mass_idx[perm] == mass_idx)


def test_multiplicity_replicates_samples():
    m1 = standard_model(rapidity_N=3, angle_N=4)
    m2 = standard_model(multiplicities=[2], rapidity_N=3, angle_N=4)
    assert m2.dim == 2 * m1.dim
    assert np.allclose(m2.samples[: m1.dim], m1.samples)


def test_empty_element_list_gives_base_points():
    model = build_orbit_model([1.0], orbits=[{"r": 1.0, "rapidity_N": 4}])
    assert model.dim == 1 and not model.elements


def test_closure_budget():
    with pytest.raises(ClosureError):
        build_orbit_model([1.0], orbits=[{"r": 1.0, "rapidity_N": 64}],
                          elements=[{"type": "boost", "step": 0.5}], budget=10)


def test_irrational_rotation_exceeds_budget():
    with pytest.raises(ClosureError):
        build_orbit_model([1.0], orbits=[{"r": 1.0, "rapidity_N": 1}],
                          elements=[{"type": "rotation", "angle": 1.0}], budget=200)


def test_model_from_spec_defaults_rotation_angle():
    spec = {"masses": [1.0], "orbits": [{"r": 1.0, "rapidity_N": 3, "angle_N": 4}],
            "elements": ["boost", "rotation", "reflection"]}
    model = model_from_spec(spec)
    assert model.dim == 12
    with pytest.raises(ValueError):
        model_from_spec({"masses": [1.0], "bogus": 1})


def test_translation_is_diagonal_representation(rng):
    model = standard_model(rapidity_N=3, angle_N=4)
    a, b = rng.normal(size=4), rng.normal(size=4)
    assert np.allclose(model.translation(a) @ model.translation(b), model.translation(a + b))


def test_boost_generator_exponentiates_to_boost():
    model = standard_model(rapidity_N=5, angle_N=4)
    K = model.boost_generator()
    assert np.allclose(K, K.conj().T)
    U = expm(1j * model.rapidity_step * K)
    assert np.allclose(U, model.unitary("boost"), atol=1e-12)


def test_borchers_identities_interior():
    model = standard_model(rapidity_N=8, angle_N=4)
    res, count = borchers_residuals(model)
    assert res <= 1e-12 and count > 0


def test_orbit_average_is_constant_on_orbits(rng):
    model = standard_model(masses=(1.0, 2.0), rapidity_N=3, angle_N=4)
    avg = orbit_average(model, rng.normal(size=model.dim))
    labels = np.array(model.orbit_labels())
    for lab in set(map(tuple, labels)):
        vals = avg[np.all(labels == lab, axis=1)]
        assert np.ptp(vals.real) <= 1e-10
