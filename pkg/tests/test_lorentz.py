import numpy as np
import pytest
from hypothesis import given, strategies as st

from modnet.errors import GroupElementError
from modnet.lorentz import (
    CENTER,
    J3_LORENTZ,
    J3_SIGNS,
    METRIC,
    W1,
    W3,
    Poincare,
    Wedge,
    boost,
    boost_lorentz,
    boost_sl2,
    check_su2,
    covering_map,
    is_lorentz,
    j3_conjugate,
    rotation,
    rotation_sl2,
    tilde,
    untilde,
    wedge_stabilizer_generators,
)

from oracles import boost_lorentz_explicit, lorentz_oracle, random_sl2, sl2_expm

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("axis", [1, 2, 3])
def test_lifts_match_matrix_exponential(axis):
    for x in (-2.0, 0.3, 1.7):
        assert np.allclose(boost_sl2(axis, x), sl2_expm("boost", axis, x), atol=1e-13)
        assert np.allclose(rotation_sl2(axis, x), sl2_expm("rotation", axis, x), atol=1e-13)


def test_boost_example():
    _, L = boost(3, 0.7)
    assert np.allclose(L, boost_lorentz_explicit(3, 0.7), atol=1e-13)
    assert np.allclose(boost_lorentz(3, 0.7), L, atol=1e-13)


def test_rotation_turns_plane_clockwise():
    _, L = rotation(3, np.pi / 2)
    assert np.allclose(L @ [0, 1, 0, 0], [0, 0, -1, 0], atol=1e-14)


def test_kernel_is_plus_minus_one():
    assert np.allclose(covering_map(CENTER), np.eye(4))
    assert np.allclose(covering_map(np.eye(2)), np.eye(4))
    _, L = rotation(1, 2 * np.pi)
    assert np.allclose(L, np.eye(4), atol=1e-14)
    assert np.allclose(rotation_sl2(1, 2 * np.pi), CENTER, atol=1e-14)


def test_tilde_round_trip():
    p = np.array([2.0, 0.3, -1.0, 0.5])
    assert np.allclose(untilde(tilde(p)), p)
    assert np.isclose(np.linalg.det(tilde(p)).real, p @ METRIC @ p)


@given(seeds)
def test_covering_map_matches_oracle_and_is_lorentz(seed):
    rng = np.random.default_rng(seed)
    A = random_sl2(rng, scale=0.5)
    L = covering_map(A)
    assert np.allclose(L, lorentz_oracle(A), atol=1e-10 * max(1.0, np.abs(L).max()))
    assert is_lorentz(L)


@given(seeds)
def test_homomorphism(seed):
    rng = np.random.default_rng(seed)
    A, B = random_sl2(rng, 0.5), random_sl2(rng, 0.5)
    LA, LB = covering_map(A), covering_map(B)
    assert np.linalg.norm(covering_map(A @ B) - LA @ LB) <= 1e-10 * max(1.0, np.linalg.norm(LA) * np.linalg.norm(LB))


def test_reflection_relation_on_boosts():
    r = rotation_sl2(1, np.pi)
    for t in np.linspace(-3, 3, 50):
        assert np.linalg.norm(r @ boost_sl2(3, t) @ np.linalg.inv(r) - boost_sl2(3, -t)) <= 1e-12


def test_check_errors():
    with pytest.raises(GroupElementError):
        covering_map(2 * np.eye(2))
    with pytest.raises(GroupElementError):
        check_su2(boost_sl2(1, 1.0))
    with pytest.raises(GroupElementError):
        covering_map(np.eye(3))


def test_j3_conjugation_both_lifts():
    # both lifts of the x0-x3 reflection induce the same automorphism
    assert set(J3_SIGNS) == {1, -1}
    A = boost_sl2(3, 0.4) @ rotation_sl2(3, 0.9)
    B = j3_conjugate(A)
    assert np.allclose(covering_map(B), J3_LORENTZ @ covering_map(A) @ J3_LORENTZ, atol=1e-12)
    for s in J3_SIGNS:
        assert np.allclose(j3_conjugate(s * A), s * B)


# -- Poincare group ------------------------------------------------------------

def test_poincare_composition_and_inverse(rng):
    g = Poincare(random_sl2(rng, 0.4), rng.normal(size=4))
    h = Poincare(random_sl2(rng, 0.4), rng.normal(size=4))
    x = rng.normal(size=4)
    assert np.allclose((g @ h).act(x), g.act(h.act(x)))
    assert np.allclose((g @ g.inverse()).act(x), x)


# -- wedges --------------------------------------------------------------------

def test_membership_examples():
    assert W1.contains([0, 1, 0, 0])
    assert not W1.contains([0, -1, 0, 0])
    assert not W1.contains([2, 1, 0, 0])
    assert W3.contains([0.5, 7, -3, 1])


def test_complement_is_reflected_wedge():
    assert W1.complement().same_as(W1.transform(Poincare(rotation_sl2(2, np.pi))))
    assert W1.complement().contains([0, -1, 0, 0])
    assert W1.complement().complement().same_as(W1)


def test_reflection_element_maps_wedge_to_complement(rng):
    for W in (W1, W3, Wedge(2, random_sl2(rng, 0.3), rng.normal(size=4))):
        r = W.reflection_element()
        assert W.transform(r).same_as(W.complement())
        for x in W.sample_points(rng, 100):
            assert W.contains(x) and W.complement().contains(r.act(x))


def test_stabilizer_fixes_wedge(rng):
    W = Wedge(3, random_sl2(rng, 0.3), rng.normal(size=4))
    gens = wedge_stabilizer_generators(W)
    for g in gens.sample(rng, 5):
        assert W.transform(g).same_as(W, tol=1e-8)
    # translations along the transverse directions fix the wedge
    for d in gens.translations[:2]:
        assert W.transform(Poincare(np.eye(2), 3.0 * d)).same_as(W, tol=1e-8)


def test_transform_consistent_with_fixing_boost(rng):
    g = Poincare(random_sl2(rng, 0.3), rng.normal(size=4))
    W = W3.transform(g)
    direct = g @ W3.fixing_boost(0.8) @ g.inverse()
    x = rng.normal(size=4)
    assert np.allclose(direct.act(x), W.fixing_boost(0.8).act(x), atol=1e-10)
