"""Orbit-sum algebra and exact synthesis of the polynomial maps."""

import random

import numpy as np
import pytest

from weylcheb.chebmap import (
    build_cheb_map,
    compose_poly_maps,
    decompose_to_polynomial,
    eval_poly_map,
    height_vector,
    identity_map,
    monomial_expand,
    orbit_sum_product,
    poly_map_as_dict,
    verify_functional_equation,
)

FULL_MATRIX = [(spec, d) for spec in ("A1", "A2", "B2", "G2", "A3", "A1xA1")
               for d in (2, 3)]


# --- orbit-sum ring -----------------------------------------------------------

def test_orbit_of_zero_is_identity(rs):
    a2 = rs("A2")
    a = {(2, 1): 3, (0, 1): -1}
    assert orbit_sum_product(a2, {(0, 0): 1}, a) == a


def test_a1_square_expansion(rs):
    a1 = rs("A1")
    assert orbit_sum_product(a1, {(1,): 1}, {(1,): 1}) == {(2,): 1, (0,): 2}


def test_product_commutes(rs):
    rng = random.Random(20)
    for spec in ("A2", "B2"):
        rsys = rs(spec)
        for _ in range(10):
            a = {tuple(rng.randint(0, 2) for _ in range(2)): rng.randint(-3, 3)
                 for _ in range(2)}
            b = {tuple(rng.randint(0, 2) for _ in range(2)): rng.randint(-3, 3)
                 for _ in range(2)}
            a = {k: v for k, v in a.items() if v}
            b = {k: v for k, v in b.items() if v}
            assert orbit_sum_product(rsys, a, b) == orbit_sum_product(rsys, b, a)


def test_monomial_expand_base_cases(rs):
    a1 = rs("A1")
    assert monomial_expand(a1, (0,)) == {(0,): 1}
    assert monomial_expand(a1, (2,)) == {(2,): 1, (0,): 2}


@pytest.mark.parametrize("spec", ["A2", "B2"])
def test_monomial_expand_leading_term(spec, rs):
    # triangularity: the expansion of X^e has leading term e with coefficient 1
    rsys = rs(spec)
    rng = random.Random(21)
    cvec = height_vector(rsys)

    def key(lam):
        return (sum(l * c for l, c in zip(lam, cvec)), lam)

    for _ in range(50):
        e = [0] * rsys.rank
        for _ in range(rng.randint(0, 5)):
            e[rng.randrange(rsys.rank)] += 1
        combo = monomial_expand(rsys, tuple(e))
        lead = max(combo, key=key)
        assert lead == tuple(e)
        assert combo[lead] == 1


# --- decomposition -------------------------------------------------------------

def test_decompose_constant(rs):
    a2 = rs("A2")
    assert decompose_to_polynomial(a2, {(0, 0): 1}) == {(0, 0): 1}


def test_decompose_a1(rs):
    a1 = rs("A1")
    assert decompose_to_polynomial(a1, {(2,): 1}) == {(2,): 1, (0,): -2}


def test_decompose_a2_quadratic(rs):
    a2 = rs("A2")
    assert decompose_to_polynomial(a2, {(2, 0): 1}) == {(2, 0): 1, (0, 1): -2}


def test_decompose_substitution_identity(rs):
    # substituting the basic invariants back into the polynomial recovers the
    # target orbit-sum combination, numerically
    from weylcheb.chebmap import eval_poly
    from weylcheb.gencos import eval_gencos
    rng = random.Random(22)
    for spec in ("A2", "G2"):
        rsys = rs(spec)
        target = {(2, 1): 2, (1, 0): -3}
        poly = decompose_to_polynomial(rsys, target)
        for _ in range(10):
            x = np.array([complex(rng.uniform(-1, 1), rng.uniform(-0.2, 0.2))
                          for _ in range(rsys.rank)])
            direct = 0
            for lam, c in target.items():
                from weylcheb.rootsys import orbit
                mat = np.array(orbit(rsys, lam))
                direct += c * np.exp(2j * np.pi * (mat @ x)).sum()
            via_poly = eval_poly(poly, eval_gencos(rsys, x))
            assert abs(direct - via_poly) < 1e-8 * max(1.0, abs(direct))


# --- the maps themselves ---------------------------------------------------------

def test_a1_degree_2_and_3(rs):
    a1 = rs("A1")
    assert build_cheb_map(a1, 2).components == ({(2,): 1, (0,): -2},)
    assert build_cheb_map(a1, 3).components == ({(3,): 1, (1,): -3},)


def test_a2_degree_2_matches_known_pair(rs):
    pmap = build_cheb_map(rs("A2"), 2)
    assert pmap.components == ({(2, 0): 1, (0, 1): -2}, {(0, 2): 1, (1, 0): -2})


def test_degree_one_is_identity(rs):
    assert build_cheb_map(rs("B2"), 1).components == identity_map(2).components


def test_product_type_splits(rs):
    pmap = build_cheb_map(rs("A1xA1"), 3)
    assert pmap.components == ({(3, 0): 1, (1, 0): -3}, {(0, 3): 1, (0, 1): -3})


@pytest.mark.parametrize("spec,d", FULL_MATRIX)
def test_integrality(spec, d, rs):
    pmap = build_cheb_map(rs(spec), d)
    for comp in pmap.components:
        for e, c in comp.items():
            assert type(c) is int and c != 0
            assert all(type(x) is int and x >= 0 for x in e)


# --- evaluation -------------------------------------------------------------------

def test_eval_fixed_point(rs):
    assert eval_poly_map(build_cheb_map(rs("A2"), 2), [3, 3]) == [3, 3]
    assert eval_poly_map(build_cheb_map(rs("A1"), 2), [2]) == [2]


def test_eval_dimension_mismatch(rs):
    from weylcheb.errors import DimensionError
    with pytest.raises(DimensionError):
        eval_poly_map(build_cheb_map(rs("A2"), 2), [1])


# --- functional equation -----------------------------------------------------------

@pytest.mark.parametrize("spec,d", [("A2", 2), ("G2", 2), ("A1xA1", 3)])
def test_functional_equation_smoke(spec, d, rs):
    rsys = rs(spec)
    rep = verify_functional_equation(rsys, d, build_cheb_map(rsys, d),
                                     samples=25, tol=1e-8, seed=0)
    assert rep.passed, rep.max_residual


def test_a1xa1_is_product_map(rs):
    pmap = build_cheb_map(rs("A1xA1"), 3)
    one_dim = build_cheb_map(rs("A1"), 3).components[0]
    lifted_first = {(e[0], 0): c for e, c in one_dim.items()}
    assert pmap.components[0] == lifted_first


# --- composition --------------------------------------------------------------------

def test_compose_with_identity(rs):
    pmap = build_cheb_map(rs("A2"), 2)
    assert compose_poly_maps(pmap, identity_map(2)).components == pmap.components
    assert compose_poly_maps(identity_map(2), pmap).components == pmap.components


def test_a1_semigroup(rs):
    a1 = rs("A1")
    t2 = build_cheb_map(a1, 2)
    comp = compose_poly_maps(t2, t2)
    assert comp.components == ({(4,): 1, (2,): -4, (0,): 2},)
    assert comp.components == build_cheb_map(a1, 4).components
    assert compose_poly_maps(t2, build_cheb_map(a1, 3)).components == \
        build_cheb_map(a1, 6).components


def test_a2_semigroup(rs):
    a2 = rs("A2")
    t2 = build_cheb_map(a2, 2)
    assert compose_poly_maps(t2, t2).components == build_cheb_map(a2, 4).components


# --- serialization -------------------------------------------------------------------

def test_json_ordering_stable(rs):
    a2 = rs("A2")
    d1 = poly_map_as_dict(a2, 2, build_cheb_map(a2, 2))
    d2 = poly_map_as_dict(a2, 2, build_cheb_map(a2, 2))
    assert d1 == d2
    assert d1["components"][0][0] == {"exponents": [2, 0], "coeff": 1}
