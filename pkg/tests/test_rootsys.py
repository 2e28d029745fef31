"""Exact root system construction, reflections, orbits, and the affine group."""

import random
from fractions import Fraction

import pytest

from weylcheb.errors import CapExceededError, TypeSpecError
from weylcheb.rootsys import (
    AffineElement,
    RootSystem,
    affine_apply,
    affine_compose,
    affine_identity,
    affine_inverse,
    build_root_system,
    dominant_rep,
    orbit,
    positive_roots,
    reflect,
    reflection_element,
    translation_element,
    verify_axioms,
    weyl_group_elements,
    weyl_order_estimate,
)

ROOT_COUNTS = {
    "A1": 2, "A2": 6, "A3": 12, "A4": 20,
    "B2": 8, "B3": 18, "B4": 32,
    "C3": 18, "C4": 32,
    "D4": 24,
    "G2": 12, "F4": 48,
    "E6": 72, "E7": 126, "E8": 240,
    "A1xA1": 4, "B3xA1": 20,
}

WEYL_ORDERS = {
    "A1": 2, "A2": 6, "A3": 24, "A4": 120,
    "B2": 8, "B3": 48, "B4": 384,
    "C3": 48, "C4": 384,
    "D4": 192,
    "G2": 12, "F4": 1152,
    "A1xA1": 4,
}


# --- construction -----------------------------------------------------------

def test_a1_roots():
    rsys = build_root_system("A1")
    assert {v.weight_coords for v in rsys.roots} == {(2,), (-2,)}
    assert rsys.roots[0].coroot_coords == (1,)
    assert rsys.roots[0].length_sq == 2


def test_a2_cartan_and_count():
    rsys = build_root_system("A2")
    assert rsys.cartan == ((2, -1), (-1, 2))
    assert len(rsys.roots) == 6


def test_g2_two_lengths_ratio_sqrt3():
    rsys = build_root_system("G2")
    assert len(rsys.roots) == 12
    lengths = sorted({v.length_sq for v in rsys.roots})
    assert lengths == [2, 6]  # ratio sqrt(3)


@pytest.mark.parametrize("spec,count", sorted(ROOT_COUNTS.items()))
def test_root_counts(spec, count, rs):
    assert len(rs(spec).roots) == count


def test_reducible_block_cartan():
    rsys = build_root_system("A1xA1")
    assert rsys.cartan == ((2, 0), (0, 2))
    assert verify_axioms(rsys).all_pass


@pytest.mark.parametrize("bad", ["Z9", "A0", "B1", "E9", "F2", "G5", "", "xA1"])
def test_bad_specs_rejected(bad):
    with pytest.raises(TypeSpecError):
        build_root_system(bad)


def test_gram_matches_cartan(rs):
    # C[j][k] = (length_sq[k] / 2) * G[j][k], exactly
    for spec in ("A2", "B2", "G2", "F4"):
        rsys = rs(spec)
        for j in range(rsys.rank):
            for k in range(rsys.rank):
                assert rsys.cartan[j][k] == Fraction(rsys.lengths[k], 2) * rsys.gram[j][k]


# --- axioms -----------------------------------------------------------------

@pytest.mark.parametrize("spec", ["A1", "A2", "A3", "B2", "B3", "C3", "D4",
                                  "G2", "F4", "A1xA1", "B3xA1"])
def test_axioms_pass(spec, rs):
    assert verify_axioms(rs(spec)).all_pass


def test_axioms_fail_with_deleted_root():
    rsys = build_root_system("B2")
    broken = RootSystem(rsys.type_spec, rsys.factors, rsys.cartan, rsys.gram,
                        rsys.lengths, rsys.roots[:-1], rsys.simple_root_indices)
    report = verify_axioms(broken)
    closure = next(c for c in report.checks if c.name == "closure")
    assert not closure.passed
    assert closure.witness is not None


# --- reflections ------------------------------------------------------------

def test_reflect_fixes_wall_points():
    rsys = build_root_system("A2")
    v = rsys.roots[0]
    # x with <v, x> = ell stays fixed
    x = (Fraction(1, 2), Fraction(0))
    ell = sum(a * b for a, b in zip(v.weight_coords, x))
    assert reflect(v, ell, x) == x


def test_reflect_is_involution():
    rng = random.Random(0)
    for spec in ("A2", "B2", "G2"):
        rsys = build_root_system(spec)
        for _ in range(20):
            v = rng.choice(rsys.roots)
            ell = rng.randint(-3, 3)
            x = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                      for _ in range(rsys.rank))
            assert reflect(v, ell, reflect(v, ell, x)) == x


def test_reflect_a1_example():
    rsys = build_root_system("A1")
    v = rsys.roots[0]
    assert reflect(v, 0, (Fraction(1, 2),)) == (Fraction(-1, 2),)


# --- Weyl group and orbits --------------------------------------------------

@pytest.mark.parametrize("spec,order", sorted(WEYL_ORDERS.items()))
def test_weyl_group_sizes(spec, order, rs):
    assert len(weyl_group_elements(rs(spec))) == order


def test_weyl_cap_refuses_e6():
    rsys = build_root_system("E6")
    assert weyl_order_estimate(rsys) == 51840
    with pytest.raises(CapExceededError):
        weyl_group_elements(rsys)


def test_weyl_elements_preserve_roots(rs):
    for spec in ("A2", "B2", "G2"):
        rsys = rs(spec)
        root_set = {v.weight_coords for v in rsys.roots}
        for w in weyl_group_elements(rsys):
            assert {w.apply_weight(v) for v in root_set} == root_set


def test_weyl_matrices_integer_invertible(rs):
    for spec in ("A2", "B2", "G2", "F4"):
        for w in weyl_group_elements(rs(spec)):
            winv = w.inverse()
            assert all(isinstance(c, int) for row in winv.coroot_matrix for c in row)
            assert w.compose(winv).is_identity()


def test_orbit_sizes():
    a2 = build_root_system("A2")
    assert len(orbit(a2, (1, 0))) == 3
    assert orbit(a2, (0, 0)) == ((0, 0),)
    a1 = build_root_system("A1")
    assert orbit(a1, (1,)) == ((-1,), (1,))


@pytest.mark.parametrize("spec", ["A1", "A2", "A3", "A4", "B2", "B3", "B4",
                                  "C3", "D4", "G2", "F4"])
def test_regular_orbit_size_is_group_order(spec, rs):
    rsys = rs(spec)
    lam = tuple([1] * rsys.rank)
    assert len(orbit(rsys, lam)) == len(weyl_group_elements(rsys))


def test_orbit_size_divides_group_order(rs):
    rng = random.Random(1)
    for spec in ("A2", "B2", "G2"):
        rsys = rs(spec)
        order = len(weyl_group_elements(rsys))
        for _ in range(10):
            lam = tuple(rng.randint(0, 3) for _ in range(rsys.rank))
            assert order % len(orbit(rsys, lam)) == 0


# --- dominant representatives ------------------------------------------------

def test_dominant_rep_identity_on_dominant():
    a2 = build_root_system("A2")
    lam, w = dominant_rep(a2, (2, 1))
    assert lam == (2, 1)
    assert w.is_identity()


def test_dominant_rep_a2_example():
    a2 = build_root_system("A2")
    lam, w = dominant_rep(a2, (-1, 1))
    assert lam == (1, 0)
    assert w == a2.simple_reflection(0)
    assert w.apply_weight((-1, 1)) == (1, 0)


def test_dominant_rep_property():
    rng = random.Random(2)
    for spec in ("A2", "B2", "G2", "A3"):
        rsys = build_root_system(spec)
        for _ in range(100):
            lam = tuple(rng.randint(-6, 6) for _ in range(rsys.rank))
            dom, w = dominant_rep(rsys, lam)
            assert all(c >= 0 for c in dom)
            assert w.apply_weight(lam) == dom
            assert dom in orbit(rsys, lam)


# --- affine group ------------------------------------------------------------

def test_affine_identity_applies():
    e = affine_identity(2)
    assert affine_apply(e, (Fraction(1, 3), Fraction(2, 7))) == (Fraction(1, 3), Fraction(2, 7))


def test_reflection_factors_through_translation():
    for spec in ("A2", "B2", "G2"):
        rsys = build_root_system(spec)
        for v in rsys.roots:
            for ell in (-2, 1, 3):
                lhs = reflection_element(v, ell)
                rhs = affine_compose(
                    translation_element(tuple(ell * c for c in v.coroot_coords)),
                    reflection_element(v, 0))
                assert lhs == rhs


def test_affine_group_axioms_random_words():
    rng = random.Random(3)
    rsys = build_root_system("B2")
    gens = [reflection_element(v, ell)
            for v in rsys.simple_roots for ell in (0, 1)]
    for _ in range(100):
        g = affine_identity(rsys.rank)
        for _ in range(rng.randint(1, 6)):
            g = affine_compose(g, rng.choice(gens))
        assert affine_compose(g, affine_inverse(g)) == affine_identity(rsys.rank)
        # associativity on a random triple
        a, b, c = (rng.choice(gens) for _ in range(3))
        assert affine_compose(affine_compose(a, b), c) == affine_compose(a, affine_compose(b, c))


def test_affine_apply_matches_reflect():
    rng = random.Random(4)
    rsys = build_root_system("G2")
    for _ in range(50):
        v = rng.choice(rsys.roots)
        ell = rng.randint(-2, 2)
        x = tuple(Fraction(rng.randint(-9, 9), 7) for _ in range(rsys.rank))
        assert affine_apply(reflection_element(v, ell), x) == reflect(v, ell, x)


@pytest.mark.parametrize("spec", ["A1", "A2", "B2"])
def test_affine_generators_reach_coroot_translations(spec):
    # bounded closure over {rho_{v,ell}: v simple or lowest root, ell in {0,1}}
    rsys = build_root_system(spec)
    from weylcheb.rootsys import highest_roots
    theta = highest_roots(rsys)[0]
    lowest = next(v for v in rsys.roots
                  if v.weight_coords == tuple(-c for c in theta.weight_coords))
    gens = [reflection_element(v, ell)
            for v in list(rsys.simple_roots) + [lowest] for ell in (0, 1)]
    targets = {translation_element(tuple(1 if i == k else 0 for i in range(rsys.rank)))
               for k in range(rsys.rank)}
    seen = {affine_identity(rsys.rank)}
    frontier = list(seen)
    for _ in range(8):  # word length bound
        nxt = []
        for g in frontier:
            for s in gens:
                h = affine_compose(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        if targets <= seen:
            break
    assert targets <= seen


def test_positive_roots_half():
    for spec in ("A2", "B2", "G2", "A3"):
        rsys = build_root_system(spec)
        assert len(positive_roots(rsys)) * 2 == len(rsys.roots)
