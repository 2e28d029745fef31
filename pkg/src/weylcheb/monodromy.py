"""Two independent engines for the monodromy action of a Chebyshev-like map
on its tree of preimages, plus the comparison between them.

Tree model and conventions (fixed once, used by every module):

* The level-k vertex set is the coroot lattice reduced mod d^k, i.e.
  (Z/d^k Z)^n.  Fiber points over the basepoint correspond to cosets of the
  affine Weyl group by the subgroup of d^k-divisible translations; the label
  of a coset is the translation part of its unique Weyl-trivial
  representative, negated.
* The recorded ("algebraic") action of g = (t, w) at level k is the affine
  action on lattice points reduced mod d^k:  u |-> w(u) + t.  This makes
  g |-> action a homomorphism, a unit coroot translation acts as the
  odometer u |-> u + 1, and loop concatenation "first gamma1 then gamma2"
  composes covariantly (deck elements multiply left to right).
* Path lifting itself moves fiber labels by the action of g^{-1} (right
  cosets are permuted by right multiplication); the direct-lift spot checks
  below verify exactly that, so the bookkeeping is pinned by tests.

The numeric engine lifts a loop once through the generalized cosine, reads
off its deck transformation, and expands it to every level; randomized direct
lifts from other fiber representatives (all of them at level 1) guard the
implementation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, DeckMatchError
from .gencos import (
    LiftSettings,
    PathSample,
    deck_identify,
    eval_gencos,
    is_on_diagram,
    lift_path,
    regular_direction,
)
from .rootsys import (
    AffineElement,
    RootSystem,
    affine_compose,
    dot,
    highest_roots,
    reflection_element,
    translation_element,
    weyl_order_estimate,
)

VERTEX_CAP = 10 ** 5
GROUP_ORDER_CAP = 10 ** 6
GROUP_WORK_CAP = 2 * 10 ** 8  # elements times vertices; keeps closures in RAM
DEFAULT_LOOP_SAMPLES = 257
DEFAULT_EPSILON = 0.1


# ---------------------------------------------------------------------------
# level actions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelAction:
    """A permutation of the level-k vertex set (Z/d^k)^n, stored as an image
    array over mixed-radix encoded vertices: index = sum_j u_j * (d^k)^j."""

    level: int
    d: int
    n: int
    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("not a permutation")

    @property
    def size(self):
        return len(self.perm)

    def compose(self, other: "LevelAction") -> "LevelAction":
        """self after other (matches composing the underlying elements)."""
        p, q = self.perm, other.perm
        return LevelAction(self.level, self.d, self.n,
                           tuple(p[q[i]] for i in range(len(p))))

    def inverse(self) -> "LevelAction":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return LevelAction(self.level, self.d, self.n, tuple(inv))

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.perm))

    def order(self) -> int:
        seen = [False] * len(self.perm)
        ord_ = 1
        for i in range(len(self.perm)):
            if seen[i]:
                continue
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                ln += 1
            ord_ = ord_ * ln // math.gcd(ord_, ln)
        return ord_

    def project(self) -> "LevelAction":
        """The induced permutation one level down (digit truncation)."""
        if self.level <= 1:
            raise ValueError("level-1 actions have no projection")
        m, mm = self.d ** self.level, self.d ** (self.level - 1)
        out = [None] * (mm ** self.n)
        for i, j in enumerate(self.perm):
            u = _decode(i, m, self.n)
            v = _decode(j, m, self.n)
            src = _encode([c % mm for c in u], mm)
            dst = _encode([c % mm for c in v], mm)
            if out[src] is None:
                out[src] = dst
            elif out[src] != dst:
                raise ValueError("action is not projection-compatible")
        return LevelAction(self.level - 1, self.d, self.n, tuple(out))


def _encode(u, m):
    idx = 0
    for j in reversed(range(len(u))):
        idx = idx * m + u[j]
    return idx


def _decode(idx, m, n):
    out = []
    for _ in range(n):
        out.append(idx % m)
        idx //= m
    return tuple(out)


def algebraic_action(g: AffineElement, d: int, k: int,
                     vertex_cap: int = VERTEX_CAP) -> LevelAction:
    """The affine action of g on the coroot lattice reduced mod d^k."""
    if k < 1:
        raise ValueError("level must be >= 1")
    n = g.rank
    m = d ** k
    count = m ** n
    if count > vertex_cap:
        raise CapExceededError(
            f"level {k} has {count} vertices, above cap {vertex_cap}")
    idx = np.arange(count)
    u = np.empty((count, n), dtype=np.int64)
    for j in range(n):
        u[:, j] = (idx // m ** j) % m
    w = np.array(g.w.coroot_matrix, dtype=np.int64)
    v = (u @ w.T + np.array(g.t, dtype=np.int64)) % m
    enc = np.zeros(count, dtype=np.int64)
    for j in reversed(range(n)):
        enc = enc * m + v[:, j]
    return LevelAction(k, d, n, tuple(int(x) for x in enc))


def wreath_digit_step(g: AffineElement, d: int, letter):
    """One digit of the action of g = (t, w): on first letter a, the integer
    vector v = w(a) + t splits as image letter (v mod d) plus d times a carry,
    and the carry becomes the child state's translation:

        g . (a, rest) = (v mod d, (carry, w) . rest)
    """
    letter = tuple(int(c) for c in letter)
    if len(letter) != g.rank:
        raise ValueError("letter has wrong number of digits")
    v = tuple(a + b for a, b in zip(g.w.apply_point(letter), g.t))
    img = tuple(c % d for c in v)
    carry = tuple((c - r) // d for c, r in zip(v, img))
    return img, AffineElement(carry, g.w)


def affine_element_order(g: AffineElement, cap: int = 64):
    """Exact order of an affine Weyl element, or None when infinite."""
    acc = g
    for k in range(1, cap + 1):
        if acc.w.is_identity():
            return k if all(c == 0 for c in acc.t) else None
        acc = affine_compose(acc, g)
    return None  # pragma: no cover - Weyl parts have small order


# ---------------------------------------------------------------------------
# basepoint and loops
# ---------------------------------------------------------------------------

def basepoint(rs: RootSystem):
    """A deterministic regular point in the interior of the fundamental
    alcove, plus its image under the generalized cosine.

    The point sits at 1/(3H) along the chamber-interior direction u given by
    the sum of fundamental weights, H being the largest pairing of u against
    a root; every positive root then pairs into (0, 1/3].
    """
    u = regular_direction(rs)
    h = max(dot(v.weight_coords, u) for v in rs.roots)
    y0 = tuple(Fraction(c, 3 * h) for c in u)
    x0 = eval_gencos(rs, np.array([float(c) for c in y0], dtype=complex))
    return y0, x0


def basepoint_array(rs: RootSystem) -> np.ndarray:
    y0, _ = basepoint(rs)
    return np.array([float(c) for c in y0], dtype=complex)


@dataclass
class Loop:
    """A sampled loop in the target space with equal endpoints, optionally
    labeled by the deck element it was built from."""

    base_x0: np.ndarray
    samples: PathSample
    label: AffineElement | None = None

    def __post_init__(self):
        gap = np.abs(self.samples.points[0] - self.samples.points[-1]).max()
        if gap > 1e-10:
            raise ValueError(f"loop endpoints differ by {gap:.3e}")


def make_generator_loop(rs: RootSystem, g: AffineElement, y0=None,
                        epsilon: float = DEFAULT_EPSILON,
                        num_samples: int = DEFAULT_LOOP_SAMPLES) -> Loop:
    """The image of the straight segment from y0 to g(y0), bent into the
    complex domain by +i*epsilon*sin(pi t) times the regular direction so it
    crosses no wall; its image is a loop with monodromy label g.

    The bump direction is scaled so every root pairs against it in
    [epsilon/H, epsilon]: clearance from the walls without exponential blowup
    of the loop values (H = largest root pairing of the regular direction).
    """
    from .rootsys import affine_apply
    if y0 is None:
        y0 = basepoint_array(rs)
    y0 = np.asarray(y0, dtype=complex)
    y1 = affine_apply(g, y0)
    if np.abs(y1 - y0).max() < 1e-12:
        raise ValueError("generator fixes the basepoint; loop is degenerate")
    u = regular_direction(rs)
    h = max(dot(v.weight_coords, u) for v in rs.roots)
    u = np.array([float(c / h) for c in u])
    ts = np.linspace(0.0, 1.0, num_samples)
    ys = ((1 - ts)[:, None] * y0[None, :] + ts[:, None] * y1[None, :]
          + 1j * epsilon * np.sin(np.pi * ts)[:, None] * u[None, :])
    for i in range(1, len(ts) - 1):
        on, wit = is_on_diagram(rs, ys[i], 1e-9)
        if on:
            raise ValueError(f"generating path touches wall {wit}")
    pts = np.array([eval_gencos(rs, y) for y in ys])
    return Loop(pts[0].copy(), PathSample(ts, pts), label=g)


def concat_loops(l1: Loop, l2: Loop) -> Loop:
    """The loop "first l1, then l2" (deck elements multiply left to right)."""
    if np.abs(l1.base_x0 - l2.base_x0).max() > 1e-9:
        raise ValueError("loops are based at different points")
    t1 = l1.samples.times * 0.5
    t2 = 0.5 + l2.samples.times * 0.5
    times = np.concatenate([t1, t2[1:]])
    points = np.concatenate([l1.samples.points, l2.samples.points[1:]])
    label = None
    if l1.label is not None and l2.label is not None:
        label = affine_compose(l1.label, l2.label)
    return Loop(l1.base_x0, PathSample(times, points), label=label)


def a1_standard_loops(d: int, num_samples: int = DEFAULT_LOOP_SAMPLES):
    """The two standard generating loops of the rank-one target space
    punctured at -2 and +2, based at 0:  +-2(1 - e^{2 pi i s}).

    They are based at 0 rather than at the image of the canonical basepoint;
    lifting starts from the alcove-interior preimage 1/4 of 0, and the real
    connecting segment from the canonical basepoint conjugates the actions
    without changing any deck element, so no extra bookkeeping is needed.
    """
    ts = np.linspace(0.0, 1.0, num_samples)
    circle = 1 - np.exp(2j * np.pi * ts)
    plus = Loop(np.array([0j]), PathSample(ts, (2 * circle)[:, None]))
    minus = Loop(np.array([0j]), PathSample(ts, (-2 * circle)[:, None]))
    return plus, minus


A1_LOOP_BASEPOINT = 0.25  # the alcove-interior preimage of 0


# ---------------------------------------------------------------------------
# numeric engine
# ---------------------------------------------------------------------------

def lift_deck_element(rs: RootSystem, loop: Loop, y_start,
                      settings: LiftSettings | None = None) -> AffineElement:
    """Lift the loop once through the generalized cosine and identify the
    deck transformation carrying the start of the lift to its end."""
    y_start = np.asarray(y_start, dtype=complex)
    lifted = lift_path(rs, loop.samples, y_start, settings)
    return deck_identify(rs, y_start, lifted.points[-1])


def numeric_monodromy(rs: RootSystem, d: int, loop: Loop, levels: int,
                      settings: LiftSettings | None = None,
                      y_start=None, seed: int = 0,
                      spots_per_level: int = 2,
                      vertex_cap: int = VERTEX_CAP):
    """Monodromy level actions of a loop, computed numerically.

    One continuation through the covering determines the deck element, which
    determines every level action.  The result is then spot-verified by
    re-lifting from other fiber representatives: every level-1 vertex, and a
    seeded random sample at deeper levels.  A lift from the representative of
    vertex u starts at y_start - u and must end at ((-u, id) * g)(y_start);
    this is the raw right-coset movement, whose recorded form is the action
    of g itself (see the module conventions).
    """
    if d ** (levels * rs.rank) > vertex_cap:
        raise CapExceededError(
            f"{d ** (levels * rs.rank)} vertices at level {levels}, "
            f"above cap {vertex_cap}")
    if y_start is None:
        y_start = basepoint_array(rs)
    y_start = np.asarray(y_start, dtype=complex)
    if np.abs(eval_gencos(rs, y_start) - loop.base_x0).max() > 1e-8:
        raise ValueError("loop is not based at the image of y_start")

    g = lift_deck_element(rs, loop, y_start, settings)
    actions = [algebraic_action(g, d, k, vertex_cap) for k in range(1, levels + 1)]

    rng = random.Random(seed)
    for k in range(1, levels + 1):
        m = d ** k
        if k == 1:
            vertices = [_decode(i, m, rs.rank) for i in range(m ** rs.rank)]
        else:
            vertices = [_decode(rng.randrange(m ** rs.rank), m, rs.rank)
                        for _ in range(spots_per_level)]
        for u in vertices:
            shift = translation_element(tuple(-c for c in u))
            y_u = y_start - np.array(u)
            # the lift from the shifted representative must see the shifted deck
            y_end = lift_path(rs, loop.samples, y_u, settings).points[-1]
            expected = affine_compose(shift, g)
            got = deck_identify(rs, y_start, y_end)
            if got != expected:
                raise DeckMatchError(
                    f"direct lift at level {k}, vertex {u} disagrees with "
                    f"the deck-element model")
    return actions, g


# ---------------------------------------------------------------------------
# group closure
# ---------------------------------------------------------------------------

def generated_group_order(actions, cap: int = GROUP_ORDER_CAP) -> int:
    """Order of the permutation group generated by the given level actions,
    by breadth-first closure."""
    if not actions:
        return 1
    size = actions[0].size
    ident = tuple(range(size))
    gens = {a.perm for a in actions}
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = tuple(q[p[i]] for i in range(size))
                if r not in elements:
                    elements.add(r)
                    nxt.append(r)
                    if len(elements) > cap:
                        raise CapExceededError(
                            f"group closure exceeded cap {cap}")
        frontier = nxt
    return len(elements)


# ---------------------------------------------------------------------------
# the full verification pipeline
# ---------------------------------------------------------------------------

def standard_affine_generators(rs: RootSystem):
    """The simple reflections plus, per irreducible factor, the reflection in
    the highest-root wall at level 1: together they generate the affine Weyl
    group."""
    gens = [(f"s{j + 1}", reflection_element(rs.simple_roots[j], 0))
            for j in range(rs.rank)]
    for b, theta in enumerate(highest_roots(rs)):
        gens.append((f"a{b}", reflection_element(theta, 1)))
    return gens


@dataclass
class GeneratorReport:
    name: str
    label: AffineElement
    deck: AffineElement
    deck_matches: bool
    numeric: list
    algebraic: list
    levels_equal: list

    @property
    def passed(self):
        return self.deck_matches and all(self.levels_equal)


@dataclass
class MonodromyReport:
    type_spec: str
    d: int
    levels: int
    generators: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    group_orders: list = field(default_factory=list)

    @property
    def passed(self):
        return (all(g.passed for g in self.generators)
                and all(r["holds"] for r in self.relations)
                and all(o["equal"] for o in self.group_orders))

    def as_dict(self):
        return {
            "type_spec": self.type_spec,
            "d": self.d,
            "levels": self.levels,
            "pass": self.passed,
            "generators": [
                {
                    "name": g.name,
                    "label": _affine_dict(g.label),
                    "deck": _affine_dict(g.deck),
                    "deck_matches": g.deck_matches,
                    "levels": [
                        {
                            "level": k + 1,
                            "numeric_perm": list(g.numeric[k].perm),
                            "algebraic_perm": list(g.algebraic[k].perm),
                            "equal": g.levels_equal[k],
                            "order": g.numeric[k].order(),
                        }
                        for k in range(len(g.numeric))
                    ],
                }
                for g in self.generators
            ],
            "relations": self.relations,
            "group_orders": self.group_orders,
        }


def _affine_dict(g: AffineElement):
    return {"t": list(g.t), "w": [list(r) for r in g.w.weight_matrix]}


def check_img_caps(rs: RootSystem, d: int, levels: int,
                   vertex_cap: int = VERTEX_CAP,
                   group_cap: int = GROUP_ORDER_CAP,
                   work_cap: int = GROUP_WORK_CAP):
    """Size the verification before running it; raises CapExceededError with
    the offending estimate."""
    vertices = d ** (levels * rs.rank)
    if vertices > vertex_cap:
        raise CapExceededError(
            f"level {levels} needs {vertices} vertices, above cap {vertex_cap}")
    est_order = weyl_order_estimate(rs) * vertices
    if est_order > group_cap:
        raise CapExceededError(
            f"estimated level-{levels} group order {est_order} above cap "
            f"{group_cap}")
    if est_order * vertices > work_cap:
        raise CapExceededError(
            f"group closure needs ~{est_order} permutations of {vertices} "
            f"vertices ({est_order * vertices} cells), above work cap "
            f"{work_cap}")


def img_verification(rs: RootSystem, d: int, levels: int,
                     settings: LiftSettings | None = None, seed: int = 0,
                     vertex_cap: int = VERTEX_CAP,
                     group_cap: int = GROUP_ORDER_CAP,
                     work_cap: int = GROUP_WORK_CAP) -> MonodromyReport:
    """Verify, at the given depth, that the monodromy action computed by
    path lifting agrees with the affine Weyl action on the tree:

    (a) loops for the standard affine generating set,
    (b) numeric and algebraic level actions equal generator by generator,
    (c) the pairwise reflection relations hold in the permutation images,
    (d) generated permutation-group orders match level by level,
    (e) the deck element recovered from each loop equals its label.
    """
    check_img_caps(rs, d, levels, vertex_cap, group_cap, work_cap)
    report = MonodromyReport(rs.type_spec, d, levels)
    y0 = basepoint_array(rs)
    gens = standard_affine_generators(rs)

    for name, g in gens:
        loop = make_generator_loop(rs, g, y0)
        numeric, deck = numeric_monodromy(rs, d, loop, levels,
                                          settings=settings, y_start=y0,
                                          seed=seed, vertex_cap=vertex_cap)
        algebraic = [algebraic_action(g, d, k, vertex_cap)
                     for k in range(1, levels + 1)]
        equal = [numeric[k].perm == algebraic[k].perm for k in range(levels)]
        report.generators.append(GeneratorReport(
            name, g, deck, deck == g, numeric, algebraic, equal))

    # reflection relations (g_i g_j)^m = id, m the exact affine order
    by_name = {rep.name: rep for rep in report.generators}
    for i, (ni, gi) in enumerate(gens):
        for nj, gj in gens[i:]:
            m = affine_element_order(affine_compose(gi, gj))
            if m is None:
                report.relations.append(
                    {"pair": [ni, nj], "order": None, "holds": True,
                     "note": "infinite order, no relation"})
                continue
            holds = True
            for k in range(levels):
                prod = by_name[ni].numeric[k].compose(by_name[nj].numeric[k])
                acc = prod
                for _ in range(m - 1):
                    acc = acc.compose(prod)
                if not acc.is_identity():
                    holds = False
            report.relations.append({"pair": [ni, nj], "order": m,
                                     "holds": holds})

    for k in range(levels):
        num_order = generated_group_order(
            [rep.numeric[k] for rep in report.generators], group_cap)
        alg_order = generated_group_order(
            [rep.algebraic[k] for rep in report.generators], group_cap)
        report.group_orders.append({"level": k + 1, "numeric": num_order,
                                    "algebraic": alg_order,
                                    "equal": num_order == alg_order})
    return report
