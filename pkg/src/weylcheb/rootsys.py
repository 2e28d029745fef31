"""Exact root systems, Weyl groups, and affine Weyl groups.

Coordinate conventions, used throughout the package:

* Weight-like vectors (roots, orbit members, dominant weights) are stored by
  their coordinates in the fundamental-weight basis.  These are integers.
* Point-like vectors (arguments of the generalized cosine, translations) are
  stored by their coordinates in the simple-coroot basis.  The coroot lattice
  is then literally Z^n.
* With these choices the inner product of a weight lam against a point x is
  the plain dot product dot(lam, x), with no Gram matrix in between, so all
  group algebra stays integer-exact (no radicals even for G2).

The Cartan matrix convention is C[j][k] = 2<a_j, a_k>/<a_j, a_j>, so the
weight coordinates of the k-th simple root form column k of C.  Short roots
are normalized to squared length 2 in every irreducible factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .errors import CapExceededError, DimensionError, TypeSpecError

WEYL_CAP = 1152  # |W(F4)|; full group enumeration refuses beyond this


# ---------------------------------------------------------------------------
# small exact linear algebra over tuples-of-tuples
# ---------------------------------------------------------------------------

def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p))
        for i in range(n)
    )


def mat_vec(a, x):
    return tuple(sum(a[i][j] * x[j] for j in range(len(x))) for i in range(len(a)))


def mat_transpose(a):
    return tuple(tuple(a[j][i] for j in range(len(a))) for i in range(len(a[0])))


def vec_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c, x):
    return tuple(c * a for a in x)


def dot(x, y):
    if len(x) != len(y):
        raise DimensionError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(a * b for a, b in zip(x, y))


def solve_fraction(a, b):
    """Solve a x = b exactly over the rationals (Gaussian elimination)."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * p for v, p in zip(m[r], m[col])]
    return tuple(m[i][n] for i in range(n))


def det_fraction(a):
    """Exact determinant via fraction-free-ish elimination."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [v - f * p for v, p in zip(m[r], m[col])]
    return det


def invert_fraction(a):
    """Exact matrix inverse, returned as tuples of Fractions."""
    n = len(a)
    cols = []
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        cols.append(solve_fraction(a, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# type-spec parsing and Cartan data
# ---------------------------------------------------------------------------

_RANK_LIMITS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}

_WEYL_ORDER_SPECIAL = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


def parse_type_spec(spec: str) -> list[tuple[str, int]]:
    """Parse "B3xA1"-style specs into a list of (letter, rank) factors."""
    if not isinstance(spec, str) or not spec:
        raise TypeSpecError(f"empty type spec: {spec!r}")
    factors = []
    for part in spec.split("x"):
        part = part.strip()
        if len(part) < 2 or part[0] not in _RANK_LIMITS or not part[1:].isdigit():
            raise TypeSpecError(f"cannot parse factor {part!r} in spec {spec!r}")
        letter, rank = part[0], int(part[1:])
        lo, hi = _RANK_LIMITS[letter]
        if rank < lo or (hi is not None and rank > hi):
            raise TypeSpecError(f"unsupported rank {rank} for type {letter}")
        factors.append((letter, rank))
    return factors


def _cartan_and_lengths(letter: str, n: int):
    """Cartan matrix (C[j][k] = 2<a_j,a_k>/<a_j,a_j>) and root lengths for one
    irreducible factor, with short roots of squared length 2."""
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def chain(pairs):
        for i, j in pairs:
            c[i][j] = -1
            c[j][i] = -1

    lengths = [2] * n
    if letter == "A":
        chain((i, i + 1) for i in range(n - 1))
    elif letter == "B":
        chain((i, i + 1) for i in range(n - 1))
        c[n - 1][n - 2] = -2  # last simple root is short
        lengths = [4] * (n - 1) + [2]
    elif letter == "C":
        chain((i, i + 1) for i in range(n - 1))
        c[n - 2][n - 1] = -2  # last simple root is long
        lengths = [2] * (n - 1) + [4]
    elif letter == "D":
        chain((i, i + 1) for i in range(n - 2))
        chain([(n - 3, n - 1)])
    elif letter == "E":
        # chain 0-2-3-4-5(-6)(-7) with node 1 hanging off node 3
        chain([(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)])
        chain((i, i + 1) for i in range(5, n - 1))
    elif letter == "F":
        chain([(0, 1), (2, 3)])
        c[1][2] = -1
        c[2][1] = -2
        lengths = [4, 4, 2, 2]
    elif letter == "G":
        c[0][1] = -3
        c[1][0] = -1
        lengths = [2, 6]
    else:  # pragma: no cover - parse guards this
        raise TypeSpecError(f"unknown type letter {letter!r}")
    return tuple(tuple(row) for row in c), tuple(lengths)


def weyl_order_for_factor(letter: str, n: int) -> int:
    if (letter, n) in _WEYL_ORDER_SPECIAL:
        return _WEYL_ORDER_SPECIAL[(letter, n)]
    fact = 1
    for i in range(2, n + 2):
        fact *= i
    if letter == "A":
        return fact  # (n+1)!
    nfact = fact // (n + 1)
    if letter in ("B", "C"):
        return (2 ** n) * nfact
    if letter == "D":
        return (2 ** (n - 1)) * nfact
    raise TypeSpecError(f"no order formula for {letter}{n}")  # pragma: no cover


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    """A root: its weight coordinates, the coroot's coordinates in the
    simple-coroot basis, and the exact squared length."""

    weight_coords: tuple
    coroot_coords: tuple
    length_sq: int


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as a pair of mutually contragredient integer
    matrices: weight_matrix acts on weight coordinates, coroot_matrix on
    point/coroot coordinates.  weight_matrix^T @ coroot_matrix = I."""

    weight_matrix: tuple
    coroot_matrix: tuple

    def __hash__(self):
        return hash(self.weight_matrix)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.weight_matrix == other.weight_matrix

    @property
    def rank(self):
        return len(self.weight_matrix)

    def apply_weight(self, lam):
        return mat_vec(self.weight_matrix, lam)

    def apply_point(self, x):
        return mat_vec(self.coroot_matrix, x)

    def inverse(self):
        # the contragredient pairing makes inversion a double transpose
        return WeylElement(mat_transpose(self.coroot_matrix),
                           mat_transpose(self.weight_matrix))

    def compose(self, other):
        return WeylElement(mat_mul(self.weight_matrix, other.weight_matrix),
                           mat_mul(self.coroot_matrix, other.coroot_matrix))

    def is_identity(self):
        return self.weight_matrix == identity_matrix(self.rank)


def weyl_identity(n: int) -> WeylElement:
    eye = identity_matrix(n)
    return WeylElement(eye, eye)


@dataclass(frozen=True)
class AffineElement:
    """Element (t, w) of the affine Weyl group: x |-> w(x) + t, with t an
    integer vector in coroot coordinates."""

    t: tuple
    w: WeylElement

    def __hash__(self):
        return hash((self.t, self.w.weight_matrix))

    @property
    def rank(self):
        return len(self.t)

    def is_identity(self):
        return all(c == 0 for c in self.t) and self.w.is_identity()


def affine_identity(n: int) -> AffineElement:
    return AffineElement(tuple([0] * n), weyl_identity(n))


def translation_element(tvec) -> AffineElement:
    tvec = tuple(tvec)
    return AffineElement(tvec, weyl_identity(len(tvec)))


def affine_apply(g: AffineElement, x):
    """Apply g = (t, w) to a point x in coroot coordinates: w(x) + t.

    Works on exact (int/Fraction) sequences and on numpy arrays.
    """
    try:
        import numpy as np
        if isinstance(x, np.ndarray):
            m = np.array(g.w.coroot_matrix)
            return m @ x + np.array(g.t)
    except ImportError:  # pragma: no cover
        pass
    if len(x) != g.rank:
        raise DimensionError(f"point has length {len(x)}, expected {g.rank}")
    return vec_add(g.w.apply_point(tuple(x)), g.t)


def affine_compose(g1: AffineElement, g2: AffineElement) -> AffineElement:
    """(t1, w1)(t2, w2) = (t1 + w1 t2, w1 w2)."""
    return AffineElement(vec_add(g1.t, g1.w.apply_point(g2.t)), g1.w.compose(g2.w))


def affine_inverse(g: AffineElement) -> AffineElement:
    winv = g.w.inverse()
    return AffineElement(vec_scale(-1, winv.apply_point(g.t)), winv)


def reflection_element(v: Root, ell: int = 0) -> AffineElement:
    """The affine reflection fixing the wall <v, x> = ell, as an AffineElement.

    Equals translation by ell * v_coroot composed with the linear reflection.
    """
    n = len(v.weight_coords)
    wm = tuple(
        tuple((1 if i == m else 0) - v.weight_coords[i] * v.coroot_coords[m]
              for m in range(n))
        for i in range(n)
    )
    cm = tuple(
        tuple((1 if i == m else 0) - v.coroot_coords[i] * v.weight_coords[m]
              for m in range(n))
        for i in range(n)
    )
    return AffineElement(vec_scale(ell, v.coroot_coords), WeylElement(wm, cm))


# ---------------------------------------------------------------------------
# the RootSystem container
# ---------------------------------------------------------------------------

class RootSystem:
    """Exact data of a (possibly reducible) root system.

    Instances are immutable by convention; every derived table (orbits, Weyl
    elements, orbit-sum expansions) is cached on the instance and safe for
    concurrent readers.
    """

    def __init__(self, type_spec, factors, cartan, gram, lengths, roots,
                 simple_root_indices):
        self.type_spec = type_spec
        self.factors = factors            # list of (letter, rank, offset)
        self.rank = len(cartan)
        self.cartan = cartan              # integer, column k = weight coords of a_k
        self.gram = gram                  # Fraction, <a_j^vee, a_k^vee>
        self.lengths = lengths            # squared lengths of simple roots
        self.roots = roots                # tuple of Root
        self.simple_root_indices = simple_root_indices
        self._orbit_cache = {}
        self._weyl_cache = None
        self._expand_cache = {}
        self._orbit_matrix_cache = {}

    def __repr__(self):
        return f"RootSystem({self.type_spec!r}, rank={self.rank}, roots={len(self.roots)})"

    @property
    def simple_roots(self):
        return tuple(self.roots[i] for i in self.simple_root_indices)

    def simple_reflection(self, j) -> WeylElement:
        return reflection_element(self.simple_roots[j], 0).w

    def fundamental_weight(self, k):
        return tuple(1 if i == k else 0 for i in range(self.rank))


def build_root_system(type_spec: str) -> RootSystem:
    """Construct the root system for a product type spec like "A2" or "B3xA1".

    Roots are enumerated by closure of the simple roots under simple
    reflections; reducible specs produce block-diagonal Cartan and Gram data.
    """
    factors = parse_type_spec(type_spec)
    n = sum(r for _, r in factors)
    cartan = [[0] * n for _ in range(n)]
    lengths = []
    fact_meta = []
    off = 0
    for letter, r in factors:
        c, lens = _cartan_and_lengths(letter, r)
        for i in range(r):
            for j in range(r):
                cartan[off + i][off + j] = c[i][j]
        lengths.extend(lens)
        fact_meta.append((letter, r, off))
        off += r
    cartan = tuple(tuple(row) for row in cartan)
    lengths = tuple(lengths)
    gram = tuple(
        tuple(Fraction(2 * cartan[j][k], lengths[k]) for k in range(n))
        for j in range(n)
    )

    # simple root k: weight coords = column k of C, coroot coords = e_k
    simple = [
        Root(tuple(cartan[i][k] for i in range(n)),
             tuple(1 if i == k else 0 for i in range(n)),
             lengths[k])
        for k in range(n)
    ]
    refls = [reflection_element(v, 0).w for v in simple]

    roots = list(simple)
    seen = {r.weight_coords for r in roots}
    queue = list(simple)
    while queue:
        v = queue.pop()
        for s in refls:
            wcoords = s.apply_weight(v.weight_coords)
            if wcoords not in seen:
                seen.add(wcoords)
                img = Root(wcoords, s.apply_point(v.coroot_coords), v.length_sq)
                roots.append(img)
                queue.append(img)

    return RootSystem(type_spec, fact_meta, cartan, gram, lengths,
                      tuple(roots), tuple(range(n)))


# ---------------------------------------------------------------------------
# reflections, orbits, group enumeration
# ---------------------------------------------------------------------------

def reflect(v: Root, ell, x):
    """Affine reflection rho_{v,ell} applied to a point x in coroot
    coordinates: x - (<v,x> - ell) * v_coroot."""
    try:
        import numpy as np
        if isinstance(x, np.ndarray):
            if x.shape[-1] != len(v.weight_coords):
                raise DimensionError("point length does not match root rank")
            pairing = x @ np.array(v.weight_coords)
            return x - np.multiply.outer(pairing - ell, np.array(v.coroot_coords))
    except ImportError:  # pragma: no cover
        pass
    if len(x) != len(v.weight_coords):
        raise DimensionError("point length does not match root rank")
    pairing = dot(v.weight_coords, tuple(x))
    return tuple(a - (pairing - ell) * c for a, c in zip(x, v.coroot_coords))


def weyl_order_estimate(rs: RootSystem) -> int:
    est = 1
    for letter, r, _ in rs.factors:
        est *= weyl_order_for_factor(letter, r)
    return est


def weyl_group_elements(rs: RootSystem, cap: int = WEYL_CAP):
    """All Weyl group elements by breadth-first closure from the simple
    reflections.  Refuses when the (known) order exceeds the cap."""
    if rs._weyl_cache is not None:
        return rs._weyl_cache
    est = weyl_order_estimate(rs)
    if est > cap:
        raise CapExceededError(
            f"Weyl group of {rs.type_spec} has order {est}, above cap {cap}")
    gens = [rs.simple_reflection(j) for j in range(rs.rank)]
    ident = weyl_identity(rs.rank)
    elements = {ident.weight_matrix: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                cand = s.compose(w)
                if cand.weight_matrix not in elements:
                    elements[cand.weight_matrix] = cand
                    nxt.append(cand)
        frontier = nxt
    result = tuple(elements.values())
    rs._weyl_cache = result
    return result


def orbit(rs: RootSystem, lam) -> tuple:
    """The Weyl orbit of an integral weight, as a sorted tuple of weight
    coordinate vectors."""
    lam = tuple(lam)
    if lam in rs._orbit_cache:
        return rs._orbit_cache[lam]
    cols = [tuple(rs.cartan[i][j] for i in range(rs.rank)) for j in range(rs.rank)]
    seen = {lam}
    queue = [lam]
    while queue:
        mu = queue.pop()
        for j in range(rs.rank):
            if mu[j] == 0:
                continue
            img = tuple(m - mu[j] * c for m, c in zip(mu, cols[j]))
            if img not in seen:
                seen.add(img)
                queue.append(img)
    result = tuple(sorted(seen))
    rs._orbit_cache[lam] = result
    # orbits are Weyl-stable sets; cache under every member
    for mu in result:
        rs._orbit_cache.setdefault(mu, result)
    return result


def is_dominant(lam) -> bool:
    return all(c >= 0 for c in lam)


def dominant_rep(rs: RootSystem, lam):
    """The dominant representative of lam's orbit and one Weyl element
    mapping lam onto it.  Idempotent on dominant inputs."""
    lam = tuple(lam)
    w = weyl_identity(rs.rank)
    cols = [tuple(rs.cartan[i][j] for i in range(rs.rank)) for j in range(rs.rank)]
    guard = 0
    while True:
        j = next((k for k, c in enumerate(lam) if c < 0), None)
        if j is None:
            return lam, w
        lam = tuple(m - lam[j] * c for m, c in zip(lam, cols[j]))
        w = rs.simple_reflection(j).compose(w)
        guard += 1
        if guard > 100000:  # each step strictly raises the height
            raise RuntimeError("dominant_rep failed to terminate")


def positive_roots(rs: RootSystem):
    """Roots whose simple-root coefficients are nonnegative."""
    cinv = invert_fraction(rs.cartan)
    out = []
    for v in rs.roots:
        coeffs = mat_vec(cinv, v.weight_coords)
        if all(c >= 0 for c in coeffs):
            out.append(v)
    return tuple(out)


def highest_roots(rs: RootSystem):
    """The highest root of each irreducible factor (in factor order)."""
    cinv = invert_fraction(rs.cartan)
    result = []
    for letter, r, off in rs.factors:
        best = None
        best_h = None
        for v in rs.roots:
            coeffs = mat_vec(cinv, v.weight_coords)
            if any(c != 0 for i, c in enumerate(coeffs) if not off <= i < off + r):
                continue
            h = sum(coeffs)
            if best_h is None or h > best_h:
                best, best_h = v, h
        result.append(best)
    return tuple(result)


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: object = None


@dataclass
class AxiomReport:
    checks: list

    @property
    def all_pass(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {c.name: {"pass": c.passed, "witness": _json_safe(c.witness)}
                for c in self.checks}


def _json_safe(obj):
    if obj is None or isinstance(obj, (int, float, str, bool)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Root):
        return {"weight_coords": list(obj.weight_coords)}
    if isinstance(obj, (tuple, list)):
        return [_json_safe(x) for x in obj]
    return str(obj)


def inner_product(v: Root, w: Root) -> Fraction:
    """Exact inner product of two roots."""
    # w in the coroot basis is (length_sq/2) * coroot_coords
    return Fraction(w.length_sq, 2) * dot(v.weight_coords, w.coroot_coords)


def verify_axioms(rs: RootSystem) -> AxiomReport:
    """Check the four root-system axioms on exact data; failures carry a
    witness."""
    checks = []

    # span: n simple roots with linearly independent weight coordinates
    span_ok = len(rs.simple_root_indices) == rs.rank and det_fraction(rs.cartan) != 0
    checks.append(AxiomCheck("span", span_ok,
                             None if span_ok else rs.cartan))

    # scalar multiples: only +-v
    mult_ok, mult_wit = True, None
    index = {v.weight_coords for v in rs.roots}
    for v in rs.roots:
        for w in rs.roots:
            if v.weight_coords == w.weight_coords:
                continue
            # proportional weight vectors with ratio != -1?
            ratio = None
            ok = True
            for a, b in zip(v.weight_coords, w.weight_coords):
                if a == 0 and b == 0:
                    continue
                if a == 0 or b == 0:
                    ok = False
                    break
                r = Fraction(b, a)
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    ok = False
                    break
            if ok and ratio is not None and ratio != -1:
                mult_ok, mult_wit = False, (v, w)
                break
        if not mult_ok:
            break
    checks.append(AxiomCheck("multiples", mult_ok, mult_wit))

    # closure under reflections
    clo_ok, clo_wit = True, None
    for v in rs.roots:
        for w in rs.roots:
            img = vec_sub(w.weight_coords,
                          vec_scale(dot(w.weight_coords, v.coroot_coords),
                                    v.weight_coords))
            if img not in index:
                clo_ok, clo_wit = False, (v, w)
                break
        if not clo_ok:
            break
    checks.append(AxiomCheck("closure", clo_ok, clo_wit))

    # integrality of 2<v,w>/<v,v>, cross-checked against the stored coroot
    int_ok, int_wit = True, None
    for v in rs.roots:
        vv = inner_product(v, v)
        if vv != v.length_sq:
            int_ok, int_wit = False, (v, "length_sq mismatch")
            break
        for w in rs.roots:
            val = 2 * inner_product(v, w) / vv
            if val.denominator != 1 or val != dot(w.weight_coords, v.coroot_coords):
                int_ok, int_wit = False, (v, w)
                break
        if not int_ok:
            break
    checks.append(AxiomCheck("integrality", int_ok, int_wit))

    return AxiomReport(checks)
