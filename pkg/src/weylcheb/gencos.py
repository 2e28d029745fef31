"""Numerical evaluation of the generalized cosine, its Jacobian, wall
membership, and path lifting through the covering it defines off the
reflection-hyperplane arrangement.

Component k of the map is the sum of exp(2*pi*i*<lam, x>) over the Weyl orbit
of the k-th fundamental weight.  In rank one this is 2*cos(2*pi*x), the
t + 1/t normalization of the classical cosine (the two classical scalings are
dynamically conjugate, so downstream polynomial maps are unaffected).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContinuationError, DeckMatchError, DimensionError, NearSingularError
from .rootsys import (
    AffineElement,
    RootSystem,
    invert_fraction,
    mat_vec,
    orbit,
    weyl_group_elements,
)

TWO_PI_I = 2j * np.pi


@dataclass
class PathSample:
    """A discretized path: strictly increasing times in [0, 1] and one complex
    point (coroot coordinates) per time."""

    times: np.ndarray
    points: np.ndarray  # shape (m, n)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.points = np.asarray(self.points, dtype=complex)
        if self.points.ndim == 1:
            self.points = self.points[:, None]
        if abs(self.times[0]) > 1e-15 or abs(self.times[-1] - 1.0) > 1e-15:
            raise ValueError("path times must run from 0 to 1")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("path times must be strictly increasing")

    def at(self, t: float) -> np.ndarray:
        """Piecewise-linear interpolation."""
        ts = self.times
        if t <= ts[0]:
            return self.points[0]
        if t >= ts[-1]:
            return self.points[-1]
        i = int(np.searchsorted(ts, t))
        t0, t1 = ts[i - 1], ts[i]
        a = (t - t0) / (t1 - t0)
        return (1 - a) * self.points[i - 1] + a * self.points[i]


@dataclass
class LiftSettings:
    newton_tol: float = 1e-10
    max_newton_iters: int = 25
    initial_step: float = 1.0 / 64
    min_step: float = 1.0 / 65536
    jacobian_condition_cap: float = 1e8

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step <= 1):
            raise ValueError("need 0 < min_step <= initial_step <= 1")


def orbit_matrix(rs: RootSystem, k: int) -> np.ndarray:
    """Integer matrix whose rows are the orbit of the k-th fundamental
    weight (cached per root system)."""
    cached = rs._orbit_matrix_cache.get(k)
    if cached is None:
        cached = np.array(orbit(rs, rs.fundamental_weight(k)), dtype=np.int64)
        rs._orbit_matrix_cache[k] = cached
    return cached


def eval_gencos(rs: RootSystem, x) -> np.ndarray:
    """The generalized cosine at a complex point x (coroot coordinates)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (rs.rank,):
        raise DimensionError(f"point has shape {x.shape}, expected ({rs.rank},)")
    out = np.empty(rs.rank, dtype=complex)
    for k in range(rs.rank):
        out[k] = np.exp(TWO_PI_I * (orbit_matrix(rs, k) @ x)).sum()
    return out


def eval_gencos_fullsum(rs: RootSystem, x) -> np.ndarray:
    """Stabilizer-normalized full-Weyl-group sum; must agree with
    eval_gencos (cross-check of the two equivalent formulas)."""
    x = np.asarray(x, dtype=complex)
    elements = weyl_group_elements(rs)
    out = np.empty(rs.rank, dtype=complex)
    for k in range(rs.rank):
        wk = rs.fundamental_weight(k)
        images = np.array([w.apply_weight(wk) for w in elements], dtype=np.int64)
        total = np.exp(TWO_PI_I * (images @ x)).sum()
        stab = len(elements) // len(orbit_matrix(rs, k))
        out[k] = total / stab
    return out


def gencos_jacobian(rs: RootSystem, x) -> np.ndarray:
    """Jacobian matrix: entry (k, j) = 2*pi*i * sum_lam lam_j e^{2 pi i lam.x}."""
    x = np.asarray(x, dtype=complex)
    jac = np.empty((rs.rank, rs.rank), dtype=complex)
    for k in range(rs.rank):
        om = orbit_matrix(rs, k)
        ex = np.exp(TWO_PI_I * (om @ x))
        jac[k, :] = TWO_PI_I * (ex @ om)
    return jac


def regular_direction(rs: RootSystem):
    """The sum of the fundamental weights, in coroot coordinates: an interior
    point of the fundamental chamber, so it pairs nonzero with every root."""
    ginv = invert_fraction(rs.gram)
    ones = tuple([Fraction(1)] * rs.rank)
    return mat_vec(ginv, ones)


def is_on_diagram(rs: RootSystem, x, tol: float):
    """Whether x lies within tol of some reflection wall <v, x> = ell,
    ell integer.  Returns (bool, witness) with witness = (root, ell)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=complex)
    for v in rs.roots:
        p = complex(np.dot(np.array(v.weight_coords), x))
        if abs(p.imag) > tol:
            continue
        ell = int(round(p.real))
        if abs(p - ell) <= tol:
            return True, (v, ell)
    return False, None


def lift_path(rs: RootSystem, target_path: PathSample, y_start,
              settings: LiftSettings | None = None) -> PathSample:
    """Lift a path through the generalized cosine by predictor-corrector
    Newton continuation, starting from a known preimage of the path's start.

    Steps halve on Newton divergence down to min_step (ContinuationError
    beyond that); a Jacobian condition estimate above the cap raises
    NearSingularError, signalling that the path strayed too close to the
    walls or their image.
    """
    settings = settings or LiftSettings()
    y = np.asarray(y_start, dtype=complex).copy()
    start_res = np.abs(eval_gencos(rs, y) - target_path.at(0.0)).max()
    if start_res > max(settings.newton_tol, 1e-12) * 10:
        raise ValueError(f"y_start is not a preimage of the path start "
                         f"(residual {start_res:.3e})")
    on, wit = is_on_diagram(rs, y, 1e-9)
    if on:
        raise ValueError(f"y_start lies on a reflection wall {wit}")

    times = [0.0]
    points = [y.copy()]
    t = 0.0
    step = settings.initial_step
    while t < 1.0 - 1e-15:
        h = min(step, 1.0 - t)
        target = target_path.at(t + h)
        y_new, ok = _newton(rs, y, target, settings)
        if ok:
            t += h
            y = y_new
            times.append(t)
            points.append(y.copy())
            step = min(settings.initial_step, step * 2.0)
        else:
            step *= 0.5
            if step < settings.min_step:
                raise ContinuationError(
                    f"continuation stalled at t={t:.6f} (step below "
                    f"{settings.min_step})")
    times[-1] = 1.0
    return PathSample(np.array(times), np.array(points))


def _newton(rs: RootSystem, y0: np.ndarray, target: np.ndarray,
            settings: LiftSettings):
    y = y0.copy()
    for _ in range(settings.max_newton_iters):
        res = eval_gencos(rs, y) - target
        if np.abs(res).max() <= settings.newton_tol:
            jac = gencos_jacobian(rs, y)
            # the plain condition number is blind in rank one (it is 1 for
            # every nonzero 1x1 matrix); the inverse norm catches walls there
            badness = max(np.linalg.cond(jac, 1),
                          np.linalg.norm(np.linalg.inv(jac), 1))
            if badness > settings.jacobian_condition_cap:
                raise NearSingularError(
                    "Jacobian condition estimate above cap along the lift")
            return y, True
        jac = gencos_jacobian(rs, y)
        try:
            delta = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError:
            return y, False
        if not np.all(np.isfinite(delta)) or np.abs(delta).max() > 0.5:
            # left the basin; let the caller shrink the step
            return y, False
        y = y - delta
    return y, False


def deck_identify(rs: RootSystem, y0, y1, tol: float = 1e-7) -> AffineElement:
    """Find the affine Weyl element g with g(y0) = y1, assuming y0 and y1 lie
    in one fiber of the generalized cosine.  The translation part must round
    to an exact integer vector within tol."""
    y0 = np.asarray(y0, dtype=complex)
    y1 = np.asarray(y1, dtype=complex)
    for w in weyl_group_elements(rs):
        r = y1 - np.array(w.coroot_matrix) @ y0
        if np.abs(r.imag).max() > tol:
            continue
        t = np.round(r.real).astype(int)
        if np.abs(r - t).max() <= tol:
            return AffineElement(tuple(int(c) for c in t), w)
    raise DeckMatchError(
        "no affine Weyl element maps y0 to y1 within tolerance "
        f"{tol} (points may lie in different fibers)")
